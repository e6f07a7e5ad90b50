//! Stabilizer tableau with destabilizer rows.
//!
//! Rows are Hermitian Pauli strings; Clifford gates act by conjugation and
//! Pauli measurements follow the usual destabilizer bookkeeping.

use rand::Rng;

use crate::error::Result;
use crate::pauli::{Letter, PauliString};
use crate::stabilizer::group::StabilizerMixedState;

/// `P ← H_q P H_q`.
pub fn conj_h(p: &mut PauliString, q: usize) {
    let (x, z) = (p.x_bit(q), p.z_bit(q));
    if x && z {
        p.rotate_phase(2);
    }
    if x != z {
        p.flip_x(q);
        p.flip_z(q);
    }
}

/// `P ← S_q P S_q†`.
pub fn conj_s(p: &mut PauliString, q: usize) {
    if p.x_bit(q) {
        if p.z_bit(q) {
            p.rotate_phase(2);
        }
        p.flip_z(q);
    }
}

/// `P ← CX P CX` with control `c` and target `t`.
pub fn conj_cx(p: &mut PauliString, c: usize, t: usize) {
    let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
    if xc && zt && (xt == zc) {
        p.rotate_phase(2);
    }
    if xc {
        p.flip_x(t);
    }
    if zt {
        p.flip_z(c);
    }
}

#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    stabs: Vec<PauliString>,
    destabs: Vec<PauliString>,
}

impl Tableau {
    /// `|0⟩^⊗n`.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            stabs: (0..n).map(|q| PauliString::single(n, q, Letter::Z)).collect(),
            destabs: (0..n).map(|q| PauliString::single(n, q, Letter::X)).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabs
    }

    fn rows_mut(&mut self) -> impl Iterator<Item = &mut PauliString> {
        self.stabs.iter_mut().chain(self.destabs.iter_mut())
    }

    pub fn h(&mut self, q: usize) {
        self.rows_mut().for_each(|p| conj_h(p, q));
    }

    pub fn s(&mut self, q: usize) {
        self.rows_mut().for_each(|p| conj_s(p, q));
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        self.rows_mut().for_each(|p| conj_cx(p, c, t));
    }

    /// Conjugation by the Pauli `e`; only stabilizer signs change.
    pub fn apply_pauli(&mut self, e: &PauliString) {
        for p in &mut self.stabs {
            if p.anticommutes_with(e) {
                p.rotate_phase(2);
            }
        }
    }

    /// Measures the Hermitian Pauli `m` and returns the outcome bit
    /// (eigenvalue `(−1)^bit`).
    pub fn measure<R: Rng + ?Sized>(&mut self, m: &PauliString, rng: &mut R) -> bool {
        let hermitian = m.clone().with_phase(m.phase_exponent() & 2);
        if let Some(p) = self.stabs.iter().position(|s| s.anticommutes_with(&hermitian)) {
            let pivot = self.stabs[p].clone();
            for i in 0..self.n {
                if i != p && self.stabs[i].anticommutes_with(&hermitian) {
                    self.stabs[i].mul_assign_right(&pivot);
                }
                if self.destabs[i].anticommutes_with(&hermitian) {
                    let d = &mut self.destabs[i];
                    d.mul_assign_right(&pivot);
                    let e = d.phase_exponent() & 2;
                    *d = d.clone().with_phase(e);
                }
            }
            self.destabs[p] = pivot;
            let bit: bool = rng.random();
            self.stabs[p] = if bit { hermitian.negate() } else { hermitian };
            bit
        } else {
            // m is ± the product of the stabilizers whose destabilizers
            // anticommute with it.
            let mut prod = PauliString::identity(self.n);
            for i in 0..self.n {
                if self.destabs[i].anticommutes_with(&hermitian) {
                    prod.mul_assign_right(&self.stabs[i]);
                }
            }
            prod.phase_exponent() != hermitian.phase_exponent()
        }
    }

    pub fn to_state(&self) -> Result<StabilizerMixedState> {
        StabilizerMixedState::new(self.n, self.stabs.clone())
    }
}

/// Random stabilizer state with `k` logical qubits: a random Clifford word
/// applied to `|0⟩^⊗n` with random signs, keeping `n − k` generators.
pub fn random_stabilizer_state<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<StabilizerMixedState> {
    assert!(k <= n);
    let mut t = Tableau::zero(n);
    for _ in 0..(4 * n * n + 8) {
        let q = rng.random_range(0..n);
        match rng.random_range(0..3) {
            0 => t.h(q),
            1 => t.s(q),
            _ if n > 1 => {
                let mut r = rng.random_range(0..n - 1);
                if r >= q {
                    r += 1;
                }
                t.cx(q, r);
            }
            _ => t.h(q),
        }
    }
    for q in 0..n {
        if rng.random() {
            t.apply_pauli(&PauliString::single(n, q, Letter::X));
        }
    }
    StabilizerMixedState::new(n, t.stabs[..n - k].to_vec())
}
