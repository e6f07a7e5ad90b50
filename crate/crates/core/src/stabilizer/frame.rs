use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};
use crate::stabilizer::group::StabilizerMixedState;

/// Symplectic partners of a stabilizer group: one destabilizer `h_a` per
/// generator `g_a` and `k` logical pairs `(𝒵_n, 𝒳_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DestabilizerFrame {
    destabilizers: Vec<PauliString>,
    logicals: Vec<(PauliString, PauliString)>,
}

/// Single-qubit basis element `e_j`: `X_j` for `j < n`, `Z_{j−n}` otherwise.
fn basis(n: usize, j: usize) -> PauliString {
    if j < n {
        PauliString::single(n, j, Letter::X)
    } else {
        PauliString::single(n, j - n, Letter::Z)
    }
}

/// Bits `⟨g, e_j⟩` for `j ∈ 0..2n`.
fn partner_row(g: &PauliString) -> Vec<u64> {
    let n = g.n_qubits();
    let mut row = vec![0u64; (2 * n).div_ceil(64)];
    for q in 0..n {
        if g.z_bit(q) {
            row[q / 64] |= 1 << (q % 64);
        }
        if g.x_bit(q) {
            row[(n + q) / 64] |= 1 << ((n + q) % 64);
        }
    }
    row
}

fn bit(row: &[u64], j: usize) -> bool {
    (row[j / 64] >> (j % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= b;
    }
}

/// Frame elements carry the `+1` Hermitian phase.
fn hermitian_plus(p: PauliString) -> PauliString {
    p.with_phase(0)
}

impl DestabilizerFrame {
    /// Builds the frame by GF(2) elimination followed by symplectic
    /// Gram–Schmidt on the single-qubit basis.
    pub fn compute(state: &StabilizerMixedState) -> Result<Self> {
        let n = state.n_qubits();
        let gens = state.generators();
        let m = gens.len();

        // Row-reduce the m × 2n partner matrix, tracking the row operations.
        let mut rows: Vec<Vec<u64>> = gens.iter().map(partner_row).collect();
        let mut ops: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut t = vec![0u64; m.div_ceil(64).max(1)];
                t[i / 64] |= 1 << (i % 64);
                t
            })
            .collect();
        let mut pivots = Vec::with_capacity(m);
        let mut cur = 0;
        for col in 0..2 * n {
            if cur == m {
                break;
            }
            let Some(r) = (cur..m).find(|&r| bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(cur, r);
            ops.swap(cur, r);
            for r in 0..m {
                if r != cur && bit(&rows[r], col) {
                    let (src, t) = (rows[cur].clone(), ops[cur].clone());
                    xor_into(&mut rows[r], &src);
                    xor_into(&mut ops[r], &t);
                }
            }
            pivots.push(col);
            cur += 1;
        }
        if pivots.len() != m {
            return Err(Error::InconsistentFrame("generators are dependent".into()));
        }

        // h_a = ∏_i e_{c_i}^{T_ia} so that ⟨g_b, h_a⟩ = δ_ab.
        let mut destab: Vec<PauliString> = (0..m)
            .map(|a| {
                let mut h = PauliString::identity(n);
                for (i, &c) in pivots.iter().enumerate() {
                    if bit(&ops[i], a) {
                        h.mul_assign_right(&basis(n, c));
                    }
                }
                h
            })
            .collect();
        for a in 0..m {
            for b in 0..a {
                if destab[a].anticommutes_with(&destab[b]) {
                    destab[a].mul_assign_right(&gens[b]);
                }
            }
        }
        let destab: Vec<PauliString> = destab.into_iter().map(hermitian_plus).collect();

        // Project every basis element off the (g, h) pairs, then pair up.
        let project = |w: &PauliString, pairs: &[(PauliString, PauliString)]| {
            let mut w = w.clone();
            for (g, h) in gens.iter().zip(&destab).chain(pairs.iter().map(|(a, b)| (a, b))) {
                let (wg, wh) = (w.anticommutes_with(g), w.anticommutes_with(h));
                if wh {
                    w.mul_assign_right(g);
                }
                if wg {
                    w.mul_assign_right(h);
                }
            }
            w
        };
        let pool: Vec<PauliString> = (0..2 * n).map(|j| basis(n, j)).collect();
        let mut logicals: Vec<(PauliString, PauliString)> = Vec::new();
        let k = n - m;
        while logicals.len() < k {
            let found = (0..pool.len()).find_map(|i| {
                let u = project(&pool[i], &logicals);
                if u.is_identity_up_to_phase() {
                    return None;
                }
                (0..pool.len()).filter(|&j| j != i).find_map(|j| {
                    let v = project(&pool[j], &logicals);
                    v.anticommutes_with(&u).then(|| (u.clone(), v))
                })
            });
            let Some((u, v)) = found else {
                return Err(Error::InconsistentFrame("logical pairing failed".into()));
            };
            logicals.push((hermitian_plus(u), hermitian_plus(v)));
        }
        Ok(Self {
            destabilizers: destab,
            logicals,
        })
    }

    /// Takes a user-supplied frame and checks it against `state`.
    pub fn new(
        state: &StabilizerMixedState,
        destabilizers: Vec<PauliString>,
        logicals: Vec<(PauliString, PauliString)>,
    ) -> Result<Self> {
        let f = Self {
            destabilizers,
            logicals,
        };
        f.check(state)?;
        Ok(f)
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Logical pairs `(𝒵_n, 𝒳_n)`.
    pub fn logicals(&self) -> &[(PauliString, PauliString)] {
        &self.logicals
    }

    /// Verifies the full symplectic pairing against `state`.
    pub fn check(&self, state: &StabilizerMixedState) -> Result<()> {
        let gens = state.generators();
        let n = state.n_qubits();
        if self.destabilizers.len() != gens.len() || self.logicals.len() != state.logical_count() {
            return Err(Error::InconsistentFrame(format!(
                "{} destabilizers and {} logical pairs for {} generators on {n} qubits",
                self.destabilizers.len(),
                self.logicals.len(),
                gens.len()
            )));
        }
        // Flatten into partner pairs; element 2i anticommutes only with 2i+1.
        let mut all = Vec::with_capacity(2 * n);
        for (g, h) in gens.iter().zip(&self.destabilizers) {
            all.push(g);
            all.push(h);
        }
        for (z, x) in &self.logicals {
            all.push(z);
            all.push(x);
        }
        for p in &all {
            if p.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: p.n_qubits(),
                });
            }
            if !p.is_hermitian() {
                return Err(Error::InconsistentFrame(format!("{p} is not Hermitian")));
            }
        }
        for i in 0..all.len() {
            for j in 0..i {
                let want = j + 1 == i && j % 2 == 0;
                if all[i].anticommutes_with(all[j]) != want {
                    return Err(Error::InconsistentFrame(format!(
                        "{} and {} have the wrong commutation",
                        all[j], all[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Generators of the canonical purification on `2N` qubits (left block
/// `0..N`, right block `N..2N`): `g_a^L`, `ḡ_a^R`, `𝒵_n^L 𝒵̄_n^R` and
/// `𝒳_n^L 𝒳̄_n^R`.
pub fn canonical_purification_generators(
    state: &StabilizerMixedState,
    frame: &DestabilizerFrame,
) -> Result<StabilizerMixedState> {
    frame.check(state)?;
    let n = state.n_qubits();
    let left = |p: &PauliString| p.embed(2 * n, 0);
    let right = |p: &PauliString| p.conj().embed(2 * n, n);
    let mut out = Vec::with_capacity(2 * n);
    out.extend(state.generators().iter().map(left));
    out.extend(state.generators().iter().map(right));
    for (z, _) in frame.logicals() {
        out.push(left(z).mul(&right(z)));
    }
    for (_, x) in frame.logicals() {
        out.push(left(x).mul(&right(x)));
    }
    StabilizerMixedState::new(2 * n, out)
}

/// Canonical purification with a freshly computed frame.
pub fn canonical_purification_of(state: &StabilizerMixedState) -> Result<StabilizerMixedState> {
    canonical_purification_generators(state, &DestabilizerFrame::compute(state)?)
}
