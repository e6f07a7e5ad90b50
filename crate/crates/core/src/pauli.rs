//! Pauli strings `i^k P_0 ⊗ … ⊗ P_{n−1}` in binary symplectic form.
//!
//! Dense matrices use big-endian qubit order: qubit `q` of an `n`-qubit
//! register is bit `n − 1 − q` of the basis index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    // power of i
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: 0,
        }
    }

    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(q, letter);
        p
    }

    pub fn from_sites(n: usize, sites: &[(usize, Letter)]) -> Self {
        let mut p = Self::identity(n);
        for &(q, l) in sites {
            p.set(q, l);
        }
        p
    }

    /// Product of `letter` over `sites`.
    pub fn uniform(n: usize, sites: impl IntoIterator<Item = usize>, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        for q in sites {
            p.set(q, letter);
        }
        p
    }

    /// Builds from raw symplectic words; `phase` is a power of `i`.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        assert_eq!(x.len(), words(n));
        assert_eq!(z.len(), words(n));
        let mut p = Self {
            n,
            x,
            z,
            phase: phase % 4,
        };
        p.mask_tail();
        p
    }

    fn mask_tail(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            let m = (1u64 << r) - 1;
            if let Some(w) = self.x.last_mut() {
                *w &= m;
            }
            if let Some(w) = self.z.last_mut() {
                *w &= m;
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn phase(&self) -> C64 {
        [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][self.phase as usize]
    }

    pub fn with_phase(mut self, exponent: u8) -> Self {
        self.phase = exponent % 4;
        self
    }

    pub fn negate(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    /// Multiplies by `i^k` in place.
    pub fn rotate_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    pub fn letter(&self, q: usize) -> Letter {
        let (w, b) = (q / 64, q % 64);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn flip_x(&mut self, q: usize) {
        self.x[q / 64] ^= 1 << (q % 64);
    }

    pub fn flip_z(&mut self, q: usize) {
        self.z[q / 64] ^= 1 << (q % 64);
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    pub fn count_y(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Symplectic form: `true` iff the two strings anticommute.
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !self.anticommutes_with(other)
    }

    /// `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n, other.n, "pauli strings act on different registers");
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        let mut g: i32 = 0;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            let mut both = (x1 | z1) & (x2 | z2);
            while both != 0 {
                let b = both.trailing_zeros();
                both &= both - 1;
                let bit = |v: u64| ((v >> b) & 1) as i32;
                let (a1, c1, a2, c2) = (bit(x1), bit(z1), bit(x2), bit(z2));
                g += match (a1, c1) {
                    (1, 1) => c2 - a2,
                    (1, 0) => c2 * (2 * a2 - 1),
                    (0, 1) => a2 * (1 - 2 * c2),
                    _ => 0,
                };
            }
            self.x[w] ^= x2;
            self.z[w] ^= z2;
        }
        self.phase = ((self.phase as i32 + other.phase as i32 + g).rem_euclid(4)) as u8;
    }

    pub fn adjoint(&self) -> PauliString {
        let mut p = self.clone();
        p.phase = (4 - p.phase) % 4;
        p
    }

    /// Entrywise complex conjugate: `Y* = −Y`, phase conjugated.
    pub fn conj(&self) -> PauliString {
        let mut p = self.adjoint();
        if self.count_y() % 2 == 1 {
            p.phase = (p.phase + 2) % 4;
        }
        p
    }

    /// Places this string on qubits `offset..offset + n` of a larger register.
    pub fn embed(&self, total: usize, offset: usize) -> PauliString {
        assert!(offset + self.n <= total);
        let mut p = PauliString::identity(total);
        for q in 0..self.n {
            p.set(offset + q, self.letter(q));
        }
        p.phase = self.phase;
        p
    }

    /// Restriction to qubits `offset..offset + len`, phase dropped.
    pub fn restrict(&self, offset: usize, len: usize) -> PauliString {
        let mut p = PauliString::identity(len);
        for q in 0..len {
            p.set(q, self.letter(offset + q));
        }
        p
    }

    /// `self ⊗ other` on `n + m` qubits.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let total = self.n + other.n;
        let mut p = self.embed(total, 0);
        for q in 0..other.n {
            p.set(self.n + q, other.letter(q));
        }
        p.phase = (self.phase + other.phase) % 4;
        p
    }

    fn dense_masks(&self) -> (usize, usize) {
        assert!(self.n < usize::BITS as usize, "register too large for dense masks");
        let (mut xm, mut zm) = (0usize, 0usize);
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    fn dense_prefactor(&self) -> C64 {
        let e = (self.phase as usize + self.count_y()) % 4;
        PauliString::identity(0).with_phase(e as u8).phase()
    }

    /// `P|b⟩ = c |b'⟩`, returned as `(b', c)`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, C64) {
        let (xm, zm) = self.dense_masks();
        let c = self.dense_prefactor();
        let sign = if (b & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (b ^ xm, c * sign)
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let (xm, zm) = self.dense_masks();
        let c = self.dense_prefactor();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for b in 0..dim {
            let s = if (b & zm).count_ones() % 2 == 1 { -c } else { c };
            m[(b ^ xm, b)] = s;
        }
        m
    }

    /// `P m P†` without forming `P`.
    pub fn conjugate_dense(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let dim = m.nrows();
        assert_eq!(dim, 1usize << self.n);
        let (xm, zm) = self.dense_masks();
        let sign = |b: usize| if (b & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        ComplexMatrix::from_fn(dim, dim, |a, b| {
            let (a2, b2) = (a ^ xm, b ^ xm);
            m[(a2, b2)] * (sign(a2) * sign(b2))
        })
    }

    /// `P m`.
    pub fn left_mul_dense(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let dim = m.nrows();
        assert_eq!(dim, 1usize << self.n);
        let (xm, zm) = self.dense_masks();
        let c = self.dense_prefactor();
        ComplexMatrix::from_fn(dim, m.ncols(), |a, b| {
            let a2 = a ^ xm;
            let s = if (a2 & zm).count_ones() % 2 == 1 { -c } else { c };
            m[(a2, b)] * s
        })
    }

    /// `P v` for a state vector.
    pub fn apply_dense(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), 1usize << self.n);
        let (xm, zm) = self.dense_masks();
        let c = self.dense_prefactor();
        let mut out = vec![C64::from(0.0); v.len()];
        for (b, &amp) in v.iter().enumerate() {
            let s = if (b & zm).count_ones() % 2 == 1 { -c } else { c };
            out[b ^ xm] = amp * s;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]XYZI…`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = match s.as_bytes().first() {
            Some(b'+') => (0u8, &s[1..]),
            Some(b'-') => (2u8, &s[1..]),
            _ => (0u8, s),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (1u8, r),
            None => (0u8, rest),
        };
        let mut p = PauliString::identity(rest.len());
        for (q, ch) in rest.chars().enumerate() {
            let l = match ch {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "bad Pauli letter {other:?} in {s:?}"
                    )))
                }
            };
            p.set(q, l);
        }
        p.phase = (sign + imag) % 4;
        Ok(p)
    }
}
