use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::exact::{check_dense_size, DensityMatrix};
use crate::linalg::{ComplexMatrix, C64};
use crate::pauli::PauliString;

/// Index of the first set symplectic bit: `q` for an X component on qubit
/// `q`, `n + q` for a Z component.
pub(crate) fn pivot(p: &PauliString) -> Option<usize> {
    let n = p.n_qubits();
    for (part, words) in [p.x_words(), p.z_words()].into_iter().enumerate() {
        for (w, &word) in words.iter().enumerate() {
            if word != 0 {
                return Some(part * n + 64 * w + word.trailing_zeros() as usize);
            }
        }
    }
    None
}

pub(crate) fn has_bit(p: &PauliString, idx: usize) -> bool {
    let n = p.n_qubits();
    if idx < n {
        p.x_bit(idx)
    } else {
        p.z_bit(idx - n)
    }
}

#[derive(Debug, Clone)]
struct Row {
    pivot: usize,
    pauli: PauliString,
    combo: BitSet,
}

/// Incremental GF(2) row echelon form over Pauli strings. Each row remembers
/// which inserted strings it is the product of.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    rows: Vec<Row>,
    tags: usize,
}

impl Echelon {
    pub fn new(tags: usize) -> Self {
        Self {
            rows: Vec::new(),
            tags,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `p · ∏ rows` with every row pivot cleared, and the tags involved.
    pub fn reduce(&self, p: &PauliString) -> (PauliString, BitSet) {
        let mut r = p.clone();
        let mut combo = BitSet::new(self.tags);
        for row in &self.rows {
            if has_bit(&r, row.pivot) {
                r.mul_assign_right(&row.pauli);
                combo.xor_with(&row.combo);
            }
        }
        (r, combo)
    }

    /// Inserts `p` under `tag`; false when it is already in the span.
    pub fn insert(&mut self, p: &PauliString, tag: usize) -> bool {
        let (r, mut combo) = self.reduce(p);
        let Some(pivot) = pivot(&r) else {
            return false;
        };
        combo.flip(tag);
        self.rows.push(Row {
            pivot,
            pauli: r,
            combo,
        });
        true
    }
}

/// `ρ = 2^{−k} ∏_a (1 + g_a)/2` for independent commuting Hermitian `g_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerMixedState {
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerMixedState {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: g.n_qubits(),
                });
            }
            if g.phase_exponent() % 2 == 1 {
                return Err(Error::InvalidStabilizer(format!("{g} is not Hermitian")));
            }
        }
        for a in 0..generators.len() {
            for b in 0..a {
                if generators[a].anticommutes_with(&generators[b]) {
                    return Err(Error::InvalidStabilizer(format!(
                        "{} and {} anticommute",
                        generators[b], generators[a]
                    )));
                }
            }
        }
        let mut ech = Echelon::new(generators.len());
        for (a, g) in generators.iter().enumerate() {
            if !ech.insert(g, a) {
                return Err(Error::InvalidStabilizer(format!("generator {g} is dependent")));
            }
        }
        Ok(Self { n, generators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_count(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn is_pure(&self) -> bool {
        self.logical_count() == 0
    }

    /// Whether `p` (with its sign) lies in the stabilizer group.
    pub fn contains(&self, p: &PauliString) -> bool {
        let mut ech = Echelon::new(self.generators.len());
        for (a, g) in self.generators.iter().enumerate() {
            ech.insert(g, a);
        }
        let (r, _) = ech.reduce(p);
        r.is_identity_up_to_phase() && r.phase_exponent() == 0
    }

    /// Equality of the generated groups, signs included.
    pub fn same_group(&self, other: &StabilizerMixedState) -> bool {
        same_group(&self.generators, &other.generators)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(self.n, self.projector()?
            / C64::from(2f64.powi(self.logical_count() as i32))))
    }

    fn projector(&self) -> Result<ComplexMatrix> {
        check_dense_size(self.n)?;
        let d = 1usize << self.n;
        let mut m = ComplexMatrix::identity(d, d);
        for g in &self.generators {
            m = (&m + g.left_mul_dense(&m)) * C64::from(0.5);
        }
        Ok(m)
    }

    /// State vector of a pure state, up to a global phase.
    pub fn state_vector(&self) -> Result<Vec<C64>> {
        if !self.is_pure() {
            return Err(Error::InvalidStabilizer(format!(
                "{} logical qubits, state is not pure",
                self.logical_count()
            )));
        }
        let m = self.projector()?;
        let col = (0..m.ncols())
            .max_by(|&a, &b| m[(a, a)].re.total_cmp(&m[(b, b)].re))
            .unwrap_or(0);
        let norm = m[(col, col)].re.sqrt();
        Ok(m.column(col).iter().map(|a| a / norm).collect())
    }
}

/// Equality of `⟨a⟩` and `⟨b⟩` by reducing each generator of `b` against an
/// echelon form of `a`; every residual must be `+I`.
pub fn same_group(a: &[PauliString], b: &[PauliString]) -> bool {
    let mut ech = Echelon::new(a.len());
    for (i, g) in a.iter().enumerate() {
        ech.insert(g, i);
    }
    let mut other = Echelon::new(b.len());
    for (i, g) in b.iter().enumerate() {
        other.insert(g, i);
    }
    if ech.rank() != other.rank() {
        return false;
    }
    b.iter().all(|g| {
        let (r, _) = ech.reduce(g);
        r.is_identity_up_to_phase() && r.phase_exponent() == 0
    })
}
