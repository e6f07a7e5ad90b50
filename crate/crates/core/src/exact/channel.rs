use crate::error::{Error, Result};
use crate::exact::density::DensityMatrix;
use crate::linalg::{ComplexMatrix, C64};
use crate::pauli::{Letter, PauliString};

const PROBABILITY_TOL: f64 = 1e-12;

/// `ρ ↦ Σ_e p_e e ρ e†` over Pauli strings `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliChannel {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidChannel("no Kraus terms".into()));
        };
        let n = first.n_qubits();
        let mut total = 0.0;
        for (p, e) in &terms {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidChannel(format!("probability {p} for {e}")));
            }
            if e.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: e.n_qubits(),
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidChannel(format!("probabilities sum to {total}")));
        }
        Ok(Self { n, terms })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            terms: vec![(1.0, PauliString::identity(n))],
        }
    }

    /// `(1 − p) ρ + p Z_i Z_j ρ Z_i Z_j`.
    pub fn zz_dephasing(n: usize, i: usize, j: usize, p: f64) -> Result<Self> {
        let zz = PauliString::single(n, i, Letter::Z).mul(&PauliString::single(n, j, Letter::Z));
        Self::new(vec![(1.0 - p, PauliString::identity(n)), (p, zz)])
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }
}

pub fn apply_channel(rho: &DensityMatrix, ch: &PauliChannel) -> Result<DensityMatrix> {
    if ch.n != rho.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: rho.n_qubits(),
            found: ch.n,
        });
    }
    let dim = rho.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (p, e) in &ch.terms {
        if *p == 0.0 {
            continue;
        }
        out += e.conjugate_dense(rho.matrix()) * C64::from(*p);
    }
    Ok(DensityMatrix::from_trusted(rho.n_qubits(), out))
}

/// Applies the channels in order.
pub fn apply_channels(rho: &DensityMatrix, chs: &[PauliChannel]) -> Result<DensityMatrix> {
    let mut cur = rho.clone();
    for ch in chs {
        cur = apply_channel(&cur, ch)?;
    }
    Ok(cur)
}
