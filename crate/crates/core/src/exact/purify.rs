use crate::error::{Error, Result};
use crate::exact::density::DensityMatrix;
use crate::linalg::{ComplexMatrix, C64};
use crate::pauli::PauliString;

/// Per-side cap for explicit purification vectors (4096 amplitudes).
pub const MAX_CP_QUBITS: usize = 6;

const NORM_TOL: f64 = 1e-10;

/// Pure state on a doubled register `L0..L(n−1), R0..R(n−1)`. Amplitude
/// `l·2ⁿ + r` multiplies `|l⟩_L |r⟩_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedVector {
    n: usize,
    amps: Vec<C64>,
}

impl PurifiedVector {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        if n > MAX_CP_QUBITS {
            return Err(Error::SizeLimit {
                what: "purification qubits per side",
                requested: n,
                limit: MAX_CP_QUBITS,
            });
        }
        if amps.len() != 1usize << (2 * n) {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n} qubits per side",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("vector norm² {norm} is not 1")));
        }
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitudes as a `2ⁿ × 2ⁿ` matrix `Ψ[l, r]`.
    pub fn as_matrix(&self) -> ComplexMatrix {
        let d = 1usize << self.n;
        ComplexMatrix::from_fn(d, d, |l, r| self.amps[l * d + r])
    }

    /// `tr_R |ψ⟩⟨ψ| = Ψ Ψ†`.
    pub fn partial_trace_right(&self) -> ComplexMatrix {
        let psi = self.as_matrix();
        &psi * psi.adjoint()
    }

    /// `⟨ψ|P|ψ⟩` for `P` on all `2n` qubits.
    pub fn expectation(&self, p: &PauliString) -> C64 {
        assert_eq!(p.n_qubits(), 2 * self.n);
        let pv = p.apply_dense(&self.amps);
        self.amps.iter().zip(&pv).map(|(a, b)| a.conj() * b).sum()
    }

    /// `⟨O^L⟩`.
    pub fn left_expectation(&self, o: &PauliString) -> C64 {
        self.expectation(&o.tensor(&PauliString::identity(self.n)))
    }

    /// `⟨O₁^L Ō₂^R⟩` with `Ō = 1 ⊗ O*` acting on the right copy.
    pub fn two_sided(&self, o1: &PauliString, o2: &PauliString) -> C64 {
        self.expectation(&o1.tensor(&o2.conj()))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &[C64]) -> C64 {
        self.amps.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `|√ρ⟩⟩ = (√ρ ⊗ 1) Σ_s |s⟩|s⟩` in the computational basis; the amplitude
/// matrix is `√ρ` itself.
pub fn canonical_purification(rho: &DensityMatrix) -> Result<PurifiedVector> {
    let n = rho.n_qubits();
    if n > MAX_CP_QUBITS {
        return Err(Error::SizeLimit {
            what: "purification qubits per side",
            requested: n,
            limit: MAX_CP_QUBITS,
        });
    }
    let s = rho.sqrt();
    let d = rho.dim();
    let amps = (0..d * d).map(|i| s[(i / d, i % d)]).collect();
    PurifiedVector::new(n, amps)
}
