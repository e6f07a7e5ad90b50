use crate::error::{Error, Result};
use crate::exact::density::DensityMatrix;
use crate::exact::diagnostics::ChargedOp;
use crate::linalg::{max_row_sum_norm, ComplexMatrix, C64};
use crate::pauli::PauliString;

const SYMMETRY_TOL: f64 = 1e-9;

/// A symmetry generator `U_g` with its expected strong phase `e^{iφ_g}`.
#[derive(Debug, Clone)]
pub struct SymmetrySpec {
    unitary: ChargedOp,
    pub expected_phase: C64,
}

impl SymmetrySpec {
    pub fn pauli(u: PauliString, expected_phase: C64) -> Self {
        Self {
            unitary: ChargedOp::Pauli(u),
            expected_phase,
        }
    }

    pub fn dense(u: ComplexMatrix, expected_phase: C64) -> Result<Self> {
        Ok(Self {
            unitary: ChargedOp::dense(u)?,
            expected_phase,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub is_strong: bool,
    pub is_weak: bool,
    /// `tr[U ρ²] / tr ρ²`, the phase when the symmetry is strong.
    pub phase: C64,
    pub phase_matches: bool,
}

pub fn check_strong_symmetry(rho: &DensityMatrix, sym: &SymmetrySpec) -> Result<SymmetryCheck> {
    let m = rho.matrix();
    let dim = rho.dim();
    let u_dim = match &sym.unitary {
        ChargedOp::Pauli(p) => 1usize << p.n_qubits(),
        ChargedOp::Dense(u) => u.nrows(),
    };
    if u_dim != dim {
        return Err(Error::QubitMismatch {
            expected: rho.n_qubits(),
            found: u_dim.trailing_zeros() as usize,
        });
    }
    let u_rho = sym.unitary.left_mul(m);
    let phase = (&u_rho * m).trace() / C64::from(rho.purity());
    let is_strong = (phase.norm() - 1.0).abs() < SYMMETRY_TOL
        && max_row_sum_norm(&(&u_rho - m * phase)) < SYMMETRY_TOL;
    let is_weak = max_row_sum_norm(&(sym.unitary.conjugate(m) - m)) < SYMMETRY_TOL;
    Ok(SymmetryCheck {
        is_strong,
        is_weak,
        phase,
        phase_matches: (phase - sym.expected_phase).norm() < SYMMETRY_TOL,
    })
}
