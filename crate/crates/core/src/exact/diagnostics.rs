//! Dense evaluation of the five correlators between ρ and `O ρ O†`.

use crate::diag::{Correlators, ExtendedReal};
use crate::error::{Error, Result};
use crate::exact::density::DensityMatrix;
use crate::linalg::{hermitian_eig, max_row_sum_norm, ComplexMatrix, C64};
use crate::pauli::PauliString;

const UNITARY_TOL: f64 = 1e-10;
/// Weight of ρ outside the support of σ above which `D(ρ‖σ)` is infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-9;

/// A unitary charge insertion `O = O_x O_y†`.
#[derive(Debug, Clone)]
pub enum ChargedOp {
    Pauli(PauliString),
    Dense(ComplexMatrix),
}

impl ChargedOp {
    pub fn from_pair(ox: &PauliString, oy: &PauliString) -> Result<Self> {
        if ox.n_qubits() != oy.n_qubits() {
            return Err(Error::QubitMismatch {
                expected: ox.n_qubits(),
                found: oy.n_qubits(),
            });
        }
        Ok(ChargedOp::Pauli(ox.mul(&oy.adjoint())))
    }

    /// Dense operators must be unitary; non-unitary insertions are rejected.
    pub fn dense(u: ComplexMatrix) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: u.ncols(),
            });
        }
        let deviation = max_row_sum_norm(&(&u * u.adjoint() - ComplexMatrix::identity(n, n)));
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(ChargedOp::Dense(u))
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        let found = match self {
            ChargedOp::Pauli(p) => p.n_qubits(),
            ChargedOp::Dense(u) => u.nrows().trailing_zeros() as usize,
        };
        if found != rho.n_qubits() {
            return Err(Error::QubitMismatch {
                expected: rho.n_qubits(),
                found,
            });
        }
        Ok(())
    }

    /// `O m O†`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            ChargedOp::Pauli(p) => p.conjugate_dense(m),
            ChargedOp::Dense(u) => u * m * u.adjoint(),
        }
    }

    /// `O m`.
    pub fn left_mul(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            ChargedOp::Pauli(p) => p.left_mul_dense(m),
            ChargedOp::Dense(u) => u * m,
        }
    }
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter()
        .zip(b.transpose().iter())
        .map(|(x, y)| x * y)
        .sum()
}

/// `tr[√σ √ρ]`.
pub fn holevo_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    trace_product(sigma.sqrt(), rho.sqrt()).re
}

/// `tr √(√ρ σ √ρ)`.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let s = rho.sqrt();
    sqrt_trace(&(s * sigma.matrix() * s))
}

fn sqrt_trace(m: &ComplexMatrix) -> f64 {
    let e = hermitian_eig(&((m + m.adjoint()) * C64::from(0.5))).expect("Hermitian by construction");
    let floor = 8.0 * f64::EPSILON * m.nrows() as f64;
    e.values.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum()
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    half_trace_norm(&(rho.matrix() - sigma.matrix()))
}

fn half_trace_norm(m: &ComplexMatrix) -> f64 {
    let e = hermitian_eig(&((m + m.adjoint()) * C64::from(0.5))).expect("Hermitian by construction");
    0.5 * e.values.iter().map(|l| l.abs()).sum::<f64>()
}

/// `D(ρ‖σ) = tr ρ (log ρ − log σ)` with both logarithms restricted to the
/// respective supports; `+∞` when ρ has weight outside the support of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> ExtendedReal {
    let (er, es) = (rho.spectrum(), sigma.spectrum());
    let overlap = er.vectors.adjoint() * &es.vectors;
    relative_entropy_from_spectra(
        &er.values,
        &es.values,
        &overlap,
        rho.support_tol(),
        sigma.support_tol(),
    )
}

fn relative_entropy_from_spectra(
    lam: &[f64],
    mu: &[f64],
    overlap: &ComplexMatrix,
    tol_rho: f64,
    tol_sigma: f64,
) -> ExtendedReal {
    let mut entropy = 0.0;
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (i, &l) in lam.iter().enumerate() {
        if l <= tol_rho {
            continue;
        }
        entropy += l * l.ln();
        for (j, &m) in mu.iter().enumerate() {
            let w = overlap[(i, j)].norm_sqr();
            if m <= tol_sigma {
                leak += l * w;
            } else {
                cross += l * w * m.ln();
            }
        }
    }
    if leak > SUPPORT_LEAK_TOL {
        ExtendedReal::PosInf
    } else {
        ExtendedReal::Finite(entropy - cross)
    }
}

pub fn renyi1(rho: &DensityMatrix, ox: &PauliString, oy: &PauliString) -> Result<f64> {
    renyi1_op(rho, &ChargedOp::from_pair(ox, oy)?)
}

pub fn renyi2(rho: &DensityMatrix, ox: &PauliString, oy: &PauliString) -> Result<f64> {
    renyi2_op(rho, &ChargedOp::from_pair(ox, oy)?)
}

pub fn fidelity_corr(rho: &DensityMatrix, ox: &PauliString, oy: &PauliString) -> Result<f64> {
    fidelity_corr_op(rho, &ChargedOp::from_pair(ox, oy)?)
}

pub fn trace_distance_corr(
    rho: &DensityMatrix,
    ox: &PauliString,
    oy: &PauliString,
) -> Result<f64> {
    trace_distance_corr_op(rho, &ChargedOp::from_pair(ox, oy)?)
}

pub fn relative_entropy_corr(
    rho: &DensityMatrix,
    ox: &PauliString,
    oy: &PauliString,
) -> Result<ExtendedReal> {
    relative_entropy_corr_op(rho, &ChargedOp::from_pair(ox, oy)?)
}

/// `tr[O √ρ O† √ρ]`.
pub fn renyi1_op(rho: &DensityMatrix, o: &ChargedOp) -> Result<f64> {
    o.check(rho)?;
    let s = rho.sqrt();
    Ok(trace_product(&o.conjugate(s), s).re)
}

/// `tr[O ρ O† ρ] / tr ρ²`.
pub fn renyi2_op(rho: &DensityMatrix, o: &ChargedOp) -> Result<f64> {
    o.check(rho)?;
    let m = rho.matrix();
    Ok(trace_product(&o.conjugate(m), m).re / rho.purity())
}

/// `tr √(√ρ O ρ O† √ρ)`.
pub fn fidelity_corr_op(rho: &DensityMatrix, o: &ChargedOp) -> Result<f64> {
    o.check(rho)?;
    let s = rho.sqrt();
    Ok(sqrt_trace(&(s * o.conjugate(rho.matrix()) * s)))
}

/// `½‖ρ − O ρ O†‖₁`.
pub fn trace_distance_corr_op(rho: &DensityMatrix, o: &ChargedOp) -> Result<f64> {
    o.check(rho)?;
    Ok(half_trace_norm(&(rho.matrix() - o.conjugate(rho.matrix()))))
}

/// `D(ρ ‖ O ρ O†)`. The conjugated state shares ρ's spectrum with
/// eigenvectors `O v`, so one eigendecomposition suffices.
pub fn relative_entropy_corr_op(rho: &DensityMatrix, o: &ChargedOp) -> Result<ExtendedReal> {
    o.check(rho)?;
    let e = rho.spectrum();
    let overlap = e.vectors.adjoint() * o.left_mul(&e.vectors);
    let tol = rho.support_tol();
    Ok(relative_entropy_from_spectra(
        &e.values, &e.values, &overlap, tol, tol,
    ))
}

pub fn all_correlators(
    rho: &DensityMatrix,
    ox: &PauliString,
    oy: &PauliString,
) -> Result<Correlators> {
    let o = ChargedOp::from_pair(ox, oy)?;
    Ok(Correlators {
        r1: renyi1_op(rho, &o)?,
        r2: renyi2_op(rho, &o)?,
        f: fidelity_corr_op(rho, &o)?,
        d1: trace_distance_corr_op(rho, &o)?,
        drel: relative_entropy_corr_op(rho, &o)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::density::random_density_matrix;
    use crate::pauli::Letter;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relative_entropy_matches_log_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho = random_density_matrix(2, &mut rng).unwrap();
        let o = PauliString::from_sites(2, &[(0, Letter::Z), (1, Letter::Y)]);
        let sigma = rho.conjugate_by(&o);
        // tr ρ log ρ − tr ρ log σ with full matrix logarithms.
        let log = |m: &DensityMatrix| m.spectrum().map(|l| C64::from(l.ln()));
        let want = trace_product(rho.matrix(), &(log(&rho) - log(&sigma))).re;
        let got = relative_entropy_corr(&rho, &o, &PauliString::identity(2))
            .unwrap()
            .finite()
            .unwrap();
        assert!((got - want).abs() < 1e-8);
        let general = relative_entropy(&rho, &sigma).finite().unwrap();
        assert!((general - want).abs() < 1e-8);
    }

    #[test]
    fn dense_insertion_requires_unitarity() {
        let mut m = ComplexMatrix::identity(2, 2);
        m[(0, 0)] = C64::from(2.0);
        assert!(matches!(ChargedOp::dense(m), Err(Error::NotUnitary { .. })));
        let x = PauliString::single(1, 0, Letter::X).to_dense();
        assert!(ChargedOp::dense(x).is_ok());
    }

    #[test]
    fn mismatched_register_rejected() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let z = PauliString::single(3, 0, Letter::Z);
        assert!(renyi1(&rho, &z, &PauliString::identity(3)).is_err());
    }
}
