use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    clip_spectrum, hermitian_deviation, hermitian_eig, max_row_sum_norm, ComplexMatrix, Eigh,
    C64, CLIP_TOL, HERMITIAN_TOL,
};
use crate::pauli::PauliString;

/// Largest register handled densely (4096-dimensional matrices).
pub const MAX_DENSE_QUBITS: usize = 12;

const TRACE_TOL: f64 = 1e-10;

/// Unit-trace PSD operator on `n` qubits. The spectrum and square root are
/// computed on first use and cached.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n: usize,
    m: ComplexMatrix,
    spectrum: OnceLock<Eigh>,
    sqrt: OnceLock<ComplexMatrix>,
}

pub fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeLimit {
            what: "dense register qubits",
            requested: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

impl DensityMatrix {
    pub fn new(n: usize, m: ComplexMatrix) -> Result<Self> {
        check_dense_size(n)?;
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected {dim}x{dim}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let dev = hermitian_deviation(&m);
        if dev > HERMITIAN_TOL * max_row_sum_norm(&m).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = m.trace();
        if (tr - C64::from(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let mut eig = hermitian_eig(&m)?;
        clip_spectrum(&mut eig.values, 1.0)
            .map_err(|e| Error::InvalidDensityMatrix(e.to_string()))?;
        let rho = Self::from_trusted(n, m);
        let _ = rho.spectrum.set(eig);
        Ok(rho)
    }

    /// Skips validation; the input must be a density matrix up to round-off.
    pub(crate) fn from_trusted(n: usize, m: ComplexMatrix) -> Self {
        let m = (&m + m.adjoint()) * C64::from(0.5);
        Self {
            n,
            m,
            spectrum: OnceLock::new(),
            sqrt: OnceLock::new(),
        }
    }

    pub fn pure(n: usize, psi: &[C64]) -> Result<Self> {
        check_dense_size(n)?;
        if psi.len() != 1usize << n {
            return Err(Error::InvalidDensityMatrix("state length mismatch".into()));
        }
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidDensityMatrix("zero vector".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|a| a / norm));
        Ok(Self::from_trusted(n, &v * v.adjoint()))
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_dense_size(n)?;
        let dim = 1usize << n;
        Ok(Self::from_trusted(
            n,
            ComplexMatrix::identity(dim, dim) * C64::from(1.0 / dim as f64),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Spectrum with round-off negatives clipped to zero.
    pub fn spectrum(&self) -> &Eigh {
        self.spectrum.get_or_init(|| {
            let mut e = hermitian_eig(&self.m).expect("density matrix is Hermitian");
            // Roundoff eigenvalues of a rank-deficient ρ would otherwise
            // contribute √ε ≈ 1e−8 to √ρ.
            let floor = 8.0 * f64::EPSILON * self.dim() as f64;
            for v in e.values.iter_mut() {
                if *v <= floor {
                    *v = 0.0;
                }
            }
            e
        })
    }

    pub fn sqrt(&self) -> &ComplexMatrix {
        self.sqrt
            .get_or_init(|| self.spectrum().map(|l| C64::from(l.sqrt())))
    }

    /// Eigenvalues at or below this are treated as outside the support.
    pub fn support_tol(&self) -> f64 {
        CLIP_TOL * self.dim() as f64
    }

    pub fn purity(&self) -> f64 {
        self.m.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `tr[P ρ]`.
    pub fn expectation(&self, p: &PauliString) -> C64 {
        assert_eq!(p.n_qubits(), self.n);
        let dim = self.dim();
        (0..dim)
            .map(|b| {
                let (b2, c) = p.apply_to_basis(b);
                c * self.m[(b, b2)]
            })
            .sum()
    }

    pub fn conjugate_by(&self, p: &PauliString) -> DensityMatrix {
        Self::from_trusted(self.n, p.conjugate_dense(&self.m))
    }
}

/// Hilbert–Schmidt-uniform random state: `G G† / tr(G G†)` with complex
/// Gaussian `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_dense_size(n)?;
    let dim = 1usize << n;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_trusted(n, m / C64::from(tr)))
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_dense_size(n)?;
    let psi: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityMatrix::pure(n, &psi)
}

/// Random state of rank `rank`.
pub fn random_rank_deficient<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    check_dense_size(n)?;
    let dim = 1usize << n;
    let g = ComplexMatrix::from_fn(dim, rank.clamp(1, dim), |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_trusted(n, m / C64::from(tr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        let ok = ComplexMatrix::identity(2, 2) * C64::from(0.5);
        assert!(DensityMatrix::new(1, ok).is_ok());
        let bad_trace = ComplexMatrix::identity(2, 2);
        assert!(DensityMatrix::new(1, bad_trace).is_err());
        let mut indefinite = ComplexMatrix::zeros(2, 2);
        indefinite[(0, 0)] = C64::from(1.5);
        indefinite[(1, 1)] = C64::from(-0.5);
        assert!(DensityMatrix::new(1, indefinite).is_err());
        assert!(matches!(
            DensityMatrix::maximally_mixed(13),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix(3, &mut rng).unwrap();
        assert!(DensityMatrix::new(3, rho.matrix().clone()).is_ok());
        let s = rho.sqrt();
        assert!(max_row_sum_norm(&(s * s - rho.matrix())) < 1e-12);
    }
}
