//! Dense kernels: Hermitian eigendecomposition, PSD square root and the
//! Pfaffian of antisymmetric matrices.
//!
//! Tolerances are relative to the max-row-sum norm of the input.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const ANTISYMMETRIC_TOL: f64 = 1e-12;
/// Eigenvalues above `-CLIP_TOL * dim * norm` are clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

pub fn max_row_sum_norm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|v| v.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_square<T>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `‖m − m†‖` in the max-row-sum norm.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    max_row_sum_norm(&(m - m.adjoint()))
}

/// Spectral decomposition `m = V diag(values) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map<F: Fn(f64) -> C64>(&self, f: F) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            for v in scaled.column_mut(k).iter_mut() {
                *v *= s;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(C64::from)
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Eigh> {
    let n = check_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL * max_row_sum_norm(m) {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(Eigh {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Clips eigenvalues that are negative only by round-off; rejects the rest.
pub fn clip_spectrum(values: &mut [f64], norm: f64) -> Result<()> {
    let threshold = CLIP_TOL * values.len() as f64 * norm.max(f64::MIN_POSITIVE);
    for v in values.iter_mut() {
        if *v < -threshold {
            return Err(Error::NegativeEigenvalue {
                value: *v,
                threshold,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}

pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut eig = hermitian_eig(m)?;
    clip_spectrum(&mut eig.values, max_row_sum_norm(m))?;
    Ok(eig.map(|l| C64::from(l.sqrt())))
}

/// Even-dimensional matrix with `M = −Mᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix<T: nalgebra::Scalar> {
    m: DMatrix<T>,
}

impl<T: ComplexField<RealField = f64> + Copy> AntisymmetricMatrix<T> {
    pub fn new(m: DMatrix<T>) -> Result<Self> {
        let n = check_square(&m)?;
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let deviation = max_row_sum_norm(&(&m + m.transpose()));
        if deviation > ANTISYMMETRIC_TOL * max_row_sum_norm(&m) {
            return Err(Error::NotAntisymmetric { deviation });
        }
        Ok(Self { m })
    }

    /// Builds the matrix from its strict upper triangle `f(a, b)`, `a < b`.
    pub fn from_upper<F: FnMut(usize, usize) -> T>(dim: usize, mut f: F) -> Result<Self> {
        if dim % 2 == 1 {
            return Err(Error::OddDimension(dim));
        }
        let mut m = DMatrix::from_element(dim, dim, T::zero());
        for b in 0..dim {
            for a in 0..b {
                let v = f(a, b);
                m[(a, b)] = v;
                m[(b, a)] = -v;
            }
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.m
    }
}

/// Pfaffian by Parlett–Reid elimination with partial pivoting, O(n³).
///
/// Sign convention: `Pf([[0, a], [−a, 0]]) = a`.
pub fn pfaffian<T: ComplexField<RealField = f64> + Copy>(m: &AntisymmetricMatrix<T>) -> T {
    let mut a = m.m.clone();
    let n = a.nrows();
    let mut pf = T::one();
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].modulus();
        for i in k + 2..n {
            let v = a[(i, k)].modulus();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == T::zero() {
            return T::zero();
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<T> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<T> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (jj, j) in (k + 2..n).enumerate() {
                let (tj, cj) = (tau[jj], col[jj]);
                for (ii, i) in (k + 2..n).enumerate() {
                    let v = a[(i, j)] + tau[ii] * cj - col[ii] * tj;
                    a[(i, j)] = v;
                }
            }
        }
        k += 2;
    }
    pf
}
