use crate::error::{Error, Result};
use crate::fermion::model::MajoranaModel;
use crate::linalg::{hermitian_eig, pfaffian, AntisymmetricMatrix, ComplexMatrix, Eigh, C64};

/// Thermal two-point functions of a quadratic Majorana Hamiltonian.
///
/// `γ(τ) = e^{τH} γ e^{−τH} = e^{−Mτ} γ` with `M = iA`, so for `Δτ = τ_a − τ_b`
/// `⟨γ_i(τ_a) γ_j(τ_b)⟩ = [2 e^{−Δτ M} (1 + e^{−βM})^{−1}]_ij`.
/// The spectrum of `M` is computed once and reused for every `β` and `τ`.
#[derive(Debug, Clone)]
pub struct ThermalPropagator {
    model: MajoranaModel,
    eig: Eigh,
}

/// `2 e^{−Δτ λ} / (1 + e^{−βλ})` without overflow for `|Δτ| ≤ β`.
fn weight(lambda: f64, beta: f64, dtau: f64) -> f64 {
    if lambda >= 0.0 {
        2.0 * (-dtau * lambda).exp() / (1.0 + (-beta * lambda).exp())
    } else {
        2.0 * ((beta - dtau) * lambda).exp() / (1.0 + (beta * lambda).exp())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta = {beta}")));
    }
    Ok(())
}

fn check_time(tau: f64, beta: f64) -> Result<()> {
    if !(0.0..=beta).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "imaginary time {tau} outside [0, {beta}]"
        )));
    }
    Ok(())
}

impl ThermalPropagator {
    pub fn new(model: MajoranaModel) -> Result<Self> {
        let eig = hermitian_eig(&model.ia())?;
        Ok(Self { model, eig })
    }

    pub fn model(&self) -> &MajoranaModel {
        &self.model
    }

    /// Single-particle energies, the eigenvalues of `iA` in ascending order.
    pub fn energies(&self) -> &[f64] {
        &self.eig.values
    }

    /// `K_ij = ⟨γ_i(τ + Δτ) γ_j(τ)⟩_β`.
    pub fn kernel(&self, beta: f64, dtau: f64) -> Result<ComplexMatrix> {
        check_beta(beta)?;
        if dtau.abs() > beta {
            return Err(Error::InvalidParameter(format!(
                "time difference {dtau} exceeds beta = {beta}"
            )));
        }
        Ok(self.eig.map(|lam| C64::from(weight(lam, beta, dtau))))
    }

    pub fn propagator(&self, beta: f64, i: usize, ta: f64, j: usize, tb: f64) -> Result<C64> {
        check_beta(beta)?;
        check_time(ta, beta)?;
        check_time(tb, beta)?;
        let n = self.model.n_majoranas();
        if i >= n || j >= n {
            return Err(Error::InvalidParameter(format!("majorana index outside 0..{n}")));
        }
        if i == j && ta == tb {
            return Ok(C64::from(1.0));
        }
        let v = &self.eig.vectors;
        Ok((0..n)
            .map(|k| v[(i, k)] * v[(j, k)].conj() * weight(self.eig.values[k], beta, ta - tb))
            .sum())
    }

    /// `⟨Π⟩_β = i^L Pf(tanh(βM/2))` in the Gibbs state of the quadratic
    /// Hamiltonian.
    pub fn parity_expectation(&self, beta: f64) -> Result<C64> {
        check_beta(beta)?;
        let t = self.eig.map(|lam| C64::from((0.5 * beta * lam).tanh()));
        let n = t.nrows();
        let t = AntisymmetricMatrix::from_upper(n, |a, b| 0.5 * (t[(a, b)] - t[(b, a)]))?;
        Ok(C64::i().powu(self.model.n_sites() as u32) * pfaffian(&t))
    }

    /// Wick matrix of the ordered product `γ_{i_1}(τ_1) γ_{i_2}(τ_2) …`.
    pub fn wick_matrix(&self, beta: f64, ops: &[(usize, f64)]) -> Result<WickMatrix> {
        check_beta(beta)?;
        let n = self.model.n_majoranas();
        for &(i, tau) in ops {
            if i >= n {
                return Err(Error::InvalidParameter(format!(
                    "majorana index {i} outside 0..{n}"
                )));
            }
            check_time(tau, beta)?;
        }
        let mut kernels: Vec<(f64, ComplexMatrix)> = Vec::new();
        for a in 0..ops.len() {
            for b in a + 1..ops.len() {
                let dtau = ops[a].1 - ops[b].1;
                if ops[a] != ops[b] && !kernels.iter().any(|(d, _)| *d == dtau) {
                    kernels.push((dtau, self.kernel(beta, dtau)?));
                }
            }
        }
        let g = AntisymmetricMatrix::from_upper(ops.len(), |a, b| {
            let ((i, ta), (j, tb)) = (ops[a], ops[b]);
            if (i, ta) == (j, tb) {
                return C64::from(1.0);
            }
            let k = &kernels.iter().find(|(d, _)| *d == ta - tb).unwrap().1;
            k[(i, j)]
        })?;
        Ok(WickMatrix {
            ops: ops.to_vec(),
            g,
        })
    }
}

/// Antisymmetric matrix of two-point functions `𝒢_ab = ⟨γ_{i_a}(τ_a) γ_{i_b}(τ_b)⟩`
/// for `a < b`.
#[derive(Debug, Clone)]
pub struct WickMatrix {
    ops: Vec<(usize, f64)>,
    g: AntisymmetricMatrix<C64>,
}

impl WickMatrix {
    pub fn ops(&self) -> &[(usize, f64)] {
        &self.ops
    }

    pub fn matrix(&self) -> &AntisymmetricMatrix<C64> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }
}

/// Expectation of the ordered operator product: the sum over pairings with
/// crossing signs, which is `Pf(𝒢)`.
pub fn wick_pfaffian(w: &WickMatrix) -> C64 {
    pfaffian(&w.g)
}
