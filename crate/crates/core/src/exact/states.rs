//! Dense builders for the reference states of the suite.

use crate::error::{Error, Result};
use crate::exact::channel::{apply_channels, PauliChannel};
use crate::exact::density::{check_dense_size, DensityMatrix};
use crate::ising::Lattice;
use crate::linalg::{hermitian_eig, max_row_sum_norm, ComplexMatrix, C64};
use crate::pauli::{Letter, PauliString};

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceKind {
    /// `|+⟩⟨+|^⊗n`.
    Product { n: usize },
    /// `(1 + Π)/2ⁿ` with `Π = ∏ X_j`.
    Pi { n: usize },
    /// `|+⟩^⊗N` after ZZ dephasing of strength `p` on every lattice link.
    Dephased { lattice: Lattice, p: f64 },
    /// `P_Π e^{−βH} / tr[P_Π e^{−βH}]` for the periodic transverse-field chain.
    ParityGibbs { n: usize, j: f64, g: f64, beta: f64 },
    /// `Σ_x |⟨x|ψ_g⟩|² |x⟩⟨x|` in the X basis, `ψ_g` the even ground state.
    SignFree { n: usize, j: f64, g: f64 },
}

pub fn build_reference_state(kind: &ReferenceKind) -> Result<DensityMatrix> {
    match *kind {
        ReferenceKind::Product { n } => product_plus(n),
        ReferenceKind::Pi { n } => rho_pi(n),
        ReferenceKind::Dephased { lattice, p } => dephased(&lattice, p),
        ReferenceKind::ParityGibbs { n, j, g, beta } => parity_gibbs(n, j, g, beta),
        ReferenceKind::SignFree { n, j, g } => sign_free(n, j, g),
    }
}

pub fn parity(n: usize) -> PauliString {
    PauliString::uniform(n, 0..n, Letter::X)
}

fn product_plus(n: usize) -> Result<DensityMatrix> {
    check_dense_size(n)?;
    let d = 1usize << n;
    let amp = C64::from(1.0 / (d as f64).sqrt());
    DensityMatrix::pure(n, &vec![amp; d])
}

fn rho_pi(n: usize) -> Result<DensityMatrix> {
    check_dense_size(n)?;
    let d = 1usize << n;
    let mut m = ComplexMatrix::identity(d, d) + parity(n).to_dense();
    m /= C64::from(d as f64);
    Ok(DensityMatrix::from_trusted(n, m))
}

pub fn dephasing_channels(lattice: &Lattice, p: f64) -> Result<Vec<PauliChannel>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let n = lattice.n_sites();
    (0..lattice.n_links())
        .map(|link| {
            let (a, b) = lattice.endpoints(link);
            PauliChannel::zz_dephasing(n, a, b, p)
        })
        .collect()
}

fn dephased(lattice: &Lattice, p: f64) -> Result<DensityMatrix> {
    let rho0 = product_plus(lattice.n_sites())?;
    apply_channels(&rho0, &dephasing_channels(lattice, p)?)
}

/// `H = −J Σ_j (Z_j Z_{j+1} + g X_j)` with periodic boundary.
pub fn tfim_hamiltonian(n: usize, j: f64, g: f64) -> Result<ComplexMatrix> {
    check_dense_size(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("chain needs at least 2 sites".into()));
    }
    let d = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut h = ComplexMatrix::zeros(d, d);
    for b in 0..d {
        let spin = |q: usize| if b & bit(q) == 0 { 1.0 } else { -1.0 };
        let zz: f64 = (0..n).map(|q| spin(q) * spin((q + 1) % n)).sum();
        h[(b, b)] = C64::from(-j * zz);
        for q in 0..n {
            h[(b ^ bit(q), b)] += C64::from(-j * g);
        }
    }
    Ok(h)
}

/// Normalized `P e^{−βH}` for a Hermitian `H` commuting with the Pauli
/// `projector` (`P = (1 + projector)/2`).
pub fn projected_gibbs(
    n: usize,
    h: &ComplexMatrix,
    beta: f64,
    projector: Option<&PauliString>,
) -> Result<DensityMatrix> {
    let e = hermitian_eig(h)?;
    let e0 = e.values[0];
    let mut m = e.map(|l| C64::from((-beta * (l - e0)).exp()));
    if let Some(p) = projector {
        m = (&m + p.left_mul_dense(&m)) * C64::from(0.5);
    }
    let tr = m.trace().re;
    if tr <= 0.0 {
        return Err(Error::Normalization("projected Gibbs weight vanishes".into()));
    }
    Ok(DensityMatrix::from_trusted(n, m / C64::from(tr)))
}

fn parity_gibbs(n: usize, j: f64, g: f64, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta = {beta}")));
    }
    let h = tfim_hamiltonian(n, j, g)?;
    projected_gibbs(n, &h, beta, Some(&parity(n)))
}

/// Lowest eigenvector of `H` inside the `Π = +1` sector.
pub fn even_ground_state(n: usize, j: f64, g: f64) -> Result<Vec<C64>> {
    let h = tfim_hamiltonian(n, j, g)?;
    let pi = parity(n);
    let d = 1usize << n;
    let shift = max_row_sum_norm(&h) + 1.0;
    let odd = (ComplexMatrix::identity(d, d) - pi.to_dense()) * C64::from(0.5 * shift);
    let restricted = (&h + pi.left_mul_dense(&h)) * C64::from(0.5) + odd;
    let e = hermitian_eig(&restricted)?;
    let v: Vec<C64> = e.vectors.column(0).iter().copied().collect();
    // Fix the global phase so the largest amplitude is real positive.
    let big = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::from(1.0));
    let phase = big.conj() / big.norm();
    Ok(v.into_iter().map(|a| a * phase).collect())
}

/// Unnormalized Walsh–Hadamard transform in place.
fn walsh_hadamard(v: &mut [C64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for k in i..i + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn sign_free(n: usize, j: f64, g: f64) -> Result<DensityMatrix> {
    let psi = even_ground_state(n, j, g)?;
    let d = psi.len();
    // X-basis amplitudes φ = H^⊗n ψ.
    let mut phi = psi;
    walsh_hadamard(&mut phi);
    let mut w: Vec<C64> = phi
        .iter()
        .map(|a| C64::from(a.norm_sqr() / d as f64))
        .collect();
    // ρ_g[a, b] depends only on a ⊕ b: F(c) = (1/d) Σ_x w_x (−1)^{|c∧x|}.
    walsh_hadamard(&mut w);
    let m = ComplexMatrix::from_fn(d, d, |a, b| w[a ^ b] / C64::from(d as f64));
    Ok(DensityMatrix::from_trusted(n, m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignFreeChecks {
    /// `⟨Ψ_g| Z^L_x Z^L_y |Ψ_g⟩`.
    pub left_corr: f64,
    /// `⟨Ψ_g| Z^L_x Z^R_x Z^L_y Z^R_y |Ψ_g⟩`.
    pub two_sided: f64,
    /// `⟨ψ_g| Z_x Z_y |ψ_g⟩`.
    pub gs_corr: f64,
}

/// Builds `|Ψ_g⟩ = ∏_j CX_j^{R→L} |ψ_g⟩^L |+⟩^R` densely and evaluates the
/// three correlators.
pub fn sign_free_cp_checks(
    n: usize,
    j: f64,
    g: f64,
    x: usize,
    y: usize,
) -> Result<SignFreeChecks> {
    if 2 * n > crate::exact::density::MAX_DENSE_QUBITS {
        return Err(Error::SizeLimit {
            what: "doubled register qubits",
            requested: 2 * n,
            limit: crate::exact::density::MAX_DENSE_QUBITS,
        });
    }
    if x >= n || y >= n {
        return Err(Error::InvalidParameter(format!("sites ({x}, {y}) outside 0..{n}")));
    }
    let psi = even_ground_state(n, j, g)?;
    let d = 1usize << n;
    let amp = 1.0 / (d as f64).sqrt();
    let mut big = vec![C64::from(0.0); d * d];
    for l in 0..d {
        for r in 0..d {
            // CX with control R_q flips L_q; the doubled index is l·2ⁿ + r.
            big[(l ^ r) * d + r] = psi[l] * amp;
        }
    }
    let total = 2 * n;
    let expect = |p: &PauliString| -> f64 {
        let pv = p.apply_dense(&big);
        big.iter().zip(&pv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    };
    let zl = |q: usize| PauliString::single(total, q, Letter::Z);
    let zr = |q: usize| PauliString::single(total, n + q, Letter::Z);
    let left_corr = expect(&zl(x).mul(&zl(y)));
    let two_sided = expect(&zl(x).mul(&zr(x)).mul(&zl(y)).mul(&zr(y)));
    let zz = PauliString::single(n, x, Letter::Z).mul(&PauliString::single(n, y, Letter::Z));
    let zpsi = zz.apply_dense(&psi);
    let gs_corr = psi
        .iter()
        .zip(&zpsi)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re;
    Ok(SignFreeChecks {
        left_corr,
        two_sided,
        gs_corr,
    })
}
