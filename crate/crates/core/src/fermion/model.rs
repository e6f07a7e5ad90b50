use crate::error::{Error, Result};
use crate::exact::check_dense_size;
use crate::linalg::{AntisymmetricMatrix, ComplexMatrix, C64};
use crate::pauli::{Letter, PauliString};

/// Fermion boundary condition. The parity-even spin sector maps to
/// antiperiodic fermions, the parity-odd sector to periodic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Antiperiodic,
    Periodic,
}

impl Sector {
    /// Eigenvalue of `Π = ∏ X_j` on the spin sector this boundary describes.
    pub fn parity(self) -> i8 {
        match self {
            Sector::Antiperiodic => 1,
            Sector::Periodic => -1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MajoranaModel {
    l: usize,
    j: f64,
    g: f64,
    sector: Sector,
    a: AntisymmetricMatrix<f64>,
}

/// Couplings of `H = −J Σ_j (Z_j Z_{j+1} + g X_j)` on a ring of `l` sites.
pub fn build_majorana_model(l: usize, j: f64, g: f64, sector: Sector) -> Result<MajoranaModel> {
    if l < 2 {
        return Err(Error::InvalidParameter("chain needs at least 2 sites".into()));
    }
    if !(j.is_finite() && g.is_finite()) {
        return Err(Error::InvalidParameter(format!("J = {j}, g = {g}")));
    }
    let boundary = match sector {
        Sector::Antiperiodic => 2.0 * j,
        Sector::Periodic => -2.0 * j,
    };
    let a = AntisymmetricMatrix::from_upper(2 * l, |p, q| {
        if q == p + 1 && p % 2 == 0 {
            -2.0 * j * g
        } else if q == p + 1 {
            -2.0 * j
        } else if p == 0 && q == 2 * l - 1 {
            // A_{2l−1, 0} = boundary
            -boundary
        } else {
            0.0
        }
    })?;
    Ok(MajoranaModel { l, j, g, sector, a })
}

/// `γ_k` on `l` qubits.
pub fn majorana_operator(l: usize, k: usize) -> PauliString {
    assert!(k < 2 * l, "majorana index {k} out of range");
    let site = k / 2;
    let mut sites: Vec<(usize, Letter)> = (0..site).map(|i| (i, Letter::X)).collect();
    sites.push((site, if k % 2 == 0 { Letter::Z } else { Letter::Y }));
    PauliString::from_sites(l, &sites)
}

impl MajoranaModel {
    pub fn n_sites(&self) -> usize {
        self.l
    }

    pub fn n_majoranas(&self) -> usize {
        2 * self.l
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn field(&self) -> f64 {
        self.g
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn a(&self) -> &AntisymmetricMatrix<f64> {
        &self.a
    }

    /// The Hermitian matrix `iA`.
    pub fn ia(&self) -> ComplexMatrix {
        self.a.matrix().map(|v| C64::new(0.0, v))
    }

    /// `(i/4) Σ A_ij γ_i γ_j` as a dense `2^L × 2^L` matrix.
    pub fn dense_hamiltonian(&self) -> Result<ComplexMatrix> {
        check_dense_size(self.l)?;
        let d = 1usize << self.l;
        let gammas: Vec<PauliString> =
            (0..2 * self.l).map(|k| majorana_operator(self.l, k)).collect();
        let mut h = ComplexMatrix::zeros(d, d);
        let a = self.a.matrix();
        for q in 0..2 * self.l {
            for p in 0..q {
                if a[(p, q)] != 0.0 {
                    h += gammas[p].mul(&gammas[q]).to_dense() * C64::new(0.0, 0.5 * a[(p, q)]);
                }
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parity, tfim_hamiltonian};
    use crate::linalg::{hermitian_eig, max_row_sum_norm};

    fn nonzero_pairs(m: &MajoranaModel) -> Vec<(usize, usize)> {
        let a = m.a().matrix();
        let n = m.n_majoranas();
        (0..n)
            .flat_map(|q| (0..q).map(move |p| (p, q)))
            .filter(|&(p, q)| a[(p, q)] != 0.0)
            .collect()
    }

    #[test]
    fn structure() {
        let m = build_majorana_model(4, 1.0, 0.0, Sector::Antiperiodic).unwrap();
        assert!(nonzero_pairs(&m).iter().all(|&(p, q)| p % 2 == 1 || (p, q) == (0, 7)));
        assert_eq!(nonzero_pairs(&m).len(), 4);
        let m = build_majorana_model(4, 0.0, 1.0, Sector::Antiperiodic).unwrap();
        assert!(nonzero_pairs(&m).is_empty());
        let m = build_majorana_model(4, 1e-3, 1e3, Sector::Periodic).unwrap();
        let pairs = nonzero_pairs(&m);
        assert_eq!(pairs.len(), 8);
        assert!(build_majorana_model(1, 1.0, 1.0, Sector::Periodic).is_err());
    }

    #[test]
    fn majoranas_anticommute() {
        let l = 3;
        for a in 0..2 * l {
            for b in 0..2 * l {
                let (ga, gb) = (majorana_operator(l, a), majorana_operator(l, b));
                assert!(ga.is_hermitian());
                assert_eq!(ga.anticommutes_with(&gb), a != b);
            }
        }
    }

    #[test]
    fn sectors_match_spin_hamiltonian() {
        for l in 2..=4 {
            for (j, g) in [(1.0, 0.7), (0.8, 1.3), (1.0, 0.0)] {
                let h = tfim_hamiltonian(l, j, g).unwrap();
                let pi = parity(l).to_dense();
                let id = ComplexMatrix::identity(1 << l, 1 << l);
                for sector in [Sector::Antiperiodic, Sector::Periodic] {
                    let hf = build_majorana_model(l, j, g, sector)
                        .unwrap()
                        .dense_hamiltonian()
                        .unwrap();
                    let s = C64::from(f64::from(sector.parity()));
                    let p = (&id + &pi * s) * C64::from(0.5);
                    let diff = &p * (hf - &h) * &p;
                    assert!(max_row_sum_norm(&diff) < 1e-10, "l={l} {sector:?}");
                }
            }
        }
    }

    #[test]
    fn even_sector_spectrum() {
        let (l, j, g) = (3, 1.0, 0.7);
        let h = tfim_hamiltonian(l, j, g).unwrap();
        let pi = parity(l).to_dense();
        let d = 1 << l;
        let p = (ComplexMatrix::identity(d, d) + &pi) * C64::from(0.5);
        let m = build_majorana_model(l, j, g, Sector::Antiperiodic).unwrap();
        let hf = m.dense_hamiltonian().unwrap();
        let shift = C64::from(100.0);
        let a = hermitian_eig(&(&p * &h * &p + (ComplexMatrix::identity(d, d) - &p) * shift)).unwrap();
        let b = hermitian_eig(&(&p * &hf * &p + (ComplexMatrix::identity(d, d) - &p) * shift)).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
