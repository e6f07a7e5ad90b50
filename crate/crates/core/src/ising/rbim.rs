//! `P_v` as a random-bond Ising partition function on the dual lattice.
//!
//! Plaquette `a` is labelled by its lower-left site. A `+x` link at `(x, y)`
//! separates plaquettes `(x, y−1)` and `(x, y)`; a `+y` link at `(x, y)`
//! separates `(x−1, y)` and `(x, y)`.

use crate::error::{Error, Result};
use crate::ising::enumerate::check_p;
use crate::ising::lattice::{ErrorChain, Lattice, Syndrome};

pub const MAX_RBIM_PLAQUETTES: usize = 20;

/// Bond signs `η_link = −1` on the chain and `+1` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RbimDisorder {
    lat: Lattice,
    eta: Vec<i8>,
}

impl RbimDisorder {
    pub fn from_chain(lat: &Lattice, chain: &ErrorChain) -> Result<Self> {
        if lat.dim() != 2 {
            return Err(Error::InvalidParameter("dual RBIM needs d = 2".into()));
        }
        let eta = (0..lat.n_links())
            .map(|k| if chain.contains(k) { -1 } else { 1 })
            .collect();
        Ok(Self { lat: *lat, eta })
    }

    pub fn eta(&self) -> &[i8] {
        &self.eta
    }

    /// `η_ab → τ_a η_ab τ_b` for plaquette signs `τ`.
    pub fn gauge(&self, tau: &[i8]) -> Self {
        let mut out = self.clone();
        for (k, e) in out.eta.iter_mut().enumerate() {
            let (a, b) = dual_ends(&self.lat, k);
            *e *= tau[a] * tau[b];
        }
        out
    }

    /// Flips the homology class: `axis = 0` multiplies `η` by −1 on the `+x`
    /// links of row `y = 0`, `axis = 1` on the `+y` links of column `x = 0`.
    pub fn flux_flip(&self, axis: usize) -> Self {
        let mut out = self.clone();
        let l = self.lat.side();
        for t in 0..l {
            let site = if axis == 0 {
                self.lat.site([t, 0, 0])
            } else {
                self.lat.site([0, t, 0])
            };
            out.eta[self.lat.link(site, axis)] *= -1;
        }
        out
    }
}

/// The two plaquettes separated by `link`.
fn dual_ends(lat: &Lattice, link: usize) -> (usize, usize) {
    let l = lat.side();
    let (s, dir) = (link / 2, link % 2);
    let [x, y, _] = lat.coords(s);
    let other = if dir == 0 {
        lat.site([x, (y + l - 1) % l, 0])
    } else {
        lat.site([(x + l - 1) % l, y, 0])
    };
    (other, s)
}

/// `½ [p(1−p)]^N Σ_{4 flux sectors} Σ_μ exp(J Σ η_ab μ_a μ_b)` with
/// `J = ½ ln((1−p)/p)`, by brute force over plaquette spins.
pub fn p_v_rbim_from_disorder(disorder: &RbimDisorder, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("RBIM coupling needs 0 < p < 1, got {p}")));
    }
    let lat = disorder.lat;
    let n = lat.n_sites();
    if n > MAX_RBIM_PLAQUETTES {
        return Err(Error::SizeLimit {
            what: "RBIM plaquettes",
            requested: n,
            limit: MAX_RBIM_PLAQUETTES,
        });
    }
    let j = 0.5 * ((1.0 - p) / p).ln();
    let ends: Vec<(usize, usize)> = (0..lat.n_links()).map(|k| dual_ends(&lat, k)).collect();
    let sectors = [
        disorder.clone(),
        disorder.flux_flip(0),
        disorder.flux_flip(1),
        disorder.flux_flip(0).flux_flip(1),
    ];
    // Energies are integers in [−2N, 2N]; count them, then sum with a shift.
    let mut counts = vec![0u64; 4 * n + 1];
    for sector in &sectors {
        for mu in 0u64..(1u64 << n) {
            let mut e: i64 = 0;
            for (k, &(a, b)) in ends.iter().enumerate() {
                let aligned = ((mu >> a) ^ (mu >> b)) & 1 == 0;
                let s = sector.eta[k] as i64;
                e += if aligned { s } else { -s };
            }
            counts[(e + 2 * n as i64) as usize] += 1;
        }
    }
    let log_pref = n as f64 * (p * (1.0 - p)).ln() - std::f64::consts::LN_2;
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let e = i as f64 - 2.0 * n as f64;
            (log_pref + j * e).exp() * c as f64
        })
        .sum())
}

pub fn p_v_rbim_2d(lat: &Lattice, p: f64, v: &Syndrome) -> Result<f64> {
    let disorder = RbimDisorder::from_chain(lat, &lat.representative(v))?;
    p_v_rbim_from_disorder(&disorder, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::enumerate::SyndromeTable;

    #[test]
    fn matches_enumeration() {
        for l in [2, 3] {
            let lat = Lattice::square(l).unwrap();
            let table = SyndromeTable::enumerate(&lat, 0.17).unwrap();
            for mask in [0u64, 0b11, 0b1001, 0b1111] {
                let v = lat.syndrome_from_sites((0..lat.n_sites()).filter(|i| mask >> i & 1 == 1));
                let got = p_v_rbim_2d(&lat, 0.17, &v).unwrap();
                let want = table.get(&v);
                assert!((got - want).abs() < 1e-12, "L={l} {mask:b}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn gauge_and_flux_invariance() {
        let lat = Lattice::square(3).unwrap();
        let chain = lat.chain_from_links([0, 3, 7, 12]);
        let d = RbimDisorder::from_chain(&lat, &chain).unwrap();
        let base = p_v_rbim_from_disorder(&d, 0.3).unwrap();
        let tau = [1, -1, 1, 1, -1, -1, 1, 1, -1];
        let g = p_v_rbim_from_disorder(&d.gauge(&tau), 0.3).unwrap();
        let f = p_v_rbim_from_disorder(&d.flux_flip(1), 0.3).unwrap();
        assert!((base - g).abs() < 1e-14 && (base - f).abs() < 1e-14);
    }
}
