use rand::Rng;

use crate::error::{Error, Result};
use crate::ising::enumerate::{check_p, SyndromeTable};
use crate::ising::lattice::{ErrorChain, Lattice};
use crate::ising::spinsum::{spin_sum, spin_sum_brute_force, BondWeight, MAX_BRUTE_FORCE_SITES};
use crate::rng::{mean_stderr, par_map_indexed, sample_rng};

/// `t_ij = p/(1−p)` off the chain and `(1−p)/p` on it. Requires `0 < p < 1`.
pub fn bond_t(lat: &Lattice, p: f64, chain: &ErrorChain) -> Vec<f64> {
    let r = p / (1.0 - p);
    (0..lat.n_links())
        .map(|k| if chain.contains(k) { 1.0 / r } else { r })
        .collect()
}

fn loop_weights(t: &[f64]) -> Vec<BondWeight> {
    t.iter().map(|&t| [1.0 + t, 1.0 - t]).collect()
}

fn interior(p: f64) -> bool {
    p > 0.0 && p < 1.0
}

/// The only chain with nonzero probability at p ∈ {0, 1}.
fn certain_chain(lat: &Lattice, p: f64) -> ErrorChain {
    if p == 0.0 {
        lat.empty_chain()
    } else {
        lat.chain_from_links(0..lat.n_links())
    }
}

/// `P_v` from the high-temperature loop expansion around a representative
/// chain `ℓ_v`:
/// `(1−p)^{dN} 2^{−N} (p/(1−p))^{|ℓ_v|} Σ_σ ∏(1 + t_ij σ_i σ_j)`.
pub fn p_v_loop_rep(lat: &Lattice, p: f64, representative: &ErrorChain) -> Result<f64> {
    check_p(p)?;
    if !interior(p) {
        let v = crate::ising::boundary(lat, representative);
        let sure = crate::ising::boundary(lat, &certain_chain(lat, p));
        return Ok(if v == sure { 1.0 } else { 0.0 });
    }
    let t = bond_t(lat, p, representative);
    let w = loop_weights(&t);
    let z = if lat.n_sites() <= MAX_BRUTE_FORCE_SITES && lat.dim() > 2 {
        spin_sum_brute_force(lat, &w, &[])?
    } else {
        spin_sum(lat, &w, &[])?
    };
    let (n, links) = (lat.n_sites() as i32, lat.n_links() as i32);
    Ok((1.0 - p).powi(links) / 2f64.powi(n)
        * (p / (1.0 - p)).powi(representative.weight() as i32)
        * z)
}

/// `⟨σ_x σ_y⟩_ℓ = P_{∂ℓ⊕{x,y}} / P_{∂ℓ}`.
pub fn corr_ratio(lat: &Lattice, p: f64, chain: &ErrorChain, x: usize, y: usize) -> Result<f64> {
    check_p(p)?;
    check_sites(lat, x, y)?;
    if x == y {
        return Ok(1.0);
    }
    if !interior(p) {
        if *chain != certain_chain(lat, p) {
            return Err(Error::InvalidParameter(format!(
                "chain has zero probability at p = {p}"
            )));
        }
        return Ok(0.0);
    }
    let t = bond_t(lat, p, chain);
    let ratio = match lat.dim() {
        1 => ring_ratio(&t, x.min(y), x.max(y)),
        2 => {
            let w = loop_weights(&t);
            spin_sum(lat, &w, &[x, y])? / spin_sum(lat, &w, &[])?
        }
        d => {
            return Err(Error::InvalidParameter(format!(
                "correlator ratio needs d = 1 or 2, got {d}"
            )))
        }
    };
    Ok(ratio.max(0.0))
}

/// `(∏_{x≤k<y} t_k + ∏_{other} t_k) / (1 + ∏_all t_k)` on a ring.
fn ring_ratio(t: &[f64], x: usize, y: usize) -> f64 {
    let inside: f64 = t[x..y].iter().product();
    let outside: f64 = t[..x].iter().chain(&t[y..]).product();
    (inside + outside) / (1.0 + inside * outside)
}

fn check_sites(lat: &Lattice, x: usize, y: usize) -> Result<()> {
    let n = lat.n_sites();
    if x >= n || y >= n {
        return Err(Error::InvalidParameter(format!("sites ({x}, {y}) outside 0..{n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuenchedMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Present only for Monte Carlo estimates.
    pub stderr: Option<f64>,
    pub n_samples: u64,
}

/// Draws ℓ with each link dephased independently with probability `p`.
pub fn sample_chain<R: Rng + ?Sized>(lat: &Lattice, p: f64, rng: &mut R) -> ErrorChain {
    let links = (0..lat.n_links()).filter(|_| rng.random::<f64>() < p);
    lat.chain_from_links(links.collect::<Vec<_>>())
}

/// `R₁ = F = Σ_ℓ p_ℓ √⟨σ_x σ_y⟩_ℓ`.
pub fn r1_quenched(
    lat: &Lattice,
    p: f64,
    x: usize,
    y: usize,
    mode: QuenchedMode,
) -> Result<Estimate> {
    check_p(p)?;
    check_sites(lat, x, y)?;
    match mode {
        QuenchedMode::Exact => Ok(Estimate {
            value: SyndromeTable::enumerate(lat, p)?.r1(x, y),
            stderr: None,
            n_samples: 0,
        }),
        QuenchedMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter("zero samples".into()));
            }
            if lat.dim() > 2 {
                return Err(Error::InvalidParameter("Monte Carlo needs d = 1 or 2".into()));
            }
            let values: Vec<Result<f64>> = par_map_indexed(samples, |i| {
                let mut rng = sample_rng(seed, i);
                let chain = sample_chain(lat, p, &mut rng);
                Ok(corr_ratio(lat, p, &chain, x, y)?.sqrt())
            });
            let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
            let (value, stderr) = mean_stderr(&values);
            Ok(Estimate {
                value,
                stderr: Some(stderr),
                n_samples: samples,
            })
        }
    }
}

/// Large-N leading behaviour of the d = 1 quenched correlator.
pub fn r1_closed_form_1d(p: f64, r: usize) -> f64 {
    (2.0 * (p * (1.0 - p)).sqrt()).powi(r as i32)
}

/// Coupling β of the clean Ising model with `tanh(β/2) = p/(1−p)`, mirrored
/// about p = 1/2; infinite at p = 1/2.
pub fn annealed_beta(p: f64) -> f64 {
    -(1.0 - 2.0 * p).abs().ln()
}

/// `R₂` as the clean Ising two-point function at the mapped coupling. Bond
/// weights are `((1−p) + p s)²` for `s = σ_i σ_j`, which stay finite at
/// p = 1/2.
pub fn r2_annealed(lat: &Lattice, p: f64, x: usize, y: usize) -> Result<f64> {
    check_p(p)?;
    check_sites(lat, x, y)?;
    if lat.dim() > 2 {
        return Err(Error::InvalidParameter("annealed R2 needs d = 1 or 2".into()));
    }
    if x == y {
        return Ok(1.0);
    }
    let anti = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    let w = vec![[1.0, anti]; lat.n_links()];
    Ok(spin_sum(lat, &w, &[x, y])? / spin_sum(lat, &w, &[])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::lattice::boundary;
    use crate::ising::p_v_enumerate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ring_ratio_example() {
        let lat = Lattice::chain(6).unwrap();
        let got = corr_ratio(&lat, 0.25, &lat.empty_chain(), 0, 2).unwrap();
        let t: f64 = 1.0 / 3.0;
        let want = (t.powi(2) + t.powi(4)) / (1.0 + t.powi(6));
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn half_is_clean_zero_temperature() {
        for lat in [Lattice::chain(6).unwrap(), Lattice::square(3).unwrap()] {
            let all = lat.chain_from_links(0..lat.n_links());
            for (x, y) in [(0, 1), (0, lat.n_sites() - 1), (2, 4)] {
                assert!((corr_ratio(&lat, 0.5, &all, x, y).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn loop_rep_matches_enumeration_and_is_representative_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for lat in [
            Lattice::chain(4).unwrap(),
            Lattice::square(2).unwrap(),
            Lattice::square(3).unwrap(),
        ] {
            for _ in 0..5 {
                let chain = sample_chain(&lat, 0.4, &mut rng);
                let v = boundary(&lat, &chain);
                let want = p_v_enumerate(&lat, 0.25, &v).unwrap();
                let a = p_v_loop_rep(&lat, 0.25, &chain).unwrap();
                let b = p_v_loop_rep(&lat, 0.25, &lat.representative(&v)).unwrap();
                assert!((a - want).abs() < 1e-12, "{a} vs {want}");
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ratio_matches_enumeration_on_torus() {
        let lat = Lattice::square(3).unwrap();
        let t = SyndromeTable::enumerate(&lat, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..5 {
            let chain = sample_chain(&lat, 0.3, &mut rng);
            let v = boundary(&lat, &chain).0.to_mask();
            let want = t.get_mask(v ^ 0b10001) / t.get_mask(v);
            let got = corr_ratio(&lat, 0.2, &chain, 0, 4).unwrap();
            assert!((got - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(r1_closed_form_1d(0.5, 10), 1.0);
        assert_eq!(r1_closed_form_1d(0.0, 1), 0.0);
        assert!((r1_closed_form_1d(0.25, 2) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn annealed_example() {
        let lat = Lattice::chain(6).unwrap();
        let got = r2_annealed(&lat, 0.25, 0, 3).unwrap();
        let t: f64 = 0.6;
        let want = 2.0 * t.powi(3) / (1.0 + t.powi(6));
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.41274).abs() < 1e-5);
        assert!(((annealed_beta(0.25) / 2.0).tanh() - 1.0 / 3.0).abs() < 1e-15);
        assert!((r2_annealed(&lat, 0.5, 0, 3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quenched_trivial_limits() {
        let lat = Lattice::chain(6).unwrap();
        let e = r1_quenched(&lat, 0.0, 0, 3, QuenchedMode::Exact).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.stderr.is_none());
        let half = r1_quenched(&lat, 0.5, 0, 3, QuenchedMode::Exact).unwrap();
        assert!((half.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let lat = Lattice::square(3).unwrap();
        let mode = QuenchedMode::MonteCarlo {
            samples: 200,
            seed: 5,
        };
        let a = r1_quenched(&lat, 0.109, 0, 4, mode).unwrap();
        let b = r1_quenched(&lat, 0.109, 0, 4, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr.unwrap() > 0.0);
    }
}
