use crate::error::{Error, Result};
use crate::ising::lattice::{Lattice, Syndrome};

pub const MAX_ENUM_LINKS: usize = 24;

/// `P_v` for every syndrome `v`, by brute force over all `2^{dN}` chains.
/// Indexed by the site mask of `v`.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    lat: Lattice,
    p: f64,
    probs: Vec<f64>,
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

impl SyndromeTable {
    pub fn enumerate(lat: &Lattice, p: f64) -> Result<Self> {
        check_p(p)?;
        let links = lat.n_links();
        if links > MAX_ENUM_LINKS {
            return Err(Error::SizeLimit {
                what: "enumerated links",
                requested: links,
                limit: MAX_ENUM_LINKS,
            });
        }
        let ends: Vec<u64> = (0..links)
            .map(|k| {
                let (a, b) = lat.endpoints(k);
                (1u64 << a) ^ (1u64 << b)
            })
            .collect();
        let weight: Vec<f64> = (0..=links)
            .map(|w| p.powi(w as i32) * (1.0 - p).powi((links - w) as i32))
            .collect();
        let mut probs = vec![0.0; 1usize << lat.n_sites()];
        // Gray-code walk: one link toggles per step.
        let (mut v, mut w) = (0u64, 0usize);
        probs[0] += weight[0];
        let mut chain = 0u64;
        for i in 1u64..(1u64 << links) {
            let k = i.trailing_zeros() as usize;
            chain ^= 1 << k;
            v ^= ends[k];
            if chain >> k & 1 == 1 {
                w += 1;
            } else {
                w -= 1;
            }
            probs[v as usize] += weight[w];
        }
        Ok(Self {
            lat: *lat,
            p,
            probs,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn get(&self, v: &Syndrome) -> f64 {
        self.probs[v.0.to_mask() as usize]
    }

    pub fn get_mask(&self, mask: u64) -> f64 {
        self.probs[mask as usize]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// `R₁ = Σ_v √(P_v P_{v⊕{x,y}})`.
    pub fn r1(&self, x: usize, y: usize) -> f64 {
        let flip = if x == y { 0 } else { (1usize << x) ^ (1usize << y) };
        self.probs
            .iter()
            .enumerate()
            .map(|(v, &pv)| (pv * self.probs[v ^ flip]).sqrt())
            .sum()
    }

    /// `R₂ = Σ_v P_v P_{v⊕{x,y}} / Σ_v P_v²`.
    pub fn r2(&self, x: usize, y: usize) -> f64 {
        let flip = if x == y { 0 } else { (1usize << x) ^ (1usize << y) };
        let num: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(v, &pv)| pv * self.probs[v ^ flip])
            .sum();
        num / self.probs.iter().map(|p| p * p).sum::<f64>()
    }
}

pub fn p_v_enumerate(lat: &Lattice, p: f64, v: &Syndrome) -> Result<f64> {
    Ok(SyndromeTable::enumerate(lat, p)?.get(v))
}
