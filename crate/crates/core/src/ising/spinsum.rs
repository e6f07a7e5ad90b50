//! Exact sums `Σ_σ ∏_links w_link(σ_a σ_b) ∏_{i∈S} σ_i` over classical spins.
//!
//! Bond weights may be negative, so these are exact summations rather than
//! samplers.

use crate::error::{Error, Result};
use crate::ising::lattice::Lattice;

/// Weight of one link for aligned (`[0]`) and anti-aligned (`[1]`) spins.
pub type BondWeight = [f64; 2];

pub const MAX_BRUTE_FORCE_SITES: usize = 20;
pub const MAX_TRANSFER_WIDTH: usize = 12;

/// Sum by direct enumeration of all `2^N` configurations.
pub fn spin_sum_brute_force(lat: &Lattice, w: &[BondWeight], insert: &[usize]) -> Result<f64> {
    let n = lat.n_sites();
    if n > MAX_BRUTE_FORCE_SITES {
        return Err(Error::SizeLimit {
            what: "brute-force spin sites",
            requested: n,
            limit: MAX_BRUTE_FORCE_SITES,
        });
    }
    let ends: Vec<(usize, usize)> = (0..lat.n_links()).map(|k| lat.endpoints(k)).collect();
    let ins_mask: u64 = insert.iter().fold(0, |m, &i| m ^ (1u64 << i));
    let mut total = 0.0;
    for c in 0u64..(1u64 << n) {
        let mut prod = if (c & ins_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        for (k, &(a, b)) in ends.iter().enumerate() {
            prod *= w[k][(((c >> a) ^ (c >> b)) & 1) as usize];
        }
        total += prod;
    }
    Ok(total)
}

/// Sum by transfer matrices: 2×2 around the ring in d = 1, column-to-column
/// matrices of dimension `2^L` in d = 2.
pub fn spin_sum(lat: &Lattice, w: &[BondWeight], insert: &[usize]) -> Result<f64> {
    assert_eq!(w.len(), lat.n_links());
    match lat.dim() {
        1 => Ok(ring_sum(lat, w, insert)),
        2 => torus_sum(lat, w, insert),
        d => Err(Error::InvalidParameter(format!(
            "spin sums are implemented for d = 1, 2, not {d}"
        ))),
    }
}

fn ring_sum(lat: &Lattice, w: &[BondWeight], insert: &[usize]) -> f64 {
    let n = lat.n_sites();
    let mut flip = vec![false; n];
    for &i in insert {
        flip[i] ^= true;
    }
    // m[s0][s] = partial sum with spin 0 fixed to s0 and the current spin s.
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for site in 0..n {
        if flip[site] {
            for row in m.iter_mut() {
                row[1] = -row[1];
            }
        }
        let b = w[site];
        let next = |row: [f64; 2]| {
            [
                row[0] * b[0] + row[1] * b[1],
                row[0] * b[1] + row[1] * b[0],
            ]
        };
        m = [next(m[0]), next(m[1])];
    }
    m[0][0] + m[1][1]
}

fn torus_sum(lat: &Lattice, w: &[BondWeight], insert: &[usize]) -> Result<f64> {
    let l = lat.side();
    if l > MAX_TRANSFER_WIDTH {
        return Err(Error::SizeLimit {
            what: "transfer-matrix width",
            requested: l,
            limit: MAX_TRANSFER_WIDTH,
        });
    }
    let states = 1usize << l;
    let site = |x: usize, y: usize| lat.site([x, y, 0]);
    let mut flip = vec![false; lat.n_sites()];
    for &i in insert {
        flip[i] ^= true;
    }
    // Column x: diagonal factor from vertical bonds and insertions.
    let column_diag = |x: usize| -> Vec<f64> {
        (0..states)
            .map(|c| {
                let mut f = 1.0;
                for y in 0..l {
                    let s = site(x, y);
                    let up = (c >> y) & 1;
                    let next = (c >> ((y + 1) % l)) & 1;
                    f *= w[lat.link(s, 1)][up ^ next];
                    if flip[s] && up == 1 {
                        f = -f;
                    }
                }
                f
            })
            .collect()
    };
    let diags: Vec<Vec<f64>> = (0..l).map(column_diag).collect();
    let mut total = 0.0;
    let mut v = vec![0.0; states];
    let mut tmp = vec![0.0; states];
    for start in 0..states {
        v.iter_mut().for_each(|e| *e = 0.0);
        v[start] = 1.0;
        for x in 0..l {
            for (e, d) in v.iter_mut().zip(&diags[x]) {
                *e *= d;
            }
            // Horizontal bonds (x, y) -> (x + 1, y), one row at a time.
            for y in 0..l {
                let b = w[lat.link(site(x, y), 0)];
                let bit = 1usize << y;
                for c in 0..states {
                    let (same, other) = (v[c], v[c ^ bit]);
                    tmp[c] = same * b[0] + other * b[1];
                }
                std::mem::swap(&mut v, &mut tmp);
            }
        }
        total += v[start];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_weights(lat: &Lattice, rng: &mut ChaCha8Rng) -> Vec<BondWeight> {
        (0..lat.n_links())
            .map(|_| [rng.random::<f64>() + 0.2, rng.random::<f64>() * 2.0 - 1.0])
            .collect()
    }

    #[test]
    fn transfer_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for lat in [
            Lattice::chain(2).unwrap(),
            Lattice::chain(7).unwrap(),
            Lattice::square(2).unwrap(),
            Lattice::square(3).unwrap(),
            Lattice::square(4).unwrap(),
        ] {
            let w = random_weights(&lat, &mut rng);
            let n = lat.n_sites();
            for insert in [vec![], vec![0, n - 1], vec![1, 1], vec![0, 1, n / 2, n - 1]] {
                let a = spin_sum_brute_force(&lat, &w, &insert).unwrap();
                let b = spin_sum(&lat, &w, &insert).unwrap();
                assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{lat:?} {insert:?}");
            }
        }
    }
}
