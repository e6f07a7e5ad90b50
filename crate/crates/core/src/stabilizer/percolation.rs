//! Bond-percolation ensemble of fully dephased clusters.
//!
//! Each link is dephased with probability `p`; a sample `ℓ` is the product of
//! `(1 + Π_C)/2` over its connected clusters `C`, so `R₁(x, y)` is 1 when `x`
//! and `y` share a cluster and 0 otherwise.

use crate::error::{Error, Result};
use crate::ising::{sample_chain, ErrorChain, Estimate, Lattice};
use crate::pauli::{Letter, PauliString};
use crate::rng::{mean_stderr, par_map_indexed, sample_rng};
use crate::stabilizer::group::StabilizerMixedState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercolationConfig {
    pub lattice: Lattice,
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
}

impl PercolationConfig {
    pub fn new(d: usize, l: usize, p: f64, samples: u64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        Ok(Self {
            lattice: Lattice::new(d, l)?,
            p,
            samples,
            seed,
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Cluster label of every site; a label is the smallest site in its cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<usize>,
}

impl ClusterLabels {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same_cluster(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().enumerate().filter(|&(i, &l)| i == l).count()
    }

    /// Clusters as sorted site lists, ordered by their smallest site.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.labels.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            if slot[l] == usize::MAX {
                slot[l] = out.len();
                out.push(Vec::new());
            }
            out[slot[l]].push(i);
        }
        out
    }
}

pub fn clusters_from_chain(lat: &Lattice, chain: &ErrorChain) -> ClusterLabels {
    let n = lat.n_sites();
    let mut uf = UnionFind::new(n);
    for link in chain.links() {
        let (a, b) = lat.endpoints(link);
        uf.union(a, b);
    }
    let mut min = vec![usize::MAX; n];
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    for (i, &r) in roots.iter().enumerate() {
        min[r] = min[r].min(i);
    }
    ClusterLabels {
        labels: roots.iter().map(|&r| min[r]).collect(),
    }
}

/// Sample `index` of the ensemble, drawn from its own counter-based stream.
pub fn percolation_sample(cfg: &PercolationConfig, index: u64) -> ClusterLabels {
    let mut rng = sample_rng(cfg.seed, index);
    let chain = sample_chain(&cfg.lattice, cfg.p, &mut rng);
    clusters_from_chain(&cfg.lattice, &chain)
}

pub fn percolation_r1(labels: &ClusterLabels, x: usize, y: usize) -> f64 {
    if labels.same_cluster(x, y) {
        1.0
    } else {
        0.0
    }
}

fn check_samples(cfg: &PercolationConfig) -> Result<()> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("zero samples".into()));
    }
    Ok(())
}

fn estimate(values: &[f64]) -> Estimate {
    let (value, stderr) = mean_stderr(values);
    Estimate {
        value,
        stderr: Some(stderr),
        n_samples: values.len() as u64,
    }
}

/// Ensemble mean of `R₁(x, y)`, i.e. the probability that `x` and `y` are
/// connected.
pub fn percolation_r1_mean(cfg: &PercolationConfig, x: usize, y: usize) -> Result<Estimate> {
    check_samples(cfg)?;
    let n = cfg.lattice.n_sites();
    if x >= n || y >= n {
        return Err(Error::InvalidParameter(format!("sites ({x}, {y}) outside 0..{n}")));
    }
    let values = par_map_indexed(cfg.samples, |i| percolation_r1(&percolation_sample(cfg, i), x, y));
    Ok(estimate(&values))
}

/// Ensemble mean of `R₁` at separation `r` along the axes, averaged over all
/// sites and all `d` axes within each sample.
pub fn percolation_r1_at_distance(cfg: &PercolationConfig, r: usize) -> Result<Estimate> {
    check_samples(cfg)?;
    let lat = cfg.lattice;
    let (n, d) = (lat.n_sites(), lat.dim());
    let values = par_map_indexed(cfg.samples, |i| {
        let labels = percolation_sample(cfg, i);
        let hits: usize = (0..d)
            .map(|dir| {
                (0..n)
                    .filter(|&x| labels.same_cluster(x, lat.shift(x, dir, r)))
                    .count()
            })
            .sum();
        hits as f64 / (n * d) as f64
    });
    Ok(estimate(&values))
}

/// `ρ_ℓ` as a stabilizer state: one generator `Π_C = ∏_{j∈C} X_j` per cluster.
pub fn cluster_state(labels: &ClusterLabels) -> Result<StabilizerMixedState> {
    let n = labels.labels.len();
    let gens = labels
        .clusters()
        .into_iter()
        .map(|c| PauliString::uniform(n, c, Letter::X))
        .collect();
    StabilizerMixedState::new(n, gens)
}

/// Values of `p` where `a(p) − b(p)` changes sign, by linear interpolation on
/// the shared grid `ps`.
pub fn find_crossings(ps: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mut out = Vec::new();
    for i in 0..diff.len().saturating_sub(1) {
        let (d0, d1) = (diff[i], diff[i + 1]);
        if d0 == 0.0 {
            out.push(ps[i]);
        } else if d0 * d1 < 0.0 {
            out.push(ps[i] + (ps[i + 1] - ps[i]) * d0 / (d0 - d1));
        }
    }
    if diff.last() == Some(&0.0) {
        out.push(ps[ps.len() - 1]);
    }
    out
}
