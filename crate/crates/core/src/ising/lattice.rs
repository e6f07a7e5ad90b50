use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Periodic hypercubic lattice of side `L` in `d` dimensions.
///
/// Sites are row-major with x fastest. Link `d·s + k` joins site `s` to its
/// neighbour in direction `+k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    d: usize,
    l: usize,
}

impl Lattice {
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidParameter(format!("dimension {d} not in 1..=3")));
        }
        if l < 2 {
            return Err(Error::InvalidParameter(format!("linear size {l} must be at least 2")));
        }
        Ok(Self { d, l })
    }

    pub fn chain(l: usize) -> Result<Self> {
        Self::new(1, l)
    }

    pub fn square(l: usize) -> Result<Self> {
        Self::new(2, l)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.l
    }

    pub fn n_sites(&self) -> usize {
        self.l.pow(self.d as u32)
    }

    pub fn n_links(&self) -> usize {
        self.d * self.n_sites()
    }

    pub fn coords(&self, site: usize) -> [usize; 3] {
        let mut c = [0; 3];
        let mut s = site;
        for k in 0..self.d {
            c[k] = s % self.l;
            s /= self.l;
        }
        c
    }

    pub fn site(&self, coords: [usize; 3]) -> usize {
        (0..self.d).rev().fold(0, |acc, k| acc * self.l + coords[k] % self.l)
    }

    /// Site reached from `site` by `steps` moves along `+dir`.
    pub fn shift(&self, site: usize, dir: usize, steps: usize) -> usize {
        let mut c = self.coords(site);
        c[dir] = (c[dir] + steps) % self.l;
        self.site(c)
    }

    pub fn link(&self, site: usize, dir: usize) -> usize {
        site * self.d + dir
    }

    pub fn endpoints(&self, link: usize) -> (usize, usize) {
        let (s, dir) = (link / self.d, link % self.d);
        (s, self.shift(s, dir, 1))
    }

    pub fn empty_chain(&self) -> ErrorChain {
        ErrorChain(BitSet::new(self.n_links()))
    }

    pub fn chain_from_links(&self, links: impl IntoIterator<Item = usize>) -> ErrorChain {
        ErrorChain(BitSet::from_indices(self.n_links(), links))
    }

    pub fn syndrome_from_sites(&self, sites: impl IntoIterator<Item = usize>) -> Syndrome {
        Syndrome(BitSet::from_indices(self.n_sites(), sites))
    }

    /// Links on the straight path of `steps` moves from `site` along `+dir`.
    pub fn straight_path(&self, site: usize, dir: usize, steps: usize) -> Vec<usize> {
        (0..steps)
            .map(|k| self.link(self.shift(site, dir, k), dir))
            .collect()
    }

    /// Representative chain with boundary `v`: syndrome sites are paired in
    /// increasing order and each pair is joined by an axis-by-axis path
    /// (x first, then y, then z) moving in the positive directions.
    pub fn representative(&self, v: &Syndrome) -> ErrorChain {
        let mut chain = self.empty_chain();
        let sites: Vec<usize> = v.0.ones().collect();
        for pair in sites.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            let (a, b) = (pair[0], pair[1]);
            let (ca, cb) = (self.coords(a), self.coords(b));
            let mut cur = a;
            for dir in 0..self.d {
                let steps = (cb[dir] + self.l - ca[dir]) % self.l;
                for link in self.straight_path(cur, dir, steps) {
                    chain.0.flip(link);
                }
                cur = self.shift(cur, dir, steps);
            }
        }
        chain
    }
}

/// Set ℓ of dephased links.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorChain(pub BitSet);

impl ErrorChain {
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }

    pub fn contains(&self, link: usize) -> bool {
        self.0.get(link)
    }

    pub fn xor(&self, other: &ErrorChain) -> ErrorChain {
        let mut out = self.clone();
        out.0.xor_with(&other.0);
        out
    }

    pub fn links(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

/// Set v of sites carrying a phase flip.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub BitSet);

impl Syndrome {
    pub fn contains(&self, site: usize) -> bool {
        self.0.get(site)
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        let mut out = self.clone();
        out.0.xor_with(&other.0);
        out
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

/// Mod-2 endpoint count of `chain` at every site.
pub fn boundary(lat: &Lattice, chain: &ErrorChain) -> Syndrome {
    let mut v = BitSet::new(lat.n_sites());
    for link in chain.links() {
        let (a, b) = lat.endpoints(link);
        v.flip(a);
        v.flip(b);
    }
    Syndrome(v)
}
