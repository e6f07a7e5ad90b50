use std::collections::BTreeMap;

use crate::bits::BitSet;
use crate::diag::{Correlators, ExtendedReal};
use crate::error::{Error, Result};
use crate::exact::PauliChannel;
use crate::pauli::PauliString;
use crate::stabilizer::group::{Echelon, StabilizerMixedState};

pub const DEFAULT_CLASS_BUDGET: usize = 1 << 20;

/// Probabilities `P_s` of the syndrome classes reached by a Pauli channel,
/// keyed by the generator-sign pattern `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeDistribution {
    state: StabilizerMixedState,
    probs: BTreeMap<BitSet, f64>,
}

/// Bit `a` set iff `e` anticommutes with generator `a`.
pub fn syndrome_of(state: &StabilizerMixedState, e: &PauliString) -> BitSet {
    let gens = state.generators();
    let mut s = BitSet::new(gens.len());
    for (a, g) in gens.iter().enumerate() {
        if g.anticommutes_with(e) {
            s.flip(a);
        }
    }
    s
}

impl SyndromeDistribution {
    pub fn state(&self) -> &StabilizerMixedState {
        &self.state
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, s: &BitSet) -> f64 {
        self.probs.get(s).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitSet, f64)> {
        self.probs.iter().map(|(s, &p)| (s, p))
    }
}

/// Composes the channels in order and collects `P_s = Σ_{e∈s} p_e`. Zero-weight
/// terms are dropped so every stored class has `P_s > 0`.
pub fn unravel_pauli_channel(
    state: &StabilizerMixedState,
    channels: &[PauliChannel],
    class_budget: usize,
) -> Result<SyndromeDistribution> {
    let n = state.n_qubits();
    let mut probs = BTreeMap::new();
    probs.insert(BitSet::new(state.generators().len()), 1.0);
    for ch in channels {
        if ch.n_qubits() != n {
            return Err(Error::QubitMismatch {
                expected: n,
                found: ch.n_qubits(),
            });
        }
        let moves: Vec<(f64, BitSet)> = ch
            .terms()
            .iter()
            .filter(|(p, _)| *p > 0.0)
            .map(|(p, e)| (*p, syndrome_of(state, e)))
            .collect();
        let mut next: BTreeMap<BitSet, f64> = BTreeMap::new();
        for (s, ps) in &probs {
            for (pe, ds) in &moves {
                let mut t = s.clone();
                t.xor_with(ds);
                *next.entry(t).or_insert(0.0) += ps * pe;
            }
            if next.len() > class_budget {
                return Err(Error::ClassExplosion {
                    count: next.len(),
                    limit: class_budget,
                });
            }
        }
        probs = next;
    }
    Ok(SyndromeDistribution {
        state: state.clone(),
        probs,
    })
}

/// `R₁ = F = Σ_s √(P_s P_{s⊕o})`, `D₁ = ½Σ|P_s − P_{s⊕o}|`,
/// `𝒟 = Σ_s P_s ln(P_s/P_{s⊕o})` and `R₂ = Σ P_s P_{s⊕o} / Σ P_s²`, where `o`
/// is the syndrome of `op`.
pub fn diagnostics_from_syndromes(dist: &SyndromeDistribution, op: &PauliString) -> Result<Correlators> {
    if op.n_qubits() != dist.state.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: dist.state.n_qubits(),
            found: op.n_qubits(),
        });
    }
    let o = syndrome_of(&dist.state, op);
    let (mut r1, mut d1, mut num, mut den) = (0.0, 0.0, 0.0, 0.0);
    let mut drel = 0.0;
    let mut infinite = false;
    for (s, &ps) in &dist.probs {
        let mut t = s.clone();
        t.xor_with(&o);
        let po = dist.get(&t);
        r1 += (ps * po).sqrt();
        num += ps * po;
        den += ps * ps;
        if po > 0.0 {
            d1 += 0.5 * (ps - po).abs();
            drel += ps * (ps / po).ln();
        } else {
            // The partner class is absent; its own term contributes P_s again.
            d1 += ps;
            infinite = true;
        }
    }
    Ok(Correlators {
        r1,
        r2: num / den,
        f: r1,
        d1,
        drel: if infinite {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::Finite(drel)
        },
    })
}

pub const MAX_GIBBS_RANK: usize = 24;

/// `R₁ = F = tr exp(β Σ_a J_a^O c_a g_a) / tr exp(β Σ_a c_a g_a)` for
/// `ρ ∝ exp(β Σ_a c_a g_a)` with commuting Pauli terms; `J_a^O = 1` when `O`
/// commutes with `g_a` and 0 otherwise.
pub fn commuting_gibbs_r1_weighted(
    terms: &[(f64, PauliString)],
    beta: f64,
    op: &PauliString,
) -> Result<f64> {
    for (a, (_, g)) in terms.iter().enumerate() {
        if !g.is_hermitian() {
            return Err(Error::InvalidParameter(format!("term {g} is not Hermitian")));
        }
        if g.n_qubits() != op.n_qubits() {
            return Err(Error::QubitMismatch {
                expected: op.n_qubits(),
                found: g.n_qubits(),
            });
        }
        for b in 0..a {
            if g.anticommutes_with(&terms[b].1) {
                return Err(Error::NonCommuting(b, a));
            }
        }
    }
    // Express each term as ± a product of an independent subset.
    let mut ech = Echelon::new(terms.len());
    let mut basis = Vec::new();
    for (a, (_, g)) in terms.iter().enumerate() {
        if ech.insert(g, basis.len()) {
            basis.push(a);
        }
    }
    let rank = basis.len();
    if rank > MAX_GIBBS_RANK {
        return Err(Error::SizeLimit {
            what: "independent Gibbs terms",
            requested: rank,
            limit: MAX_GIBBS_RANK,
        });
    }
    // Term a evaluates to sign_a · ∏_{b ∈ mask_a} λ_b on the joint eigenspace λ.
    let ech = {
        let mut e = Echelon::new(rank);
        for (i, &a) in basis.iter().enumerate() {
            e.insert(&terms[a].1, i);
        }
        e
    };
    let decomposed: Vec<(f64, u64, bool)> = terms
        .iter()
        .map(|(c, g)| {
            let (r, combo) = ech.reduce(g);
            debug_assert!(r.is_identity_up_to_phase());
            let mask = combo.ones().fold(0u64, |m, b| m | (1 << b));
            (*c, mask, r.phase_exponent() == 2)
        })
        .collect();
    let keep: Vec<bool> = terms.iter().map(|(_, g)| g.commutes_with(op)).collect();
    let log_trace = |use_term: &dyn Fn(usize) -> bool| -> f64 {
        let exps: Vec<f64> = (0u64..(1u64 << rank))
            .map(|lam| {
                decomposed
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| use_term(*a))
                    .map(|(_, &(c, mask, neg))| {
                        let odd = ((lam & mask).count_ones() % 2 == 1) ^ neg;
                        if odd {
                            -beta * c
                        } else {
                            beta * c
                        }
                    })
                    .sum()
            })
            .collect();
        let max = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        max + exps.iter().map(|e| (e - max).exp()).sum::<f64>().ln()
    };
    let num = log_trace(&|a| keep[a]);
    let den = log_trace(&|_| true);
    Ok((num - den).exp())
}

/// [`commuting_gibbs_r1_weighted`] for `H = −Σ_a g_a`.
pub fn commuting_gibbs_r1(terms: &[PauliString], beta: f64, op: &PauliString) -> Result<f64> {
    let weighted: Vec<(f64, PauliString)> = terms.iter().map(|g| (1.0, g.clone())).collect();
    commuting_gibbs_r1_weighted(&weighted, beta, op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::all_correlators;
    use crate::exact::{apply_channels, projected_gibbs, renyi1};
    use crate::linalg::ComplexMatrix;
    use crate::pauli::Letter;
    use crate::stabilizer::random_stabilizer_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plus_state(n: usize) -> StabilizerMixedState {
        StabilizerMixedState::new(n, (0..n).map(|q| PauliString::single(n, q, Letter::X)).collect())
            .unwrap()
    }

    fn zz(n: usize, i: usize, j: usize) -> PauliString {
        PauliString::single(n, i, Letter::Z).mul(&PauliString::single(n, j, Letter::Z))
    }

    #[test]
    fn identity_channel_single_class() {
        let s = plus_state(3);
        let d = unravel_pauli_channel(&s, &[PauliChannel::identity(3)], 16).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(&BitSet::new(3)), 1.0);
    }

    #[test]
    fn full_dephasing_ring_is_uniform() {
        let s = plus_state(3);
        let chans: Vec<PauliChannel> = (0..3)
            .map(|i| PauliChannel::zz_dephasing(3, i, (i + 1) % 3, 0.5).unwrap())
            .collect();
        let d = unravel_pauli_channel(&s, &chans, 16).unwrap();
        assert_eq!(d.len(), 4);
        for (_, p) in d.iter() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        assert!(unravel_pauli_channel(&s, &chans, 2).is_err());
    }

    #[test]
    fn trivial_diagnostics() {
        let pi = StabilizerMixedState::new(4, vec![PauliString::uniform(4, 0..4, Letter::X)]).unwrap();
        let d = unravel_pauli_channel(&pi, &[], 4).unwrap();
        let c = diagnostics_from_syndromes(&d, &zz(4, 0, 2)).unwrap();
        assert_eq!((c.r1, c.f, c.r2, c.d1), (1.0, 1.0, 1.0, 0.0));
        assert_eq!(c.drel, ExtendedReal::Finite(0.0));

        let d = unravel_pauli_channel(&plus_state(4), &[], 4).unwrap();
        let c = diagnostics_from_syndromes(&d, &zz(4, 0, 2)).unwrap();
        assert_eq!((c.r1, c.d1), (0.0, 1.0));
        assert_eq!(c.drel, ExtendedReal::PosInf);
    }

    fn random_channel<R: Rng>(n: usize, rng: &mut R) -> PauliChannel {
        let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let mut terms = vec![];
        let mut w: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum::<f64>() + 1.0;
        w.iter_mut().for_each(|x| *x /= total);
        terms.push((1.0 / total, PauliString::identity(n)));
        for x in w {
            let e = PauliString::from_sites(
                n,
                &[(a, letters[rng.random_range(0..4)]), (b, letters[rng.random_range(0..4)])],
            );
            terms.push((x, e));
        }
        PauliChannel::new(terms).unwrap()
    }

    #[test]
    fn matches_dense_backend() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..12 {
            let n = rng.random_range(2..=4);
            let k = rng.random_range(0..n);
            let s = random_stabilizer_state(n, k, &mut rng).unwrap();
            let chans: Vec<PauliChannel> = (0..2).map(|_| random_channel(n, &mut rng)).collect();
            let dist = unravel_pauli_channel(&s, &chans, 1 << 10).unwrap();
            let rho = apply_channels(&s.to_density().unwrap(), &chans).unwrap();
            let op = zz(n, 0, n - 1);
            let got = diagnostics_from_syndromes(&dist, &op).unwrap();
            let want = all_correlators(&rho, &op, &PauliString::identity(n)).unwrap();
            assert!((got.r1 - want.r1).abs() < 1e-9, "{got:?} {want:?}");
            assert!((got.f - want.f).abs() < 1e-9, "{got:?} {want:?}");
            assert!((got.r2 - want.r2).abs() < 1e-9);
            assert!((got.d1 - want.d1).abs() < 1e-9);
            assert!(got.drel.approx_eq(want.drel, 1e-8), "{got:?} {want:?}");
        }
    }

    #[test]
    fn sech_squared_limit() {
        let n = 4;
        let terms: Vec<PauliString> = (0..n).map(|q| PauliString::single(n, q, Letter::X)).collect();
        let r = commuting_gibbs_r1(&terms, 1.0, &zz(n, 0, 2)).unwrap();
        let want = 1.0 / 1f64.cosh().powi(2);
        assert!((r - want).abs() < 1e-14);
        assert!((r - 0.419974).abs() < 1e-6);
        assert_eq!(commuting_gibbs_r1(&terms, 1.0, &terms[1]).unwrap(), 1.0);
        let bad = [terms[0].clone(), PauliString::single(n, 0, Letter::Z)];
        assert_eq!(commuting_gibbs_r1(&bad, 1.0, &terms[0]), Err(Error::NonCommuting(0, 1)));
    }

    /// Dense `exp(β Σ c_a g_a)` normalized, then the dense Rényi-1.
    fn dense_gibbs_r1(n: usize, terms: &[PauliString], beta: f64, op: &PauliString) -> f64 {
        let d = 1usize << n;
        let mut h = ComplexMatrix::zeros(d, d);
        for g in terms {
            h -= g.to_dense();
        }
        let rho = projected_gibbs(n, &h, beta, None).unwrap();
        renyi1(&rho, op, &PauliString::identity(n)).unwrap()
    }

    #[test]
    fn toric_patch_matches_dense() {
        // 2×2 torus, qubits on links: link 2·site + dir.
        let n = 8;
        let link = |x: usize, y: usize, dir: usize| 2 * ((y % 2) * 2 + x % 2) + dir;
        let mut terms = Vec::new();
        for y in 0..2 {
            for x in 0..2 {
                let star = [link(x, y, 0), link(x, y, 1), link(x + 1, y, 0), link(x, y + 1, 1)];
                let plaq = [link(x, y, 0), link(x, y, 1), link(x, y + 1, 0), link(x + 1, y, 1)];
                let mut s = PauliString::identity(n);
                for q in star {
                    s.mul_assign_right(&PauliString::single(n, q, Letter::X));
                }
                let mut p = PauliString::identity(n);
                for q in plaq {
                    p.mul_assign_right(&PauliString::single(n, q, Letter::Z));
                }
                terms.push(s);
                terms.push(p);
            }
        }
        for op in [zz(n, 0, 5), PauliString::single(n, 3, Letter::X), zz(n, 1, 2)] {
            let got = commuting_gibbs_r1(&terms, 0.7, &op).unwrap();
            let want = dense_gibbs_r1(n, &terms, 0.7, &op);
            assert!((got - want).abs() < 1e-9, "{op}: {got} vs {want}");
        }
    }
}
