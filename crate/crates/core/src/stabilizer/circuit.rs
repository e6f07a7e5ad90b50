//! Clifford circuits preparing canonical purifications, their text format and
//! a tableau simulator to check them.
//!
//! One gate per line:
//!
//! ```text
//! # n = 3
//! H L0
//! CX R2 L2
//! MZZ L0 L1 -> m0
//! X L1 ? m0 m1
//! ```
//!
//! `CX` lists the control first. A conditional gate fires when the parity of
//! the listed measurement bits is odd. Lines starting with `#` are comments;
//! the optional `# n = N` comment fixes the register size, otherwise it is
//! inferred from the largest label.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};
use crate::stabilizer::group::{same_group, StabilizerMixedState};
use crate::stabilizer::tableau::Tableau;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Qubit {
    pub side: Side,
    pub index: usize,
}

impl Qubit {
    pub fn l(index: usize) -> Self {
        Self { side: Side::L, index }
    }

    pub fn r(index: usize) -> Self {
        Self { side: Side::R, index }
    }

    /// Position in the doubled register: `L_i → i`, `R_i → n + i`.
    pub fn register_index(self, n: usize) -> usize {
        match self.side {
            Side::L => self.index,
            Side::R => n + self.index,
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::L { 'L' } else { 'R' };
        write!(f, "{s}{}", self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(Qubit),
    Cx { control: Qubit, target: Qubit },
    /// Measures `Z_a Z_b` into bit `bit` (1 for eigenvalue −1).
    Mzz { a: Qubit, b: Qubit, bit: usize },
    /// `X` on `q` when the parity of `bits` is odd.
    CondX { q: Qubit, bits: Vec<usize> },
    CondZ { q: Qubit, bits: Vec<usize> },
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = |f: &mut fmt::Formatter<'_>, letter: char, q: &Qubit, bits: &[usize]| {
            write!(f, "{letter} {q} ?")?;
            for b in bits {
                write!(f, " m{b}")?;
            }
            Ok(())
        };
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Cx { control, target } => write!(f, "CX {control} {target}"),
            Gate::Mzz { a, b, bit } => write!(f, "MZZ {a} {b} -> m{bit}"),
            Gate::CondX { q, bits } => cond(f, 'X', q, bits),
            Gate::CondZ { q, bits } => cond(f, 'Z', q, bits),
        }
    }
}

/// Gate list on `2n` qubits labelled `L0..L(n−1)`, `R0..R(n−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitIR {
    n: usize,
    gates: Vec<Gate>,
    n_bits: usize,
}

impl CircuitIR {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            n_bits: 0,
        }
    }

    /// Validates qubit ranges and that measurement bits are written once, in
    /// order, before any conditional reads them.
    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n);
        for (i, g) in gates.into_iter().enumerate() {
            c.push(g).map_err(|e| match e {
                Error::MalformedCircuit { message, .. } => Error::MalformedCircuit {
                    line: i + 1,
                    message,
                },
                other => other,
            })?;
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    fn check_qubit(&self, q: Qubit) -> Result<()> {
        if q.index >= self.n {
            return Err(Error::MalformedCircuit {
                line: self.gates.len() + 1,
                message: format!("qubit {q} outside a register of {} per side", self.n),
            });
        }
        Ok(())
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        let bad = |message: String, line: usize| Error::MalformedCircuit { line, message };
        let line = self.gates.len() + 1;
        match &g {
            Gate::H(q) => self.check_qubit(*q)?,
            Gate::Cx { control, target } | Gate::Mzz { a: control, b: target, .. } => {
                self.check_qubit(*control)?;
                self.check_qubit(*target)?;
                if control == target {
                    return Err(bad(format!("repeated qubit {control}"), line));
                }
            }
            Gate::CondX { q, bits } | Gate::CondZ { q, bits } => {
                self.check_qubit(*q)?;
                if bits.is_empty() {
                    return Err(bad("conditional without bits".into(), line));
                }
                if let Some(b) = bits.iter().find(|&&b| b >= self.n_bits) {
                    return Err(bad(format!("bit m{b} read before it is measured"), line));
                }
            }
        }
        if let Gate::Mzz { bit, .. } = g {
            if bit != self.n_bits {
                return Err(bad(
                    format!("measurement writes m{bit}, expected m{}", self.n_bits),
                    line,
                ));
            }
            self.n_bits += 1;
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }
}

impl fmt::Display for CircuitIR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# n = {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<Qubit> {
    let bad = || Error::MalformedCircuit {
        line,
        message: format!("bad qubit label {tok:?}"),
    };
    let (side, rest) = match tok.split_at_checked(1) {
        Some(("L", r)) => (Side::L, r),
        Some(("R", r)) => (Side::R, r),
        _ => return Err(bad()),
    };
    let index = rest.parse().map_err(|_| bad())?;
    Ok(Qubit { side, index })
}

fn parse_bit(tok: &str, line: usize) -> Result<usize> {
    tok.strip_prefix('m')
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::MalformedCircuit {
            line,
            message: format!("bad bit label {tok:?}"),
        })
}

impl FromStr for CircuitIR {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut declared = None;
        let mut parsed: Vec<(usize, Gate)> = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim();
            if let Some(comment) = text.strip_prefix('#') {
                let c: String = comment.split_whitespace().collect();
                if let Some(v) = c.strip_prefix("n=") {
                    declared = Some(v.parse::<usize>().map_err(|_| Error::MalformedCircuit {
                        line,
                        message: format!("bad size declaration {text:?}"),
                    })?);
                }
                continue;
            }
            if text.is_empty() {
                continue;
            }
            let toks: Vec<&str> = text.split_whitespace().collect();
            let bad = |message: &str| Error::MalformedCircuit {
                line,
                message: message.to_string(),
            };
            let gate = match toks.as_slice() {
                ["H", q] => Gate::H(parse_qubit(q, line)?),
                ["CX", c, t] => Gate::Cx {
                    control: parse_qubit(c, line)?,
                    target: parse_qubit(t, line)?,
                },
                ["MZZ", a, b, "->", m] => Gate::Mzz {
                    a: parse_qubit(a, line)?,
                    b: parse_qubit(b, line)?,
                    bit: parse_bit(m, line)?,
                },
                [op @ ("X" | "Z"), q, "?", bits @ ..] => {
                    let q = parse_qubit(q, line)?;
                    let bits = bits
                        .iter()
                        .map(|b| parse_bit(b, line))
                        .collect::<Result<Vec<_>>>()?;
                    if *op == "X" {
                        Gate::CondX { q, bits }
                    } else {
                        Gate::CondZ { q, bits }
                    }
                }
                [op, ..] if ["H", "CX", "MZZ", "X", "Z"].contains(op) => {
                    return Err(bad(&format!("wrong operands for {op}")))
                }
                [op, ..] => return Err(bad(&format!("unknown gate {op:?}"))),
                [] => unreachable!(),
            };
            parsed.push((line, gate));
        }
        let inferred = parsed
            .iter()
            .flat_map(|(_, g)| match g {
                Gate::H(q) | Gate::CondX { q, .. } | Gate::CondZ { q, .. } => vec![*q],
                Gate::Cx { control, target } => vec![*control, *target],
                Gate::Mzz { a, b, .. } => vec![*a, *b],
            })
            .map(|q| q.index + 1)
            .max()
            .unwrap_or(0);
        let mut c = CircuitIR::new(declared.unwrap_or(inferred));
        for (line, g) in parsed {
            c.push(g).map_err(|e| match e {
                Error::MalformedCircuit { message, .. } => Error::MalformedCircuit { line, message },
                other => other,
            })?;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitStrategy {
    /// GHZ by a CX chain, depth linear in the cluster size.
    Ladder,
    /// GHZ by `Z_iZ_j` measurements on a path and parity-conditioned `X`
    /// corrections, constant quantum depth.
    MeasureFeedback,
}

impl FromStr for EmitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ladder" => Ok(Self::Ladder),
            "measure-feedback" | "feedback" => Ok(Self::MeasureFeedback),
            _ => Err(Error::InvalidParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

/// Partition of the qubits if `state` is generated by `∏_{j∈C} X_j` over
/// disjoint clusters `C` covering every qubit; this covers `ρ_Π`, the
/// percolation states `ρ_ℓ` and `|+⟩^⊗N`.
pub fn cluster_partition(state: &StabilizerMixedState) -> Result<Vec<Vec<usize>>> {
    let n = state.n_qubits();
    let unsupported = |why: &str| Error::UnsupportedFamily(why.to_string());
    let mut owner = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for g in state.generators() {
        if g.z_words().iter().any(|&w| w != 0) || g.phase_exponent() != 0 {
            return Err(unsupported("generators must be +X strings"));
        }
        // Merge all clusters the support touches.
        let support = g.support();
        let mut merged: Vec<usize> = support.clone();
        let mut touched: Vec<usize> = support
            .iter()
            .filter(|&&q| owner[q] != usize::MAX)
            .map(|&q| owner[q])
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for &c in touched.iter().rev() {
            merged.extend(clusters.remove(c));
        }
        merged.sort_unstable();
        merged.dedup();
        clusters.push(merged);
        owner.iter_mut().for_each(|o| *o = usize::MAX);
        for (c, sites) in clusters.iter().enumerate() {
            for &q in sites {
                owner[q] = c;
            }
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(unsupported("every qubit must lie in some cluster"));
    }
    let parities: Vec<PauliString> = clusters
        .iter()
        .map(|c| PauliString::uniform(n, c.iter().copied(), Letter::X))
        .collect();
    if !same_group(&parities, state.generators()) {
        return Err(unsupported("group is not generated by cluster parities"));
    }
    clusters.sort();
    Ok(clusters)
}

/// Circuit preparing the canonical purification of a cluster-parity state
/// from `|0⟩^⊗2N`: a GHZ state on each cluster of `L`, `|+⟩` on `R`, then
/// `CX^{R→L}` on every site.
pub fn emit_cp_circuit(state: &StabilizerMixedState, strategy: EmitStrategy) -> Result<CircuitIR> {
    let clusters = cluster_partition(state)?;
    let n = state.n_qubits();
    let mut c = CircuitIR::new(n);
    for cluster in &clusters {
        let root = Qubit::l(cluster[0]);
        match strategy {
            EmitStrategy::Ladder => {
                c.push(Gate::H(root))?;
                for w in cluster.windows(2) {
                    c.push(Gate::Cx {
                        control: Qubit::l(w[0]),
                        target: Qubit::l(w[1]),
                    })?;
                }
            }
            EmitStrategy::MeasureFeedback => {
                for &j in cluster {
                    c.push(Gate::H(Qubit::l(j)))?;
                }
                let first = c.n_bits();
                for w in cluster.windows(2) {
                    let bit = c.n_bits();
                    c.push(Gate::Mzz {
                        a: Qubit::l(w[0]),
                        b: Qubit::l(w[1]),
                        bit,
                    })?;
                }
                // Site k of the path flips iff the bonds between it and the
                // root carry odd parity.
                for (k, &j) in cluster.iter().enumerate().skip(1) {
                    c.push(Gate::CondX {
                        q: Qubit::l(j),
                        bits: (first..first + k).collect(),
                    })?;
                }
            }
        }
    }
    for j in 0..n {
        c.push(Gate::H(Qubit::r(j)))?;
    }
    for j in 0..n {
        c.push(Gate::Cx {
            control: Qubit::r(j),
            target: Qubit::l(j),
        })?;
    }
    Ok(c)
}

/// Runs `c` on `|0⟩^⊗2N` and returns the final stabilizer group.
pub fn simulate_circuit<R: Rng + ?Sized>(c: &CircuitIR, rng: &mut R) -> Result<StabilizerMixedState> {
    let n = c.n();
    let total = 2 * n;
    let mut t = Tableau::zero(total);
    let mut bits: Vec<bool> = Vec::with_capacity(c.n_bits());
    let idx = |q: &Qubit| q.register_index(n);
    for g in c.gates() {
        match g {
            Gate::H(q) => t.h(idx(q)),
            Gate::Cx { control, target } => t.cx(idx(control), idx(target)),
            Gate::Mzz { a, b, .. } => {
                let zz = PauliString::from_sites(total, &[(idx(a), Letter::Z), (idx(b), Letter::Z)]);
                bits.push(t.measure(&zz, rng));
            }
            Gate::CondX { q, bits: on } | Gate::CondZ { q, bits: on } => {
                if on.iter().filter(|&&b| bits[b]).count() % 2 == 1 {
                    let letter = if matches!(g, Gate::CondX { .. }) {
                        Letter::X
                    } else {
                        Letter::Z
                    };
                    t.apply_pauli(&PauliString::single(total, idx(q), letter));
                }
            }
        }
    }
    t.to_state()
}

pub fn simulate_circuit_seeded(c: &CircuitIR, seed: u64) -> Result<StabilizerMixedState> {
    simulate_circuit(c, &mut ChaCha8Rng::seed_from_u64(seed))
}
