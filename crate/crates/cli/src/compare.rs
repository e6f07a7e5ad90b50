//! Cross-checks between backends on random small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swssb_core::diag::Correlators;
use swssb_core::exact::{
    all_correlators, apply_channels, build_reference_state, renyi1, renyi2, PauliChannel,
    ReferenceKind,
};
use swssb_core::fermion::r1_tfim;
use swssb_core::ising::{Lattice, SyndromeTable};
use swssb_core::stabilizer::{
    diagnostics_from_syndromes, random_stabilizer_state, unravel_pauli_channel,
    DEFAULT_CLASS_BUDGET,
};
use swssb_core::{DiagnosticKind, Letter, PauliString};

use crate::error::{CliResult, Context};
use crate::output::{Cell, Table};

pub const STAB_TOL: f64 = 1e-9;
pub const ISING_TOL: f64 = 1e-10;
pub const FERMION_TOL: f64 = 1e-8;

fn zz(n: usize, x: usize, y: usize) -> PauliString {
    PauliString::single(n, x, Letter::Z).mul(&PauliString::single(n, y, Letter::Z))
}

fn correlator_gap(a: &Correlators, b: &Correlators) -> f64 {
    DiagnosticKind::ALL
        .iter()
        .map(|&k| match (a.get(k).finite(), b.get(k).finite()) {
            (Some(x), Some(y)) => (x - y).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Random stabilizer code on 4 qubits under two random ZZ dephasing channels.
fn stab_vs_dense(rng: &mut ChaCha8Rng) -> CliResult<f64> {
    let n = 4;
    let k = rng.random_range(0..n);
    let state = random_stabilizer_state(n, k, rng).context("random stabilizer state")?;
    let channels: Vec<PauliChannel> = (0..2)
        .map(|_| {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            PauliChannel::zz_dephasing(n, i, j, rng.random())
        })
        .collect::<swssb_core::Result<_>>()
        .context("channel")?;
    let op = zz(n, 0, n - 1);
    let dist = unravel_pauli_channel(&state, &channels, DEFAULT_CLASS_BUDGET).context("unravel")?;
    let stab = diagnostics_from_syndromes(&dist, &op).context("stabilizer correlators")?;
    let rho = apply_channels(&state.to_density().context("density")?, &channels).context("dense channel")?;
    let dense = all_correlators(&rho, &op, &PauliString::identity(n)).context("dense correlators")?;
    Ok(correlator_gap(&stab, &dense))
}

/// Dephased ring of 6 sites: syndrome enumeration against dense R₁ and R₂.
fn ising_vs_dense(rng: &mut ChaCha8Rng) -> CliResult<f64> {
    let n = 6;
    let lattice = Lattice::chain(n).context("lattice")?;
    let p = 0.5 * rng.random::<f64>();
    let y = rng.random_range(1..n);
    let table = SyndromeTable::enumerate(&lattice, p).context("enumeration")?;
    let rho = build_reference_state(&ReferenceKind::Dephased { lattice, p }).context("dense state")?;
    let (zx, zy) = (
        PauliString::single(n, 0, Letter::Z),
        PauliString::single(n, y, Letter::Z),
    );
    let r1 = renyi1(&rho, &zx, &zy).context("dense renyi1")?;
    let r2 = renyi2(&rho, &zx, &zy).context("dense renyi2")?;
    Ok((table.r1(0, y) - r1).abs().max((table.r2(0, y) - r2).abs()))
}

/// Parity-even Gibbs state on a ring of 6 sites.
fn fermion_vs_dense(rng: &mut ChaCha8Rng) -> CliResult<f64> {
    let n = 6;
    let g = 2.0 * rng.random::<f64>();
    let beta = 0.2 + 2.8 * rng.random::<f64>();
    let y = rng.random_range(1..n);
    let free = r1_tfim(n, 1.0, g, beta, 0, y).context("free-fermion R1")?;
    let rho = build_reference_state(&ReferenceKind::ParityGibbs { n, j: 1.0, g, beta })
        .context("dense state")?;
    let dense = renyi1(
        &rho,
        &PauliString::single(n, 0, Letter::Z),
        &PauliString::single(n, y, Letter::Z),
    )
    .context("dense renyi1")?;
    Ok((free - dense).abs())
}

type Check = fn(&mut ChaCha8Rng) -> CliResult<f64>;

/// One row per backend pair with the largest discrepancy over `instances`
/// random cases, and the number of pairs over tolerance.
pub fn compare_backends(instances: usize, seed: u64) -> CliResult<(Table, usize)> {
    let checks: [(&str, Check, f64); 3] = [
        ("stab-exact", stab_vs_dense, STAB_TOL),
        ("ising-exact", ising_vs_dense, ISING_TOL),
        ("fermion-exact", fermion_vs_dense, FERMION_TOL),
    ];
    let mut t = Table::new(&["pair", "instances", "max_abs_diff", "tolerance", "pass"]);
    let mut failures = 0;
    for (i, (name, check, tol)) in checks.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            worst = worst.max(check(&mut rng)?);
        }
        let pass = worst <= tol;
        if !pass {
            failures += 1;
        }
        t.push(vec![
            name.into(),
            instances.into(),
            Cell::Float(worst),
            tol.into(),
            (if pass { "true" } else { "false" }).into(),
        ]);
    }
    Ok((t, failures))
}
