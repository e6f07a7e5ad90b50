use std::time::Instant;

use sha2::{Digest, Sha256};
use swssb_core::diag::Correlators;
use swssb_core::exact::{all_correlators, build_reference_state, dephasing_channels, ReferenceKind};
use swssb_core::fermion::sweep_fig_s1;
use swssb_core::ising::{r1_quenched, r2_annealed, Lattice, QuenchedMode};
use swssb_core::stabilizer::{
    diagnostics_from_syndromes, percolation_r1_at_distance, unravel_pauli_channel,
    PercolationConfig, StabilizerMixedState, DEFAULT_CLASS_BUDGET,
};
use swssb_core::{DiagnosticKind, Letter, PauliString};

use crate::compare::compare_backends;
use crate::config::{
    BackendConfig, ExperimentConfig, IsingConfig, IsingDiagnostic, IsingMode, PercConfig,
    StateConfig, StateSpec, TfimConfig,
};
use crate::error::{CliError, CliResult, Context};
use crate::output::{Cell, Metadata, Table, SCHEMA_VERSION};

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// Comparisons over tolerance; always zero outside `compare`.
    pub failures: usize,
    pub metadata: Metadata,
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    Sha256::digest(cfg.to_string().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs on a dedicated pool of `threads` workers (all cores when `None`).
/// Results do not depend on the thread count.
pub fn run(cfg: &ExperimentConfig, threads: Option<usize>) -> CliResult<RunOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let (table, failures) = pool.install(|| dispatch(cfg))?;
    let metadata = Metadata {
        schema: SCHEMA_VERSION,
        backend: cfg.backend.name().to_string(),
        config_hash: config_hash(cfg),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        threads: pool.current_num_threads(),
        rows: table.rows.len(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput {
        table,
        failures,
        metadata,
    })
}

fn dispatch(cfg: &ExperimentConfig) -> CliResult<(Table, usize)> {
    let seed = cfg.seed.unwrap_or(0);
    let samples = cfg.samples_or_default();
    match &cfg.backend {
        BackendConfig::Exact(c) => Ok((run_exact(c)?, 0)),
        BackendConfig::Stab(c) => Ok((run_stab(c)?, 0)),
        BackendConfig::Ising(c) => Ok((run_ising(c, samples, seed)?, 0)),
        BackendConfig::Perc(c) => Ok((run_perc(c, samples, seed)?, 0)),
        BackendConfig::Tfim(c) => Ok((run_tfim(c)?, 0)),
        BackendConfig::Compare(c) => compare_backends(c.instances, seed),
    }
}

fn zz(n: usize, x: usize, y: usize) -> PauliString {
    PauliString::single(n, x, Letter::Z).mul(&PauliString::single(n, y, Letter::Z))
}

fn state_label(s: &StateSpec) -> &'static str {
    match s {
        StateSpec::Product { .. } => "product",
        StateSpec::Pi { .. } => "pi",
        StateSpec::Dephased { .. } => "dephased",
        StateSpec::Gibbs { .. } => "gibbs",
    }
}

fn correlator_table(c: &StateConfig, backend: &str, corr: &Correlators) -> Table {
    let mut t = Table::new(&["backend", "state", "n", "x", "y", "diagnostic", "value"]);
    for kind in DiagnosticKind::ALL {
        t.push(vec![
            backend.into(),
            state_label(&c.state).into(),
            c.state.n_qubits().into(),
            c.x.into(),
            c.y.into(),
            kind.name().into(),
            Cell::Ext(corr.get(kind)),
        ]);
    }
    t
}

fn run_exact(c: &StateConfig) -> CliResult<Table> {
    let kind = match c.state {
        StateSpec::Product { n } => ReferenceKind::Product { n },
        StateSpec::Pi { n } => ReferenceKind::Pi { n },
        StateSpec::Dephased { d, l, p } => ReferenceKind::Dephased {
            lattice: Lattice::new(d, l).context("lattice")?,
            p,
        },
        StateSpec::Gibbs { n, j, g, beta } => ReferenceKind::ParityGibbs { n, j, g, beta },
    };
    let rho = build_reference_state(&kind).context("building the dense state")?;
    let n = c.state.n_qubits();
    let corr = all_correlators(&rho, &zz(n, c.x, c.y), &PauliString::identity(n))
        .context("dense correlators")?;
    Ok(correlator_table(c, "exact", &corr))
}

fn run_stab(c: &StateConfig) -> CliResult<Table> {
    let n = c.state.n_qubits();
    let xs = |n: usize| (0..n).map(|q| PauliString::single(n, q, Letter::X)).collect();
    let (state, channels) = match c.state {
        StateSpec::Product { n } => (StabilizerMixedState::new(n, xs(n)), Vec::new()),
        StateSpec::Pi { n } => (
            StabilizerMixedState::new(n, vec![PauliString::uniform(n, 0..n, Letter::X)]),
            Vec::new(),
        ),
        StateSpec::Dephased { d, l, p } => {
            let lat = Lattice::new(d, l).context("lattice")?;
            let chans = dephasing_channels(&lat, p).context("dephasing channels")?;
            (StabilizerMixedState::new(n, xs(n)), chans)
        }
        StateSpec::Gibbs { .. } => {
            return Err(CliError::Validation(
                "the gibbs state is not a stabilizer state; use the exact or tfim backend".into(),
            ))
        }
    };
    let state = state.context("stabilizer state")?;
    let dist = unravel_pauli_channel(&state, &channels, DEFAULT_CLASS_BUDGET)
        .context("unravelling the channel")?;
    let corr = diagnostics_from_syndromes(&dist, &zz(n, c.x, c.y)).context("syndrome correlators")?;
    Ok(correlator_table(c, "stab", &corr))
}

fn run_ising(c: &IsingConfig, samples: u64, seed: u64) -> CliResult<Table> {
    let mut t = Table::new(&[
        "p", "r", "L", "d", "mode", "diagnostic", "value", "stderr", "n_samples", "seed",
    ]);
    let mc = c.mode == IsingMode::MonteCarlo && c.diagnostic == IsingDiagnostic::R1;
    for &l in &c.ls {
        let lat = Lattice::new(c.d, l).context("lattice")?;
        for &r in &c.rs {
            let y = lat.shift(0, 0, r);
            for &p in &c.ps {
                let what = format!("ising point L={l} r={r} p={p}");
                let (name, est) = match c.diagnostic {
                    IsingDiagnostic::R1 => {
                        let mode = if mc {
                            QuenchedMode::MonteCarlo { samples, seed }
                        } else {
                            QuenchedMode::Exact
                        };
                        ("R1", r1_quenched(&lat, p, 0, y, mode).context(what)?)
                    }
                    IsingDiagnostic::R2 => {
                        let v = r2_annealed(&lat, p, 0, y).context(what)?;
                        ("R2", swssb_core::ising::Estimate {
                            value: v,
                            stderr: None,
                            n_samples: 0,
                        })
                    }
                };
                t.push(vec![
                    p.into(),
                    r.into(),
                    l.into(),
                    c.d.into(),
                    (if mc { "mc" } else { "exact" }).into(),
                    name.into(),
                    est.value.into(),
                    est.stderr.into(),
                    est.n_samples.into(),
                    (if mc { Some(seed) } else { None }).into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn run_perc(c: &PercConfig, samples: u64, seed: u64) -> CliResult<Table> {
    let mut t = Table::new(&["d", "L", "p", "r", "value", "stderr", "n_samples", "seed"]);
    for &l in &c.ls {
        let r = c.r.unwrap_or(l / 2);
        for &p in &c.ps {
            let cfg = PercolationConfig::new(c.d, l, p, samples, seed).context("percolation")?;
            let est = percolation_r1_at_distance(&cfg, r)
                .context(format!("percolation L={l} p={p}"))?;
            t.push(vec![
                c.d.into(),
                l.into(),
                p.into(),
                r.into(),
                est.value.into(),
                est.stderr.into(),
                est.n_samples.into(),
                seed.into(),
            ]);
        }
    }
    Ok(t)
}

fn run_tfim(c: &TfimConfig) -> CliResult<Table> {
    let table = sweep_fig_s1(c.l, c.j, &c.temps, &c.gs).context("tfim sweep")?;
    let mut t = Table::new(&["L", "J", "g", "T", "beta", "x", "y", "r1"]);
    for p in table.points() {
        t.push(vec![
            p.l.into(),
            p.j.into(),
            p.g.into(),
            p.t.into(),
            p.beta.into(),
            p.x.into(),
            p.y.into(),
            p.r1.into(),
        ]);
    }
    Ok(t)
}
