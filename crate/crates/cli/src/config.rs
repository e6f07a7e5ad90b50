//! Sectioned `key = value` experiment files.
//!
//! ```text
//! [run]
//! seed = 7
//!
//! [tfim]
//! l = 128
//! t = 0.15:2.95:0.1
//! ```
//!
//! Exactly one backend section (`exact`, `stab`, `ising`, `perc`, `tfim`,
//! `compare`) is allowed. Lists are comma separated; `a:b:step` expands to an
//! inclusive arithmetic range. The `Display` output is the canonical form and
//! parses back to the same config.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use swssb_core::fermion::{fig_s1_fields, fig_s1_temperatures};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub backend: BackendConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BackendConfig {
    Exact(StateConfig),
    Stab(StateConfig),
    Ising(IsingConfig),
    Perc(PercConfig),
    Tfim(TfimConfig),
    Compare(CompareConfig),
}

impl BackendConfig {
    pub fn name(&self) -> &'static str {
        match self {
            BackendConfig::Exact(_) => "exact",
            BackendConfig::Stab(_) => "stab",
            BackendConfig::Ising(_) => "ising",
            BackendConfig::Perc(_) => "perc",
            BackendConfig::Tfim(_) => "tfim",
            BackendConfig::Compare(_) => "compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Product { n: usize },
    Pi { n: usize },
    /// `|+⟩^⊗N` with ZZ dephasing on every link of a `d`-dimensional torus.
    Dephased { d: usize, l: usize, p: f64 },
    /// Parity-even Gibbs state of the transverse-field ring.
    Gibbs { n: usize, j: f64, g: f64, beta: f64 },
}

impl StateSpec {
    pub fn n_qubits(&self) -> usize {
        match *self {
            StateSpec::Product { n } | StateSpec::Pi { n } | StateSpec::Gibbs { n, .. } => n,
            StateSpec::Dephased { d, l, .. } => l.pow(d as u32),
        }
    }
}

/// A state and the pair of sites carrying `Z_x Z_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateConfig {
    pub state: StateSpec,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingDiagnostic {
    R1,
    R2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsingConfig {
    pub d: usize,
    pub ls: Vec<usize>,
    pub ps: Vec<f64>,
    /// Separations along the first axis, measured from site 0.
    pub rs: Vec<usize>,
    pub mode: IsingMode,
    pub diagnostic: IsingDiagnostic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercConfig {
    pub d: usize,
    pub ls: Vec<usize>,
    pub ps: Vec<f64>,
    /// Separation; `L/2` when absent.
    pub r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfimConfig {
    pub l: usize,
    pub j: f64,
    pub gs: Vec<f64>,
    pub temps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    /// Random instances per backend pair.
    pub instances: usize,
}

impl ExperimentConfig {
    pub fn needs_seed(&self) -> bool {
        match &self.backend {
            BackendConfig::Ising(c) => c.mode == IsingMode::MonteCarlo,
            BackendConfig::Perc(_) | BackendConfig::Compare(_) => true,
            _ => false,
        }
    }

    pub fn samples_or_default(&self) -> u64 {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    /// Checks that only depend on the whole config, after `--seed` overrides.
    pub fn validate(&self) -> CliResult<()> {
        if self.needs_seed() && self.seed.is_none() {
            return Err(CliError::Validation(format!(
                "the {} backend samples randomly and needs a seed",
                self.backend.name()
            )));
        }
        if self.samples == Some(0) {
            return Err(CliError::Validation("samples must be positive".into()));
        }
        Ok(())
    }
}

struct Entry {
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn config_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        message: message.into(),
    }
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn get<T: FromStr>(&mut self, key: &str) -> CliResult<Option<(T, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(|v| Some((v, e.line)))
                .map_err(|_| config_err(e.line, format!("cannot parse {key} = {}", e.value))),
        }
    }

    fn opt<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>> {
        Ok(self.get(key)?.map(|(v, _)| v))
    }

    fn require<T: FromStr>(&mut self, key: &str) -> CliResult<(T, usize)> {
        self.get(key)?.ok_or_else(|| {
            config_err(self.line, format!("[{}] is missing `{key}`", self.name))
        })
    }

    fn list_f64(&mut self, key: &str) -> CliResult<Option<(Vec<f64>, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => parse_list(&e.value)
                .map(|v| Some((v, e.line)))
                .map_err(|m| config_err(e.line, format!("{key}: {m}"))),
        }
    }

    fn list_usize(&mut self, key: &str) -> CliResult<Option<(Vec<usize>, usize)>> {
        let Some((v, line)) = self.list_f64(key)? else {
            return Ok(None);
        };
        let out = v
            .iter()
            .map(|&x| {
                if x >= 0.0 && x.fract() == 0.0 {
                    Ok(x as usize)
                } else {
                    Err(config_err(line, format!("{key}: {x} is not a non-negative integer")))
                }
            })
            .collect::<CliResult<_>>()?;
        Ok(Some((out, line)))
    }

    fn finish(self) -> CliResult<()> {
        match self.entries.iter().min_by_key(|(_, e)| e.line) {
            None => Ok(()),
            Some((k, e)) => Err(config_err(
                e.line,
                format!("unknown key `{k}` in [{}]", self.name),
            )),
        }
    }
}

/// Rounds away the drift of `a + k·step` so `0.15:2.95:0.1` gives the same
/// doubles as the literals.
fn tidy(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let parts: Vec<&str> = item.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !(step > 0.0) || b < a {
                    return Err(format!("empty range {item}"));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize + 1;
                out.extend((0..count).map(|k| tidy(a + k as f64 * step)));
            }
            _ => return Err(format!("cannot parse `{item}`")),
        }
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(out)
}

fn sections(text: &str) -> CliResult<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_err(line, "unterminated section header"))?
                .trim();
            if out.iter().any(|s| s.name == name) {
                return Err(config_err(line, format!("duplicate section [{name}]")));
            }
            out.push(Section {
                name: name.to_string(),
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected `key = value`, found `{body}`")))?;
        let section = out
            .last_mut()
            .ok_or_else(|| config_err(line, "key outside any section"))?;
        let key = k.trim().to_string();
        if section.entries.contains_key(&key) {
            return Err(config_err(line, format!("duplicate key `{key}`")));
        }
        section.entries.insert(
            key,
            Entry {
                value: v.trim().to_string(),
                line,
            },
        );
    }
    Ok(out)
}

fn check_p(p: f64, line: usize) -> CliResult<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(config_err(line, format!("p = {p} outside [0, 1]")))
    }
}

fn check_positive(what: &str, v: usize, line: usize) -> CliResult<usize> {
    if v == 0 {
        Err(config_err(line, format!("{what} must be positive")))
    } else {
        Ok(v)
    }
}

fn parse_state(sec: &mut Section) -> CliResult<StateConfig> {
    let (kind, line): (String, usize) = sec.require("state")?;
    let state = match kind.as_str() {
        "product" | "pi" | "gibbs" => {
            let (n, nl): (usize, usize) = sec.require("n")?;
            if n < 2 {
                return Err(config_err(nl, "n must be at least 2"));
            }
            match kind.as_str() {
                "product" => StateSpec::Product { n },
                "pi" => StateSpec::Pi { n },
                _ => {
                    let j = sec.opt("j")?.unwrap_or(1.0);
                    let (g, _) = sec.require("g")?;
                    let (beta, bl): (f64, usize) = sec.require("beta")?;
                    if !(beta >= 0.0) {
                        return Err(config_err(bl, format!("beta = {beta} is negative")));
                    }
                    StateSpec::Gibbs { n, j, g, beta }
                }
            }
        }
        "dephased" => {
            let d = sec.opt("d")?.unwrap_or(1);
            let (l, ll) = sec.require("l")?;
            let (p, pl) = sec.require("p")?;
            StateSpec::Dephased {
                d,
                l: check_positive("l", l, ll)?,
                p: check_p(p, pl)?,
            }
        }
        other => return Err(config_err(line, format!("unknown state `{other}`"))),
    };
    let n = state.n_qubits();
    let x = sec.opt("x")?.unwrap_or(0);
    let y = sec.opt("y")?.unwrap_or(n / 2);
    if x >= n || y >= n {
        return Err(config_err(sec.line, format!("sites ({x}, {y}) outside 0..{n}")));
    }
    Ok(StateConfig { state, x, y })
}

fn parse_ising(sec: &mut Section) -> CliResult<IsingConfig> {
    let d = sec.opt("d")?.unwrap_or(1);
    let (ls, ll) = sec.list_usize("l")?.ok_or_else(|| config_err(sec.line, "[ising] is missing `l`"))?;
    let (ps, pl) = sec.list_f64("p")?.ok_or_else(|| config_err(sec.line, "[ising] is missing `p`"))?;
    let rs = match sec.list_usize("r")? {
        Some((rs, _)) => rs,
        None => vec![1],
    };
    let mode = match sec.get::<String>("mode")? {
        None => IsingMode::Exact,
        Some((m, line)) => match m.as_str() {
            "exact" => IsingMode::Exact,
            "mc" => IsingMode::MonteCarlo,
            _ => return Err(config_err(line, format!("unknown mode `{m}`"))),
        },
    };
    let diagnostic = match sec.get::<String>("diagnostic")? {
        None => IsingDiagnostic::R1,
        Some((m, line)) => match m.as_str() {
            "r1" => IsingDiagnostic::R1,
            "r2" => IsingDiagnostic::R2,
            _ => return Err(config_err(line, format!("unknown diagnostic `{m}`"))),
        },
    };
    for &l in &ls {
        check_positive("l", l, ll)?;
    }
    for &p in &ps {
        check_p(p, pl)?;
    }
    Ok(IsingConfig {
        d,
        ls,
        ps,
        rs,
        mode,
        diagnostic,
    })
}

fn parse_perc(sec: &mut Section) -> CliResult<PercConfig> {
    let d = sec.opt("d")?.unwrap_or(2);
    let (ls, ll) = sec.list_usize("l")?.ok_or_else(|| config_err(sec.line, "[perc] is missing `l`"))?;
    let (ps, pl) = sec.list_f64("p")?.ok_or_else(|| config_err(sec.line, "[perc] is missing `p`"))?;
    for &l in &ls {
        check_positive("l", l, ll)?;
    }
    for &p in &ps {
        check_p(p, pl)?;
    }
    Ok(PercConfig {
        d,
        ls,
        ps,
        r: sec.opt("r")?,
    })
}

fn parse_tfim(sec: &mut Section) -> CliResult<TfimConfig> {
    let (l, ll) = sec.get("l")?.unwrap_or((128, sec.line));
    if l < 2 {
        return Err(config_err(ll, "l must be at least 2"));
    }
    let j = sec.opt("j")?.unwrap_or(1.0);
    let gs = sec.list_f64("g")?.map_or_else(fig_s1_fields, |(v, _)| v);
    let temps = match sec.list_f64("t")? {
        None => fig_s1_temperatures(),
        Some((v, line)) => {
            if v.iter().any(|&t| t <= 0.0) {
                return Err(config_err(line, "temperatures must be positive"));
            }
            v
        }
    };
    Ok(TfimConfig { l, j, gs, temps })
}

pub fn parse_config(text: &str) -> CliResult<ExperimentConfig> {
    let mut seed = None;
    let mut samples = None;
    let mut backend: Option<(BackendConfig, usize)> = None;
    for mut sec in sections(text)? {
        let parsed = match sec.name.as_str() {
            "run" => {
                seed = sec.opt("seed")?;
                samples = match sec.get::<u64>("samples")? {
                    Some((0, line)) => return Err(config_err(line, "samples must be positive")),
                    s => s.map(|(v, _)| v),
                };
                None
            }
            "exact" => Some(BackendConfig::Exact(parse_state(&mut sec)?)),
            "stab" => Some(BackendConfig::Stab(parse_state(&mut sec)?)),
            "ising" => Some(BackendConfig::Ising(parse_ising(&mut sec)?)),
            "perc" => Some(BackendConfig::Perc(parse_perc(&mut sec)?)),
            "tfim" => Some(BackendConfig::Tfim(parse_tfim(&mut sec)?)),
            "compare" => Some(BackendConfig::Compare(CompareConfig {
                instances: sec.opt("instances")?.unwrap_or(20),
            })),
            other => return Err(config_err(sec.line, format!("unknown section [{other}]"))),
        };
        if let Some(b) = parsed {
            if let Some((prev, line)) = &backend {
                return Err(config_err(
                    sec.line,
                    format!("second backend section; [{}] already given on line {line}", prev.name()),
                ));
            }
            backend = Some((b, sec.line));
        }
        sec.finish()?;
    }
    let (backend, _) =
        backend.ok_or_else(|| CliError::Validation("no backend section".into()))?;
    Ok(ExperimentConfig {
        seed,
        samples,
        backend,
    })
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seed.is_some() || self.samples.is_some() {
            writeln!(f, "[run]")?;
            if let Some(s) = self.seed {
                writeln!(f, "seed = {s}")?;
            }
            if let Some(s) = self.samples {
                writeln!(f, "samples = {s}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "[{}]", self.backend.name())?;
        match &self.backend {
            BackendConfig::Exact(c) | BackendConfig::Stab(c) => {
                match c.state {
                    StateSpec::Product { n } => writeln!(f, "state = product\nn = {n}")?,
                    StateSpec::Pi { n } => writeln!(f, "state = pi\nn = {n}")?,
                    StateSpec::Dephased { d, l, p } => {
                        writeln!(f, "state = dephased\nd = {d}\nl = {l}\np = {p}")?
                    }
                    StateSpec::Gibbs { n, j, g, beta } => {
                        writeln!(f, "state = gibbs\nn = {n}\nj = {j}\ng = {g}\nbeta = {beta}")?
                    }
                }
                writeln!(f, "x = {}\ny = {}", c.x, c.y)
            }
            BackendConfig::Ising(c) => {
                writeln!(f, "d = {}\nl = {}\np = {}\nr = {}", c.d, join(&c.ls), join(&c.ps), join(&c.rs))?;
                let mode = match c.mode {
                    IsingMode::Exact => "exact",
                    IsingMode::MonteCarlo => "mc",
                };
                let diag = match c.diagnostic {
                    IsingDiagnostic::R1 => "r1",
                    IsingDiagnostic::R2 => "r2",
                };
                writeln!(f, "mode = {mode}\ndiagnostic = {diag}")
            }
            BackendConfig::Perc(c) => {
                writeln!(f, "d = {}\nl = {}\np = {}", c.d, join(&c.ls), join(&c.ps))?;
                if let Some(r) = c.r {
                    writeln!(f, "r = {r}")?;
                }
                Ok(())
            }
            BackendConfig::Tfim(c) => writeln!(
                f,
                "l = {}\nj = {}\ng = {}\nt = {}",
                c.l,
                c.j,
                join(&c.gs),
                join(&c.temps)
            ),
            BackendConfig::Compare(c) => writeln!(f, "instances = {}", c.instances),
        }
    }
}
