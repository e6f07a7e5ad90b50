use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fermion::model::{build_majorana_model, Sector};
use crate::fermion::propagator::ThermalPropagator;
use crate::fermion::r1::{r1_tfim_detailed, ParityTreatment};

/// `T/J = 0.15, 0.25, …, 2.95`.
pub fn fig_s1_temperatures() -> Vec<f64> {
    (0..29).map(|k| (15 + 10 * k) as f64 / 100.0).collect()
}

/// `g = 0, 0.5, …, 16`. The upper end is far enough into the paramagnet for
/// `ln R₁` to be linear in `g`.
pub fn fig_s1_fields() -> Vec<f64> {
    (0..=32).map(|k| k as f64 * 0.5).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub l: usize,
    pub j: f64,
    pub g: f64,
    pub t: f64,
    pub beta: f64,
    pub x: usize,
    pub y: usize,
    pub r1: f64,
}

/// `R₁(0, L/2)` on a temperature × field grid; `values[t][g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub l: usize,
    pub j: f64,
    pub x: usize,
    pub y: usize,
    pub temps: Vec<f64>,
    pub gs: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t]
    }

    /// Points in row-major order (temperature outer).
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.temps.len() * self.gs.len());
        for (ti, &t) in self.temps.iter().enumerate() {
            for (gi, &g) in self.gs.iter().enumerate() {
                out.push(SweepPoint {
                    l: self.l,
                    j: self.j,
                    g,
                    t,
                    beta: self.j / t,
                    x: self.x,
                    y: self.y,
                    r1: self.values[ti][gi],
                });
            }
        }
        out
    }
}

/// One diagonalization per field value, then every `(T, g)` point in
/// parallel. Temperatures are in units where `β = J/T`.
pub fn sweep_fig_s1(l: usize, j: f64, temps: &[f64], gs: &[f64]) -> Result<SweepTable> {
    if l < 2 {
        return Err(Error::InvalidParameter("chain needs at least 2 sites".into()));
    }
    if let Some(t) = temps.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter(format!("temperature {t}")));
    }
    let (x, y) = (0, l / 2);
    let props: Vec<ThermalPropagator> = gs
        .par_iter()
        .map(|&g| ThermalPropagator::new(build_majorana_model(l, j, g, Sector::Antiperiodic)?))
        .collect::<Result<_>>()?;
    let ng = gs.len();
    let flat: Vec<f64> = (0..temps.len() * ng)
        .into_par_iter()
        .map(|k| {
            let beta = j / temps[k / ng];
            r1_tfim_detailed(&props[k % ng], beta, x, y, ParityTreatment::Projected)
                .map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        l,
        j,
        x,
        y,
        temps: temps.to_vec(),
        gs: gs.to_vec(),
        values: flat.chunks(ng.max(1)).map(<[f64]>::to_vec).collect(),
    })
}

/// Least-squares slope of `ln R₁` against `g` over points with `g ≥ g_min`.
pub fn log_slope(gs: &[f64], values: &[f64], g_min: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = gs
        .iter()
        .zip(values)
        .filter(|&(&g, &v)| g >= g_min && v > 0.0)
        .map(|(&g, &v)| (g, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}
