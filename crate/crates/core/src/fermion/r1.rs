use crate::error::{Error, Result};
use crate::fermion::model::{build_majorana_model, Sector};
use crate::fermion::precise::projected_numerator;
use crate::fermion::propagator::{wick_pfaffian, ThermalPropagator};
use crate::linalg::C64;

/// How the projector onto `Π = +1` enters the thermal trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityTreatment {
    /// `tr[P ·] = ½(tr[·] + tr[Π ·])`, both evaluated with antiperiodic
    /// fermions.
    Projected,
    /// Drops the projector: the full antiperiodic Gibbs state.
    Unprojected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R1Tfim {
    pub value: f64,
    /// Imaginary part left over from the complex Pfaffians.
    pub imag: f64,
    /// `⟨Π⟩` in the antiperiodic Gibbs state.
    pub parity: f64,
    /// Mantissa bits of the Pfaffians behind `value`: 53, or more when the
    /// multiprecision path was needed.
    pub bits: u32,
}

/// Below this the double-precision Pfaffians are dominated by rounding and
/// the projected value is recomputed in multiprecision.
pub const PRECISE_BELOW: f64 = 1e-20;

/// `R₁(x, y) = ⟨O(β/2) O(0)⟩` for `O = Z_x Z_y = i^r γ_{2x+1} … γ_{2y}`,
/// `r = y − x`, in the parity-even Gibbs state.
///
/// With the projector, the `Π` term uses `O(0) Π = i^{r+L} (−1)^r ∏_{k∉S} γ_k`
/// where `S` is the string of `O`, so every Pfaffian has bounded entries.
/// Projected values under [`PRECISE_BELOW`] are recomputed from the Bloch
/// modes in MPFR arithmetic.
pub fn r1_tfim_detailed(
    prop: &ThermalPropagator,
    beta: f64,
    x: usize,
    y: usize,
    treatment: ParityTreatment,
) -> Result<R1Tfim> {
    let model = prop.model();
    let l = model.n_sites();
    if model.sector() != Sector::Antiperiodic {
        return Err(Error::InvalidParameter(
            "the even sector needs antiperiodic fermions".into(),
        ));
    }
    if !(x < y && y < l) {
        return Err(Error::InvalidParameter(format!(
            "sites need 0 <= x < y < {l}, got ({x}, {y})"
        )));
    }
    let r = y - x;
    let half = 0.5 * beta;
    let string: Vec<usize> = (2 * x + 1..=2 * y).collect();
    let ops: Vec<(usize, f64)> = string
        .iter()
        .map(|&k| (k, half))
        .chain(string.iter().map(|&k| (k, 0.0)))
        .collect();
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let plain = wick_pfaffian(&prop.wick_matrix(beta, &ops)?) * sign;
    let mut bits = 53;
    let (value, parity) = match treatment {
        ParityTreatment::Unprojected => (plain, prop.parity_expectation(beta)?),
        ParityTreatment::Projected => {
            let parity = prop.parity_expectation(beta)?;
            let norm = C64::from(1.0) + parity;
            if norm.re <= 1e-12 {
                return Err(Error::Normalization(format!(
                    "even-sector weight 1 + <Pi> = {:.3e} (L = {l}, J = {}, g = {}, beta = {beta})",
                    norm.re,
                    model.coupling(),
                    model.field()
                )));
            }
            let complement: Vec<(usize, f64)> = string
                .iter()
                .map(|&k| (k, half))
                .chain((0..2 * l).filter(|k| !(2 * x + 1..=2 * y).contains(k)).map(|k| (k, 0.0)))
                .collect();
            let twisted =
                wick_pfaffian(&prop.wick_matrix(beta, &complement)?) * C64::i().powu(l as u32);
            let mut value = (plain + twisted) / norm;
            if value.re.abs() < PRECISE_BELOW {
                let (num, p) = projected_numerator(model, beta, &ops, &complement, sign)?;
                value = num / norm;
                bits = p;
            }
            (value, parity)
        }
    };
    Ok(R1Tfim {
        value: value.re,
        imag: value.im,
        parity: parity.re,
        bits,
    })
}

/// `R₁(x, y)` of the parity-even Gibbs state of `−J Σ (Z_j Z_{j+1} + g X_j)`
/// on a ring of `l` sites.
pub fn r1_tfim(l: usize, j: f64, g: f64, beta: f64, x: usize, y: usize) -> Result<f64> {
    let prop = ThermalPropagator::new(build_majorana_model(l, j, g, Sector::Antiperiodic)?)?;
    Ok(r1_tfim_detailed(&prop, beta, x, y, ParityTreatment::Projected)?.value)
}
