//! The critical-damping ratio `R(t)` and damping-regime classification.

use serde::Serialize;

use crate::dynamics::propagate::{propagate_spectral, propagate_spectral_ep};
use crate::error::{Error, Result};
use crate::model::basis::Sector;
use crate::model::density::DensityMatrix;
use crate::model::liouvillian::{build_local_liouvillian, build_reduced_liouvillian};
use crate::model::params::{derived_rates, MachineParams, Regime};
use crate::spectral::analytic::eta_switch;
use crate::spectral::eigen::numeric_spectral_data;
use crate::spectral::jordan::jordan_chain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingRegime {
    Overdamped,
    Underdamped,
    Critical,
}

impl DampingRegime {
    pub fn name(self) -> &'static str {
        match self {
            DampingRegime::Overdamped => "overdamped",
            DampingRegime::Underdamped => "underdamped",
            DampingRegime::Critical => "critical",
        }
    }
}

/// Critical iff `|eta|` is below the switch; overdamped for real `eta`,
/// underdamped for imaginary `eta`.
pub fn classify_damping(params: &MachineParams) -> Result<DampingRegime> {
    if params.g == 0.0 {
        return Err(Error::NoClassification);
    }
    let r = derived_rates(params)?;
    Ok(if r.eta.norm() < eta_switch(&r) {
        DampingRegime::Critical
    } else if r.eta.re.abs() >= r.eta.im.abs() {
        DampingRegime::Overdamped
    } else {
        DampingRegime::Underdamped
    })
}

/// `R(t)` on a grid. When the comparator distance underflows the series
/// stops early and `truncated` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub truncated: bool,
}

impl RatioSeries {
    /// First grid time at which `R < 1`.
    pub fn first_below_one(&self) -> Option<f64> {
        self.values.iter().position(|r| *r < 1.0).map(|k| self.times[k])
    }

    /// Earliest grid time after which `R < 1` holds on the whole remaining
    /// grid.
    pub fn stays_below_one_from(&self) -> Option<f64> {
        match self.values.iter().rposition(|r| *r >= 1.0) {
            None => self.times.first().copied(),
            Some(k) if k + 1 < self.values.len() => Some(self.times[k + 1]),
            Some(_) => None,
        }
    }
}

/// Denominator floor below which the ratio is not evaluated.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

/// `R(t) = T(rho_EP(t), rho_ss,EP) / T(rho(t), rho_ss)`: Jordan-path
/// propagation at `params_ep` over diagonalizable propagation at
/// `params_other`, which may differ only in the coupling `g`.
pub fn ratio_r(
    params_ep: &MachineParams,
    params_other: &MachineParams,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<RatioSeries> {
    if params_ep.with_g(params_other.g) != *params_other {
        return Err(Error::ParameterDomain("the two parameter sets must differ only in g".into()));
    }
    if params_ep.regime != Regime::Local {
        return Err(Error::UnsupportedCombination("R(t) is defined for the local regime".into()));
    }
    let jordan = jordan_chain(params_ep)?;
    let numerator = propagate_spectral_ep(rho0, times, &jordan, None)?.distances_to_steady();

    let sector = Sector::smallest_containing(rho0.matrix(), 1e-14 * rho0.matrix().norm());
    let l = match sector {
        Sector::Reduced6 => build_reduced_liouvillian(params_other, 6)?,
        Sector::X8 => build_reduced_liouvillian(params_other, 8)?,
        _ => build_local_liouvillian(params_other)?,
    };
    let data = numeric_spectral_data(&l)?;
    let denominator = propagate_spectral(rho0, times, &data)?.distances_to_steady();

    let mut out =
        RatioSeries { times: vec![], values: vec![], numerator: vec![], denominator: vec![], truncated: false };
    for k in 0..times.len() {
        if denominator[k] < DENOMINATOR_FLOOR {
            out.truncated = true;
            break;
        }
        out.times.push(times[k]);
        out.values.push(numerator[k] / denominator[k]);
        out.numerator.push(numerator[k]);
        out.denominator.push(denominator[k]);
    }
    Ok(out)
}
