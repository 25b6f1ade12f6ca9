//! Time grids.

use crate::error::{Error, Result};
use crate::model::params::{derived_rates, MachineParams};

/// `n` logarithmically spaced points on `[start, end]`.
pub fn log_grid(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > start && n >= 2) {
        return Err(Error::ParameterDomain(format!("invalid log grid [{start}, {end}] with {n} points")));
    }
    let ratio = end / start;
    Ok((0..n).map(|k| if k + 1 == n { end } else { start * ratio.powf(k as f64 / (n - 1) as f64) }).collect())
}

/// `n` equally spaced points on `[start, end]`.
pub fn linear_grid(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if !(start >= 0.0 && end > start && n >= 2) {
        return Err(Error::ParameterDomain(format!("invalid linear grid [{start}, {end}] with {n} points")));
    }
    let h = (end - start) / (n - 1) as f64;
    Ok((0..n).map(|k| if k + 1 == n { end } else { start + h * k as f64 }).collect())
}

pub const DEFAULT_GRID_POINTS: usize = 400;

/// 400 log-spaced points on `[1e-2 / epsilon, 20 / Gamma]`.
pub fn default_grid(params: &MachineParams) -> Result<Vec<f64>> {
    let r = derived_rates(params)?;
    log_grid(1e-2 / params.epsilon, 20.0 / r.gamma_sum, DEFAULT_GRID_POINTS)
}

/// Check that a grid is non-empty, finite, non-negative and strictly
/// increasing.
pub fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::ParameterDomain("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::ParameterDomain("time grid must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ParameterDomain("time grid must be strictly increasing".into()));
    }
    Ok(())
}
