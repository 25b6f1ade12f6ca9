//! One module per subcommand. Each returns the full set of output files; the
//! caller writes them only when the whole computation succeeded.

pub mod ep_find;
pub mod evolve;
pub mod ho;
pub mod ratio;
pub mod spectrum;

use thermal_ep::dynamics::{initial_state, linear_grid, log_grid, max_positive_scale};
use thermal_ep::linalg::re;
use thermal_ep::model::density::DensityMatrix;
use thermal_ep::model::params::MachineParams;
use thermal_ep::observables::steady_state;
use thermal_ep::spectral::jordan::JordanBlockData;

use crate::config::{RunConfig, Spacing, StateSpec};
use crate::error::CliError;

/// Time grid from the config, falling back to `default` for missing keys.
pub fn time_grid(cfg: &RunConfig, default: (f64, f64, usize, Spacing)) -> Result<Vec<f64>, CliError> {
    let spacing = cfg.t_spacing.unwrap_or(default.3);
    let start = cfg.t_start.unwrap_or(default.0);
    let end = cfg.t_end.unwrap_or(default.1);
    let n = cfg.t_points.unwrap_or(default.2);
    Ok(match spacing {
        Spacing::Log => log_grid(start, end, n)?,
        Spacing::Linear => linear_grid(start, end, n)?,
    })
}

/// Build an initial state; the Jordan-subspace kinds use the chain at the
/// critical coupling.
pub fn build_state(
    spec: &StateSpec,
    params: &MachineParams,
    jordan: Option<&JordanBlockData>,
) -> Result<DensityMatrix, CliError> {
    match spec {
        StateSpec::Library(kind) => {
            if kind.needs_jordan() && jordan.is_none() {
                return Err(CliError::Config("Jordan-subspace states need the local regime".into()));
            }
            Ok(initial_state(kind, params, jordan)?)
        }
        StateSpec::SteadyState => Ok(steady_state(params)?),
        StateSpec::EpEigen(fraction) => {
            let j = jordan.ok_or_else(|| CliError::Config("ep_eigen needs the local regime".into()))?;
            if !(0.0..=1.0).contains(fraction) {
                return Err(CliError::Config(format!("ep_eigen fraction {fraction} outside [0, 1]")));
            }
            let s = max_positive_scale(&j.steady, &j.rho4)?;
            Ok(DensityMatrix::new(j.steady + j.rho4 * re(fraction * s))?)
        }
    }
}
