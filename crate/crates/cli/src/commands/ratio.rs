//! The critical-damping ratio `R(t)` for a set of initial states.

use serde::Serialize;
use thermal_ep::dynamics::signals::down_crossings;
use thermal_ep::dynamics::{overlap_coefficients, ratio_r};
use thermal_ep::model::basis::Sector;
use thermal_ep::model::params::Regime;
use thermal_ep::spectral::jordan::{ep_modal_basis, jordan_chain};

use crate::commands::{build_state, time_grid};
use crate::config::{RunConfig, Spacing};
use crate::error::CliError;
use crate::output::{format_float, Outputs, Table};

/// `|c6|` below which the long-time advantage is not guaranteed.
pub const C6_THRESHOLD: f64 = 1e-6;

#[derive(Serialize)]
struct StateSummary {
    initial_state: String,
    c6_abs: f64,
    no_crossing_guarantee: bool,
    r_initial: f64,
    first_below_one: Option<f64>,
    down_crossings: Vec<f64>,
    stays_below_one_from: Option<f64>,
    t_max: f64,
    r_t_max: f64,
    truncated: bool,
}

#[derive(Serialize)]
struct Summary {
    g_ep: f64,
    g_comparator: f64,
    states: Vec<StateSummary>,
}

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sig = cfg.precision();
    let base = cfg.base_params()?;
    if base.regime != Regime::Local {
        return Err(CliError::Config("ratio needs the local regime".into()));
    }
    let ep = base.at_critical_coupling()?;
    let g_other = match (cfg.comparator_g, cfg.g.is_gbar()) {
        (Some(g), _) => g,
        (None, false) => cfg.g.resolve(&base)?,
        (None, true) => return Err(CliError::Config("set comparator_g when g is \"gbar\"".into())),
    };
    let other = base.with_g(g_other);
    let jordan = jordan_chain(&ep)?;
    let grid = time_grid(cfg, (0.0, 2000.0, 8001, Spacing::Linear))?;
    let states = cfg.initial_state_kinds(&["thermal_product", "ground", "singlet"])?;

    let mut table = Table::new(&["initial_state", "t", "R"]);
    let mut summaries = Vec::new();
    for (name, spec) in &states {
        let rho0 = build_state(spec, &ep, Some(&jordan))?;
        let sector = Sector::smallest_containing(rho0.matrix(), 1e-14 * rho0.matrix().norm());
        let c6 = overlap_coefficients(&ep_modal_basis(&jordan, sector)?, &rho0)?.values[5].norm();
        let r = ratio_r(&ep, &other, &rho0, &grid)?;
        for (t, v) in r.times.iter().zip(&r.values) {
            table.push(vec![name.clone(), format_float(*t, sig), format_float(*v, sig)]);
        }
        summaries.push(StateSummary {
            initial_state: name.clone(),
            c6_abs: c6,
            no_crossing_guarantee: c6 < C6_THRESHOLD,
            r_initial: r.values.first().copied().unwrap_or(f64::NAN),
            first_below_one: r.first_below_one(),
            down_crossings: down_crossings(&r.values, 1.0).iter().map(|&k| r.times[k]).collect(),
            stays_below_one_from: r.stays_below_one_from(),
            t_max: r.times.last().copied().unwrap_or(f64::NAN),
            r_t_max: r.values.last().copied().unwrap_or(f64::NAN),
            truncated: r.truncated,
        });
    }
    let mut out = Outputs::default();
    out.csv("ratio.csv", &table)?;
    out.json("ratio.json", &Summary { g_ep: ep.g, g_comparator: g_other, states: summaries })?;
    Ok(out)
}
