//! Trajectories with populations, coherence, distance to the steady state,
//! heat currents and concurrence; optionally checked against the RK4 oracle.

use serde::Serialize;
use thermal_ep::dynamics::{
    classify_damping, default_grid, propagate_ode, propagate_spectral, propagate_spectral_ep, DampingRegime,
    OdeOptions, Trajectory,
};
use thermal_ep::model::basis::Sector;
use thermal_ep::model::density::DensityMatrix;
use thermal_ep::model::liouvillian::{
    build_global_liouvillian, build_local_liouvillian, build_reduced_liouvillian, Liouvillian,
};
use thermal_ep::model::params::{MachineParams, Regime};
use thermal_ep::observables::{trajectory_observables, Observable};
use thermal_ep::spectral::eigen::numeric_spectral_data;
use thermal_ep::spectral::jordan::{jordan_chain, JordanBlockData};

use crate::commands::{build_state, time_grid};
use crate::config::{Coupling, RunConfig, Spacing};
use crate::error::CliError;
use crate::output::{format_float, Outputs, Table};

const COLUMNS: [&str; 11] =
    ["p11", "p22", "p33", "p44", "re_rho23", "im_rho23", "trace_distance", "J1", "J2", "C", "abs_rho23"];

#[derive(Serialize)]
struct RunSummary {
    run: usize,
    g: f64,
    regime: Option<&'static str>,
    initial_state: String,
    provenance: &'static str,
    final_trace_distance: f64,
    steady_j1: f64,
    steady_j2: f64,
    steady_concurrence: f64,
    max_ode_deviation: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    runs: Vec<RunSummary>,
    max_ode_deviation: Option<f64>,
}

fn sector_liouvillian(p: &MachineParams, sector: Sector) -> Result<Liouvillian, CliError> {
    Ok(match (p.regime, sector) {
        (Regime::Global, _) => build_global_liouvillian(p)?,
        (_, Sector::Reduced6) => build_reduced_liouvillian(p, 6)?,
        (_, Sector::X8) => build_reduced_liouvillian(p, 8)?,
        _ => build_local_liouvillian(p)?,
    })
}

fn propagate(
    p: &MachineParams,
    regime: Option<DampingRegime>,
    rho0: &DensityMatrix,
    grid: &[f64],
    jordan_here: Option<&JordanBlockData>,
) -> Result<(Trajectory, Liouvillian), CliError> {
    let sector = Sector::smallest_containing(rho0.matrix(), 1e-14 * rho0.matrix().norm());
    let l = sector_liouvillian(p, sector)?;
    let traj = match (regime, jordan_here) {
        (Some(DampingRegime::Critical), Some(j)) => propagate_spectral_ep(rho0, grid, j, None)?,
        _ => propagate_spectral(rho0, grid, &numeric_spectral_data(&l)?)?,
    };
    Ok((traj, l))
}

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sig = cfg.precision();
    let base = cfg.base_params()?;
    let couplings = cfg.g_values.clone().unwrap_or_else(|| vec![cfg.g]);
    let states = cfg.initial_state_kinds(&["thermal_product"])?;
    let jordan_ep = match base.regime {
        Regime::Local => Some(jordan_chain(&base.at_critical_coupling()?)?),
        Regime::Global => None,
    };

    let mut header = vec!["run", "g", "regime", "initial_state", "provenance", "t"];
    header.extend_from_slice(&COLUMNS);
    let mut table = Table::new(&header);
    let mut runs = Vec::new();
    let mut run_id = 0;
    for coupling in &couplings {
        let g = coupling.resolve(&base)?;
        let p = base.with_g(g);
        let regime = if p.regime == Regime::Local && g > 0.0 { Some(classify_damping(&p)?) } else { None };
        let at_ep = matches!(coupling, Coupling::Named(_)) || regime == Some(DampingRegime::Critical);
        let jordan_here = if at_ep && p.regime == Regime::Local { Some(jordan_chain(&p)?) } else { None };
        let grid = time_grid(cfg, {
            let d = default_grid(&p)?;
            (d[0], d[d.len() - 1], d.len(), Spacing::Log)
        })?;
        for (name, spec) in &states {
            let rho0 = build_state(spec, &p, jordan_ep.as_ref())?;
            let (traj, l) = propagate(&p, regime, &rho0, &grid, jordan_here.as_ref())?;
            let mut variants = vec![traj];
            if cfg.with_ode {
                variants.push(propagate_ode(&l, &rho0, &grid, &OdeOptions::default())?);
            }
            let deviation = if cfg.with_ode { Some(variants[0].max_distance(&variants[1])) } else { None };
            for traj in &variants {
                let series = trajectory_observables(traj, &p, &COLUMNS)?;
                for k in 0..traj.len() {
                    let mut row = vec![
                        run_id.to_string(),
                        format_float(g, sig),
                        regime.map(|r| r.name()).unwrap_or("none").to_string(),
                        name.clone(),
                        traj.provenance.name().to_string(),
                        format_float(traj.times[k], sig),
                    ];
                    row.extend(series.iter().map(|s| format_float(s.values[k], sig)));
                    table.push(row);
                }
                let steady = |o: Observable| series.iter().find(|s| s.name == o.name()).map(|s| s.steady_value);
                runs.push(RunSummary {
                    run: run_id,
                    g,
                    regime: regime.map(|r| r.name()),
                    initial_state: name.clone(),
                    provenance: traj.provenance.name(),
                    final_trace_distance: *traj.distances_to_steady().last().unwrap_or(&f64::NAN),
                    steady_j1: steady(Observable::J1).unwrap_or(f64::NAN),
                    steady_j2: steady(Observable::J2).unwrap_or(f64::NAN),
                    steady_concurrence: steady(Observable::Concurrence).unwrap_or(f64::NAN),
                    max_ode_deviation: deviation,
                });
            }
            run_id += 1;
        }
    }
    let max_ode_deviation = runs.iter().filter_map(|r| r.max_ode_deviation).reduce(f64::max);
    let mut out = Outputs::default();
    out.csv("evolve.csv", &table)?;
    out.json("evolve.json", &Summary { runs, max_ode_deviation })?;
    Ok(out)
}
