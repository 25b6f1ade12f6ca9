//! EP solutions along one free parameter and `(axis, g)` locus curves.

use serde::Serialize;
use thermal_ep::dynamics::{linear_grid, log_grid};
use thermal_ep::spectral::ep::{eta_beta_loci, find_eps, locus_separation, EpKind, FreeParameter};
use thermal_ep::Exec;

use crate::config::{LocusAxis, RunConfig};
use crate::error::CliError;
use crate::output::{format_float, Outputs, Table};

#[derive(Serialize)]
struct LocusSummary {
    axis: LocusAxis,
    points: usize,
    eta_zero_points: usize,
    beta_zero_points: usize,
    /// Smallest `|g_beta - g_eta| / g_eta` over the shared abscissae.
    min_relative_gap: Option<f64>,
    intersect: bool,
}

#[derive(Serialize)]
struct Summary {
    free_parameter: FreeParameter,
    range: (f64, f64),
    solutions: usize,
    not_reachable: Vec<EpKind>,
    loci: Option<LocusSummary>,
}

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sig = cfg.precision();
    let base = cfg.params()?;
    let free = cfg.free_parameter.unwrap_or(FreeParameter::G);
    let current = free.value(&base);
    let default = match free {
        FreeParameter::G => (0.0, 0.2),
        _ => (0.1 * current, 10.0 * current),
    };
    let range = (cfg.free_min.unwrap_or(default.0), cfg.free_max.unwrap_or(default.1));
    let search = find_eps(&base, free, range, Exec::Parallel)?;

    let mut table = Table::new(&[
        "kind",
        "order",
        "free_parameter",
        "value",
        "g",
        "merged_re",
        "merged_im",
        "min_eigenvalue_gap",
        "min_vector_distance",
        "coalesced_vectors",
    ]);
    let free_name = serde_json::to_value(free).expect("serializable").as_str().unwrap_or_default().to_string();
    for r in &search.reports {
        let m = r.merged_eigenvalues[0];
        table.push(vec![
            r.kind.name().to_string(),
            r.order.to_string(),
            free_name.clone(),
            format_float(r.value, sig),
            format_float(r.params.g, sig),
            format_float(m.re, sig),
            format_float(m.im, sig),
            format_float(r.diagnostics.min_eigenvalue_gap, sig),
            format_float(r.diagnostics.min_vector_distance, sig),
            r.diagnostics.coalesced.to_string(),
        ]);
    }
    let mut out = Outputs::default();
    out.csv("ep_solutions.csv", &table)?;

    let loci = match cfg.locus_axis {
        None => None,
        Some(axis) => {
            let n = cfg.locus_points.unwrap_or(100);
            let (axis_param, xs) = match axis {
                LocusAxis::Gamma => (
                    FreeParameter::GammaBoth,
                    log_grid(cfg.locus_min.unwrap_or(1e-4), cfg.locus_max.unwrap_or(0.1), n)?,
                ),
                LocusAxis::Epsilon => (
                    FreeParameter::EpsilonScaled,
                    linear_grid(cfg.locus_min.unwrap_or(0.5), cfg.locus_max.unwrap_or(2.0), n)?,
                ),
            };
            let g_max = cfg.locus_g_max.unwrap_or(1.0);
            let pts = eta_beta_loci(&base, axis_param, &xs, (0.0, g_max), Exec::Parallel)?;
            let mut lt = Table::new(&["free1", "free2", "kind"]);
            for p in &pts {
                lt.push(vec![format_float(p.x, sig), format_float(p.g, sig), p.kind.name().to_string()]);
            }
            out.csv("loci.csv", &lt)?;
            let sep = locus_separation(&pts);
            Some(LocusSummary {
                axis,
                points: xs.len(),
                eta_zero_points: pts.iter().filter(|p| p.kind == EpKind::EtaZero).count(),
                beta_zero_points: pts.iter().filter(|p| p.kind == EpKind::BetaZero).count(),
                min_relative_gap: sep.map(|s| s.0),
                intersect: sep.map(|(gap, same_side)| !same_side || gap == 0.0).unwrap_or(false),
            })
        }
    };
    out.json(
        "ep_find.json",
        &Summary {
            free_parameter: free,
            range,
            solutions: search.reports.len(),
            not_reachable: search.not_reachable,
            loci,
        },
    )?;
    Ok(out)
}
