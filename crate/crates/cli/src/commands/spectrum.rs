//! Analytic and numeric spectra with a JSON summary of rates and EP flags.

use serde::Serialize;
use thermal_ep::dynamics::classify_damping;
use thermal_ep::model::liouvillian::{build_global_liouvillian, build_local_liouvillian, build_reduced_liouvillian};
use thermal_ep::model::params::{derived_rates, global_rates, BathStatistics, MachineParams, Regime};
use thermal_ep::spectral::analytic::{analytic_spectrum_global, analytic_spectrum_local, analytic_spectrum_reduced};
use thermal_ep::spectral::eigen::numeric_eigenvalues;
use thermal_ep::spectral::ep::{ep_flags, EpFlags};
use thermal_ep::spectral::matching::greedy_matching;
use thermal_ep::C64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{format_float, Outputs, Table};

#[derive(Serialize)]
struct Mismatch {
    kind: &'static str,
    max_abs_difference: f64,
}

#[derive(Serialize)]
struct Summary {
    regime: Regime,
    statistics: BathStatistics,
    params: MachineParams,
    gamma: f64,
    delta_gamma: f64,
    eta_re: f64,
    eta_im: f64,
    critical_coupling: f64,
    damping: Option<&'static str>,
    ep_flags: EpFlags,
    mismatch: Vec<Mismatch>,
}

fn push_pair(table: &mut Table, kind: &'static str, analytic: &[C64], numeric: &[C64], sig: usize) -> Mismatch {
    let (pairs, max) = greedy_matching(analytic, numeric);
    let mut matched = vec![C64::new(f64::NAN, f64::NAN); analytic.len()];
    for (a, b) in pairs {
        matched[a] = numeric[b];
    }
    for (source, values) in [("analytic", analytic), ("numeric", &matched[..])] {
        for (k, v) in values.iter().enumerate() {
            table.push(vec![
                (k + 1).to_string(),
                format_float(v.re, sig),
                format_float(v.im, sig),
                source.to_string(),
                kind.to_string(),
            ]);
        }
    }
    Mismatch { kind, max_abs_difference: max }
}

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let p = cfg.params()?;
    let sig = cfg.precision();
    let mut table = Table::new(&["index", "re", "im", "source", "kind"]);
    let mut mismatch = Vec::new();
    let r = derived_rates(&p)?;
    let gamma = match p.regime {
        Regime::Local => {
            let num = numeric_eigenvalues(&build_local_liouvillian(&p)?.matrix);
            mismatch.push(push_pair(&mut table, "full", &analytic_spectrum_local(&p)?, &num, sig));
            let num = numeric_eigenvalues(&build_reduced_liouvillian(&p, 6)?.matrix);
            mismatch.push(push_pair(&mut table, "reduced", &analytic_spectrum_reduced(&p)?, &num, sig));
            r.gamma_sum
        }
        Regime::Global => {
            let num = numeric_eigenvalues(&build_global_liouvillian(&p)?.matrix);
            mismatch.push(push_pair(&mut table, "global", &analytic_spectrum_global(&p)?, &num, sig));
            global_rates(&p)?.gamma_sum()
        }
    };
    let damping = match p.regime {
        Regime::Local if p.g > 0.0 => Some(classify_damping(&p)?.name()),
        _ => None,
    };
    let summary = Summary {
        regime: p.regime,
        statistics: p.statistics,
        params: p,
        gamma,
        delta_gamma: r.delta_gamma,
        eta_re: r.eta.re,
        eta_im: r.eta.im,
        critical_coupling: p.critical_coupling()?,
        damping,
        ep_flags: ep_flags(&p)?,
        mismatch,
    };
    let mut out = Outputs::default();
    out.csv("spectrum.csv", &table)?;
    out.json("spectrum.json", &summary)?;
    Ok(out)
}
