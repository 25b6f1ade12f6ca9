//! Harmonic-oscillator ratio `R_HO(t)` against under- and overdamped
//! comparators, with an RK4 cross-check.

use serde::Serialize;
use thermal_ep::ho::{ho_propagate, ho_ratio, ho_regime, ho_rk4, HoConvention, HoParams, HoState};

use crate::commands::time_grid;
use crate::config::{RunConfig, Spacing};
use crate::error::CliError;
use crate::output::{format_float, Outputs, Table};

const RK4_STEPS_PER_UNIT: usize = 2000;

#[derive(Serialize)]
struct Comparator {
    gamma: f64,
    regime: &'static str,
    r_final: f64,
    below_one_from: Option<f64>,
    max_rk4_deviation: f64,
    truncated: bool,
}

#[derive(Serialize)]
struct Summary {
    m: f64,
    k: f64,
    convention: HoConvention,
    gamma_ep: f64,
    ep_detected: bool,
    max_rk4_deviation_ep: f64,
    comparators: Vec<Comparator>,
}

fn rk4_deviation(p: &HoParams, f0: HoState, grid: &[f64]) -> Result<f64, CliError> {
    let a = ho_propagate(p, f0, grid)?;
    let b = ho_rk4(p, f0, grid, RK4_STEPS_PER_UNIT)?;
    Ok(a.iter().zip(&b).map(|(u, v)| (u.p - v.p).abs().max((u.x - v.x).abs())).fold(0.0, f64::max))
}

pub fn run(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sig = cfg.precision();
    let m = cfg.ho_m.unwrap_or(1.0);
    let k = cfg.ho_k.unwrap_or(1.0);
    let conv = cfg.ho_convention;
    let gamma_ep = match conv {
        HoConvention::TwoGamma => (m * k).sqrt(),
        HoConvention::OneGamma => 2.0 * (m * k).sqrt(),
    };
    let ep = HoParams::new(m, gamma_ep, k)?.with_convention(conv);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let f0 = HoState { p: cfg.ho_p0.unwrap_or(s), x: cfg.ho_x0.unwrap_or(s) };
    let grid = time_grid(cfg, (0.0, 50.0, 501, Spacing::Linear))?;
    let comparators = cfg.ho_comparators.clone().unwrap_or_else(|| vec![2.0 * gamma_ep, 0.5 * gamma_ep]);

    let mut table = Table::new(&["comparator_gamma", "regime", "t", "R_HO"]);
    let mut summaries = Vec::new();
    for gamma in comparators {
        let other = HoParams::new(m, gamma, k)?.with_convention(conv);
        let regime = ho_regime(&other).name();
        let r = ho_ratio(&ep, &other, f0, &grid)?;
        for (t, v) in r.times.iter().zip(&r.values) {
            table.push(vec![
                format_float(gamma, sig),
                regime.to_string(),
                format_float(*t, sig),
                format_float(*v, sig),
            ]);
        }
        let below = match r.values.iter().rposition(|v| *v >= 1.0) {
            None => r.times.first().copied(),
            Some(i) if i + 1 < r.times.len() => Some(r.times[i + 1]),
            Some(_) => None,
        };
        summaries.push(Comparator {
            gamma,
            regime,
            r_final: r.values.last().copied().unwrap_or(f64::NAN),
            below_one_from: below,
            max_rk4_deviation: rk4_deviation(&other, f0, &grid)?,
            truncated: r.truncated,
        });
    }
    let summary = Summary {
        m,
        k,
        convention: conv,
        gamma_ep,
        ep_detected: ep.is_critical(),
        max_rk4_deviation_ep: rk4_deviation(&ep, f0, &grid)?,
        comparators: summaries,
    };
    let mut out = Outputs::default();
    out.csv("ho.csv", &table)?;
    out.json("ho.json", &summary)?;
    Ok(out)
}
