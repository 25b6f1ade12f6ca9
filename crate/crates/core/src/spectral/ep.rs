//! Exceptional-point catalogue: condition functions, root finding along one
//! free parameter, coalescence diagnostics and locus curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, column_scaled_condition, re, CMat, C64};
use crate::model::liouvillian::{
    build_global_liouvillian, build_local_liouvillian, build_reduced_liouvillian, Liouvillian,
};
use crate::model::params::{derived_rates, global_rates, MachineParams, Regime};
use crate::par::Exec;
use crate::spectral::analytic::{eta_switch, global_spectral_aux, spectral_aux};
use crate::spectral::eigen::schur_eigenvectors;

/// The kinds of exceptional points of the local and global Liouvillians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpKind {
    /// `eta = 0`: third-order point of the reduced block.
    EtaZero,
    /// `beta_s = 0`: simultaneous second-order points.
    BetaZero,
    /// `alpha_s = beta_s`.
    AlphaMinusBeta,
    /// `alpha_s = -beta_s`.
    AlphaPlusBeta,
    /// `alpha_s = beta_s = 0`: simultaneous fourth-order points.
    AlphaAndBeta,
    /// `X = 0` in the global regime.
    GlobalX,
    /// `Y = 0` in the global regime.
    GlobalY,
}

impl EpKind {
    pub const LOCAL: [EpKind; 5] =
        [EpKind::EtaZero, EpKind::BetaZero, EpKind::AlphaMinusBeta, EpKind::AlphaPlusBeta, EpKind::AlphaAndBeta];
    pub const GLOBAL: [EpKind; 2] = [EpKind::GlobalX, EpKind::GlobalY];

    pub fn order(self) -> usize {
        match self {
            EpKind::EtaZero => 3,
            EpKind::AlphaAndBeta => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EpKind::EtaZero => "eta_zero",
            EpKind::BetaZero => "beta_zero",
            EpKind::AlphaMinusBeta => "alpha_minus_beta",
            EpKind::AlphaPlusBeta => "alpha_plus_beta",
            EpKind::AlphaAndBeta => "alpha_and_beta",
            EpKind::GlobalX => "global_x",
            EpKind::GlobalY => "global_y",
        }
    }

    pub fn for_regime(regime: Regime) -> &'static [EpKind] {
        match regime {
            Regime::Local => &Self::LOCAL,
            Regime::Global => &Self::GLOBAL,
        }
    }
}

/// The parameter varied in a one-dimensional EP search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParameter {
    G,
    Gamma1,
    Gamma2,
    T1,
    T2,
    /// Both bath couplings set to the same value.
    GammaBoth,
    /// The qubit gap, with `T_k / epsilon` held fixed.
    EpsilonScaled,
}

impl FreeParameter {
    pub fn value(self, p: &MachineParams) -> f64 {
        match self {
            FreeParameter::G => p.g,
            FreeParameter::Gamma1 | FreeParameter::GammaBoth => p.gamma1,
            FreeParameter::Gamma2 => p.gamma2,
            FreeParameter::T1 => p.t1,
            FreeParameter::T2 => p.t2,
            FreeParameter::EpsilonScaled => p.epsilon,
        }
    }

    pub fn apply(self, p: &MachineParams, x: f64) -> MachineParams {
        let mut q = *p;
        match self {
            FreeParameter::G => q.g = x,
            FreeParameter::Gamma1 => q.gamma1 = x,
            FreeParameter::Gamma2 => q.gamma2 = x,
            FreeParameter::T1 => q.t1 = x,
            FreeParameter::T2 => q.t2 = x,
            FreeParameter::GammaBoth => {
                q.gamma1 = x;
                q.gamma2 = x;
            }
            FreeParameter::EpsilonScaled => {
                q.t1 = p.t1 / p.epsilon * x;
                q.t2 = p.t2 / p.epsilon * x;
                q.epsilon = x;
            }
        }
        q
    }
}

/// Real condition function whose simple zeros are the EPs of `kind`.
///
/// For the `alpha_s -+ beta_s` kinds this is `alpha_s^2 - beta_s^2`; the sign
/// of `alpha_s` at the root decides which of the two kinds it is.
pub fn condition(kind: EpKind, params: &MachineParams) -> Result<f64> {
    match kind {
        EpKind::GlobalX => Ok(global_spectral_aux(params)?.x),
        EpKind::GlobalY => Ok(global_spectral_aux(params)?.y),
        _ => {
            let r = derived_rates(params)?;
            let aux = spectral_aux(&r, params.g);
            Ok(match kind {
                EpKind::EtaZero => r.delta_gamma * r.delta_gamma - 4.0 * params.g * params.g,
                EpKind::BetaZero => aux.beta_radicand,
                EpKind::AlphaAndBeta => aux.alpha_s.re,
                _ => aux.alpha_s.re.powi(2) - aux.beta_radicand / 64.0,
            })
        }
    }
}

/// Coalescence diagnostics of an eigenvalue cluster.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoalescenceDiagnostics {
    /// Numeric eigenvalues matched to the requested cluster.
    #[serde(skip)]
    pub eigenvalues: Vec<C64>,
    pub min_eigenvalue_gap: f64,
    /// Smallest phase-aligned distance between unit right eigenvectors.
    pub min_vector_distance: f64,
    /// Condition number of the full unit-column eigenvector matrix.
    pub condition_number: f64,
    /// Size of the largest group of mutually coalesced eigenvectors.
    pub coalesced: usize,
}

/// Eigenvector distance below which two eigenvectors count as coalesced.
pub const COALESCENCE_DISTANCE: f64 = 1e-3;

/// Diagnose the cluster of numeric eigenvalues nearest to `cluster`.
pub fn coalescence_diagnostics(l: &Liouvillian, cluster: &[C64]) -> Result<CoalescenceDiagnostics> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let (vals, vecs) = schur_eigenvectors(&l.matrix);
    let mut used = vec![false; vals.len()];
    let mut picked = Vec::with_capacity(cluster.len());
    for target in cluster {
        let k = (0..vals.len())
            .filter(|&k| !used[k])
            .min_by(|&a, &b| (vals[a] - target).norm().total_cmp(&(vals[b] - target).norm()))
            .ok_or(Error::EmptyCluster)?;
        used[k] = true;
        picked.push(k);
    }
    let m = picked.len();
    let mut min_gap = f64::INFINITY;
    let mut min_dist = f64::INFINITY;
    let mut label: Vec<usize> = (0..m).collect();
    for a in 0..m {
        for b in (a + 1)..m {
            let (i, j) = (picked[a], picked[b]);
            min_gap = min_gap.min((vals[i] - vals[j]).norm());
            let overlap = vecs.column(i).dotc(&vecs.column(j)).norm();
            let d = (2.0 - 2.0 * overlap).max(0.0).sqrt();
            min_dist = min_dist.min(d);
            if d < COALESCENCE_DISTANCE {
                let (la, lb) = (label[a], label[b]);
                for x in label.iter_mut() {
                    if *x == lb {
                        *x = la;
                    }
                }
            }
        }
    }
    let coalesced = (0..m).map(|a| label.iter().filter(|&&x| x == label[a]).count()).max().unwrap_or(0);
    let condition_number = column_scaled_condition(&vecs);
    Ok(CoalescenceDiagnostics {
        eigenvalues: picked.iter().map(|&k| vals[k]).collect(),
        min_eigenvalue_gap: min_gap,
        min_vector_distance: if m > 1 { min_dist } else { 0.0 },
        condition_number,
        coalesced: if m > 1 { coalesced } else { 1 },
    })
}

/// One located exceptional point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpReport {
    pub kind: EpKind,
    pub order: usize,
    pub free: FreeParameter,
    pub value: f64,
    pub params: MachineParams,
    #[serde(skip)]
    pub merged_eigenvalues: Vec<C64>,
    pub diagnostics: CoalescenceDiagnostics,
}

/// Result of a one-dimensional search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpSearch {
    pub reports: Vec<EpReport>,
    /// Kinds without a real solution in the scanned range.
    pub not_reachable: Vec<EpKind>,
}

/// Bracketing grid: 200 points per decade on `[lo, hi]`; a zero lower end
/// is represented by the point 0 plus a grid starting nine decades below
/// `hi`.
pub fn bracketing_grid(lo: f64, hi: f64) -> Vec<f64> {
    const PER_DECADE: f64 = 200.0;
    let mut out = Vec::new();
    let start = if lo > 0.0 {
        lo
    } else {
        out.push(lo);
        hi * 1e-9
    };
    let decades = (hi / start).log10().max(0.0);
    let n = ((decades * PER_DECADE).ceil() as usize).max(1);
    for k in 0..=n {
        out.push(start * (hi / start).powf(k as f64 / n as f64));
    }
    out
}

/// Bisect a sign change of `f` on `[a, b]` to relative width `1e-12`.
pub fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    for _ in 0..300 {
        if (b - a).abs() <= 1e-12 * a.abs().max(b.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// All sign-change roots of `f` on the bracketing grid of `[lo, hi]`.
pub fn bracket_roots<F>(f: &F, lo: f64, hi: f64, exec: Exec) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let grid = bracketing_grid(lo, hi);
    let vals: Result<Vec<f64>> = exec.map(&grid, |x| f(*x)).into_iter().collect();
    let vals = vals?;
    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        let (a, b) = (vals[k], vals[k + 1]);
        if a == 0.0 {
            roots.push(grid[k]);
        } else if a * b < 0.0 {
            roots.push(bisect(f, grid[k], grid[k + 1])?);
        }
    }
    if vals[grid.len() - 1] == 0.0 {
        roots.push(grid[grid.len() - 1]);
    }
    Ok(roots)
}

fn merged_eigenvalues(kind: EpKind, p: &MachineParams) -> Result<Vec<C64>> {
    Ok(match kind {
        EpKind::GlobalX | EpKind::GlobalY => {
            let aux = global_spectral_aux(p)?;
            let w = if kind == EpKind::GlobalX { p.g + p.epsilon } else { p.g - p.epsilon };
            vec![c(-aux.gamma_sum / 4.0, w), c(-aux.gamma_sum / 4.0, -w)]
        }
        _ => {
            let r = derived_rates(p)?;
            let h = -r.gamma_sum / 2.0;
            match kind {
                EpKind::EtaZero => vec![re(h)],
                EpKind::BetaZero => {
                    let s = crate::linalg::csqrt(spectral_aux(&r, p.g).alpha_s);
                    let ie = c(0.0, p.epsilon);
                    vec![ie + h - s, -ie + h - s, ie + h + s, -ie + h + s]
                }
                _ => vec![c(h, p.epsilon), c(h, -p.epsilon)],
            }
        }
    })
}

fn liouvillian_for(kind: EpKind, p: &MachineParams) -> Result<Liouvillian> {
    match kind {
        EpKind::EtaZero => build_reduced_liouvillian(p, 6),
        EpKind::GlobalX | EpKind::GlobalY => build_global_liouvillian(p),
        _ => build_local_liouvillian(p),
    }
}

fn report(kind: EpKind, free: FreeParameter, value: f64, base: &MachineParams) -> Result<EpReport> {
    let p = free.apply(base, value);
    let merged = merged_eigenvalues(kind, &p)?;
    let l = liouvillian_for(kind, &p)?;
    // The third-order point sits on top of the non-coalescing -Gamma/2 mode,
    // so its cluster has one extra member.
    let cluster = match kind {
        EpKind::EtaZero => vec![merged[0]; 4],
        EpKind::BetaZero => vec![merged[0]; 2],
        _ => vec![merged[0]; kind.order()],
    };
    let diagnostics = coalescence_diagnostics(&l, &cluster)?;
    Ok(EpReport { kind, order: kind.order(), free, value, params: p, merged_eigenvalues: merged, diagnostics })
}

/// Locate every EP reachable by varying `free` over `range`, keeping the
/// other parameters of `params` fixed.
pub fn find_eps(params: &MachineParams, free: FreeParameter, range: (f64, f64), exec: Exec) -> Result<EpSearch> {
    params.validate()?;
    let (lo, hi) = range;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::ParameterDomain(format!("invalid search range [{lo}, {hi}]")));
    }
    let kinds = EpKind::for_regime(params.regime);
    // Decoupled qubits have no exceptional points.
    if free != FreeParameter::G && params.g == 0.0 {
        return Ok(EpSearch { reports: vec![], not_reachable: kinds.to_vec() });
    }
    let min_positive = |x: f64| x > 0.0 || free != FreeParameter::G;

    let mut reports = Vec::new();
    for &kind in kinds {
        match kind {
            EpKind::EtaZero if free == FreeParameter::G => {
                let gbar = params.critical_coupling()?;
                if gbar > 0.0 && gbar >= lo && gbar <= hi {
                    reports.push(report(kind, free, gbar, params)?);
                }
            }
            EpKind::AlphaMinusBeta | EpKind::AlphaPlusBeta => {
                // Handled together below.
            }
            EpKind::AlphaAndBeta => {
                let f = |x: f64| condition(EpKind::AlphaAndBeta, &free.apply(params, x));
                for x in bracket_roots(&f, lo, hi, exec)? {
                    let p = free.apply(params, x);
                    let r = derived_rates(&p)?;
                    let scale = r.gamma_sum.powi(4);
                    if min_positive(x) && spectral_aux(&r, p.g).beta_radicand.abs() < 1e-9 * scale {
                        reports.push(report(kind, free, x, params)?);
                    }
                }
            }
            _ => {
                let f = |x: f64| condition(kind, &free.apply(params, x));
                for x in bracket_roots(&f, lo, hi, exec)? {
                    if min_positive(x) {
                        reports.push(report(kind, free, x, params)?);
                    }
                }
            }
        }
    }
    if params.regime == Regime::Local {
        let f = |x: f64| condition(EpKind::AlphaMinusBeta, &free.apply(params, x));
        for x in bracket_roots(&f, lo, hi, exec)? {
            if !min_positive(x) {
                continue;
            }
            let p = free.apply(params, x);
            let r = derived_rates(&p)?;
            let alpha = spectral_aux(&r, p.g).alpha_s.re;
            if alpha.abs() < 1e-9 * r.gamma_sum.powi(2) {
                continue; // Reported as AlphaAndBeta.
            }
            let kind = if alpha > 0.0 { EpKind::AlphaMinusBeta } else { EpKind::AlphaPlusBeta };
            reports.push(report(kind, free, x, params)?);
        }
    }
    reports.sort_by(|a, b| a.value.total_cmp(&b.value).then((a.kind as u8).cmp(&(b.kind as u8))));
    let not_reachable = kinds.iter().copied().filter(|k| !reports.iter().any(|r| r.kind == *k)).collect();
    Ok(EpSearch { reports, not_reachable })
}

/// Which EP conditions hold at a single parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EpFlags {
    pub eta_zero: bool,
    pub beta_zero: bool,
    pub alpha_minus_beta: bool,
    pub alpha_plus_beta: bool,
    pub alpha_and_beta: bool,
    pub global_x: bool,
    pub global_y: bool,
}

impl EpFlags {
    pub fn any(&self) -> bool {
        self.eta_zero
            || self.beta_zero
            || self.alpha_minus_beta
            || self.alpha_plus_beta
            || self.alpha_and_beta
            || self.global_x
            || self.global_y
    }
}

/// Relative tolerance of the point-wise EP flags.
pub const FLAG_TOL: f64 = 1e-6;

pub fn ep_flags(params: &MachineParams) -> Result<EpFlags> {
    let mut f = EpFlags::default();
    if params.g == 0.0 {
        return Ok(f);
    }
    match params.regime {
        Regime::Local => {
            let r = derived_rates(params)?;
            let aux = spectral_aux(&r, params.g);
            let s2 = r.gamma_sum.powi(2);
            f.eta_zero = r.eta.norm() < eta_switch(&r);
            f.beta_zero = aux.beta_s.norm() < FLAG_TOL * s2;
            f.alpha_minus_beta = (aux.alpha_s - aux.beta_s).norm() < FLAG_TOL * s2;
            f.alpha_plus_beta = (aux.alpha_s + aux.beta_s).norm() < FLAG_TOL * s2;
            f.alpha_and_beta = f.beta_zero && aux.alpha_s.norm() < FLAG_TOL * s2;
        }
        Regime::Global => {
            let g = global_rates(params)?;
            let aux = global_spectral_aux(params)?;
            let s2 = g.gamma_sum().powi(2);
            f.global_x = aux.x.abs() < FLAG_TOL * s2;
            f.global_y = aux.y.abs() < FLAG_TOL * s2;
        }
    }
    Ok(f)
}

/// A point on an EP locus: at `x` along the chosen axis, coupling `g` is an
/// EP of `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocusPoint {
    pub x: f64,
    pub g: f64,
    pub kind: EpKind,
}

/// `eta = 0` and `beta_s = 0` loci in the `(axis, g)` plane: for each `x`
/// the couplings `g` in `g_range` at which the condition vanishes.
pub fn eta_beta_loci(
    base: &MachineParams,
    axis: FreeParameter,
    xs: &[f64],
    g_range: (f64, f64),
    exec: Exec,
) -> Result<Vec<LocusPoint>> {
    let per_x: Vec<Result<Vec<LocusPoint>>> = exec.map(xs, |&x| {
        let p = axis.apply(base, x);
        let mut pts = Vec::new();
        let gbar = p.critical_coupling()?;
        if gbar > 0.0 && gbar >= g_range.0 && gbar <= g_range.1 {
            pts.push(LocusPoint { x, g: gbar, kind: EpKind::EtaZero });
        }
        let f = |g: f64| condition(EpKind::BetaZero, &p.with_g(g));
        for g in bracket_roots(&f, g_range.0, g_range.1, Exec::Sequential)? {
            if g > 0.0 {
                pts.push(LocusPoint { x, g, kind: EpKind::BetaZero });
            }
        }
        Ok(pts)
    });
    let mut out = Vec::new();
    for r in per_x {
        out.extend(r?);
    }
    Ok(out)
}

/// Smallest signed relative separation `(g_beta - g_eta) / g_eta` over the
/// common support of the two loci, together with whether the sign stays
/// the same everywhere. `None` when the loci share no abscissa.
pub fn locus_separation(points: &[LocusPoint]) -> Option<(f64, bool)> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.dedup();
    let mut min_abs = f64::INFINITY;
    let mut signs = Vec::new();
    for x in xs {
        let eta: Vec<f64> = points.iter().filter(|p| p.x == x && p.kind == EpKind::EtaZero).map(|p| p.g).collect();
        let beta: Vec<f64> = points.iter().filter(|p| p.x == x && p.kind == EpKind::BetaZero).map(|p| p.g).collect();
        for ge in &eta {
            for gb in &beta {
                let s = (gb - ge) / ge;
                min_abs = min_abs.min(s.abs());
                signs.push(s > 0.0);
            }
        }
    }
    if signs.is_empty() {
        return None;
    }
    let same = signs.iter().all(|&s| s == signs[0]);
    Some((min_abs, same))
}

/// Eigenvector-matrix condition number of a Liouvillian (unit columns).
pub fn eigenvector_condition(l: &Liouvillian) -> f64 {
    let (_, v): (Vec<C64>, CMat) = schur_eigenvectors(&l.matrix);
    column_scaled_condition(&v)
}
