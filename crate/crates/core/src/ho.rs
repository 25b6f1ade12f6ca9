//! Damped harmonic oscillator analogue: `f = (p, x)` with `f' = M f`.
//!
//! The default convention is `m x'' + 2 gamma x' + k x = 0` with the
//! exceptional point at `gamma^2 = m k`; the alternative convention
//! `m x'' + gamma x' + k x = 0` is mapped onto it by halving `gamma`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::dynamics::grid::validate_grid;
use crate::dynamics::ratio::DampingRegime;
use crate::error::{Error, Result};
use crate::linalg::{csqrt, re, C64};
use crate::model::params::{derived_rates, MachineParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoConvention {
    /// `m x'' + 2 gamma x' + k x = 0`.
    #[default]
    TwoGamma,
    /// `m x'' + gamma x' + k x = 0`.
    OneGamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoParams {
    pub m: f64,
    pub gamma: f64,
    pub k: f64,
    #[serde(default)]
    pub convention: HoConvention,
}

impl HoParams {
    pub fn new(m: f64, gamma: f64, k: f64) -> Result<Self> {
        let p = Self { m, gamma, k, convention: HoConvention::TwoGamma };
        p.validate()?;
        Ok(p)
    }

    pub fn with_convention(mut self, convention: HoConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.m.is_finite() && self.gamma.is_finite() && self.k.is_finite();
        if !(finite && self.m > 0.0 && self.k > 0.0 && self.gamma >= 0.0) {
            return Err(Error::ParameterDomain(format!(
                "oscillator needs m > 0, k > 0, gamma >= 0 (got m = {}, gamma = {}, k = {})",
                self.m, self.gamma, self.k
            )));
        }
        Ok(())
    }

    /// Damping in the `2 gamma x'` convention.
    pub fn effective_gamma(&self) -> f64 {
        match self.convention {
            HoConvention::TwoGamma => self.gamma,
            HoConvention::OneGamma => 0.5 * self.gamma,
        }
    }

    /// `gamma_eff^2 - m k`: positive overdamped, negative underdamped.
    pub fn discriminant(&self) -> f64 {
        let g = self.effective_gamma();
        g * g - self.m * self.k
    }

    pub fn is_critical(&self) -> bool {
        self.discriminant().abs() < CRITICAL_TOL * self.m * self.k
    }
}

/// Relative tolerance on `gamma^2 - m k` for the Jordan path.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoState {
    pub p: f64,
    pub x: f64,
}

impl HoState {
    pub fn norm(&self) -> f64 {
        self.p.hypot(self.x)
    }
}

/// Evolution matrix with rows `(-2 gamma / m, -k)` and `(1 / m, 0)`.
pub fn ho_matrix(params: &HoParams) -> Matrix2<f64> {
    let g = params.effective_gamma();
    Matrix2::new(-2.0 * g / params.m, -params.k, 1.0 / params.m, 0.0)
}

/// `-gamma / m -+ sqrt(gamma^2 - m k) / m`.
pub fn ho_eigenvalues(params: &HoParams) -> [C64; 2] {
    let a = re(-params.effective_gamma() / params.m);
    let s = csqrt(re(params.discriminant())) / params.m;
    [a + s, a - s]
}

pub fn ho_regime(params: &HoParams) -> DampingRegime {
    if params.is_critical() {
        DampingRegime::Critical
    } else if params.discriminant() > 0.0 {
        DampingRegime::Overdamped
    } else {
        DampingRegime::Underdamped
    }
}

/// Closed-form propagation: eigenmodes off the critical point, the Jordan
/// form `e^{lambda t} [(c1 + c2 c t) v1 + c2 v2]` on it.
pub fn ho_propagate(params: &HoParams, f0: HoState, times: &[f64]) -> Result<Vec<HoState>> {
    params.validate()?;
    validate_grid(times)?;
    let m = params.m;
    if params.is_critical() {
        let a = params.effective_gamma() / m;
        let lambda = -a;
        // v1 = (-m a, 1) spans the kernel; (M - lambda) v2 = c v1 for v2 = (1, m a).
        let ma = m * a;
        let c = (1.0 + ma * ma) / m;
        let n2 = 1.0 + ma * ma;
        let c1 = (f0.x - ma * f0.p) / n2;
        let c2 = (f0.p + ma * f0.x) / n2;
        return Ok(times
            .iter()
            .map(|&t| {
                let e = (lambda * t).exp();
                let w = c1 + c2 * c * t;
                HoState { p: e * (w * -ma + c2), x: e * (w + c2 * ma) }
            })
            .collect());
    }
    let [l1, l2] = ho_eigenvalues(params);
    // Eigenvectors (m lambda, 1).
    let (v1, v2) = ((re(m) * l1, re(1.0)), (re(m) * l2, re(1.0)));
    let det = v1.0 * v2.1 - v2.0 * v1.1;
    let a1 = (re(f0.p) * v2.1 - v2.0 * re(f0.x)) / det;
    let a2 = (v1.0 * re(f0.x) - re(f0.p) * v1.1) / det;
    Ok(times
        .iter()
        .map(|&t| {
            let e1 = a1 * (l1 * t).exp();
            let e2 = a2 * (l2 * t).exp();
            HoState { p: (e1 * v1.0 + e2 * v2.0).re, x: (e1 * v1.1 + e2 * v2.1).re }
        })
        .collect())
}

/// Independent RK4 integration with `steps_per_unit` steps per unit time.
pub fn ho_rk4(params: &HoParams, f0: HoState, times: &[f64], steps_per_unit: usize) -> Result<Vec<HoState>> {
    params.validate()?;
    validate_grid(times)?;
    let mm = ho_matrix(params);
    let f = |v: nalgebra::Vector2<f64>| mm * v;
    let mut v = nalgebra::Vector2::new(f0.p, f0.x);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        let n = (span * steps_per_unit as f64).ceil() as usize;
        if n > 0 {
            let h = span / n as f64;
            for _ in 0..n {
                let k1 = f(v);
                let k2 = f(v + k1 * (0.5 * h));
                let k3 = f(v + k2 * (0.5 * h));
                let k4 = f(v + k3 * h);
                v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            }
        }
        t = target;
        out.push(HoState { p: v[0], x: v[1] });
    }
    Ok(out)
}

/// `R_HO(t) = |f_EP(t)| / |f(t)|` with Euclidean norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoRatio {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub truncated: bool,
}

pub fn ho_ratio(params_ep: &HoParams, params_other: &HoParams, f0: HoState, times: &[f64]) -> Result<HoRatio> {
    if !params_ep.is_critical() {
        return Err(Error::NotAnEp { eta_abs: params_ep.discriminant().abs().sqrt(), threshold: 0.0 });
    }
    if params_ep.m != params_other.m || params_ep.k != params_other.k {
        return Err(Error::ParameterDomain("oscillators must share m and k".into()));
    }
    let a = ho_propagate(params_ep, f0, times)?;
    let b = ho_propagate(params_other, f0, times)?;
    let mut out = HoRatio { times: vec![], values: vec![], truncated: false };
    for ((t, x), y) in times.iter().zip(&a).zip(&b) {
        let d = y.norm();
        if d < 1e-300 {
            out.truncated = true;
            break;
        }
        out.times.push(*t);
        out.values.push(x.norm() / d);
    }
    Ok(out)
}

/// Oscillator with the same discriminant as the reduced machine block:
/// `m = 1`, `k = 4 g^2`, `gamma = |Delta Gamma|`, so `gamma^2 - m k = eta^2`.
pub fn machine_analogue(params: &MachineParams) -> Result<HoParams> {
    let r = derived_rates(params)?;
    if params.g == 0.0 {
        return Err(Error::NoClassification);
    }
    HoParams::new(1.0, r.delta_gamma.abs(), 4.0 * params.g * params.g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::grid::linear_grid;
    use crate::dynamics::ratio::classify_damping;
    use proptest::prelude::*;

    #[test]
    fn undamped_matrix() {
        let p = HoParams::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(ho_matrix(&p), Matrix2::new(0.0, -1.0, 1.0, 0.0));
        let [a, b] = ho_eigenvalues(&p);
        assert!((a - C64::new(0.0, 1.0)).norm() < 1e-15 && (b - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn critical_matrix_is_defective() {
        let p = HoParams::new(1.0, 1.0, 1.0).unwrap();
        let n = ho_matrix(&p) + Matrix2::identity();
        // Nilpotent and nonzero: one eigenvector for the double eigenvalue -1.
        assert!(n.norm() > 0.5);
        assert!((n * n).norm() < 1e-15);
        assert_eq!(ho_regime(&p), DampingRegime::Critical);
    }

    #[test]
    fn worked_example() {
        let p = HoParams::new(1.0, 1.0, 1.0).unwrap();
        let grid = linear_grid(0.0, 5.0, 51).unwrap();
        let f = ho_propagate(&p, HoState { p: 1.0, x: 1.0 }, &grid).unwrap();
        for (t, s) in grid.iter().zip(&f) {
            let e = (-t).exp();
            assert!((s.x - e * (1.0 + 2.0 * t)).abs() < 1e-14);
            assert!((s.p - e * (1.0 - 2.0 * t)).abs() < 1e-14);
        }
        let z = ho_propagate(&p, HoState { p: 0.0, x: 0.0 }, &grid).unwrap();
        assert!(z.iter().all(|s| s.p == 0.0 && s.x == 0.0));
    }

    #[test]
    fn conventions() {
        let p = HoParams::new(1.0, 2.0, 1.0).unwrap().with_convention(HoConvention::OneGamma);
        assert_eq!(ho_regime(&p), DampingRegime::Critical);
        assert_eq!(ho_regime(&HoParams::new(1.0, 2.0, 1.0).unwrap()), DampingRegime::Overdamped);
    }

    #[test]
    fn machine_regimes_agree() {
        for g in [0.001, 0.005, 0.02] {
            let p = MachineParams::new(1.0, 1.0, 0.1, 0.001, 0.011, g).unwrap();
            assert_eq!(ho_regime(&machine_analogue(&p).unwrap()), classify_damping(&p).unwrap());
        }
        let p = MachineParams::new(1.0, 1.0, 0.1, 0.001, 0.011, 0.0).unwrap().at_critical_coupling().unwrap();
        assert_eq!(ho_regime(&machine_analogue(&p).unwrap()), DampingRegime::Critical);
        assert_eq!(classify_damping(&p).unwrap(), DampingRegime::Critical);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn closed_form_matches_rk4(m in 0.2f64..3.0, gamma in 0.0f64..3.0, k in 0.2f64..3.0,
                                   p0 in -1.0f64..1.0, x0 in -1.0f64..1.0) {
            let p = HoParams::new(m, gamma, k).unwrap();
            prop_assume!(p.discriminant().abs() > 1e-3);
            let grid = linear_grid(0.0, 10.0, 21).unwrap();
            let f0 = HoState { p: p0, x: x0 };
            let a = ho_propagate(&p, f0, &grid).unwrap();
            let b = ho_rk4(&p, f0, &grid, 2000).unwrap();
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u.p - v.p).abs() < 1e-10 && (u.x - v.x).abs() < 1e-10);
            }
            let [l1, l2] = ho_eigenvalues(&p);
            let mm = ho_matrix(&p);
            prop_assert!((l1 + l2 - re(mm.trace())).norm() < 1e-12);
            prop_assert!((l1 * l2 - re(mm.determinant())).norm() < 1e-12);
        }
    }

    #[test]
    fn critical_matches_rk4() {
        for (m, g) in [(1.0, 1.0), (2.0, 0.7), (0.5, 1.3)] {
            let k = g * g / m;
            let p = HoParams::new(m, g, k).unwrap();
            assert!(p.is_critical());
            let grid = linear_grid(0.0, 10.0, 21).unwrap();
            let f0 = HoState { p: 0.3, x: -0.8 };
            let a = ho_propagate(&p, f0, &grid).unwrap();
            let b = ho_rk4(&p, f0, &grid, 2000).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u.p - v.p).abs() < 1e-10 && (u.x - v.x).abs() < 1e-10);
            }
        }
    }
}
