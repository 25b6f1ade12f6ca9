//! Closed-form spectra, steady state and eigenmatrices.

use crate::error::{Error, Result};
use crate::linalg::{c, csqrt, fix_sign, re, Mat4, C64};
use crate::model::density::DensityMatrix;
use crate::model::params::{derived_rates, global_rates, BathRates, MachineParams, Regime};

/// Relative size of `|eta| / Gamma` below which the reduced spectrum is
/// treated as defective.
pub const ETA_SWITCH_RELATIVE: f64 = 1e-6;

/// Absolute switch threshold `1e-6 * Gamma` for the given rates.
pub fn eta_switch(rates: &BathRates) -> f64 {
    ETA_SWITCH_RELATIVE * rates.gamma_sum
}

/// Auxiliary quantities of the coherence-sector eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAux {
    /// `-g^2 + (Gamma_1^2 + Gamma_2^2) / 8`.
    pub alpha_s: C64,
    /// `sqrt(4 (Delta Gamma Gamma)^2 - 16 g^2 delta) / 8`, principal branch.
    pub beta_s: C64,
    pub delta: C64,
    /// The radicand `4 (Delta Gamma Gamma)^2 - 16 g^2 delta` of `beta_s`.
    pub beta_radicand: f64,
}

pub fn spectral_aux(rates: &BathRates, g: f64) -> SpectralAux {
    let [p1, p2] = rates.gamma_plus;
    let [m1, m2] = rates.gamma_minus;
    let [t1, t2] = rates.total;
    let delta = t1 * t1 + t2 * t2 + 2.0 * m1 * (m2 - 3.0 * p2) + 2.0 * p1 * (p2 - 3.0 * m2);
    let radicand = 4.0 * (rates.delta_gamma * rates.gamma_sum).powi(2) - 16.0 * g * g * delta;
    SpectralAux {
        alpha_s: re(-g * g + (t1 * t1 + t2 * t2) / 8.0),
        beta_s: csqrt(re(radicand)) / 8.0,
        delta: re(delta),
        beta_radicand: radicand,
    }
}

fn require_local(params: &MachineParams) -> Result<BathRates> {
    if params.regime != Regime::Local {
        return Err(Error::WrongBuilder("closed forms of the local regime need local parameters".into()));
    }
    derived_rates(params)
}

/// `(0, -Gamma, -Gamma/2, -Gamma/2, -Gamma/2 - eta, -Gamma/2 + eta)`.
pub fn analytic_spectrum_reduced(params: &MachineParams) -> Result<[C64; 6]> {
    let r = require_local(params)?;
    let h = re(-r.gamma_sum / 2.0);
    Ok([re(0.0), re(-r.gamma_sum), h, h, h - r.eta, h + r.eta])
}

/// The six reduced eigenvalues followed by `+-2 i epsilon - Gamma/2`.
pub fn analytic_spectrum_x8(params: &MachineParams) -> Result<[C64; 8]> {
    let six = analytic_spectrum_reduced(params)?;
    let r = derived_rates(params)?;
    let mut out = [re(0.0); 8];
    out[..6].copy_from_slice(&six);
    out[6] = c(-r.gamma_sum / 2.0, 2.0 * params.epsilon);
    out[7] = c(-r.gamma_sum / 2.0, -2.0 * params.epsilon);
    Ok(out)
}

/// All sixteen eigenvalues of the local Liouvillian in closed form.
pub fn analytic_spectrum_local(params: &MachineParams) -> Result<[C64; 16]> {
    let r = require_local(params)?;
    let aux = spectral_aux(&r, params.g);
    let mut out = [re(0.0); 16];
    out[..8].copy_from_slice(&analytic_spectrum_x8(params)?);
    let h = re(-r.gamma_sum / 2.0);
    let ie = c(0.0, params.epsilon);
    let s_minus = csqrt(aux.alpha_s - aux.beta_s);
    let s_plus = csqrt(aux.alpha_s + aux.beta_s);
    let shifts = [-s_minus, s_minus, -s_plus, s_plus];
    for (k, s) in shifts.iter().enumerate() {
        out[8 + 2 * k] = ie + h + s;
        out[9 + 2 * k] = -ie + h + s;
    }
    Ok(out)
}

/// Auxiliary quantities of the global spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSpectralAux {
    pub x: f64,
    pub y: f64,
    pub eps_minus: f64,
    pub eps_plus: f64,
    /// Sum of all four transition-resolved total rates.
    pub gamma_sum: f64,
}

pub fn global_spectral_aux(params: &MachineParams) -> Result<GlobalSpectralAux> {
    let g = global_rates(params)?;
    Ok(GlobalSpectralAux {
        x: g.minus.discriminant(),
        y: g.plus.discriminant(),
        eps_minus: g.minus.energy,
        eps_plus: g.plus.energy,
        gamma_sum: g.gamma_sum(),
    })
}

/// All sixteen eigenvalues of the global Liouvillian in closed form.
pub fn analytic_spectrum_global(params: &MachineParams) -> Result<[C64; 16]> {
    if params.regime != Regime::Global {
        return Err(Error::WrongBuilder("global closed form needs global parameters".into()));
    }
    let rates = global_rates(params)?;
    let aux = global_spectral_aux(params)?;
    let (eps, g) = (params.epsilon, params.g);
    let gq = re(-aux.gamma_sum / 4.0);
    let sx = csqrt(re(aux.x)) / 4.0;
    let sy = csqrt(re(aux.y)) / 4.0;
    let mut out = [re(0.0); 16];
    out[1] = re(-(rates.minus.total(0) + rates.minus.total(1)) / 2.0);
    out[2] = re(-(rates.plus.total(0) + rates.plus.total(1)) / 2.0);
    out[3] = re(-aux.gamma_sum / 2.0);
    out[4] = c(0.0, 2.0 * g) + gq;
    out[5] = c(0.0, -2.0 * g) + gq;
    out[6] = c(0.0, 2.0 * eps) + gq;
    out[7] = c(0.0, -2.0 * eps) + gq;
    let pairs = [(g + eps, -sx), (g + eps, sx), (g - eps, -sy), (g - eps, sy)];
    for (k, (w, s)) in pairs.iter().enumerate() {
        out[8 + 2 * k] = c(0.0, *w) + gq + s;
        out[9 + 2 * k] = c(0.0, -*w) + gq + s;
    }
    Ok(out)
}

/// The unique steady state of the local Liouvillian in closed form.
pub fn analytic_steady_state(params: &MachineParams) -> Result<DensityMatrix> {
    let r = require_local(params)?;
    let g = params.g;
    let [p1, p2] = r.gamma_plus;
    let [m1, m2] = r.gamma_minus;
    let gam = r.gamma_sum;
    let g2 = g * g;
    let mut m = Mat4::zeros();
    m[(0, 0)] = re(4.0 * g2 * (p1 + p2).powi(2) + p1 * p2 * gam * gam);
    m[(1, 1)] = re(4.0 * (m1 + m2) * (p1 + p2) * g2 + p1 * m2 * gam * gam);
    m[(2, 2)] = re(4.0 * (m1 + m2) * (p1 + p2) * g2 + m1 * p2 * gam * gam);
    m[(3, 3)] = re(4.0 * g2 * (m1 + m2).powi(2) + m1 * m2 * gam * gam);
    let coh = 2.0 * g * gam * (p1 * m2 - m1 * p2);
    m[(1, 2)] = c(0.0, coh);
    m[(2, 1)] = c(0.0, -coh);
    m /= re(gam * gam * (4.0 * g2 + r.total[0] * r.total[1]));
    DensityMatrix::new(m)
}

/// Unnormalized eigenmatrix of `-Gamma/2` in the dressed coherence sector,
/// multiplied through by `Gamma Delta Gamma` so it stays finite everywhere.
fn eig4_scaled(r: &BathRates, g: f64) -> Mat4 {
    let [p1, p2] = r.gamma_plus;
    let [m1, m2] = r.gamma_minus;
    // sqrt(Delta Gamma^2 - eta^2) = 2 g.
    let s = 2.0 * g;
    let mut m = Mat4::zeros();
    m[(0, 0)] = re(2.0 * (p1 + p2) * s);
    m[(1, 1)] = re((m1 - p1 + m2 - p2) * s);
    m[(2, 2)] = m[(1, 1)];
    m[(3, 3)] = re(-2.0 * (m1 + m2) * s);
    let scale = re(r.gamma_sum * r.delta_gamma);
    m[(1, 2)] = c(0.0, -1.0) * scale;
    m[(2, 1)] = c(0.0, 1.0) * scale;
    m
}

/// Unnormalized eigenmatrix of `-Gamma/2 + e` where `e = +-eta`, multiplied
/// through by `(Gamma + 2 e) sqrt(Delta Gamma^2 - e^2)`.
fn eig56_scaled(r: &BathRates, g: f64, e: C64) -> Mat4 {
    let [p1, p2] = r.gamma_plus;
    let [m1, m2] = r.gamma_minus;
    let dg = r.delta_gamma;
    let den = (re(r.gamma_sum) + e * 2.0) * (2.0 * g);
    let mut m = Mat4::zeros();
    m[(0, 0)] = re(2.0 * dg * (p1 + p2)) + e * (2.0 * (p1 - p2));
    m[(1, 1)] = re((m1 - p1 + m2 - p2) * dg) - e * e * 2.0 - e * (2.0 * (p1 + m2));
    m[(2, 2)] = re((m1 - p1 + m2 - p2) * dg) + e * e * 2.0 + e * (2.0 * (m1 + p2));
    m[(3, 3)] = re(-2.0 * dg * (m1 + m2)) + e * (2.0 * (m2 - m1));
    m[(1, 2)] = c(0.0, -1.0) * den;
    m[(2, 1)] = c(0.0, 1.0) * den;
    m
}

fn unit(m: Mat4) -> Mat4 {
    let n = m.norm();
    fix_sign(&(m / re(n)))
}

/// Closed-form eigenmatrices of the reduced Liouvillian.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEigenmatrices {
    /// Same order as [`analytic_spectrum_reduced`].
    pub eigenvalues: [C64; 6],
    /// `matrices[0]` is the unit-trace steady state, the others have unit
    /// Hilbert-Schmidt norm.
    pub matrices: [Mat4; 6],
}

/// Evaluate the closed-form eigenmatrices `rho_1 ... rho_6`.
///
/// The `-Gamma/2 -+ eta` eigenmatrices come from one template evaluated at
/// `e = -+eta`; both are singular at `eta = 0`, where the Jordan chain takes
/// over.
pub fn analytic_eigenmatrices_reduced(params: &MachineParams) -> Result<ReducedEigenmatrices> {
    let r = require_local(params)?;
    let threshold = eta_switch(&r);
    if r.eta.norm() < threshold {
        return Err(Error::EpSingularity { eta_abs: r.eta.norm(), threshold });
    }
    let ss = analytic_steady_state(params)?.into_inner();
    let mut rho2 = Mat4::zeros();
    for (k, s) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
        rho2[(k, k)] = re(0.5 * s);
    }
    let mut rho3 = Mat4::zeros();
    rho3[(1, 2)] = re(std::f64::consts::FRAC_1_SQRT_2);
    rho3[(2, 1)] = re(std::f64::consts::FRAC_1_SQRT_2);
    let rho4 = unit(eig4_scaled(&r, params.g));
    let rho5 = unit(eig56_scaled(&r, params.g, -r.eta));
    let rho6 = unit(eig56_scaled(&r, params.g, r.eta));
    Ok(ReducedEigenmatrices {
        eigenvalues: analytic_spectrum_reduced(params)?,
        matrices: [ss, rho2, rho3, rho4, rho5, rho6],
    })
}

/// Normalized closed-form `-Gamma/2` eigenmatrix in the dressed sector,
/// evaluated with the explicit `eta` supplied by the caller. Finite at the
/// exceptional point.
pub fn eig4_with_eta(params: &MachineParams, eta: C64) -> Result<Mat4> {
    let r = require_local(params)?;
    // sqrt(Delta Gamma^2 - eta^2) replaces 2 g when eta is overridden.
    let g_eff = csqrt(re(r.delta_gamma * r.delta_gamma) - eta * eta) / 2.0;
    if g_eff.im.abs() > 0.0 {
        return Err(Error::ParameterDomain("eta override exceeds |Delta Gamma|".into()));
    }
    Ok(unit(eig4_scaled(&r, g_eff.re)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hs_inner, vectorize, ONE};
    use crate::model::liouvillian::{build_local_liouvillian, build_reduced_liouvillian};
    use crate::model::params::{BathStatistics, Regime};

    fn fig3(g: f64) -> MachineParams {
        MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, g).unwrap()
    }

    fn residual(params: &MachineParams, m: &Mat4, lambda: C64) -> f64 {
        let l = build_local_liouvillian(params).unwrap().matrix;
        let v = vectorize(m);
        (&l * &v - v * lambda).norm()
    }

    #[test]
    fn reduced_spectrum_at_eta_zero() {
        let r = BathRates::from_rates([0.0, 0.0], [0.06, 0.016], 0.011);
        assert!(r.eta.norm() < 1e-9);
        assert!((r.gamma_sum / 2.0 - 0.038).abs() < 1e-15);
    }

    #[test]
    fn reduced_spectrum_decoupled() {
        let p = fig3(0.0);
        let s = analytic_spectrum_reduced(&p).unwrap();
        let r = derived_rates(&p).unwrap();
        assert_eq!(s[0], re(0.0));
        assert!((s[4] - re(-r.total[0])).norm() < 1e-16);
        assert!((s[5] - re(-r.total[1])).norm() < 1e-16);
    }

    #[test]
    fn coherence_pair_split() {
        let p = fig3(0.004);
        let s = analytic_spectrum_local(&p).unwrap();
        assert!((s[6] - s[7] - c(0.0, 4.0)).norm() < 1e-14);
        let gp = MachineParams { regime: Regime::Global, ..p };
        let sg = analytic_spectrum_global(&gp).unwrap();
        assert_eq!(sg[0], re(0.0));
        assert!((sg[4] - sg[5] - c(0.0, 4.0 * 0.004)).norm() < 1e-15);
    }

    #[test]
    fn steady_state_is_null_vector() {
        for (g, stat) in [(0.005, BathStatistics::Bosonic), (0.02, BathStatistics::Fermionic)] {
            let p = fig3(g).with_statistics(stat);
            let ss = analytic_steady_state(&p).unwrap();
            assert!(residual(&p, ss.matrix(), re(0.0)) < 1e-12);
            assert!((ss.matrix().trace() - ONE).norm() < 1e-14);
            let coh = ss.matrix()[(1, 2)];
            assert!(coh.re == 0.0 && coh.im != 0.0);
            assert_eq!(ss.matrix()[(2, 1)], coh.conj());
        }
    }

    #[test]
    fn steady_state_decoupled_is_product() {
        let p = fig3(0.0);
        let r = derived_rates(&p).unwrap();
        let ss = analytic_steady_state(&p).unwrap();
        let expected = r.gamma_plus[0] * r.gamma_plus[1] / (r.total[0] * r.total[1]);
        assert!((ss.matrix()[(0, 0)].re - expected).abs() < 1e-15);
    }

    #[test]
    fn closed_form_eigenmatrices_are_eigenmatrices() {
        for p in [
            fig3(0.005),
            fig3(0.02),
            fig3(0.001),
            MachineParams::new(1.0, 1.0, 0.1, 0.001, 0.011, 0.001).unwrap(),
            MachineParams::new(1.0, 1.0, 0.1, 0.001, 0.011, 0.005).unwrap(),
        ] {
            let e = analytic_eigenmatrices_reduced(&p).unwrap();
            let scale = derived_rates(&p).unwrap().gamma_sum;
            for k in 0..6 {
                let res = residual(&p, &e.matrices[k], e.eigenvalues[k]);
                assert!(res < 1e-14 * scale.max(1.0) + 1e-15, "k={k} res={res:e}");
                if k > 0 {
                    assert!((e.matrices[k].norm() - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn printed_constant_eigenmatrices() {
        let e = analytic_eigenmatrices_reduced(&fig3(0.005)).unwrap();
        assert_eq!(e.matrices[1][(0, 0)], re(0.5));
        assert_eq!(e.matrices[1][(1, 1)], re(-0.5));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(e.matrices[2][(1, 2)], re(s));
        assert_eq!(e.matrices[2].iter().filter(|z| z.norm() > 0.0).count(), 2);
        // rho_3 is orthogonal to rho_4.
        assert!(hs_inner(&e.matrices[2], &e.matrices[3]).norm() < 1e-15);
    }

    #[test]
    fn eigenmatrices_coalesce_at_eta_zero() {
        let base = fig3(0.0);
        let gbar = base.critical_coupling().unwrap();
        let mut last = f64::INFINITY;
        for d in [1e-4, 1e-6, 1e-8, 1e-10] {
            let p = base.with_g(gbar * (1.0 - d));
            let e = analytic_eigenmatrices_reduced(&p).unwrap();
            let dist = (e.matrices[3] - e.matrices[4]).norm()
                + (e.matrices[3] - e.matrices[5]).norm()
                + (e.matrices[4] - e.matrices[5]).norm();
            assert!(dist < last);
            last = dist;
        }
        assert!(last < 1e-3);
        let p = base.with_g(gbar);
        assert!(matches!(analytic_eigenmatrices_reduced(&p), Err(Error::EpSingularity { .. })));
    }

    #[test]
    fn reduced_spectrum_is_sub_spectrum_of_six_block() {
        let p = fig3(0.007);
        let l6 = build_reduced_liouvillian(&p, 6).unwrap();
        let s = analytic_spectrum_reduced(&p).unwrap();
        // Characteristic polynomial check: det(L6 - lambda) = 0 for each root.
        for lam in s {
            let m = &l6.matrix - crate::CMat::identity(6, 6) * lam;
            let svals = m.svd(false, false).singular_values;
            assert!(svals.min() < 1e-12, "{lam}");
        }
    }
}
