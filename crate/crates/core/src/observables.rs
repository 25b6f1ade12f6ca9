//! Figures of merit along trajectories: heat currents, concurrence,
//! populations, the `|10>`/`|01>` coherence and the distance to the steady
//! state.

use serde::Serialize;

use crate::dynamics::propagate::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_sqrt, re, smallest_right_singular_vectors, trace_norm, Mat4};
use crate::model::basis::hamiltonian;
use crate::model::density::DensityMatrix;
use crate::model::liouvillian::{bath_jump_operators, build_global_liouvillian};
use crate::model::params::{MachineParams, Regime};
use crate::spectral::analytic::analytic_steady_state;

fn dissipator(l: &Mat4, rho: &Mat4) -> Mat4 {
    let ldl = l.adjoint() * l;
    l * rho * l.adjoint() - (ldl * rho + rho * ldl) * re(0.5)
}

/// Energy `Tr[(H_S + H_int) rho]`.
pub fn energy(rho: &Mat4, params: &MachineParams) -> f64 {
    (hamiltonian(params.epsilon, params.g) * rho).trace().re
}

/// Heat current from bath `bath` (0 or 1): the rate of change of
/// `Tr[(H_S + H_int) rho]` generated by that bath's dissipator. Positive
/// values mean energy flows from the bath into the system.
pub fn heat_current(rho: &Mat4, params: &MachineParams, bath: usize) -> Result<f64> {
    if bath > 1 {
        return Err(Error::ParameterDomain(format!("bath index {bath} is not 0 or 1")));
    }
    let jumps = &bath_jump_operators(params)?[bath];
    let h = hamiltonian(params.epsilon, params.g);
    let d = jumps.iter().fold(Mat4::zeros(), |acc, (rate, l)| acc + dissipator(l, rho) * re(*rate));
    Ok((h * d).trace().re)
}

/// Wootters concurrence, with the eigenvalues of
/// `sqrt(rho) rho~ sqrt(rho)` clipped at zero.
pub fn concurrence(rho: &Mat4) -> f64 {
    // sigma_y (x) sigma_y is anti-diagonal (-1, 1, 1, -1) in this basis.
    let mut yy = Mat4::zeros();
    yy[(0, 3)] = re(-1.0);
    yy[(1, 2)] = re(1.0);
    yy[(2, 1)] = re(1.0);
    yy[(3, 0)] = re(-1.0);
    let flipped = yy * rho.conjugate() * yy;
    let s = psd_sqrt(rho);
    let mut mu: Vec<f64> = hermitian_eigenvalues(&(s * flipped * s)).iter().map(|m| m.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    (mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0)
}

/// Steady state: closed form in the local regime, kernel of the global
/// Liouvillian otherwise.
pub fn steady_state(params: &MachineParams) -> Result<DensityMatrix> {
    match params.regime {
        Regime::Local => analytic_steady_state(params),
        Regime::Global => {
            let l = build_global_liouvillian(params)?;
            let v = smallest_right_singular_vectors(&l.matrix, 1).column(0).into_owned();
            let m = l.from_sector(&v);
            let m = m / m.trace();
            DensityMatrix::new(crate::linalg::hermitian_part(&m))
        }
    }
}

/// Observables available along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Observable {
    J1,
    J2,
    Concurrence,
    Population(usize),
    AbsRho23,
    ReRho23,
    ImRho23,
    TraceDistance,
}

impl Observable {
    pub const ALL: [Observable; 11] = [
        Observable::Population(0),
        Observable::Population(1),
        Observable::Population(2),
        Observable::Population(3),
        Observable::ReRho23,
        Observable::ImRho23,
        Observable::AbsRho23,
        Observable::TraceDistance,
        Observable::J1,
        Observable::J2,
        Observable::Concurrence,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "J1" => Observable::J1,
            "J2" => Observable::J2,
            "C" => Observable::Concurrence,
            "p11" => Observable::Population(0),
            "p22" => Observable::Population(1),
            "p33" => Observable::Population(2),
            "p44" => Observable::Population(3),
            "abs_rho23" => Observable::AbsRho23,
            "re_rho23" => Observable::ReRho23,
            "im_rho23" => Observable::ImRho23,
            "trace_distance" => Observable::TraceDistance,
            other => return Err(Error::UnknownObservable(other.to_string())),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::J1 => "J1",
            Observable::J2 => "J2",
            Observable::Concurrence => "C",
            Observable::Population(0) => "p11",
            Observable::Population(1) => "p22",
            Observable::Population(2) => "p33",
            Observable::Population(_) => "p44",
            Observable::AbsRho23 => "abs_rho23",
            Observable::ReRho23 => "re_rho23",
            Observable::ImRho23 => "im_rho23",
            Observable::TraceDistance => "trace_distance",
        }
    }

    fn evaluate(self, rho: &Mat4, deviation: &Mat4, params: &MachineParams) -> Result<f64> {
        Ok(match self {
            Observable::J1 => heat_current(rho, params, 0)?,
            Observable::J2 => heat_current(rho, params, 1)?,
            Observable::Concurrence => concurrence(rho),
            Observable::Population(k) => rho[(k, k)].re,
            Observable::AbsRho23 => rho[(1, 2)].norm(),
            Observable::ReRho23 => rho[(1, 2)].re,
            Observable::ImRho23 => rho[(1, 2)].im,
            Observable::TraceDistance => 0.5 * trace_norm(deviation),
        })
    }
}

/// A scalar series with its steady-state value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableSeries {
    pub name: &'static str,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub steady_value: f64,
    pub normalized: bool,
}

impl ObservableSeries {
    /// The series divided by its steady value.
    pub fn normalized(&self) -> Result<ObservableSeries> {
        if self.steady_value == 0.0 {
            return Err(Error::Numeric(format!("{} has zero steady value", self.name)));
        }
        Ok(ObservableSeries {
            name: self.name,
            times: self.times.clone(),
            values: self.values.iter().map(|v| v / self.steady_value).collect(),
            steady_value: 1.0,
            normalized: true,
        })
    }
}

/// Evaluate the named observables along `traj`.
pub fn trajectory_observables(
    traj: &Trajectory,
    params: &MachineParams,
    which: &[&str],
) -> Result<Vec<ObservableSeries>> {
    let obs = which.iter().map(|n| Observable::parse(n)).collect::<Result<Vec<_>>>()?;
    let ss = steady_state(params)?;
    let zero = Mat4::zeros();
    obs.into_iter()
        .map(|o| {
            let values = traj
                .states
                .iter()
                .zip(&traj.deviations)
                .map(|(s, d)| o.evaluate(s.matrix(), d, params))
                .collect::<Result<Vec<_>>>()?;
            Ok(ObservableSeries {
                name: o.name(),
                times: traj.times.clone(),
                values,
                steady_value: o.evaluate(ss.matrix(), &zero, params)?,
                normalized: false,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::BathStatistics;

    fn fig4(g: f64) -> MachineParams {
        MachineParams::new(1.0, 1.0, 0.1, 0.001, 0.011, g).unwrap()
    }

    #[test]
    fn steady_currents_balance() {
        for g in [0.001, 0.005, 0.02] {
            let p = fig4(g);
            let ss = analytic_steady_state(&p).unwrap();
            let j1 = heat_current(ss.matrix(), &p, 0).unwrap();
            let j2 = heat_current(ss.matrix(), &p, 1).unwrap();
            assert!((j1 + j2).abs() < 1e-12);
            assert!(j1 > 0.0 && j2 < 0.0);
        }
        let p = fig4(0.0);
        let ss = analytic_steady_state(&p).unwrap();
        assert!(heat_current(ss.matrix(), &p, 0).unwrap().abs() < 1e-15);
        assert!(heat_current(ss.matrix(), &p, 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn global_steady_currents_balance() {
        let p = MachineParams::new(1.0, 2.0, 0.3, 0.01, 0.02, 0.1)
            .unwrap()
            .with_regime(Regime::Global)
            .with_statistics(BathStatistics::Bosonic);
        let ss = steady_state(&p).unwrap();
        let j1 = heat_current(ss.matrix(), &p, 0).unwrap();
        let j2 = heat_current(ss.matrix(), &p, 1).unwrap();
        assert!((j1 + j2).abs() < 1e-12 * j1.abs().max(1e-3));
        assert!(j1 > 0.0);
    }

    #[test]
    fn concurrence_values() {
        assert!((concurrence(DensityMatrix::singlet().matrix()) - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(DensityMatrix::ground().matrix()), 0.0);
        assert_eq!(concurrence(DensityMatrix::maximally_mixed().matrix()), 0.0);
        let ss = analytic_steady_state(&fig4(0.005)).unwrap();
        assert!(concurrence(ss.matrix()) > 0.0);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(Observable::parse("J3"), Err(Error::UnknownObservable(_))));
        for o in Observable::ALL {
            assert_eq!(Observable::parse(o.name()).unwrap(), o);
        }
    }
}
