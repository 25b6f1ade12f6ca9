//! Initial-state library.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, re, Mat4};
use crate::model::density::DensityMatrix;
use crate::model::params::MachineParams;
use crate::spectral::jordan::{jordan_chain, JordanBlockData};

/// Positivity tolerance used when scaling states inside the Jordan subspace.
pub const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialStateKind {
    /// Product of the Gibbs states of each qubit at its bath temperature.
    ThermalProduct,
    Ground,
    Singlet,
    /// `rho_ss + w' rho' + w'' rho''`, with the weights scaled down only as
    /// far as needed for positivity.
    EpSubspace {
        w_prime: f64,
        w_double_prime: f64,
    },
    /// The direction `(w', w'')` scaled to `fraction` of the largest
    /// positivity-preserving scale.
    EpDirection {
        w_prime: f64,
        w_double_prime: f64,
        fraction: f64,
    },
}

impl InitialStateKind {
    pub fn needs_jordan(&self) -> bool {
        matches!(self, InitialStateKind::EpSubspace { .. } | InitialStateKind::EpDirection { .. })
    }

    pub fn label(&self) -> String {
        match self {
            InitialStateKind::ThermalProduct => "thermal_product".into(),
            InitialStateKind::Ground => "ground".into(),
            InitialStateKind::Singlet => "singlet".into(),
            InitialStateKind::EpSubspace { w_prime, w_double_prime } => {
                format!("ep_subspace({w_prime},{w_double_prime})")
            }
            InitialStateKind::EpDirection { w_prime, w_double_prime, fraction } => {
                format!("ep_direction({w_prime},{w_double_prime},{fraction})")
            }
        }
    }
}

/// Excited-state population of a qubit in equilibrium at temperature `t`.
fn excited_population(epsilon: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if t.is_infinite() {
        0.5
    } else {
        1.0 / ((epsilon / t).exp() + 1.0)
    }
}

pub fn thermal_product(params: &MachineParams) -> DensityMatrix {
    let p1 = excited_population(params.epsilon, params.t1);
    let p2 = excited_population(params.epsilon, params.t2);
    let d = [p1 * p2, p1 * (1.0 - p2), (1.0 - p1) * p2, (1.0 - p1) * (1.0 - p2)];
    DensityMatrix::new_unchecked(Mat4::from_fn(|i, j| if i == j { re(d[i]) } else { re(0.0) }))
}

/// Largest `s >= 0` with `base + s * direction` positive semidefinite to
/// [`POSITIVITY_TOL`], by doubling and bisection.
pub fn max_positive_scale(base: &Mat4, direction: &Mat4) -> Result<f64> {
    let ok = |s: f64| hermitian_eigenvalues(&(base + direction * re(s)))[0] >= -POSITIVITY_TOL;
    if !ok(0.0) {
        return Err(Error::InvalidDensityMatrix("base state is not positive".into()));
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while ok(hi) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(lo)
}

/// Build an initial state. The Jordan-subspace kinds use `jordan` when given
/// and otherwise construct the chain at `params`, which must then sit at the
/// third-order point.
pub fn initial_state(
    kind: &InitialStateKind,
    params: &MachineParams,
    jordan: Option<&JordanBlockData>,
) -> Result<DensityMatrix> {
    match *kind {
        InitialStateKind::ThermalProduct => Ok(thermal_product(params)),
        InitialStateKind::Ground => Ok(DensityMatrix::ground()),
        InitialStateKind::Singlet => Ok(DensityMatrix::singlet()),
        InitialStateKind::EpSubspace { w_prime, w_double_prime } => {
            let owned;
            let j = match jordan {
                Some(j) => j,
                None => {
                    owned = jordan_chain(params)?;
                    &owned
                }
            };
            let dir = j.rho_prime * re(w_prime) + j.rho_double_prime * re(w_double_prime);
            let s = max_positive_scale(&j.steady, &dir)?.min(1.0);
            DensityMatrix::new(j.steady + dir * re(s))
        }
        InitialStateKind::EpDirection { w_prime, w_double_prime, fraction } => {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Error::ParameterDomain(format!("fraction {fraction} outside [0, 1]")));
            }
            let owned;
            let j = match jordan {
                Some(j) => j,
                None => {
                    owned = jordan_chain(params)?;
                    &owned
                }
            };
            let dir = j.rho_prime * re(w_prime) + j.rho_double_prime * re(w_double_prime);
            let s = max_positive_scale(&j.steady, &dir)?;
            if !s.is_finite() {
                return Err(Error::ParameterDomain("direction admits unbounded scaling".into()));
            }
            DensityMatrix::new(j.steady + dir * re(fraction * s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_states() {
        assert_eq!(excited_population(1.0, f64::INFINITY), 0.5);
        let g = initial_state(
            &InitialStateKind::Ground,
            &MachineParams::new(1.0, 1.0, 1.0, 0.01, 0.01, 0.0).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(g.matrix()[(3, 3)].re, 1.0);
    }

    #[test]
    fn hot_thermal_product_is_nearly_mixed() {
        let p = MachineParams::new(1.0, 1e8, 1e8, 0.01, 0.01, 0.0).unwrap();
        let r = thermal_product(&p);
        assert!((r.matrix() - Mat4::identity() * re(0.25)).norm() < 1e-8);
        assert!(r.check().is_valid());
    }

    #[test]
    fn ep_direction_is_strictly_positive() {
        let p = MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, 0.0).unwrap().at_critical_coupling().unwrap();
        let j = jordan_chain(&p).unwrap();
        for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let kind = InitialStateKind::EpDirection { w_prime: a, w_double_prime: b, fraction: 0.9 };
            let r = initial_state(&kind, &p, Some(&j)).unwrap();
            assert!(hermitian_eigenvalues(r.matrix())[0] > 0.0);
            let full = InitialStateKind::EpSubspace { w_prime: 10.0 * a, w_double_prime: 10.0 * b };
            let r = initial_state(&full, &p, None).unwrap();
            assert!(hermitian_eigenvalues(r.matrix())[0] > -POSITIVITY_TOL);
        }
    }
}
