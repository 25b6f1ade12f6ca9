//! Spectral propagation and the trajectory type.

use serde::Serialize;

use crate::dynamics::grid::validate_grid;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, trace_norm, Mat4, C64};
use crate::model::basis::Sector;
use crate::model::density::DensityMatrix;
use crate::model::params::derived_rates;
use crate::spectral::analytic::eta_switch;
use crate::spectral::eigen::{decompose, ModalBasis, SpectralData};
use crate::spectral::jordan::{ep_modal_basis, JordanBlockData};

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Spectral,
    SpectralEp,
    Ode,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Spectral => "spectral",
            Provenance::SpectralEp => "spectral_ep",
            Provenance::Ode => "ode",
        }
    }
}

/// Density matrices on a time grid together with their deviations from the
/// steady state. The deviations are propagated directly so that distances
/// to the steady state keep full relative precision at long times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub deviations: Vec<Mat4>,
    pub steady: Mat4,
    pub provenance: Provenance,
}

impl Trajectory {
    pub(crate) fn assemble(times: &[f64], steady: Mat4, deviations: Vec<Mat4>, provenance: Provenance) -> Result<Self> {
        let steady = hermitian_part(&steady);
        let deviations: Vec<Mat4> = deviations.iter().map(hermitian_part).collect();
        let states = deviations.iter().map(|d| DensityMatrix::new(steady + d)).collect::<Result<Vec<_>>>()?;
        Ok(Self { times: times.to_vec(), states, deviations, steady, provenance })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Trace distance to the steady state at every grid point.
    pub fn distances_to_steady(&self) -> Vec<f64> {
        self.deviations.iter().map(|d| 0.5 * trace_norm(d)).collect()
    }

    /// Largest pointwise trace distance to another trajectory on the same
    /// grid.
    pub fn max_distance(&self, other: &Trajectory) -> f64 {
        self.deviations
            .iter()
            .zip(&other.deviations)
            .map(|(a, b)| 0.5 * trace_norm(&((self.steady + a) - (other.steady + b))))
            .fold(0.0, f64::max)
    }
}

/// `T(rho, sigma) = ||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    (0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))).clamp(0.0, 1.0)
}

/// Expansion coefficients of an initial state in a (generalized) eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCoefficients {
    pub eigenvalues: Vec<C64>,
    pub values: Vec<C64>,
}

pub fn overlap_coefficients(basis: &ModalBasis, rho0: &DensityMatrix) -> Result<OverlapCoefficients> {
    Ok(OverlapCoefficients { eigenvalues: basis.eigenvalues.clone(), values: basis.coefficients(rho0.matrix())? })
}

fn propagate_basis(
    basis: &ModalBasis,
    rho0: &DensityMatrix,
    times: &[f64],
    provenance: Provenance,
) -> Result<Trajectory> {
    validate_grid(times)?;
    let coeffs = basis.coefficients(rho0.matrix())?;
    let steady = basis
        .steady_state()
        .ok_or_else(|| Error::SubspaceViolation(format!("{:?} carries no steady state", basis.sector)))?;
    let deviations = times.iter().map(|&t| basis.deviation_at(&coeffs, t)).collect();
    Trajectory::assemble(times, steady, deviations, provenance)
}

/// `rho(t) = rho_ss + sum_i c_i exp(lambda_i t) rho_i` in the eigenbasis of
/// `data`.
pub fn propagate_spectral(rho0: &DensityMatrix, times: &[f64], data: &SpectralData) -> Result<Trajectory> {
    if data.defective {
        return Err(Error::Defective(Box::new(data.diagnostics.clone())));
    }
    propagate_basis(&data.basis, rho0, times, Provenance::Spectral)
}

/// Propagation at the third-order point: exponential modes plus the
/// polynomial-in-`t` Jordan block. `rest` optionally supplies the
/// eigenbasis of the coherences outside the six-entry sector; without it the
/// rest sector is decomposed on demand when `rho0` needs it.
pub fn propagate_spectral_ep(
    rho0: &DensityMatrix,
    times: &[f64],
    jordan: &JordanBlockData,
    rest: Option<&SpectralData>,
) -> Result<Trajectory> {
    let rates = derived_rates(&jordan.params)?;
    if rates.eta.norm() >= eta_switch(&rates) {
        return Err(Error::InconsistentJordan("parameters are not at the eta = 0 point".into()));
    }
    let scale = rho0.matrix().norm();
    let sector = Sector::smallest_containing(rho0.matrix(), 1e-14 * scale);
    let basis = match (sector, rest) {
        (Sector::Reduced6, _) => jordan.basis.clone(),
        (_, None) => ep_modal_basis(jordan, sector)?,
        (_, Some(r)) => combine(jordan, r, sector)?,
    };
    propagate_basis(&basis, rho0, times, Provenance::SpectralEp)
}

fn combine(jordan: &JordanBlockData, rest: &SpectralData, sector: Sector) -> Result<ModalBasis> {
    if rest.params != jordan.params {
        return Err(Error::InconsistentJordan("rest-sector data built for different parameters".into()));
    }
    let needed = sector.outside_reduced6().expect("sector larger than Reduced6");
    let rest_basis = if rest.basis.sector == needed {
        rest.basis.clone()
    } else if rest.basis.sector == Sector::Rest10 && needed == Sector::X8Rest {
        // Recompute on the smaller block; its modes are a subset.
        let l = crate::model::liouvillian::build_local_liouvillian(&jordan.params)?.restrict(needed)?;
        decompose(&l)?.basis
    } else {
        return Err(Error::InconsistentJordan(format!(
            "rest-sector data on {:?} cannot complete {:?}",
            rest.basis.sector, sector
        )));
    };
    if rest.defective {
        return Err(Error::Defective(Box::new(rest.diagnostics.clone())));
    }
    let mut basis = jordan.basis.clone();
    let offset = basis.right.len();
    basis.sector = sector;
    basis.eigenvalues.extend_from_slice(&rest_basis.eigenvalues);
    basis.right.extend_from_slice(&rest_basis.right);
    basis.left.extend_from_slice(&rest_basis.left);
    for b in &rest_basis.blocks {
        basis.blocks.push(crate::spectral::eigen::JordanBlock { start: b.start + offset, ..b.clone() });
    }
    Ok(basis)
}
