//! Validated 4x4 density matrices.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_error, re, Mat4, ONE};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Distances of a matrix from the set of density matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCheck {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl DensityCheck {
    pub fn of(m: &Mat4) -> Self {
        Self {
            hermiticity: hermiticity_error(m),
            trace_error: (m.trace() - ONE).norm(),
            min_eigenvalue: hermitian_eigenvalues(m)[0],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.hermiticity < HERMITICITY_TOL && self.trace_error < TRACE_TOL && self.min_eigenvalue > -PSD_TOL
    }
}

/// A Hermitian, unit-trace, positive semi-definite 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    pub fn new(m: Mat4) -> Result<Self> {
        let check = DensityCheck::of(&m);
        if check.is_valid() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidDensityMatrix(format!(
                "hermiticity {:.2e}, trace error {:.2e}, min eigenvalue {:.2e}",
                check.hermiticity, check.trace_error, check.min_eigenvalue
            )))
        }
    }

    /// Wrap a matrix the caller has already validated.
    pub fn new_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_inner(self) -> Mat4 {
        self.0
    }

    pub fn check(&self) -> DensityCheck {
        DensityCheck::of(&self.0)
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &nalgebra::Vector4<crate::C64>) -> Result<Self> {
        let n = psi.norm_squared();
        if n == 0.0 {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        Self::new(psi * psi.adjoint() / re(n))
    }

    /// `|00><00|`.
    pub fn ground() -> Self {
        let mut m = Mat4::zeros();
        m[(3, 3)] = ONE;
        Self(m)
    }

    /// `(|10> - |01>)(<10| - <01|) / 2`.
    pub fn singlet() -> Self {
        let mut m = Mat4::zeros();
        m[(1, 1)] = re(0.5);
        m[(2, 2)] = re(0.5);
        m[(1, 2)] = re(-0.5);
        m[(2, 1)] = re(-0.5);
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity() * re(0.25))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_states_are_valid() {
        for s in [DensityMatrix::ground(), DensityMatrix::singlet(), DensityMatrix::maximally_mixed()] {
            assert!(s.check().is_valid());
        }
        assert_eq!(DensityMatrix::ground().matrix()[(3, 3)], ONE);
    }

    #[test]
    fn rejects_non_physical() {
        let mut m = Mat4::zeros();
        m[(0, 0)] = re(1.5);
        m[(1, 1)] = re(-0.5);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(Mat4::identity()).is_err());
    }
}
