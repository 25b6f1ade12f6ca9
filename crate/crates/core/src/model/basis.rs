//! Operators and index sets in the `{|11>, |10>, |01>, |00>}` basis.

use crate::linalg::{re, Mat4, ONE};

/// Positions of `(rho_11, rho_22, rho_33, rho_44, rho_23, rho_32)` in the
/// row-major 16-vector.
pub const REDUCED6: [usize; 6] = [0, 5, 10, 15, 6, 9];
/// The six reduced entries followed by the `(rho_14, rho_41)` coherences.
pub const X8: [usize; 8] = [0, 5, 10, 15, 6, 9, 3, 12];
/// Positions outside the six-entry sector (all single and double coherences
/// other than `rho_23`, `rho_32`).
pub const REST10: [usize; 10] = [1, 2, 3, 4, 7, 8, 11, 12, 13, 14];
/// The `(rho_14, rho_41)` coherences.
pub const X8_REST: [usize; 2] = [3, 12];
/// Every position.
pub const FULL: [usize; 16] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];
/// Positions of the diagonal entries.
pub const DIAGONAL: [usize; 4] = [0, 5, 10, 15];

/// An invariant sector of the vectorized state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Full,
    X8,
    Reduced6,
    /// Complement of [`Sector::Reduced6`].
    Rest10,
    /// Complement of [`Sector::Reduced6`] inside [`Sector::X8`].
    X8Rest,
}

impl Sector {
    pub fn indices(self) -> &'static [usize] {
        match self {
            Sector::Full => &FULL,
            Sector::X8 => &X8,
            Sector::Reduced6 => &REDUCED6,
            Sector::Rest10 => &REST10,
            Sector::X8Rest => &X8_REST,
        }
    }

    pub fn dim(self) -> usize {
        self.indices().len()
    }

    /// Positions in the full 16-vector that are not in this sector.
    pub fn complement(self) -> Vec<usize> {
        let idx = self.indices();
        (0..16).filter(|k| !idx.contains(k)).collect()
    }

    /// Smallest of the nested physical sectors (six-entry, X-state, full)
    /// that supports `m` up to `tol`.
    pub fn smallest_containing(m: &Mat4, tol: f64) -> Sector {
        if Sector::Reduced6.contains(m, tol) {
            Sector::Reduced6
        } else if Sector::X8.contains(m, tol) {
            Sector::X8
        } else {
            Sector::Full
        }
    }

    /// The part of this sector outside [`Sector::Reduced6`], if any.
    pub fn outside_reduced6(self) -> Option<Sector> {
        match self {
            Sector::Full => Some(Sector::Rest10),
            Sector::X8 => Some(Sector::X8Rest),
            _ => None,
        }
    }

    /// Whether `m` has support only inside this sector (entries outside
    /// bounded by `tol`).
    pub fn contains(self, m: &Mat4, tol: f64) -> bool {
        self.complement().iter().all(|&k| m[(k / 4, k % 4)].norm() <= tol)
    }
}

fn qubit_lowering() -> nalgebra::Matrix2<crate::C64> {
    // Index 0 is the excited level: sigma_- = |g><e|.
    let mut s = nalgebra::Matrix2::zeros();
    s[(1, 0)] = ONE;
    s
}

fn kron2(a: &nalgebra::Matrix2<crate::C64>, b: &nalgebra::Matrix2<crate::C64>) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Lowering operator of qubit `k` (0 or 1).
pub fn sigma_minus(k: usize) -> Mat4 {
    let id = nalgebra::Matrix2::identity();
    match k {
        0 => kron2(&qubit_lowering(), &id),
        1 => kron2(&id, &qubit_lowering()),
        _ => panic!("qubit index must be 0 or 1"),
    }
}

pub fn sigma_plus(k: usize) -> Mat4 {
    sigma_minus(k).adjoint()
}

/// Bare Hamiltonian `epsilon (n_1 + n_2)`.
pub fn bare_hamiltonian(epsilon: f64) -> Mat4 {
    (sigma_plus(0) * sigma_minus(0) + sigma_plus(1) * sigma_minus(1)) * re(epsilon)
}

/// Exchange coupling `g (s+_1 s-_2 + s-_1 s+_2)`.
pub fn interaction_hamiltonian(g: f64) -> Mat4 {
    (sigma_plus(0) * sigma_minus(1) + sigma_minus(0) * sigma_plus(1)) * re(g)
}

pub fn hamiltonian(epsilon: f64, g: f64) -> Mat4 {
    bare_hamiltonian(epsilon) + interaction_hamiltonian(g)
}

/// Number of excitations of each basis state.
pub const EXCITATIONS: [i32; 4] = [2, 1, 1, 0];

/// Basis projector `|k><k|`.
pub fn projector(k: usize) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(k, k)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowering_maps_excited_to_ground() {
        // |10> (index 1) lowered on qubit 1 gives |00> (index 3).
        let s = sigma_minus(0);
        assert_eq!(s[(3, 1)], ONE);
        assert_eq!(s[(2, 0)], ONE);
        let s2 = sigma_minus(1);
        assert_eq!(s2[(3, 2)], ONE);
        assert_eq!(s2[(1, 0)], ONE);
    }

    #[test]
    fn hamiltonian_spectrum() {
        let h = hamiltonian(1.0, 0.1);
        assert_eq!(h[(0, 0)], re(2.0));
        assert_eq!(h[(1, 2)], re(0.1));
        assert_eq!(h[(3, 3)], re(0.0));
        for k in 0..4 {
            assert_eq!(h[(k, k)].re, EXCITATIONS[k] as f64);
        }
    }

    #[test]
    fn sector_complements() {
        assert_eq!(Sector::Reduced6.complement().len(), 10);
        assert_eq!(Sector::X8.complement().len(), 8);
        assert!(Sector::Full.complement().is_empty());
    }
}
