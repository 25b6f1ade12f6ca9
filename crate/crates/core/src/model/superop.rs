//! Generic Lindblad superoperator in the row-major vectorization.
//!
//! `vec(A X B) = (A kron B^T) vec(X)`, so the commutator and dissipator map to
//! Kronecker products of 4x4 operators.

use crate::linalg::{c, re, CMat, Mat4};

/// Kronecker product of two 4x4 matrices.
pub fn kron4(a: &Mat4, b: &Mat4) -> CMat {
    CMat::from_fn(16, 16, |r, col| a[(r / 4, col / 4)] * b[(r % 4, col % 4)])
}

/// `-i [H, .]`.
pub fn commutator_superop(h: &Mat4) -> CMat {
    let id = Mat4::identity();
    (kron4(h, &id) - kron4(&id, &h.transpose())) * c(0.0, -1.0)
}

/// `D[A] X = A X A^dagger - {A^dagger A, X} / 2`.
pub fn dissipator_superop(a: &Mat4) -> CMat {
    let id = Mat4::identity();
    let ada = a.adjoint() * a;
    kron4(a, &a.conjugate()) - (kron4(&ada, &id) + kron4(&id, &ada.transpose())) * re(0.5)
}

/// `-i [H, .] + sum_k rate_k D[A_k]`.
pub fn lindblad_superop(h: &Mat4, jumps: &[(f64, Mat4)]) -> CMat {
    let mut l = commutator_superop(h);
    for (rate, a) in jumps {
        if *rate != 0.0 {
            l += dissipator_superop(a) * re(*rate);
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unvectorize, vectorize};
    use crate::model::basis::{hamiltonian, sigma_minus};

    #[test]
    fn superop_matches_direct_action() {
        let h = hamiltonian(1.3, 0.2);
        let a = sigma_minus(0) + sigma_minus(1) * c(0.0, 0.5);
        let x = Mat4::from_fn(|i, j| c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
        let l = lindblad_superop(&h, &[(0.7, a)]);
        let lx = unvectorize(&(&l * vectorize(&x)));
        let ad = a.adjoint();
        let direct = (h * x - x * h) * c(0.0, -1.0) + (a * x * ad - (ad * a * x + x * ad * a) * re(0.5)) * re(0.7);
        assert!((lx - direct).norm() < 1e-14);
    }
}
