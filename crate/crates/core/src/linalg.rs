//! Small dense complex linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen, SVD};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Row-major vectorization of a 4x4 operator.
pub fn vectorize(m: &Mat4) -> CVec {
    CVec::from_fn(16, |k, _| m[(k / 4, k % 4)])
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVec) -> Mat4 {
    assert_eq!(v.len(), 16, "expected a 16-vector");
    Mat4::from_fn(|i, j| v[4 * i + j])
}

/// Pick the entries `idx` of a full 16-vector.
pub fn restrict(v: &CVec, idx: &[usize]) -> CVec {
    CVec::from_iterator(idx.len(), idx.iter().map(|&k| v[k]))
}

/// Scatter a sub-vector back into a zero 16-vector.
pub fn embed(v: &CVec, idx: &[usize]) -> CVec {
    let mut out = CVec::zeros(16);
    for (a, &k) in idx.iter().enumerate() {
        out[k] = v[a];
    }
    out
}

/// Hilbert-Schmidt inner product `Tr(a^dagger b)`.
pub fn hs_inner(a: &Mat4, b: &Mat4) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm(a: &Mat4) -> f64 {
    a.norm()
}

pub fn trace(a: &Mat4) -> C64 {
    a.trace()
}

pub fn hermitian_part(a: &Mat4) -> Mat4 {
    (a + a.adjoint()) * re(0.5)
}

/// Largest entry of `|a - a^dagger|`.
pub fn hermiticity_error(a: &Mat4) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues (ascending) of the Hermitian part of `a`.
pub fn hermitian_eigenvalues(a: &Mat4) -> [f64; 4] {
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut ev = [0.0; 4];
    for (k, v) in eig.eigenvalues.iter().enumerate() {
        ev[k] = *v;
    }
    ev.sort_by(f64::total_cmp);
    ev
}

/// Trace norm of the Hermitian part of `a`.
pub fn trace_norm(a: &Mat4) -> f64 {
    hermitian_eigenvalues(a).iter().map(|x| x.abs()).sum()
}

/// Principal square root of a positive semi-definite Hermitian matrix,
/// with tiny negative eigenvalues clipped to zero.
pub fn psd_sqrt(a: &Mat4) -> Mat4 {
    let eig = SymmetricEigen::new(hermitian_part(a));
    let d = Mat4::from_diagonal(&eig.eigenvalues.map(|x| re(x.max(0.0).sqrt())));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Singular value decomposition with singular values sorted descending.
/// Returns `(singular values, right singular vectors as columns)`.
pub fn sorted_svd(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.ncols();
    let svd = SVD::new(a.clone(), false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let mut vals = Vec::with_capacity(order.len());
    let mut v = CMat::zeros(n, order.len());
    for (col, &k) in order.iter().enumerate() {
        vals.push(svd.singular_values[k]);
        for r in 0..n {
            v[(r, col)] = vt[(k, r)].conj();
        }
    }
    (vals, v)
}

/// Orthonormal basis (columns) of the `k` right singular vectors with the
/// smallest singular values.
pub fn smallest_right_singular_vectors(a: &CMat, k: usize) -> CMat {
    let (_, v) = sorted_svd(a);
    let n = v.ncols();
    v.columns(n - k, k).into_owned()
}

/// 2-norm condition number of `m` after scaling its columns to unit length.
pub fn column_scaled_condition(m: &CMat) -> f64 {
    let mut s = m.clone();
    for mut col in s.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= re(n);
        }
    }
    let (vals, _) = sorted_svd(&s);
    let smin = *vals.last().unwrap_or(&0.0);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        vals[0] / smin
    }
}

/// Fix the free complex phase of an operator that is Hermitian up to a global
/// phase: take whichever of the Hermitian and anti-Hermitian parts is larger,
/// normalize it in Hilbert-Schmidt norm and fix the overall sign so that the
/// first dominant entry (row-major) has positive real part, or positive
/// imaginary part if purely imaginary.
pub fn hermitian_with_fixed_sign(x: &Mat4) -> Mat4 {
    let h1 = hermitian_part(x);
    let h2 = (x - x.adjoint()) * c(0.0, -0.5);
    let h = if h1.norm() >= h2.norm() { h1 } else { h2 };
    let n = h.norm();
    if n == 0.0 {
        return h;
    }
    let h = h / re(n);
    fix_sign(&h)
}

/// Normalize a vector-like operator to unit HS norm and apply the sign rule of
/// [`hermitian_with_fixed_sign`] without Hermitizing.
pub fn fix_sign(h: &Mat4) -> Mat4 {
    let maxabs = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in 0..4 {
            let z = h[(i, j)];
            if z.norm() > 0.5 * maxabs {
                let flip = if z.re.abs() > 1e-12 * maxabs { z.re < 0.0 } else { z.im < 0.0 };
                return if flip { -h } else { *h };
            }
        }
    }
    *h
}

/// Complex matrix inverse, or a numeric error when singular.
pub fn inverse(m: &CMat) -> crate::Result<CMat> {
    m.clone().try_inverse().ok_or_else(|| crate::Error::Numeric("singular matrix in inverse".into()))
}

/// Matrix exponential of `a * t` by scaling and squaring with a Taylor core.
/// Only used by tests and diagnostics on matrices of size <= 16.
pub fn expm(a: &CMat, t: f64) -> CMat {
    let n = a.nrows();
    let at = a * re(t);
    let norm = at.iter().map(|z| z.norm()).sum::<f64>();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = &at / re(2f64.powi(s));
    let mut term = CMat::identity(n, n);
    let mut acc = CMat::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled / re(k as f64);
        acc += &term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

/// Principal square root of a complex number (branch cut on the negative
/// real axis, returning non-negative imaginary part there).
pub fn csqrt(z: C64) -> C64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            re(z.re.sqrt())
        } else {
            c(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectorization_round_trip() {
        let m = Mat4::from_fn(|i, j| c(i as f64, j as f64));
        let v = vectorize(&m);
        assert_eq!(v[4 * 2 + 3], c(2.0, 3.0));
        assert_eq!(unvectorize(&v), m);
    }

    #[test]
    fn trace_norm_of_projector_difference() {
        let mut a = Mat4::zeros();
        a[(0, 0)] = ONE;
        a[(3, 3)] = -ONE;
        assert!((trace_norm(&a) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn csqrt_principal_branch() {
        assert_eq!(csqrt(re(-4.0)), c(0.0, 2.0));
        assert_eq!(csqrt(re(9.0)), re(3.0));
    }

    #[test]
    fn expm_of_diagonal() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![re(-1.0), c(0.0, 2.0)]));
        let e = expm(&a, 1.5);
        assert!((e[(0, 0)] - re((-1.5f64).exp())).norm() < 1e-13);
        assert!((e[(1, 1)] - c(0.0, 3.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn sorted_svd_descending() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![re(1.0), re(5.0), re(3.0)]));
        let (s, v) = sorted_svd(&a);
        assert_eq!(s, vec![5.0, 3.0, 1.0]);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }
}
