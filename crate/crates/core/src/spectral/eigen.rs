//! Numeric eigendecomposition with a bi-orthonormal eigenmatrix basis.

use nalgebra::Schur;

use crate::error::{DefectDiagnostics, Error, Result};
use crate::linalg::{
    column_scaled_condition, fix_sign, hermitian_part, hs_inner, inverse, re, smallest_right_singular_vectors,
    sorted_svd, CMat, CVec, Mat4, C64, ONE,
};
use crate::model::basis::Sector;
use crate::model::liouvillian::{Liouvillian, LiouvillianKind};
use crate::model::params::{derived_rates, MachineParams};
use crate::spectral::analytic::eta_switch;
use crate::spectral::matching::sorted_order;

/// Condition number of the unit-column eigenvector matrix above which the
/// decomposition is declared defective.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Relative distance below which numeric eigenvalues form one cluster.
const CLUSTER_TOL: f64 = 1e-9;
/// Relative singular value above which a cluster is short of eigenvectors.
const RANK_TOL: f64 = 1e-7;

/// A Jordan block inside a [`ModalBasis`]: the basis vectors
/// `start .. start + couplings.len() + 1` satisfy
/// `(L - lambda) r[start] = 0` and
/// `(L - lambda) r[start + k + 1] = couplings[k] r[start + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanBlock {
    pub start: usize,
    pub eigenvalue: C64,
    pub couplings: Vec<C64>,
}

impl JordanBlock {
    pub fn size(&self) -> usize {
        self.couplings.len() + 1
    }
}

/// A complete (generalized) eigenbasis of a Liouvillian on a sector, with the
/// bi-orthonormal dual basis: `Tr(left[i]^dagger right[j]) = delta_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalBasis {
    pub sector: Sector,
    /// One entry per basis vector; equal within a Jordan block.
    pub eigenvalues: Vec<C64>,
    pub right: Vec<Mat4>,
    pub left: Vec<Mat4>,
    pub blocks: Vec<JordanBlock>,
    /// Position of the steady state, when the sector carries one.
    pub steady_index: Option<usize>,
}

impl ModalBasis {
    pub fn dim(&self) -> usize {
        self.right.len()
    }

    /// Expansion coefficients `c_i = Tr(sigma_i^dagger rho)`.
    pub fn coefficients(&self, rho: &Mat4) -> Result<Vec<C64>> {
        let scale = rho.norm().max(1e-300);
        if !self.sector.contains(rho, 1e-14 * scale) {
            return Err(Error::SubspaceViolation(format!("operator has weight outside the {:?} sector", self.sector)));
        }
        Ok(self.left.iter().map(|s| hs_inner(s, rho)).collect())
    }

    /// `sum_i c_i right_i`.
    pub fn synthesize(&self, coeffs: &[C64]) -> Mat4 {
        self.right.iter().zip(coeffs).fold(Mat4::zeros(), |acc, (r, c)| acc + r * *c)
    }

    /// Coefficients at time `t` under `exp(L t)`.
    pub fn evolve_coefficients(&self, coeffs: &[C64], t: f64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); coeffs.len()];
        for b in &self.blocks {
            let e = (b.eigenvalue * t).exp();
            let n = b.size();
            for k in 0..n {
                // Row k of exp(K t) acting on the block coefficients.
                let mut acc = coeffs[b.start + k];
                let mut prod = ONE;
                let mut fact = 1.0;
                for m in 1..(n - k) {
                    prod *= b.couplings[k + m - 1];
                    fact *= m as f64;
                    acc += prod * t.powi(m as i32) / fact * coeffs[b.start + k + m];
                }
                out[b.start + k] = acc * e;
            }
        }
        out
    }

    /// `exp(L t) rho0 - rho_ss`, evaluated without forming the steady part
    /// so that tiny deviations at long times keep full relative accuracy.
    pub fn deviation_at(&self, coeffs: &[C64], t: f64) -> Mat4 {
        let mut c = self.evolve_coefficients(coeffs, t);
        if let Some(k) = self.steady_index {
            c[k] = C64::new(0.0, 0.0);
        }
        self.synthesize(&c)
    }

    pub fn steady_state(&self) -> Option<Mat4> {
        self.steady_index.map(|k| self.right[k])
    }
}

/// Eigendecomposition result of [`numeric_spectral_data`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub kind: LiouvillianKind,
    pub params: MachineParams,
    pub basis: ModalBasis,
    pub defective: bool,
    pub diagnostics: DefectDiagnostics,
}

impl SpectralData {
    pub fn eigenvalues(&self) -> &[C64] {
        &self.basis.eigenvalues
    }

    pub fn right(&self) -> &[Mat4] {
        &self.basis.right
    }

    pub fn left(&self) -> &[Mat4] {
        &self.basis.left
    }
}

/// Eigenvalues from the complex Schur form, sorted by descending real part
/// then ascending imaginary part.
pub fn numeric_eigenvalues(m: &CMat) -> Vec<C64> {
    let (_, t) = Schur::new(m.clone()).unpack();
    let vals: Vec<C64> = (0..t.nrows()).map(|k| t[(k, k)]).collect();
    let order = sorted_order(&vals);
    order.into_iter().map(|k| vals[k]).collect()
}

/// Eigenvalues and unit eigenvectors (columns) from the Schur form by
/// back-substitution. Nearly equal diagonal entries are regularized, so
/// eigenvectors of a defective cluster come out nearly parallel instead of
/// undefined.
pub fn schur_eigenvectors(m: &CMat) -> (Vec<C64>, CMat) {
    let n = m.nrows();
    let (q, t) = Schur::new(m.clone()).unpack();
    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let smin = f64::EPSILON * tnorm;
    let mut vecs = CMat::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        let lam = t[(k, k)];
        vals.push(lam);
        let mut y = CVec::zeros(n);
        y[k] = ONE;
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[j];
            }
            let mut d = t[(i, i)] - lam;
            if d.norm() < smin {
                d = re(smin);
            }
            y[i] = -s / d;
        }
        let x = &q * y;
        let nx = x.norm();
        vecs.set_column(k, &(x / re(nx)));
    }
    (vals, vecs)
}

/// Rotate the global phase so the first dominant entry (row-major) is real
/// positive, after normalizing to unit HS norm.
pub fn fix_phase(m: &Mat4) -> Mat4 {
    let n = m.norm();
    if n == 0.0 {
        return *m;
    }
    let m = m / re(n);
    let maxabs = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in 0..4 {
            let z = m[(i, j)];
            if z.norm() > 0.5 * maxabs {
                return m * (z.conj() / re(z.norm()));
            }
        }
    }
    m
}

/// Orthonormal Hermitian basis of the complex span of `vs`, assuming the
/// span is closed under the adjoint.
fn hermitian_basis(vs: &[Mat4]) -> Vec<Mat4> {
    let mut cands: Vec<Mat4> = Vec::with_capacity(2 * vs.len());
    for v in vs {
        cands.push(hermitian_part(v));
        cands.push((v - v.adjoint()) * C64::new(0.0, -0.5));
    }
    let mut out: Vec<Mat4> = Vec::with_capacity(vs.len());
    while out.len() < vs.len() {
        // Pivoted Gram-Schmidt: take the candidate with the largest residual.
        let mut best: Option<(f64, Mat4)> = None;
        for c in &cands {
            let mut r = *c;
            for b in &out {
                r -= b * re(hs_inner(b, &r).re);
            }
            let n = r.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("candidates are non-empty");
        if n == 0.0 {
            break;
        }
        out.push(fix_sign(&(r / re(n))));
    }
    out
}

struct Cluster {
    centre: C64,
    members: usize,
}

fn clusters(vals: &[C64], tol: f64) -> Vec<Cluster> {
    // Single-linkage clustering.
    let n = vals.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] - vals[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(v),
            None => groups.push((r, vec![v])),
        }
    }
    groups
        .into_iter()
        .map(|(_, g)| Cluster { centre: g.iter().sum::<C64>() / re(g.len() as f64), members: g.len() })
        .collect()
}

/// Full eigendecomposition, returning the data with a `defective` flag
/// rather than an error.
pub fn decompose(l: &Liouvillian) -> Result<SpectralData> {
    let a = &l.matrix;
    let n = l.dim();
    let scale = l.scale().max(f64::MIN_POSITIVE);
    let tol = CLUSTER_TOL * scale;
    let vals = numeric_eigenvalues(a);
    let cl = clusters(&vals, tol);

    let mut eigenvalues: Vec<C64> = Vec::with_capacity(n);
    let mut right: Vec<Mat4> = Vec::with_capacity(n);
    let mut rank_deficient = false;
    let mut done = vec![false; cl.len()];

    for i in 0..cl.len() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let c = &cl[i];
        let is_real = c.centre.im.abs() <= tol;
        let centre = if is_real { re(c.centre.re) } else { c.centre };
        let shifted = a - CMat::identity(n, n) * centre;
        let (svals, _) = sorted_svd(&shifted);
        if svals[n - c.members] > RANK_TOL * scale {
            rank_deficient = true;
        }
        let basis = smallest_right_singular_vectors(&shifted, c.members);
        let vs: Vec<Mat4> = basis.column_iter().map(|col| l.from_sector(&col.into_owned())).collect();
        if is_real {
            let hb = hermitian_basis(&vs);
            if hb.len() < vs.len() {
                rank_deficient = true;
            }
            for h in hb {
                eigenvalues.push(centre);
                right.push(h);
            }
            continue;
        }
        let phased: Vec<Mat4> = vs.iter().map(fix_phase).collect();
        for v in &phased {
            eigenvalues.push(centre);
            right.push(*v);
        }
        // Conjugate partner: same multiplicity, eigenmatrices are adjoints.
        let partner = (0..cl.len())
            .filter(|&j| !done[j] && cl[j].members == c.members)
            .min_by(|&x, &y| (cl[x].centre - centre.conj()).norm().total_cmp(&(cl[y].centre - centre.conj()).norm()));
        if let Some(j) = partner {
            if (cl[j].centre - centre.conj()).norm() <= 1e3 * tol {
                done[j] = true;
                for v in &phased {
                    eigenvalues.push(centre.conj());
                    right.push(v.adjoint());
                }
            }
        }
    }
    if right.len() != n {
        return Err(Error::Numeric(format!("eigenbasis has {} of {n} vectors", right.len())));
    }

    // Steady state: eigenvalue of smallest modulus in sectors carrying the
    // diagonal.
    let carries_diagonal = l.indices().contains(&0);
    let mut steady_index = None;
    if carries_diagonal {
        let k = (0..n)
            .min_by(|&x, &y| eigenvalues[x].norm().total_cmp(&eigenvalues[y].norm()))
            .expect("non-empty spectrum");
        if eigenvalues[k].norm() > 1e-10 * scale {
            return Err(Error::Numeric(format!("no zero eigenvalue (smallest modulus {:.3e})", eigenvalues[k].norm())));
        }
        let tr = right[k].trace();
        if tr.norm() < 1e-8 {
            return Err(Error::Numeric("steady-state eigenmatrix has zero trace".into()));
        }
        right[k] = hermitian_part(&(right[k] / tr));
        eigenvalues[k] = re(0.0);
        steady_index = Some(k);
    }

    // Deterministic order.
    let order = sorted_order(&eigenvalues);
    let eigenvalues: Vec<C64> = order.iter().map(|&k| eigenvalues[k]).collect();
    let right: Vec<Mat4> = order.iter().map(|&k| right[k]).collect();
    let steady_index = steady_index.map(|s| order.iter().position(|&k| k == s).unwrap());

    let rmat = CMat::from_fn(n, n, |r, c| {
        let k = l.indices()[r];
        right[c][(k / 4, k % 4)]
    });
    let condition = column_scaled_condition(&rmat);
    let min_gap = min_pairwise_gap(&eigenvalues, tol);
    let eta_abs = match (l.kind, l.sector.indices().contains(&6)) {
        (LiouvillianKind::GlobalFull, _) | (_, false) => None,
        _ => Some(derived_rates(&l.params)?.eta.norm()),
    };
    let below_switch = match eta_abs {
        Some(e) => e < eta_switch(&derived_rates(&l.params)?) && l.params.g > 0.0,
        None => false,
    };
    let defective = rank_deficient || below_switch || condition.is_nan() || condition > CONDITION_LIMIT;
    let left = match inverse(&rmat) {
        Ok(inv) => (0..n)
            .map(|i| {
                let row = CVec::from_iterator(n, (0..n).map(|c| inv[(i, c)].conj()));
                l.from_sector(&row)
            })
            .collect(),
        Err(_) => vec![Mat4::zeros(); n],
    };
    let blocks = (0..n).map(|k| JordanBlock { start: k, eigenvalue: eigenvalues[k], couplings: Vec::new() }).collect();
    Ok(SpectralData {
        kind: l.kind,
        params: l.params,
        basis: ModalBasis { sector: l.sector, eigenvalues, right, left, blocks, steady_index },
        defective,
        diagnostics: DefectDiagnostics { condition_number: condition, eta_abs, min_gap },
    })
}

fn min_pairwise_gap(vals: &[C64], tol: f64) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            let d = (vals[i] - vals[j]).norm();
            if d > tol {
                gap = gap.min(d);
            }
        }
    }
    gap
}

/// Bi-orthonormal eigenmatrix basis, or [`Error::Defective`] with
/// diagnostics when the spectrum is defective at working tolerance.
pub fn numeric_spectral_data(l: &Liouvillian) -> Result<SpectralData> {
    let data = decompose(l)?;
    if data.defective {
        return Err(Error::Defective(Box::new(data.diagnostics)));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermiticity_error};
    use crate::model::liouvillian::{build_global_liouvillian, build_local_liouvillian, build_reduced_liouvillian};
    use crate::model::params::Regime;
    use crate::spectral::analytic::{analytic_eigenmatrices_reduced, analytic_spectrum_local};
    use crate::spectral::matching::match_spectra;

    fn fig3(g: f64) -> MachineParams {
        MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, g).unwrap()
    }

    fn gram_error(d: &SpectralData) -> f64 {
        let n = d.basis.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((hs_inner(&d.left()[i], &d.right()[j]) - re(want)).norm());
            }
        }
        worst
    }

    #[test]
    fn full_local_decomposition() {
        let p = fig3(0.005);
        let l = build_local_liouvillian(&p).unwrap();
        let d = numeric_spectral_data(&l).unwrap();
        assert!(!d.defective);
        assert!(gram_error(&d) < 1e-10);
        assert_eq!(d.basis.steady_index, Some(0));
        // sigma_1 is the identity.
        assert!((d.left()[0] - Mat4::identity()).norm() < 1e-10);
        let an = analytic_spectrum_local(&p).unwrap();
        assert!(match_spectra(d.eigenvalues(), &an) < 1e-10);
        for (k, r) in d.right().iter().enumerate() {
            let lam = d.eigenvalues()[k];
            let v = l.to_sector(r);
            assert!((&l.matrix * &v - &v * lam).norm() < 1e-10);
            if lam.im == 0.0 {
                assert!(hermiticity_error(r) < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_eigenmatrices_match_numeric() {
        let p = fig3(0.005);
        let l = build_reduced_liouvillian(&p, 6).unwrap();
        let d = numeric_spectral_data(&l).unwrap();
        let an = analytic_eigenmatrices_reduced(&p).unwrap();
        for k in [4, 5] {
            let lam = an.eigenvalues[k];
            let idx =
                (0..6).min_by(|&a, &b| (d.eigenvalues()[a] - lam).norm().total_cmp(&(d.eigenvalues()[b] - lam).norm()));
            let num = d.right()[idx.unwrap()];
            let dist = (num - an.matrices[k]).norm().min((num + an.matrices[k]).norm());
            assert!(dist < 1e-8, "k={k} dist={dist:e}");
        }
    }

    #[test]
    fn defective_at_critical_coupling() {
        let p = fig3(0.0).at_critical_coupling().unwrap();
        let l = build_reduced_liouvillian(&p, 6).unwrap();
        assert!(matches!(numeric_spectral_data(&l), Err(Error::Defective(_))));
        assert!(decompose(&l).unwrap().defective);
    }

    #[test]
    fn global_decomposition_and_conjugation() {
        let p = fig3(0.05).with_regime(Regime::Global);
        let l = build_global_liouvillian(&p).unwrap();
        let d = numeric_spectral_data(&l).unwrap();
        assert!(gram_error(&d) < 1e-10);
        for (k, lam) in d.eigenvalues().iter().enumerate() {
            if lam.im > 0.0 {
                let j = d.eigenvalues().iter().position(|z| *z == lam.conj()).unwrap();
                assert!((d.right()[j] - d.right()[k].adjoint()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn schur_vectors_are_eigenvectors() {
        let m = CMat::from_fn(5, 5, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0));
        let (vals, vecs) = schur_eigenvectors(&m);
        for (k, val) in vals.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            assert!((&m * &v - &v * *val).norm() < 1e-12);
        }
    }
}
