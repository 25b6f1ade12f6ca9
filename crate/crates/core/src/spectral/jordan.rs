//! Jordan chain of the reduced Liouvillian at the third-order exceptional
//! point `eta = 0`, and the generalized eigenbasis built from it.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_part, hermitian_with_fixed_sign, hs_inner, inverse, re, smallest_right_singular_vectors, sorted_svd,
    CMat, CVec, Mat4, C64,
};
use crate::model::basis::Sector;
use crate::model::liouvillian::{build_local_liouvillian, build_reduced_liouvillian, Liouvillian};
use crate::model::params::{derived_rates, MachineParams};
use crate::spectral::analytic::eta_switch;
use crate::spectral::eigen::{decompose, fix_phase, JordanBlock, ModalBasis};

/// Residual norms of the chain relations, all absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainResiduals {
    /// `|(L - lambda) rho_4|`.
    pub eigen: f64,
    /// `|(L - lambda) rho' - alpha rho_4|`.
    pub first: f64,
    /// `|(L - lambda) rho'' - beta rho'|`.
    pub second: f64,
    /// `|(L - lambda)^3 rho''|`.
    pub nilpotency: f64,
    /// Frobenius norm of the reduced Liouvillian.
    pub liouvillian_norm: f64,
}

/// Generalized eigenbasis of the reduced Liouvillian at `eta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanBlockData {
    pub params: MachineParams,
    /// `-Gamma / 2`.
    pub lambda_bar: f64,
    pub steady: Mat4,
    /// Eigenmatrix of `-Gamma`.
    pub rho2: Mat4,
    /// The `-Gamma/2` eigenmatrix that does not take part in the coalescence.
    pub rho3: Mat4,
    pub rho4: Mat4,
    pub rho_prime: Mat4,
    pub rho_double_prime: Mat4,
    pub sigma4: Mat4,
    pub sigma_prime: Mat4,
    pub sigma_double_prime: Mat4,
    pub alpha: C64,
    pub beta: C64,
    pub geometric_multiplicity: usize,
    pub algebraic_multiplicity: usize,
    pub residuals: ChainResiduals,
    /// `[rho_ss, rho_2, rho_3, rho_4, rho', rho'']` with its dual basis.
    pub basis: ModalBasis,
}

fn herm_unit_sector(l: &Liouvillian, v: &CVec) -> Mat4 {
    hermitian_with_fixed_sign(&l.from_sector(v))
}

/// Construct the chain `{rho_4, rho', rho''}` with unit HS norms, the
/// coefficients `alpha`, `beta` (real positive) and the dual left chain.
pub fn jordan_chain(params: &MachineParams) -> Result<JordanBlockData> {
    let rates = derived_rates(params)?;
    let threshold = eta_switch(&rates);
    if rates.eta.norm() >= threshold || params.g == 0.0 {
        return Err(Error::NotAnEp { eta_abs: rates.eta.norm(), threshold });
    }
    let l = build_reduced_liouvillian(params, 6)?;
    let n = 6;
    let gamma = rates.gamma_sum;
    let lambda_bar = -gamma / 2.0;
    let nmat = &l.matrix - CMat::identity(n, n) * re(lambda_bar);
    let ns = &nmat / re(gamma);

    // Generalized eigenspace of lambda_bar: kernel of N^3 (dimension 4).
    let ns3 = &ns * &ns * &ns;
    let v = smallest_right_singular_vectors(&ns3, 4);
    let a = v.adjoint() * &ns * &v;
    let a2 = &a * &a;
    let (_, top) = sorted_svd(&a2);
    let u = top.column(0).into_owned();
    let rho_dd = herm_unit_sector(&l, &(&v * u));

    let x = &nmat * l.to_sector(&rho_dd);
    let beta = x.norm();
    let rho_p = hermitian_part(&l.from_sector(&(&x / re(beta))));
    let y = &nmat * l.to_sector(&rho_p);
    let alpha = y.norm();
    let rho4 = hermitian_part(&l.from_sector(&(&y / re(alpha))));

    // rho_3: the kernel element orthogonal to rho_4.
    let kernel = smallest_right_singular_vectors(&nmat, 2);
    let mut rho3 = Mat4::zeros();
    let mut best = 0.0;
    for col in kernel.column_iter() {
        for cand in [hermitian_part(&l.from_sector(&col.into_owned())), {
            let m = l.from_sector(&col.into_owned());
            (m - m.adjoint()) * C64::new(0.0, -0.5)
        }] {
            let r = cand - rho4 * re(hs_inner(&rho4, &cand).re);
            if r.norm() > best {
                best = r.norm();
                rho3 = r;
            }
        }
    }
    let rho3 = hermitian_with_fixed_sign(&rho3);

    let ss_vec = smallest_right_singular_vectors(&l.matrix, 1).column(0).into_owned();
    let ss = l.from_sector(&ss_vec);
    let steady = hermitian_part(&(ss / ss.trace()));
    let shifted = &l.matrix + CMat::identity(n, n) * re(gamma);
    let rho2 = herm_unit_sector(&l, &smallest_right_singular_vectors(&shifted, 1).column(0).into_owned());

    let right = vec![steady, rho2, rho3, rho4, rho_p, rho_dd];
    let rmat = CMat::from_fn(n, n, |r, c| l.to_sector(&right[c])[r]);
    let inv = inverse(&rmat)?;
    let left: Vec<Mat4> =
        (0..n).map(|i| l.from_sector(&CVec::from_iterator(n, (0..n).map(|c| inv[(i, c)].conj())))).collect();

    let res = |m: &Mat4| &nmat * l.to_sector(m);
    let residuals = ChainResiduals {
        eigen: res(&rho4).norm(),
        first: (res(&rho_p) - l.to_sector(&rho4) * re(alpha)).norm(),
        second: (res(&rho_dd) - l.to_sector(&rho_p) * re(beta)).norm(),
        nilpotency: (&nmat * &nmat * &nmat * l.to_sector(&rho_dd)).norm(),
        liouvillian_norm: l.matrix.norm(),
    };

    let (sv, _) = sorted_svd(&ns);
    let geometric_multiplicity = sv.iter().filter(|s| **s < 1e-8).count();
    let ns6 = &ns3 * &ns3;
    let (sv6, _) = sorted_svd(&ns6);
    let algebraic_multiplicity = sv6.iter().filter(|s| **s < 1e-10).count();

    let lb = re(lambda_bar);
    let basis = ModalBasis {
        sector: Sector::Reduced6,
        eigenvalues: vec![re(0.0), re(-gamma), lb, lb, lb, lb],
        right: right.clone(),
        left: left.clone(),
        blocks: vec![
            JordanBlock { start: 0, eigenvalue: re(0.0), couplings: vec![] },
            JordanBlock { start: 1, eigenvalue: re(-gamma), couplings: vec![] },
            JordanBlock { start: 2, eigenvalue: lb, couplings: vec![] },
            JordanBlock { start: 3, eigenvalue: lb, couplings: vec![re(alpha), re(beta)] },
        ],
        steady_index: Some(0),
    };
    Ok(JordanBlockData {
        params: *params,
        lambda_bar,
        steady,
        rho2,
        rho3,
        rho4,
        rho_prime: rho_p,
        rho_double_prime: rho_dd,
        sigma4: left[3],
        sigma_prime: left[4],
        sigma_double_prime: left[5],
        alpha: re(alpha),
        beta: re(beta),
        geometric_multiplicity,
        algebraic_multiplicity,
        residuals,
        basis,
    })
}

/// Generalized eigenbasis at `eta = 0` on `sector` (six-entry, X-state or
/// full): the Jordan basis of the reduced block plus the numeric eigenbasis
/// of the remaining coherences.
pub fn ep_modal_basis(jordan: &JordanBlockData, sector: Sector) -> Result<ModalBasis> {
    let rest_sector = match sector {
        Sector::Reduced6 => return Ok(jordan.basis.clone()),
        Sector::X8 | Sector::Full => sector.outside_reduced6().expect("has a complement"),
        other => {
            return Err(Error::SubspaceViolation(format!("{other:?} has no Jordan block")));
        }
    };
    let full = build_local_liouvillian(&jordan.params)?;
    let rest = full.restrict(rest_sector)?;
    let data = decompose(&rest)?;
    if data.defective {
        return Err(Error::Defective(Box::new(data.diagnostics)));
    }
    let mut basis = jordan.basis.clone();
    let offset = basis.right.len();
    basis.sector = sector;
    basis.eigenvalues.extend_from_slice(&data.basis.eigenvalues);
    basis.right.extend_from_slice(&data.basis.right);
    basis.left.extend_from_slice(&data.basis.left);
    for b in &data.basis.blocks {
        basis.blocks.push(JordanBlock { start: b.start + offset, ..b.clone() });
    }
    Ok(basis)
}

/// Phase-normalized copy, exposed for diagnostics.
pub fn phase_normalized(m: &Mat4) -> Mat4 {
    fix_phase(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermiticity_error;
    use crate::spectral::analytic::eig4_with_eta;

    fn at_ep() -> MachineParams {
        MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, 0.0).unwrap().at_critical_coupling().unwrap()
    }

    #[test]
    fn chain_relations_hold() {
        let j = jordan_chain(&at_ep()).unwrap();
        let tol = 1e-9 * j.residuals.liouvillian_norm;
        assert!(j.residuals.eigen < tol);
        assert!(j.residuals.first < tol);
        assert!(j.residuals.second < tol);
        assert!(j.residuals.nilpotency < 1e-9);
        assert_eq!(j.geometric_multiplicity, 2);
        assert_eq!(j.algebraic_multiplicity, 4);
        for m in [j.rho3, j.rho4, j.rho_prime, j.rho_double_prime] {
            assert!(hermiticity_error(&m) < 1e-12);
            assert!((m.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn left_chain_is_transposed_chain() {
        let j = jordan_chain(&at_ep()).unwrap();
        let l = build_reduced_liouvillian(&j.params, 6).unwrap();
        let n = CMat::identity(6, 6) * re(j.lambda_bar);
        let nmat = &l.matrix - n;
        let row = |s: &Mat4| l.to_sector(s).map(|z| z.conj()).transpose();
        let tol = 1e-9 * j.residuals.liouvillian_norm * 100.0;
        assert!((row(&j.sigma4) * &nmat - row(&j.sigma_prime) * j.alpha).norm() < tol);
        assert!((row(&j.sigma_prime) * &nmat - row(&j.sigma_double_prime) * j.beta).norm() < tol);
        assert!((row(&j.sigma_double_prime) * &nmat).norm() < tol);
        for (i, s) in j.basis.left.iter().enumerate() {
            for (k, r) in j.basis.right.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((hs_inner(s, r) - re(want)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rho4_is_limit_of_closed_form() {
        let p = at_ep();
        let j = jordan_chain(&p).unwrap();
        let lim = eig4_with_eta(&p, re(1e-8)).unwrap();
        let d = (lim - j.rho4).norm().min((lim + j.rho4).norm());
        assert!(d < 1e-8, "{d:e}");
    }

    #[test]
    fn rejects_non_ep() {
        let p = at_ep().with_g(0.005);
        assert!(matches!(jordan_chain(&p), Err(Error::NotAnEp { .. })));
    }

    #[test]
    fn full_sector_basis_is_biorthonormal() {
        let j = jordan_chain(&at_ep()).unwrap();
        let b = ep_modal_basis(&j, Sector::Full).unwrap();
        assert_eq!(b.dim(), 16);
        for (i, s) in b.left.iter().enumerate() {
            for (k, r) in b.right.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((hs_inner(s, r) - re(want)).norm() < 1e-9);
            }
        }
    }
}
