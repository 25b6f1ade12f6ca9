//! The local (full and reduced) and global Liouvillian matrices.

use crate::error::{Error, Result};
use crate::linalg::{c, re, CMat, CVec, Mat4, C64, ONE, ZERO};
use crate::model::basis::{hamiltonian, sigma_minus, sigma_plus, Sector, DIAGONAL};
use crate::model::params::{derived_rates, global_rates, MachineParams, Regime};
use crate::model::superop::lindblad_superop;

/// Which construction produced a [`Liouvillian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiouvillianKind {
    LocalFull,
    LocalReducedX8,
    LocalReduced6,
    GlobalFull,
}

impl LiouvillianKind {
    pub fn sector(self) -> Sector {
        match self {
            LiouvillianKind::LocalFull | LiouvillianKind::GlobalFull => Sector::Full,
            LiouvillianKind::LocalReducedX8 => Sector::X8,
            LiouvillianKind::LocalReduced6 => Sector::Reduced6,
        }
    }
}

/// A Liouvillian acting on the vectorized state restricted to a sector.
///
/// Component `a` of the sector vector is entry `sector.indices()[a]` of the
/// row-major 16-vector of the density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub kind: LiouvillianKind,
    pub sector: Sector,
    pub matrix: CMat,
    /// Parameters the matrix was built from.
    pub params: MachineParams,
}

impl Liouvillian {
    fn new(kind: LiouvillianKind, matrix: CMat, params: &MachineParams) -> Self {
        Self { kind, sector: kind.sector(), matrix, params: *params }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Principal block on an invariant sub-sector of the current sector.
    pub fn restrict(&self, sector: Sector) -> Result<Liouvillian> {
        let own = self.indices();
        let pos: Option<Vec<usize>> = sector.indices().iter().map(|k| own.iter().position(|x| x == k)).collect();
        let pos = pos.ok_or_else(|| Error::SubspaceViolation(format!("{sector:?} is not inside {:?}", self.sector)))?;
        let n = pos.len();
        // The block must not leak into the rest of the current sector.
        for &pa in &pos {
            for r in 0..self.dim() {
                if !pos.contains(&r) && (self.matrix[(r, pa)].norm() > 0.0 || self.matrix[(pa, r)].norm() > 0.0) {
                    return Err(Error::SubspaceViolation(format!("{sector:?} is not invariant")));
                }
            }
        }
        let matrix = CMat::from_fn(n, n, |a, b| self.matrix[(pos[a], pos[b])]);
        Ok(Liouvillian { kind: self.kind, sector, matrix, params: self.params })
    }

    pub fn indices(&self) -> &'static [usize] {
        self.sector().indices()
    }

    /// The vectorized identity restricted to the sector.
    pub fn trace_functional(&self) -> CVec {
        CVec::from_iterator(self.dim(), self.indices().iter().map(|k| if DIAGONAL.contains(k) { ONE } else { ZERO }))
    }

    /// Norm of `1^T L`, zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        (self.trace_functional().transpose() * &self.matrix).norm()
    }

    /// Largest absolute entry, a cheap scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sector vector of a 4x4 operator.
    pub fn to_sector(&self, m: &Mat4) -> CVec {
        CVec::from_iterator(self.dim(), self.indices().iter().map(|&k| m[(k / 4, k % 4)]))
    }

    /// 4x4 operator from a sector vector (entries outside the sector are zero).
    pub fn from_sector(&self, v: &CVec) -> Mat4 {
        let mut m = Mat4::zeros();
        for (a, &k) in self.indices().iter().enumerate() {
            m[(k / 4, k % 4)] = v[a];
        }
        m
    }
}

fn require_local(params: &MachineParams) -> Result<()> {
    params.validate()?;
    if params.regime != Regime::Local {
        return Err(Error::WrongBuilder("local builder called with global-regime parameters".into()));
    }
    Ok(())
}

/// The explicit 16x16 local Liouvillian.
pub fn build_local_liouvillian(params: &MachineParams) -> Result<Liouvillian> {
    require_local(params)?;
    let r = derived_rates(params)?;
    let (ap, bp) = (re(r.gamma_plus[0]), re(r.gamma_plus[1]));
    let (am, bm) = (re(r.gamma_minus[0]), re(r.gamma_minus[1]));
    let (t1, t2) = (re(r.total[0]), re(r.total[1]));
    let half = re(0.5);
    let gam = re(r.gamma_sum);
    let ie = c(0.0, params.epsilon);
    let ig = c(0.0, params.g);

    // One-based (row, column, value) triples, transcribed row by row.
    let entries = [
        (1, 1, -am - bm),
        (1, 6, bp),
        (1, 11, ap),
        (2, 2, -ie - am - t2 * half),
        (2, 3, ig),
        (2, 12, ap),
        (3, 2, ig),
        (3, 3, -ie - bm - t1 * half),
        (3, 8, bp),
        (4, 4, -ie * 2.0 - gam * half),
        (5, 5, ie - am - t2 * half),
        (5, 9, -ig),
        (5, 15, ap),
        (6, 1, bm),
        (6, 6, -am - bp),
        (6, 7, ig),
        (6, 10, -ig),
        (6, 16, ap),
        (7, 6, ig),
        (7, 7, -gam * half),
        (7, 11, -ig),
        (8, 3, bm),
        (8, 8, -ie - bp - t1 * half),
        (8, 12, -ig),
        (9, 5, -ig),
        (9, 9, ie - bm - t1 * half),
        (9, 14, bp),
        (10, 6, -ig),
        (10, 10, -gam * half),
        (10, 11, ig),
        (11, 1, am),
        (11, 7, -ig),
        (11, 10, ig),
        (11, 11, -ap - bm),
        (11, 16, bp),
        (12, 2, am),
        (12, 8, -ig),
        (12, 12, -ie - ap - t2 * half),
        (13, 13, ie * 2.0 - gam * half),
        (14, 9, bm),
        (14, 14, ie - bp - t1 * half),
        (14, 15, ig),
        (15, 5, am),
        (15, 14, ig),
        (15, 15, ie - ap - t2 * half),
        (16, 6, am),
        (16, 11, bm),
        (16, 16, -ap - bp),
    ];
    let mut m = CMat::zeros(16, 16);
    for (i, j, v) in entries {
        m[(i - 1, j - 1)] += v;
    }
    Ok(Liouvillian::new(LiouvillianKind::LocalFull, m, params))
}

/// The 6x6 matrix on `(rho_11, rho_22, rho_33, rho_44, rho_23, rho_32)`, or
/// the 8x8 X-state extension with `(rho_14, rho_41)` appended.
pub fn build_reduced_liouvillian(params: &MachineParams, dim: usize) -> Result<Liouvillian> {
    require_local(params)?;
    if dim != 6 && dim != 8 {
        return Err(Error::InvalidDimension(dim));
    }
    let r = derived_rates(params)?;
    let (ap, bp) = (re(r.gamma_plus[0]), re(r.gamma_plus[1]));
    let (am, bm) = (re(r.gamma_minus[0]), re(r.gamma_minus[1]));
    let ig = c(0.0, params.g);
    let hg = re(-r.gamma_sum / 2.0);
    let z = ZERO;
    let rows: [[C64; 6]; 6] = [
        [-am - bm, bp, ap, z, z, z],
        [bm, -am - bp, z, ap, ig, -ig],
        [am, z, -ap - bm, bp, -ig, ig],
        [z, am, bm, -ap - bp, z, z],
        [z, ig, -ig, z, hg, z],
        [z, -ig, ig, z, z, hg],
    ];
    let mut m = CMat::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    let kind = if dim == 8 {
        m[(6, 6)] = c(-r.gamma_sum / 2.0, -2.0 * params.epsilon);
        m[(7, 7)] = c(-r.gamma_sum / 2.0, 2.0 * params.epsilon);
        LiouvillianKind::LocalReducedX8
    } else {
        LiouvillianKind::LocalReduced6
    };
    Ok(Liouvillian::new(kind, m, params))
}

/// Local Liouvillian assembled from the generic Lindblad superoperator.
/// Used as an independent cross-check of the hard-coded matrix.
pub fn local_liouvillian_from_dissipators(params: &MachineParams) -> Result<Liouvillian> {
    params.validate()?;
    let r = derived_rates(params)?;
    let mut jumps = Vec::with_capacity(4);
    for k in 0..2 {
        jumps.push((r.gamma_plus[k], sigma_minus(k).adjoint()));
        jumps.push((r.gamma_minus[k], sigma_minus(k)));
    }
    let matrix = lindblad_superop(&hamiltonian(params.epsilon, params.g), &jumps);
    Ok(Liouvillian::new(LiouvillianKind::LocalFull, matrix, params))
}

/// Eigenbasis of the coupled Hamiltonian: `(|0>, |eps_->, |eps_+>, |2>)`.
pub fn dressed_states() -> [nalgebra::Vector4<C64>; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e = |v: [f64; 4]| nalgebra::Vector4::new(re(v[0]), re(v[1]), re(v[2]), re(v[3]));
    [e([0.0, 0.0, 0.0, 1.0]), e([0.0, s, -s, 0.0]), e([0.0, s, s, 0.0]), e([1.0, 0.0, 0.0, 0.0])]
}

/// Jump operators `(rate, L)` attributed to each bath: bare qubit ladder
/// operators in the local regime, transitions between dressed states in the
/// global regime.
pub fn bath_jump_operators(params: &MachineParams) -> Result<[Vec<(f64, Mat4)>; 2]> {
    params.validate()?;
    match params.regime {
        Regime::Local => {
            let r = derived_rates(params)?;
            Ok([0, 1].map(|k| vec![(r.gamma_plus[k], sigma_plus(k)), (r.gamma_minus[k], sigma_minus(k))]))
        }
        Regime::Global => {
            let rates = global_rates(params)?;
            let [ground, em, ep, doubly] = dressed_states();
            let proj = |v: &nalgebra::Vector4<C64>| -> Mat4 { v * v.adjoint() };
            let (p0, pm, pp, p2) = (proj(&ground), proj(&em), proj(&ep), proj(&doubly));
            Ok([0, 1].map(|j| {
                let s = sigma_minus(j);
                let l_minus = p0 * s * pm + pp * s * p2;
                let l_plus = p0 * s * pp + pm * s * p2;
                vec![
                    (rates.minus.gamma_minus[j], l_minus),
                    (rates.minus.gamma_plus[j], l_minus.adjoint()),
                    (rates.plus.gamma_minus[j], l_plus),
                    (rates.plus.gamma_plus[j], l_plus.adjoint()),
                ]
            }))
        }
    }
}

/// Global Liouvillian with jump operators between dressed eigenstates.
pub fn build_global_liouvillian(params: &MachineParams) -> Result<Liouvillian> {
    params.validate()?;
    if params.regime != Regime::Global {
        return Err(Error::WrongBuilder("global builder called with local-regime parameters".into()));
    }
    let [a, b] = bath_jump_operators(params)?;
    let jumps: Vec<(f64, Mat4)> = a.into_iter().chain(b).collect();
    let matrix = lindblad_superop(&hamiltonian(params.epsilon, params.g), &jumps);
    Ok(Liouvillian::new(LiouvillianKind::GlobalFull, matrix, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::BathStatistics;

    fn fig3(g: f64) -> MachineParams {
        MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, g).unwrap()
    }

    #[test]
    fn printed_matrix_equals_generic_superoperator() {
        for (p, stat) in [
            (fig3(0.005), BathStatistics::Bosonic),
            (MachineParams::new(1.7, 0.4, 2.2, 0.03, 0.07, 0.02).unwrap(), BathStatistics::Fermionic),
        ] {
            let p = p.with_statistics(stat);
            let a = build_local_liouvillian(&p).unwrap();
            let b = local_liouvillian_from_dissipators(&p).unwrap();
            assert!((a.matrix - b.matrix).norm() < 1e-16, "entry mismatch");
        }
    }

    #[test]
    fn gain_term_pattern() {
        let p = fig3(0.005);
        let r = derived_rates(&p).unwrap();
        let l = build_local_liouvillian(&p).unwrap().matrix;
        assert_eq!(l[(0, 5)].re, r.gamma_plus[1]);
        assert_eq!(l[(0, 10)].re, r.gamma_plus[0]);
        assert_eq!(l[(15, 5)].re, r.gamma_minus[0]);
        assert_eq!(l[(15, 10)].re, r.gamma_minus[1]);
    }

    #[test]
    fn reduced_is_principal_submatrix() {
        let p = fig3(0.007);
        let full = build_local_liouvillian(&p).unwrap();
        for dim in [6, 8] {
            let red = build_reduced_liouvillian(&p, dim).unwrap();
            let idx = red.indices();
            for a in 0..dim {
                for b in 0..dim {
                    assert!((red.matrix[(a, b)] - full.matrix[(idx[a], idx[b])]).norm() < 1e-17);
                }
                // No leakage from the sector into its complement.
                for k in red.sector().complement() {
                    assert_eq!(full.matrix[(k, idx[a])], ZERO);
                }
            }
        }
    }

    #[test]
    fn coherence_row_of_reduced_matrix() {
        let p = fig3(0.004);
        let red = build_reduced_liouvillian(&p, 6).unwrap();
        let gam = derived_rates(&p).unwrap().gamma_sum;
        let row: Vec<C64> = (0..6).map(|j| red.matrix[(4, j)]).collect();
        let expected = [ZERO, c(0.0, 0.004), c(0.0, -0.004), ZERO, re(-gam / 2.0), ZERO];
        for (a, b) in row.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-18);
        }
    }

    #[test]
    fn decoupled_reduced_matrix_is_block_diagonal() {
        let red = build_reduced_liouvillian(&fig3(0.0), 6).unwrap();
        for a in 0..4 {
            for b in 4..6 {
                assert_eq!(red.matrix[(a, b)], ZERO);
                assert_eq!(red.matrix[(b, a)], ZERO);
            }
        }
    }

    #[test]
    fn builder_errors() {
        let p = fig3(0.005);
        assert!(matches!(build_reduced_liouvillian(&p, 7), Err(Error::InvalidDimension(7))));
        assert!(matches!(build_global_liouvillian(&p), Err(Error::WrongBuilder(_))));
        let gp = p.with_regime(Regime::Global);
        assert!(matches!(build_local_liouvillian(&gp), Err(Error::WrongBuilder(_))));
        let gf = gp.with_statistics(BathStatistics::Fermionic);
        assert!(matches!(build_global_liouvillian(&gf), Err(Error::UnsupportedCombination(_))));
    }

    #[test]
    fn trace_preservation_all_builders() {
        let p = fig3(0.006);
        let gp = p.with_regime(Regime::Global);
        let ls = [
            build_local_liouvillian(&p).unwrap(),
            build_reduced_liouvillian(&p, 6).unwrap(),
            build_reduced_liouvillian(&p, 8).unwrap(),
            build_global_liouvillian(&gp).unwrap(),
        ];
        for l in &ls {
            assert!(l.trace_residual() < 1e-14, "{:?}", l.kind);
        }
    }
}
