//! Fixed-step classical Runge-Kutta oracle for `d rho / dt = L rho`.
//!
//! The deviation `rho - rho_ss` is integrated instead of `rho` itself. When
//! `L` commutes with the coherent part generated by the bare Hamiltonian,
//! integration runs in the frame rotating with it, which removes the fast
//! `2 epsilon` oscillations exactly and leaves the step to be set by the
//! dissipative and coupling scales.

use crate::dynamics::grid::validate_grid;
use crate::dynamics::propagate::{Provenance, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{re, smallest_right_singular_vectors, CMat, CVec, C64};
use crate::model::basis::EXCITATIONS;
use crate::model::density::DensityMatrix;
use crate::model::liouvillian::Liouvillian;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Step size as a fraction of `1 / ||L||_inf` (of the rotating-frame
    /// generator when that frame is used).
    pub step_scale: f64,
    pub rotating_frame: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { step_scale: 0.005, rotating_frame: true }
    }
}

/// Trace drift above which the deviation is projected back to zero trace.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-12;

struct Sparse {
    entries: Vec<(usize, usize, C64)>,
}

impl Sparse {
    fn from_dense(m: &CMat) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != C64::new(0.0, 0.0) {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self { entries }
    }

    fn apply(&self, x: &CVec, out: &mut CVec) {
        out.fill(C64::new(0.0, 0.0));
        for &(i, j, v) in &self.entries {
            out[i] += v * x[j];
        }
    }
}

fn max_row_sum(m: &CMat) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Diagonal generator `-i epsilon (n_i - n_j)` of the bare Hamiltonian on the
/// sector of `l`.
fn bare_generator(l: &Liouvillian) -> Vec<C64> {
    l.indices()
        .iter()
        .map(|&k| C64::new(0.0, -l.params.epsilon * (EXCITATIONS[k / 4] - EXCITATIONS[k % 4]) as f64))
        .collect()
}

/// Integrate from `rho0` and sample on `times` (which may start after 0).
pub fn propagate_ode(l: &Liouvillian, rho0: &DensityMatrix, times: &[f64], opts: &OdeOptions) -> Result<Trajectory> {
    validate_grid(times)?;
    if !(opts.step_scale > 0.0 && opts.step_scale.is_finite()) {
        return Err(Error::ParameterDomain("step_scale must be positive".into()));
    }
    let n = l.dim();
    let scale = rho0.matrix().norm();
    if !l.sector().contains(rho0.matrix(), 1e-14 * scale) {
        return Err(Error::SubspaceViolation(format!("initial state leaves the {:?} sector", l.sector())));
    }

    let ss_vec = smallest_right_singular_vectors(&l.matrix, 1).column(0).into_owned();
    let steady = l.from_sector(&ss_vec);
    let steady = steady / steady.trace();
    let steady_vec = l.to_sector(&steady);
    let trace_fn = l.trace_functional();

    let diag = bare_generator(l);
    let l0 = CMat::from_diagonal(&CVec::from_vec(diag.clone()));
    let comm = &l.matrix * &l0 - &l0 * &l.matrix;
    let commutes = comm.norm() <= 1e-12 * l.matrix.norm() * l0.norm().max(1.0);
    let rotating = opts.rotating_frame && commutes;
    if opts.rotating_frame && !commutes {
        log::debug!("generator does not commute with the bare coherent part; integrating in the lab frame");
    }
    let generator = if rotating { &l.matrix - &l0 } else { l.matrix.clone() };
    let norm = max_row_sum(&generator);
    let h_max = if norm > 0.0 { opts.step_scale / norm } else { f64::INFINITY };
    if h_max < 1e-300 {
        return Err(Error::Numeric("step size underflow".into()));
    }
    let op = Sparse::from_dense(&generator);

    let mut x = l.to_sector(rho0.matrix()) - &steady_vec;
    let mut t = 0.0;
    let mut deviations = Vec::with_capacity(times.len());
    let (mut k1, mut k2, mut k3, mut k4) = (CVec::zeros(n), CVec::zeros(n), CVec::zeros(n), CVec::zeros(n));
    let mut tmp = CVec::zeros(n);
    for &target in times {
        let span = target - t;
        let steps = if span > 0.0 { (span / h_max).ceil().max(1.0) as usize } else { 0 };
        if steps > 0 {
            let h = span / steps as f64;
            let hc = re(h);
            let half = re(0.5 * h);
            for _ in 0..steps {
                op.apply(&x, &mut k1);
                tmp.copy_from(&x);
                tmp.axpy(half, &k1, ONE_C);
                op.apply(&tmp, &mut k2);
                tmp.copy_from(&x);
                tmp.axpy(half, &k2, ONE_C);
                op.apply(&tmp, &mut k3);
                tmp.copy_from(&x);
                tmp.axpy(hc, &k3, ONE_C);
                op.apply(&tmp, &mut k4);
                let sixth = re(h / 6.0);
                x.axpy(sixth, &k1, ONE_C);
                x.axpy(sixth * 2.0, &k2, ONE_C);
                x.axpy(sixth * 2.0, &k3, ONE_C);
                x.axpy(sixth, &k4, ONE_C);
                let drift = trace_fn.dot(&x);
                if drift.norm() > TRACE_DRIFT_LIMIT {
                    log::debug!("trace drift {:.3e} at t = {t:.6e}; renormalizing", drift.norm());
                    x -= &steady_vec * drift;
                }
            }
            t = target;
        }
        let lab = if rotating {
            CVec::from_iterator(n, x.iter().zip(&diag).map(|(v, d)| v * (d * t).exp()))
        } else {
            x.clone()
        };
        deviations.push(l.from_sector(&lab));
    }
    Trajectory::assemble(times, steady, deviations, Provenance::Ode)
}

const ONE_C: C64 = C64 { re: 1.0, im: 0.0 };
