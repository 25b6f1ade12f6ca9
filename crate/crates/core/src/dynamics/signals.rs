//! Scalar-series utilities: steady-value crossings, extrema, settling times
//! and least-squares polynomial fits.

use nalgebra::{DMatrix, DVector};

/// Relative dead band for sign-change counting.
pub const DEAD_BAND: f64 = 1e-12;

/// Signs of `values - reference`, dropping points inside the dead band.
fn signs(values: &[f64], reference: f64, dead_band: f64) -> Vec<(usize, bool)> {
    let band = dead_band * reference.abs();
    values.iter().enumerate().filter(|(_, v)| (*v - reference).abs() > band).map(|(k, v)| (k, *v > reference)).collect()
}

/// Number of times `values` changes side of `reference`.
pub fn crossings(values: &[f64], reference: f64, dead_band: f64) -> usize {
    signs(values, reference, dead_band).windows(2).filter(|w| w[0].1 != w[1].1).count()
}

/// Indices `k` where the series passes from `>= level` at `k - 1` to
/// `< level` at `k`.
pub fn down_crossings(values: &[f64], level: f64) -> Vec<usize> {
    (1..values.len()).filter(|&k| values[k - 1] >= level && values[k] < level).collect()
}

/// Index of the first strict local extremum, skipping any initial segment
/// on which the series is constant.
pub fn first_extremum(values: &[f64]) -> Option<usize> {
    let start = values.windows(2).position(|w| w[1] != w[0])?;
    let mut rising = values[start + 1] > values[start];
    for k in (start + 1)..values.len().saturating_sub(1) {
        let d = values[k + 1] - values[k];
        if d == 0.0 {
            continue;
        }
        if (d > 0.0) != rising {
            return Some(k);
        }
        rising = d > 0.0;
    }
    None
}

/// Earliest grid time after which `|values / reference - 1| < tol` holds
/// for every remaining point.
pub fn settle_time(times: &[f64], values: &[f64], reference: f64, tol: f64) -> Option<f64> {
    let last_bad = values.iter().rposition(|v| (v / reference - 1.0).abs() >= tol);
    match last_bad {
        None => times.first().copied(),
        Some(k) if k + 1 < times.len() => Some(times[k + 1]),
        Some(_) => None,
    }
}

/// Least-squares polynomial fit of degree `deg`. Returns the coefficients
/// (constant term first) and the relative residual `||y - p(x)|| / ||y||`.
pub fn polyfit(x: &[f64], y: &[f64], deg: usize) -> (Vec<f64>, f64) {
    let scale = x.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let a = DMatrix::from_fn(x.len(), deg + 1, |i, j| (x[i] / scale).powi(j as i32));
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let sol = svd.solve(&b, 1e-14).expect("SVD computed with both factors");
    let resid = (&a * &sol - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    let coeffs = sol.iter().enumerate().map(|(j, c)| c / scale.powi(j as i32)).collect();
    (coeffs, resid)
}
