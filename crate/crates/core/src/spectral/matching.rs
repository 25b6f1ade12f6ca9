//! Ordering and matching of eigenvalue lists.

use crate::linalg::C64;

/// Sort key quantum: real parts closer than this (relative to the list
/// scale) compare equal so conjugate pairs order by imaginary part.
const SORT_QUANTUM: f64 = 1e-9;

/// Sort eigenvalues by descending real part, then ascending imaginary part.
pub fn sort_spectrum(values: &mut [C64]) {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let q = SORT_QUANTUM * scale;
    values.sort_by(|a, b| {
        let ka = (a.re / q).round();
        let kb = (b.re / q).round();
        kb.total_cmp(&ka).then(a.im.total_cmp(&b.im))
    });
}

/// Sorting permutation with the same ordering as [`sort_spectrum`].
pub fn sorted_order(values: &[C64]) -> Vec<usize> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let q = SORT_QUANTUM * scale;
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        (b.re / q).round().total_cmp(&(a.re / q).round()).then(a.im.total_cmp(&b.im))
    });
    idx
}

/// Greedy minimal-distance matching: repeatedly pair the globally closest
/// unmatched elements. Returns `(pairs (i in a, j in b), max distance)`.
/// Elements of the longer list may stay unmatched.
pub fn greedy_matching(a: &[C64], b: &[C64]) -> (Vec<(usize, usize)>, f64) {
    let mut dists: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            dists.push(((x - y).norm(), i, j));
        }
    }
    dists.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::with_capacity(a.len().min(b.len()));
    let mut worst: f64 = 0.0;
    for (d, i, j) in dists {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
            worst = worst.max(d);
        }
    }
    pairs.sort_unstable();
    (pairs, worst)
}

/// Largest distance after matching two equally long spectra.
pub fn match_spectra(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra must have equal length");
    greedy_matching(a, b).1
}

/// Largest distance when embedding `sub` (with multiplicity) into `sup`.
pub fn inclusion_distance(sub: &[C64], sup: &[C64]) -> f64 {
    assert!(sub.len() <= sup.len(), "sub-spectrum longer than spectrum");
    greedy_matching(sub, sup).1
}

/// Largest distance between the list and its complex conjugate.
pub fn conjugation_asymmetry(values: &[C64]) -> f64 {
    let conj: Vec<C64> = values.iter().map(|z| z.conj()).collect();
    match_spectra(values, &conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn ordering() {
        let mut v = vec![c(-1.0, 1.0), c(0.0, 0.0), c(-1.0, -1.0), c(-0.5, 0.0)];
        sort_spectrum(&mut v);
        assert_eq!(v, vec![c(0.0, 0.0), c(-0.5, 0.0), c(-1.0, -1.0), c(-1.0, 1.0)]);
        let order = sorted_order(&[c(-2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(order, vec![1, 0]);
    }

    #[test]
    fn matching_is_permutation_invariant() {
        let a = vec![c(0.0, 0.0), c(-1.0, 2.0), c(-1.0, -2.0), c(-3.0, 0.0)];
        let b = vec![c(-3.0, 1e-12), c(-1.0, -2.0), c(0.0, 0.0), c(-1.0, 2.0)];
        assert!(match_spectra(&a, &b) <= 1e-12);
        assert!(conjugation_asymmetry(&a) == 0.0);
        assert!(inclusion_distance(&a[..2], &b) == 0.0);
    }
}
