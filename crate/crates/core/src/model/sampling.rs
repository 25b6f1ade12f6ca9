//! Random parameter draws and random physical states for oracle tests.

use rand::Rng;

use crate::linalg::{c, re, Mat4};
use crate::model::basis::Sector;
use crate::model::density::DensityMatrix;
use crate::model::params::{BathStatistics, MachineParams, Regime};

/// Closed intervals for uniformly sampled parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRanges {
    pub epsilon: (f64, f64),
    pub temperature: (f64, f64),
    pub gamma: (f64, f64),
    pub g: (f64, f64),
}

impl Default for ParamRanges {
    fn default() -> Self {
        Self { epsilon: (0.5, 2.0), temperature: (0.05, 5.0), gamma: (1e-4, 0.1), g: (0.0, 0.1) }
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

pub fn sample_params<R: Rng + ?Sized>(
    rng: &mut R,
    ranges: &ParamRanges,
    statistics: BathStatistics,
    regime: Regime,
) -> MachineParams {
    MachineParams {
        epsilon: uniform(rng, ranges.epsilon),
        t1: uniform(rng, ranges.temperature),
        t2: uniform(rng, ranges.temperature),
        gamma1: uniform(rng, ranges.gamma),
        gamma2: uniform(rng, ranges.gamma),
        g: uniform(rng, ranges.g),
        statistics,
        regime,
    }
}

/// A random full-rank density matrix `G G^dagger / Tr(G G^dagger)` with a
/// Gaussian-like complex `G`, pinched onto `sector`. Pinching onto the
/// sector's block structure preserves positivity.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, sector: Sector) -> DensityMatrix {
    let gm = Mat4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut m = gm * gm.adjoint();
    for k in sector.complement() {
        m[(k / 4, k % 4)] = re(0.0);
    }
    let tr = m.trace().re;
    m /= re(tr);
    m = (m + m.adjoint()) * re(0.5);
    DensityMatrix::new_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_states_are_valid_and_in_sector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sector in [Sector::Full, Sector::X8, Sector::Reduced6] {
            for _ in 0..50 {
                let s = random_state(&mut rng, sector);
                assert!(s.check().is_valid());
                assert!(sector.contains(s.matrix(), 0.0));
            }
        }
    }

    #[test]
    fn sampled_params_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = ParamRanges::default();
        for _ in 0..100 {
            let p = sample_params(&mut rng, &r, BathStatistics::Bosonic, Regime::Local);
            assert!(p.validate().is_ok());
            assert!(p.g <= 0.1 && p.epsilon >= 0.5);
        }
    }
}
