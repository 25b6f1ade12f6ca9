//! Time evolution: spectral (diagonalizable and Jordan) propagation, a
//! Runge-Kutta oracle, trace distance, the critical-damping ratio, damping
//! classification and the initial-state library.

pub mod grid;
pub mod ode;
pub mod propagate;
pub mod ratio;
pub mod signals;
pub mod states;

pub use grid::{default_grid, linear_grid, log_grid};
pub use ode::{propagate_ode, OdeOptions};
pub use propagate::{
    overlap_coefficients, propagate_spectral, propagate_spectral_ep, trace_distance, OverlapCoefficients, Provenance,
    Trajectory,
};
pub use ratio::{classify_damping, ratio_r, DampingRegime, RatioSeries};
pub use states::{initial_state, max_positive_scale, InitialStateKind};
