//! Physical parameters, bath rates, basis conventions and Liouvillian builders.

pub mod basis;
pub mod density;
pub mod liouvillian;
pub mod params;
pub mod sampling;
pub mod superop;

pub use basis::Sector;
pub use density::{DensityCheck, DensityMatrix};
pub use liouvillian::{
    build_global_liouvillian, build_local_liouvillian, build_reduced_liouvillian, Liouvillian, LiouvillianKind,
};
pub use params::{
    bath_rates, derived_rates, global_rates, BathRates, BathStatistics, GlobalRates, MachineParams, Regime,
    TransitionRates,
};
