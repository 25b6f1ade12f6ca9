//! Closed-form and numeric spectra, eigenmatrix bases, exceptional points and
//! the Jordan chain at the third-order point.

pub mod analytic;
pub mod eigen;
pub mod ep;
pub mod jordan;
pub mod matching;

pub use analytic::{
    analytic_eigenmatrices_reduced, analytic_spectrum_global, analytic_spectrum_local, analytic_spectrum_reduced,
    analytic_steady_state, eta_switch, GlobalSpectralAux, ReducedEigenmatrices, SpectralAux, ETA_SWITCH_RELATIVE,
};
pub use eigen::{numeric_eigenvalues, numeric_spectral_data, ModalBasis, SpectralData};

pub use ep::{
    coalescence_diagnostics, ep_flags, find_eps, CoalescenceDiagnostics, EpFlags, EpKind, EpReport, EpSearch,
    FreeParameter,
};
pub use jordan::{ep_modal_basis, jordan_chain, JordanBlockData};
pub use matching::{match_spectra, sort_spectrum};
