//! Liouvillian exceptional points of a two-qubit autonomous thermal machine.
//!
//! The crate builds the local, reduced and global Liouvillians of two coupled
//! qubits attached to separate thermal baths, computes their spectra in
//! closed form and numerically, locates and classifies exceptional points,
//! constructs the Jordan chain at the third-order point and propagates the
//! dynamics both spectrally and with an independent Runge-Kutta oracle.
//!
//! Conventions: two-qubit basis `{|11>, |10>, |01>, |00>}` (index 0 is the
//! doubly excited state), row-major vectorization `p[4 i + j] = rho[i][j]`,
//! `hbar = k_B = 1`, time in units of `1 / epsilon`.

pub mod dynamics;
pub mod error;
pub mod ho;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, Mat4, C64};
pub use par::Exec;
