use thiserror::Error;

/// Numerical diagnostics attached to a defective (or nearly defective) spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectDiagnostics {
    /// Condition number of the unit-column eigenvector matrix.
    pub condition_number: f64,
    /// `|eta|` of the reduced block, when it applies.
    pub eta_abs: Option<f64>,
    /// Smallest distance between two distinct eigenvalues.
    pub min_gap: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("wrong builder: {0}")]
    WrongBuilder(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error(
        "spectrum is defective at working tolerance (condition {:.3e}); use the Jordan path",
        .0.condition_number
    )]
    Defective(Box<DefectDiagnostics>),
    #[error(
        "closed-form eigenmatrices are singular at |eta| = {eta_abs:.3e} (switch {threshold:.3e}); use the Jordan path"
    )]
    EpSingularity { eta_abs: f64, threshold: f64 },
    #[error("parameters are not at the third-order exceptional point (|eta| = {eta_abs:.3e}, switch {threshold:.3e})")]
    NotAnEp { eta_abs: f64, threshold: f64 },
    #[error("initial state leaves the supported subspace: {0}")]
    SubspaceViolation(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("damping classification needs g > 0")]
    NoClassification,
    #[error("eigenvalue cluster is empty")]
    EmptyCluster,
    #[error("unknown observable '{0}'")]
    UnknownObservable(String),
    #[error("Jordan data inconsistent with parameters: {0}")]
    InconsistentJordan(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
