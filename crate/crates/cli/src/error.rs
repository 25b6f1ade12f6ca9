use serde::Serialize;

/// CLI failures, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] thermal_ep::Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use thermal_ep::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 4,
            CliError::Core(e) => match e {
                E::ParameterDomain(_)
                | E::WrongBuilder(_)
                | E::UnsupportedCombination(_)
                | E::InvalidDimension(_)
                | E::UnknownObservable(_)
                | E::NoClassification
                | E::SubspaceViolation(_)
                | E::InvalidDensityMatrix(_) => 2,
                _ => 3,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            4 => "io",
            _ => "numeric",
        }
    }

    /// Machine-readable one-line JSON for standard error.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorReport {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        })
        .expect("error report serializes")
    }
}
