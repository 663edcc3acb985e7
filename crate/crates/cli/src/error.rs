use graphnyquist::Error as CoreError;
use serde_json::json;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message} (at \"{pointer}\")")]
    Schema { pointer: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Infeasible(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Usage(_) | CliError::Input { .. } => EXIT_VALIDATION,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Output { .. } => EXIT_INTERNAL,
            CliError::Core(e) => match e {
                CoreError::NotUniform | CoreError::NoUniquenessSet | CoreError::NotAdmissible(_) => EXIT_INFEASIBLE,
                CoreError::InvalidGraph(_)
                | CoreError::NotSymmetric(_)
                | CoreError::Dimension(_)
                | CoreError::OutOfRange { .. }
                | CoreError::VertexInSet(_)
                | CoreError::InvalidBandwidth(_)
                | CoreError::MismatchedFrequencyBandwidths
                | CoreError::TooLarge { .. }
                | CoreError::InvalidSplit(_)
                | CoreError::Sampling(_)
                | CoreError::Redistribution(_)
                | CoreError::Unsupported(_) => EXIT_VALIDATION,
                _ => EXIT_INTERNAL,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_VALIDATION => "validation",
            EXIT_INFEASIBLE => "infeasible",
            _ => "internal",
        }
    }

    /// The machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        let mut body = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Schema { pointer, .. } = self {
            body["pointer"] = json!(pointer);
        }
        json!({ "error": body }).to_string()
    }
}
