use ldp_core::LdpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Ldp(#[from] LdpError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    /// 1 for a failed verification, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } | CliError::Io(_) => 1,
            CliError::Ldp(LdpError::Estimation(_)) => 1,
            _ => 2,
        }
    }
}
