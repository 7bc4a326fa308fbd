use crate::spec::SpecError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Compute(#[from] catcodes::Error),
    #[error("oracle mismatch in {failed} of {total} checks")]
    VerifyMismatch { failed: usize, total: usize },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 usage/parse, 3 numeric domain, 4 resource cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => 2,
            CliError::Compute(catcodes::Error::ResourceLimit { .. } | catcodes::Error::OracleCap { .. }) => 4,
            CliError::Compute(_) => 3,
            CliError::VerifyMismatch { .. } | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}
