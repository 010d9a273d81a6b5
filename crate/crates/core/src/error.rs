use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ModelError {
    /// A parameter violated a type invariant (negative reserve, fee outside
    /// `[0, 1)`, probability outside `[0, 1]`, misoriented pools, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The closed-form trade size is non-positive: fees swallow the price gap.
    #[error("no arbitrage opportunity (optimal delta_y_b = {delta_y_b})")]
    NoOpportunity { delta_y_b: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl ModelError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        ModelError::InvalidInput(msg.into())
    }

    pub fn is_no_opportunity(&self) -> bool {
        matches!(self, ModelError::NoOpportunity { .. })
    }
}
