use thiserror::Error;

use crate::numeric::RatInterval;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the operation (ln of 0, t outside (0,1], …).
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid tolerance, index, or other caller-supplied parameter.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A refinement budget ran out before the requested precision was reached.
    #[error("inconclusive after {evaluations} evaluations ({what}); best enclosure {best}")]
    Inconclusive { what: String, best: Box<RatInterval>, evaluations: u64 },
    /// Object too large to materialize (bit or length budget).
    #[error("size error: {0}")]
    Size(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. })
    }
}
