use std::path::PathBuf;

use thiserror::Error;

use crate::path::CoefficientPath;

#[derive(Debug, Error)]
pub enum GlarsError {
    #[error("gram matrix is numerically singular (smallest/largest eigenvalue ratio {ratio:.3e})")]
    SingularGram { ratio: f64 },

    #[error("gram matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("gram matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid component count {h} for a {dim}-dimensional basis")]
    InvalidComponentCount { h: usize, dim: usize },

    #[error("invalid estimator parameter: {0}")]
    InvalidParameter(String),

    #[error("column {0} is constant and cannot be standardized")]
    ConstantColumn(usize),

    #[error("at least two rows are required, got {0}")]
    TooFewRows(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("path did not terminate within {steps} steps")]
    NonConvergence {
        steps: usize,
        partial: Box<CoefficientPath>,
    },

    #[error("t = {t} is outside the path range [0, {max}]")]
    OutOfRange { t: f64, max: f64 },

    #[error("search grid is empty or invalid: {0}")]
    EmptyGrid(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("non-numeric cell at row {row}, column `{column}`: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("file {0} contains no data rows")]
    EmptyFile(PathBuf),

    #[error("bundled file {file} failed its checksum")]
    CorruptBundle { file: &'static str },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl GlarsError {
    /// True for errors caused by malformed input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GlarsError::MissingColumn(_)
                | GlarsError::NonNumericCell { .. }
                | GlarsError::EmptyFile(_)
                | GlarsError::Csv(_)
                | GlarsError::Io(_)
                | GlarsError::InvalidParameter(_)
                | GlarsError::InvalidConfig(_)
                | GlarsError::EmptyGrid(_)
                | GlarsError::ConstantColumn(_)
                | GlarsError::TooFewRows(_)
                | GlarsError::DimensionMismatch(_)
        )
    }
}

pub type Result<T, E = GlarsError> = std::result::Result<T, E>;
