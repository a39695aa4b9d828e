//! Adaptive generalized LARS.
//!
//! A LARS-style regularization path whose direction at each step is passed
//! through one of eight shrinkage transforms (least squares, ridge, almost
//! unbiased ridge, Liu, almost unbiased Liu, principal components, r-k and
//! r-d), with adaptive LASSO column weights derived from the same estimator.
//! Around the solver sit hold-out model selection, a Monte Carlo study
//! harness and CSV/JSON I/O.
//!
//! ```
//! use glars::{run_path, standardize, EstimatorSpec};
//! use nalgebra::{DMatrix, DVector};
//!
//! let x = DMatrix::from_row_slice(5, 2, &[1.0, 0.3, 2.0, 0.1, 3.0, 0.7, 4.0, 0.2, 5.0, 0.9]);
//! let y = DVector::from_vec(vec![1.1, 2.0, 3.2, 3.9, 5.1]);
//! let std = standardize(&x, &y).unwrap();
//! let path = run_path(&std, &EstimatorSpec::ridge(0.5), 1.0).unwrap();
//! assert!(!path.steps.is_empty());
//! ```

pub mod data;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod path;
pub mod selection;
pub mod simulation;

pub use data::{diagnostics, load_csv, load_prostate, write_report, Diagnostics, ReportFormat, TabularDataset};
pub use error::{GlarsError, Result};
pub use estimators::{
    fit_biased, fit_olse, full_transform, principal_eigenvectors, restricted_transform, ComponentRule,
    EigenBasis, EstimatorKind, EstimatorSpec, ShrinkageParam,
};
pub use linalg::GramMatrix;
pub use path::{
    compute_direction, compute_weights, lars_path, run_path, run_path_with_weights, scale_columns,
    standardize, step_length, ActiveSet, AdaptiveWeights, CoefficientPath, PathEvent, PathOptions,
    PathStep, ScaledDesign, StandardizationSummary, StandardizedDataset, Termination,
};
pub use selection::{grid_search_cv, holdout_evaluate, rmse, EvaluationResult, SearchGrid, TRule, Validation};
pub use simulation::{run_replications, SimulationConfig, SimulationReport};

use nalgebra::{DMatrix, DVector};

/// Raw predictors and response.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(GlarsError::DimensionMismatch(format!(
                "{} rows in X but {} responses",
                x.nrows(),
                y.len()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Rows with the given indices, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            x: self.x.select_rows(rows),
            y: DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y[i])),
        }
    }
}
