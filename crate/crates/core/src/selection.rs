//! Prediction error, hold-out evaluation and the (alpha, shrinkage, t) grid
//! search.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GlarsError, Result};
use crate::estimators::{EstimatorKind, EstimatorSpec, ShrinkageParam};
use crate::path::{run_path, standardize, CoefficientPath, StandardizedDataset};
use crate::Dataset;

/// Raw-scale coefficients with magnitude above this count as selected.
pub const SELECTION_THRESHOLD: f64 = 1e-10;

/// Default adaptive exponents, 0.1 to 1.0.
pub fn default_alphas() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// Default ridge parameters, 0.1 to 1.0.
pub fn default_k_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// Default Liu parameters, 0.1 to 0.9 plus 0.99.
pub fn default_d_grid() -> Vec<f64> {
    let mut d: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    d.push(0.99);
    d
}

/// Root mean squared prediction error of `intercept + X β` against `y`.
pub fn rmse(beta: &[f64], intercept: f64, x_new: &DMatrix<f64>, y_new: &DVector<f64>) -> Result<f64> {
    let (n, p) = x_new.shape();
    if n == 0 || p != beta.len() || y_new.len() != n {
        return Err(GlarsError::DimensionMismatch(format!(
            "rmse on {n}x{p} design with {} coefficients and {} responses",
            beta.len(),
            y_new.len()
        )));
    }
    let sse: f64 = (0..n)
        .map(|i| {
            let fitted = intercept + (0..p).map(|j| x_new[(i, j)] * beta[j]).sum::<f64>();
            let e = y_new[i] - fitted;
            e * e
        })
        .sum();
    Ok((sse / n as f64).sqrt())
}

/// How to pick the point on the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TRule {
    /// The point with this weighted L1 norm.
    Fixed(f64),
    /// The breakpoint or segment midpoint with the lowest validation error.
    BestOnTest,
}

/// One evaluated model. `coefficients` and `intercept` are on the raw scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub rmse: f64,
    pub chosen_alpha: f64,
    pub chosen_shrinkage: Option<f64>,
    pub chosen_t: f64,
    pub n_selected: usize,
    pub estimator: EstimatorSpec,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// The path hit the step limit and only its traced part was searched.
    pub path_truncated: bool,
}

/// `run_path`, falling back to the partial path when the step limit is hit.
pub fn fit_path(std: &StandardizedDataset, spec: &EstimatorSpec, alpha: f64) -> Result<(CoefficientPath, bool)> {
    match run_path(std, spec, alpha) {
        Ok(p) => Ok((p, false)),
        Err(GlarsError::NonConvergence { partial, .. }) => Ok((*partial, true)),
        Err(e) => Err(e),
    }
}

fn count_selected(coefficients: &[f64]) -> usize {
    coefficients.iter().filter(|b| b.abs() > SELECTION_THRESHOLD).count()
}

struct Scored {
    rmse: f64,
    t: f64,
    coefficients: Vec<f64>,
    intercept: f64,
}

fn score_points(path: &CoefficientPath, test: &Dataset, t_rule: TRule) -> Result<Scored> {
    match t_rule {
        TRule::Fixed(t) => {
            let adaptive = path.coefficients_at(t)?;
            let (coefficients, intercept) = path.original_from_adaptive(&adaptive);
            let rmse = rmse(&coefficients, intercept, &test.x, &test.y)?;
            Ok(Scored { rmse, t, coefficients, intercept })
        }
        TRule::BestOnTest => {
            let mut best: Option<Scored> = None;
            for point in path.candidate_points() {
                let (coefficients, intercept) = path.original_from_scaled(&point.beta_scaled);
                let e = rmse(&coefficients, intercept, &test.x, &test.y)?;
                let better = match &best {
                    None => true,
                    Some(b) => e < b.rmse || (e == b.rmse && point.t < b.t),
                };
                if better {
                    best = Some(Scored { rmse: e, t: point.t, coefficients, intercept });
                }
            }
            Ok(best.expect("a path has at least one point"))
        }
    }
}

/// Fits on `train` and scores on `test`, which is evaluated on the raw scale
/// so it is implicitly standardized with the training statistics.
pub fn holdout_evaluate(
    train: &Dataset,
    test: &Dataset,
    spec: &EstimatorSpec,
    alpha: f64,
    t_rule: TRule,
) -> Result<EvaluationResult> {
    if train.p() != test.p() {
        return Err(GlarsError::DimensionMismatch(format!(
            "train has {} predictors, test has {}",
            train.p(),
            test.p()
        )));
    }
    let std = standardize(&train.x, &train.y)?;
    let (path, truncated) = fit_path(&std, spec, alpha)?;
    let s = score_points(&path, test, t_rule)?;
    Ok(EvaluationResult {
        rmse: s.rmse,
        chosen_alpha: alpha,
        chosen_shrinkage: spec.shrinkage_value(),
        chosen_t: s.t,
        n_selected: count_selected(&s.coefficients),
        estimator: *spec,
        coefficients: s.coefficients,
        intercept: s.intercept,
        path_truncated: truncated,
    })
}

/// Hyperparameter grid for one estimator kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchGrid {
    pub alphas: Vec<f64>,
    /// k values for RE/AURE/RK, d values for LE/AULE/RD, empty otherwise.
    pub shrinkages: Vec<f64>,
    pub t_rule: TRule,
}

impl SearchGrid {
    /// Default alphas with the default k or d list for `kind`.
    pub fn default_for(kind: EstimatorKind) -> Self {
        let shrinkages = match kind.shrinkage() {
            ShrinkageParam::Ridge => default_k_grid(),
            ShrinkageParam::Liu => default_d_grid(),
            ShrinkageParam::None => Vec::new(),
        };
        Self {
            alphas: default_alphas(),
            shrinkages,
            t_rule: TRule::BestOnTest,
        }
    }

    /// A single (alpha, shrinkage) point taken from `spec`.
    pub fn singleton(spec: &EstimatorSpec, alpha: f64) -> Self {
        Self {
            alphas: vec![alpha],
            shrinkages: spec.shrinkage_value().into_iter().collect(),
            t_rule: TRule::BestOnTest,
        }
    }

    pub fn validate(&self, kind: EstimatorKind) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(GlarsError::EmptyGrid("no alpha values".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(GlarsError::EmptyGrid(format!("alpha {a} is not positive")));
        }
        let takes = kind.shrinkage() != ShrinkageParam::None;
        if takes == self.shrinkages.is_empty() {
            return Err(GlarsError::EmptyGrid(format!(
                "{} {} a shrinkage grid",
                kind.algorithm_name(),
                if takes { "needs" } else { "does not take" }
            )));
        }
        Ok(())
    }

    /// (alpha, shrinkage) pairs in grid order.
    fn points(&self) -> Vec<(f64, Option<f64>)> {
        let shrink: Vec<Option<f64>> = if self.shrinkages.is_empty() {
            vec![None]
        } else {
            self.shrinkages.iter().copied().map(Some).collect()
        };
        self.alphas
            .iter()
            .flat_map(|&a| shrink.iter().map(move |&s| (a, s)))
            .collect()
    }
}

/// Where grid points are scored.
#[derive(Debug, Clone, Copy)]
pub enum Validation<'a> {
    /// Score on a fixed test set.
    Holdout(&'a Dataset),
    /// Mean squared error over `folds` interleaved folds of the training
    /// data; path points are fractions 0, 0.05, ..., 1 of each fold's final t.
    KFold { folds: usize },
}

const KFOLD_FRACTIONS: usize = 20;

fn order_key(r: &EvaluationResult) -> (f64, f64, f64, f64) {
    (
        r.rmse,
        r.chosen_alpha,
        r.chosen_shrinkage.unwrap_or(0.0),
        r.chosen_t,
    )
}

/// True if `a` beats `b`: lower rmse, then smaller alpha, shrinkage and t.
fn better(a: &EvaluationResult, b: &EvaluationResult) -> bool {
    let (ka, kb) = (order_key(a), order_key(b));
    ka.0.total_cmp(&kb.0)
        .then(ka.1.total_cmp(&kb.1))
        .then(ka.2.total_cmp(&kb.2))
        .then(ka.3.total_cmp(&kb.3))
        .is_lt()
}

/// Exhaustive search over alphas x shrinkages x path points. Grid points are
/// evaluated in parallel; the reduction is order independent.
pub fn grid_search_cv(
    train: &Dataset,
    validation: Validation<'_>,
    spec: &EstimatorSpec,
    grid: &SearchGrid,
) -> Result<EvaluationResult> {
    grid.validate(spec.kind)?;
    let points = grid.points();
    let results: Vec<Result<EvaluationResult>> = points
        .par_iter()
        .map(|&(alpha, shrink)| {
            let s = shrink.map_or(*spec, |v| spec.with_shrinkage(v));
            s.validate()?;
            match validation {
                Validation::Holdout(test) => holdout_evaluate(train, test, &s, alpha, grid.t_rule),
                Validation::KFold { folds } => kfold_evaluate(train, folds, &s, alpha),
            }
        })
        .collect();
    let mut best: Option<EvaluationResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().map_or(true, |b| better(&r, b)) {
            best = Some(r);
        }
    }
    let best = best.ok_or_else(|| GlarsError::EmptyGrid("no grid points".into()))?;
    match validation {
        Validation::Holdout(_) => Ok(best),
        Validation::KFold { .. } => refit(train, &best),
    }
}

fn kfold_evaluate(train: &Dataset, folds: usize, spec: &EstimatorSpec, alpha: f64) -> Result<EvaluationResult> {
    let n = train.n();
    if folds < 2 || folds > n {
        return Err(GlarsError::InvalidParameter(format!("{folds} folds for {n} rows")));
    }
    let mut sse = vec![0.0; KFOLD_FRACTIONS + 1];
    let mut truncated = false;
    for f in 0..folds {
        let (fit_rows, held): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| i % folds != f);
        let fit = train.select_rows(&fit_rows);
        let val = train.select_rows(&held);
        let std = standardize(&fit.x, &fit.y)?;
        let (path, cut) = fit_path(&std, spec, alpha)?;
        truncated |= cut;
        let t_end = path.terminal_t();
        for (i, acc) in sse.iter_mut().enumerate() {
            let t = t_end * i as f64 / KFOLD_FRACTIONS as f64;
            let (b, b0) = path.original_from_adaptive(&path.coefficients_at(t)?);
            let e = rmse(&b, b0, &val.x, &val.y)?;
            *acc += e * e * val.n() as f64;
        }
    }
    let (best_i, best_sse) = sse
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    Ok(EvaluationResult {
        rmse: (best_sse / n as f64).sqrt(),
        chosen_alpha: alpha,
        chosen_shrinkage: spec.shrinkage_value(),
        // fraction of the final t; replaced by the attained norm on refit
        chosen_t: best_i as f64 / KFOLD_FRACTIONS as f64,
        n_selected: 0,
        estimator: *spec,
        coefficients: Vec::new(),
        intercept: 0.0,
        path_truncated: truncated,
    })
}

fn refit(train: &Dataset, chosen: &EvaluationResult) -> Result<EvaluationResult> {
    let std = standardize(&train.x, &train.y)?;
    let (path, truncated) = fit_path(&std, &chosen.estimator, chosen.chosen_alpha)?;
    let t = chosen.chosen_t * path.terminal_t();
    let (coefficients, intercept) = path.original_from_adaptive(&path.coefficients_at(t)?);
    Ok(EvaluationResult {
        chosen_t: t,
        n_selected: count_selected(&coefficients),
        coefficients,
        intercept,
        path_truncated: chosen.path_truncated || truncated,
        ..chosen.clone()
    })
}
