//! Monte Carlo study on McDonald–Galarneau designs.
//!
//! Predictors are `x_ij = sqrt(1 − ρ²) z_ij + ρ z_{i,m+1}` with iid standard
//! normal `z`, the true coefficients are the unit eigenvector of `X'X` for its
//! largest eigenvalue, and `y = Xβ + ε`. Each replicate draws its predictors
//! and noise from dedicated ChaCha streams (`2r` and `2r + 1`) of the master
//! seed, so replicate `r` does not depend on thread scheduling or on which
//! estimators are run.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GlarsError, Result};
use crate::estimators::EstimatorSpec;
use crate::linalg::symmetric_eigen;
use crate::selection::{grid_search_cv, EvaluationResult, SearchGrid, Validation};
use crate::Dataset;

/// Gap between the two largest eigenvalues below which the leading
/// eigenvector is not unique.
pub const SPECTRAL_GAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_total: usize,
    pub n_train: usize,
    /// Number of predictors.
    pub m: usize,
    /// Collinearity level of the design, in `[0, 1)`.
    pub rho_collinearity: f64,
    /// Noise standard deviation.
    pub sigma: f64,
    pub n_replicates: usize,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_total: 100,
            n_train: 50,
            m: 20,
            rho_collinearity: 0.5,
            sigma: 1.0,
            n_replicates: 50,
            seed: 2024,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GlarsError::InvalidConfig(msg));
        if self.n_train >= self.n_total {
            return bad(format!("n_train {} must be below n_total {}", self.n_train, self.n_total));
        }
        if self.n_train < 2 {
            return bad(format!("n_train {} must be at least 2", self.n_train));
        }
        if self.m < 2 {
            return bad(format!("m = {} must be at least 2", self.m));
        }
        if !(0.0..1.0).contains(&self.rho_collinearity) {
            return bad(format!("rho = {} outside [0, 1)", self.rho_collinearity));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be >= 0", self.sigma));
        }
        if self.n_replicates == 0 {
            return bad("n_replicates must be positive".into());
        }
        Ok(())
    }
}

/// ChaCha8 keyed by `seed`, positioned on `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n x m` design with pairwise population correlation `rho²`.
pub fn generate_predictors_with<R: Rng>(rng: &mut R, n: usize, m: usize, rho: f64) -> DMatrix<f64> {
    let a = (1.0 - rho * rho).sqrt();
    let mut x = DMatrix::zeros(n, m);
    for i in 0..n {
        let z: Vec<f64> = (0..=m).map(|_| rng.sample(StandardNormal)).collect();
        for j in 0..m {
            x[(i, j)] = a * z[j] + rho * z[m];
        }
    }
    x
}

/// The predictors of replicate `replicate`.
pub fn generate_predictors(config: &SimulationConfig, replicate: u64) -> DMatrix<f64> {
    let mut rng = stream_rng(config.seed, 2 * replicate);
    generate_predictors_with(&mut rng, config.n_total, config.m, config.rho_collinearity)
}

/// Leading eigenvector of `X'X`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingEigenvector {
    /// Unit norm, largest-magnitude entry positive.
    pub beta: DVector<f64>,
    /// `λ₁ − λ₂`.
    pub gap: f64,
    /// True when the gap is below [`SPECTRAL_GAP_TOLERANCE`]; the returned
    /// vector is then the first one in the eigen-solver's stable order.
    pub degenerate: bool,
}

pub fn beta_from_largest_eigenvector(x: &DMatrix<f64>) -> LeadingEigenvector {
    let (values, vectors) = symmetric_eigen(&x.tr_mul(x));
    let gap = if values.len() > 1 { values[0] - values[1] } else { f64::INFINITY };
    let mut beta = vectors.column(0).into_owned();
    beta /= beta.norm();
    LeadingEigenvector {
        beta,
        gap,
        degenerate: gap <= SPECTRAL_GAP_TOLERANCE * values[0].abs().max(1.0),
    }
}

/// `Xβ + σε` with noise drawn from `rng`.
pub fn generate_response_with<R: Rng>(rng: &mut R, x: &DMatrix<f64>, beta: &DVector<f64>, sigma: f64) -> DVector<f64> {
    let mut y = x * beta;
    for v in y.iter_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *v += sigma * e;
    }
    y
}

pub fn generate_response(x: &DMatrix<f64>, beta: &DVector<f64>, sigma: f64, seed: u64) -> Result<DVector<f64>> {
    if x.ncols() != beta.len() {
        return Err(GlarsError::DimensionMismatch(format!(
            "{} predictors but {} coefficients",
            x.ncols(),
            beta.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(generate_response_with(&mut rng, x, beta, sigma))
}

/// The full data of one replicate, split into train (first `n_train` rows)
/// and test.
pub fn generate_replicate(config: &SimulationConfig, replicate: u64) -> (Dataset, Dataset) {
    let x = generate_predictors(config, replicate);
    let beta = beta_from_largest_eigenvector(&x).beta;
    let mut rng = stream_rng(config.seed, 2 * replicate + 1);
    let y = generate_response_with(&mut rng, &x, &beta, config.sigma);
    let data = Dataset { x, y };
    let train: Vec<usize> = (0..config.n_train).collect();
    let test: Vec<usize> = (config.n_train..config.n_total).collect();
    (data.select_rows(&train), data.select_rows(&test))
}

/// An estimator and the grid it is tuned over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyArm {
    pub spec: EstimatorSpec,
    pub grid: SearchGrid,
}

impl StudyArm {
    pub fn algorithm(&self) -> &'static str {
        self.spec.kind.algorithm_name()
    }
}

/// All eight estimators with default grids and component rule.
pub fn default_arms() -> Vec<StudyArm> {
    crate::estimators::EstimatorKind::ALL
        .iter()
        .map(|&kind| StudyArm {
            spec: EstimatorSpec::new(kind),
            grid: SearchGrid::default_for(kind),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub result: EvaluationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub algorithm: String,
    pub replicate: usize,
    pub message: String,
}

/// A row of a results table: the median (or single) fit of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub algorithm: String,
    pub rmse: f64,
    pub shrinkage: Option<f64>,
    pub alpha: f64,
    pub t: f64,
    pub selected: usize,
    /// The replicate whose hyperparameters are reported.
    pub replicate: Option<usize>,
}

impl TableRow {
    pub fn from_result(algorithm: &str, r: &EvaluationResult, replicate: Option<usize>) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            rmse: r.rmse,
            shrinkage: r.chosen_shrinkage,
            alpha: r.chosen_alpha,
            t: r.chosen_t,
            selected: r.n_selected,
            replicate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub replicates: Vec<ReplicateResult>,
    /// Median rmse with the hyperparameters of the replicate closest to it.
    pub median: Option<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub algorithms: Vec<AlgorithmSummary>,
    pub failures: Vec<ReplicateFailure>,
    /// Replicates whose true-coefficient eigenvalue was not simple.
    pub degenerate_spectra: Vec<usize>,
}

impl SimulationReport {
    pub fn median_table(&self) -> Vec<TableRow> {
        self.algorithms.iter().filter_map(|a| a.median.clone()).collect()
    }

    /// Per-algorithm rmse vectors in replicate order, for box plots.
    pub fn figure_data(&self) -> Vec<(String, Vec<f64>)> {
        self.algorithms
            .iter()
            .map(|a| (a.algorithm.clone(), a.replicates.iter().map(|r| r.result.rmse).collect()))
            .collect()
    }
}

/// Median; the mean of the two middle values for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Median row for the given replicates; ties in distance go to the lowest
/// replicate index.
pub fn summarize(algorithm: &str, replicates: &[ReplicateResult]) -> Option<TableRow> {
    let rmses: Vec<f64> = replicates.iter().map(|r| r.result.rmse).collect();
    let med = median(&rmses)?;
    let closest = replicates
        .iter()
        .min_by(|a, b| {
            (a.result.rmse - med)
                .abs()
                .total_cmp(&(b.result.rmse - med).abs())
                .then(a.replicate.cmp(&b.replicate))
        })
        .expect("non-empty");
    Some(TableRow {
        rmse: med,
        ..TableRow::from_result(algorithm, &closest.result, Some(closest.replicate))
    })
}

/// Runs every arm on every replicate. Replicates run in parallel and are
/// collected by index. Failed fits are listed in `failures` and left out of
/// the medians.
pub fn run_replications(config: &SimulationConfig, arms: &[StudyArm]) -> Result<SimulationReport> {
    config.validate()?;
    for arm in arms {
        arm.spec.validate()?;
        arm.grid.validate(arm.spec.kind)?;
    }
    let per_replicate: Vec<(bool, Vec<Result<EvaluationResult>>)> = (0..config.n_replicates)
        .into_par_iter()
        .map(|r| {
            let x = generate_predictors(config, r as u64);
            let lead = beta_from_largest_eigenvector(&x);
            let mut rng = stream_rng(config.seed, 2 * r as u64 + 1);
            let y = generate_response_with(&mut rng, &x, &lead.beta, config.sigma);
            let data = Dataset { x, y };
            let train = data.select_rows(&(0..config.n_train).collect::<Vec<_>>());
            let test = data.select_rows(&(config.n_train..config.n_total).collect::<Vec<_>>());
            let results = arms
                .iter()
                .map(|arm| grid_search_cv(&train, Validation::Holdout(&test), &arm.spec, &arm.grid))
                .collect();
            (lead.degenerate, results)
        })
        .collect();

    let mut algorithms: Vec<AlgorithmSummary> = arms
        .iter()
        .map(|arm| AlgorithmSummary {
            algorithm: arm.algorithm().to_string(),
            replicates: Vec::with_capacity(config.n_replicates),
            median: None,
        })
        .collect();
    let mut failures = Vec::new();
    let mut degenerate_spectra = Vec::new();
    for (r, (degenerate, results)) in per_replicate.into_iter().enumerate() {
        if degenerate {
            degenerate_spectra.push(r);
        }
        for (summary, res) in algorithms.iter_mut().zip(results) {
            match res {
                Ok(result) => summary.replicates.push(ReplicateResult { replicate: r, result }),
                Err(e) => failures.push(ReplicateFailure {
                    algorithm: summary.algorithm.clone(),
                    replicate: r,
                    message: e.to_string(),
                }),
            }
        }
    }
    for a in &mut algorithms {
        a.median = summarize(&a.algorithm, &a.replicates);
    }
    Ok(SimulationReport {
        config: *config,
        algorithms,
        failures,
        degenerate_spectra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{holdout_evaluate, TRule};
    use glars_oracles as oracle;

    fn small_config() -> SimulationConfig {
        SimulationConfig {
            n_total: 40,
            n_train: 20,
            m: 5,
            rho_collinearity: 0.7,
            sigma: 1.0,
            n_replicates: 3,
            seed: 11,
        }
    }

    #[test]
    fn rho_zero_gives_raw_draws() {
        let mut a = stream_rng(5, 0);
        let x = generate_predictors_with(&mut a, 4, 3, 0.0);
        let mut b = stream_rng(5, 0);
        for i in 0..4 {
            let z: Vec<f64> = (0..4).map(|_| b.sample(StandardNormal)).collect();
            for j in 0..3 {
                assert_eq!(x[(i, j)], z[j]);
            }
        }
    }

    #[test]
    fn near_one_rho_makes_columns_equal() {
        let mut rng = stream_rng(1, 0);
        let x = generate_predictors_with(&mut rng, 200, 3, 0.999_999);
        let c0: Vec<f64> = x.column(0).iter().copied().collect();
        let c2: Vec<f64> = x.column(2).iter().copied().collect();
        assert!(oracle::correlation(&c0, &c2) > 0.999_99);
    }

    #[test]
    fn pairwise_correlation_is_rho_squared() {
        let mut rng = stream_rng(99, 0);
        let m = 5;
        let x = generate_predictors_with(&mut rng, 10_000, m, 0.9);
        let cols: Vec<Vec<f64>> = (0..m).map(|j| x.column(j).iter().copied().collect()).collect();
        let mut total = 0.0;
        let mut count = 0.0;
        for a in 0..m {
            for b in a + 1..m {
                total += oracle::correlation(&cols[a], &cols[b]);
                count += 1.0;
            }
        }
        assert!((total / count - 0.81).abs() < 0.02, "{}", total / count);
    }

    #[test]
    fn column_marginals() {
        let config = SimulationConfig { n_total: 400, n_train: 200, ..small_config() };
        let x = generate_predictors(&config, 0);
        let n = x.nrows() as f64;
        for col in x.column_iter() {
            let mean = col.sum() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!(mean.abs() < 4.0 / n.sqrt());
            assert!((0.8..=1.2).contains(&var), "{var}");
        }
    }

    #[test]
    fn leading_eigenvector_diagonal() {
        let x = DMatrix::from_row_slice(2, 2, &[5f64.sqrt(), 0.0, 0.0, 1.0]);
        let lead = beta_from_largest_eigenvector(&x);
        assert!((lead.beta[0] - 1.0).abs() < 1e-15 && lead.beta[1].abs() < 1e-15);
        assert!(!lead.degenerate);
    }

    #[test]
    fn leading_eigenvector_matches_power_iteration() {
        let config = SimulationConfig { m: 20, n_total: 100, n_train: 50, ..small_config() };
        let x = generate_predictors(&config, 0);
        let lead = beta_from_largest_eigenvector(&x);
        assert!((lead.beta.norm_squared() - 1.0).abs() < 1e-12);
        let rows: oracle::Matrix = (0..100).map(|i| x.row(i).iter().copied().collect()).collect();
        let (_, v) = oracle::power_iteration(&oracle::gram(&rows), 2000);
        let sign = if v.iter().zip(lead.beta.iter()).map(|(a, b)| a * b).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        for (a, b) in v.iter().zip(lead.beta.iter()) {
            assert!((sign * a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn response_noise_and_determinism() {
        let x = DMatrix::from_fn(10, 2, |i, j| (i + j) as f64);
        let beta = DVector::from_vec(vec![0.5, -1.0]);
        assert_eq!(generate_response(&x, &beta, 0.0, 3).unwrap(), &x * &beta);
        assert_eq!(
            generate_response(&x, &beta, 1.0, 3).unwrap(),
            generate_response(&x, &beta, 1.0, 3).unwrap()
        );
        let big = DMatrix::zeros(10_000, 1);
        let y = generate_response(&big, &DVector::zeros(1), 1.0, 8).unwrap();
        let mean = y.mean();
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9_999.0;
        assert!((0.94..=1.06).contains(&var), "{var}");
        assert!(generate_response(&x, &DVector::zeros(3), 1.0, 0).is_err());
    }

    #[test]
    fn median_rules() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn single_replicate_singleton_grid_matches_holdout() {
        let config = SimulationConfig { n_replicates: 1, ..small_config() };
        let spec = EstimatorSpec::liu(0.4);
        let arms = [StudyArm { spec, grid: SearchGrid::singleton(&spec, 0.6) }];
        let report = run_replications(&config, &arms).unwrap();
        let (train, test) = generate_replicate(&config, 0);
        let direct = holdout_evaluate(&train, &test, &spec, 0.6, TRule::BestOnTest).unwrap();
        assert_eq!(report.algorithms[0].replicates[0].result, direct);
        assert_eq!(report.algorithms[0].median.as_ref().unwrap().rmse, direct.rmse);
    }

    #[test]
    fn report_is_reproducible_and_medians_consistent() {
        let config = small_config();
        let arms: Vec<StudyArm> = default_arms()
            .into_iter()
            .map(|mut a| {
                a.grid.alphas = vec![0.5, 1.0];
                a.grid.shrinkages.truncate(2);
                a
            })
            .collect();
        let a = run_replications(&config, &arms).unwrap();
        let b = run_replications(&config, &arms).unwrap();
        assert_eq!(a, b);
        assert!(a.failures.is_empty());
        for s in &a.algorithms {
            assert_eq!(s.replicates.len(), config.n_replicates);
            let rm: Vec<f64> = s.replicates.iter().map(|r| r.result.rmse).collect();
            assert_eq!(s.median.as_ref().unwrap().rmse, median(&rm).unwrap());
        }
        assert_eq!(a.median_table().len(), 8);
        assert_eq!(a.figure_data()[0].1.len(), 3);
    }

    #[test]
    fn invalid_configs() {
        for c in [
            SimulationConfig { n_train: 40, ..small_config() },
            SimulationConfig { m: 1, ..small_config() },
            SimulationConfig { rho_collinearity: 1.0, ..small_config() },
            SimulationConfig { sigma: -1.0, ..small_config() },
        ] {
            assert!(matches!(c.validate(), Err(GlarsError::InvalidConfig(_))));
        }
    }
}
