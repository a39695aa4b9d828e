//! The adaptive generalized LARS path.
//!
//! Pipeline: standardize the data, derive adaptive weights from the chosen
//! biased estimator, divide each column by its weight, then trace a LARS-style
//! piecewise-linear path in which the least-squares equiangular direction is
//! replaced by `u = G_E (E'X'XE)⁻¹ E'X'r`. Coefficients are reported back on
//! the standardized scale (`β / w`) and on the raw data scale with an
//! intercept.
//!
//! Step lengths are expressed as a fraction `rho` of the full direction, so a
//! segment with `rho = 1` reaches the (transformed) least-squares fit on the
//! active set. Entry candidates use raw inner products `c_j = X_j'r` and
//! `a_j = X_j'Xu`:
//!
//! ```text
//! rho± = (C ∓ c_j) / (C ∓ a_j),   C = max over active |c_k|
//! ```
//!
//! and a drop happens at `rho* = −β_j / u_j` when an active coefficient would
//! change sign within the segment.

use nalgebra::{DMatrix, DVector};

use crate::error::{GlarsError, Result};
use crate::estimators::{embed_rows, fit_biased, shrinkage_operator, EstimatorSpec};
use crate::linalg::{GramMatrix, SpdFactor};

/// Smallest |β̂_G,j| used when forming weights.
pub const WEIGHT_CLAMP_FLOOR: f64 = 1e-8;
const MIN_SD: f64 = 1e-12;
const RHO_EPS: f64 = 1e-12;
const TIE_TOL: f64 = 1e-12;

/// Centered response and predictors scaled to mean 0, sd 1 (divisor n).
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedDataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub col_means: Vec<f64>,
    pub col_sds: Vec<f64>,
    pub y_mean: f64,
}

impl StandardizedDataset {
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Applies the stored column statistics to new rows.
    pub fn transform_x(&self, x_new: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x_new.ncols() != self.p() {
            return Err(GlarsError::DimensionMismatch(format!(
                "expected {} columns, got {}",
                self.p(),
                x_new.ncols()
            )));
        }
        Ok(DMatrix::from_fn(x_new.nrows(), x_new.ncols(), |i, j| {
            (x_new[(i, j)] - self.col_means[j]) / self.col_sds[j]
        }))
    }

    /// Undoes the predictor standardization.
    pub fn restore_x(&self, x_std: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(x_std.nrows(), x_std.ncols(), |i, j| {
            x_std[(i, j)] * self.col_sds[j] + self.col_means[j]
        })
    }

    pub fn summary(&self) -> StandardizationSummary {
        StandardizationSummary {
            col_means: self.col_means.clone(),
            col_sds: self.col_sds.clone(),
            y_mean: self.y_mean,
            n: self.n(),
            p: self.p(),
        }
    }
}

/// Statistics needed to map standardized coefficients back to the raw scale.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizationSummary {
    pub col_means: Vec<f64>,
    pub col_sds: Vec<f64>,
    pub y_mean: f64,
    pub n: usize,
    pub p: usize,
}

pub fn standardize(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<StandardizedDataset> {
    let (n, p) = x.shape();
    if n < 2 {
        return Err(GlarsError::TooFewRows(n));
    }
    if y.len() != n {
        return Err(GlarsError::DimensionMismatch(format!(
            "{n} rows in X but {} responses",
            y.len()
        )));
    }
    let nf = n as f64;
    let mut col_means = Vec::with_capacity(p);
    let mut col_sds = Vec::with_capacity(p);
    for (j, col) in x.column_iter().enumerate() {
        let mean = col.sum() / nf;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;
        let sd = var.sqrt();
        if !(sd > MIN_SD) {
            return Err(GlarsError::ConstantColumn(j));
        }
        col_means.push(mean);
        col_sds.push(sd);
    }
    let y_mean = y.sum() / nf;
    let xs = DMatrix::from_fn(n, p, |i, j| (x[(i, j)] - col_means[j]) / col_sds[j]);
    let yc = y.map(|v| v - y_mean);
    Ok(StandardizedDataset {
        x: xs,
        y: yc,
        col_means,
        col_sds,
        y_mean,
    })
}

/// `w_j = max(|β̂_G,j|, floor)^(−alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveWeights {
    pub w: Vec<f64>,
    pub alpha: f64,
    pub clamp_floor: f64,
    pub source_spec: EstimatorSpec,
}

impl AdaptiveWeights {
    pub fn from_coefficients(beta: &[f64], alpha: f64, source_spec: EstimatorSpec) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(GlarsError::InvalidParameter(format!("alpha = {alpha} must be > 0")));
        }
        let w = beta
            .iter()
            .map(|b| b.abs().max(WEIGHT_CLAMP_FLOOR).powf(-alpha))
            .collect();
        Ok(Self {
            w,
            alpha,
            clamp_floor: WEIGHT_CLAMP_FLOOR,
            source_spec,
        })
    }

    /// Unit weights; turns the path into a plain (non-adaptive) GLARS path.
    pub fn uniform(p: usize, source_spec: EstimatorSpec) -> Self {
        Self {
            w: vec![1.0; p],
            alpha: 1.0,
            clamp_floor: WEIGHT_CLAMP_FLOOR,
            source_spec,
        }
    }
}

pub fn compute_weights(std: &StandardizedDataset, spec: &EstimatorSpec, alpha: f64) -> Result<AdaptiveWeights> {
    let beta = fit_biased(&std.x, &std.y, spec)?;
    AdaptiveWeights::from_coefficients(beta.as_slice(), alpha, *spec)
}

/// A design whose column j has been divided by `w_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledDesign {
    x: DMatrix<f64>,
    weights: Vec<f64>,
}

impl ScaledDesign {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn unscale(&self) -> DMatrix<f64> {
        let mut x = self.x.clone();
        for (mut col, w) in x.column_iter_mut().zip(&self.weights) {
            col *= *w;
        }
        x
    }
}

pub fn scale_columns(x: &DMatrix<f64>, weights: &AdaptiveWeights) -> ScaledDesign {
    let mut xs = x.clone();
    for (mut col, w) in xs.column_iter_mut().zip(&weights.w) {
        col /= *w;
    }
    ScaledDesign {
        x: xs,
        weights: weights.w.clone(),
    }
}

/// Variables currently allowed nonzero coefficients, in entry order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    indices: Vec<usize>,
    p: usize,
}

impl ActiveSet {
    pub fn new(p: usize) -> Self {
        Self { indices: Vec::new(), p }
    }

    pub fn from_indices(indices: Vec<usize>, p: usize) -> Result<Self> {
        crate::estimators::validate_active(&indices, p)?;
        Ok(Self { indices, p })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.contains(&j)
    }

    fn insert(&mut self, j: usize) {
        debug_assert!(j < self.p && !self.contains(j));
        self.indices.push(j);
    }

    fn remove(&mut self, j: usize) {
        self.indices.retain(|&k| k != j);
    }

    /// The p x q selector `E` with columns `e_j`.
    pub fn embedding(&self) -> DMatrix<f64> {
        let mut e = DMatrix::zeros(self.p, self.indices.len());
        for (c, &j) in self.indices.iter().enumerate() {
            e[(j, c)] = 1.0;
        }
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEvent {
    Enter(usize),
    Drop(usize),
    Terminal,
}

/// One breakpoint. `rho` and `direction` describe the segment that ends here;
/// `active` is the set in force after the event.
#[derive(Debug, Clone, PartialEq)]
pub struct PathStep {
    pub step_index: usize,
    pub active: Vec<usize>,
    pub beta_scaled: Vec<f64>,
    pub rho: f64,
    pub direction: Vec<f64>,
    pub event: PathEvent,
    /// `Σ |β_scaled,j|`, i.e. the weighted L1 norm of the adaptive coefficients.
    pub t_weighted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// A segment ran to `rho = 1`.
    Complete,
    /// `max_steps` reached; the path is partial.
    MaxSteps,
    /// The last entry made the active gram numerically singular; the path
    /// ends at that breakpoint.
    CollinearActiveSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathOptions {
    /// No entries once this many variables are active.
    pub max_active: usize,
    /// Upper bound on movement steps.
    pub max_steps: usize,
}

impl PathOptions {
    /// `min(n − 1, p)` active variables and `8p` steps.
    pub fn for_shape(n: usize, p: usize) -> Self {
        Self {
            max_active: n.saturating_sub(1).min(p).max(1),
            max_steps: 8 * p.max(1),
        }
    }
}

/// Breakpoints of a path traced directly on a (scaled) design.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTrace {
    pub steps: Vec<PathStep>,
    pub termination: Termination,
}

/// `u = G_E (E'X'XE)⁻¹ E'X'r` on the full p-dimensional coefficient space.
pub fn compute_direction(
    x_scaled: &DMatrix<f64>,
    residual: &DVector<f64>,
    active: &ActiveSet,
    spec: &EstimatorSpec,
) -> Result<DVector<f64>> {
    let gram = GramMatrix::from_design(x_scaled);
    let c = x_scaled.tr_mul(residual);
    direction_from(&gram, &c, active.indices(), spec)
}

fn direction_from(
    gram: &GramMatrix,
    c: &DVector<f64>,
    active: &[usize],
    spec: &EstimatorSpec,
) -> Result<DVector<f64>> {
    if active.is_empty() {
        return Err(GlarsError::DimensionMismatch("active set is empty".into()));
    }
    let q = active.len();
    let restricted = gram.restrict(active);
    let spec_e = spec.with_components(spec.components.capped(q));
    let core = shrinkage_operator(&spec_e, &restricted)?;
    let c_active = DVector::from_iterator(q, active.iter().map(|&j| c[j]));
    let ls = SpdFactor::new(restricted.matrix())?.solve_vec(&c_active);
    let u_active = core * ls;
    let u = embed_rows(&DMatrix::from_column_slice(q, 1, u_active.as_slice()), active, gram.dim());
    Ok(u.column(0).into_owned())
}

/// Fraction of `u` to travel before the next entry or drop, with the event.
pub fn step_length(
    x_scaled: &DMatrix<f64>,
    residual: &DVector<f64>,
    active: &ActiveSet,
    u: &DVector<f64>,
    beta_current: &DVector<f64>,
) -> Result<(f64, PathEvent)> {
    if u.iter().all(|v| *v == 0.0) {
        return Err(GlarsError::ZeroDirection);
    }
    let c = x_scaled.tr_mul(residual);
    let a = x_scaled.tr_mul(&(x_scaled * u));
    Ok(next_breakpoint(&c, &a, active, u, beta_current, true, None))
}

fn next_breakpoint(
    c: &DVector<f64>,
    a: &DVector<f64>,
    active: &ActiveSet,
    u: &DVector<f64>,
    beta: &DVector<f64>,
    can_enter: bool,
    excluded: Option<usize>,
) -> (f64, PathEvent) {
    let cmax = active.indices().iter().map(|&k| c[k].abs()).fold(0.0, f64::max);
    let mut best: Option<(f64, usize, PathEvent)> = None;
    let mut consider = |rho: f64, j: usize, event: PathEvent| {
        if !(rho > RHO_EPS && rho <= 1.0) {
            return;
        }
        let replace = match best {
            None => true,
            Some((b, bj, _)) => rho < b - TIE_TOL || ((rho - b).abs() <= TIE_TOL && j < bj),
        };
        if replace {
            best = Some((rho, j, event));
        }
    };
    if can_enter {
        for j in (0..c.len()).filter(|&j| !active.contains(j) && Some(j) != excluded) {
            for (num, den) in [(cmax - c[j], cmax - a[j]), (cmax + c[j], cmax + a[j])] {
                if den != 0.0 {
                    consider(num / den, j, PathEvent::Enter(j));
                }
            }
        }
    }
    for &j in active.indices() {
        if beta[j] != 0.0 && u[j] != 0.0 {
            consider(-beta[j] / u[j], j, PathEvent::Drop(j));
        }
    }
    match best {
        Some((rho, _, event)) => (rho, event),
        None => (1.0, PathEvent::Terminal),
    }
}

fn argmax_abs(c: &DVector<f64>, skip: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in c.iter().enumerate() {
        if skip(j) {
            continue;
        }
        if best.map_or(true, |(_, b)| v.abs() > b) {
            best = Some((j, v.abs()));
        }
    }
    best
}

fn l1(v: &DVector<f64>) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Traces the path on an already scaled design `x` and centered response `y`.
pub fn lars_path(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    spec: &EstimatorSpec,
    options: PathOptions,
) -> Result<PathTrace> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(GlarsError::DimensionMismatch(format!("{n} rows in X but {} responses", y.len())));
    }
    spec.validate()?;
    let gram = GramMatrix::from_design(x);
    let mut beta = DVector::zeros(p);
    let mut r = y.clone();
    let mut active = ActiveSet::new(p);
    let mut steps = Vec::new();

    let c0 = x.tr_mul(&r);
    match argmax_abs(&c0, |_| false) {
        Some((j, cmax)) if cmax > 0.0 => {
            active.insert(j);
            steps.push(PathStep {
                step_index: 0,
                active: active.indices().to_vec(),
                beta_scaled: vec![0.0; p],
                rho: 0.0,
                direction: vec![0.0; p],
                event: PathEvent::Enter(j),
                t_weighted: 0.0,
            });
        }
        _ => {
            steps.push(PathStep {
                step_index: 0,
                active: Vec::new(),
                beta_scaled: vec![0.0; p],
                rho: 1.0,
                direction: vec![0.0; p],
                event: PathEvent::Terminal,
                t_weighted: 0.0,
            });
            return Ok(PathTrace { steps, termination: Termination::Complete });
        }
    }

    let mut excluded = None;
    loop {
        if steps.len() > options.max_steps {
            return Ok(PathTrace { steps, termination: Termination::MaxSteps });
        }
        let c = x.tr_mul(&r);
        let u = match direction_from(&gram, &c, active.indices(), spec) {
            Ok(u) => u,
            Err(GlarsError::SingularGram { .. }) if steps.len() > 1 => {
                return Ok(PathTrace { steps, termination: Termination::CollinearActiveSet });
            }
            Err(e) => return Err(e),
        };
        let (rho, event) = if u.iter().all(|v| *v == 0.0) {
            // residual already orthogonal to the active columns
            (1.0, PathEvent::Terminal)
        } else {
            let a = gram.matrix() * &u;
            let can_enter = active.len() < options.max_active;
            next_breakpoint(&c, &a, &active, &u, &beta, can_enter, excluded)
        };
        beta.axpy(rho, &u, 1.0);
        r.axpy(-rho, &(x * &u), 1.0);
        excluded = None;
        match event {
            PathEvent::Enter(j) => active.insert(j),
            PathEvent::Drop(j) => {
                beta[j] = 0.0;
                active.remove(j);
                excluded = Some(j);
                if active.is_empty() {
                    // only reachable with non-least-squares transforms
                    let c = x.tr_mul(&r);
                    match argmax_abs(&c, |k| k == j) {
                        Some((k, v)) if v > 0.0 => active.insert(k),
                        _ => {
                            steps.push(make_step(steps.len(), &active, &beta, rho, &u, event));
                            return Ok(PathTrace { steps, termination: Termination::Complete });
                        }
                    }
                }
            }
            PathEvent::Terminal => {}
        }
        steps.push(make_step(steps.len(), &active, &beta, rho, &u, event));
        if event == PathEvent::Terminal {
            return Ok(PathTrace { steps, termination: Termination::Complete });
        }
    }
}

fn make_step(
    index: usize,
    active: &ActiveSet,
    beta: &DVector<f64>,
    rho: f64,
    u: &DVector<f64>,
    event: PathEvent,
) -> PathStep {
    PathStep {
        step_index: index,
        active: active.indices().to_vec(),
        beta_scaled: beta.as_slice().to_vec(),
        rho,
        direction: u.as_slice().to_vec(),
        event,
        t_weighted: l1(beta),
    }
}

/// A complete adaptive path with everything needed to report coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPath {
    pub steps: Vec<PathStep>,
    pub weights: AdaptiveWeights,
    pub standardization: StandardizationSummary,
    /// `β / w` at the last breakpoint, standardized scale.
    pub final_beta_adaptive: Vec<f64>,
    /// Raw-scale slopes at the last breakpoint.
    pub final_beta_original: Vec<f64>,
    pub final_intercept: f64,
    pub termination: Termination,
}

/// A point on the path: scaled coefficients and their weighted L1 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint {
    pub beta_scaled: Vec<f64>,
    pub t: f64,
}

impl CoefficientPath {
    pub fn terminal_t(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.t_weighted)
    }

    pub fn max_t(&self) -> f64 {
        self.steps.iter().map(|s| s.t_weighted).fold(0.0, f64::max)
    }

    pub fn adaptive_from_scaled(&self, beta_scaled: &[f64]) -> Vec<f64> {
        beta_scaled.iter().zip(&self.weights.w).map(|(b, w)| b / w).collect()
    }

    /// Raw-scale slopes and intercept.
    pub fn original_from_scaled(&self, beta_scaled: &[f64]) -> (Vec<f64>, f64) {
        self.original_from_adaptive(&self.adaptive_from_scaled(beta_scaled))
    }

    /// Raw-scale slopes and intercept from standardized-scale coefficients.
    pub fn original_from_adaptive(&self, beta_adaptive: &[f64]) -> (Vec<f64>, f64) {
        let s = &self.standardization;
        let slopes: Vec<f64> = beta_adaptive.iter().zip(&s.col_sds).map(|(b, sd)| b / sd).collect();
        let intercept = s.y_mean - slopes.iter().zip(&s.col_means).map(|(b, m)| b * m).sum::<f64>();
        (slopes, intercept)
    }

    /// Adaptive-scale coefficients at weighted L1 norm `t`, linearly
    /// interpolated inside the first segment that brackets `t`.
    pub fn coefficients_at(&self, t: f64) -> Result<Vec<f64>> {
        let max = self.max_t();
        if !(t >= 0.0) || t > max * (1.0 + 1e-12) {
            return Err(GlarsError::OutOfRange { t, max });
        }
        if let Some(step) = self.steps.iter().find(|s| s.t_weighted == t) {
            return Ok(self.adaptive_from_scaled(&step.beta_scaled));
        }
        for pair in self.steps.windows(2) {
            let (t0, t1) = (pair[0].t_weighted, pair[1].t_weighted);
            if t >= t0.min(t1) && t <= t0.max(t1) {
                let frac = (t - t0) / (t1 - t0);
                let beta = interpolate(&pair[0].beta_scaled, &pair[1].beta_scaled, frac);
                return Ok(self.adaptive_from_scaled(&beta));
            }
        }
        // t within round-off above the maximum
        let last = self
            .steps
            .iter()
            .max_by(|a, b| a.t_weighted.total_cmp(&b.t_weighted))
            .expect("path has at least one step");
        Ok(self.adaptive_from_scaled(&last.beta_scaled))
    }

    /// Every breakpoint and the midpoint of every segment, in path order.
    pub fn candidate_points(&self) -> Vec<PathPoint> {
        let mut out = Vec::with_capacity(2 * self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                let beta = interpolate(&self.steps[i - 1].beta_scaled, &step.beta_scaled, 0.5);
                let t = beta.iter().map(|b| b.abs()).sum();
                out.push(PathPoint { beta_scaled: beta, t });
            }
            out.push(PathPoint {
                beta_scaled: step.beta_scaled.clone(),
                t: step.t_weighted,
            });
        }
        out
    }
}

fn interpolate(a: &[f64], b: &[f64], frac: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + frac * (y - x)).collect()
}

/// Standardized data → weights → scaled design → path → back-transform.
///
/// Returns `NonConvergence` carrying the partial path when the step limit is
/// hit.
pub fn run_path(std: &StandardizedDataset, spec: &EstimatorSpec, alpha: f64) -> Result<CoefficientPath> {
    let weights = compute_weights(std, spec, alpha)?;
    run_path_with_weights(std, spec, weights)
}

/// As [`run_path`] with caller-supplied weights.
pub fn run_path_with_weights(
    std: &StandardizedDataset,
    spec: &EstimatorSpec,
    weights: AdaptiveWeights,
) -> Result<CoefficientPath> {
    if weights.w.len() != std.p() {
        return Err(GlarsError::DimensionMismatch(format!(
            "{} weights for {} predictors",
            weights.w.len(),
            std.p()
        )));
    }
    let scaled = scale_columns(&std.x, &weights);
    let trace = lars_path(scaled.matrix(), &std.y, spec, PathOptions::for_shape(std.n(), std.p()))?;
    let mut path = CoefficientPath {
        steps: trace.steps,
        weights,
        standardization: std.summary(),
        final_beta_adaptive: Vec::new(),
        final_beta_original: Vec::new(),
        final_intercept: 0.0,
        termination: trace.termination,
    };
    let last = path.steps.last().expect("non-empty path").beta_scaled.clone();
    path.final_beta_adaptive = path.adaptive_from_scaled(&last);
    let (orig, intercept) = path.original_from_scaled(&last);
    path.final_beta_original = orig;
    path.final_intercept = intercept;
    match path.termination {
        Termination::Complete | Termination::CollinearActiveSet => Ok(path),
        Termination::MaxSteps => Err(GlarsError::NonConvergence {
            steps: path.steps.len(),
            partial: Box::new(path),
        }),
    }
}
