//! The `glars` command line: fit a path, tune by hold-out or k-fold search,
//! run the Monte Carlo study, run the prostate benchmark and print
//! collinearity diagnostics.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 computational failure.

pub mod boxplot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use glars::data::{self, ReportFormat, TabularDataset};
use glars::selection::{grid_search_cv, SearchGrid, Validation};
use glars::simulation::{run_replications, SimulationConfig, SimulationReport, StudyArm, TableRow};
use glars::{
    run_path, standardize, ComponentRule, Dataset, EstimatorKind, EstimatorSpec, GlarsError, PathEvent,
    ShrinkageParam,
};

#[derive(Debug, Parser)]
#[command(name = "glars", version, about = "Adaptive generalized LARS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one path and write its breakpoints and final coefficients.
    Fit(FitArgs),
    /// Tune alpha, k/d and t on a hold-out set or by k-fold search.
    Cv(CvArgs),
    /// Run the Monte Carlo study on McDonald-Galarneau designs.
    Simulate(SimulateArgs),
    /// Evaluate estimators on the bundled prostate data (67/30 split).
    Prostate(ProstateArgs),
    /// VIFs and condition numbers of a design.
    Diagnostics(DiagnosticsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

/// One estimator by name, or all eight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorChoice {
    All,
    One(EstimatorKind),
}

impl EstimatorChoice {
    pub fn kinds(self) -> Vec<EstimatorKind> {
        match self {
            EstimatorChoice::All => EstimatorKind::ALL.to_vec(),
            EstimatorChoice::One(k) => vec![k],
        }
    }
}

fn parse_estimator(s: &str) -> Result<EstimatorChoice, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(EstimatorChoice::All);
    }
    s.parse::<EstimatorKind>().map(EstimatorChoice::One).map_err(|_| {
        let names: Vec<&str> = EstimatorKind::ALL.iter().map(|k| k.algorithm_name()).collect();
        format!("expected `all` or one of {}", names.join(", "))
    })
}

fn parse_kind(s: &str) -> Result<EstimatorKind, String> {
    match parse_estimator(s)? {
        EstimatorChoice::One(k) => Ok(k),
        EstimatorChoice::All => Err("a single estimator is required".into()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Name of the response column.
    #[arg(long)]
    pub response: String,
    /// Read tab-separated input.
    #[arg(long)]
    pub tab: bool,
}

impl InputArgs {
    fn load(&self) -> Result<TabularDataset, CliError> {
        let delim = if self.tab { b'\t' } else { b',' };
        Ok(data::load_csv(&self.input, &self.response, delim)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ComponentArgs {
    /// Number of principal components (PCRE, r-k, r-d).
    #[arg(long, conflicts_with = "h_threshold")]
    pub h: Option<usize>,
    /// Cumulative eigenvalue share that fixes the number of components.
    #[arg(long)]
    pub h_threshold: Option<f64>,
}

impl ComponentArgs {
    fn rule(&self) -> ComponentRule {
        match (self.h, self.h_threshold) {
            (Some(h), _) => ComponentRule::Count(h),
            (None, Some(t)) => ComponentRule::Threshold(t),
            (None, None) => ComponentRule::default(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated alpha values [default: 0.1,0.2,...,1.0].
    #[arg(long, value_delimiter = ',')]
    pub alpha_grid: Option<Vec<f64>>,
    /// Comma-separated k values [default: 0.1,0.2,...,1.0].
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<f64>>,
    /// Comma-separated d values [default: 0.1,0.2,...,0.9,0.99].
    #[arg(long, value_delimiter = ',')]
    pub d_grid: Option<Vec<f64>>,
    #[command(flatten)]
    pub components: ComponentArgs,
}

impl GridArgs {
    pub fn arm(&self, kind: EstimatorKind) -> StudyArm {
        let mut grid = SearchGrid::default_for(kind);
        if let Some(a) = &self.alpha_grid {
            grid.alphas = a.clone();
        }
        match kind.shrinkage() {
            ShrinkageParam::Ridge => {
                if let Some(k) = &self.k_grid {
                    grid.shrinkages = k.clone();
                }
            }
            ShrinkageParam::Liu => {
                if let Some(d) = &self.d_grid {
                    grid.shrinkages = d.clone();
                }
            }
            ShrinkageParam::None => {}
        }
        StudyArm {
            spec: EstimatorSpec::new(kind).with_components(self.components.rule()),
            grid,
        }
    }

    pub fn arms(&self, choice: EstimatorChoice) -> Vec<StudyArm> {
        choice.kinds().into_iter().map(|k| self.arm(k)).collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_kind, default_value = "adpLARS-LASSO")]
    pub estimator: EstimatorKind,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Ridge parameter (RE, AURE, r-k).
    #[arg(long, default_value_t = 0.5)]
    pub k: f64,
    /// Liu parameter (LE, AULE, r-d).
    #[arg(long, default_value_t = 0.5)]
    pub d: f64,
    #[command(flatten)]
    pub components: ComponentArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Separate test CSV; otherwise the input is split by --train-frac.
    #[arg(long)]
    pub test: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub train_frac: f64,
    /// Use k-fold search on the whole input instead of a hold-out split.
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_parser = parse_estimator, default_value = "all")]
    pub estimator: EstimatorChoice,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Collinearity levels, one study each.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.7,0.9")]
    pub rho: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Observations per replicate.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Predictors.
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    /// Share of each replicate used for fitting.
    #[arg(long, default_value_t = 0.5)]
    pub train_frac: f64,
    #[arg(long, value_parser = parse_estimator, default_value = "all")]
    pub estimator: EstimatorChoice,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write an SVG box plot of the replicate rmse values.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProstateArgs {
    /// Seeded 67/30 split instead of the canonical one.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_estimator, default_value = "all")]
    pub estimator: EstimatorChoice,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnosticsArgs {
    /// CSV file; the bundled prostate data when omitted.
    #[arg(long, requires = "response")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub tab: bool,
    /// Write `diagnostics.csv` or `diagnostics.json` here as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(GlarsError),
    Compute(GlarsError),
    /// Some simulation fits failed; the report was still written.
    ReplicateFailures(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Compute(_) | CliError::ReplicateFailures(_) => 3,
        }
    }
}

impl From<GlarsError> for CliError {
    fn from(e: GlarsError) -> Self {
        if e.is_input_error() {
            CliError::Input(e)
        } else {
            CliError::Compute(e)
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(GlarsError::Io(e))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(e) => write!(f, "input error: {e}"),
            CliError::Compute(e) => write!(f, "computation failed: {e}"),
            CliError::ReplicateFailures(n) => write!(f, "{n} replicate fits failed"),
        }
    }
}

impl std::error::Error for CliError {}

/// Caps the global rayon pool at `GLARS_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("GLARS_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("GLARS_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(CliError::Usage("GLARS_THREADS must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Cv(a) => cmd_cv(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Prostate(a) => cmd_prostate(&a).map(|(_, files)| files),
        Command::Diagnostics(a) => cmd_diagnostics(&a),
    }
}

fn f5(v: f64) -> String {
    format!("{v:.5}")
}

fn event_fields(e: PathEvent, names: &[String]) -> (&'static str, String) {
    match e {
        PathEvent::Enter(j) => ("enter", names[j].clone()),
        PathEvent::Drop(j) => ("drop", names[j].clone()),
        PathEvent::Terminal => ("terminal", String::new()),
    }
}

#[derive(serde::Serialize)]
struct FitJson<'a> {
    estimator: EstimatorSpec,
    alpha: f64,
    columns: &'a [String],
    response: &'a str,
    weights: &'a [f64],
    termination: String,
    steps: Vec<FitStepJson>,
    beta_adaptive: &'a [f64],
    beta_original: &'a [f64],
    intercept: f64,
}

#[derive(serde::Serialize)]
struct FitStepJson {
    step: usize,
    event: String,
    variable: Option<usize>,
    rho: f64,
    t: f64,
    active: Vec<usize>,
    beta_adaptive: Vec<f64>,
}

/// Writes `fit_path` and `fit_coefficients` (csv) or `fit.json`.
pub fn cmd_fit(a: &FitArgs) -> Result<Vec<PathBuf>, CliError> {
    let table = a.input.load()?;
    let spec = EstimatorSpec::new(a.estimator)
        .with_components(a.components.rule())
        .with_shrinkage(match a.estimator.shrinkage() {
            ShrinkageParam::Ridge => a.k,
            ShrinkageParam::Liu => a.d,
            ShrinkageParam::None => 0.0,
        });
    spec.validate()?;
    if !(a.alpha > 0.0) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {}", a.alpha)));
    }
    let std = standardize(&table.x_raw, &table.y_raw)?;
    let path = run_path(&std, &spec, a.alpha)?;
    let names = &table.column_names;
    fs::create_dir_all(&a.output.out)?;

    let mut files = Vec::new();
    match a.output.format {
        Format::Csv => {
            let p = a.output.out.join("fit_path.csv");
            let mut w = csv::Writer::from_path(&p).map_err(GlarsError::from)?;
            let mut header: Vec<String> = ["step", "event", "variable", "rho", "t", "nonzero"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            header.extend(names.iter().cloned());
            w.write_record(&header).map_err(GlarsError::from)?;
            for s in &path.steps {
                let (ev, var) = event_fields(s.event, names);
                let adaptive = path.adaptive_from_scaled(&s.beta_scaled);
                let nonzero = adaptive.iter().filter(|b| **b != 0.0).count();
                let mut rec = vec![s.step_index.to_string(), ev.into(), var, f5(s.rho), f5(s.t_weighted), nonzero.to_string()];
                rec.extend(adaptive.iter().map(|b| f5(*b)));
                w.write_record(&rec).map_err(GlarsError::from)?;
            }
            w.flush()?;
            files.push(p);

            let p = a.output.out.join("fit_coefficients.csv");
            let mut w = csv::Writer::from_path(&p).map_err(GlarsError::from)?;
            w.write_record(["term", "weight", "adaptive", "original"]).map_err(GlarsError::from)?;
            w.write_record(["(intercept)", "", "", &f5(path.final_intercept)])
                .map_err(GlarsError::from)?;
            for j in 0..names.len() {
                w.write_record([
                    names[j].clone(),
                    f5(path.weights.w[j]),
                    f5(path.final_beta_adaptive[j]),
                    f5(path.final_beta_original[j]),
                ])
                .map_err(GlarsError::from)?;
            }
            w.flush()?;
            files.push(p);
        }
        Format::Json => {
            let steps = path
                .steps
                .iter()
                .map(|s| {
                    let (event, variable) = match s.event {
                        PathEvent::Enter(j) => ("enter", Some(j)),
                        PathEvent::Drop(j) => ("drop", Some(j)),
                        PathEvent::Terminal => ("terminal", None),
                    };
                    FitStepJson {
                        step: s.step_index,
                        event: event.into(),
                        variable,
                        rho: s.rho,
                        t: s.t_weighted,
                        active: s.active.clone(),
                        beta_adaptive: path.adaptive_from_scaled(&s.beta_scaled),
                    }
                })
                .collect();
            let out = FitJson {
                estimator: spec,
                alpha: a.alpha,
                columns: names,
                response: &table.response_name,
                weights: &path.weights.w,
                termination: format!("{:?}", path.termination),
                steps,
                beta_adaptive: &path.final_beta_adaptive,
                beta_original: &path.final_beta_original,
                intercept: path.final_intercept,
            };
            let p = a.output.out.join("fit.json");
            write_json(&out, &p)?;
            files.push(p);
        }
    }
    println!("{} breakpoints, termination {:?}", path.steps.len(), path.termination);
    println!("{:<12} {:>12} {:>12}", "term", "adaptive", "original");
    println!("{:<12} {:>12} {:>12}", "(intercept)", "", f5(path.final_intercept));
    for j in 0..names.len() {
        println!(
            "{:<12} {:>12} {:>12}",
            names[j],
            f5(path.final_beta_adaptive[j]),
            f5(path.final_beta_original[j])
        );
    }
    Ok(files)
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(value).map_err(GlarsError::from)?;
    fs::write(path, body + "\n")?;
    Ok(())
}

fn print_table(rows: &[TableRow]) {
    println!(
        "{:<16} {:>9} {:>9} {:>9} {:>10} {:>9}",
        "Algorithm", "RMSE", "(k;d)", "alpha", "t", "Selected"
    );
    for r in rows {
        println!(
            "{:<16} {:>9} {:>9} {:>9} {:>10} {:>9}",
            r.algorithm,
            f5(r.rmse),
            r.shrinkage.map_or("-".into(), f5),
            f5(r.alpha),
            f5(r.t),
            r.selected
        );
    }
}

/// Tunes each arm and returns one table row per arm.
fn evaluate_arms(train: &Dataset, validation: Validation<'_>, arms: &[StudyArm]) -> Result<Vec<TableRow>, CliError> {
    arms.iter()
        .map(|arm| {
            let r = grid_search_cv(train, validation, &arm.spec, &arm.grid)?;
            Ok(TableRow::from_result(arm.algorithm(), &r, None))
        })
        .collect()
}

pub fn cmd_cv(a: &CvArgs) -> Result<Vec<PathBuf>, CliError> {
    let table = a.input.load()?;
    let arms = a.grid.arms(a.estimator);
    let rows = match (a.folds, &a.test) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--folds and --test are exclusive".into())),
        (Some(folds), None) => evaluate_arms(&table.to_dataset(), Validation::KFold { folds }, &arms)?,
        (None, Some(test_path)) => {
            let delim = if a.input.tab { b'\t' } else { b',' };
            let test = data::load_csv(test_path, &a.input.response, delim)?;
            if test.column_names != table.column_names {
                return Err(CliError::Usage("test file columns differ from the input".into()));
            }
            evaluate_arms(&table.to_dataset(), Validation::Holdout(&test.to_dataset()), &arms)?
        }
        (None, None) => {
            if !(a.train_frac > 0.0 && a.train_frac < 1.0) {
                return Err(CliError::Usage(format!("--train-frac {} outside (0, 1)", a.train_frac)));
            }
            let n = table.n();
            let n_train = ((n as f64) * a.train_frac).round() as usize;
            let (tr, te) = data::seeded_split(n, n_train, a.seed);
            let full = table.to_dataset();
            evaluate_arms(&full.select_rows(&tr), Validation::Holdout(&full.select_rows(&te)), &arms)?
        }
    };
    print_table(&rows);
    Ok(vec![data::write_rows(&rows, a.output.format.into(), &a.output.out, "cv")?])
}

/// File prefix for one collinearity level, e.g. `sim_rho0.90`.
pub fn simulation_prefix(rho: f64) -> String {
    format!("sim_rho{rho:.2}")
}

pub fn simulation_config(a: &SimulateArgs, rho: f64) -> Result<SimulationConfig, CliError> {
    if !(a.train_frac > 0.0 && a.train_frac < 1.0) {
        return Err(CliError::Usage(format!("--train-frac {} outside (0, 1)", a.train_frac)));
    }
    let config = SimulationConfig {
        n_total: a.n,
        n_train: ((a.n as f64) * a.train_frac).round() as usize,
        m: a.m,
        rho_collinearity: rho,
        sigma: a.sigma,
        n_replicates: a.replicates,
        seed: a.seed,
    };
    config.validate()?;
    Ok(config)
}

/// Runs one study per collinearity level and writes its report files.
pub fn run_simulations(a: &SimulateArgs) -> Result<(Vec<SimulationReport>, Vec<PathBuf>), CliError> {
    let arms = a.grid.arms(a.estimator);
    let mut reports = Vec::new();
    let mut files = Vec::new();
    for &rho in &a.rho {
        let config = simulation_config(a, rho)?;
        let report = run_replications(&config, &arms)?;
        let prefix = simulation_prefix(rho);
        files.extend(data::write_report(&report, a.output.format.into(), &a.output.out, &prefix)?);
        if a.svg {
            let p = a.output.out.join(format!("{prefix}_boxplot.svg"));
            fs::write(&p, boxplot::render(&report.figure_data(), &format!("rho = {rho}")))?;
            files.push(p);
        }
        println!("rho = {rho}, {} replicates, sigma = {}", config.n_replicates, config.sigma);
        print_table(&report.median_table());
        reports.push(report);
    }
    Ok((reports, files))
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Vec<PathBuf>, CliError> {
    let (reports, files) = run_simulations(a)?;
    let failed: usize = reports.iter().map(|r| r.failures.len()).sum();
    for r in &reports {
        for f in &r.failures {
            eprintln!("replicate {} {}: {}", f.replicate, f.algorithm, f.message);
        }
    }
    if failed > 0 {
        return Err(CliError::ReplicateFailures(failed));
    }
    Ok(files)
}

/// Tunes the chosen estimators on the prostate split; returns the table rows
/// and the written file.
pub fn cmd_prostate(a: &ProstateArgs) -> Result<(Vec<TableRow>, Vec<PathBuf>), CliError> {
    let (train, test) = data::load_prostate(a.seed)?;
    let arms = a.grid.arms(a.estimator);
    let rows = evaluate_arms(&train.to_dataset(), Validation::Holdout(&test.to_dataset()), &arms)?;
    print_table(&rows);
    let file = data::write_rows(&rows, a.output.format.into(), &a.output.out, "prostate")?;
    Ok((rows, vec![file]))
}

pub fn cmd_diagnostics(a: &DiagnosticsArgs) -> Result<Vec<PathBuf>, CliError> {
    let table = match (&a.input, &a.response) {
        (Some(input), Some(response)) => InputArgs {
            input: input.clone(),
            response: response.clone(),
            tab: a.tab,
        }
        .load()?,
        _ => data::prostate_full()?,
    };
    let d = data::diagnostics(&table.x_raw)?;
    let vif_text = |v: f64| if v.is_finite() { f5(v) } else { "inf".into() };
    println!("{:<12} {:>10}", "column", "VIF");
    for (name, v) in table.column_names.iter().zip(&d.vif) {
        println!("{:<12} {:>10}", name, vif_text(*v));
    }
    println!("condition number (standardized) {}", f5(d.condition_number));
    println!("condition number (raw)          {}", f5(d.condition_number_raw));
    println!("condition number (centered)     {}", f5(d.condition_number_centered));
    let Some(out) = &a.out else {
        return Ok(Vec::new());
    };
    fs::create_dir_all(out)?;
    let p = match a.format {
        Format::Csv => {
            let p = out.join("diagnostics.csv");
            let mut w = csv::Writer::from_path(&p).map_err(GlarsError::from)?;
            w.write_record(["quantity", "value"]).map_err(GlarsError::from)?;
            for (name, v) in table.column_names.iter().zip(&d.vif) {
                w.write_record([format!("vif_{name}"), vif_text(*v)]).map_err(GlarsError::from)?;
            }
            for (k, v) in [
                ("condition_number", d.condition_number),
                ("condition_number_raw", d.condition_number_raw),
                ("condition_number_centered", d.condition_number_centered),
            ] {
                w.write_record([k.to_string(), f5(v)]).map_err(GlarsError::from)?;
            }
            w.flush()?;
            p
        }
        Format::Json => {
            let p = out.join("diagnostics.json");
            write_json(&d, &p)?;
            p
        }
    };
    Ok(vec![p])
}
