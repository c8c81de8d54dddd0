//! Experiment runner behind the `rgpucb` binary.
//!
//! Commands return [`CliError`]; configuration problems map to exit code 2
//! and runtime failures to exit code 1.

pub mod config;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rgpucb::experiment::{aggregate, aggregate_series, prior_function_check, run_repeats, BoundReport};
use rgpucb::sampling::RngStream;
use serde::Serialize;

use config::{BoundConfig, RunConfig, Settings, BOUND_KEYS, RUN_KEYS};
use output::{LabelledAggregate, Manifest, MethodSummary, MethodTraces};

pub const DEFAULT_SWEEP_THETAS: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments.
    Config(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default)]
pub struct CommonArgs {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub overrides: Vec<String>,
}

impl CommonArgs {
    fn settings(&self, allowed: &[&str]) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path, allowed)?,
            None => Settings::default(),
        };
        s.apply_overrides(&self.overrides, allowed)?;
        if let Some(seed) = self.seed {
            s.set_seed(seed);
        }
        Ok(s)
    }

    fn jobs(&self) -> Result<usize, CliError> {
        if self.jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        Ok(self.jobs)
    }

    fn out_dir(&self, default: &str) -> anyhow::Result<PathBuf> {
        output::ensure_dir(self.out.as_deref().unwrap_or(Path::new(default)))
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: String,
}

fn summary_of(a: &LabelledAggregate) -> MethodSummary {
    MethodSummary {
        method: a.method.clone(),
        theta: a.theta,
        final_mean: a.aggregate.final_mean(),
        final_std: a.aggregate.final_std(),
        summary: a.aggregate.summary(),
    }
}

fn file_names(files: &[PathBuf]) -> Vec<String> {
    files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect()
}

/// `run`: every configured method, all repeats; writes traces, aggregates
/// and a manifest.
pub fn run(args: &CommonArgs) -> Result<Outcome, CliError> {
    let config = RunConfig::resolve(&args.settings(&RUN_KEYS)?)?;
    let jobs = args.jobs()?;
    let out = args.out_dir("rgpucb-run")?;
    let problem = config.benchmark()?;

    let mut all = Vec::new();
    for m in &config.methods {
        let exp = config.experiment(m)?;
        let traces = run_repeats(&exp, jobs).with_context(|| format!("method {m}"))?;
        all.push((m.as_str(), exp.method.theta(), traces));
    }
    let runs: Vec<MethodTraces<'_>> = all
        .iter()
        .map(|(m, theta, traces)| MethodTraces {
            method: m,
            theta: *theta,
            repeats: traces,
        })
        .collect();
    let aggs = all
        .iter()
        .map(|(m, theta, traces)| {
            Ok(LabelledAggregate {
                problem: config.problem.clone(),
                method: m.to_string(),
                theta: *theta,
                aggregate: aggregate(traces)?,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let files = vec![
        out.join(output::TRACE_FILE),
        out.join(output::AGGREGATE_FILE),
        out.join(output::MANIFEST_FILE),
    ];
    output::write_traces(&files[0], &config.problem, problem.dimension(), &runs)?;
    output::write_aggregates(&files[1], &aggs)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "run",
        base_seed: config.seed,
        timestamp: output::unix_timestamp(),
        config: &config,
        thetas: None,
        design: output::DesignNotes::current(),
        files: file_names(&files),
        summary: aggs.iter().map(summary_of).collect(),
    };
    output::write_json(&files[2], &manifest)?;

    let report = aggs
        .iter()
        .map(|a| format!("{} {}: final best {}\n", a.problem, method_label(&a.method, a.theta), a.aggregate.summary()))
        .collect();
    Ok(Outcome { files, report })
}

fn method_label(method: &str, theta: Option<f64>) -> String {
    match theta {
        Some(t) => format!("{method} (theta={t})"),
        None => method.to_string(),
    }
}

/// `sweep-theta`: RGP-UCB at each θ, one summary row per θ.
pub fn sweep_theta(args: &CommonArgs, thetas: Option<&[f64]>) -> Result<Outcome, CliError> {
    let thetas = thetas.unwrap_or(&DEFAULT_SWEEP_THETAS);
    if thetas.is_empty() {
        return Err(CliError::Config("the theta list is empty".into()));
    }
    let mut config = RunConfig::resolve(&args.settings(&RUN_KEYS)?)?;
    config.methods = vec!["rgp-ucb".into()];
    let jobs = args.jobs()?;
    let out = args.out_dir("rgpucb-sweep")?;

    let mut rows = Vec::new();
    for &theta in thetas {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(CliError::Config(format!("theta list: every value must be positive (got {theta})")));
        }
        let mut c = config.clone();
        c.theta = theta;
        let traces = run_repeats(&c.experiment("rgp-ucb")?, jobs).with_context(|| format!("theta {theta}"))?;
        rows.push(LabelledAggregate {
            problem: c.problem.clone(),
            method: "rgp-ucb".into(),
            theta: Some(theta),
            aggregate: aggregate(&traces).map_err(anyhow::Error::from)?,
        });
    }
    let files = vec![out.join(output::SWEEP_FILE), out.join(output::MANIFEST_FILE)];
    output::write_sweep(&files[0], &rows)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "sweep-theta",
        base_seed: config.seed,
        timestamp: output::unix_timestamp(),
        config: &config,
        thetas: Some(thetas),
        design: output::DesignNotes::current(),
        files: file_names(&files),
        summary: rows.iter().map(summary_of).collect(),
    };
    output::write_json(&files[1], &manifest)?;

    let mut report = format!("{:>8}  {}\n", "theta", config.problem);
    for r in &rows {
        report.push_str(&format!("{:>8}  {}\n", r.theta.unwrap_or(f64::NAN), r.aggregate.summary()));
    }
    Ok(Outcome { files, report })
}

#[derive(Serialize)]
struct BoundFile<'a> {
    tool: &'static str,
    version: &'static str,
    timestamp: u64,
    options: &'a BoundConfig,
    reports: Vec<BoundReport>,
}

/// `verify-bounds`: regret on prior draws against the bound, per θ.
pub fn verify_bounds(args: &CommonArgs) -> Result<Outcome, CliError> {
    let config = BoundConfig::resolve(&args.settings(&BOUND_KEYS)?)?;
    let out = args.out_dir("rgpucb-bounds")?;
    let mut reports = Vec::new();
    let mut text = String::new();
    for (i, &theta) in config.thetas.iter().enumerate() {
        let mut rng = RngStream::new(RngStream::repeat_seed(config.seed, i));
        let r = prior_function_check(&config.options(theta), &mut rng)
            .with_context(|| format!("theta {theta}"))?;
        text.push_str(&format!(
            "theta={theta}: empirical regret {:.4} vs bound {:.4} ({}); MGF audit {:.5} vs {:.5}, sqrt companion {:.5}\n",
            r.empirical_bayes_regret,
            r.bound_value,
            if r.holds() { "holds" } else { "violated" },
            r.mgf_audit.mean_exp_neg_half_beta,
            r.mgf_audit.closed_form,
            r.mgf_audit.mean_exp_neg_half_sqrt_beta,
        ));
        reports.push(r);
    }
    let path = out.join(output::BOUND_FILE);
    output::write_json(
        &path,
        &BoundFile {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            timestamp: output::unix_timestamp(),
            options: &config,
            reports,
        },
    )?;
    Ok(Outcome {
        files: vec![path],
        report: text,
    })
}

/// `export-plot-data`: per-(problem, method) mean and spread of best-so-far
/// from a run directory's trace file.
pub fn export_plot_data(run_dir: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let traces = run_dir.join(output::TRACE_FILE);
    if !traces.is_file() {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "no trace file found: {}",
            traces.display()
        )));
    }
    let out = output::ensure_dir(out.unwrap_or(run_dir))?;
    let mut files = Vec::new();
    let mut report = String::new();
    for (problem, method, theta, series) in output::read_trace_groups(&traces)? {
        let aggregate = aggregate_series(&series)
            .with_context(|| format!("{}: {problem}/{method}", traces.display()))?;
        let labelled = LabelledAggregate {
            problem,
            method,
            theta,
            aggregate,
        };
        let path = out.join(labelled.plot_file_name());
        output::write_plot(&path, &labelled.aggregate)?;
        report.push_str(&format!("{}\n", path.display()));
        files.push(path);
    }
    Ok(Outcome { files, report })
}
