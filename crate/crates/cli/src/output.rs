//! CSV and JSON artifacts written by the commands.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so every
//! cell parses back to the exact in-memory `f64`. Files use LF line endings.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rgpucb::experiment::{Aggregate, IterationRecord};
use serde::Serialize;

use crate::config::RunConfig;

pub const TRACE_FILE: &str = "traces.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const BOUND_FILE: &str = "bound_report.json";

pub const TRACE_COLUMNS: [&str; 10] = [
    "problem",
    "method",
    "theta",
    "repeat",
    "iteration",
    "best_so_far",
    "y",
    "beta",
    "kappa",
    "sigma_at_choice",
];

fn writer(path: &Path) -> anyhow::Result<csv::Writer<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// All repeats of one method.
pub struct MethodTraces<'a> {
    pub method: &'a str,
    pub theta: Option<f64>,
    pub repeats: &'a [Vec<IterationRecord>],
}

pub fn write_traces(path: &Path, problem: &str, dim: usize, runs: &[MethodTraces<'_>]) -> anyhow::Result<()> {
    let mut w = writer(path)?;
    let mut header: Vec<String> = TRACE_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((0..dim).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for run in runs {
        for (r, records) in run.repeats.iter().enumerate() {
            for (i, rec) in records.iter().enumerate() {
                let mut row = vec![
                    problem.to_string(),
                    run.method.to_string(),
                    opt(run.theta),
                    r.to_string(),
                    (i + 1).to_string(),
                    rec.best_so_far.to_string(),
                    rec.y.to_string(),
                    opt(rec.beta_t),
                    opt(rec.kappa_t),
                    rec.sigma_at_choice.to_string(),
                ];
                row.extend(rec.x.iter().map(|v| v.to_string()));
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// One aggregated series, labelled by problem, method and θ.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledAggregate {
    pub problem: String,
    pub method: String,
    pub theta: Option<f64>,
    pub aggregate: Aggregate,
}

impl LabelledAggregate {
    /// `plot_<problem>_<method>[_theta<θ>].csv`
    pub fn plot_file_name(&self) -> String {
        match self.theta {
            Some(t) => format!("plot_{}_{}_theta{}.csv", self.problem, self.method, t),
            None => format!("plot_{}_{}.csv", self.problem, self.method),
        }
    }
}

pub fn write_aggregates(path: &Path, aggs: &[LabelledAggregate]) -> anyhow::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["problem", "method", "theta", "iteration", "mean_best", "std_best"])?;
    for a in aggs {
        for (i, (m, s)) in a.aggregate.mean_best.iter().zip(&a.aggregate.std_best).enumerate() {
            w.write_record([
                a.problem.clone(),
                a.method.clone(),
                opt(a.theta),
                (i + 1).to_string(),
                m.to_string(),
                s.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_plot(path: &Path, agg: &Aggregate) -> anyhow::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["iteration", "mean_best", "std_best"])?;
    for (i, (m, s)) in agg.mean_best.iter().zip(&agg.std_best).enumerate() {
        w.write_record([(i + 1).to_string(), m.to_string(), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep(path: &Path, rows: &[LabelledAggregate]) -> anyhow::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["problem", "theta", "final_mean", "final_std", "summary"])?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            opt(r.theta),
            r.aggregate.final_mean().to_string(),
            r.aggregate.final_std().to_string(),
            r.aggregate.summary(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Best-so-far series read back from a trace file, grouped by
/// (problem, method, θ) in order of first appearance.
pub fn read_trace_groups(path: &Path) -> anyhow::Result<Vec<(String, String, Option<f64>, Vec<Vec<f64>>)>> {
    let name = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .from_path(path)
        .with_context(|| format!("cannot open {name}"))?;
    let header = reader.headers().with_context(|| format!("{name}: unreadable header"))?.clone();
    if header.len() < TRACE_COLUMNS.len() + 1 || header.iter().zip(TRACE_COLUMNS).any(|(a, b)| a != b) {
        bail!("{name}: not a trace file (unexpected header)");
    }
    let mut groups: Vec<(String, String, Option<f64>, Vec<Vec<(usize, f64)>>)> = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.with_context(|| format!("{name}: malformed row {}", line + 2))?;
        let at = |col: usize| row.get(col).unwrap_or("");
        let bad = |what: &str| anyhow::anyhow!("{name}: row {}: bad {what}", line + 2);
        let theta = match at(2) {
            "" => None,
            s => Some(s.parse::<f64>().map_err(|_| bad("theta"))?),
        };
        let repeat: usize = at(3).parse().map_err(|_| bad("repeat"))?;
        let iteration: usize = at(4).parse().map_err(|_| bad("iteration"))?;
        let best: f64 = at(5).parse().map_err(|_| bad("best_so_far"))?;
        let key = (at(0).to_string(), at(1).to_string(), theta);
        let idx = match groups.iter().position(|g| (&g.0, &g.1, g.2) == (&key.0, &key.1, key.2)) {
            Some(i) => i,
            None => {
                groups.push((key.0, key.1, key.2, Vec::new()));
                groups.len() - 1
            }
        };
        let reps = &mut groups[idx].3;
        if reps.len() <= repeat {
            reps.resize(repeat + 1, Vec::new());
        }
        reps[repeat].push((iteration, best));
    }
    if groups.is_empty() {
        bail!("{name}: no trace rows");
    }
    groups
        .into_iter()
        .map(|(p, m, t, reps)| {
            let series = reps
                .into_iter()
                .enumerate()
                .map(|(r, mut rows)| {
                    rows.sort_by_key(|(i, _)| *i);
                    if rows.is_empty() || rows.iter().enumerate().any(|(k, (i, _))| *i != k + 1) {
                        bail!("{name}: {p}/{m} repeat {r} has missing or duplicate iterations");
                    }
                    Ok(rows.into_iter().map(|(_, b)| b).collect())
                })
                .collect::<anyhow::Result<Vec<Vec<f64>>>>()?;
            Ok((p, m, t, series))
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub theta: Option<f64>,
    pub final_mean: f64,
    pub final_std: f64,
    pub summary: String,
}

#[derive(Debug, Serialize)]
pub struct DesignNotes {
    pub initial_design: &'static str,
    pub maximizer: &'static str,
    pub gp_noise_floor: f64,
    pub beta_shape_floor: f64,
    pub repeat_seed_rule: &'static str,
}

impl DesignNotes {
    pub fn current() -> Self {
        Self {
            initial_design: "latin hypercube, jittered within strata",
            maximizer: "1000*d uniform probes, 10 best refined by coordinate search, tol 1e-4*diagonal",
            gp_noise_floor: rgpucb::experiment::GP_NOISE_FLOOR,
            beta_shape_floor: rgpucb::acquisition::DEFAULT_SHAPE_FLOOR,
            repeat_seed_rule: "seed xor (repeat * 0x9E3779B97F4A7C15)",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub base_seed: u64,
    pub timestamp: u64,
    pub config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thetas: Option<&'a [f64]>,
    pub design: DesignNotes,
    pub files: Vec<String>,
    pub summary: Vec<MethodSummary>,
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    Ok(dir.to_path_buf())
}
