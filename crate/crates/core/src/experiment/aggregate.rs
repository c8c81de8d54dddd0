use serde::Serialize;

use super::bo_loop::IterationRecord;
use crate::error::{Error, Result};

/// Mean and population standard deviation of best-so-far across repeats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean_best: Vec<f64>,
    pub std_best: Vec<f64>,
}

impl Aggregate {
    pub fn final_mean(&self) -> f64 {
        self.mean_best.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_std(&self) -> f64 {
        self.std_best.last().copied().unwrap_or(f64::NAN)
    }

    /// Final iteration as `mean ± std`, three significant digits each.
    pub fn summary(&self) -> String {
        format!("{} ± {}", sig3(self.final_mean()), sig3(self.final_std()))
    }
}

fn sig3(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (2 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Statistics over equal-length series, one value per step.
pub fn aggregate_series(series: &[Vec<f64>]) -> Result<Aggregate> {
    let first = series
        .first()
        .ok_or_else(|| Error::InvalidInput("nothing to aggregate".into()))?;
    let len = first.len();
    if let Some(bad) = series.iter().position(|s| s.len() != len) {
        return Err(Error::InvalidInput(format!(
            "trace {bad} has {} iterations, expected {len}",
            series[bad].len()
        )));
    }
    let n = series.len() as f64;
    let mut mean_best = Vec::with_capacity(len);
    let mut std_best = Vec::with_capacity(len);
    for i in 0..len {
        let mean = series.iter().map(|s| s[i]).sum::<f64>() / n;
        let var = series.iter().map(|s| (s[i] - mean).powi(2)).sum::<f64>() / n;
        mean_best.push(mean);
        std_best.push(var.sqrt());
    }
    Ok(Aggregate { mean_best, std_best })
}

/// Best-so-far statistics for a set of repeats.
pub fn aggregate(traces: &[Vec<IterationRecord>]) -> Result<Aggregate> {
    let series: Vec<Vec<f64>> = traces
        .iter()
        .map(|t| t.iter().map(|r| r.best_so_far).collect())
        .collect();
    aggregate_series(&series)
}
