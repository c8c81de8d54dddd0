use serde::Serialize;

use super::bo_loop::IterationRecord;
use crate::error::{Error, Result};

/// Per-iteration regret `f(x*) - f(x_t)` and its running sum `R_T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub per_t_regret: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl RegretTrace {
    pub fn from_regrets(per_t_regret: Vec<f64>) -> Self {
        let cumulative = per_t_regret
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r;
                Some(*acc)
            })
            .collect();
        Self {
            per_t_regret,
            cumulative,
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Regret of each record's noiseless value against `optimum`.
pub fn cumulative_regret(records: &[IterationRecord], optimum: f64) -> Result<RegretTrace> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no iteration records".into()));
    }
    Ok(RegretTrace::from_regrets(
        records.iter().map(|r| optimum - r.noiseless_f).collect(),
    ))
}

/// Pointwise mean of cumulative regret over repeats: the Monte-Carlo
/// estimate of the Bayesian regret `BR_T`.
pub fn bayes_regret_estimate(traces: &[RegretTrace]) -> Result<Vec<f64>> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidInput("no regret traces".into()))?;
    let len = first.cumulative.len();
    if let Some(bad) = traces.iter().position(|t| t.cumulative.len() != len) {
        return Err(Error::InvalidInput(format!(
            "trace {bad} has {} steps, expected {len}",
            traces[bad].cumulative.len()
        )));
    }
    let n = traces.len() as f64;
    Ok((0..len)
        .map(|i| traces.iter().map(|t| t.cumulative[i]).sum::<f64>() / n)
        .collect())
}
