use std::fmt;

use serde::{Deserialize, Serialize};

use crate::acquisition::{GammaBetaSchedule, SrinivasBetaParams};
use crate::benchmarks::BenchmarkProblem;
use crate::error::{Error, Result};

/// Acquisition strategy driving the loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Method {
    /// UCB with `β_t ~ Gamma(κ_t, θ)`.
    RgpUcb(GammaBetaSchedule),
    /// UCB with the classical schedule.
    GpUcb(SrinivasBetaParams),
    /// UCB with a constant `β`.
    FixedUcb { beta: f64 },
    Ei,
    Thompson,
}

impl Method {
    pub fn rgp_ucb(theta: f64) -> Result<Self> {
        Ok(Method::RgpUcb(GammaBetaSchedule::new(theta)?))
    }

    /// GP-UCB with `δ = 0.1`, `a = b = 1` and `r` the largest box side.
    pub fn gp_ucb_defaults(problem: &BenchmarkProblem) -> Result<Self> {
        Ok(Method::GpUcb(SrinivasBetaParams::defaults(
            problem.dimension(),
            problem.bounds().max_side(),
        )?))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Method::RgpUcb(_) => "rgp-ucb",
            Method::GpUcb(_) => "gp-ucb",
            Method::FixedUcb { .. } => "fixed-ucb",
            Method::Ei => "ei",
            Method::Thompson => "thompson",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            Method::RgpUcb(s) => Some(s.theta()),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.theta() {
            Some(theta) => write!(f, "{} (theta={theta})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

/// Everything needed to reproduce a set of optimisation runs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: BenchmarkProblem,
    pub method: Method,
    /// Iterations after the initial design.
    pub iterations: usize,
    pub initial_points: usize,
    pub repeats: usize,
    /// Kernel lengthscale in input units.
    pub lengthscale: f64,
    /// Observation noise standard deviation in objective units.
    pub noise_std: f64,
    pub base_seed: u64,
}

impl ExperimentConfig {
    /// Defaults: `40·d` iterations, `3·d + 1` initial points, 10 repeats,
    /// lengthscale `0.1 ·` box diagonal, the problem's noise level, seed 0.
    pub fn new(problem: BenchmarkProblem, method: Method) -> Self {
        let d = problem.dimension();
        Self {
            iterations: 40 * d,
            initial_points: 3 * d + 1,
            repeats: 10,
            lengthscale: default_lengthscale(&problem),
            noise_std: problem.noise_std(),
            base_seed: 0,
            problem,
            method,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if self.initial_points == 0 {
            return Err(Error::InvalidParameter("initial_points must be at least 1".into()));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        if !(self.lengthscale > 0.0) || !self.lengthscale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lengthscale must be positive (got {})",
                self.lengthscale
            )));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise_std must be non-negative (got {})",
                self.noise_std
            )));
        }
        if let Method::FixedUcb { beta } = self.method {
            if !(beta >= 0.0) {
                return Err(Error::InvalidParameter(format!("beta must be non-negative (got {beta})")));
            }
        }
        Ok(())
    }
}

pub fn default_lengthscale(problem: &BenchmarkProblem) -> f64 {
    0.1 * problem.bounds().diagonal()
}
