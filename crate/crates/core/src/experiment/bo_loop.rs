use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use crate::acquisition::{
    rgp_ucb_beta, select_ei, select_ucb, srinivas_beta, thompson_select, AcquisitionChoice,
    MaximizerBudget,
};
use crate::error::{Error, Result};
use crate::gp::{Dataset, GpModel, KernelParams};
use crate::sampling::{latin_hypercube, RngStream};

/// GP noise floor, in standardised output units.
pub const GP_NOISE_FLOOR: f64 = 1e-3;

const THOMPSON_MAX_CANDIDATES: usize = 2048;
const THOMPSON_CANDIDATES_PER_DIM: usize = 512;

// Sub-streams of a repeat's seed.
const STREAM_DESIGN: u64 = 0;
const STREAM_NOISE: u64 = 1;
const STREAM_BETA: u64 = 2;
const STREAM_SEARCH: u64 = 3;

/// One post-initialisation iteration of the loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    /// Observations available when `x_t` was chosen (initial design included).
    pub t: usize,
    pub x: Vec<f64>,
    /// Noisy observation, objective units.
    pub y: f64,
    pub noiseless_f: f64,
    /// Largest `y` observed so far, initial design included.
    pub best_so_far: f64,
    pub beta_t: Option<f64>,
    /// Gamma shape used for `β_t` (RGP-UCB only).
    pub kappa_t: Option<f64>,
    /// Posterior standard deviation at `x_t`, standardised units.
    pub sigma_at_choice: f64,
}

/// Zero-mean, unit-variance rescaling of the observed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardizer {
    pub shift: f64,
    pub scale: f64,
}

impl Standardizer {
    /// Population mean and standard deviation; scale falls back to 1 when
    /// the values are (numerically) constant.
    pub fn fit(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self { shift: 0.0, scale: 1.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        let scale = if sd > 1e-12 * mean.abs().max(1.0) { sd } else { 1.0 };
        Self { shift: mean, scale }
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|v| (v - self.shift) / self.scale).collect()
    }
}

/// Runs repeat `repeat_index` of `config` and returns one record per
/// iteration after the initial design.
pub fn bo_loop(config: &ExperimentConfig, repeat_index: usize) -> Result<Vec<IterationRecord>> {
    config.validate()?;
    let problem = config.problem.clone().with_noise_std(config.noise_std)?;
    let bounds = problem.bounds().clone();
    let d = problem.dimension();

    let root = RngStream::for_repeat(config.base_seed, repeat_index);
    let mut design_rng = root.substream(STREAM_DESIGN);
    let mut noise_rng = root.substream(STREAM_NOISE);
    let mut beta_rng = root.substream(STREAM_BETA);
    let mut search_rng = root.substream(STREAM_SEARCH);

    let mut data = Dataset::new(d);
    let mut best = f64::NEG_INFINITY;
    for x in latin_hypercube(config.initial_points, &bounds, &mut design_rng)? {
        let obs = problem.noisy_evaluate(&x, &mut noise_rng)?;
        best = best.max(obs.y);
        data.push(obs.x, obs.y)?;
    }

    let budget = MaximizerBudget::default_for(&bounds);
    let mut records = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        let t = data.len();
        let at = |e: Error| Error::AtIteration {
            repeat: repeat_index,
            iteration: t,
            source: Box::new(e),
        };

        let standardizer = Standardizer::fit(data.values());
        let gp_noise = (config.noise_std / standardizer.scale).max(GP_NOISE_FLOOR);
        let params = KernelParams::new(config.lengthscale, gp_noise)?;
        let model = GpModel::fit(data.with_values(standardizer.apply(data.values()))?, params).map_err(at)?;

        let (choice, kappa_t): (AcquisitionChoice, Option<f64>) = match &config.method {
            Method::RgpUcb(schedule) => {
                let beta = rgp_ucb_beta(t, schedule, &mut beta_rng);
                let choice = select_ucb(&model, beta, &bounds, &mut search_rng, &budget).map_err(at)?;
                (choice, Some(schedule.shape(t)))
            }
            Method::GpUcb(params) => {
                let beta = srinivas_beta(t, params).map_err(at)?;
                (select_ucb(&model, beta, &bounds, &mut search_rng, &budget).map_err(at)?, None)
            }
            Method::FixedUcb { beta } => {
                (select_ucb(&model, *beta, &bounds, &mut search_rng, &budget).map_err(at)?, None)
            }
            Method::Ei => {
                let incumbent = (best - standardizer.shift) / standardizer.scale;
                (select_ei(&model, incumbent, &bounds, &mut search_rng, &budget).map_err(at)?, None)
            }
            Method::Thompson => {
                let m = THOMPSON_MAX_CANDIDATES.min(THOMPSON_CANDIDATES_PER_DIM * d);
                let candidates = latin_hypercube(m, &bounds, &mut search_rng)?;
                (thompson_select(&model, &candidates, &mut search_rng).map_err(at)?, None)
            }
        };

        let obs = problem.noisy_evaluate(&choice.point, &mut noise_rng).map_err(at)?;
        let noiseless_f = problem.evaluate(&choice.point).map_err(at)?;
        best = best.max(obs.y);
        records.push(IterationRecord {
            t,
            x: obs.x.clone(),
            y: obs.y,
            noiseless_f,
            best_so_far: best,
            beta_t: choice.beta_used,
            kappa_t,
            sigma_at_choice: choice.sigma_at_choice,
        });
        data.push(obs.x, obs.y)?;
    }
    Ok(records)
}

/// All repeats of `config`, in repeat order. Output is independent of `jobs`.
pub fn run_repeats(config: &ExperimentConfig, jobs: usize) -> Result<Vec<Vec<IterationRecord>>> {
    config.validate()?;
    if jobs <= 1 {
        return (0..config.repeats).map(|r| bo_loop(config, r)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..config.repeats)
            .into_par_iter()
            .map(|r| bo_loop(config, r))
            .collect()
    })
}
