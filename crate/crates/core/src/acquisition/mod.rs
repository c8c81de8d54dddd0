//! Acquisition functions and the point selectors built on them.
//!
//! UCB-type acquisitions take `α(x) = μ(x) + √β σ(x)`; the variants differ in
//! how `β` is chosen each iteration (see [`beta`]). Expected improvement and
//! Thompson sampling are provided as baselines.

mod beta;
mod maximize;

pub use beta::{
    kappa, rgp_ucb_beta, srinivas_beta, GammaBetaSchedule, SrinivasBetaParams, DEFAULT_SHAPE_FLOOR,
};
pub use maximize::{maximize_acquisition, MaximizerBudget, SurfaceMaximum};

use libm::erfc;

use crate::error::{Error, Result};
use crate::gp::{GpModel, PosteriorMoments};
use crate::sampling::RngStream;
use crate::space::Bounds;

/// The point chosen for the next evaluation and why.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionChoice {
    pub point: Vec<f64>,
    pub acquisition_value: f64,
    /// `β_t` for UCB variants.
    pub beta_used: Option<f64>,
    /// Posterior standard deviation `σ_{t-1}(x_t)` at the chosen point.
    pub sigma_at_choice: f64,
}

/// `μ + √β σ`.
pub fn ucb_value(moments: &PosteriorMoments, beta: f64) -> f64 {
    moments.mean + beta.sqrt() * moments.std_dev()
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Closed-form expected improvement over `incumbent`.
pub fn ei_value(moments: &PosteriorMoments, incumbent: f64) -> f64 {
    let gap = moments.mean - incumbent;
    let sigma = moments.std_dev();
    if sigma <= 0.0 {
        return gap.max(0.0);
    }
    let z = gap / sigma;
    (gap * std_normal_cdf(z) + sigma * std_normal_pdf(z)).max(0.0)
}

/// Maximises the UCB surface for a fixed `β`.
pub fn select_ucb(
    model: &GpModel,
    beta: f64,
    bounds: &Bounds,
    rng: &mut RngStream,
    budget: &MaximizerBudget,
) -> Result<AcquisitionChoice> {
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be non-negative (got {beta})")));
    }
    let best = maximize_acquisition(|x| Ok(ucb_value(&model.posterior(x)?, beta)), bounds, rng, budget)?;
    let sigma = model.posterior(&best.point)?.std_dev();
    Ok(AcquisitionChoice {
        point: best.point,
        acquisition_value: best.value,
        beta_used: Some(beta),
        sigma_at_choice: sigma,
    })
}

/// Maximises expected improvement over `incumbent`.
pub fn select_ei(
    model: &GpModel,
    incumbent: f64,
    bounds: &Bounds,
    rng: &mut RngStream,
    budget: &MaximizerBudget,
) -> Result<AcquisitionChoice> {
    let best = maximize_acquisition(|x| Ok(ei_value(&model.posterior(x)?, incumbent)), bounds, rng, budget)?;
    let sigma = model.posterior(&best.point)?.std_dev();
    Ok(AcquisitionChoice {
        point: best.point,
        acquisition_value: best.value,
        beta_used: None,
        sigma_at_choice: sigma,
    })
}

/// Thompson sampling over a finite candidate set: argmax of one joint
/// posterior draw, ties to the lowest index.
pub fn thompson_select(
    model: &GpModel,
    candidates: &[Vec<f64>],
    rng: &mut RngStream,
) -> Result<AcquisitionChoice> {
    let draw = model.joint_posterior_draw(candidates, rng)?;
    let mut best = 0;
    for (i, &v) in draw.iter().enumerate().skip(1) {
        if v > draw[best] {
            best = i;
        }
    }
    let sigma = model.posterior(&candidates[best])?.std_dev();
    Ok(AcquisitionChoice {
        point: candidates[best].clone(),
        acquisition_value: draw[best],
        beta_used: None,
        sigma_at_choice: sigma,
    })
}
