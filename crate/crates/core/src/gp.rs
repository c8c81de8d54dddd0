//! Gaussian-process regression with a unit-amplitude squared-exponential
//! kernel and zero prior mean.
//!
//! A fitted [`GpModel`] keeps the Cholesky factor `L` of `K + σ²_noise·I`
//! and the weights `α = (K + σ²_noise·I)⁻¹ y`, so a posterior query costs one
//! kernel row and one triangular solve.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::linalg::{backward_solve_transposed, cholesky_in_place, forward_solve};
use crate::sampling::RngStream;

/// Variance below `-NEGATIVE_VARIANCE_TOL` is treated as a numerical bug.
const NEGATIVE_VARIANCE_TOL: f64 = 1e-6;

/// Jitter ladder for the joint posterior covariance.
const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    lengthscale: f64,
    noise_std: f64,
}

impl KernelParams {
    pub fn new(lengthscale: f64, noise_std: f64) -> Result<Self> {
        if !(lengthscale > 0.0) || !lengthscale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lengthscale must be positive (got {lengthscale})"
            )));
        }
        if !(noise_std >= 0.0) || !noise_std.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise_std must be non-negative (got {noise_std})"
            )));
        }
        Ok(Self {
            lengthscale,
            noise_std,
        })
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }
}

/// Observed input/output pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Dataset {
    dimension: usize,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            points: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_parts(dimension: usize, points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        for p in &points {
            check_dims(dimension, p.len(), "data point")?;
        }
        Ok(Self {
            dimension,
            points,
            values,
        })
    }

    pub fn push(&mut self, x: Vec<f64>, y: f64) -> Result<()> {
        check_dims(self.dimension, x.len(), "data point")?;
        self.points.push(x);
        self.values.push(y);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Same inputs, values replaced.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::from_parts(self.dimension, self.points.clone(), values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorMoments {
    pub mean: f64,
    pub variance: f64,
}

impl PosteriorMoments {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
fn se_unchecked(a: &[f64], b: &[f64], inv_two_l2: f64) -> f64 {
    (-sq_dist(a, b) * inv_two_l2).exp()
}

/// `exp(-‖xi - xj‖² / (2 l²))`.
pub fn se_kernel(xi: &[f64], xj: &[f64], params: &KernelParams) -> Result<f64> {
    check_dims(xi.len(), xj.len(), "kernel argument")?;
    let l = params.lengthscale;
    Ok(se_unchecked(xi, xj, 1.0 / (2.0 * l * l)))
}

/// Kernel matrix `K` (row-major, `n × n`) without the noise term.
pub fn kernel_matrix(points: &[Vec<f64>], params: &KernelParams) -> Vec<f64> {
    let n = points.len();
    let l = params.lengthscale;
    let inv_two_l2 = 1.0 / (2.0 * l * l);
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
        for j in 0..i {
            let v = se_unchecked(&points[i], &points[j], inv_two_l2);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

/// A GP conditioned on a [`Dataset`]. Immutable once fitted.
#[derive(Debug, Clone)]
pub struct GpModel {
    params: KernelParams,
    data: Dataset,
    inv_two_l2: f64,
    /// Lower Cholesky factor of `K + σ²_noise·I`, row-major.
    chol: Vec<f64>,
    alpha: Vec<f64>,
}

impl GpModel {
    /// Conditions the prior on `data`. An empty dataset yields the prior.
    pub fn fit(data: Dataset, params: KernelParams) -> Result<Self> {
        let n = data.len();
        let mut chol = kernel_matrix(data.points(), &params);
        let noise_var = params.noise_std * params.noise_std;
        for i in 0..n {
            chol[i * n + i] += noise_var;
        }
        cholesky_in_place(&mut chol, n).map_err(|pivot| Error::IllConditioned { pivot })?;
        let mut alpha = data.values().to_vec();
        forward_solve(&chol, n, &mut alpha);
        backward_solve_transposed(&chol, n, &mut alpha);
        let l = params.lengthscale;
        Ok(Self {
            params,
            data,
            inv_two_l2: 1.0 / (2.0 * l * l),
            chol,
            alpha,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn dimension(&self) -> usize {
        self.data.dimension()
    }

    /// The lower Cholesky factor of `K + σ²_noise·I` (row-major).
    pub fn cholesky_factor(&self) -> &[f64] {
        &self.chol
    }

    fn cross_kernel(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .points()
            .iter()
            .map(|p| se_unchecked(p, x, self.inv_two_l2))
            .collect()
    }

    /// Posterior mean and variance of `f(x)`.
    ///
    /// Variance is clamped into `[0, 1]`; a raw value below `-1e-6` is
    /// reported as an internal-consistency error instead.
    pub fn posterior(&self, x: &[f64]) -> Result<PosteriorMoments> {
        check_dims(self.dimension(), x.len(), "query point")?;
        let n = self.data.len();
        let mut k = self.cross_kernel(x);
        let mean = k.iter().zip(&self.alpha).map(|(a, b)| a * b).sum();
        forward_solve(&self.chol, n, &mut k);
        let raw = 1.0 - k.iter().map(|v| v * v).sum::<f64>();
        Ok(PosteriorMoments {
            mean,
            variance: clamp_variance(raw, 1.0)?,
        })
    }

    /// Posterior mean vector and covariance matrix (row-major `m × m`) over
    /// `candidates`.
    pub fn joint_posterior(&self, candidates: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = candidates.len();
        let n = self.data.len();
        for c in candidates {
            check_dims(self.dimension(), c.len(), "candidate")?;
        }
        let mut mean = Vec::with_capacity(m);
        let mut solved = Vec::with_capacity(m);
        for c in candidates {
            let mut k = self.cross_kernel(c);
            mean.push(k.iter().zip(&self.alpha).map(|(a, b)| a * b).sum());
            forward_solve(&self.chol, n, &mut k);
            solved.push(k);
        }
        let mut cov = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..=a {
                let prior = if a == b {
                    1.0
                } else {
                    se_unchecked(&candidates[a], &candidates[b], self.inv_two_l2)
                };
                let reduction: f64 = solved[a].iter().zip(&solved[b]).map(|(u, v)| u * v).sum();
                let v = prior - reduction;
                cov[a * m + b] = v;
                cov[b * m + a] = v;
            }
        }
        Ok((mean, cov))
    }

    /// One draw from the joint posterior over `candidates`.
    pub fn joint_posterior_draw(&self, candidates: &[Vec<f64>], rng: &mut RngStream) -> Result<Vec<f64>> {
        if candidates.is_empty() {
            return Err(Error::InvalidInput("no candidates to draw at".into()));
        }
        let (mean, cov) = self.joint_posterior(candidates)?;
        let m = candidates.len();
        let factor = jittered_cholesky(&cov, m)?;
        let z: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
        Ok((0..m)
            .map(|i| {
                let row = &factor[i * m..i * m + i + 1];
                mean[i] + row.iter().zip(&z).map(|(l, z)| l * z).sum::<f64>()
            })
            .collect())
    }
}

fn clamp_variance(raw: f64, prior: f64) -> Result<f64> {
    if raw < -NEGATIVE_VARIANCE_TOL {
        return Err(Error::Internal(format!(
            "posterior variance {raw} is materially negative"
        )));
    }
    Ok(raw.clamp(0.0, prior))
}

/// Cholesky of `cov + jitter·I`, escalating jitter ×10 from 1e-10 to 1e-4.
fn jittered_cholesky(cov: &[f64], m: usize) -> Result<Vec<f64>> {
    let mut jitter = JITTER_START;
    loop {
        let mut a = cov.to_vec();
        for i in 0..m {
            a[i * m + i] += jitter;
        }
        match cholesky_in_place(&mut a, m) {
            Ok(()) => return Ok(a),
            Err(pivot) if jitter * 10.0 > JITTER_MAX * (1.0 + 1e-9) => {
                return Err(Error::IllConditioned { pivot })
            }
            Err(_) => jitter *= 10.0,
        }
    }
}

/// Free-function form of [`GpModel::fit`].
pub fn fit(data: Dataset, params: KernelParams) -> Result<GpModel> {
    GpModel::fit(data, params)
}

/// Free-function form of [`GpModel::posterior`].
pub fn posterior(model: &GpModel, x: &[f64]) -> Result<PosteriorMoments> {
    model.posterior(x)
}

/// Free-function form of [`GpModel::joint_posterior_draw`].
pub fn joint_posterior_draw(model: &GpModel, candidates: &[Vec<f64>], rng: &mut RngStream) -> Result<Vec<f64>> {
    model.joint_posterior_draw(candidates, rng)
}
