//! Synthetic test functions as maximisation problems.
//!
//! Functions that are conventionally minimised (Dropwave, Sphere, Ackley)
//! are negated; Alpine 2 is already posed as a maximisation.

use std::f64::consts::{E, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::sampling::RngStream;
use crate::space::Bounds;

/// Root of `tan x = -2x` in `(2π, 3π)`: the per-coordinate maximiser of
/// `√x sin x` on `[0, 10]`.
pub const ALPINE2_ARGMAX: f64 = 7.917_052_684_666_207;

/// Evaluations used to set the default observation-noise level.
const NOISE_CALIBRATION_SAMPLES: usize = 10_000;
const NOISE_CALIBRATION_SEED: u64 = 0x6E6F_6973_65;
const NOISE_FRACTION: f64 = 0.01;

pub const PROBLEM_NAMES: [&str; 4] = ["dropwave", "sphere", "alpine2", "ackley"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Dropwave,
    Sphere,
    Alpine2,
    Ackley,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Dropwave => "dropwave",
            ProblemKind::Sphere => "sphere",
            ProblemKind::Alpine2 => "alpine2",
            ProblemKind::Ackley => "ackley",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "dropwave" => Ok(ProblemKind::Dropwave),
            "sphere" => Ok(ProblemKind::Sphere),
            "alpine2" => Ok(ProblemKind::Alpine2),
            "ackley" => Ok(ProblemKind::Ackley),
            other => Err(Error::InvalidInput(format!(
                "unknown problem `{other}`; valid names: {}",
                PROBLEM_NAMES.join(", ")
            ))),
        }
    }

    /// Dimension used in the standard benchmark suite.
    pub fn standard_dimension(self) -> usize {
        match self {
            ProblemKind::Dropwave => 2,
            ProblemKind::Sphere => 4,
            ProblemKind::Alpine2 => 5,
            ProblemKind::Ackley => 5,
        }
    }

    fn domain(self) -> (f64, f64) {
        match self {
            ProblemKind::Dropwave | ProblemKind::Sphere => (-5.12, 5.12),
            ProblemKind::Alpine2 => (0.0, 10.0),
            ProblemKind::Ackley => (-32.768, 32.768),
        }
    }

    fn value(self, x: &[f64]) -> f64 {
        match self {
            ProblemKind::Dropwave => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                (1.0 + (12.0 * r2.sqrt()).cos()) / (0.5 * r2 + 2.0)
            }
            ProblemKind::Sphere => -x.iter().map(|v| v * v).sum::<f64>(),
            ProblemKind::Alpine2 => x.iter().map(|&v| v.sqrt() * v.sin()).product(),
            ProblemKind::Ackley => {
                let (a, b, c) = (20.0, 0.2, 2.0 * PI);
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (c * v).cos()).sum::<f64>() / n;
                -(-a * (-b * sq.sqrt()).exp() - cs.exp() + a + E)
            }
        }
    }

    fn optimum(self, dim: usize) -> (Vec<f64>, f64) {
        match self {
            ProblemKind::Dropwave => (vec![0.0; dim], 1.0),
            ProblemKind::Sphere | ProblemKind::Ackley => (vec![0.0; dim], 0.0),
            ProblemKind::Alpine2 => {
                let per_dim = ALPINE2_ARGMAX.sqrt() * ALPINE2_ARGMAX.sin();
                (vec![ALPINE2_ARGMAX; dim], per_dim.powi(dim as i32))
            }
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A bounded maximisation problem with a known optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkProblem {
    kind: ProblemKind,
    bounds: Bounds,
    optimum_value: f64,
    optimum_point: Option<Vec<f64>>,
    noise_std: f64,
}

/// A noisy sample `y = f(x) + ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyObservation {
    pub x: Vec<f64>,
    pub y: f64,
}

impl BenchmarkProblem {
    /// Builds `kind` in `dim` dimensions with the default noise level.
    pub fn new(kind: ProblemKind, dim: usize) -> Result<Self> {
        if dim == 0 || (kind == ProblemKind::Dropwave && dim != 2) {
            return Err(Error::InvalidInput(format!(
                "{kind} is not defined in {dim} dimensions"
            )));
        }
        let (lo, hi) = kind.domain();
        let bounds = Bounds::uniform(dim, lo, hi)?;
        let (point, value) = kind.optimum(dim);
        let mut problem = Self {
            kind,
            bounds,
            optimum_value: value,
            optimum_point: Some(point),
            noise_std: 0.0,
        };
        problem.noise_std = problem.default_noise_std();
        Ok(problem)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dimension(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn optimum_value(&self) -> f64 {
        self.optimum_value
    }

    pub fn optimum_point(&self) -> Option<&[f64]> {
        self.optimum_point.as_deref()
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn with_noise_std(mut self, noise_std: f64) -> Result<Self> {
        if !(noise_std >= 0.0) || !noise_std.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise_std must be non-negative (got {noise_std})"
            )));
        }
        self.noise_std = noise_std;
        Ok(self)
    }

    /// `0.01 · (optimum − median of 10⁴ uniform random evaluations)`.
    pub fn default_noise_std(&self) -> f64 {
        let mut rng = RngStream::new(NOISE_CALIBRATION_SEED);
        let d = self.dimension();
        let mut values: Vec<f64> = (0..NOISE_CALIBRATION_SAMPLES)
            .map(|_| {
                let x: Vec<f64> = (0..d)
                    .map(|i| rng.uniform_in(self.bounds.lower()[i], self.bounds.upper()[i]))
                    .collect();
                self.kind.value(&x)
            })
            .collect();
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = 0.5 * (values[mid - 1] + values[mid]);
        NOISE_FRACTION * (self.optimum_value - median)
    }

    /// Noiseless objective value at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dims(self.dimension(), x.len(), "benchmark input")?;
        if !self.bounds.contains(x) {
            return Err(Error::InvalidInput(format!(
                "{x:?} lies outside the {} search box",
                self.name()
            )));
        }
        Ok(self.kind.value(x))
    }

    /// `evaluate(x) + noise_std · N(0, 1)`.
    pub fn noisy_evaluate(&self, x: &[f64], rng: &mut RngStream) -> Result<NoisyObservation> {
        let f = self.evaluate(x)?;
        let y = if self.noise_std == 0.0 {
            f
        } else {
            f + self.noise_std * rng.normal()
        };
        Ok(NoisyObservation { x: x.to_vec(), y })
    }
}

/// The standard problem for `name` (see [`PROBLEM_NAMES`]).
pub fn make_problem(name: &str) -> Result<BenchmarkProblem> {
    let kind = ProblemKind::from_name(name)?;
    BenchmarkProblem::new(kind, kind.standard_dimension())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_shapes() {
        let dw = make_problem("dropwave").unwrap();
        assert_eq!(dw.dimension(), 2);
        assert_eq!(dw.bounds().lower(), &[-5.12, -5.12]);
        let sp = make_problem("sphere").unwrap();
        assert_eq!(sp.dimension(), 4);
        let al = make_problem("alpine2").unwrap();
        assert_eq!(al.dimension(), 5);
        assert_eq!(al.bounds().upper(), &[10.0; 5]);
        let ak = make_problem("ackley").unwrap();
        assert_eq!(ak.dimension(), 5);
        assert_eq!(ak.bounds().upper(), &[32.768; 5]);
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = make_problem("rosenbrock").unwrap_err().to_string();
        for name in PROBLEM_NAMES {
            assert!(err.contains(name), "{err}");
        }
    }

    #[test]
    fn optima() {
        assert_eq!(make_problem("sphere").unwrap().evaluate(&[0.0; 4]).unwrap(), 0.0);
        assert_eq!(make_problem("dropwave").unwrap().evaluate(&[0.0; 2]).unwrap(), 1.0);
        assert!(make_problem("ackley").unwrap().evaluate(&[0.0; 5]).unwrap().abs() < 1e-12);
        for name in PROBLEM_NAMES {
            let p = make_problem(name).unwrap();
            let at = p.evaluate(p.optimum_point().unwrap()).unwrap();
            assert!((at - p.optimum_value()).abs() < 1e-6, "{name}");
        }
    }

    #[test]
    fn point_values() {
        let sp = make_problem("sphere").unwrap();
        assert_eq!(sp.evaluate(&[1.0; 4]).unwrap(), -4.0);
        let al = make_problem("alpine2").unwrap();
        // 1-D maximum 2.808131180007005 raised to the 5th power at x = 7.917.
        assert!((al.evaluate(&[7.917; 5]).unwrap() - 174.617_174_075_917_43).abs() < 1e-9);
        assert!((al.optimum_value() - 174.617_175_302_114_4).abs() < 1e-9);
        let dw = make_problem("dropwave").unwrap();
        assert!((dw.evaluate(&[5.12, 5.12]).unwrap() - 0.052_294_462_519_818_97).abs() < 1e-14);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let sp = make_problem("sphere").unwrap();
        assert!(sp.evaluate(&[6.0, 0.0, 0.0, 0.0]).is_err());
        assert!(sp.evaluate(&[0.0; 3]).is_err());
    }

    #[test]
    fn noiseless_observation_is_exact() {
        let p = make_problem("ackley").unwrap().with_noise_std(0.0).unwrap();
        let x = [1.0, -2.0, 3.0, 0.5, 0.0];
        let obs = p.noisy_evaluate(&x, &mut RngStream::new(1)).unwrap();
        assert_eq!(obs.y, p.evaluate(&x).unwrap());
    }

    #[test]
    fn default_noise_levels_are_positive() {
        for name in PROBLEM_NAMES {
            let p = make_problem(name).unwrap();
            assert!(p.noise_std() > 0.0, "{name}");
            assert_eq!(p.noise_std(), p.default_noise_std());
        }
    }
}
