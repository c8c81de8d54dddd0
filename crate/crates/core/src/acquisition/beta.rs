//! Exploration-weight schedules for UCB acquisitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{gamma_sample, GammaParams, RngStream};

/// Shape used whenever `κ_t ≤ 0` (only `t = 1`).
pub const DEFAULT_SHAPE_FLOOR: f64 = 1e-3;

/// Gamma shape `κ_t = ln((t² + 1) / √(2π)) / ln(1 + θ/2)`, unclamped.
///
/// Negative at `t = 1` since `2 < √(2π)`.
pub fn kappa(t: usize, theta: f64) -> f64 {
    let t = t as f64;
    let two_pi_sqrt = (2.0 * std::f64::consts::PI).sqrt();
    ((t * t + 1.0) / two_pi_sqrt).ln() / (theta / 2.0).ln_1p()
}

/// RGP-UCB draws `β_t ~ Gamma(max(κ_t, shape_floor), θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaBetaSchedule {
    theta: f64,
    shape_floor: f64,
}

impl GammaBetaSchedule {
    pub fn new(theta: f64) -> Result<Self> {
        Self::with_floor(theta, DEFAULT_SHAPE_FLOOR)
    }

    pub fn with_floor(theta: f64, shape_floor: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be positive (got {theta})"
            )));
        }
        if !(shape_floor > 0.0) || !shape_floor.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shape_floor must be positive (got {shape_floor})"
            )));
        }
        Ok(Self { theta, shape_floor })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn shape_floor(&self) -> f64 {
        self.shape_floor
    }

    /// The Gamma shape actually used at iteration `t`.
    pub fn shape(&self, t: usize) -> f64 {
        kappa(t, self.theta).max(self.shape_floor)
    }

    pub fn gamma_params(&self, t: usize) -> GammaParams {
        GammaParams::new(self.shape(t), self.theta).expect("schedule parameters are validated")
    }

    /// Expected `β_t`: `shape(t) · θ`.
    pub fn mean(&self, t: usize) -> f64 {
        self.shape(t) * self.theta
    }
}

/// Draws `β_t` for RGP-UCB.
pub fn rgp_ucb_beta(t: usize, schedule: &GammaBetaSchedule, rng: &mut RngStream) -> f64 {
    gamma_sample(&schedule.gamma_params(t), rng)
}

/// Parameters of the classical GP-UCB schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrinivasBetaParams {
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    /// Side length of the search box.
    pub r: f64,
    /// Input dimension.
    pub d: usize,
}

impl SrinivasBetaParams {
    pub fn new(delta: f64, a: f64, b: f64, r: f64, d: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1) (got {delta})"
            )));
        }
        for (name, v) in [("a", a), ("b", b), ("r", r)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive (got {v})"
                )));
            }
        }
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        Ok(Self { delta, a, b, r, d })
    }

    /// `δ = 0.1`, `a = b = 1`, `r` the largest box side.
    pub fn defaults(d: usize, r: f64) -> Result<Self> {
        Self::new(0.1, 1.0, 1.0, r, d)
    }
}

/// `β_t = 2 ln(t²π²/(3δ)) + 2d ln(t² d b r √(ln(4da/δ)))`.
pub fn srinivas_beta(t: usize, params: &SrinivasBetaParams) -> Result<f64> {
    let SrinivasBetaParams { delta, a, b, r, d } = *params;
    let t = t as f64;
    let d_f = d as f64;
    let pi2 = std::f64::consts::PI.powi(2);
    let inner = (4.0 * d_f * a / delta).ln();
    if !(inner > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ln(4da/δ) = {inner} is not positive"
        )));
    }
    let beta = 2.0 * (t * t * pi2 / (3.0 * delta)).ln()
        + 2.0 * d_f * (t * t * d_f * b * r * inner.sqrt()).ln();
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "GP-UCB beta is non-positive ({beta}) at t = {t}"
        )));
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        // Values from an independent 40-digit evaluation.
        assert!((kappa(5, 1.0) - 5.769_073_486_325_243).abs() < 1e-12);
        assert!((kappa(2, 8.0) - 0.429_031_386_606_969).abs() < 1e-12);
        for theta in [0.1, 0.5, 1.0, 8.0, 100.0] {
            assert!(kappa(1, theta) < 0.0);
            assert!(kappa(2, theta) > 0.0);
        }
    }

    #[test]
    fn shape_clamps_at_t1() {
        let s = GammaBetaSchedule::new(1.0).unwrap();
        assert_eq!(s.shape(1), DEFAULT_SHAPE_FLOOR);
        let mut rng = RngStream::new(0);
        assert!(rgp_ucb_beta(1, &s, &mut rng) > 0.0);
    }

    #[test]
    fn schedule_validation() {
        assert!(GammaBetaSchedule::new(0.0).is_err());
        assert!(GammaBetaSchedule::new(-1.0).is_err());
        assert!(GammaBetaSchedule::with_floor(1.0, 0.0).is_err());
    }

    #[test]
    fn beta_draw_is_deterministic() {
        let s = GammaBetaSchedule::new(2.0).unwrap();
        let a = rgp_ucb_beta(7, &s, &mut RngStream::new(99));
        let b = rgp_ucb_beta(7, &s, &mut RngStream::new(99));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn srinivas_examples() {
        let p = SrinivasBetaParams::new(0.1, 1.0, 1.0, 1.0, 1).unwrap();
        assert!((srinivas_beta(10, &p).unwrap() - 26.712_868_636_965_075).abs() < 1e-10);
        assert!((srinivas_beta(1, &p).unwrap() - 8.292_187_893_012_709).abs() < 1e-10);
        let mut prev = srinivas_beta(1, &p).unwrap();
        for t in 2..500 {
            let b = srinivas_beta(t, &p).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn srinivas_rejects_negative_totals() {
        assert!(SrinivasBetaParams::new(1.5, 1.0, 1.0, 1.0, 1).is_err());
        let tiny = SrinivasBetaParams::new(0.99, 1.0, 1e-6, 1e-6, 3).unwrap();
        assert!(srinivas_beta(1, &tiny).is_err());
    }

    #[test]
    fn mean_beta_grows_with_theta() {
        for t in 3..200 {
            let lo = GammaBetaSchedule::new(0.5).unwrap().mean(t);
            let hi = GammaBetaSchedule::new(8.0).unwrap().mean(t);
            assert!(hi > lo, "t = {t}");
        }
    }
}
