//! Gamma distribution: sampling, CDF and quantile function.

use super::RngStream;
use crate::error::{Error, Result};

/// Shape/scale parameterisation of `Gamma(shape, scale)`; mean `shape·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma shape must be positive and finite (got {shape})"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma scale must be positive and finite (got {scale})"
            )));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

/// Draws one `Gamma(shape, scale)` variate.
///
/// Marsaglia–Tsang squeeze for `shape ≥ 1`; smaller shapes use
/// `Gamma(shape + 1) · U^{1/shape}`. The result is strictly positive: for
/// very small shapes the true draw can underflow `f64`, in which case the
/// smallest positive normal value is returned.
pub fn gamma_sample(params: &GammaParams, rng: &mut RngStream) -> f64 {
    let GammaParams { shape, scale } = *params;
    let draw = if shape >= 1.0 {
        marsaglia_tsang(shape, rng)
    } else {
        let boosted = marsaglia_tsang(shape + 1.0, rng);
        let log_u = rng.uniform_open0().ln();
        (boosted.ln() + log_u / shape).exp()
    };
    (draw * scale).max(f64::MIN_POSITIVE)
}

fn marsaglia_tsang(shape: f64, rng: &mut RngStream) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.uniform_open0();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularised lower incomplete gamma `P(a, x)`.
fn regularized_lower(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let log_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        // Series: P = e^{-x} x^a / Γ(a+1) · Σ x^n / ((a+1)…(a+n)).
        let mut term = 1.0 / a;
        let mut sum = term;
        for n in 1..10_000 {
            term *= x / (a + n as f64);
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        (sum.ln() + log_prefix).exp().min(1.0)
    } else {
        // Continued fraction for Q (modified Lentz).
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-17 {
                break;
            }
        }
        let q = (log_prefix + h.ln()).exp();
        (1.0 - q).max(0.0)
    }
}

/// CDF of `Gamma(shape, scale)` at `x`.
pub fn gamma_cdf(x: f64, params: &GammaParams) -> f64 {
    regularized_lower(params.shape, x / params.scale)
}

/// Quantile function: the `x` with `P(shape, x / scale) = p`.
///
/// Safeguarded Newton iteration on `ln x`, bracketed so that every step
/// stays inside an interval known to contain the root.
pub fn gamma_inverse_cdf(p: f64, params: &GammaParams) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "quantile level must lie in [0, 1) (got {p})"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let a = params.shape;
    let cdf = |u: f64| regularized_lower(a, u.exp());

    // Bracket the root in u = ln(x / scale).
    let mut hi = a.max(1.0).ln();
    while cdf(hi) < p {
        hi += std::f64::consts::LN_2;
    }
    let mut lo = hi - std::f64::consts::LN_2;
    while lo > -740.0 && cdf(lo) > p {
        lo -= 4.0 * std::f64::consts::LN_2;
    }
    if cdf(lo) > p {
        // Root below the smallest representable x.
        return Ok(0.0);
    }

    let mut u = 0.5 * (lo + hi);
    for _ in 0..300 {
        let f = cdf(u) - p;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        // dP/du = x · density(x) = exp(a ln x - x - lnΓ(a)).
        let slope = (a * u - u.exp() - ln_gamma(a)).exp();
        let newton = u - f / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - u).abs();
        u = next;
        if step < 1e-15 || hi - lo < 1e-15 {
            break;
        }
    }
    Ok(params.scale * u.exp())
}
