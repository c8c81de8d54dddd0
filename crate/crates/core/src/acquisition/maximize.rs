//! Bounded multi-start maximiser for acquisition surfaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::RngStream;
use crate::space::Bounds;

/// Hard cap on surface evaluations per local refinement.
const MAX_LOCAL_EVALS: usize = 20_000;
/// Initial coordinate step as a fraction of each box side.
const INITIAL_STEP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximizerBudget {
    /// Uniform random probes.
    pub n_probe: usize,
    /// Best probes refined by coordinate search.
    pub n_start: usize,
    /// Refinement stops once the coordinate step drops below this length.
    pub tol_x: f64,
}

impl MaximizerBudget {
    /// `1000·d` probes, 10 starts, `tol_x = 1e-4 ·` box diagonal.
    pub fn default_for(bounds: &Bounds) -> Self {
        Self {
            n_probe: 1000 * bounds.dim(),
            n_start: 10,
            tol_x: 1e-4 * bounds.diagonal(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMaximum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Maximises `surface` over `bounds`.
///
/// Evaluates `n_probe` uniform probes, then refines the `n_start` best by
/// coordinate search with step doubling along improving directions and
/// halving once a full sweep fails to improve. The returned value is the
/// surface value at the returned point and is never below any probe.
pub fn maximize_acquisition<F>(
    mut surface: F,
    bounds: &Bounds,
    rng: &mut RngStream,
    budget: &MaximizerBudget,
) -> Result<SurfaceMaximum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let d = bounds.dim();
    let n_probe = budget.n_probe.max(1);
    let mut probes = Vec::with_capacity(n_probe);
    for _ in 0..n_probe {
        let x: Vec<f64> = (0..d)
            .map(|i| rng.uniform_in(bounds.lower()[i], bounds.upper()[i]))
            .collect();
        let v = checked(&mut surface, &x)?;
        probes.push((x, v));
    }

    let mut order: Vec<usize> = (0..probes.len()).collect();
    // Stable sort: equal values keep probe order.
    order.sort_by(|&a, &b| probes[b].1.total_cmp(&probes[a].1));

    let mut best = probes[order[0]].clone();
    for &idx in order.iter().take(budget.n_start) {
        let (x, v) = probes[idx].clone();
        let (x, v) = refine(&mut surface, bounds, x, v, budget.tol_x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(SurfaceMaximum {
        point: best.0,
        value: best.1,
    })
}

fn checked<F>(surface: &mut F, x: &[f64]) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let v = surface(x)?;
    if v.is_nan() {
        return Err(Error::Internal(format!("acquisition surface returned NaN at {x:?}")));
    }
    Ok(v)
}

fn refine<F>(
    surface: &mut F,
    bounds: &Bounds,
    mut x: Vec<f64>,
    mut v: f64,
    tol_x: f64,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let d = bounds.dim();
    let max_side = bounds.max_side();
    let mut fraction = INITIAL_STEP_FRACTION;
    let mut evals = 0;
    while fraction * max_side >= tol_x && evals < MAX_LOCAL_EVALS {
        let mut improved = false;
        for i in 0..d {
            let base_step = fraction * bounds.width(i);
            for dir in [1.0, -1.0] {
                let mut moved = false;
                let mut step = base_step;
                loop {
                    let coord = bounds.clamp(i, x[i] + dir * step);
                    if coord == x[i] {
                        break;
                    }
                    let mut cand = x.clone();
                    cand[i] = coord;
                    let fc = checked(surface, &cand)?;
                    evals += 1;
                    if fc > v {
                        x = cand;
                        v = fc;
                        moved = true;
                        step *= 2.0;
                    } else {
                        break;
                    }
                }
                if moved {
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            fraction *= 0.5;
        }
    }
    Ok((x, v))
}
