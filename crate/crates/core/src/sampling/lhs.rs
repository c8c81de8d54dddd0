use super::RngStream;
use crate::error::{Error, Result};
use crate::space::Bounds;

/// Jittered Latin-hypercube design of `n` points inside `bounds`.
///
/// Each dimension is cut into `n` equal strata; an independent random
/// permutation assigns one stratum per point and the coordinate is drawn
/// uniformly inside it.
pub fn latin_hypercube(n: usize, bounds: &Bounds, rng: &mut RngStream) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "latin hypercube needs at least one point".into(),
        ));
    }
    let d = bounds.dim();
    let mut points = vec![vec![0.0; d]; n];
    for j in 0..d {
        let strata = rng.permutation(n);
        let lo = bounds.lower()[j];
        let width = bounds.width(j);
        for (point, &s) in points.iter_mut().zip(&strata) {
            let (s_lo, s_hi) = (s as f64 / n as f64, (s as f64 + 1.0) / n as f64);
            // Margin keeps rounding in `lo + unit * width` from crossing a stratum edge.
            let margin = 1e-9 * (s_hi - s_lo);
            let unit = (s_lo + rng.uniform() * (s_hi - s_lo)).clamp(s_lo + margin, s_hi - margin);
            point[j] = bounds.clamp(j, lo + unit * width);
        }
    }
    Ok(points)
}
