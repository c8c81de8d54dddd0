//! Random streams and distribution machinery.

mod gamma;
mod lhs;
mod rng;

pub use gamma::{gamma_cdf, gamma_inverse_cdf, gamma_sample, ln_gamma, GammaParams};
pub use lhs::latin_hypercube;
pub use rng::{normal_sample, RngStream};
