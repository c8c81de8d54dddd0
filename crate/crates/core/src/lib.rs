//! Bayesian optimisation with a randomised GP-UCB acquisition function.
//!
//! The exploration weight `β_t` of GP-UCB is drawn each iteration from a
//! `Gamma(κ_t, θ)` distribution whose shape grows with the iteration count.
//! The scale `θ` shifts the expected `β_t` (and therefore the amount of
//! exploration) while the Bayesian regret stays sub-linear.
//!
//! The crate is split into:
//!
//! - [`gp`]: squared-exponential Gaussian-process regression.
//! - [`sampling`]: seeded random streams, Gamma sampling and quantiles,
//!   Latin-hypercube designs.
//! - [`acquisition`]: RGP-UCB, GP-UCB, EI and Thompson sampling plus the
//!   inner acquisition maximiser.
//! - [`benchmarks`]: Dropwave, Sphere, Alpine 2 and Ackley as maximisation
//!   problems.
//! - [`experiment`]: the optimisation loop, regret accounting, aggregation
//!   across repeats and the Bayesian-regret bound evaluator.

pub mod acquisition;
pub mod benchmarks;
mod error;
pub mod experiment;
pub mod gp;
mod linalg;
pub mod sampling;
mod space;

pub use error::{Error, Result};
pub use space::Bounds;
