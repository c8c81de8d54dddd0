//! The optimisation loop, regret accounting and repeat aggregation.
//!
//! A run seeds a Latin-hypercube design of `initial_points`, then for each
//! iteration fits a GP to the standardised observations, picks `x_t` with
//! the configured acquisition and records the noisy observation. Repeat `r`
//! uses seed `base_seed ^ (r · 0x9E3779B97F4A7C15)`, so runs are reproducible
//! regardless of how repeats are scheduled across threads.

mod aggregate;
mod bo_loop;
mod bound;
mod config;
mod regret;

pub use aggregate::{aggregate, aggregate_series, Aggregate};
pub use bo_loop::{bo_loop, run_repeats, IterationRecord, Standardizer, GP_NOISE_FLOOR};
pub use bound::{
    bound_terms, expected_max_beta, mgf_audit, prior_function_check, r2_series, regret_bound,
    BoundReport, BoundTerms, MgfAudit, PriorCheckOptions, PriorDiagnostics, EULER_GAMMA,
    MAX_PRIOR_GRID, MGF_AUDIT_DRAWS,
};
pub use config::{default_lengthscale, ExperimentConfig, Method};
pub use regret::{bayes_regret_estimate, cumulative_regret, RegretTrace};
