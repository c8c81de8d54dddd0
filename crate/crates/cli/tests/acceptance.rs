//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rgpucb::acquisition::{kappa, srinivas_beta, GammaBetaSchedule, SrinivasBetaParams, DEFAULT_SHAPE_FLOOR};
use rgpucb::benchmarks::make_problem;
use rgpucb::experiment::{mgf_audit, prior_function_check, run_repeats, ExperimentConfig, Method, PriorCheckOptions};
use rgpucb::gp::{Dataset, GpModel, KernelParams};
use rgpucb::sampling::{gamma_inverse_cdf, gamma_sample, GammaParams, RngStream};
use rgpucb_cli::{run, CommonArgs};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within_time(v: Verdict, elapsed: Duration, limit: Duration) -> Verdict {
    let ok = elapsed <= limit;
    Verdict {
        pass: v.pass && ok,
        detail: format!("{}; {:.1}s (limit {}s)", v.detail, elapsed.as_secs_f64(), limit.as_secs()),
    }
}

// 1. Posterior moments against an LU solve of the dense system.
fn gp_oracle() -> Verdict {
    let mut rng = RngStream::new(1);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let n = 1 + (rng.uniform() * 20.0) as usize;
        let d = 1 + case % 5;
        let l = rng.uniform_in(0.2, 2.0);
        let noise = rng.uniform_in(0.01, 0.5);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.uniform()).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let k = |a: &[f64], b: &[f64]| (-a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>() / (2.0 * l * l)).exp();
        let a = DMatrix::from_fn(n, n, |i, j| k(&pts[i], &pts[j]) + if i == j { noise * noise } else { 0.0 });
        let lu = a.lu();
        let w = lu.solve(&DVector::from_column_slice(&y)).unwrap();
        let model = GpModel::fit(
            Dataset::from_parts(d, pts.clone(), y.clone()).unwrap(),
            KernelParams::new(l, noise).unwrap(),
        )
        .unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..d).map(|_| rng.uniform_in(-0.25, 1.25)).collect();
            let ks = DVector::from_fn(n, |i, _| k(&pts[i], &x));
            let mean = ks.dot(&w);
            let var = (1.0 - ks.dot(&lu.solve(&ks).unwrap())).clamp(0.0, 1.0);
            let got = model.posterior(&x).unwrap();
            worst = worst.max((got.mean - mean).abs()).max((got.variance - var).abs());
        }
    }
    verdict(worst <= 1e-8, format!("max abs deviation {worst:.2e} over 100 datasets (tol 1e-8)"))
}

// 2. Gamma moments over the 9-point grid; exponential quantiles.
fn gamma_machinery() -> Verdict {
    let mut rng = RngStream::new(2);
    let n = 1_000_000;
    let (mut worst_mean, mut worst_var): (f64, f64) = (0.0, 0.0);
    for shape in [0.5, 1.0, 3.0] {
        for scale in [0.5, 1.0, 8.0] {
            let p = GammaParams::new(shape, scale).unwrap();
            let draws: Vec<f64> = (0..n).map(|_| gamma_sample(&p, &mut rng)).collect();
            let m = draws.iter().sum::<f64>() / n as f64;
            let v = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
            worst_mean = worst_mean.max((m / (shape * scale) - 1.0).abs());
            worst_var = worst_var.max((v / (shape * scale * scale) - 1.0).abs());
        }
    }
    let q1 = gamma_inverse_cdf(0.9, &GammaParams::new(1.0, 1.0).unwrap()).unwrap();
    let q2 = gamma_inverse_cdf(0.5, &GammaParams::new(1.0, 2.0).unwrap()).unwrap();
    let qerr = (q1 - 10f64.ln()).abs().max((q2 - 2.0 * 2f64.ln()).abs());
    verdict(
        worst_mean < 0.01 && worst_var < 0.02 && qerr <= 1e-9,
        format!(
            "worst mean rel err {:.3}% (tol 1%), worst var rel err {:.3}% (tol 2%), quantile err {qerr:.1e} (tol 1e-9)",
            100.0 * worst_mean,
            100.0 * worst_var
        ),
    )
}

// 3. Shape schedule against high-precision values.
fn kappa_formula() -> Verdict {
    let k51 = kappa(5, 1.0);
    let k28 = kappa(2, 8.0);
    let ok_vals = (k51 - 5.769_073_486_325_243).abs() < 1e-3 && (k28 - 0.429_031_386_606_969).abs() < 1e-3;
    let clamped = [0.1, 0.5, 1.0, 8.0, 100.0].iter().all(|&th| {
        let s = GammaBetaSchedule::new(th).unwrap();
        kappa(1, th) < 0.0 && s.shape(1) == DEFAULT_SHAPE_FLOOR
    });
    verdict(ok_vals && clamped, format!("kappa(5,1)={k51:.6}, kappa(2,8)={k28:.6}, t=1 negative and clamped: {clamped}"))
}

// 4. Classical schedule value and monotonicity.
fn srinivas() -> Verdict {
    let p = SrinivasBetaParams::new(0.1, 1.0, 1.0, 1.0, 1).unwrap();
    let b10 = srinivas_beta(10, &p).unwrap();
    let increasing = (1..2000).all(|t| srinivas_beta(t + 1, &p).unwrap() > srinivas_beta(t, &p).unwrap());
    verdict(
        (b10 - 26.712_868_636_965_075).abs() < 1e-2 && increasing,
        format!("beta(10)={b10:.4} (expected 26.713), strictly increasing for t<=2000: {increasing}"),
    )
}

// 5. E[exp(-β/2)] against the Gamma MGF.
fn mgf() -> Verdict {
    let mut rng = RngStream::new(5);
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, th) in [(1.0, 1.0), (5.77, 1.0), (0.43, 8.0)] {
        let a = mgf_audit(k, th, 1_000_000, &mut rng).unwrap();
        pass &= a.relative_error() < 0.01;
        parts.push(format!(
            "({k},{th}): {:.5} vs {:.5} [sqrt companion {:.5}]",
            a.mean_exp_neg_half_beta, a.closed_form, a.mean_exp_neg_half_sqrt_beta
        ));
    }
    verdict(pass, parts.join("; "))
}

// 6. Regret on prior draws stays under the bound.
fn bound_dominance() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, theta) in [0.5, 1.0, 8.0].into_iter().enumerate() {
        let opts = PriorCheckOptions {
            lengthscale: 0.2,
            grid_size: 256,
            grid_dim: 1,
            iterations: 50,
            theta,
            repeats: 20,
            noise_std: 0.01,
        };
        let r = prior_function_check(&opts, &mut RngStream::new(600 + i as u64)).unwrap();
        pass &= r.holds();
        parts.push(format!("θ={theta}: {:.3} ≤ {:.3}", r.empirical_bayes_regret, r.bound_value));
    }
    verdict(pass, parts.join("; "))
}

fn finals(problem: &str, method: Method, iterations: usize, seed: u64) -> Vec<f64> {
    let mut c = ExperimentConfig::new(make_problem(problem).unwrap(), method);
    c.iterations = iterations;
    c.repeats = 10;
    c.base_seed = seed;
    run_repeats(&c, 1)
        .unwrap()
        .iter()
        .map(|r| r.last().unwrap().best_so_far)
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

const PERFORMANCE_SEED: u64 = 2024;

// 7. θ ordering on Dropwave and Alpine2, compared seed by seed.
fn theta_ordering(alpine_low: &[f64]) -> Verdict {
    let dw_low = finals("dropwave", Method::rgp_ucb(0.5).unwrap(), 80, PERFORMANCE_SEED);
    let dw_high = finals("dropwave", Method::rgp_ucb(8.0).unwrap(), 80, PERFORMANCE_SEED);
    let al_high = finals("alpine2", Method::rgp_ucb(8.0).unwrap(), 200, PERFORMANCE_SEED);
    let dw_wins = dw_high.iter().zip(&dw_low).filter(|(h, l)| h > l).count();
    let al_wins = alpine_low.iter().zip(&al_high).filter(|(l, h)| l > h).count();
    verdict(
        dw_wins >= 8 && al_wins >= 8,
        format!(
            "dropwave θ=8 beats θ=0.5 in {dw_wins}/10 seeds (means {:.3} vs {:.3}); alpine2 θ=0.5 beats θ=8 in {al_wins}/10 seeds (means {:.2} vs {:.2}); need ≥8 each",
            mean(&dw_high),
            mean(&dw_low),
            mean(alpine_low),
            mean(&al_high)
        ),
    )
}

// 8. RGP-UCB against the classical schedule on Sphere.
fn rgp_vs_gp_ucb() -> Verdict {
    let problem = make_problem("sphere").unwrap();
    let rgp = finals("sphere", Method::rgp_ucb(0.5).unwrap(), 160, PERFORMANCE_SEED);
    let gp = finals("sphere", Method::gp_ucb_defaults(&problem).unwrap(), 160, PERFORMANCE_SEED);
    verdict(
        mean(&rgp) >= mean(&gp),
        format!("mean final best RGP-UCB θ=0.5 {:.4} vs GP-UCB {:.4}", mean(&rgp), mean(&gp)),
    )
}

// 9. Alpine2 sanity level.
fn alpine_level(alpine_low: &[f64]) -> Verdict {
    let m = mean(alpine_low);
    verdict(m >= 60.0, format!("mean final best {m:.2} (need ≥ 60)"))
}

// 10. Byte-identical traces for one and eight workers.
fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "problem = sphere\nmethod = rgp-ucb, gp-ucb, ei, thompson\ntheta = 2\nrepeats = 8\niterations = 15\nseed = 31\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for jobs in [1, 8] {
        let out = dir.path().join(format!("jobs{jobs}"));
        let args = CommonArgs {
            config: Some(cfg.clone()),
            jobs,
            out: Some(out.clone()),
            ..Default::default()
        };
        run(&args).unwrap();
        outputs.push(std::fs::read(out.join("traces.csv")).unwrap());
    }
    verdict(
        outputs[0] == outputs[1],
        format!("traces.csv at --jobs 1 and --jobs 8: {} bytes each, identical: {}", outputs[0].len(), outputs[0] == outputs[1]),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    let timed = |f: &dyn Fn() -> Verdict, limit: u64| {
        let start = Instant::now();
        let v = f();
        within_time(v, start.elapsed(), Duration::from_secs(limit))
    };

    results.push((1, "GP oracle equivalence", timed(&gp_oracle, 10)));
    results.push((2, "Gamma machinery", gamma_machinery()));
    results.push((3, "kappa formula", kappa_formula()));
    results.push((4, "Srinivas beta", srinivas()));
    results.push((5, "MGF audit", mgf()));
    results.push((6, "bound dominance", timed(&bound_dominance, 300)));

    let start = Instant::now();
    let alpine_low = finals("alpine2", Method::rgp_ucb(0.5).unwrap(), 200, PERFORMANCE_SEED);
    let shared = start.elapsed();
    let start = Instant::now();
    let v7 = theta_ordering(&alpine_low);
    results.push((7, "theta ordering", within_time(v7, shared + start.elapsed(), Duration::from_secs(1200))));
    results.push((8, "RGP-UCB vs GP-UCB", timed(&rgp_vs_gp_ucb, 600)));
    results.push((9, "Alpine2 level", alpine_level(&alpine_low)));
    results.push((10, "determinism across workers", determinism()));

    let mut failed = 0;
    for (id, name, v) in &results {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}): {}", v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
