use rgpucb::acquisition::{kappa, rgp_ucb_beta, GammaBetaSchedule};
use rgpucb::experiment::{expected_max_beta, mgf_audit};
use rgpucb::sampling::{gamma_cdf, gamma_inverse_cdf, gamma_sample, GammaParams, RngStream};

const SHAPES: [f64; 3] = [0.5, 1.0, 3.0];
const SCALES: [f64; 3] = [0.5, 1.0, 8.0];

fn gamma_fn(shape: f64) -> f64 {
    match shape {
        0.5 => std::f64::consts::PI.sqrt(),
        1.0 => 1.0,
        3.0 => 2.0,
        _ => unreachable!(),
    }
}

/// `P(X ≤ x)` by composite Simpson on `x = u²`, where the integrand
/// `2u · f(u²)` is smooth at zero for every shape ≥ 1/2.
fn cdf_by_quadrature(x: f64, shape: f64, scale: f64) -> f64 {
    let density = |u: f64| {
        if u == 0.0 {
            return if shape == 0.5 { 2.0 / (gamma_fn(shape) * scale.sqrt()) } else { 0.0 };
        }
        let t = u * u;
        2.0 * u * t.powf(shape - 1.0) * (-t / scale).exp() / (gamma_fn(shape) * scale.powf(shape))
    };
    let m = 20_000;
    let h = x.sqrt() / m as f64;
    let mut s = density(0.0) + density(x.sqrt());
    for i in 1..m {
        s += density(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn inverse_cdf_agrees_with_quadrature() {
    for &a in &SHAPES {
        for &s in &SCALES {
            let params = GammaParams::new(a, s).unwrap();
            for k in 1..10 {
                let p = k as f64 / 10.0;
                let x = gamma_inverse_cdf(p, &params).unwrap();
                let q = cdf_by_quadrature(x, a, s);
                assert!((q - p).abs() < 1e-7, "shape {a} scale {s} p {p}: {q}");
            }
        }
    }
}

#[test]
fn inverse_cdf_exponential_cases() {
    let unit = GammaParams::new(1.0, 1.0).unwrap();
    assert!((gamma_inverse_cdf(0.9, &unit).unwrap() - 10f64.ln()).abs() < 1e-9);
    let two = GammaParams::new(1.0, 2.0).unwrap();
    assert!((gamma_inverse_cdf(0.5, &two).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);
}

#[test]
fn sampler_moments_and_deciles() {
    let n = 1_000_000;
    let mut rng = RngStream::new(77);
    for &a in &SHAPES {
        for &s in &SCALES {
            let params = GammaParams::new(a, s).unwrap();
            let mut draws: Vec<f64> = (0..n).map(|_| gamma_sample(&params, &mut rng)).collect();
            let mean = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            assert!((mean / (a * s) - 1.0).abs() < 0.01, "mean ({a},{s}) {mean}");
            assert!((var / (a * s * s) - 1.0).abs() < 0.02, "var ({a},{s}) {var}");

            draws.sort_by(f64::total_cmp);
            for k in 1..10 {
                let x = gamma_inverse_cdf(k as f64 / 10.0, &params).unwrap();
                let below = draws.partition_point(|&v| v <= x) as f64 / n as f64;
                assert!((below - k as f64 / 10.0).abs() < 0.005, "decile {k} ({a},{s}): {below}");
                assert!((gamma_cdf(x, &params) - k as f64 / 10.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn exponential_empirical_cdf() {
    let params = GammaParams::new(1.0, 2.0).unwrap();
    let mut rng = RngStream::new(8);
    let n = 1_000_000;
    let below = (0..n).filter(|_| gamma_sample(&params, &mut rng) <= 2.0).count() as f64 / n as f64;
    assert!((below - (1.0 - (-1f64).exp())).abs() < 0.005);
}

#[test]
fn beta_means_follow_kappa_theta() {
    let mut rng = RngStream::new(4);
    let n = 1_000_000;
    for t in [2, 5, 50] {
        for theta in [0.5, 1.0, 8.0] {
            let schedule = GammaBetaSchedule::new(theta).unwrap();
            let mean = (0..n).map(|_| rgp_ucb_beta(t, &schedule, &mut rng)).sum::<f64>() / n as f64;
            let expect = kappa(t, theta).max(1e-3) * theta;
            assert!((mean / expect - 1.0).abs() < 0.01, "t {t} θ {theta}: {mean} vs {expect}");
        }
    }
}

#[test]
fn larger_theta_raises_mean_beta() {
    let mut rng = RngStream::new(6);
    let n = 1_000_000;
    let mean = |theta: f64, rng: &mut RngStream| {
        let s = GammaBetaSchedule::new(theta).unwrap();
        (0..n).map(|_| rgp_ucb_beta(5, &s, rng)).sum::<f64>() / n as f64
    };
    let low = mean(0.5, &mut rng);
    let high = mean(8.0, &mut rng);
    assert!(high > low, "{high} vs {low}");
}

#[test]
fn mgf_identity_holds() {
    let mut rng = RngStream::new(10);
    for (k, theta) in [(1.0, 1.0), (5.77, 1.0), (0.43, 8.0)] {
        let audit = mgf_audit(k, theta, 1_000_000, &mut rng).unwrap();
        assert!(audit.relative_error() < 0.01, "{audit:?}");
        println!(
            "κ {k} θ {theta}: E[exp(-β/2)] {:.6} closed form {:.6} E[exp(-√β/2)] {:.6}",
            audit.mean_exp_neg_half_beta, audit.closed_form, audit.mean_exp_neg_half_sqrt_beta
        );
    }
}

#[test]
fn expected_max_beta_against_monte_carlo() {
    let approx = expected_max_beta(10, 1.0, 1.0).unwrap();
    assert!((approx - (0.577_215_664_901_532_9 + 10f64.ln())).abs() < 1e-9);

    // E[max of 10 unit exponentials] is the harmonic number H₁₀.
    let h10: f64 = (1..=10).map(|k| 1.0 / k as f64).sum();
    let params = GammaParams::new(1.0, 1.0).unwrap();
    let mut rng = RngStream::new(11);
    let reps = 200_000;
    let mc = (0..reps)
        .map(|_| (0..10).map(|_| gamma_sample(&params, &mut rng)).fold(0.0, f64::max))
        .sum::<f64>()
        / reps as f64;
    assert!((mc - h10).abs() < 0.02, "{mc}");
    println!("E[max β] approximation {approx:.6}, Monte-Carlo {mc:.6}, H10 {h10:.6}");
}
