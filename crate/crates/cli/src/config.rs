//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every key may appear
//! once per file; `--set key=value` overrides are applied on top, then
//! `--seed`. A run manifest (JSON) is also accepted in place of a config
//! file, so archived runs can be replayed directly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rgpucb::acquisition::SrinivasBetaParams;
use rgpucb::benchmarks::{make_problem, BenchmarkProblem, PROBLEM_NAMES};
use rgpucb::experiment::{default_lengthscale, ExperimentConfig, Method, PriorCheckOptions};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const RUN_KEYS: [&str; 13] = [
    "problem",
    "method",
    "theta",
    "delta",
    "a",
    "b",
    "r",
    "iterations",
    "initial_points",
    "repeats",
    "lengthscale",
    "noise_std",
    "seed",
];

pub const BOUND_KEYS: [&str; 8] = [
    "lengthscale",
    "grid_size",
    "grid_dim",
    "iterations",
    "theta",
    "repeats",
    "noise_std",
    "seed",
];

pub const METHOD_NAMES: [&str; 4] = ["rgp-ucb", "gp-ucb", "ei", "thompson"];

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
    Flag,
    Manifest,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => f.write_str("--set override"),
            Origin::Flag => f.write_str("command-line flag"),
            Origin::Manifest => f.write_str("manifest"),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: Origin,
}

/// Raw settings keyed by name, before defaults and validation.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    entries: BTreeMap<String, Entry>,
}

fn config_error(origin: &Origin, key: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("{origin}: key `{key}`: {msg}"))
}

impl Settings {
    /// Parses config text, rejecting keys outside `allowed`.
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = Origin::Line(i + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{origin}: expected `key = value`, found `{line}`"))
            })?;
            let key = key.trim();
            if settings.entries.contains_key(key) {
                return Err(config_error(&origin, key, "set more than once"));
            }
            settings.insert(key, value.trim(), origin, allowed)?;
        }
        Ok(settings)
    }

    /// Loads a config file or a run manifest.
    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            let manifest: ManifestConfig = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("{} is not a valid run manifest: {e}", path.display()))
            })?;
            let mut settings = Settings::default();
            for (key, value) in manifest.config.to_pairs() {
                settings.insert(&key, &value, Origin::Manifest, allowed)?;
            }
            return Ok(settings);
        }
        Self::parse(&text, allowed)
    }

    fn insert(&mut self, key: &str, value: &str, origin: Origin, allowed: &[&str]) -> Result<(), CliError> {
        if !allowed.contains(&key) {
            return Err(config_error(
                &origin,
                key,
                format!("unknown key; valid keys: {}", allowed.join(", ")),
            ));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                origin,
            },
        );
        Ok(())
    }

    /// Applies `key=value` overrides.
    pub fn apply_overrides(&mut self, overrides: &[String], allowed: &[&str]) -> Result<(), CliError> {
        for o in overrides {
            let (key, value) = o.split_once('=').ok_or_else(|| {
                CliError::Config(format!("--set expects key=value, found `{o}`"))
            })?;
            self.insert(key.trim(), value.trim(), Origin::Override, allowed)?;
        }
        Ok(())
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.entries.insert(
            "seed".into(),
            Entry {
                value: seed.to_string(),
                origin: Origin::Flag,
            },
        );
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| config_error(&e.origin, key, format!("cannot parse `{}`: {err}", e.value))),
        }
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries
            .get(key)
            .map(|e| e.origin.clone())
            .unwrap_or(Origin::Flag)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Rejects a value failing `ok`, naming the key and its origin.
    fn check<T: Copy + fmt::Display>(&self, key: &str, value: T, ok: bool, want: &str) -> Result<T, CliError> {
        if ok {
            Ok(value)
        } else {
            Err(config_error(&self.origin(key), key, format!("must be {want} (got {value})")))
        }
    }

    fn positive(&self, key: &str, value: f64) -> Result<f64, CliError> {
        self.check(key, value, value > 0.0 && value.is_finite(), "positive")
    }

    fn at_least_one(&self, key: &str, value: usize) -> Result<usize, CliError> {
        self.check(key, value, value >= 1, "at least 1")
    }

    /// Comma-separated list of reals.
    pub fn real_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        let origin = self.origin(key);
        raw.split(',')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| config_error(&origin, key, format!("cannot parse `{s}`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// A fully resolved `run` configuration; every default is explicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: String,
    pub methods: Vec<String>,
    pub theta: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub iterations: usize,
    pub initial_points: usize,
    pub repeats: usize,
    pub lengthscale: f64,
    pub noise_std: f64,
    pub seed: u64,
}

#[derive(Deserialize)]
struct ManifestConfig {
    config: RunConfig,
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<Self, CliError> {
        let problem_name: String = s
            .get("problem")?
            .ok_or_else(|| CliError::Config(format!("key `problem` is required; valid problems: {}", PROBLEM_NAMES.join(", "))))?;
        let problem = make_problem(&problem_name)
            .map_err(|e| config_error(&s.origin("problem"), "problem", e))?;

        let methods: Vec<String> = match s.raw("method") {
            None => vec!["rgp-ucb".to_string()],
            Some(raw) => raw.split(',').map(|m| m.trim().to_ascii_lowercase()).filter(|m| !m.is_empty()).collect(),
        };
        if methods.is_empty() {
            return Err(config_error(&s.origin("method"), "method", "no method given"));
        }
        for m in &methods {
            if !METHOD_NAMES.contains(&m.as_str()) {
                return Err(config_error(
                    &s.origin("method"),
                    "method",
                    format!("unknown method `{m}`; valid methods: {}", METHOD_NAMES.join(", ")),
                ));
            }
        }

        let d = problem.dimension();
        let theta = s.positive("theta", s.get("theta")?.unwrap_or(1.0))?;
        let delta: f64 = s.get("delta")?.unwrap_or(0.1);
        s.check("delta", delta, delta > 0.0 && delta < 1.0, "in (0, 1)")?;
        let a = s.positive("a", s.get("a")?.unwrap_or(1.0))?;
        let b = s.positive("b", s.get("b")?.unwrap_or(1.0))?;
        let r = s.positive("r", s.get("r")?.unwrap_or(problem.bounds().max_side()))?;
        let iterations = s.at_least_one("iterations", s.get("iterations")?.unwrap_or(40 * d))?;
        let initial_points = s.at_least_one("initial_points", s.get("initial_points")?.unwrap_or(3 * d + 1))?;
        let repeats = s.at_least_one("repeats", s.get("repeats")?.unwrap_or(10))?;
        let lengthscale = s.positive("lengthscale", s.get("lengthscale")?.unwrap_or_else(|| default_lengthscale(&problem)))?;
        let noise_std: f64 = s.get("noise_std")?.unwrap_or_else(|| problem.noise_std());
        s.check("noise_std", noise_std, noise_std >= 0.0 && noise_std.is_finite(), "non-negative")?;
        let seed = s.get("seed")?.unwrap_or(0);

        let config = Self {
            problem: problem.name().to_string(),
            methods,
            theta,
            delta,
            a,
            b,
            r,
            iterations,
            initial_points,
            repeats,
            lengthscale,
            noise_std,
            seed,
        };
        // Surface anything the library rejects as a config error too.
        for m in &config.methods {
            config.experiment(m)?;
        }
        Ok(config)
    }

    pub fn benchmark(&self) -> Result<BenchmarkProblem, CliError> {
        make_problem(&self.problem)
            .and_then(|p| p.with_noise_std(self.noise_std))
            .map_err(|e| CliError::Config(format!("key `problem`: {e}")))
    }

    /// Library configuration for one method.
    pub fn experiment(&self, method: &str) -> Result<ExperimentConfig, CliError> {
        let problem = self.benchmark()?;
        let method = match method {
            "rgp-ucb" => Method::rgp_ucb(self.theta).map_err(|e| CliError::Config(format!("key `theta`: {e}")))?,
            "gp-ucb" => Method::GpUcb(
                SrinivasBetaParams::new(self.delta, self.a, self.b, self.r, problem.dimension())
                    .map_err(|e| CliError::Config(format!("keys `delta`/`a`/`b`/`r`: {e}")))?,
            ),
            "ei" => Method::Ei,
            "thompson" => Method::Thompson,
            other => return Err(CliError::Config(format!("key `method`: unknown method `{other}`"))),
        };
        let mut config = ExperimentConfig::new(problem, method);
        config.iterations = self.iterations;
        config.initial_points = self.initial_points;
        config.repeats = self.repeats;
        config.lengthscale = self.lengthscale;
        config.noise_std = self.noise_std;
        config.base_seed = self.seed;
        config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }

    /// Canonical `key = value` pairs; floats use round-trip formatting.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        vec![
            ("problem".into(), self.problem.clone()),
            ("method".into(), self.methods.join(",")),
            ("theta".into(), self.theta.to_string()),
            ("delta".into(), self.delta.to_string()),
            ("a".into(), self.a.to_string()),
            ("b".into(), self.b.to_string()),
            ("r".into(), self.r.to_string()),
            ("iterations".into(), self.iterations.to_string()),
            ("initial_points".into(), self.initial_points.to_string()),
            ("repeats".into(), self.repeats.to_string()),
            ("lengthscale".into(), self.lengthscale.to_string()),
            ("noise_std".into(), self.noise_std.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }

    pub fn to_text(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

/// Resolved `verify-bounds` options.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConfig {
    pub thetas: Vec<f64>,
    pub lengthscale: f64,
    pub grid_size: usize,
    pub grid_dim: usize,
    pub iterations: usize,
    pub repeats: usize,
    pub noise_std: f64,
    pub seed: u64,
}

impl BoundConfig {
    pub fn resolve(s: &Settings) -> Result<Self, CliError> {
        let base = PriorCheckOptions::default();
        let thetas = s.real_list("theta")?.unwrap_or_else(|| vec![0.5, 1.0, 8.0]);
        if thetas.is_empty() {
            return Err(config_error(&s.origin("theta"), "theta", "empty list"));
        }
        for &t in &thetas {
            s.positive("theta", t)?;
        }
        let grid_size: usize = s.get("grid_size")?.unwrap_or(base.grid_size);
        s.check("grid_size", grid_size, (1..=rgpucb::experiment::MAX_PRIOR_GRID).contains(&grid_size), "in 1..=4096")?;
        let grid_dim: usize = s.get("grid_dim")?.unwrap_or(base.grid_dim);
        s.check("grid_dim", grid_dim, grid_dim == 1 || grid_dim == 2, "1 or 2")?;
        if grid_dim == 2 {
            let side = (grid_size as f64).sqrt().round() as usize;
            s.check("grid_size", grid_size, side * side == grid_size, "a perfect square for a 2-D grid")?;
        }
        let iterations: usize = s.get("iterations")?.unwrap_or(base.iterations);
        s.check("iterations", iterations, iterations >= 2, "at least 2")?;
        let noise_std: f64 = s.get("noise_std")?.unwrap_or(base.noise_std);
        s.check("noise_std", noise_std, noise_std >= 0.0 && noise_std.is_finite(), "non-negative")?;
        Ok(Self {
            thetas,
            lengthscale: s.positive("lengthscale", s.get("lengthscale")?.unwrap_or(base.lengthscale))?,
            grid_size,
            grid_dim,
            iterations,
            repeats: s.at_least_one("repeats", s.get("repeats")?.unwrap_or(base.repeats))?,
            noise_std,
            seed: s.get("seed")?.unwrap_or(0),
        })
    }

    pub fn options(&self, theta: f64) -> PriorCheckOptions {
        PriorCheckOptions {
            lengthscale: self.lengthscale,
            grid_size: self.grid_size,
            grid_dim: self.grid_dim,
            iterations: self.iterations,
            theta,
            repeats: self.repeats,
            noise_std: self.noise_std,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::resolve(&Settings::parse(text, &RUN_KEYS)?)
    }

    #[test]
    fn defaults_are_filled_in() {
        let c = resolve("problem = sphere\n").unwrap();
        assert_eq!(c.methods, vec!["rgp-ucb"]);
        assert_eq!(c.iterations, 160);
        assert_eq!(c.initial_points, 13);
        assert_eq!(c.repeats, 10);
        assert_eq!(c.r, 10.24);
        assert!(c.noise_std > 0.0);
    }

    #[test]
    fn comments_and_method_lists() {
        let c = resolve("# sweep\nproblem = dropwave\n\nmethod = rgp-ucb, ei\ntheta=8\n").unwrap();
        assert_eq!(c.methods, vec!["rgp-ucb", "ei"]);
        assert_eq!(c.theta, 8.0);
    }

    #[test]
    fn errors_name_line_and_key() {
        let err = resolve("problem = sphere\ntheta = -1\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("`theta`"), "{err}");
        let err = resolve("problem = sphere\nbogus = 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("`bogus`"), "{err}");
        let err = resolve("problem = sphere\niterations = many\n").unwrap_err().to_string();
        assert!(err.contains("`iterations`"), "{err}");
        let err = resolve("problem = sphere\nproblem = ackley\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(resolve("problem sphere\n").unwrap_err().to_string().contains("line 1"));
        assert!(resolve("theta = 1\n").is_err());
        assert!(resolve("problem = sphere\nmethod = sgd\n").unwrap_err().to_string().contains("`method`"));
    }

    #[test]
    fn overrides_and_seed_flag() {
        let mut s = Settings::parse("problem = sphere\nrepeats = 4\n", &RUN_KEYS).unwrap();
        s.apply_overrides(&["repeats=2".into(), "theta = 0.5".into()], &RUN_KEYS).unwrap();
        s.set_seed(9);
        let c = RunConfig::resolve(&s).unwrap();
        assert_eq!((c.repeats, c.theta, c.seed), (2, 0.5, 9));
        let mut bad = s.clone();
        let err = bad.apply_overrides(&["delta=2".into()], &RUN_KEYS).and_then(|_| RunConfig::resolve(&bad).map(|_| ()));
        assert!(err.unwrap_err().to_string().contains("--set override"));
    }

    #[test]
    fn text_round_trip() {
        let c = resolve("problem = alpine2\nmethod = gp-ucb,thompson\nnoise_std = 0.1\n").unwrap();
        let again = resolve(&c.to_text()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn bound_options() {
        let s = Settings::parse("theta = 1, 8\ngrid_size = 64\n", &BOUND_KEYS).unwrap();
        let b = BoundConfig::resolve(&s).unwrap();
        assert_eq!(b.thetas, vec![1.0, 8.0]);
        assert_eq!(b.grid_size, 64);
        let bad = Settings::parse("grid_size = 10\ngrid_dim = 2\n", &BOUND_KEYS).unwrap();
        assert!(BoundConfig::resolve(&bad).is_err());
        let none = Settings::parse("theta = ,\n", &BOUND_KEYS).unwrap();
        assert!(BoundConfig::resolve(&none).is_err());
    }
}
