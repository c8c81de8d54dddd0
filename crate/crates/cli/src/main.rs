use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rgpucb_cli::{export_plot_data, run, sweep_theta, verify_bounds, CliError, CommonArgs};

#[derive(Parser)]
#[command(name = "rgpucb", version, about = "Bayesian optimisation experiments with randomised GP-UCB")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file (key = value lines) or a run manifest.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Base seed; overrides the config.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads for repeats; output does not depend on it.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override one config key.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl From<Common> for CommonArgs {
    fn from(c: Common) -> Self {
        CommonArgs {
            config: c.config,
            seed: c.seed,
            jobs: c.jobs,
            out: c.out,
            overrides: c.overrides,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured method and write traces, aggregates and a manifest.
    Run(Common),
    /// Final best-so-far of RGP-UCB across a list of theta values.
    SweepTheta {
        #[command(flatten)]
        common: Common,
        /// Comma-separated theta values (default 0.1,0.5,1,2,4,8,16).
        #[arg(long, value_name = "LIST")]
        thetas: Option<String>,
    },
    /// Regret on GP prior draws against the theoretical bound.
    VerifyBounds(Common),
    /// Per-method iteration/mean/std CSVs from a run directory.
    ExportPlotData {
        /// Directory holding a traces.csv.
        run_dir: PathBuf,
        /// Where to write the CSVs (default: the run directory).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn parse_thetas(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Config(format!("--thetas: cannot parse `{s}`: {e}")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(c) => run(&c.into()),
        Command::SweepTheta { common, thetas } => match thetas.as_deref().map(parse_thetas).transpose() {
            Ok(list) => sweep_theta(&common.into(), list.as_deref()),
            Err(e) => Err(e),
        },
        Command::VerifyBounds(c) => verify_bounds(&c.into()),
        Command::ExportPlotData { run_dir, out } => export_plot_data(&run_dir, out.as_deref()),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
