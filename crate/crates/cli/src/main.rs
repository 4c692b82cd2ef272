//! `smalltime` — small-maturity ATM option price asymptotics: classify
//! models, verify the closed-form constants by Monte Carlo, invert implied
//! vols and fit rate curves.
//!
//! Every command writes a single deterministic JSON report to stdout (or
//! `--out`). Exit codes: 0 success/consistent, 1 usage or config error,
//! 2 numeric error, 3 verdict not consistent.

use clap::{Parser, Subcommand, ValueEnum};
use smalltime_cli::config::load_model;
use smalltime_cli::parallel::Threads;
use smalltime_cli::report::{RunReport, Verdict};
use smalltime_cli::run::{
    analyze, fit_rate_report, implied_vol_report, mc_price, verify, RunError, VerifySettings,
};
use smalltime_core::mc::{Estimator, FitModel, McParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "smalltime", version, about = "Small-maturity ATM option price asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Mean,
    MedianOfMeans,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitModelArg {
    PurePower,
    PowerWithLog,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a model: leading order, coefficient, implied-vol asymptote.
    Analyze {
        /// Model config JSON file.
        config: PathBuf,
        /// Degree of moneyness θ in K_T = S₀ + θ√T.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo price curve and check it against the asymptote.
    Verify {
        /// Model config JSON file.
        config: PathBuf,
        /// Degree of moneyness θ.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Comma-separated strictly-decreasing geometric maturity grid.
        #[arg(long)]
        grid: Option<String>,
        /// Paths per maturity.
        #[arg(long, default_value_t = 100_000)]
        paths: u64,
        /// Seed (defaults to $SMALLTIME_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Ratio tolerance at the two smallest maturities.
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        /// Allowed deviation of the fitted exponent.
        #[arg(long, default_value_t = 0.1)]
        exp_margin: f64,
        /// Override the leading coefficient (negative-control hook).
        #[arg(long)]
        expect_coeff: Option<f64>,
        /// Euler steps for SDE paths.
        #[arg(long, default_value_t = 64)]
        steps: u32,
        /// Small-jump truncation cutoff.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo price at a single maturity.
    McPrice {
        /// Model config JSON file.
        config: PathBuf,
        /// Maturity T.
        #[arg(long)]
        maturity: f64,
        /// Degree of moneyness θ.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Number of paths.
        #[arg(long, default_value_t = 100_000)]
        paths: u64,
        /// Seed (defaults to $SMALLTIME_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Estimator (defaults to the model-appropriate choice).
        #[arg(long, value_enum)]
        estimator: Option<EstimatorArg>,
        /// Median-of-means block count.
        #[arg(long, default_value_t = 8)]
        blocks: u32,
        /// Euler steps for SDE paths.
        #[arg(long, default_value_t = 64)]
        steps: u32,
        /// Small-jump truncation cutoff.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact ATM Black–Scholes implied volatility.
    ImpliedVol {
        /// Observed call price.
        #[arg(long)]
        price: f64,
        /// Spot S₀.
        #[arg(long)]
        s0: f64,
        /// Maturity T.
        #[arg(long)]
        maturity: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a rate curve from a CSV of `T,value[,half_width]` rows.
    FitRate {
        /// CSV input path.
        #[arg(long)]
        csv: PathBuf,
        /// Functional form to fit.
        #[arg(long, value_enum, default_value = "pure-power")]
        model: FitModelArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("SMALLTIME_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn parse_grid(spec: Option<&str>) -> Result<Vec<f64>, RunError> {
    match spec {
        None => Ok(smalltime_cli::run::default_grid()),
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| {
                    RunError::Config(smalltime_cli::config::ConfigError::Io(format!(
                        "grid entry `{tok}` is not a number"
                    )))
                })
            })
            .collect(),
    }
}

fn emit(report: &RunReport, out: Option<&PathBuf>) -> Result<(), RunError> {
    let json = report.to_json();
    match out {
        None => {
            print!("{json}");
            Ok(())
        }
        Some(path) => std::fs::write(path, json).map_err(|e| {
            RunError::Config(smalltime_cli::config::ConfigError::Io(format!(
                "{}: {e}",
                path.display()
            )))
        }),
    }
}

fn execute(cli: Cli) -> Result<ExitCode, RunError> {
    match cli.command {
        Command::Analyze { config, theta, out } => {
            let model = load_model(&config)?;
            let report = analyze(&model, theta)?;
            emit(&report, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            config,
            theta,
            grid,
            paths,
            seed,
            tol,
            exp_margin,
            expect_coeff,
            steps,
            eps,
            workers,
            out,
        } => {
            let model = load_model(&config)?;
            let settings = VerifySettings {
                theta,
                grid: parse_grid(grid.as_deref())?,
                n_paths: paths,
                seed: env_seed(seed),
                tol,
                exp_margin,
                expect_coeff,
                params: McParams { n_steps: steps, truncation_eps: eps },
            };
            let threads = workers.map(Threads::new).unwrap_or_else(Threads::auto);
            let report = verify(&model, &settings, &threads)?;
            let verdict = report.verdict;
            emit(&report, out.as_ref())?;
            Ok(if verdict == Some(Verdict::Consistent) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::McPrice {
            config,
            maturity,
            theta,
            paths,
            seed,
            estimator,
            blocks,
            steps,
            eps,
            workers,
            out,
        } => {
            let model = load_model(&config)?;
            let est = match estimator {
                None => Estimator::default_for(&model),
                Some(EstimatorArg::Mean) => Estimator::Mean,
                Some(EstimatorArg::MedianOfMeans) => Estimator::MedianOfMeans { blocks },
            };
            let threads = workers.map(Threads::new).unwrap_or_else(Threads::auto);
            let report = mc_price(
                &model,
                theta,
                maturity,
                paths,
                est,
                env_seed(seed),
                McParams { n_steps: steps, truncation_eps: eps },
                &threads,
            )?;
            emit(&report, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ImpliedVol { price, s0, maturity, out } => {
            let report = implied_vol_report(price, s0, maturity)?;
            emit(&report, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FitRate { csv, model, out } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| {
                RunError::Config(smalltime_cli::config::ConfigError::Io(format!(
                    "{}: {e}",
                    csv.display()
                )))
            })?;
            let fit_model = match model {
                FitModelArg::PurePower => FitModel::PurePower,
                FitModelArg::PowerWithLog => FitModel::PowerWithLog,
            };
            let report = fit_rate_report(&text, fit_model)?;
            emit(&report, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version displays are not usage errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(RunError::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
