//! Thin command-line front end. Every subcommand assembles a one-task run
//! configuration and hands it to the library pipeline; `run` executes a
//! config file with many tasks.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cumcal::econometrics::TrendSpec;
use cumcal::pipeline::{run, DataSource, RunConfig, SourceRole, Task, TaskKind};
use cumcal::series::{Frequency, Period};

#[derive(Parser)]
#[command(
    name = "cumcal",
    about = "Calibrates lagged linear macro models on cumulative curves and runs the unit-root / cointegration battery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFit {
    /// Driver series CSV (labour-force levels by default)
    #[arg(long)]
    driver: PathBuf,
    /// Whether the driver file holds levels or growth rates
    #[arg(long, default_value = "level", value_parser = ["level", "growth"])]
    driver_kind: String,
    /// Response series CSV
    #[arg(long)]
    input: PathBuf,
    /// Role of the response series
    #[arg(long, default_value = "unemployment", value_parser = ["unemployment", "dgdp", "cpi"])]
    response_role: String,
    /// annual or quarterly
    #[arg(long, default_value = "annual")]
    frequency: String,
    /// Moving-average window applied before fitting
    #[arg(long)]
    smooth: Option<usize>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a univariate lagged model with a structural-break search
    Fit {
        #[command(flatten)]
        common: CommonFit,
        /// Break-year candidate, e.g. 1991 or 1989Q1
        #[arg(long = "break")]
        break_candidate: String,
        /// Periods searched on each side of the candidate
        #[arg(long, default_value_t = 4)]
        window: usize,
        /// Inclusive lag range, e.g. 0..5
        #[arg(long, default_value = "0..5")]
        lags: String,
        /// Report the mean counterfactual gap over this window, e.g. 1990..2009
        #[arg(long)]
        counterfactual: Option<String>,
        /// Emit observed/predicted curve CSVs
        #[arg(long)]
        curves: bool,
        /// Emit SVG charts
        #[arg(long)]
        svg: bool,
    },
    /// Fit the generalized trivariate model (driver + unemployment)
    Generalized {
        #[command(flatten)]
        common: CommonFit,
        /// Unemployment series CSV
        #[arg(long)]
        unemployment: PathBuf,
        #[arg(long, default_value_t = 1)]
        driver_lag: usize,
        #[arg(long, default_value_t = 1)]
        unemployment_lag: usize,
        #[arg(long)]
        curves: bool,
        #[arg(long)]
        svg: bool,
    },
    /// Unit-root battery (ADF, DF-GLS, PP) on a series and its difference
    Unitroot {
        /// Input series CSV
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "dgdp", value_parser = ["labour_force", "unemployment", "dgdp", "cpi"])]
        role: String,
        #[arg(long, default_value = "annual")]
        frequency: String,
        /// Test the log growth rate of the input instead of its level
        #[arg(long)]
        growth: bool,
        #[arg(long, default_value_t = 2)]
        lags: usize,
        /// Override the deterministic specification for all three tests
        #[arg(long)]
        trend: Option<String>,
        /// Phillips-Perron bandwidth override
        #[arg(long)]
        bandwidth: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Fit, then test the model residual and the observed/predicted pair
    Cointegration {
        #[command(flatten)]
        common: CommonFit,
        #[arg(long = "break")]
        break_candidate: String,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value = "0..5")]
        lags: String,
        /// Lags for the residual ADF test
        #[arg(long, default_value_t = 2)]
        adf_lags: usize,
        /// Lagged differences in the Johansen regressions
        #[arg(long, default_value_t = 3)]
        maxlag: usize,
        /// Johansen deterministic specification
        #[arg(long, default_value = "none")]
        trend: String,
    },
    /// Compare the model forecast against the naive benchmark
    Forecast {
        #[command(flatten)]
        common: CommonFit,
        /// Forecast horizon in periods (also the driver lag)
        #[arg(long)]
        horizon: usize,
    },
    /// Execute every task in a config file
    Run {
        /// Config path; source paths resolve relative to it
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_lag_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("cannot parse lag range `{text}` (expected a..b)"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("bad lag `{a}`"))?;
    let hi: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("bad lag `{b}`"))?;
    Ok(lo..=hi)
}

fn parse_period_window(text: &str) -> Result<(Period, Period), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("cannot parse window `{text}` (expected from..to)"))?;
    let lo: Period = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: Period = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

struct FitInputs {
    sources: Vec<DataSource>,
    driver_is_level: bool,
    response: SourceRole,
    smooth: Option<usize>,
    out: PathBuf,
}

fn fit_inputs(common: &CommonFit, extra: Option<&PathBuf>) -> Result<FitInputs, String> {
    let frequency: Frequency = common.frequency.parse().map_err(|e| format!("{e}"))?;
    let response: SourceRole = common.response_role.parse().map_err(|e| format!("{e}"))?;
    let mut sources = vec![
        DataSource {
            path: common.driver.clone(),
            role: SourceRole::LabourForce,
            frequency,
        },
        DataSource {
            path: common.input.clone(),
            role: response,
            frequency,
        },
    ];
    if let Some(u) = extra {
        sources.push(DataSource {
            path: u.clone(),
            role: SourceRole::Unemployment,
            frequency,
        });
    }
    Ok(FitInputs {
        sources,
        driver_is_level: common.driver_kind == "level",
        response,
        smooth: common.smooth,
        out: common.out.clone(),
    })
}

fn build_config(cli: Command) -> Result<(RunConfig, PathBuf, PathBuf), String> {
    let cwd = PathBuf::from(".");
    match cli {
        Command::Fit {
            common,
            break_candidate,
            window,
            lags,
            counterfactual,
            curves,
            svg,
        } => {
            let io = fit_inputs(&common, None)?;
            let task = Task {
                name: "fit".into(),
                kind: TaskKind::FitUnivariate {
                    driver: SourceRole::LabourForce,
                    driver_is_level: io.driver_is_level,
                    response: io.response,
                    break_candidate: break_candidate.parse().map_err(|e| format!("{e}"))?,
                    window,
                    lags: parse_lag_range(&lags)?,
                    smooth: io.smooth,
                    counterfactual: counterfactual
                        .as_deref()
                        .map(parse_period_window)
                        .transpose()?,
                    out_curves: curves,
                    out_svg: svg,
                },
            };
            Ok((
                RunConfig {
                    sources: io.sources,
                    tasks: vec![task],
                },
                cwd,
                io.out,
            ))
        }
        Command::Generalized {
            common,
            unemployment,
            driver_lag,
            unemployment_lag,
            curves,
            svg,
        } => {
            let io = fit_inputs(&common, Some(&unemployment))?;
            if io.response == SourceRole::Unemployment {
                return Err("the generalized response must be dgdp or cpi".into());
            }
            let task = Task {
                name: "generalized".into(),
                kind: TaskKind::FitGeneralized {
                    driver: SourceRole::LabourForce,
                    driver_is_level: io.driver_is_level,
                    unemployment: SourceRole::Unemployment,
                    response: io.response,
                    driver_lag,
                    unemployment_lag,
                    smooth: io.smooth,
                    out_curves: curves,
                    out_svg: svg,
                },
            };
            Ok((
                RunConfig {
                    sources: io.sources,
                    tasks: vec![task],
                },
                cwd,
                io.out,
            ))
        }
        Command::Unitroot {
            input,
            role,
            frequency,
            growth,
            lags,
            trend,
            bandwidth,
            out,
        } => {
            let frequency: Frequency = frequency.parse().map_err(|e| format!("{e}"))?;
            let role: SourceRole = role.parse().map_err(|e| format!("{e}"))?;
            let trend: Option<TrendSpec> = trend
                .as_deref()
                .map(str::parse)
                .transpose()
                .map_err(|e| format!("{e}"))?;
            let config = RunConfig {
                sources: vec![DataSource {
                    path: input,
                    role,
                    frequency,
                }],
                tasks: vec![Task {
                    name: "unitroot".into(),
                    kind: TaskKind::UnitRoot {
                        input: role,
                        growth,
                        lags,
                        trend,
                        bandwidth,
                    },
                }],
            };
            Ok((config, cwd, out))
        }
        Command::Cointegration {
            common,
            break_candidate,
            window,
            lags,
            adf_lags,
            maxlag,
            trend,
        } => {
            let io = fit_inputs(&common, None)?;
            let task = Task {
                name: "cointegration".into(),
                kind: TaskKind::Cointegration {
                    driver: SourceRole::LabourForce,
                    driver_is_level: io.driver_is_level,
                    response: io.response,
                    break_candidate: break_candidate.parse().map_err(|e| format!("{e}"))?,
                    window,
                    lags: parse_lag_range(&lags)?,
                    smooth: io.smooth,
                    adf_lags,
                    maxlag,
                    trend: trend.parse().map_err(|e| format!("{e}"))?,
                },
            };
            Ok((
                RunConfig {
                    sources: io.sources,
                    tasks: vec![task],
                },
                cwd,
                io.out,
            ))
        }
        Command::Forecast { common, horizon } => {
            let io = fit_inputs(&common, None)?;
            let task = Task {
                name: "forecast".into(),
                kind: TaskKind::ForecastEval {
                    driver: SourceRole::LabourForce,
                    driver_is_level: io.driver_is_level,
                    response: io.response,
                    horizon,
                    smooth: io.smooth,
                },
            };
            Ok((
                RunConfig {
                    sources: io.sources,
                    tasks: vec![task],
                },
                cwd,
                io.out,
            ))
        }
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let parsed = cumcal::pipeline::parse_config(&text).map_err(|e| format!("{e}"))?;
            let dir = config
                .parent()
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("."));
            Ok((parsed, dir, out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, config_dir, out_dir) = match build_config(cli.command) {
        Ok(v) => v,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match run(&config, &config_dir, &out_dir) {
        Ok(summary) => {
            print!("{}", summary.report);
            if summary.all_ok() {
                ExitCode::SUCCESS
            } else {
                for status in summary.statuses.iter().filter(|s| !s.ok) {
                    eprintln!("task {} failed: {}", status.name, status.message);
                }
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
