//! Task execution: loads sources, runs tasks in declaration order, writes
//! the ordered text report, per-task machine records, curve CSVs and SVG
//! charts.
//!
//! A failing task is reported and recorded, later tasks still run; the
//! summary says whether anything failed. Identical inputs produce
//! byte-identical outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::{RunConfig, SourceRole, Task, TaskKind};
use super::csv::{emit_curves, load_csv, write_series_csv, CurveKind};
use super::report::{describe_test, fmt_rate, fmt_stat, Record};
use super::svg::{emit_svg, Curve};
use crate::calibrate::{
    fit_cumulative_lsq, fit_generalized, search, CalibrationConfig, CalibrationResult,
    ForecastEvaluation, Metric,
};
use crate::econometrics::{
    adf_test, dfgls_test, johansen_trace, pp_test, residual_cointegration_test, TrendSpec,
};
use crate::error::{Error, Result};
use crate::model::{counterfactual_gap, PiecewiseLinearModel, ResponseKind};
use crate::series::{Frequency, GrowthRateSeries, Series};

/// Outcome of one task.
#[derive(Debug, Clone)]
pub struct TaskStatus {
    pub name: String,
    pub ok: bool,
    pub message: String,
}

/// Everything a run produced, besides the files on disk.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: String,
    pub statuses: Vec<TaskStatus>,
}

impl RunSummary {
    pub fn all_ok(&self) -> bool {
        self.statuses.iter().all(|s| s.ok)
    }
}

struct Loaded {
    role: SourceRole,
    frequency: Frequency,
    series: Series,
}

fn lookup(loaded: &[Loaded], role: SourceRole, hint: Option<Frequency>) -> Result<&Loaded> {
    let matches: Vec<&Loaded> = loaded
        .iter()
        .filter(|l| l.role == role && hint.is_none_or(|f| l.frequency == f))
        .collect();
    match matches.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::InvalidArgument {
            detail: format!("no source with role {role}"),
        }),
        _ => Err(Error::InvalidArgument {
            detail: format!("role {role} is ambiguous; declare one frequency per task input"),
        }),
    }
}

fn response_kind(role: SourceRole) -> Result<ResponseKind> {
    match role {
        SourceRole::Unemployment => Ok(ResponseKind::Unemployment),
        SourceRole::Dgdp | SourceRole::Cpi => Ok(ResponseKind::Inflation),
        SourceRole::LabourForce => Err(Error::InvalidArgument {
            detail: "labour_force is the driver, not a response".into(),
        }),
    }
}

fn driver_series(loaded: &Loaded, is_level: bool) -> Result<GrowthRateSeries> {
    if is_level {
        loaded.series.log_growth_rate()
    } else {
        Ok(GrowthRateSeries::from_rates(loaded.series.clone()))
    }
}

/// Executes a run configuration. Source paths are resolved relative to
/// `config_dir`; every artifact lands under `out_dir`.
pub fn run(config: &RunConfig, config_dir: &Path, out_dir: &Path) -> Result<RunSummary> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;

    let mut loaded = Vec::new();
    for src in &config.sources {
        let path = if src.path.is_absolute() {
            src.path.clone()
        } else {
            config_dir.join(&src.path)
        };
        let series = load_csv(&path, src.frequency)?;
        loaded.push(Loaded {
            role: src.role,
            frequency: src.frequency,
            series,
        });
    }

    let mut report = String::new();
    let mut statuses = Vec::new();
    for task in &config.tasks {
        let mut section = String::new();
        let mut record = Record::new(&task.name, task_kind_name(&task.kind));
        let outcome = run_task(task, &loaded, out_dir, &mut section, &mut record);
        writeln!(
            report,
            "== task {} ({})",
            task.name,
            task_kind_name(&task.kind)
        )
        .unwrap();
        match outcome {
            Ok(()) => {
                report.push_str(&section);
                record.push("status", "ok");
                statuses.push(TaskStatus {
                    name: task.name.clone(),
                    ok: true,
                    message: String::new(),
                });
            }
            Err(e) => {
                writeln!(report, "FAILED: {e}").unwrap();
                record.push("status", "error");
                record.push("error", &e);
                statuses.push(TaskStatus {
                    name: task.name.clone(),
                    ok: false,
                    message: e.to_string(),
                });
            }
        }
        report.push('\n');
        let record_path = out_dir.join(format!("{}.record", task.name));
        std::fs::write(&record_path, record.render())
            .map_err(|e| Error::io(record_path.display().to_string(), e))?;
    }

    let report_path = out_dir.join("report.txt");
    std::fs::write(&report_path, &report)
        .map_err(|e| Error::io(report_path.display().to_string(), e))?;
    Ok(RunSummary { report, statuses })
}

fn task_kind_name(kind: &TaskKind) -> &'static str {
    match kind {
        TaskKind::FitUnivariate { .. } => "fit_univariate",
        TaskKind::FitGeneralized { .. } => "fit_generalized",
        TaskKind::UnitRoot { .. } => "unitroot",
        TaskKind::Cointegration { .. } => "cointegration",
        TaskKind::ForecastEval { .. } => "forecast_eval",
        TaskKind::Figure { .. } => "figure",
    }
}

fn run_task(
    task: &Task,
    loaded: &[Loaded],
    out_dir: &Path,
    out: &mut String,
    rec: &mut Record,
) -> Result<()> {
    match &task.kind {
        TaskKind::FitUnivariate {
            driver,
            driver_is_level,
            response,
            break_candidate,
            window,
            lags,
            smooth,
            counterfactual,
            out_curves,
            out_svg,
        } => {
            let resp_src = lookup(loaded, *response, None)?;
            let drv_src = lookup(loaded, *driver, Some(resp_src.frequency))?;
            let drv = driver_series(drv_src, *driver_is_level)?;
            let kind = response_kind(*response)?;
            let cfg = CalibrationConfig {
                break_candidate: *break_candidate,
                break_window: *window,
                lag_range: lags.clone(),
                metric: Metric::L2,
                smoothing: *smooth,
            };
            rec.push("driver", drv_src.role);
            rec.push("response", resp_src.role);
            rec.push("break_candidate", break_candidate);
            rec.push("window", window);
            rec.push("lags", format!("{}..{}", lags.start(), lags.end()));
            if let Some(k) = smooth {
                rec.push("smooth", k);
            }
            writeln!(
                out,
                "driver {} -> response {} ({}), break candidate {break_candidate} +/- {window}, lags {}..{}",
                drv_src.role,
                resp_src.role,
                resp_src.frequency,
                lags.start(),
                lags.end()
            )
            .unwrap();
            let fit = search(&cfg, &drv, &resp_src.series, kind)?;
            let model = fit.model.as_univariate().expect("univariate fit").clone();

            // observed/predicted pair over the fitted span
            let response_used = match smooth {
                Some(k) => resp_src.series.moving_average(*k)?,
                None => resp_src.series.clone(),
            };
            let driver_used = match smooth {
                Some(k) => drv.moving_average(*k)?,
                None => drv.clone(),
            };
            let (obs, _) = Series::align(&response_used, &fit.residual_dynamic)?;
            let predicted = obs.minus(&fit.residual_dynamic)?;
            describe_univariate(&fit, &model, &predicted, out, rec);

            let model_path = out_dir.join(format!("{}.model", task.name));
            std::fs::write(&model_path, model.to_kv())
                .map_err(|e| Error::io(model_path.display().to_string(), e))?;
            rec.push("model_file", format!("{}.model", task.name));

            if *out_curves {
                for (kind_c, suffix) in [
                    (CurveKind::Dynamic, "dynamic"),
                    (CurveKind::Cumulative, "cumulative"),
                ] {
                    let path = out_dir.join(format!("{}_{suffix}.csv", task.name));
                    emit_curves(&obs, &predicted, kind_c, &path)?;
                    writeln!(out, "wrote {}_{suffix}.csv", task.name).unwrap();
                }
            }
            if *out_svg {
                emit_fit_charts(&task.name, &obs, &predicted, out_dir, out)?;
            }

            if let Some((from, to)) = counterfactual {
                let gap = counterfactual_gap(
                    &response_used,
                    &model.pre_break_only(),
                    &driver_used,
                    (*from, *to),
                )?;
                writeln!(
                    out,
                    "counterfactual gap mean {from}..{to} (pre-break relation extended): {}",
                    fmt_rate(gap.window_mean)
                )
                .unwrap();
                rec.push("counterfactual_window", format!("{from}..{to}"));
                rec.push("counterfactual_gap_mean", gap.window_mean);
                let gap_path = out_dir.join(format!("{}_gap.csv", task.name));
                write_series_csv(&gap.gap, &gap_path)?;
                writeln!(out, "wrote {}_gap.csv", task.name).unwrap();
                if *out_svg {
                    let path = out_dir.join(format!("{}_gap.svg", task.name));
                    emit_svg(
                        &[Curve {
                            label: "observed - counterfactual".into(),
                            series: gap.gap.clone(),
                        }],
                        &format!("{} counterfactual gap", task.name),
                        &path,
                    )?;
                    writeln!(out, "wrote {}_gap.svg", task.name).unwrap();
                }
            }
            Ok(())
        }
        TaskKind::FitGeneralized {
            driver,
            driver_is_level,
            unemployment,
            response,
            driver_lag,
            unemployment_lag,
            smooth,
            out_curves,
            out_svg,
        } => {
            let resp_src = lookup(loaded, *response, None)?;
            let drv_src = lookup(loaded, *driver, Some(resp_src.frequency))?;
            let u_src = lookup(loaded, *unemployment, Some(resp_src.frequency))?;
            response_kind(*response)?;
            let mut drv = driver_series(drv_src, *driver_is_level)?;
            let mut u = u_src.series.clone();
            let mut pi = resp_src.series.clone();
            if let Some(k) = smooth {
                drv = drv.moving_average(*k)?;
                u = u.moving_average(*k)?;
                pi = pi.moving_average(*k)?;
            }
            rec.push("driver", drv_src.role);
            rec.push("unemployment", u_src.role);
            rec.push("response", resp_src.role);
            let fit = fit_generalized(&drv, &u, &pi, *driver_lag, *unemployment_lag)?;
            let model = *fit.model.as_generalized().expect("generalized fit");
            writeln!(
                out,
                "pi_t = {} * l_(t-{}) + {} * u_(t-{}) + {}",
                fmt_rate(model.c1),
                model.driver_lag,
                fmt_rate(model.c2),
                model.unemployment_lag,
                fmt_rate(model.c3)
            )
            .unwrap();
            rec.push("c1", model.c1);
            rec.push("c2", model.c2);
            rec.push("c3", model.c3);
            rec.push("driver_lag", model.driver_lag);
            rec.push("unemployment_lag", model.unemployment_lag);
            describe_metrics(&fit, out, rec);

            let model_path = out_dir.join(format!("{}.model", task.name));
            std::fs::write(&model_path, model.to_kv())
                .map_err(|e| Error::io(model_path.display().to_string(), e))?;
            rec.push("model_file", format!("{}.model", task.name));

            let (obs, _) = Series::align(&pi, &fit.residual_dynamic)?;
            let predicted = obs.minus(&fit.residual_dynamic)?;
            if *out_curves {
                for (kind_c, suffix) in [
                    (CurveKind::Dynamic, "dynamic"),
                    (CurveKind::Cumulative, "cumulative"),
                ] {
                    let path = out_dir.join(format!("{}_{suffix}.csv", task.name));
                    emit_curves(&obs, &predicted, kind_c, &path)?;
                    writeln!(out, "wrote {}_{suffix}.csv", task.name).unwrap();
                }
            }
            if *out_svg {
                emit_fit_charts(&task.name, &obs, &predicted, out_dir, out)?;
            }
            Ok(())
        }
        TaskKind::UnitRoot {
            input,
            growth,
            lags,
            trend,
            bandwidth,
        } => {
            let src = lookup(loaded, *input, None)?;
            let series = if *growth {
                src.series.log_growth_rate()?.into_series()
            } else {
                src.series.clone()
            };
            writeln!(
                out,
                "input {}{} ({}), {} observations",
                src.role,
                if *growth { " growth rate" } else { "" },
                src.frequency,
                series.len()
            )
            .unwrap();
            rec.push("input", src.role);
            rec.push("growth", growth);
            rec.push("observations", series.len());

            let diff = series.first_difference()?;
            for (stage, s) in [("level", &series), ("difference", &diff)] {
                writeln!(out, "{stage}:").unwrap();
                let adf_trend = trend.unwrap_or(TrendSpec::Constant);
                let adf = adf_test(s, *lags, adf_trend)?;
                describe_test(&adf, out, rec, &format!("{stage}_adf"));
                let dfgls_trend = trend.unwrap_or(TrendSpec::ConstantAndTrend);
                if dfgls_trend == TrendSpec::None {
                    writeln!(out, "  dfgls  skipped (needs a constant or trend)").unwrap();
                    rec.push(format!("{stage}_dfgls_outcome"), "skipped");
                } else {
                    let dfgls = dfgls_test(s, *lags, dfgls_trend)?;
                    describe_test(&dfgls, out, rec, &format!("{stage}_dfgls"));
                }
                let pp = pp_test(s, trend.unwrap_or(TrendSpec::Constant), *bandwidth)?;
                describe_test(&pp, out, rec, &format!("{stage}_pp"));
            }
            Ok(())
        }
        TaskKind::Cointegration {
            driver,
            driver_is_level,
            response,
            break_candidate,
            window,
            lags,
            smooth,
            adf_lags,
            maxlag,
            trend,
        } => {
            let resp_src = lookup(loaded, *response, None)?;
            let drv_src = lookup(loaded, *driver, Some(resp_src.frequency))?;
            let drv = driver_series(drv_src, *driver_is_level)?;
            let kind = response_kind(*response)?;
            let cfg = CalibrationConfig {
                break_candidate: *break_candidate,
                break_window: *window,
                lag_range: lags.clone(),
                metric: Metric::L2,
                smoothing: *smooth,
            };
            rec.push("driver", drv_src.role);
            rec.push("response", resp_src.role);
            rec.push("break_candidate", break_candidate);
            rec.push("window", window);
            rec.push("lags", format!("{}..{}", lags.start(), lags.end()));
            let fit = search(&cfg, &drv, &resp_src.series, kind)?;
            writeln!(
                out,
                "fitted model: break {}, lag {}, rms_cumulative {}",
                fit.break_year
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "none".into()),
                fit.lag,
                fmt_rate(fit.rms_cumulative)
            )
            .unwrap();
            rec.push(
                "break_year",
                fit.break_year
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "none".into()),
            );
            rec.push("lag", fit.lag);
            rec.push("rms_cumulative", fit.rms_cumulative);

            writeln!(out, "model residual:").unwrap();
            let resid_adf = residual_cointegration_test(&fit.residual_dynamic, *adf_lags)?;
            describe_test(&resid_adf, out, rec, "residual_adf");
            let resid_pp = pp_test(&fit.residual_dynamic, TrendSpec::Constant, None)?;
            describe_test(&resid_pp, out, rec, "residual_pp");

            // Johansen runs on the dynamic observed/predicted pair; the
            // cumulative curves are integrated once more and stay out.
            let response_used = match smooth {
                Some(k) => resp_src.series.moving_average(*k)?,
                None => resp_src.series.clone(),
            };
            let (obs, _) = Series::align(&response_used, &fit.residual_dynamic)?;
            let predicted = obs.minus(&fit.residual_dynamic)?;
            let rank = johansen_trace(&[&obs, &predicted], *maxlag, *trend)?;
            writeln!(
                out,
                "johansen trace (trend {}, maxlag {}):",
                rank.trend, rank.maxlag
            )
            .unwrap();
            for (r, (stat, cv)) in rank
                .trace_statistics
                .iter()
                .zip(&rank.critical_values)
                .enumerate()
            {
                writeln!(
                    out,
                    "  r = {r}: trace {} (1%: {}, 5%: {}, 10%: {})",
                    fmt_stat(*stat),
                    fmt_stat(cv.one_pct),
                    fmt_stat(cv.five_pct),
                    fmt_stat(cv.ten_pct)
                )
                .unwrap();
                rec.push(format!("trace_r{r}"), *stat);
                rec.push(format!("trace_r{r}_cv_1pct"), cv.one_pct);
                rec.push(format!("trace_r{r}_cv_5pct"), cv.five_pct);
                rec.push(format!("trace_r{r}_cv_10pct"), cv.ten_pct);
            }
            writeln!(out, "selected rank: {}", rank.selected_rank).unwrap();
            rec.push("selected_rank", rank.selected_rank);
            rec.push("johansen_trend", rank.trend);
            rec.push("johansen_maxlag", rank.maxlag);
            Ok(())
        }
        TaskKind::ForecastEval {
            driver,
            driver_is_level,
            response,
            horizon,
            smooth,
        } => {
            let resp_src = lookup(loaded, *response, None)?;
            let drv_src = lookup(loaded, *driver, Some(resp_src.frequency))?;
            let kind = response_kind(*response)?;
            let mut drv = driver_series(drv_src, *driver_is_level)?;
            let mut obs = resp_src.series.clone();
            if let Some(k) = smooth {
                drv = drv.moving_average(*k)?;
                obs = obs.moving_average(*k)?;
            }
            rec.push("driver", drv_src.role);
            rec.push("response", resp_src.role);
            // driver lag = horizon makes the model prediction a true
            // h-period-ahead forecast
            let fit = fit_cumulative_lsq(&drv, &obs, None, *horizon, kind)?;
            let model = fit.model.as_univariate().expect("univariate fit");
            let predicted = model.predict_all(&drv);
            let eval = ForecastEvaluation::compute(&obs, &predicted, *horizon)?;
            writeln!(
                out,
                "horizon {}: model rmsfe {}, naive rmsfe {}, model beats naive: {}",
                eval.horizon,
                fmt_rate(eval.model_rmsfe),
                fmt_rate(eval.naive_rmsfe),
                eval.model_rmsfe < eval.naive_rmsfe
            )
            .unwrap();
            rec.push("horizon", eval.horizon);
            rec.push("model_rmsfe", eval.model_rmsfe);
            rec.push("naive_rmsfe", eval.naive_rmsfe);
            rec.push("model_beats_naive", eval.model_rmsfe < eval.naive_rmsfe);
            Ok(())
        }
        TaskKind::Figure {
            inputs,
            kind,
            growth,
            smooth,
            title,
        } => {
            let mut curves = Vec::new();
            for role in inputs {
                let src = lookup(loaded, *role, None)?;
                let mut series = if *growth {
                    src.series.log_growth_rate()?.into_series()
                } else {
                    src.series.clone()
                };
                if let Some(k) = smooth {
                    series = series.moving_average(*k)?;
                }
                if *kind == CurveKind::Cumulative {
                    series = series.cumulative_sum();
                }
                curves.push(Curve {
                    label: src.role.to_string(),
                    series,
                });
            }
            let path = out_dir.join(format!("{}.svg", task.name));
            emit_svg(&curves, title, &path)?;
            writeln!(
                out,
                "wrote {}.svg ({} curves, {kind})",
                task.name,
                curves.len()
            )
            .unwrap();
            rec.push("curves", curves.len());
            rec.push("curve_kind", kind);
            rec.push("file", format!("{}.svg", task.name));
            Ok(())
        }
    }
}

fn describe_univariate(
    fit: &CalibrationResult,
    model: &PiecewiseLinearModel,
    predicted: &Series,
    out: &mut String,
    rec: &mut Record,
) {
    writeln!(
        out,
        "break: {}",
        fit.break_year
            .map(|p| p.to_string())
            .unwrap_or_else(|| "none".into())
    )
    .unwrap();
    writeln!(out, "lag: {}", fit.lag).unwrap();
    rec.push(
        "break_year",
        fit.break_year
            .map(|p| p.to_string())
            .unwrap_or_else(|| "none".into()),
    );
    rec.push("lag", fit.lag);
    rec.push("response_kind", model.response_kind());
    rec.push("segments", model.segments().len());
    for (i, seg) in model.segments().iter().enumerate() {
        let span = match seg.break_start {
            None => "initial".to_string(),
            Some(b) => format!("from {b}"),
        };
        writeln!(
            out,
            "segment {} ({span}): slope {}, intercept {}",
            i + 1,
            fmt_rate(seg.slope),
            fmt_rate(seg.intercept)
        )
        .unwrap();
        rec.push(
            format!("segment_{}_break", i + 1),
            seg.break_start.map(|p| p.to_string()).unwrap_or_default(),
        );
        rec.push(format!("segment_{}_slope", i + 1), seg.slope);
        rec.push(format!("segment_{}_intercept", i + 1), seg.intercept);
    }
    describe_metrics(fit, out, rec);
    // negative rates are returned unclamped; a negative unemployment
    // prediction deserves a visible flag
    if model.response_kind() == ResponseKind::Unemployment {
        let negatives = predicted.values().iter().filter(|v| **v < 0.0).count();
        if negatives > 0 {
            writeln!(
                out,
                "warning: {negatives} predicted unemployment rates are negative"
            )
            .unwrap();
        }
        rec.push("negative_predictions", negatives);
    }
}

fn describe_metrics(fit: &CalibrationResult, out: &mut String, rec: &mut Record) {
    writeln!(
        out,
        "rms_cumulative: {}, rms_dynamic: {}",
        fmt_rate(fit.rms_cumulative),
        fmt_rate(fit.rms_dynamic)
    )
    .unwrap();
    writeln!(
        out,
        "r2_cumulative: {}, r2_dynamic: {}",
        fmt_rate(fit.r2_cumulative),
        fmt_rate(fit.r2_dynamic)
    )
    .unwrap();
    writeln!(
        out,
        "mae_cumulative: {}, mae_dynamic: {}",
        fmt_rate(fit.mae_cumulative()),
        fmt_rate(fit.mae_dynamic())
    )
    .unwrap();
    rec.push("rms_cumulative", fit.rms_cumulative);
    rec.push("rms_dynamic", fit.rms_dynamic);
    rec.push("r2_cumulative", fit.r2_cumulative);
    rec.push("r2_dynamic", fit.r2_dynamic);
    rec.push("mae_cumulative", fit.mae_cumulative());
    rec.push("mae_dynamic", fit.mae_dynamic());
}

fn emit_fit_charts(
    name: &str,
    obs: &Series,
    predicted: &Series,
    out_dir: &Path,
    out: &mut String,
) -> Result<()> {
    for (suffix, transform) in [("dynamic", false), ("cumulative", true)] {
        let (o, p) = if transform {
            (obs.cumulative_sum(), predicted.cumulative_sum())
        } else {
            (obs.clone(), predicted.clone())
        };
        let path: PathBuf = out_dir.join(format!("{name}_{suffix}.svg"));
        emit_svg(
            &[
                Curve {
                    label: "observed".into(),
                    series: o,
                },
                Curve {
                    label: "predicted".into(),
                    series: p,
                },
            ],
            &format!("{name} ({suffix})"),
            &path,
        )?;
        writeln!(out, "wrote {name}_{suffix}.svg").unwrap();
    }
    Ok(())
}
