//! ADF, Phillips-Perron and DF-GLS unit-root tests plus the residual-based
//! cointegration check.

use super::ols::ols;
use super::tables;
use super::{Statistic, TestOutcome, TestReport, TrendSpec};
use crate::error::{Error, Result};
use crate::series::Series;

/// Shared Dickey-Fuller regression
/// `dy_t = det + pi * y_{t-1} + sum_k g_k dy_{t-k} + e_t`.
struct DfRegression {
    /// t-ratio of the lagged-level coefficient.
    stat: f64,
    /// Lagged-level coefficient (rho - 1).
    level_coef: f64,
    level_se: f64,
    residuals: Vec<f64>,
    nobs: usize,
    /// Unbiased OLS residual variance.
    sigma2: f64,
}

enum DfOutcome {
    Fit(DfRegression),
    PerfectFit,
}

fn df_regression(y: &[f64], lags: usize, trend: TrendSpec) -> Result<DfOutcome> {
    let t_len = y.len();
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let nobs = t_len - 1 - lags;

    let mut x = Vec::with_capacity(nobs);
    let mut target = Vec::with_capacity(nobs);
    let n_det = match trend {
        TrendSpec::None => 0,
        TrendSpec::Constant => 1,
        TrendSpec::ConstantAndTrend => 2,
    };
    for i in lags..t_len - 1 {
        let mut row = Vec::with_capacity(n_det + 1 + lags);
        if n_det >= 1 {
            row.push(1.0);
        }
        if n_det == 2 {
            row.push((i + 1) as f64);
        }
        row.push(y[i]);
        for k in 1..=lags {
            row.push(dy[i - k]);
        }
        x.push(row);
        target.push(dy[i]);
    }

    // a target with no variation (constant or exactly deterministic data)
    // cannot produce a finite t-ratio
    let mean = target.iter().sum::<f64>() / nobs as f64;
    let sst: f64 = target.iter().map(|v| (v - mean) * (v - mean)).sum();
    let scale = target
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1e-300);
    if sst <= 1e-28 * nobs as f64 * scale * scale {
        return Ok(DfOutcome::PerfectFit);
    }

    let fit = ols(&target, &x)?;
    let ssr: f64 = fit.residuals.iter().map(|e| e * e).sum();
    if ssr <= 1e-24 * sst {
        return Ok(DfOutcome::PerfectFit);
    }
    let level_coef = fit.coefficients[n_det];
    let level_se = fit.std_errors[n_det];
    Ok(DfOutcome::Fit(DfRegression {
        stat: level_coef / level_se,
        level_coef,
        level_se,
        residuals: fit.residuals,
        nobs,
        sigma2: fit.residual_variance,
    }))
}

fn degenerate(test_name: &'static str, lag_or_bandwidth: usize, trend: TrendSpec) -> TestReport {
    TestReport {
        test_name,
        outcome: TestOutcome::DegeneratePerfectFit,
        lag_or_bandwidth,
        trend,
    }
}

/// Augmented Dickey-Fuller test: t-ratio on the lagged level in a
/// regression of the first difference on deterministic terms, the lagged
/// level and `lags` lagged differences.
pub fn adf_test(s: &Series, lags: usize, trend: TrendSpec) -> Result<TestReport> {
    if s.len() < lags + 10 {
        return Err(Error::InsufficientData {
            what: "ADF test",
            need: lags + 10,
            got: s.len(),
        });
    }
    match df_regression(s.values(), lags, trend)? {
        DfOutcome::PerfectFit => Ok(degenerate("adf", lags, trend)),
        DfOutcome::Fit(reg) => {
            let cv = tables::mackinnon_tau(trend, reg.nobs);
            Ok(TestReport {
                test_name: "adf",
                outcome: TestOutcome::Statistics(vec![Statistic::evaluate("t", reg.stat, cv)]),
                lag_or_bandwidth: lags,
                trend,
            })
        }
    }
}

/// Phillips-Perron test: the lag-zero Dickey-Fuller regression corrected
/// with a Bartlett-kernel long-run variance. Reports both z(rho) and z(t).
/// The default bandwidth is `floor(4 * (T/100)^(2/9))`.
pub fn pp_test(s: &Series, trend: TrendSpec, bandwidth: Option<usize>) -> Result<TestReport> {
    if s.len() < 15 {
        return Err(Error::InsufficientData {
            what: "Phillips-Perron test",
            need: 15,
            got: s.len(),
        });
    }
    let reg = match df_regression(s.values(), 0, trend)? {
        DfOutcome::PerfectFit => return Ok(degenerate("pp", 0, trend)),
        DfOutcome::Fit(reg) => reg,
    };
    let n = reg.nobs as f64;
    let t = s.len() as f64;
    let bw = bandwidth.unwrap_or_else(|| (4.0 * (t / 100.0).powf(2.0 / 9.0)).floor() as usize);

    let gamma = |k: usize| -> f64 {
        reg.residuals[k..]
            .iter()
            .zip(&reg.residuals[..reg.nobs - k])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n
    };
    let gamma0 = gamma(0);
    let mut lrv = gamma0;
    for k in 1..=bw.min(reg.nobs - 1) {
        let w = 1.0 - k as f64 / (bw as f64 + 1.0);
        lrv += 2.0 * w * gamma(k);
    }
    let lrv = lrv.max(1e-300);

    let s2 = reg.sigma2;
    let se = reg.level_se;
    let z_rho = n * reg.level_coef - 0.5 * (lrv - gamma0) * (n * n * se * se / s2);
    let z_t =
        (gamma0 / lrv).sqrt() * reg.stat - 0.5 * (lrv - gamma0) / lrv.sqrt() * (n * se / s2.sqrt());

    let stats = vec![
        Statistic::evaluate("z_rho", z_rho, tables::fuller_rho(trend, reg.nobs)),
        Statistic::evaluate("z_t", z_t, tables::mackinnon_tau(trend, reg.nobs)),
    ];
    Ok(TestReport {
        test_name: "pp",
        outcome: TestOutcome::Statistics(stats),
        lag_or_bandwidth: bw,
        trend,
    })
}

/// DF-GLS test: the series is GLS-demeaned (`c-bar = -7`, constant case)
/// or GLS-detrended (`c-bar = -13.5`, trend case) and the result passed to
/// a Dickey-Fuller regression without deterministic terms.
pub fn dfgls_test(s: &Series, lags: usize, trend: TrendSpec) -> Result<TestReport> {
    if trend == TrendSpec::None {
        return Err(Error::InvalidArgument {
            detail: "DF-GLS requires a constant or constant+trend specification".into(),
        });
    }
    if s.len() < lags + 15 {
        return Err(Error::InsufficientData {
            what: "DF-GLS test",
            need: lags + 15,
            got: s.len(),
        });
    }
    let y = s.values();
    let t_len = y.len();
    let c_bar = match trend {
        TrendSpec::Constant => -7.0,
        _ => -13.5,
    };
    let a = 1.0 + c_bar / t_len as f64;

    // quasi-differenced data and deterministics
    let n_det = if trend == TrendSpec::Constant { 1 } else { 2 };
    let mut z = Vec::with_capacity(t_len);
    let mut d = Vec::with_capacity(t_len);
    z.push(y[0]);
    d.push(if n_det == 1 {
        vec![1.0]
    } else {
        vec![1.0, 1.0]
    });
    for t in 1..t_len {
        z.push(y[t] - a * y[t - 1]);
        if n_det == 1 {
            d.push(vec![1.0 - a]);
        } else {
            d.push(vec![1.0 - a, (t + 1) as f64 - a * t as f64]);
        }
    }
    let gls = ols(&z, &d)?;
    let detrended: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(t, &v)| {
            let fit = if n_det == 1 {
                gls.coefficients[0]
            } else {
                gls.coefficients[0] + gls.coefficients[1] * (t + 1) as f64
            };
            v - fit
        })
        .collect();

    match df_regression(&detrended, lags, TrendSpec::None)? {
        DfOutcome::PerfectFit => Ok(degenerate("dfgls", lags, trend)),
        DfOutcome::Fit(reg) => {
            let cv = tables::dfgls_critical_values(trend, t_len, reg.nobs);
            Ok(TestReport {
                test_name: "dfgls",
                outcome: TestOutcome::Statistics(vec![Statistic::evaluate("t", reg.stat, cv)]),
                lag_or_bandwidth: lags,
                trend,
            })
        }
    }
}

/// ADF applied to a model residual with a constant and no deterministic
/// trend. Rejecting the unit root in the residual is read as evidence that
/// the observed and predicted series are cointegrated.
pub fn residual_cointegration_test(residual: &Series, lags: usize) -> Result<TestReport> {
    if residual.len() < lags + 10 {
        return Err(Error::InsufficientData {
            what: "residual cointegration test",
            need: lags + 10,
            got: residual.len(),
        });
    }
    let report = adf_test(residual, lags, TrendSpec::Constant)?;
    Ok(TestReport {
        test_name: "residual_adf",
        ..report
    })
}
