//! Least-squares calibration on cumulative curves.
//!
//! Coefficients are estimated by minimizing the L2 distance between the
//! cumulative observed and cumulative predicted curves. Cumulation starts
//! at the first fitted period and neither curve is demeaned: a slope enters
//! the design as the within-segment running sum of the lagged driver, an
//! intercept as the within-segment period count, and one single cumulative
//! curve spans any break. Accumulation suppresses uncorrelated noise while
//! a coefficient shift keeps adding up, which is what makes the break-year
//! search sharp.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{GeneralizedModel, PiecewiseLinearModel, ResponseKind};
use crate::series::{Frequency, GrowthRateSeries, Period, Series};

/// Residual norm used when reporting a fit. Fitting itself always
/// minimizes L2 on the cumulative curves; L1 is derivable from the
/// residual series and is surfaced by the reporting layer only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    L2,
    L1,
}

/// Grid-search settings for [`search`].
#[derive(Debug, Clone)]
pub struct CalibrationConfig {
    /// Assumed break period; the grid covers `break_window` periods on
    /// each side of it.
    pub break_candidate: Period,
    /// Half-width of the break grid (default 4 periods).
    pub break_window: usize,
    /// Inclusive lag grid (default 0..=5 annual, 0..=12 quarterly).
    pub lag_range: RangeInclusive<usize>,
    pub metric: Metric,
    /// Optional trailing moving-average window applied to driver and
    /// response before fitting.
    pub smoothing: Option<usize>,
}

impl CalibrationConfig {
    pub fn new(break_candidate: Period) -> CalibrationConfig {
        let lag_range = match break_candidate.frequency() {
            Frequency::Annual => 0..=5,
            Frequency::Quarterly => 0..=12,
        };
        CalibrationConfig {
            break_candidate,
            break_window: 4,
            lag_range,
            metric: Metric::L2,
            smoothing: None,
        }
    }
}

/// Either model family, as stored in a [`CalibrationResult`].
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Univariate(PiecewiseLinearModel),
    Generalized(GeneralizedModel),
}

impl FittedModel {
    pub fn as_univariate(&self) -> Option<&PiecewiseLinearModel> {
        match self {
            FittedModel::Univariate(m) => Some(m),
            FittedModel::Generalized(_) => None,
        }
    }

    pub fn as_generalized(&self) -> Option<&GeneralizedModel> {
        match self {
            FittedModel::Generalized(m) => Some(m),
            FittedModel::Univariate(_) => None,
        }
    }
}

/// A fitted model together with the residual series and fit metrics on
/// both the dynamic and the cumulative curves.
#[derive(Debug, Clone)]
pub struct CalibrationResult {
    pub model: FittedModel,
    pub break_year: Option<Period>,
    pub lag: usize,
    pub rms_cumulative: f64,
    pub rms_dynamic: f64,
    pub r2_dynamic: f64,
    pub r2_cumulative: f64,
    pub residual_dynamic: Series,
    pub residual_cumulative: Series,
}

impl CalibrationResult {
    /// Mean absolute residual on the dynamic curve (L1 report metric).
    pub fn mae_dynamic(&self) -> f64 {
        mean_abs(self.residual_dynamic.values())
    }

    /// Mean absolute residual on the cumulative curve (L1 report metric).
    pub fn mae_cumulative(&self) -> f64 {
        mean_abs(self.residual_cumulative.values())
    }
}

fn mean_abs(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64
    }
}

/// Out-of-sample error of a model forecast next to the no-change benchmark
/// at the same horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastEvaluation {
    pub horizon: usize,
    pub model_rmsfe: f64,
    pub naive_rmsfe: f64,
}

impl ForecastEvaluation {
    /// Compares `predicted` (a genuine `horizon`-ahead forecast, e.g. a
    /// model whose driver lag is at least `horizon`) against the naive
    /// no-change forecast of `observed`.
    pub fn compute(
        observed: &Series,
        predicted: &Series,
        horizon: usize,
    ) -> Result<ForecastEvaluation> {
        let naive = naive_forecast(observed, horizon)?;
        Ok(ForecastEvaluation {
            horizon,
            model_rmsfe: rmsfe(observed, predicted)?,
            naive_rmsfe: rmsfe(observed, &naive)?,
        })
    }
}

const MIN_SEGMENT: usize = 3;

/// Fits slope and intercept per segment by least squares on the cumulative
/// curves, at a fixed break and lag.
///
/// The design columns are, per segment, the within-segment running sum of
/// the lagged driver and the within-segment period count; the target is the
/// cumulative response. The system is solved in closed form through the
/// normal equations. A rank-deficient design (for instance a driver with no
/// variation, which makes a slope unidentifiable) is a degenerate fit.
pub fn fit_cumulative_lsq(
    driver: &GrowthRateSeries,
    response: &Series,
    break_at: Option<Period>,
    lag: usize,
    kind: ResponseKind,
) -> Result<CalibrationResult> {
    let shifted = driver.series().lag_shift(lag);
    let (resp, drv) = Series::align(response, &shifted)?;
    let n = resp.len();

    let break_index = match break_at {
        None => None,
        Some(b) => {
            let off = b
                .offset_from(&resp.start())
                .ok_or(Error::FrequencyMismatch {
                    left: resp.frequency(),
                    right: b.frequency(),
                })?;
            if off < MIN_SEGMENT as i64 {
                return Err(Error::SegmentTooShort {
                    at: resp.start().to_string(),
                    len: off.max(0) as usize,
                    need: MIN_SEGMENT,
                });
            }
            if n as i64 - off < MIN_SEGMENT as i64 {
                return Err(Error::SegmentTooShort {
                    at: b.to_string(),
                    len: (n as i64 - off).max(0) as usize,
                    need: MIN_SEGMENT,
                });
            }
            Some(off as usize)
        }
    };
    if n < MIN_SEGMENT {
        return Err(Error::InsufficientData {
            what: "cumulative least squares",
            need: MIN_SEGMENT,
            got: n,
        });
    }

    // Cumulative design: per segment a running driver sum and a running
    // period count; the cumulative curve is continuous across the break.
    let ncols = if break_index.is_some() { 4 } else { 2 };
    let mut rows = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    let mut acc = vec![0.0f64; ncols];
    let mut c_obs = 0.0;
    for k in 0..n {
        let seg = match break_index {
            Some(b) if k >= b => 1,
            _ => 0,
        };
        acc[2 * seg] += drv.values()[k];
        acc[2 * seg + 1] += 1.0;
        rows.push(acc.clone());
        c_obs += resp.values()[k];
        target.push(c_obs);
    }

    let (beta, rank) = linalg::lstsq_min_norm(&rows, &target);
    if rank < ncols {
        return Err(Error::DegenerateFit {
            detail: "design is rank deficient (driver without identifying variation)".into(),
        });
    }

    let model = match break_index {
        None => PiecewiseLinearModel::single(kind, lag, beta[0], beta[1]),
        Some(_) => PiecewiseLinearModel::with_break(
            kind,
            lag,
            (beta[0], beta[1]),
            break_at.unwrap(),
            (beta[2], beta[3]),
        ),
    };

    finish_fit(
        segment_prediction(&drv, break_index, &beta),
        resp,
        FittedModel::Univariate(model),
        break_at,
        lag,
    )
}

fn segment_prediction(drv: &Series, break_index: Option<usize>, beta: &[f64]) -> Series {
    let values = drv
        .values()
        .iter()
        .enumerate()
        .map(|(k, &lv)| {
            let seg = match break_index {
                Some(b) if k >= b => 1,
                _ => 0,
            };
            beta[2 * seg] * lv + beta[2 * seg + 1]
        })
        .collect();
    Series::new(drv.start(), values).expect("finite prediction")
}

fn finish_fit(
    predicted: Series,
    observed: Series,
    model: FittedModel,
    break_year: Option<Period>,
    lag: usize,
) -> Result<CalibrationResult> {
    let residual_dynamic = observed.minus(&predicted)?;
    let c_obs = observed.cumulative_sum();
    let c_pred = predicted.cumulative_sum();
    let residual_cumulative = c_obs.minus(&c_pred)?;
    let rms = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
        }
    };
    Ok(CalibrationResult {
        r2_dynamic: r_squared(&observed, &predicted)?,
        r2_cumulative: r_squared(&c_obs, &c_pred)?,
        rms_dynamic: rms(residual_dynamic.values()),
        rms_cumulative: rms(residual_cumulative.values()),
        model,
        break_year,
        lag,
        residual_dynamic,
        residual_cumulative,
    })
}

/// Exhaustive grid search over break year and lag.
///
/// Every break in `candidate - window ..= candidate + window` is fitted at
/// every lag in the configured range, alongside a no-break single-segment
/// fit per lag. The winner has the lowest cumulative RMS; ties (within a
/// tiny relative tolerance, since exact floating-point ties do not occur)
/// go to the smaller lag, then to a no-break fit, then to the earlier
/// break.
pub fn search(
    config: &CalibrationConfig,
    driver: &GrowthRateSeries,
    response: &Series,
    kind: ResponseKind,
) -> Result<CalibrationResult> {
    if config.lag_range.is_empty() {
        return Err(Error::InvalidArgument {
            detail: "empty lag range".into(),
        });
    }
    let (driver_s, response_s) = match config.smoothing {
        Some(k) => (driver.moving_average(k)?, response.moving_average(k)?),
        None => (driver.clone(), response.clone()),
    };

    let cand = config.break_candidate;
    let w = config.break_window as i64;
    let min_lag = *config.lag_range.start();
    let max_lag = *config.lag_range.end();

    // The usable span shifts right as the lag grows: the earliest break
    // must leave three periods before it under the largest lag, the latest
    // break three periods from the end under the smallest lag.
    let span_at = |lag: usize| -> Result<(Period, Period)> {
        let (resp, _) = Series::align(&response_s, &driver_s.series().lag_shift(lag))?;
        match resp.end() {
            Some(end) => Ok((resp.start(), end)),
            None => Err(Error::EmptyOverlap),
        }
    };
    let (late_start, _) = span_at(max_lag)?;
    let (_, early_end) = span_at(min_lag)?;
    let lo = cand.advance(-w);
    let hi = cand.advance(w);
    if lo < late_start.advance(MIN_SEGMENT as i64)
        || hi > early_end.advance(-(MIN_SEGMENT as i64 - 1))
    {
        return Err(Error::WindowOutOfSpan {
            detail: format!(
                "break grid {lo}..{hi} does not leave {MIN_SEGMENT} periods on each side \
                 of the span for every lag in {min_lag}..={max_lag}"
            ),
        });
    }

    // Tie tolerance on the cumulative RMS, scaled by the magnitude of the
    // cumulative response.
    let scale = {
        let c = response_s.cumulative_sum();
        let v = c.values();
        if v.is_empty() {
            1.0
        } else {
            (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64)
                .sqrt()
                .max(1e-12)
        }
    };
    let tol = 1e-9 * scale;

    let mut best: Option<CalibrationResult> = None;
    let mut any_degenerate = false;
    for lag in config.lag_range.clone() {
        // candidates in preference order: no break first, then breaks
        // from earliest to latest
        let mut candidates: Vec<Option<Period>> = vec![None];
        for off in -w..=w {
            candidates.push(Some(cand.advance(off)));
        }
        for break_at in candidates {
            match fit_cumulative_lsq(&driver_s, &response_s, break_at, lag, kind) {
                Ok(fit) => {
                    let better = match &best {
                        None => true,
                        Some(b) => fit.rms_cumulative < b.rms_cumulative - tol,
                    };
                    if better {
                        best = Some(fit);
                    }
                }
                Err(Error::DegenerateFit { .. }) => {
                    any_degenerate = true;
                }
                Err(e) => return Err(e),
            }
        }
    }
    best.ok_or_else(|| Error::DegenerateFit {
        detail: if any_degenerate {
            "all candidate fits are degenerate".into()
        } else {
            "no candidate fit could be evaluated".into()
        },
    })
}

/// Fits the trivariate balance form `pi_t = c1 l_{t-i} + c2 u_{t-s} + c3`
/// on cumulative curves.
///
/// When the inputs are exactly collinear (unemployment itself generated
/// from the driver), the coefficients form a one-parameter family; the
/// minimal-norm solution is returned and only the residual is meaningful.
pub fn fit_generalized(
    l: &GrowthRateSeries,
    u: &Series,
    pi: &Series,
    driver_lag: usize,
    unemployment_lag: usize,
) -> Result<CalibrationResult> {
    let dl = l.series().lag_shift(driver_lag);
    let du = u.lag_shift(unemployment_lag);
    let aligned = Series::align_many(&[pi, &dl, &du])?;
    let (resp, dl, du) = (&aligned[0], &aligned[1], &aligned[2]);
    let n = resp.len();
    if n < 5 {
        return Err(Error::InsufficientData {
            what: "generalized fit",
            need: 5,
            got: n,
        });
    }
    let spread = dl
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if spread.1 - spread.0 <= 1e-12 * spread.1.abs().max(1.0) {
        return Err(Error::DegenerateFit {
            detail: "driver has no variation over the fitted span".into(),
        });
    }

    let mut rows = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    let (mut sl, mut su, mut c_obs) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..n {
        sl += dl.values()[k];
        su += du.values()[k];
        rows.push(vec![sl, su, (k + 1) as f64]);
        c_obs += resp.values()[k];
        target.push(c_obs);
    }
    let (beta, _rank) = linalg::lstsq_min_norm(&rows, &target);
    let model = GeneralizedModel::new(beta[0], beta[1], beta[2], driver_lag, unemployment_lag);

    let predicted = Series::new(
        resp.start(),
        dl.values()
            .iter()
            .zip(du.values())
            .map(|(lv, uv)| model.c1 * lv + model.c2 * uv + model.c3)
            .collect(),
    )?;
    finish_fit(
        predicted,
        resp.clone(),
        FittedModel::Generalized(model),
        None,
        driver_lag,
    )
}

/// Coefficient of determination `1 - SSR/SST` with SST about the observed
/// mean. Not floored: a fit worse than the mean comes back negative.
pub fn r_squared(observed: &Series, predicted: &Series) -> Result<f64> {
    if observed.start() != predicted.start() || observed.len() != predicted.len() {
        return Err(Error::SpanMismatch {
            detail: format!(
                "observed {}x{} vs predicted {}x{}",
                observed.start(),
                observed.len(),
                predicted.start(),
                predicted.len()
            ),
        });
    }
    let n = observed.len();
    if n == 0 {
        return Err(Error::EmptyOverlap);
    }
    let mean = observed.values().iter().sum::<f64>() / n as f64;
    let sst: f64 = observed
        .values()
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum();
    if sst <= 1e-28 * n as f64 * (1.0 + mean * mean) {
        return Err(Error::ZeroVariance);
    }
    let ssr: f64 = observed
        .values()
        .iter()
        .zip(predicted.values())
        .map(|(o, p)| (o - p) * (o - p))
        .sum();
    Ok(1.0 - ssr / sst)
}

/// Root-mean-square difference over the common span of two series.
pub fn rmsfe(observed: &Series, predicted: &Series) -> Result<f64> {
    let (o, p) = Series::align(observed, predicted)?;
    if o.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    let ms = o
        .values()
        .iter()
        .zip(p.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / o.len() as f64;
    Ok(ms.sqrt())
}

/// No-change forecast: the value predicted for `t` is the one observed at
/// `t - horizon`.
pub fn naive_forecast(series: &Series, horizon: usize) -> Result<Series> {
    if horizon == 0 {
        return Err(Error::InvalidArgument {
            detail: "forecast horizon must be >= 1".into(),
        });
    }
    if horizon >= series.len() {
        return Err(Error::InsufficientData {
            what: "naive forecast",
            need: horizon + 1,
            got: series.len(),
        });
    }
    Series::new(
        series.start().advance(horizon as i64),
        series.values()[..series.len() - horizon].to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn driver(seed: u64, start: i32, n: usize) -> GrowthRateSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vals = Vec::with_capacity(n);
        let mut x = 0.0f64;
        for _ in 0..n {
            x = 0.5 * x + rng.random_range(-1.0..1.0);
            vals.push(0.02 + 0.01 * x);
        }
        GrowthRateSeries::from_rates(Series::annual(start, vals).unwrap())
    }

    fn generate(
        l: &GrowthRateSeries,
        model: &PiecewiseLinearModel,
        noise_sd: f64,
        seed: u64,
    ) -> Series {
        let clean = model.predict_all(l);
        if noise_sd == 0.0 {
            return clean;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sd).unwrap();
        Series::new(
            clean.start(),
            clean
                .values()
                .iter()
                .map(|v| v + normal.sample(&mut rng))
                .collect(),
        )
        .unwrap()
    }

    fn unemployment_relation() -> PiecewiseLinearModel {
        PiecewiseLinearModel::with_break(
            ResponseKind::Unemployment,
            0,
            (-2.574, 0.155),
            Period::Year(1990),
            (-2.852, 0.122),
        )
    }

    fn inflation_relation() -> PiecewiseLinearModel {
        PiecewiseLinearModel::with_break(
            ResponseKind::Inflation,
            1,
            (2.453, 0.0052),
            Period::Year(1990),
            (0.842, -0.0085),
        )
    }

    #[test]
    fn exact_linear_recovery_without_break() {
        let l = driver(1, 1962, 48);
        let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 2.0, 0.01);
        let obs = generate(&l, &truth, 0.0, 0);
        let fit = fit_cumulative_lsq(&l, &obs, None, 0, ResponseKind::Inflation).unwrap();
        let m = fit.model.as_univariate().unwrap();
        assert!((m.segments()[0].slope - 2.0).abs() < 1e-9);
        assert!((m.segments()[0].intercept - 0.01).abs() < 1e-9);
        assert!(fit.rms_cumulative < 1e-10);
    }

    #[test]
    fn zero_variance_driver_is_degenerate() {
        let l = GrowthRateSeries::from_rates(Series::annual(1962, vec![0.0; 30]).unwrap());
        let obs = Series::annual(1962, vec![0.05; 30]).unwrap();
        assert!(matches!(
            fit_cumulative_lsq(&l, &obs, None, 0, ResponseKind::Unemployment),
            Err(Error::DegenerateFit { .. })
        ));
    }

    #[test]
    fn recovers_both_segments_of_the_unemployment_model() {
        let l = driver(2, 1962, 49); // 1962..=2010
        let obs = generate(&l, &unemployment_relation(), 0.0, 0);
        let fit = fit_cumulative_lsq(
            &l,
            &obs,
            Some(Period::Year(1990)),
            0,
            ResponseKind::Unemployment,
        )
        .unwrap();
        let m = fit.model.as_univariate().unwrap();
        let segs = m.segments();
        assert!((segs[0].slope - (-2.574)).abs() < 1e-6);
        assert!((segs[0].intercept - 0.155).abs() < 1e-6);
        assert!((segs[1].slope - (-2.852)).abs() < 1e-6);
        assert!((segs[1].intercept - 0.122).abs() < 1e-6);
    }

    #[test]
    fn segment_too_short_is_an_error() {
        let l = driver(3, 1962, 20);
        let obs = generate(&l, &unemployment_relation(), 0.0, 0);
        assert!(matches!(
            fit_cumulative_lsq(
                &l,
                &obs,
                Some(Period::Year(1963)),
                0,
                ResponseKind::Unemployment
            ),
            Err(Error::SegmentTooShort { .. })
        ));
    }

    #[test]
    fn search_recovers_break_and_lag_of_the_inflation_model() {
        let l = driver(4, 1961, 50); // driver from 1961 so lag 1 covers 1962..
        let obs = generate(&l, &inflation_relation(), 0.0, 0);
        let config = CalibrationConfig {
            break_candidate: Period::Year(1991),
            break_window: 4,
            lag_range: 0..=5,
            metric: Metric::L2,
            smoothing: None,
        };
        let fit = search(&config, &l, &obs, ResponseKind::Inflation).unwrap();
        assert_eq!(fit.break_year, Some(Period::Year(1990)));
        assert_eq!(fit.lag, 1);
        let m = fit.model.as_univariate().unwrap();
        assert!((m.segments()[0].slope - 2.453).abs() < 1e-6);
        assert!((m.segments()[1].slope - 0.842).abs() < 1e-6);
    }

    #[test]
    fn search_prefers_no_break_on_break_free_data() {
        let l = driver(5, 1962, 48);
        let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 1.7, 0.004);
        let obs = generate(&l, &truth, 0.0, 0);

        // a forced two-segment fit recovers the same coefficients twice
        let forced = fit_cumulative_lsq(
            &l,
            &obs,
            Some(Period::Year(1991)),
            0,
            ResponseKind::Inflation,
        )
        .unwrap();
        let m = forced.model.as_univariate().unwrap();
        assert!((m.segments()[0].slope - m.segments()[1].slope).abs() < 1e-6);
        assert!((m.segments()[0].intercept - m.segments()[1].intercept).abs() < 1e-6);

        let config = CalibrationConfig::new(Period::Year(1991));
        let fit = search(&config, &l, &obs, ResponseKind::Inflation).unwrap();
        assert_eq!(fit.break_year, None, "no-break fit wins the tie");
        assert_eq!(fit.lag, 0);
    }

    #[test]
    fn search_with_zero_window_and_single_lag() {
        let l = driver(6, 1962, 48);
        let truth = PiecewiseLinearModel::with_break(
            ResponseKind::Inflation,
            0,
            (2.0, 0.01),
            Period::Year(1991),
            (1.0, -0.01),
        );
        let obs = generate(&l, &truth, 0.0, 0);
        let config = CalibrationConfig {
            break_candidate: Period::Year(1991),
            break_window: 0,
            lag_range: 0..=0,
            metric: Metric::L2,
            smoothing: None,
        };
        let fit = search(&config, &l, &obs, ResponseKind::Inflation).unwrap();
        assert_eq!(fit.break_year, Some(Period::Year(1991)));
    }

    #[test]
    fn search_with_flat_driver_reports_all_fits_degenerate() {
        let l = GrowthRateSeries::from_rates(Series::annual(1962, vec![0.02; 48]).unwrap());
        let obs = Series::annual(1962, vec![0.05; 48]).unwrap();
        let config = CalibrationConfig::new(Period::Year(1991));
        assert!(matches!(
            search(&config, &l, &obs, ResponseKind::Unemployment),
            Err(Error::DegenerateFit { .. })
        ));
    }

    #[test]
    fn search_rejects_window_outside_span() {
        let l = driver(7, 1962, 48);
        let obs = generate(&l, &unemployment_relation(), 0.0, 0);
        let config = CalibrationConfig::new(Period::Year(2008));
        assert!(matches!(
            search(&config, &l, &obs, ResponseKind::Unemployment),
            Err(Error::WindowOutOfSpan { .. })
        ));
    }

    #[test]
    fn generalized_recovers_dgdp_coefficients() {
        let l = driver(8, 1961, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        let u = Series::annual(
            1961,
            (0..50)
                .map(|_| 0.08 + 0.02 * rng.random_range(-1.0..1.0f64))
                .collect(),
        )
        .unwrap();
        let truth = GeneralizedModel::new(3.70, 0.55, -0.076, 1, 1);
        let pi = truth.predict_all(&l, &u).unwrap();
        let fit = fit_generalized(&l, &u, &pi, 1, 1).unwrap();
        let m = fit.model.as_generalized().unwrap();
        assert!((m.c1 - 3.70).abs() < 1e-6);
        assert!((m.c2 - 0.55).abs() < 1e-6);
        assert!((m.c3 - (-0.076)).abs() < 1e-6);
        assert!(fit.rms_dynamic <= 1e-9);
    }

    #[test]
    fn generalized_with_zero_unemployment_nests_the_univariate_fit() {
        let l = driver(9, 1962, 48);
        let u = Series::annual(1962, vec![0.0; 48]).unwrap();
        let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 2.453, 0.0052);
        let pi = generate(&l, &truth, 0.0, 0);
        let gen = fit_generalized(&l, &u, &pi, 0, 0).unwrap();
        let uni = fit_cumulative_lsq(&l, &pi, None, 0, ResponseKind::Inflation).unwrap();
        let g = gen.model.as_generalized().unwrap();
        let m = uni.model.as_univariate().unwrap();
        assert!((g.c1 - m.segments()[0].slope).abs() < 1e-9);
        assert!((g.c3 - m.segments()[0].intercept).abs() < 1e-9);
        assert_eq!(g.c2, 0.0);
    }

    #[test]
    fn generalized_achieves_zero_residual_on_balance_generated_data() {
        // pi and u both generated from the same driver with equal lags:
        // the design is collinear, the minimal-norm solution still has to
        // reproduce pi exactly.
        let l = driver(10, 1961, 50);
        let a = PiecewiseLinearModel::single(ResponseKind::Inflation, 1, 2.453, 0.0052);
        let b = PiecewiseLinearModel::single(ResponseKind::Unemployment, 1, -2.574, 0.155);
        let pi = a.predict_all(&l);
        let u = b.predict_all(&l);
        let fit = fit_generalized(&l, &u, &pi, 1, 1).unwrap();
        assert!(fit.rms_dynamic <= 1e-9, "rms {} too large", fit.rms_dynamic);
    }

    #[test]
    fn r_squared_examples() {
        let o = Series::annual(2000, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r_squared(&o, &o).unwrap(), 1.0);

        let mean = Series::annual(2000, vec![2.0, 2.0, 2.0]).unwrap();
        assert_eq!(r_squared(&o, &mean).unwrap(), 0.0);

        let p = Series::annual(2000, vec![1.0, 2.0, 4.0]).unwrap();
        assert!((r_squared(&o, &p).unwrap() - 0.5).abs() < 1e-15);

        let flat = Series::annual(2000, vec![2.0, 2.0, 2.0]).unwrap();
        assert!(matches!(r_squared(&flat, &o), Err(Error::ZeroVariance)));

        let negative = Series::annual(2000, vec![10.0, -10.0, 10.0]).unwrap();
        assert!(r_squared(&o, &negative).unwrap() < 0.0);
    }

    #[test]
    fn rmsfe_examples() {
        let o = Series::annual(2000, vec![0.02, 0.04]).unwrap();
        assert_eq!(rmsfe(&o, &o).unwrap(), 0.0);

        let off = Series::annual(2000, vec![0.03, 0.05]).unwrap();
        assert!((rmsfe(&o, &off).unwrap() - 0.01).abs() < 1e-15);

        let p = Series::annual(2000, vec![0.03, 0.02]).unwrap();
        let expected = 0.015811388300841896; // sqrt((0.0001 + 0.0004) / 2)
        assert!((rmsfe(&o, &p).unwrap() - expected).abs() < 1e-15);

        let disjoint = Series::annual(2050, vec![0.1]).unwrap();
        assert!(matches!(rmsfe(&o, &disjoint), Err(Error::EmptyOverlap)));
    }

    #[test]
    fn naive_forecast_examples() {
        let c = Series::annual(2000, vec![3.0; 5]).unwrap();
        let f = naive_forecast(&c, 2).unwrap();
        assert!(rmsfe(&c, &f).unwrap() == 0.0);

        let s = Series::annual(2000, vec![1.0, 2.0, 3.0]).unwrap();
        let f = naive_forecast(&s, 1).unwrap();
        assert_eq!(f.start(), Period::Year(2001));
        assert_eq!(f.values(), &[1.0, 2.0]);

        assert!(naive_forecast(&s, 3).is_err());
        assert!(naive_forecast(&s, 0).is_err());
    }

    #[test]
    fn forecast_evaluation_beats_naive_on_driven_data() {
        let l = driver(11, 1960, 60);
        let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 3, 2.682, -0.0035);
        let obs = generate(&l, &truth, 0.01, 42);
        let fit = fit_cumulative_lsq(&l, &obs, None, 3, ResponseKind::Inflation).unwrap();
        let predicted = fit.model.as_univariate().unwrap().predict_all(&l);
        let eval = ForecastEvaluation::compute(&obs, &predicted, 3).unwrap();
        assert!(eval.model_rmsfe < eval.naive_rmsfe);
    }

    #[test]
    fn counterfactual_divergence_rate_matches_coefficient_shift() {
        // Applying the pre-break segment across the break makes the
        // cumulative residual climb at Δslope * mean(l_post) + Δintercept
        // per period.
        let l = driver(12, 1962, 49);
        let obs = generate(&l, &unemployment_relation(), 0.0, 0);
        let pre_only = unemployment_relation().pre_break_only();
        let predicted = pre_only.predict_all(&l);
        let cum_resid = obs
            .cumulative_sum()
            .minus(&predicted.cumulative_sum())
            .unwrap();

        let b = cum_resid.index_of(Period::Year(1990)).unwrap();
        let post = &cum_resid.values()[b..];
        // least-squares slope of the post-break cumulative residual
        let n = post.len() as f64;
        let tbar = (n - 1.0) / 2.0;
        let ybar = post.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, y) in post.iter().enumerate() {
            num += (i as f64 - tbar) * (y - ybar);
            den += (i as f64 - tbar) * (i as f64 - tbar);
        }
        let slope = num / den;

        let (drv_al, _) = Series::align(l.series(), &obs).unwrap();
        let bb = drv_al.index_of(Period::Year(1990)).unwrap();
        let l_post = &drv_al.values()[bb..];
        let mean_l = l_post.iter().sum::<f64>() / l_post.len() as f64;
        let expected = (-2.852 - (-2.574)) * mean_l + (0.122 - 0.155);
        assert!(
            (slope - expected).abs() <= 0.05 * expected.abs(),
            "slope {slope} vs expected {expected}"
        );
    }

    #[test]
    fn cumulative_r2_dominates_dynamic_r2_on_noisy_data() {
        let mut wins = 0;
        let trials = 200;
        for seed in 0..trials {
            let l = driver(1000 + seed, 1962, 48);
            let obs = generate(&l, &inflation_relation(), 0.004, 5000 + seed);
            let fit = fit_cumulative_lsq(
                &l,
                &obs,
                Some(Period::Year(1990)),
                1,
                ResponseKind::Inflation,
            )
            .unwrap();
            if fit.r2_cumulative >= fit.r2_dynamic {
                wins += 1;
            }
        }
        assert!(
            wins as f64 >= 0.95 * trials as f64,
            "cumulative R2 >= dynamic R2 in only {wins}/{trials} trials"
        );
    }

    #[test]
    fn cumulative_noise_grows_like_sqrt_t_but_coefficient_shift_linearly() {
        // Monte Carlo: with the true coefficients the cumulative residual
        // at T has standard deviation ~ sigma * sqrt(T); a coefficient
        // perturbation adds a drift that grows linearly in T.
        let sigma = 0.01;
        let trials = 300;
        let t_short = 12usize;
        let t_long = 48usize;
        let mut sd_short = 0.0;
        let mut sd_long = 0.0;
        for seed in 0..trials {
            let l = driver(7000 + seed, 1962, t_long);
            let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 2.0, 0.01);
            let obs = generate(&l, &truth, sigma, 9000 + seed);
            let resid = obs.minus(&truth.predict_all(&l)).unwrap().cumulative_sum();
            sd_short += resid.values()[t_short - 1].powi(2);
            sd_long += resid.values()[t_long - 1].powi(2);
        }
        sd_short = (sd_short / trials as f64).sqrt();
        sd_long = (sd_long / trials as f64).sqrt();
        let ratio = sd_long / sd_short;
        let sqrt_ratio = (t_long as f64 / t_short as f64).sqrt();
        assert!(
            (ratio - sqrt_ratio).abs() < 0.6,
            "noise accumulation ratio {ratio} should be near sqrt ratio {sqrt_ratio}"
        );

        // a deterministic intercept shift of d accumulates to d * T
        let d = 0.005;
        let l = driver(99, 1962, t_long);
        let truth = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 2.0, 0.01);
        let shifted = PiecewiseLinearModel::single(ResponseKind::Inflation, 0, 2.0, 0.01 + d);
        let obs = shifted.predict_all(&l);
        let resid = obs.minus(&truth.predict_all(&l)).unwrap().cumulative_sum();
        assert!((resid.values()[t_long - 1] - d * t_long as f64).abs() < 1e-10);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            /// Adding a constant to the response shifts fitted intercepts
            /// by that constant; scaling the driver by s scales fitted
            /// slopes by 1/s. Slopes and intercepts otherwise unchanged.
            #[test]
            fn affine_equivariance(c in -0.5..0.5f64, s in 0.25..4.0f64, seed in 0u64..50) {
                let l = driver(300 + seed, 1962, 49);
                let obs = generate(&l, &unemployment_relation(), 0.001, seed);
                let base = fit_cumulative_lsq(
                    &l, &obs, Some(Period::Year(1990)), 0, ResponseKind::Unemployment,
                ).unwrap();

                let shifted_obs = Series::new(
                    obs.start(),
                    obs.values().iter().map(|v| v + c).collect(),
                ).unwrap();
                let shifted = fit_cumulative_lsq(
                    &l, &shifted_obs, Some(Period::Year(1990)), 0, ResponseKind::Unemployment,
                ).unwrap();

                let scaled_l = GrowthRateSeries::from_rates(Series::new(
                    l.series().start(),
                    l.series().values().iter().map(|v| v * s).collect(),
                ).unwrap());
                let scaled = fit_cumulative_lsq(
                    &scaled_l, &obs, Some(Period::Year(1990)), 0, ResponseKind::Unemployment,
                ).unwrap();

                let b = base.model.as_univariate().unwrap().segments();
                let sh = shifted.model.as_univariate().unwrap().segments();
                let sc = scaled.model.as_univariate().unwrap().segments();
                for i in 0..2 {
                    prop_assert!((sh[i].intercept - b[i].intercept - c).abs() < 1e-9);
                    prop_assert!((sh[i].slope - b[i].slope).abs() < 1e-9);
                    prop_assert!((sc[i].slope - b[i].slope / s).abs() < 1e-9);
                    prop_assert!((sc[i].intercept - b[i].intercept).abs() < 1e-9);
                }
            }
        }
    }
}
