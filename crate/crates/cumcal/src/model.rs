//! The model family: lagged univariate linear models with optional
//! structural breaks, the generalized trivariate form, and counterfactual
//! gap series.
//!
//! Models are immutable and evaluation is pure. Predicted rates are raw
//! linear values: a negative unemployment prediction is returned as-is and
//! left to the reporting layer to flag, because clamping would corrupt
//! cumulative-curve fitting.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::{GrowthRateSeries, Period, Series};

/// Which observable a univariate model explains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    Inflation,
    Unemployment,
}

impl fmt::Display for ResponseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseKind::Inflation => write!(f, "inflation"),
            ResponseKind::Unemployment => write!(f, "unemployment"),
        }
    }
}

impl std::str::FromStr for ResponseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inflation" => Ok(ResponseKind::Inflation),
            "unemployment" => Ok(ResponseKind::Unemployment),
            other => Err(Error::InvalidArgument {
                detail: format!("unknown response kind `{other}`"),
            }),
        }
    }
}

/// One linear piece of a [`PiecewiseLinearModel`]. The first segment of a
/// model has no `break_start`; every later segment owns periods from its
/// `break_start` (inclusive) onward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub break_start: Option<Period>,
    pub slope: f64,
    pub intercept: f64,
}

/// A lagged linear response model with optional structural breaks:
/// `response_t = slope(t) * l_{t-lag} + intercept(t)`.
///
/// The segment for time `t` is the last whose break start is `<= t`, so a
/// break period itself belongs to the post-break segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearModel {
    response_kind: ResponseKind,
    lag: usize,
    segments: Vec<Segment>,
}

impl PiecewiseLinearModel {
    pub fn new(
        response_kind: ResponseKind,
        lag: usize,
        segments: Vec<Segment>,
    ) -> Result<PiecewiseLinearModel> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument {
                detail: "a model needs at least one segment".into(),
            });
        }
        if segments[0].break_start.is_some() {
            return Err(Error::InvalidArgument {
                detail: "the first segment must not carry a break period".into(),
            });
        }
        let mut prev: Option<Period> = None;
        for seg in &segments[1..] {
            let b = seg.break_start.ok_or_else(|| Error::InvalidArgument {
                detail: "every segment after the first needs a break period".into(),
            })?;
            if let Some(p) = prev {
                if b <= p {
                    return Err(Error::InvalidArgument {
                        detail: format!("break periods must be strictly increasing ({p} then {b})"),
                    });
                }
            }
            prev = Some(b);
        }
        Ok(PiecewiseLinearModel {
            response_kind,
            lag,
            segments,
        })
    }

    /// Single-segment model without a break.
    pub fn single(
        response_kind: ResponseKind,
        lag: usize,
        slope: f64,
        intercept: f64,
    ) -> PiecewiseLinearModel {
        PiecewiseLinearModel {
            response_kind,
            lag,
            segments: vec![Segment {
                break_start: None,
                slope,
                intercept,
            }],
        }
    }

    /// Two-segment model with one break. `pre` and `post` are
    /// `(slope, intercept)` pairs.
    pub fn with_break(
        response_kind: ResponseKind,
        lag: usize,
        pre: (f64, f64),
        break_at: Period,
        post: (f64, f64),
    ) -> PiecewiseLinearModel {
        PiecewiseLinearModel {
            response_kind,
            lag,
            segments: vec![
                Segment {
                    break_start: None,
                    slope: pre.0,
                    intercept: pre.1,
                },
                Segment {
                    break_start: Some(break_at),
                    slope: post.0,
                    intercept: post.1,
                },
            ],
        }
    }

    pub fn response_kind(&self) -> ResponseKind {
        self.response_kind
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Break period of a two-segment model, `None` for a single segment.
    pub fn break_at(&self) -> Option<Period> {
        self.segments.get(1).and_then(|s| s.break_start)
    }

    /// The segment owning period `t`: the last whose break start is `<= t`.
    pub fn segment_at(&self, t: Period) -> &Segment {
        let mut current = &self.segments[0];
        for seg in &self.segments[1..] {
            match seg.break_start {
                Some(b) if b <= t => current = seg,
                _ => break,
            }
        }
        current
    }

    /// The first segment extended over the whole span, used as the
    /// counterfactual "relationship valid before the break".
    pub fn pre_break_only(&self) -> PiecewiseLinearModel {
        let first = self.segments[0];
        PiecewiseLinearModel::single(self.response_kind, self.lag, first.slope, first.intercept)
    }

    /// Predicts over every period the driver can serve after lagging:
    /// the output starts `lag` periods after the driver and has its length.
    pub fn predict_all(&self, l: &GrowthRateSeries) -> Series {
        let shifted = l.series().lag_shift(self.lag);
        let values = shifted
            .iter()
            .map(|(t, lv)| {
                let seg = self.segment_at(t);
                seg.slope * lv + seg.intercept
            })
            .collect();
        Series::new(shifted.start(), values).expect("finite model output")
    }

    /// Predicts over `first..=last`, erroring when the lagged driver does
    /// not cover the requested span.
    pub fn predict_range(
        &self,
        l: &GrowthRateSeries,
        first: Period,
        last: Period,
    ) -> Result<Series> {
        let all = self.predict_all(l);
        let ok = all.index_of(first).is_some() && all.index_of(last).is_some();
        if !ok {
            return Err(Error::Coverage {
                detail: format!(
                    "driver (lag {}) covers {}..{}, requested {first}..{last}",
                    self.lag,
                    all.start(),
                    all.end().map(|p| p.to_string()).unwrap_or_default()
                ),
            });
        }
        all.window(first, last)
    }

    /// Serializes to the plain-text key/value document used by reports:
    /// `response_kind`, `lag`, then one `segment = break,slope,intercept`
    /// line per segment (empty break field for the first).
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("response_kind = {}\n", self.response_kind));
        out.push_str(&format!("lag = {}\n", self.lag));
        for seg in &self.segments {
            let b = seg.break_start.map(|p| p.to_string()).unwrap_or_default();
            out.push_str(&format!("segment = {b},{},{}\n", seg.slope, seg.intercept));
        }
        out
    }

    /// Parses the document written by [`PiecewiseLinearModel::to_kv`].
    pub fn parse_kv(text: &str) -> Result<PiecewiseLinearModel> {
        let mut response_kind = None;
        let mut lag = None;
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let parse_err = |message: String| Error::Config {
                line: i + 1,
                message,
            };
            match key {
                "response_kind" => response_kind = Some(value.parse::<ResponseKind>()?),
                "lag" => {
                    lag = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| parse_err(format!("invalid lag `{value}`")))?,
                    )
                }
                "segment" => {
                    let mut parts = value.splitn(3, ',');
                    let b = parts.next().unwrap_or("").trim();
                    let slope = parts
                        .next()
                        .ok_or_else(|| parse_err("segment needs slope".into()))?
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| parse_err("invalid segment slope".into()))?;
                    let intercept = parts
                        .next()
                        .ok_or_else(|| parse_err("segment needs intercept".into()))?
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| parse_err("invalid segment intercept".into()))?;
                    let break_start = if b.is_empty() {
                        None
                    } else {
                        Some(b.parse::<Period>()?)
                    };
                    segments.push(Segment {
                        break_start,
                        slope,
                        intercept,
                    });
                }
                other => {
                    return Err(parse_err(format!("unknown key `{other}`")));
                }
            }
        }
        let response_kind = response_kind.ok_or_else(|| Error::Config {
            line: 0,
            message: "missing response_kind".into(),
        })?;
        let lag = lag.ok_or_else(|| Error::Config {
            line: 0,
            message: "missing lag".into(),
        })?;
        PiecewiseLinearModel::new(response_kind, lag, segments)
    }
}

/// The trivariate balance form `pi_t = c1 * l_{t-i} + c2 * u_{t-s} + c3`.
///
/// The unemployment shift is stored as a non-negative backward lag `s`
/// (the value read at time `t` is `u_{t-s}`); forward shifts are
/// unrepresentable by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedModel {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub driver_lag: usize,
    pub unemployment_lag: usize,
}

impl GeneralizedModel {
    pub fn new(
        c1: f64,
        c2: f64,
        c3: f64,
        driver_lag: usize,
        unemployment_lag: usize,
    ) -> GeneralizedModel {
        GeneralizedModel {
            c1,
            c2,
            c3,
            driver_lag,
            unemployment_lag,
        }
    }

    /// Predicts over the maximal span jointly covered by the lagged driver
    /// and lagged unemployment; errors when that span is empty.
    pub fn predict_all(&self, l: &GrowthRateSeries, u: &Series) -> Result<Series> {
        let dl = l.series().lag_shift(self.driver_lag);
        let du = u.lag_shift(self.unemployment_lag);
        let (dl, du) = Series::align(&dl, &du)?;
        if dl.is_empty() {
            return Err(Error::Coverage {
                detail: "lagged driver and unemployment series do not overlap".into(),
            });
        }
        let values = dl
            .values()
            .iter()
            .zip(du.values())
            .map(|(lv, uv)| self.c1 * lv + self.c2 * uv + self.c3)
            .collect();
        Series::new(dl.start(), values)
    }

    pub fn predict_range(
        &self,
        l: &GrowthRateSeries,
        u: &Series,
        first: Period,
        last: Period,
    ) -> Result<Series> {
        let all = self.predict_all(l, u)?;
        if all.index_of(first).is_none() || all.index_of(last).is_none() {
            return Err(Error::Coverage {
                detail: format!(
                    "lagged inputs cover {}..{}, requested {first}..{last}",
                    all.start(),
                    all.end().map(|p| p.to_string()).unwrap_or_default()
                ),
            });
        }
        all.window(first, last)
    }

    pub fn to_kv(&self) -> String {
        format!(
            "c1 = {}\nc2 = {}\nc3 = {}\ndriver_lag = {}\nunemployment_lag = {}\n",
            self.c1, self.c2, self.c3, self.driver_lag, self.unemployment_lag
        )
    }
}

/// The per-period balance `pi_t + u_t` implied by two univariate models
/// sharing the same driver.
pub fn balance_sum(
    m_pi: &PiecewiseLinearModel,
    m_u: &PiecewiseLinearModel,
    l: &GrowthRateSeries,
) -> Result<Series> {
    let pi = m_pi.predict_all(l);
    let u = m_u.predict_all(l);
    let (pi, u) = Series::align(&pi, &u)?;
    if pi.is_empty() {
        return Err(Error::Coverage {
            detail: "no common span after applying both lags".into(),
        });
    }
    let values = pi
        .values()
        .iter()
        .zip(u.values())
        .map(|(a, b)| a + b)
        .collect();
    Series::new(pi.start(), values)
}

/// Observed-minus-counterfactual series with its mean over a reporting
/// window.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    pub gap: Series,
    pub window_start: Period,
    pub window_end: Period,
    pub window_mean: f64,
}

/// Difference between observations and the prediction of a counterfactual
/// model applied over the full span, with the mean gap over
/// `window = (start, end)`. Pass a single-segment model (for a fitted
/// two-segment model, [`PiecewiseLinearModel::pre_break_only`]) to measure
/// how far reality drifted from the pre-break relationship.
pub fn counterfactual_gap(
    observed: &Series,
    counterfactual_model: &PiecewiseLinearModel,
    l: &GrowthRateSeries,
    window: (Period, Period),
) -> Result<GapSeries> {
    let predicted = counterfactual_model.predict_all(l);
    let gap = observed.minus(&predicted)?;
    let (from, to) = window;
    let windowed = gap.window(from, to)?;
    if windowed.is_empty() {
        return Err(Error::EmptyWindow { from, to });
    }
    let window_mean = windowed.values().iter().sum::<f64>() / windowed.len() as f64;
    Ok(GapSeries {
        gap,
        window_start: from,
        window_end: to,
        window_mean,
    })
}
