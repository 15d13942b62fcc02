//! Frequency-aware time-series container and the deterministic transforms
//! every other module consumes.
//!
//! A [`Series`] is a contiguous run of finite values at annual or quarterly
//! frequency. There are no gaps and no missing-value markers: index `k`
//! always corresponds to the start period advanced by `k`. All transforms
//! are pure and return new values, so series can be shared freely across
//! threads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sampling frequency of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frequency {
    Annual,
    Quarterly,
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Annual => write!(f, "annual"),
            Frequency::Quarterly => write!(f, "quarterly"),
        }
    }
}

impl FromStr for Frequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annual" => Ok(Frequency::Annual),
            "quarterly" => Ok(Frequency::Quarterly),
            other => Err(Error::InvalidArgument {
                detail: format!("unknown frequency `{other}` (expected annual or quarterly)"),
            }),
        }
    }
}

/// A single time period: a calendar year, or a quarter of one.
///
/// The quarter component is present exactly when the owning series is
/// quarterly. Ordering is total within one frequency; periods of different
/// frequencies never meet in practice because every binary operation checks
/// frequencies first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    Year(i32),
    Quarter(i32, u8),
}

impl Period {
    pub fn year(y: i32) -> Period {
        Period::Year(y)
    }

    /// Quarterly period; `q` must be in 1..=4.
    pub fn quarter(y: i32, q: u8) -> Period {
        assert!((1..=4).contains(&q), "quarter must be in 1..=4, got {q}");
        Period::Quarter(y, q)
    }

    pub fn frequency(&self) -> Frequency {
        match self {
            Period::Year(_) => Frequency::Annual,
            Period::Quarter(_, _) => Frequency::Quarterly,
        }
    }

    /// This period advanced by `k` periods (negative moves backward).
    pub fn advance(&self, k: i64) -> Period {
        match *self {
            Period::Year(y) => Period::Year((y as i64 + k) as i32),
            Period::Quarter(y, q) => {
                let idx = y as i64 * 4 + (q as i64 - 1) + k;
                Period::Quarter(idx.div_euclid(4) as i32, (idx.rem_euclid(4) + 1) as u8)
            }
        }
    }

    /// Signed number of periods from `earlier` to `self`; `None` on
    /// frequency mismatch.
    pub fn offset_from(&self, earlier: &Period) -> Option<i64> {
        match (*self, *earlier) {
            (Period::Year(a), Period::Year(b)) => Some(a as i64 - b as i64),
            (Period::Quarter(ay, aq), Period::Quarter(by, bq)) => {
                Some((ay as i64 * 4 + aq as i64) - (by as i64 * 4 + bq as i64))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Year(y) => write!(f, "{y}"),
            Period::Quarter(y, q) => write!(f, "{y}Q{q}"),
        }
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Parses `1962` (annual) or `1962Q1` (quarterly).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument {
            detail: format!("cannot parse period `{s}`"),
        };
        match s.split_once('Q') {
            Some((y, q)) => {
                let year: i32 = y.parse().map_err(|_| bad())?;
                let quarter: u8 = q.parse().map_err(|_| bad())?;
                if !(1..=4).contains(&quarter) {
                    return Err(bad());
                }
                Ok(Period::Quarter(year, quarter))
            }
            None => Ok(Period::Year(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// A contiguous, frequency-tagged sequence of finite real values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    start: Period,
    values: Vec<f64>,
}

impl Series {
    /// Builds a series after validating that every value is finite.
    pub fn new(start: Period, values: Vec<f64>) -> Result<Self> {
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    period: start.advance(k as i64),
                });
            }
        }
        Ok(Series { start, values })
    }

    /// Annual series starting at `year`.
    pub fn annual(year: i32, values: Vec<f64>) -> Result<Self> {
        Series::new(Period::Year(year), values)
    }

    /// Quarterly series starting at `year`Q`quarter`.
    pub fn quarterly(year: i32, quarter: u8, values: Vec<f64>) -> Result<Self> {
        Series::new(Period::quarter(year, quarter), values)
    }

    pub fn frequency(&self) -> Frequency {
        self.start.frequency()
    }

    pub fn start(&self) -> Period {
        self.start
    }

    /// Last covered period, `None` for an empty series.
    pub fn end(&self) -> Option<Period> {
        if self.values.is_empty() {
            None
        } else {
            Some(self.start.advance(self.values.len() as i64 - 1))
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period_at(&self, index: usize) -> Period {
        self.start.advance(index as i64)
    }

    /// Index of `p` within this series, `None` if outside the span or of a
    /// different frequency.
    pub fn index_of(&self, p: Period) -> Option<usize> {
        let off = p.offset_from(&self.start)?;
        if off >= 0 && (off as usize) < self.values.len() {
            Some(off as usize)
        } else {
            None
        }
    }

    pub fn get(&self, p: Period) -> Option<f64> {
        self.index_of(p).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Period, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.start.advance(k as i64), v))
    }

    /// Sub-series covering `from..=to` intersected with this span.
    pub fn window(&self, from: Period, to: Period) -> Result<Series> {
        if from.frequency() != self.frequency() || to.frequency() != self.frequency() {
            return Err(Error::FrequencyMismatch {
                left: self.frequency(),
                right: from.frequency(),
            });
        }
        let lo = from.max(self.start);
        let hi = match self.end() {
            Some(end) => to.min(end),
            None => return Err(Error::EmptyWindow { from, to }),
        };
        let span = hi.offset_from(&lo).unwrap_or(-1);
        if span < 0 {
            return Err(Error::EmptyWindow { from, to });
        }
        let i = lo.offset_from(&self.start).unwrap() as usize;
        Series::new(lo, self.values[i..=i + span as usize].to_vec())
    }

    /// Running sum: element `k` is the sum of the first `k + 1` values.
    /// Same start, frequency and length.
    pub fn cumulative_sum(&self) -> Series {
        let mut acc = 0.0;
        let values = self
            .values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Series {
            start: self.start,
            values,
        }
    }

    /// Trailing (right-aligned) mean over windows of `k` consecutive values.
    /// Output is `k - 1` shorter and starts `k - 1` periods later, so a
    /// smoothed value never uses future observations.
    pub fn moving_average(&self, k: usize) -> Result<Series> {
        if k == 0 {
            return Err(Error::InvalidArgument {
                detail: "moving average window must be >= 1".into(),
            });
        }
        if self.values.len() < k {
            return Err(Error::InsufficientData {
                what: "moving average",
                need: k,
                got: self.values.len(),
            });
        }
        let inv = 1.0 / k as f64;
        let values = self
            .values
            .windows(k)
            .map(|w| w.iter().sum::<f64>() * inv)
            .collect();
        Ok(Series {
            start: self.start.advance(k as i64 - 1),
            values,
        })
    }

    /// Same values re-dated `k` periods later, so that aligning by period
    /// pairs a response at `t` with this series' value at `t - k`.
    pub fn lag_shift(&self, k: usize) -> Series {
        Series {
            start: self.start.advance(k as i64),
            values: self.values.clone(),
        }
    }

    /// Element-wise difference: element `t` is `s_t - s_{t-1}`; one shorter,
    /// start advanced one period.
    pub fn first_difference(&self) -> Result<Series> {
        if self.values.len() < 2 {
            return Err(Error::InsufficientData {
                what: "first difference",
                need: 2,
                got: self.values.len(),
            });
        }
        let values = self.values.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Series {
            start: self.start.advance(1),
            values,
        })
    }

    /// Trims both series to their maximal common period span. Returns an
    /// empty pair (anchored at the later start) when the spans are disjoint.
    pub fn align(a: &Series, b: &Series) -> Result<(Series, Series)> {
        if a.frequency() != b.frequency() {
            return Err(Error::FrequencyMismatch {
                left: a.frequency(),
                right: b.frequency(),
            });
        }
        let start = a.start.max(b.start);
        let len = match (a.end(), b.end()) {
            (Some(ea), Some(eb)) => {
                let end = ea.min(eb);
                (end.offset_from(&start).unwrap() + 1).max(0) as usize
            }
            _ => 0,
        };
        let cut = |s: &Series| {
            let i = start.offset_from(&s.start).unwrap();
            let vals = if len == 0 {
                Vec::new()
            } else {
                s.values[i as usize..i as usize + len].to_vec()
            };
            Series {
                start,
                values: vals,
            }
        };
        Ok((cut(a), cut(b)))
    }

    /// Common-span restriction of several series at once.
    pub fn align_many(series: &[&Series]) -> Result<Vec<Series>> {
        let first = series.first().ok_or(Error::EmptyOverlap)?;
        let mut start = first.start;
        let mut end = first.end();
        for s in &series[1..] {
            if s.frequency() != first.frequency() {
                return Err(Error::FrequencyMismatch {
                    left: first.frequency(),
                    right: s.frequency(),
                });
            }
            start = start.max(s.start);
            end = match (end, s.end()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            };
        }
        let len = match end {
            Some(end) => (end.offset_from(&start).unwrap() + 1).max(0) as usize,
            None => 0,
        };
        Ok(series
            .iter()
            .map(|s| {
                let i = start.offset_from(&s.start).unwrap();
                let vals = if len == 0 {
                    Vec::new()
                } else {
                    s.values[i as usize..i as usize + len].to_vec()
                };
                Series {
                    start,
                    values: vals,
                }
            })
            .collect())
    }

    /// Element-wise difference of two aligned series (`self - other` on the
    /// common span).
    pub fn minus(&self, other: &Series) -> Result<Series> {
        let (a, b) = Series::align(self, other)?;
        let values = a
            .values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| x - y)
            .collect();
        Ok(Series {
            start: a.start,
            values,
        })
    }

    /// Log growth rate of a positive level series: element `t` is
    /// `ln(x_t) - ln(x_{t-1})`, annualized by a factor 4 for quarterly
    /// input. The result starts one period after the source.
    pub fn log_growth_rate(&self) -> Result<GrowthRateSeries> {
        if self.values.len() < 2 {
            return Err(Error::InsufficientData {
                what: "log growth rate",
                need: 2,
                got: self.values.len(),
            });
        }
        for (k, &v) in self.values.iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::NonPositiveLevel {
                    period: self.start.advance(k as i64),
                    value: v,
                });
            }
        }
        let scale = match self.frequency() {
            Frequency::Annual => 1.0,
            Frequency::Quarterly => 4.0,
        };
        let values = self
            .values
            .windows(2)
            .map(|w| scale * (w[1].ln() - w[0].ln()))
            .collect();
        Ok(GrowthRateSeries(Series {
            start: self.start.advance(1),
            values,
        }))
    }
}

/// A series of labour-force growth rates (per year), the sole driving
/// variable of every model in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRateSeries(Series);

impl GrowthRateSeries {
    /// Wraps a series whose values are already growth rates per year.
    pub fn from_rates(series: Series) -> GrowthRateSeries {
        GrowthRateSeries(series)
    }

    pub fn series(&self) -> &Series {
        &self.0
    }

    pub fn into_series(self) -> Series {
        self.0
    }

    pub fn moving_average(&self, k: usize) -> Result<GrowthRateSeries> {
        Ok(GrowthRateSeries(self.0.moving_average(k)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent natural-log oracle: ln(x) = 2 * atanh((x-1)/(x+1)),
    /// summed to machine precision.
    fn ln_oracle(x: f64) -> f64 {
        let z = (x - 1.0) / (x + 1.0);
        let z2 = z * z;
        let mut term = z;
        let mut sum = 0.0;
        let mut k = 0u32;
        loop {
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-22 {
                break;
            }
            term *= z2;
            k += 1;
        }
        2.0 * sum
    }

    fn annual(values: &[f64]) -> Series {
        Series::annual(1962, values.to_vec()).unwrap()
    }

    #[test]
    fn growth_rate_constant_series_is_zero() {
        let lf = annual(&[100.0, 100.0, 100.0]);
        let l = lf.log_growth_rate().unwrap();
        assert_eq!(l.series().values(), &[0.0, 0.0]);
        assert_eq!(l.series().start(), Period::Year(1963));
    }

    #[test]
    fn growth_rate_exact_by_construction() {
        let lf = annual(&[100.0, 100.0 * 0.01f64.exp(), 100.0 * 0.02f64.exp()]);
        let l = lf.log_growth_rate().unwrap();
        for v in l.series().values() {
            assert!((v - 0.01).abs() < 1e-14, "got {v}");
        }
    }

    #[test]
    fn growth_rate_matches_ln_oracle() {
        let lf = annual(&[100.0, 102.0]);
        let l = lf.log_growth_rate().unwrap();
        let expected = ln_oracle(1.02);
        assert!((expected - 0.019802627296179712).abs() < 1e-15);
        assert!((l.series().values()[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn growth_rate_quarterly_is_annualized() {
        let lf = Series::quarterly(1970, 1, vec![100.0, 100.0 * 0.005f64.exp()]).unwrap();
        let l = lf.log_growth_rate().unwrap();
        assert!((l.series().values()[0] - 0.02).abs() < 1e-14);
    }

    #[test]
    fn growth_rate_rejects_non_positive_levels() {
        let lf = annual(&[100.0, 0.0, 101.0]);
        match lf.log_growth_rate() {
            Err(Error::NonPositiveLevel { period, .. }) => {
                assert_eq!(period, Period::Year(1963));
            }
            other => panic!("expected NonPositiveLevel, got {other:?}"),
        }
    }

    #[test]
    fn growth_rate_needs_two_values() {
        let lf = annual(&[100.0]);
        assert!(matches!(
            lf.log_growth_rate(),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn growth_rate_scale_invariant() {
        let base = annual(&[100.0, 103.0, 101.5, 108.0]);
        let scaled = annual(&[700.0, 721.0, 710.5, 756.0]);
        let a = base.log_growth_rate().unwrap();
        let b = scaled.log_growth_rate().unwrap();
        for (x, y) in a.series().values().iter().zip(b.series().values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cumulative_sum_examples() {
        assert_eq!(
            annual(&[1.0, 2.0, 3.0]).cumulative_sum().values(),
            &[1.0, 3.0, 6.0]
        );
        assert!(annual(&[]).cumulative_sum().is_empty());
        let c = annual(&[0.02, -0.01, 0.03]).cumulative_sum();
        let manual = [0.02, 0.02 - 0.01, 0.02 - 0.01 + 0.03];
        for (got, want) in c.values().iter().zip(manual) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn moving_average_examples() {
        let s = annual(&[1.0, 2.0, 3.0, 4.0]);
        let ma = s.moving_average(2).unwrap();
        assert_eq!(ma.values(), &[1.5, 2.5, 3.5]);
        assert_eq!(ma.start(), Period::Year(1963));

        let id = s.moving_average(1).unwrap();
        assert_eq!(id, s);

        let s = annual(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0]);
        let ma = s.moving_average(8).unwrap();
        // manual window means: first eight ones, then (7 + 2) / 8
        assert_eq!(ma.values(), &[1.0, 1.125]);

        assert!(matches!(
            annual(&[1.0, 2.0]).moving_average(3),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn lag_shift_examples() {
        let s = annual(&[1.0, 2.0]);
        assert_eq!(s.lag_shift(0), s);
        assert_eq!(s.lag_shift(1).start(), Period::Year(1963));
        assert_eq!(s.lag_shift(1).values(), s.values());

        let q = Series::quarterly(1970, 1, vec![1.0, 2.0]).unwrap();
        // eight-quarter shift: 1970Q1 -> 1972Q1
        assert_eq!(q.lag_shift(8).start(), Period::quarter(1972, 1));
    }

    #[test]
    fn align_examples() {
        let a = Series::annual(1962, vec![0.0; 48]).unwrap(); // 1962..=2009
        let b = Series::annual(1964, vec![0.0; 47]).unwrap(); // 1964..=2010
        let (a2, b2) = Series::align(&a, &b).unwrap();
        assert_eq!(a2.start(), Period::Year(1964));
        assert_eq!(a2.end(), Some(Period::Year(2009)));
        assert_eq!(a2.len(), b2.len());

        let (c, d) = Series::align(&a, &a).unwrap();
        assert_eq!(c, a);
        assert_eq!(d, a);

        let e = Series::annual(2050, vec![1.0, 2.0]).unwrap();
        let (x, y) = Series::align(&a, &e).unwrap();
        assert!(x.is_empty() && y.is_empty());

        let q = Series::quarterly(1970, 1, vec![1.0]).unwrap();
        assert!(matches!(
            Series::align(&a, &q),
            Err(Error::FrequencyMismatch { .. })
        ));
    }

    #[test]
    fn first_difference_examples() {
        let s = annual(&[1.0, 3.0, 6.0]);
        let d = s.first_difference().unwrap();
        assert_eq!(d.values(), &[2.0, 3.0]);
        assert_eq!(d.start(), Period::Year(1963));

        let c = annual(&[5.0, 5.0, 5.0]).first_difference().unwrap();
        assert_eq!(c.values(), &[0.0, 0.0]);

        assert!(matches!(
            annual(&[1.0]).first_difference(),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn non_finite_rejected_at_construction() {
        match Series::annual(1962, vec![1.0, f64::NAN]) {
            Err(Error::NonFinite { period }) => assert_eq!(period, Period::Year(1963)),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn period_parse_and_display() {
        assert_eq!("1962".parse::<Period>().unwrap(), Period::Year(1962));
        assert_eq!(
            "1970Q3".parse::<Period>().unwrap(),
            Period::quarter(1970, 3)
        );
        assert!("1970Q5".parse::<Period>().is_err());
        assert_eq!(
            Period::quarter(1970, 4).advance(1),
            Period::quarter(1971, 1)
        );
        assert_eq!(
            Period::quarter(1970, 1).advance(-1),
            Period::quarter(1969, 4)
        );
        assert_eq!(Period::Year(1990).to_string(), "1990");
        assert_eq!(Period::quarter(1990, 2).to_string(), "1990Q2");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn finite_vec() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-1.0e3..1.0e3f64, 2..40)
        }

        proptest! {
            #[test]
            fn diff_inverts_cumsum(values in finite_vec()) {
                let s = Series::annual(1962, values.clone()).unwrap();
                let round = s.cumulative_sum().first_difference().unwrap();
                prop_assert_eq!(round.start(), Period::Year(1963));
                for (got, want) in round.values().iter().zip(&values[1..]) {
                    let tol = 1e-12 * want.abs().max(1.0);
                    prop_assert!((got - want).abs() <= tol);
                }
            }

            #[test]
            fn cumsum_last_is_total(values in finite_vec()) {
                let s = Series::annual(1962, values.clone()).unwrap();
                let total: f64 = values.iter().sum();
                let last = *s.cumulative_sum().values().last().unwrap();
                let tol = 1e-12 * total.abs().max(1.0);
                prop_assert!((last - total).abs() <= tol);
            }

            #[test]
            fn lag_shift_adds(values in finite_vec(), a in 0usize..6, b in 0usize..6) {
                let s = Series::annual(1962, values).unwrap();
                prop_assert_eq!(s.lag_shift(a).lag_shift(b), s.lag_shift(a + b));
            }

            #[test]
            fn moving_average_keeps_constant_mean(c in -5.0..5.0f64, n in 3usize..20, k in 1usize..10) {
                prop_assume!(k <= n);
                let s = Series::annual(1970, vec![c; n]).unwrap();
                let ma = s.moving_average(k).unwrap();
                prop_assert_eq!(ma.len(), n - k + 1);
                for v in ma.values() {
                    prop_assert!((v - c).abs() < 1e-12);
                }
            }
        }
    }
}
