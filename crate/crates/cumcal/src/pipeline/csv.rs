//! CSV ingestion and curve emission.
//!
//! The input schema is deliberately minimal: a `period,value` header, one
//! row per period in ascending order with no gaps, annual periods as
//! `1962` and quarterly ones as `1962Q1`. Values use a decimal point and
//! are written back with Rust's shortest round-trip float formatting, so
//! a load of an emitted file reproduces the series bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Frequency, Period, Series};

/// Loads a validated contiguous series from `path`.
pub fn load_csv(path: &Path, frequency: Frequency) -> Result<Series> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_csv(&text, frequency, &path.display().to_string())
}

pub(crate) fn parse_csv(text: &str, frequency: Frequency, path: &str) -> Result<Series> {
    let err = |line: usize, message: String| Error::Csv {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "period,value" => {}
        Some((_, header)) => {
            return Err(err(
                1,
                format!("expected header `period,value`, got `{}`", header.trim()),
            ))
        }
        None => return Err(err(1, "empty file".into())),
    }

    let mut start: Option<Period> = None;
    let mut expected: Option<Period> = None;
    let mut values = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (p, v) = line
            .split_once(',')
            .ok_or_else(|| err(line_no, format!("expected `period,value`, got `{line}`")))?;
        let period: Period = p
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("cannot parse period `{}`", p.trim())))?;
        if period.frequency() != frequency {
            return Err(err(
                line_no,
                format!(
                    "period `{period}` is {} but the file was declared {frequency}",
                    period.frequency()
                ),
            ));
        }
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("cannot parse value `{}`", v.trim())))?;
        if !value.is_finite() {
            return Err(err(line_no, format!("non-finite value at {period}")));
        }
        match expected {
            None => start = Some(period),
            Some(want) if period == want => {}
            Some(want) => {
                let what = if period < want {
                    "duplicate or out-of-order"
                } else {
                    "gap:"
                };
                return Err(err(
                    line_no,
                    format!("{what} expected period {want}, got {period}"),
                ));
            }
        }
        expected = Some(period.advance(1));
        values.push(value);
    }
    let start = start.ok_or_else(|| err(2, "no data rows".into()))?;
    Series::new(start, values)
}

/// Writes a series in the `period,value` schema accepted by [`load_csv`].
pub fn write_series_csv(series: &Series, path: &Path) -> Result<()> {
    let mut out = String::from("period,value\n");
    for (p, v) in series.iter() {
        writeln!(out, "{p},{v}").expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Which representation of a pair of curves to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Dynamic,
    Cumulative,
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::Dynamic => write!(f, "dynamic"),
            CurveKind::Cumulative => write!(f, "cumulative"),
        }
    }
}

/// Writes aligned observed and predicted curves with their residual as
/// `period,observed,predicted,residual`. The cumulative kind integrates
/// both curves before writing.
pub fn emit_curves(
    observed: &Series,
    predicted: &Series,
    kind: CurveKind,
    path: &Path,
) -> Result<()> {
    let (mut obs, mut pred) = Series::align(observed, predicted)?;
    if kind == CurveKind::Cumulative {
        obs = obs.cumulative_sum();
        pred = pred.cumulative_sum();
    }
    let mut out = String::from("period,observed,predicted,residual\n");
    for ((p, o), v) in obs.iter().zip(pred.values()) {
        writeln!(out, "{p},{o},{v},{}", o - v).expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_annual_and_quarterly() {
        let s = parse_csv(
            "period,value\n1962,0.012\n1963,0.015\n",
            Frequency::Annual,
            "t",
        )
        .unwrap();
        assert_eq!(s.start(), Period::Year(1962));
        assert_eq!(s.values(), &[0.012, 0.015]);

        let q = parse_csv(
            "period,value\n1970Q1,0.01\n1970Q2,0.02\n",
            Frequency::Quarterly,
            "t",
        )
        .unwrap();
        assert_eq!(q.start(), Period::quarter(1970, 1));
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn gap_reports_line_number() {
        let e = parse_csv(
            "period,value\n1962,0.012\n1964,0.015\n",
            Frequency::Annual,
            "t",
        )
        .unwrap_err();
        match e {
            Error::Csv { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("gap"), "{message}");
            }
            other => panic!("expected Csv error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_parse_errors() {
        assert!(parse_csv("period,value\n1962,0.1\n1962,0.2\n", Frequency::Annual, "t").is_err());
        assert!(parse_csv("period,value\n1962,abc\n", Frequency::Annual, "t").is_err());
        assert!(parse_csv("period,value\nxyz,0.1\n", Frequency::Annual, "t").is_err());
        assert!(parse_csv("period,value\n1962,inf\n", Frequency::Annual, "t").is_err());
        assert!(parse_csv("value\n", Frequency::Annual, "t").is_err());
    }

    #[test]
    fn frequency_mismatch_is_rejected() {
        let e = parse_csv("period,value\n1970Q1,0.1\n", Frequency::Annual, "t").unwrap_err();
        assert!(matches!(e, Error::Csv { line: 2, .. }));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let s = Series::annual(1962, vec![0.1, 0.2 / 3.0, -1.5e-7, 42.0]).unwrap();
        write_series_csv(&s, &path).unwrap();
        let back = load_csv(&path, Frequency::Annual).unwrap();
        assert_eq!(s, back);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            /// Writing then loading reproduces the series bit for bit,
            /// whatever finite values it holds.
            #[test]
            fn round_trip_reproduces_any_series(
                values in proptest::collection::vec(
                    proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO,
                    1..50,
                ),
                year in 1800i32..2100,
            ) {
                let s = Series::annual(year, values).unwrap();
                let mut text = String::from("period,value\n");
                for (p, v) in s.iter() {
                    text.push_str(&format!("{p},{v}\n"));
                }
                let back = parse_csv(&text, Frequency::Annual, "prop").unwrap();
                prop_assert_eq!(
                    s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                    back.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn curve_emission() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let o = Series::annual(2000, vec![1.0]).unwrap();
        emit_curves(&o, &o, CurveKind::Dynamic, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "period,observed,predicted,residual\n2000,1,1,0\n");

        let o = Series::annual(2000, vec![1.0, 2.0]).unwrap();
        let p = Series::annual(2000, vec![0.5, 0.5]).unwrap();
        let path2 = dir.path().join("c2.csv");
        emit_curves(&o, &p, CurveKind::Cumulative, &path2).unwrap();
        let text = std::fs::read_to_string(&path2).unwrap();
        // cumulative applies the running sum to both curves first
        assert!(text.contains("2001,3,1,2"));
    }
}
