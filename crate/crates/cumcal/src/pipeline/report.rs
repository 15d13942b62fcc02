//! Text-report and machine-record formatting.
//!
//! Rates and coefficients print to four decimals, test statistics and
//! critical values to two. Machine records carry the same quantities at
//! full precision, one `key = value` line each, so nothing in the text
//! report is report-only.

use std::fmt::Display;
use std::fmt::Write as _;

use crate::econometrics::{TestOutcome, TestReport};

pub(crate) fn fmt_rate(v: f64) -> String {
    format!("{v:.4}")
}

pub(crate) fn fmt_stat(v: f64) -> String {
    format!("{v:.2}")
}

/// One machine-readable record, rendered as `key = value` lines.
pub(crate) struct Record {
    pairs: Vec<(String, String)>,
}

impl Record {
    pub fn new(task: &str, kind: &str) -> Record {
        let mut r = Record { pairs: Vec::new() };
        r.push("task", task);
        r.push("kind", kind);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.pairs.push((key.into(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}

/// Writes one unit-root test to the report body and the record.
pub(crate) fn describe_test(report: &TestReport, out: &mut String, rec: &mut Record, prefix: &str) {
    match &report.outcome {
        TestOutcome::DegeneratePerfectFit => {
            writeln!(
                out,
                "  {:<6} degenerate perfect fit (zero residual variance, no finite statistic)",
                report.test_name
            )
            .unwrap();
            rec.push(format!("{prefix}_outcome"), "degenerate_perfect_fit");
        }
        TestOutcome::Statistics(stats) => {
            rec.push(format!("{prefix}_outcome"), "statistics");
            let mut line = format!("  {:<6}", report.test_name);
            for s in stats {
                let verdict = match s.reject_at {
                    Some(level) => format!("reject at {}", level.label()),
                    None => "no rejection".to_string(),
                };
                write!(
                    line,
                    " {} = {} (1%: {}, 5%: {}, 10%: {}) -> {verdict};",
                    s.name,
                    fmt_stat(s.value),
                    fmt_stat(s.critical_values.one_pct),
                    fmt_stat(s.critical_values.five_pct),
                    fmt_stat(s.critical_values.ten_pct),
                )
                .unwrap();
                rec.push(format!("{prefix}_{}", s.name), s.value);
                rec.push(
                    format!("{prefix}_{}_cv_1pct", s.name),
                    s.critical_values.one_pct,
                );
                rec.push(
                    format!("{prefix}_{}_cv_5pct", s.name),
                    s.critical_values.five_pct,
                );
                rec.push(
                    format!("{prefix}_{}_cv_10pct", s.name),
                    s.critical_values.ten_pct,
                );
                rec.push(
                    format!("{prefix}_{}_reject_at", s.name),
                    s.reject_at.map(|l| l.label()).unwrap_or("none"),
                );
            }
            let tail = match report.test_name {
                "pp" => format!(" bandwidth {}", report.lag_or_bandwidth),
                _ => format!(" lags {}", report.lag_or_bandwidth),
            };
            writeln!(out, "{line}{tail}, trend {}", report.trend).unwrap();
        }
    }
    rec.push(
        format!("{prefix}_lag_or_bandwidth"),
        report.lag_or_bandwidth,
    );
    rec.push(format!("{prefix}_trend"), report.trend);
}
