//! Statistical validation battery: OLS core, ADF, DF-GLS and
//! Phillips-Perron unit-root tests, residual-based cointegration, and the
//! Johansen trace test for cointegration rank.

mod johansen;
mod ols;
pub mod tables;
mod unit_root;

pub use johansen::{johansen_trace, RankReport};
pub use ols::{ols, OlsFit};
pub use unit_root::{adf_test, dfgls_test, pp_test, residual_cointegration_test};

use crate::error::{Error, Result};

/// Deterministic terms included in a test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendSpec {
    None,
    Constant,
    ConstantAndTrend,
}

impl std::fmt::Display for TrendSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrendSpec::None => write!(f, "none"),
            TrendSpec::Constant => write!(f, "constant"),
            TrendSpec::ConstantAndTrend => write!(f, "constant_and_trend"),
        }
    }
}

impl std::str::FromStr for TrendSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TrendSpec::None),
            "constant" => Ok(TrendSpec::Constant),
            "constant_and_trend" | "trend" => Ok(TrendSpec::ConstantAndTrend),
            other => Err(Error::InvalidArgument {
                detail: format!("unknown trend spec `{other}`"),
            }),
        }
    }
}

/// Tabulated significance levels, ordered strictest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SignificanceLevel {
    OnePercent,
    FivePercent,
    TenPercent,
}

impl SignificanceLevel {
    pub fn label(&self) -> &'static str {
        match self {
            SignificanceLevel::OnePercent => "1%",
            SignificanceLevel::FivePercent => "5%",
            SignificanceLevel::TenPercent => "10%",
        }
    }
}

/// Critical values at the 1, 5 and 10 percent levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    pub one_pct: f64,
    pub five_pct: f64,
    pub ten_pct: f64,
}

impl CriticalValues {
    pub fn at(&self, level: SignificanceLevel) -> f64 {
        match level {
            SignificanceLevel::OnePercent => self.one_pct,
            SignificanceLevel::FivePercent => self.five_pct,
            SignificanceLevel::TenPercent => self.ten_pct,
        }
    }
}

/// One test statistic with its critical values. `reject_at` is the
/// smallest tabulated level at which the statistic falls below the
/// critical value, absent when it never does.
#[derive(Debug, Clone)]
pub struct Statistic {
    pub name: &'static str,
    pub value: f64,
    pub critical_values: CriticalValues,
    pub reject_at: Option<SignificanceLevel>,
}

impl Statistic {
    pub(crate) fn evaluate(name: &'static str, value: f64, cv: CriticalValues) -> Statistic {
        let reject_at = if value < cv.one_pct {
            Some(SignificanceLevel::OnePercent)
        } else if value < cv.five_pct {
            Some(SignificanceLevel::FivePercent)
        } else if value < cv.ten_pct {
            Some(SignificanceLevel::TenPercent)
        } else {
            None
        };
        Statistic {
            name,
            value,
            critical_values: cv,
            reject_at,
        }
    }
}

/// Result body of a unit-root test. A regression that fits its input
/// exactly (deterministic data, zero residual variance) has an unbounded
/// t-ratio and is reported as a degenerate outcome instead of a number.
#[derive(Debug, Clone)]
pub enum TestOutcome {
    Statistics(Vec<Statistic>),
    DegeneratePerfectFit,
}

/// A unit-root (or residual-cointegration) test report.
#[derive(Debug, Clone)]
pub struct TestReport {
    pub test_name: &'static str,
    pub outcome: TestOutcome,
    pub lag_or_bandwidth: usize,
    pub trend: TrendSpec,
}

impl TestReport {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.outcome, TestOutcome::DegeneratePerfectFit)
    }

    pub fn statistic(&self, name: &str) -> Option<&Statistic> {
        match &self.outcome {
            TestOutcome::Statistics(stats) => stats.iter().find(|s| s.name == name),
            TestOutcome::DegeneratePerfectFit => None,
        }
    }

    /// The headline statistic the test's decision is read from: the
    /// t-ratio (`z_t` for Phillips-Perron).
    pub fn primary(&self) -> Option<&Statistic> {
        match self.test_name {
            "pp" => self.statistic("z_t"),
            _ => match &self.outcome {
                TestOutcome::Statistics(stats) => stats.first(),
                TestOutcome::DegeneratePerfectFit => None,
            },
        }
    }

    /// Whether the primary statistic rejects the unit-root null at
    /// `level`. Degenerate outcomes never count as rejections.
    pub fn rejects_at(&self, level: SignificanceLevel) -> bool {
        self.primary()
            .and_then(|s| s.reject_at)
            .is_some_and(|r| r <= level)
    }
}
