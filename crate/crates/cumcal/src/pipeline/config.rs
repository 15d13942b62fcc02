//! Plain-text run configuration.
//!
//! A config is a sequence of blocks, one per line-delimited `{ ... }`
//! body. `source` blocks declare input files; `task` blocks queue work in
//! declaration order:
//!
//! ```text
//! source { path = fixtures/labour_force.csv  role = labour_force  frequency = annual }
//!
//! task fit_univariate {
//!   name = fit_u
//!   driver = labour_force
//!   response = unemployment
//!   break = 1991
//!   window = 4
//!   lags = 0..5
//!   out_curves = true
//!   out_svg = true
//! }
//! ```
//!
//! Keys take `key = value` form; `#` starts a comment; lag ranges are
//! inclusive (`0..5` means lags 0 through 5); period windows are written
//! `1990..2009`.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use super::csv::CurveKind;
use crate::econometrics::TrendSpec;
use crate::error::{Error, Result};
use crate::series::{Frequency, Period};

/// What a source file measures. A run may carry one series per
/// role/frequency pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceRole {
    LabourForce,
    Unemployment,
    Dgdp,
    Cpi,
}

impl std::fmt::Display for SourceRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceRole::LabourForce => write!(f, "labour_force"),
            SourceRole::Unemployment => write!(f, "unemployment"),
            SourceRole::Dgdp => write!(f, "dgdp"),
            SourceRole::Cpi => write!(f, "cpi"),
        }
    }
}

impl FromStr for SourceRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labour_force" => Ok(SourceRole::LabourForce),
            "unemployment" => Ok(SourceRole::Unemployment),
            "dgdp" => Ok(SourceRole::Dgdp),
            "cpi" => Ok(SourceRole::Cpi),
            other => Err(Error::InvalidArgument {
                detail: format!("unknown source role `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DataSource {
    pub path: PathBuf,
    pub role: SourceRole,
    pub frequency: Frequency,
}

#[derive(Debug, Clone)]
pub struct Task {
    pub name: String,
    pub kind: TaskKind,
}

#[derive(Debug, Clone)]
pub enum TaskKind {
    FitUnivariate {
        driver: SourceRole,
        /// Whether `driver` is a level series (log growth applied) or
        /// already a growth-rate series.
        driver_is_level: bool,
        response: SourceRole,
        break_candidate: Period,
        window: usize,
        lags: RangeInclusive<usize>,
        smooth: Option<usize>,
        /// Report the mean observed-minus-counterfactual gap over this
        /// window, with the pre-break relationship extended past the break.
        counterfactual: Option<(Period, Period)>,
        out_curves: bool,
        out_svg: bool,
    },
    FitGeneralized {
        driver: SourceRole,
        driver_is_level: bool,
        unemployment: SourceRole,
        response: SourceRole,
        driver_lag: usize,
        unemployment_lag: usize,
        smooth: Option<usize>,
        out_curves: bool,
        out_svg: bool,
    },
    UnitRoot {
        input: SourceRole,
        /// Test the log growth rate of the input rather than its level.
        growth: bool,
        lags: usize,
        trend: Option<TrendSpec>,
        bandwidth: Option<usize>,
    },
    Cointegration {
        driver: SourceRole,
        driver_is_level: bool,
        response: SourceRole,
        break_candidate: Period,
        window: usize,
        lags: RangeInclusive<usize>,
        smooth: Option<usize>,
        adf_lags: usize,
        maxlag: usize,
        trend: TrendSpec,
    },
    ForecastEval {
        driver: SourceRole,
        driver_is_level: bool,
        response: SourceRole,
        horizon: usize,
        smooth: Option<usize>,
    },
    Figure {
        inputs: Vec<SourceRole>,
        kind: CurveKind,
        growth: bool,
        smooth: Option<usize>,
        title: String,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sources: Vec<DataSource>,
    pub tasks: Vec<Task>,
}

impl RunConfig {
    /// Structural checks: unique role/frequency pairs, unique task names,
    /// every task referencing a declared source.
    pub fn validate(&self) -> Result<()> {
        let mut pairs = Vec::new();
        for s in &self.sources {
            let key = (s.role, s.frequency);
            if pairs.contains(&key) {
                return Err(Error::InvalidArgument {
                    detail: format!("duplicate source for role {} at {}", s.role, s.frequency),
                });
            }
            pairs.push(key);
        }
        let mut names = Vec::new();
        for t in &self.tasks {
            if t.name.is_empty() || t.name.contains(['/', '\\', ' ']) {
                return Err(Error::InvalidArgument {
                    detail: format!("invalid task name `{}`", t.name),
                });
            }
            if names.contains(&t.name.as_str()) {
                return Err(Error::InvalidArgument {
                    detail: format!("duplicate task name `{}`", t.name),
                });
            }
            names.push(t.name.as_str());
            for role in t.kind.referenced_roles() {
                if !self.sources.iter().any(|s| s.role == role) {
                    return Err(Error::InvalidArgument {
                        detail: format!("task `{}` references undeclared source {role}", t.name),
                    });
                }
            }
        }
        Ok(())
    }
}

impl TaskKind {
    fn referenced_roles(&self) -> Vec<SourceRole> {
        match self {
            TaskKind::FitUnivariate {
                driver, response, ..
            } => vec![*driver, *response],
            TaskKind::FitGeneralized {
                driver,
                unemployment,
                response,
                ..
            } => vec![*driver, *unemployment, *response],
            TaskKind::UnitRoot { input, .. } => vec![*input],
            TaskKind::Cointegration {
                driver, response, ..
            } => vec![*driver, *response],
            TaskKind::ForecastEval {
                driver, response, ..
            } => vec![*driver, *response],
            TaskKind::Figure { inputs, .. } => inputs.clone(),
        }
    }
}

struct Block {
    header: String,
    line: usize,
    entries: Vec<(usize, String, String)>,
}

fn split_blocks(text: &str) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &mut current {
            None => {
                // either `header {` opening a multi-line block, or a full
                // inline `header { k = v  k = v }`
                if let Some(header) = line.strip_suffix('{').map(str::trim) {
                    current = Some(Block {
                        header: header.to_string(),
                        line: line_no,
                        entries: Vec::new(),
                    });
                    continue;
                }
                let inline = line
                    .split_once('{')
                    .and_then(|(h, rest)| rest.strip_suffix('}').map(|body| (h.trim(), body)));
                let (header, body) = inline.ok_or_else(|| Error::Config {
                    line: line_no,
                    message: format!(
                        "expected a `source {{` or `task <kind> {{` header, got `{line}`"
                    ),
                })?;
                let mut block = Block {
                    header: header.to_string(),
                    line: line_no,
                    entries: Vec::new(),
                };
                for part in body.split("  ").map(str::trim).filter(|p| !p.is_empty()) {
                    let (k, v) = part.split_once('=').ok_or_else(|| Error::Config {
                        line: line_no,
                        message: format!("expected `key = value`, got `{part}`"),
                    })?;
                    block
                        .entries
                        .push((line_no, k.trim().to_string(), v.trim().to_string()));
                }
                blocks.push(block);
            }
            Some(block) => {
                if line == "}" {
                    blocks.push(current.take().unwrap());
                } else {
                    // allow several `key = value` pairs on one line,
                    // separated by two or more spaces
                    for part in line.split("  ").map(str::trim).filter(|p| !p.is_empty()) {
                        let (k, v) = part.split_once('=').ok_or_else(|| Error::Config {
                            line: line_no,
                            message: format!("expected `key = value`, got `{part}`"),
                        })?;
                        block
                            .entries
                            .push((line_no, k.trim().to_string(), v.trim().to_string()));
                    }
                }
            }
        }
    }
    if let Some(block) = current {
        return Err(Error::Config {
            line: block.line,
            message: format!("unclosed block `{}`", block.header),
        });
    }
    Ok(blocks)
}

struct Entries {
    line: usize,
    items: Vec<(usize, String, String)>,
    used: Vec<bool>,
}

impl Entries {
    fn new(block: Block) -> Entries {
        let used = vec![false; block.entries.len()];
        Entries {
            line: block.line,
            items: block.entries,
            used,
        }
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        for (i, (line, k, v)) in self.items.iter().enumerate() {
            if k == key && !self.used[i] {
                self.used[i] = true;
                return Some((*line, v.clone()));
            }
        }
        None
    }

    fn require(&mut self, key: &str) -> Result<(usize, String)> {
        self.take(key).ok_or_else(|| Error::Config {
            line: self.line,
            message: format!("missing required key `{key}`"),
        })
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, v) = self.require(key)?;
        v.parse().map_err(|_| Error::Config {
            line,
            message: format!("cannot parse `{key} = {v}`"),
        })
    }

    fn parse_opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Config {
                line,
                message: format!("cannot parse `{key} = {v}`"),
            }),
        }
    }

    fn parse_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.parse_opt(key)?.unwrap_or(default))
    }

    fn finish(self) -> Result<()> {
        for (i, (line, k, _)) in self.items.iter().enumerate() {
            if !self.used[i] {
                return Err(Error::Config {
                    line: *line,
                    message: format!("unknown key `{k}`"),
                });
            }
        }
        Ok(())
    }
}

fn parse_lag_range(text: &str) -> Option<RangeInclusive<usize>> {
    let (a, b) = text.split_once("..")?;
    let lo: usize = a.trim().parse().ok()?;
    let hi: usize = b.trim().trim_start_matches('=').trim().parse().ok()?;
    Some(lo..=hi)
}

fn parse_period_window(text: &str) -> Option<(Period, Period)> {
    let (a, b) = text.split_once("..")?;
    let lo: Period = a.trim().parse().ok()?;
    let hi: Period = b.trim().trim_start_matches('=').trim().parse().ok()?;
    Some((lo, hi))
}

fn driver_is_level(e: &mut Entries) -> Result<bool> {
    match e.take("driver_kind") {
        None => Ok(true),
        Some((_, v)) if v == "level" => Ok(true),
        Some((_, v)) if v == "growth" => Ok(false),
        Some((line, v)) => Err(Error::Config {
            line,
            message: format!("driver_kind must be `level` or `growth`, got `{v}`"),
        }),
    }
}

/// Parses a run configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut sources = Vec::new();
    let mut tasks = Vec::new();
    for block in split_blocks(text)? {
        let header = block.header.clone();
        let line = block.line;
        let mut e = Entries::new(block);
        match header.as_str() {
            "source" => {
                let (_, path) = e.require("path")?;
                sources.push(DataSource {
                    path: PathBuf::from(path),
                    role: e.parse("role")?,
                    frequency: e.parse("frequency")?,
                });
            }
            "task fit_univariate" => {
                let name = e.require("name")?.1;
                let kind = TaskKind::FitUnivariate {
                    driver: e.parse("driver")?,
                    driver_is_level: driver_is_level(&mut e)?,
                    response: e.parse("response")?,
                    break_candidate: e.parse("break")?,
                    window: e.parse_or("window", 4)?,
                    lags: {
                        let (l, v) = e.require("lags")?;
                        parse_lag_range(&v).ok_or(Error::Config {
                            line: l,
                            message: format!("cannot parse lag range `{v}`"),
                        })?
                    },
                    smooth: e.parse_opt("smooth")?,
                    counterfactual: match e.take("counterfactual") {
                        None => None,
                        Some((l, v)) => Some(parse_period_window(&v).ok_or(Error::Config {
                            line: l,
                            message: format!("cannot parse period window `{v}`"),
                        })?),
                    },
                    out_curves: e.parse_or("out_curves", false)?,
                    out_svg: e.parse_or("out_svg", false)?,
                };
                tasks.push(Task { name, kind });
            }
            "task fit_generalized" => {
                let name = e.require("name")?.1;
                let kind = TaskKind::FitGeneralized {
                    driver: e.parse("driver")?,
                    driver_is_level: driver_is_level(&mut e)?,
                    unemployment: e.parse("unemployment")?,
                    response: e.parse("response")?,
                    driver_lag: e.parse("driver_lag")?,
                    unemployment_lag: e.parse("unemployment_lag")?,
                    smooth: e.parse_opt("smooth")?,
                    out_curves: e.parse_or("out_curves", false)?,
                    out_svg: e.parse_or("out_svg", false)?,
                };
                tasks.push(Task { name, kind });
            }
            "task unitroot" => {
                let name = e.require("name")?.1;
                let kind = TaskKind::UnitRoot {
                    input: e.parse("input")?,
                    growth: e.parse_or("growth", false)?,
                    lags: e.parse_or("lags", 2)?,
                    trend: e.parse_opt("trend")?,
                    bandwidth: e.parse_opt("bandwidth")?,
                };
                tasks.push(Task { name, kind });
            }
            "task cointegration" => {
                let name = e.require("name")?.1;
                let kind = TaskKind::Cointegration {
                    driver: e.parse("driver")?,
                    driver_is_level: driver_is_level(&mut e)?,
                    response: e.parse("response")?,
                    break_candidate: e.parse("break")?,
                    window: e.parse_or("window", 4)?,
                    lags: {
                        let (l, v) = e.require("lags")?;
                        parse_lag_range(&v).ok_or(Error::Config {
                            line: l,
                            message: format!("cannot parse lag range `{v}`"),
                        })?
                    },
                    smooth: e.parse_opt("smooth")?,
                    adf_lags: e.parse_or("adf_lags", 2)?,
                    maxlag: e.parse_or("maxlag", 3)?,
                    trend: e.parse_or("trend", TrendSpec::None)?,
                };
                tasks.push(Task { name, kind });
            }
            "task forecast_eval" => {
                let name = e.require("name")?.1;
                let kind = TaskKind::ForecastEval {
                    driver: e.parse("driver")?,
                    driver_is_level: driver_is_level(&mut e)?,
                    response: e.parse("response")?,
                    horizon: e.parse("horizon")?,
                    smooth: e.parse_opt("smooth")?,
                };
                tasks.push(Task { name, kind });
            }
            "task figure" => {
                let name = e.require("name")?.1;
                let (l, inputs_raw) = e.require("inputs")?;
                let inputs = inputs_raw
                    .split(',')
                    .map(|s| s.trim().parse::<SourceRole>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|_| Error::Config {
                        line: l,
                        message: format!("cannot parse inputs `{inputs_raw}`"),
                    })?;
                let kind_raw = e.parse_or("kind", "dynamic".to_string())?;
                let kind = match kind_raw.as_str() {
                    "dynamic" => CurveKind::Dynamic,
                    "cumulative" => CurveKind::Cumulative,
                    other => {
                        return Err(Error::Config {
                            line,
                            message: format!("kind must be dynamic or cumulative, got `{other}`"),
                        })
                    }
                };
                let task_kind = TaskKind::Figure {
                    inputs,
                    kind,
                    growth: e.parse_or("growth", false)?,
                    smooth: e.parse_opt("smooth")?,
                    title: e.parse_or("title", name.clone())?,
                };
                tasks.push(Task {
                    name,
                    kind: task_kind,
                });
            }
            other => {
                return Err(Error::Config {
                    line,
                    message: format!("unknown block `{other}`"),
                });
            }
        }
        e.finish()?;
    }
    let config = RunConfig { sources, tasks };
    config.validate()?;
    Ok(config)
}
