//! Calibration of lagged linear macro models on cumulative curves, with a
//! structural-break search and the econometric test battery to validate
//! the fitted links.
//!
//! The crate models price inflation and unemployment as linear, lagged
//! functions of the labour-force growth rate. Coefficients are estimated
//! by least squares on *cumulative* curves, where uncorrelated noise
//! cancels while a coefficient shift keeps accumulating; that makes the
//! break-year grid search sharp and is the heart of [`calibrate`].
//!
//! Modules:
//! - [`series`]: frequency-aware series container and transforms (log
//!   growth rate, cumulative sum, moving average, lagging, alignment,
//!   differencing).
//! - [`model`]: piecewise linear lagged models, the generalized trivariate
//!   form, balance sums and counterfactual gap series.
//! - [`calibrate`]: cumulative least squares, the break/lag grid search,
//!   fit metrics and forecast evaluation against the naive benchmark.
//! - [`econometrics`]: OLS, ADF, DF-GLS, Phillips-Perron, residual-based
//!   cointegration, Johansen trace.
//! - [`pipeline`]: CSV ingestion, config-driven runs, text and
//!   machine-readable reports, curve CSVs and SVG charts.
//!
//! Every capability has a runnable example under `examples/`; start with
//! `break_search` and `full_pipeline`.

pub mod calibrate;
pub mod econometrics;
pub mod error;
mod linalg;
pub mod model;
pub mod pipeline;
pub mod series;

pub use calibrate::{
    fit_cumulative_lsq, fit_generalized, naive_forecast, r_squared, rmsfe, search,
    CalibrationConfig, CalibrationResult, FittedModel, ForecastEvaluation, Metric,
};
pub use error::{Error, Result};
pub use model::{
    balance_sum, counterfactual_gap, GapSeries, GeneralizedModel, PiecewiseLinearModel,
    ResponseKind, Segment,
};
pub use series::{Frequency, GrowthRateSeries, Period, Series};
