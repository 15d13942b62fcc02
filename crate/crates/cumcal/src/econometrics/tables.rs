//! Embedded critical-value tables.
//!
//! Dickey-Fuller t-ratios use the MacKinnon (2010) response surfaces
//! evaluated at the effective regression sample size. The z(rho)
//! normalized-bias statistic uses the classic Dickey-Fuller finite-sample
//! table interpolated linearly in 1/T, the DF-GLS detrended case the
//! Elliott-Rothenberg-Stock (1996) table, and the Johansen trace test the
//! MacKinnon-Haug-Michelis (1999) asymptotic values.

use super::{CriticalValues, TrendSpec};

// response surface b0 + b1/T + b2/T^2 + b3/T^3, rows = 1%, 5%, 10%
const TAU_NONE: [[f64; 4]; 3] = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const TAU_CONST: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const TAU_TREND: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

/// Dickey-Fuller t-ratio critical values for a regression with `nobs`
/// observations.
pub fn mackinnon_tau(trend: TrendSpec, nobs: usize) -> CriticalValues {
    let table = match trend {
        TrendSpec::None => &TAU_NONE,
        TrendSpec::Constant => &TAU_CONST,
        TrendSpec::ConstantAndTrend => &TAU_TREND,
    };
    let t = nobs.max(1) as f64;
    let eval = |row: &[f64; 4]| row[0] + row[1] / t + row[2] / (t * t) + row[3] / (t * t * t);
    CriticalValues {
        one_pct: eval(&table[0]),
        five_pct: eval(&table[1]),
        ten_pct: eval(&table[2]),
    }
}

// T(rho - 1) percentiles, rows (T = 25, 50, 100, 250, 500, inf),
// columns (1%, 5%, 10%)
const RHO_T: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, f64::INFINITY];
const RHO_NONE: [[f64; 3]; 6] = [
    [-11.9, -7.3, -5.3],
    [-12.9, -7.7, -5.5],
    [-13.3, -7.9, -5.6],
    [-13.6, -8.0, -5.7],
    [-13.7, -8.0, -5.7],
    [-13.8, -8.1, -5.7],
];
const RHO_CONST: [[f64; 3]; 6] = [
    [-17.2, -12.5, -10.2],
    [-18.9, -13.3, -10.7],
    [-19.8, -13.7, -11.0],
    [-20.3, -14.0, -11.2],
    [-20.5, -14.0, -11.2],
    [-20.7, -14.1, -11.3],
];
const RHO_TREND: [[f64; 3]; 6] = [
    [-22.5, -17.9, -15.6],
    [-25.7, -19.8, -16.8],
    [-27.4, -20.7, -17.5],
    [-28.4, -21.3, -18.0],
    [-28.9, -21.5, -18.1],
    [-29.5, -21.8, -18.3],
];

fn interpolate_inv_t(ts: &[f64], rows: &[[f64; 3]], t: f64) -> CriticalValues {
    // interpolation runs on x = 1/T, which decreases along the table;
    // sizes below the first tabulated T clamp to its row
    let x = 1.0 / t;
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    let from_row = |row: &[f64; 3]| CriticalValues {
        one_pct: row[0],
        five_pct: row[1],
        ten_pct: row[2],
    };
    if x >= inv(ts[0]) {
        return from_row(&rows[0]);
    }
    for i in 0..ts.len() - 1 {
        let (x0, x1) = (inv(ts[i]), inv(ts[i + 1]));
        if x <= x0 && x >= x1 {
            let w = if x0 == x1 { 0.0 } else { (x0 - x) / (x0 - x1) };
            return CriticalValues {
                one_pct: rows[i][0] + w * (rows[i + 1][0] - rows[i][0]),
                five_pct: rows[i][1] + w * (rows[i + 1][1] - rows[i][1]),
                ten_pct: rows[i][2] + w * (rows[i + 1][2] - rows[i][2]),
            };
        }
    }
    from_row(rows.last().unwrap())
}

/// Critical values of the normalized-bias statistic `T(rho - 1)` used by
/// the Phillips-Perron z(rho) output.
pub fn fuller_rho(trend: TrendSpec, nobs: usize) -> CriticalValues {
    let rows = match trend {
        TrendSpec::None => &RHO_NONE,
        TrendSpec::Constant => &RHO_CONST,
        TrendSpec::ConstantAndTrend => &RHO_TREND,
    };
    interpolate_inv_t(&RHO_T, rows, (nobs.max(25)) as f64)
}

// DF-GLS, locally detrended case (c-bar = -13.5), rows
// (T = 50, 100, 200, inf), columns (1%, 5%, 10%)
const DFGLS_TREND_T: [f64; 4] = [50.0, 100.0, 200.0, f64::INFINITY];
const DFGLS_TREND: [[f64; 3]; 4] = [
    [-3.77, -3.19, -2.89],
    [-3.58, -3.03, -2.74],
    [-3.46, -2.93, -2.64],
    [-3.48, -2.89, -2.57],
];

/// DF-GLS critical values. The demeaned (constant) case follows the
/// no-deterministic Dickey-Fuller distribution; the detrended case uses
/// the dedicated finite-sample table.
pub fn dfgls_critical_values(trend: TrendSpec, series_len: usize, nobs: usize) -> CriticalValues {
    match trend {
        TrendSpec::ConstantAndTrend => {
            interpolate_inv_t(&DFGLS_TREND_T, &DFGLS_TREND, series_len.max(50) as f64)
        }
        _ => mackinnon_tau(TrendSpec::None, nobs),
    }
}

// Johansen trace critical values, rows n - r = 1, 2, 3,
// columns (1%, 5%, 10%)
const TRACE_NONE: [[f64; 3]; 3] = [
    [6.94, 4.13, 2.98],
    [16.36, 12.32, 10.47],
    [29.51, 24.28, 21.78],
];
const TRACE_CONST: [[f64; 3]; 3] = [
    [6.63, 3.84, 2.71],
    [19.94, 15.49, 13.43],
    [35.46, 29.80, 27.07],
];
const TRACE_TREND: [[f64; 3]; 3] = [
    [6.63, 3.84, 2.71],
    [23.15, 18.40, 16.13],
    [41.08, 35.01, 32.07],
];

/// Asymptotic trace-test critical values for `n_minus_r` common trends
/// under the given deterministic specification. Supports 1..=3.
pub fn johansen_trace_cv(trend: TrendSpec, n_minus_r: usize) -> CriticalValues {
    debug_assert!((1..=3).contains(&n_minus_r));
    let rows = match trend {
        TrendSpec::None => &TRACE_NONE,
        TrendSpec::Constant => &TRACE_CONST,
        TrendSpec::ConstantAndTrend => &TRACE_TREND,
    };
    let row = rows[n_minus_r - 1];
    CriticalValues {
        one_pct: row[0],
        five_pct: row[1],
        ten_pct: row[2],
    }
}
