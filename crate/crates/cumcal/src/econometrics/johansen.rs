//! Johansen trace test for cointegration rank (two or three variables).

use super::tables;
use super::{CriticalValues, SignificanceLevel, TrendSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::series::Series;

/// Trace statistics per rank hypothesis and the rank selected at the 5%
/// level: the smallest `r` whose trace statistic fails to exceed its
/// critical value, or `n` when every hypothesis is rejected.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub trace_statistics: Vec<f64>,
    pub critical_values: Vec<CriticalValues>,
    pub selected_rank: usize,
    pub maxlag: usize,
    pub trend: TrendSpec,
}

impl RankReport {
    /// Rank selected at an arbitrary tabulated level.
    pub fn rank_at(&self, level: SignificanceLevel) -> usize {
        for (r, (stat, cv)) in self
            .trace_statistics
            .iter()
            .zip(&self.critical_values)
            .enumerate()
        {
            if *stat <= cv.at(level) {
                return r;
            }
        }
        self.trace_statistics.len()
    }
}

/// Runs the Johansen trace test on the common span of `series_list`.
///
/// `maxlag` is the number of lagged-difference terms in the VECM
/// regressions. Deterministic terms follow `trend` and are partialled out
/// of both the differenced and the lagged-level data. Levels enter in
/// their dynamic form; cumulative curves are integrated once more and are
/// not valid inputs here.
pub fn johansen_trace(
    series_list: &[&Series],
    maxlag: usize,
    trend: TrendSpec,
) -> Result<RankReport> {
    let n = series_list.len();
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument {
            detail: format!("Johansen trace test supports 2 or 3 series, got {n}"),
        });
    }
    let aligned = Series::align_many(series_list)?;
    let t_total = aligned[0].len();
    if t_total < 10 * n {
        return Err(Error::InsufficientData {
            what: "Johansen trace test",
            need: 10 * n,
            got: t_total,
        });
    }

    // y[t][i], dy[t][i] = y[t+1][i] - y[t][i]
    let y: Vec<Vec<f64>> = (0..t_total)
        .map(|t| aligned.iter().map(|s| s.values()[t]).collect())
        .collect();
    let dy: Vec<Vec<f64>> = (0..t_total - 1)
        .map(|t| (0..n).map(|i| y[t + 1][i] - y[t][i]).collect())
        .collect();

    let p = maxlag;
    if t_total < p + 2 + n {
        return Err(Error::InsufficientData {
            what: "Johansen trace test",
            need: p + 2 + n,
            got: t_total,
        });
    }
    let t_eff = t_total - 1 - p;

    let n_det = match trend {
        TrendSpec::None => 0,
        TrendSpec::Constant => 1,
        TrendSpec::ConstantAndTrend => 2,
    };
    let n_z = n * p + n_det;

    // residuals of dy and lagged y on the short-run regressors
    let mut r0 = vec![vec![0.0; n]; t_eff];
    let mut r1 = vec![vec![0.0; n]; t_eff];
    if n_z == 0 {
        for (row, i) in (p..t_total - 1).enumerate() {
            for v in 0..n {
                r0[row][v] = dy[i][v];
                r1[row][v] = y[i][v];
            }
        }
    } else {
        let mut z = Vec::with_capacity(t_eff);
        for i in p..t_total - 1 {
            let mut row = Vec::with_capacity(n_z);
            for k in 1..=p {
                row.extend_from_slice(&dy[i - k]);
            }
            if n_det >= 1 {
                row.push(1.0);
            }
            if n_det == 2 {
                row.push((i + 1) as f64);
            }
            z.push(row);
        }
        for v in 0..n {
            let dy_col: Vec<f64> = (p..t_total - 1).map(|i| dy[i][v]).collect();
            let y_col: Vec<f64> = (p..t_total - 1).map(|i| y[i][v]).collect();
            let res0 = super::ols::ols(&dy_col, &z).map_err(collinear)?;
            let res1 = super::ols::ols(&y_col, &z).map_err(collinear)?;
            for t in 0..t_eff {
                r0[t][v] = res0.residuals[t];
                r1[t][v] = res1.residuals[t];
            }
        }
    }

    // cross-moment matrices
    let tf = t_eff as f64;
    let mut s00 = vec![0.0; n * n];
    let mut s11 = vec![0.0; n * n];
    let mut s01 = vec![0.0; n * n];
    for t in 0..t_eff {
        for i in 0..n {
            for j in 0..n {
                s00[i * n + j] += r0[t][i] * r0[t][j] / tf;
                s11[i * n + j] += r1[t][i] * r1[t][j] / tf;
                s01[i * n + j] += r0[t][i] * r1[t][j] / tf;
            }
        }
    }

    let l = linalg::cholesky(&s11, n).ok_or_else(|| Error::Collinear {
        detail: "level series are linearly dependent".into(),
    })?;
    let s00_inv = linalg::invert(&s00, n).map_err(|_| Error::Collinear {
        detail: "differenced series are linearly dependent".into(),
    })?;
    // M = S10 S00^-1 S01 (symmetric); B = L^-1 M L^-T shares its spectrum
    // with the generalized problem M v = lambda S11 v
    let mut s10 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s10[i * n + j] = s01[j * n + i];
        }
    }
    let m = linalg::matmul(&linalg::matmul(&s10, &s00_inv, n), &s01, n);
    let mut w = vec![0.0; n * n]; // L^-1 M, column by column
    for col in 0..n {
        let rhs: Vec<f64> = (0..n).map(|r| m[r * n + col]).collect();
        let sol = linalg::forward_substitute(&l, n, &rhs);
        for r in 0..n {
            w[r * n + col] = sol[r];
        }
    }
    let mut b = vec![0.0; n * n]; // L^-1 W^T = L^-1 M L^-T up to symmetry
    for col in 0..n {
        let rhs: Vec<f64> = (0..n).map(|r| w[col * n + r]).collect();
        let sol = linalg::forward_substitute(&l, n, &rhs);
        for r in 0..n {
            b[r * n + col] = sol[r];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (b[i * n + j] + b[j * n + i]);
            b[i * n + j] = avg;
            b[j * n + i] = avg;
        }
    }

    let (mut eig, _) = linalg::jacobi_eigen_sym(&b, n);
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for v in eig.iter_mut() {
        *v = v.clamp(0.0, 1.0 - 1e-12);
    }

    let mut trace_statistics = Vec::with_capacity(n);
    let mut critical_values = Vec::with_capacity(n);
    for r in 0..n {
        let stat = -tf * eig[r..].iter().map(|l| (1.0 - l).ln()).sum::<f64>();
        trace_statistics.push(stat);
        critical_values.push(tables::johansen_trace_cv(trend, n - r));
    }
    let selected_rank = trace_statistics
        .iter()
        .zip(&critical_values)
        .position(|(stat, cv)| *stat <= cv.five_pct)
        .unwrap_or(n);

    Ok(RankReport {
        trace_statistics,
        critical_values,
        selected_rank,
        maxlag,
        trend,
    })
}

fn collinear(e: Error) -> Error {
    match e {
        Error::RankDeficient { .. } => Error::Collinear {
            detail: "short-run regressors are linearly dependent".into(),
        },
        other => other,
    }
}
