//! Classical least squares, the shared regression core of the test
//! battery.

use crate::error::{Error, Result};
use crate::linalg;

/// Ordinary least-squares estimates with classical standard errors.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Unbiased residual variance SSR / (n - k).
    pub residual_variance: f64,
}

/// Fits `y = X b + e`. Rows of `x` are observations. Requires more rows
/// than columns and a full-column-rank design; a rank-deficient design is
/// rejected with the offending column indices.
pub fn ols(y: &[f64], x: &[Vec<f64>]) -> Result<OlsFit> {
    let n = y.len();
    if x.len() != n {
        return Err(Error::SpanMismatch {
            detail: format!("{} rows vs {} responses", x.len(), n),
        });
    }
    let k = x.first().map_or(0, |r| r.len());
    if k == 0 || n <= k {
        return Err(Error::InsufficientData {
            what: "least squares",
            need: k + 1,
            got: n,
        });
    }
    debug_assert!(x.iter().all(|r| r.len() == k));

    // column equilibration keeps the normal equations well conditioned
    let mut scale = vec![0.0f64; k];
    for row in x {
        for (j, v) in row.iter().enumerate() {
            scale[j] += v * v;
        }
    }
    for s in scale.iter_mut() {
        *s = if *s > 0.0 { 1.0 / s.sqrt() } else { 1.0 };
    }

    let mut ata = vec![0.0; k * k];
    let mut atb = vec![0.0; k];
    for (row, &yi) in x.iter().zip(y) {
        for j in 0..k {
            let xj = row[j] * scale[j];
            atb[j] += xj * yi;
            for m in j..k {
                ata[j * k + m] += xj * row[m] * scale[m];
            }
        }
    }
    for j in 0..k {
        for m in 0..j {
            ata[j * k + m] = ata[m * k + j];
        }
    }

    let inv = linalg::invert(&ata, k).map_err(|columns| Error::RankDeficient { columns })?;
    let mut beta_scaled = vec![0.0; k];
    for j in 0..k {
        for m in 0..k {
            beta_scaled[j] += inv[j * k + m] * atb[m];
        }
    }
    let coefficients: Vec<f64> = beta_scaled.iter().zip(&scale).map(|(b, s)| b * s).collect();

    let mut residuals = Vec::with_capacity(n);
    let mut ssr = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let fit: f64 = row.iter().zip(&coefficients).map(|(a, b)| a * b).sum();
        let e = yi - fit;
        ssr += e * e;
        residuals.push(e);
    }
    let residual_variance = ssr / (n - k) as f64;
    let std_errors = (0..k)
        .map(|j| scale[j] * (residual_variance * inv[j * k + j]).max(0.0).sqrt())
        .collect();

    Ok(OlsFit {
        coefficients,
        residuals,
        std_errors,
        residual_variance,
    })
}
