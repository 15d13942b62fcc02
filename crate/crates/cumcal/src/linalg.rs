//! Small dense linear-algebra helpers.
//!
//! Every system in this crate is tiny (at most a handful of columns), so
//! the routines here favour clarity over asymptotics: normal equations,
//! cyclic Jacobi for symmetric eigenproblems, Gauss-Jordan inversion.

/// Relative eigenvalue cutoff below which a direction is treated as null.
pub const RANK_EPS: f64 = 1e-10;

/// Eigendecomposition of a symmetric `n x n` matrix (row-major) by cyclic
/// Jacobi rotations. Returns eigenvalues and eigenvectors (column `j` of
/// the returned matrix is the eigenvector for eigenvalue `j`), unsorted.
pub fn jacobi_eigen_sym(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m[i * n + i]).collect();
    (eig, v)
}

/// Least-squares solution of `X b = y` (rows of `x` are observations) via
/// column-equilibrated normal equations and an eigenvalue pseudo-inverse.
///
/// Directions whose eigenvalue falls below `RANK_EPS` times the largest are
/// dropped, which yields the minimal-norm solution (in the column-scaled
/// basis) for rank-deficient systems. Returns `(coefficients, rank)`.
pub fn lstsq_min_norm(x: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, usize) {
    let m = x.len();
    debug_assert_eq!(m, y.len());
    let n = if m == 0 { 0 } else { x[0].len() };
    if n == 0 {
        return (Vec::new(), 0);
    }
    let mut scale = vec![0.0; n];
    for row in x {
        for (j, v) in row.iter().enumerate() {
            scale[j] += v * v;
        }
    }
    for s in scale.iter_mut() {
        *s = if *s > 0.0 { 1.0 / s.sqrt() } else { 1.0 };
    }
    let mut ata = vec![0.0; n * n];
    let mut atb = vec![0.0; n];
    for (row, &yi) in x.iter().zip(y) {
        for j in 0..n {
            let xj = row[j] * scale[j];
            atb[j] += xj * yi;
            for k in j..n {
                ata[j * n + k] += xj * row[k] * scale[k];
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            ata[j * n + k] = ata[k * n + j];
        }
    }
    let (eig, vecs) = jacobi_eigen_sym(&ata, n);
    let lmax = eig.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = lmax * RANK_EPS;
    let mut beta_scaled = vec![0.0; n];
    let mut rank = 0;
    for i in 0..n {
        if eig[i] > cutoff && eig[i] > 0.0 {
            rank += 1;
            let mut proj = 0.0;
            for j in 0..n {
                proj += vecs[j * n + i] * atb[j];
            }
            let w = proj / eig[i];
            for j in 0..n {
                beta_scaled[j] += w * vecs[j * n + i];
            }
        }
    }
    let beta = beta_scaled.iter().zip(&scale).map(|(b, s)| b * s).collect();
    (beta, rank)
}

/// Gauss-Jordan inverse of a square matrix (row-major) with partial
/// pivoting. `Err` carries the column indices whose pivots collapsed.
pub fn invert(a: &[f64], n: usize) -> Result<Vec<f64>, Vec<usize>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
    let mut bad = Vec::new();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col].abs() <= 1e-13 * scale {
            bad.push(col);
            continue;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
        }
        let d = m[col * n + col];
        for k in 0..n {
            m[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                m[r * n + k] -= f * m[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    if bad.is_empty() {
        Ok(inv)
    } else {
        Err(bad)
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix; `None` when the matrix is singular within tolerance.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    let scale = (0..n)
        .fold(0.0f64, |acc, i| acc.max(a[i * n + i].abs()))
        .max(1e-300);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 1e-12 * scale {
                    return None;
                }
                l[i * n + j] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves `L z = b` for lower-triangular `L`.
pub fn forward_substitute(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * z[k];
        }
        z[i] = sum / l[i * n + i];
    }
    z
}

/// `C = A * B` for row-major square matrices of order `n`.
pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}
