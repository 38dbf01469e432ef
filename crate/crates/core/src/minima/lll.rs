//! Light LLL reduction of a Gram matrix, float guided with an exact unimodular transform.

use crate::exact::QMatrix;

/// Returns `u` (rows = new basis in old coordinates), unimodular, such that
/// `u * gram * u^T` is LLL-reduced up to floating error.
pub fn lll_transform(gram: &QMatrix) -> Vec<Vec<i64>> {
    let n = gram.nrows();
    let g0 = gram.to_f64_rows();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let identity = u.clone();
    let delta = 0.99;
    let mut k = 1;
    let mut iters = 0;
    while k < n {
        iters += 1;
        if iters > 10_000 {
            break;
        }
        for j in (0..k).rev() {
            let (mu, _) = gso(&transformed(&g0, &u));
            if mu[k][j].abs() <= 0.5 + 1e-9 {
                continue;
            }
            let r = mu[k][j].round();
            let r = r as i64;
            for c in 0..n {
                let Some(v) = u[j][c].checked_mul(r).and_then(|t| u[k][c].checked_sub(t)) else {
                    return identity;
                };
                u[k][c] = v;
            }
        }
        let (mu, b) = gso(&transformed(&g0, &u));
        if b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    u
}

fn transformed(g: &[Vec<f64>], u: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut t = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                if u[i][a] == 0 {
                    continue;
                }
                for b in 0..n {
                    if u[j][b] != 0 {
                        s += u[i][a] as f64 * g[a][b] * u[j][b] as f64;
                    }
                }
            }
            t[i][j] = s;
        }
    }
    t
}

/// Gram–Schmidt coefficients and squared lengths from a Gram matrix.
fn gso(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j];
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * b[l];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i];
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * b[l];
        }
        b[i] = s;
    }
    (mu, b)
}

pub fn to_qmatrix(u: &[Vec<i64>]) -> QMatrix {
    let n = u.len();
    QMatrix::from_fn(n, n, |i, j| crate::exact::rint(u[i][j]))
}
