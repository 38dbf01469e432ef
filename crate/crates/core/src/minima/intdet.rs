//! Small integer determinants: Bareiss in i128 with a BigInt fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Bareiss on a flat n x n buffer, destroyed in the process. `None` on overflow.
pub fn det_i128(m: &mut [i128], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let mik = m[i * n + k];
            for j in k + 1..n {
                let a = m[i * n + j].checked_mul(pivot)?;
                let b = mik.checked_mul(m[k * n + j])?;
                m[i * n + j] = a.checked_sub(b)? / prev;
            }
        }
        prev = pivot;
    }
    if n == 0 {
        return Some(1);
    }
    Some(sign * m[n * n - 1])
}

fn bareiss_big(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let mut neg = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !m[i * n + k].is_zero()) {
                Some(p) => {
                    for c in 0..n {
                        m.swap(k * n + c, p * n + c);
                    }
                    neg = !neg;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    let d = m[n * n - 1].clone();
    if neg {
        -d
    } else {
        d
    }
}

/// Exact determinant of a flat n x n matrix.
pub fn det(m: &[i128], n: usize) -> BigInt {
    let mut buf = m.to_vec();
    match det_i128(&mut buf, n) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m.iter().map(|&x| BigInt::from(x)).collect(), n),
    }
}

fn minor(rows: &[&[i64]], cols: &[usize], buf: &mut Vec<i128>) -> BigInt {
    let k = rows.len();
    buf.clear();
    for r in rows {
        buf.extend(cols.iter().map(|&c| r[c] as i128));
    }
    match det_i128(buf, k) {
        Some(d) => BigInt::from(d),
        None => {
            let big: Vec<BigInt> = rows
                .iter()
                .flat_map(|r| cols.iter().map(|&c| BigInt::from(r[c])))
                .collect();
            bareiss_big(big, k)
        }
    }
}

fn next_subset(cols: &mut [usize], n: usize) -> bool {
    let k = cols.len();
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if cols[i] < n - k + i {
            break;
        }
    }
    cols[i] += 1;
    for j in i + 1..k {
        cols[j] = cols[j - 1] + 1;
    }
    true
}

/// gcd of the maximal minors of a k x n integer matrix (k <= n): the index of its row span in the saturation.
pub fn maximal_minor_gcd(rows: &[&[i64]]) -> BigInt {
    let n = rows[0].len();
    let mut g = BigInt::zero();
    let mut cols: Vec<usize> = (0..rows.len()).collect();
    let mut buf = Vec::new();
    loop {
        let d = minor(rows, &cols, &mut buf);
        g = g.gcd(&d);
        if g.is_one() || !next_subset(&mut cols, n) {
            return g.abs();
        }
    }
}

/// Like [`maximal_minor_gcd`] but gives up with `None` as soon as the gcd squared drops below `need`.
/// On success also returns the primitive sign-normalized Plücker vector.
pub fn minor_gcd_at_least(rows: &[&[i64]], need: f64) -> Option<(BigInt, Vec<BigInt>)> {
    let n = rows[0].len();
    let mut buf = Vec::new();
    // a non-zero minor bounds the gcd at once
    let mut g = minor(rows, &float_pivots(rows), &mut buf).abs();
    if g.is_zero() {
        g = minor(rows, &rref_key(rows).1, &mut buf).abs();
    }
    let gf = g.to_f64().unwrap_or(f64::INFINITY);
    if gf * gf < need {
        return None;
    }
    let mut cols: Vec<usize> = (0..rows.len()).collect();
    let mut minors = Vec::new();
    loop {
        let d = minor(rows, &cols, &mut buf);
        if !d.is_zero() {
            g = g.gcd(&d);
            let gf = g.to_f64().unwrap_or(f64::INFINITY);
            if gf * gf < need {
                return None;
            }
        }
        minors.push(d);
        if !next_subset(&mut cols, n) {
            break;
        }
    }
    let lead_neg = minors.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let s = if lead_neg { -g.clone() } else { g.clone() };
    let key = minors.into_iter().map(|x| x / &s).collect();
    Some((g, key))
}

/// Columns of a (numerically) non-singular maximal minor, by partial pivoting in floating point.
fn float_pivots(rows: &[&[i64]]) -> Vec<usize> {
    let k = rows.len();
    let n = rows[0].len();
    let mut m: Vec<f64> = rows.iter().flat_map(|r| r.iter().map(|&x| x as f64)).collect();
    let mut used = vec![false; n];
    let mut cols = Vec::with_capacity(k);
    for i in 0..k {
        let Some(c) = (0..n)
            .filter(|&c| !used[c])
            .max_by(|&a, &b| m[i * n + a].abs().total_cmp(&m[i * n + b].abs()))
        else {
            break;
        };
        used[c] = true;
        cols.push(c);
        let p = m[i * n + c];
        if p == 0.0 {
            continue;
        }
        for r in i + 1..k {
            let f = m[r * n + c] / p;
            if f != 0.0 {
                for j in 0..n {
                    m[r * n + j] -= f * m[i * n + j];
                }
            }
        }
    }
    cols.sort_unstable();
    cols
}

fn rref_key_i128(rows: &[&[i64]]) -> Option<(Vec<i128>, Vec<usize>)> {
    let k = rows.len();
    let n = rows[0].len();
    let mut m: Vec<i128> = rows.iter().flat_map(|r| r.iter().map(|&x| x as i128)).collect();
    let mut cur = 0;
    let mut pivots = Vec::with_capacity(k);
    for c in 0..n {
        if cur == k {
            break;
        }
        let Some(p) = (cur..k).find(|&i| m[i * n + c] != 0) else {
            continue;
        };
        pivots.push(c);
        for j in 0..n {
            m.swap(cur * n + j, p * n + j);
        }
        let piv = m[cur * n + c];
        for i in 0..k {
            let f = m[i * n + c];
            if i == cur || f == 0 {
                continue;
            }
            let mut g = 0i128;
            for j in 0..n {
                let v = m[i * n + j].checked_mul(piv)?.checked_sub(f.checked_mul(m[cur * n + j])?)?;
                m[i * n + j] = v;
                g = g.gcd(&v);
            }
            if g > 1 {
                for j in 0..n {
                    m[i * n + j] /= g;
                }
            }
        }
        cur += 1;
    }
    for i in 0..k {
        let row = &mut m[i * n..(i + 1) * n];
        let g = row.iter().fold(0i128, |a, &b| a.gcd(&b));
        let neg = row.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
        let s = if neg { -g } else { g };
        if s != 0 {
            for x in row.iter_mut() {
                *x /= s;
            }
        }
    }
    Some((m, pivots))
}

/// Canonical key of the rational row span (reduced echelon rows scaled to primitive
/// integers) and the pivot columns. Dependent rows leave zero rows in the key.
pub fn rref_key(rows: &[&[i64]]) -> (Vec<BigInt>, Vec<usize>) {
    if let Some((m, p)) = rref_key_i128(rows) {
        return (m.into_iter().map(BigInt::from).collect(), p);
    }
    let q = crate::exact::QMatrix::from_fn(rows.len(), rows[0].len(), |i, j| crate::exact::rint(rows[i][j]));
    let (r, p) = q.rref();
    let r = crate::exact::hnf::primitive_rows(&r);
    (r.entries().iter().map(|x| x.to_integer()).collect(), p)
}

pub fn is_independent(rows: &[&[i64]]) -> bool {
    match rref_key_i128(rows) {
        Some((_, p)) => p.len() == rows.len(),
        None => rref_key(rows).1.len() == rows.len(),
    }
}
