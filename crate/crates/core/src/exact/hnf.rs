//! Row-style Hermite normal form and saturation of integer row spans.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::{from_int, Int, Rational};
use crate::error::{Error, Result};

type Rows = Vec<Vec<Int>>;

/// Hermite form with transform. Returns `(h, u)` where `u * a = h`, `u` unimodular,
/// and the zero rows of `h` sit at the bottom.
pub fn hnf_with_transform(a: &Rows, ncols: usize) -> (Rows, Rows) {
    let m = a.len();
    let mut h = a.clone();
    let mut u: Rows = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        // fold every lower row into row r with extended gcd steps
        for i in r + 1..m {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let a0 = h[r][c].clone();
            let b0 = h[i][c].clone();
            let eg = a0.extended_gcd(&b0);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let p = &a0 / &g;
            let q = &b0 / &g;
            combine(&mut h, r, i, &x, &y, &p, &q);
            combine(&mut u, r, i, &x, &y, &p, &q);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate(&mut h[r]);
            negate(&mut u[r]);
        }
        let piv = h[r][c].clone();
        for i in 0..r {
            let f = h[i][c].div_floor(&piv);
            if !f.is_zero() {
                axpy(&mut h, i, r, &f);
                axpy(&mut u, i, r, &f);
            }
        }
        r += 1;
    }
    (h, u)
}

// rows (r, i) <- (x*row_r + y*row_i, -q*row_r + p*row_i); determinant x*p + y*q = 1
fn combine(mat: &mut Rows, r: usize, i: usize, x: &Int, y: &Int, p: &Int, q: &Int) {
    let n = mat[r].len();
    for j in 0..n {
        let a = mat[r][j].clone();
        let b = mat[i][j].clone();
        mat[r][j] = x * &a + y * &b;
        mat[i][j] = p * &b - q * &a;
    }
}

fn negate(row: &mut [Int]) {
    for v in row.iter_mut() {
        *v = -v.clone();
    }
}

// row_i -= f * row_r
fn axpy(mat: &mut Rows, i: usize, r: usize, f: &Int) {
    let n = mat[r].len();
    for j in 0..n {
        let t = f * &mat[r][j];
        mat[i][j] -= t;
    }
}

pub fn to_int_rows(a: &QMatrix) -> Result<Rows> {
    if !a.is_integral() {
        return Err(Error::Other("matrix is not integral".into()));
    }
    Ok(a.rows_iter()
        .map(|r| r.iter().map(|x| x.numer().clone()).collect())
        .collect())
}

fn from_int_rows(rows: &[Vec<Int>], ncols: usize) -> QMatrix {
    if rows.is_empty() {
        return QMatrix::zeros(0, ncols);
    }
    QMatrix::from_ints(rows)
}

/// Hermite normal form of an integral matrix, zero rows dropped.
pub fn hnf(a: &QMatrix) -> Result<QMatrix> {
    let rows = to_int_rows(a)?;
    let (h, _) = hnf_with_transform(&rows, a.ncols());
    let nz: Rows = h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    Ok(from_int_rows(&nz, a.ncols()))
}

/// Integer basis (rows) of `{y in Z^m : y * a = 0}` for integral `a` (m x n).
pub fn integer_left_kernel(a: &QMatrix) -> Result<QMatrix> {
    let rows = to_int_rows(a)?;
    let (h, u) = hnf_with_transform(&rows, a.ncols());
    let ker: Rows = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect();
    let k = from_int_rows(&ker, a.nrows());
    if k.nrows() == 0 {
        return Ok(k);
    }
    hnf(&k)
}

/// Clears denominators row by row and divides each row by its content.
pub fn primitive_rows(a: &QMatrix) -> QMatrix {
    let rows = a
        .rows_iter()
        .map(|r| {
            let c = super::rational::content(r);
            if c.is_zero() {
                r.to_vec()
            } else {
                r.iter().map(|x| x / &c).collect()
            }
        })
        .collect();
    QMatrix::from_rows(rows).unwrap_or_else(|_| QMatrix::zeros(0, a.ncols()))
}

/// Hermite basis of `span_Q(rows) ∩ Z^n`.
pub fn saturate(a: &QMatrix) -> Result<QMatrix> {
    let n = a.ncols();
    let prim = primitive_rows(a);
    if prim.is_zero() || prim.nrows() == 0 {
        return Err(Error::ZeroRank);
    }
    // K: integer vectors orthogonal (coordinatewise) to the span
    let k = integer_left_kernel(&prim.transpose())?;
    if k.nrows() == 0 {
        return Ok(QMatrix::identity(n));
    }
    let s = integer_left_kernel(&k.transpose())?;
    if s.nrows() == 0 {
        return Err(Error::ZeroRank);
    }
    hnf(&s)
}

pub fn is_saturated(a: &QMatrix) -> Result<bool> {
    let h = hnf(a)?;
    let s = saturate(a)?;
    Ok(h == s)
}

/// Index of the lattice spanned by the independent integral rows of `a` inside its saturation.
pub fn saturation_index(a: &QMatrix) -> Result<Int> {
    let s = saturate(a)?;
    if s.nrows() != a.nrows() {
        return Err(Error::Degenerate);
    }
    // a = c * s with c integral; index = |det c|
    let mut c = QMatrix::zeros(a.nrows(), s.nrows());
    for i in 0..a.nrows() {
        let x = s.solve_left(a.row(i)).ok_or(Error::Degenerate)?;
        for (j, v) in x.into_iter().enumerate() {
            c[(i, j)] = v;
        }
    }
    Ok(c.det().abs().to_integer())
}

/// Basis rows completing the saturated integral rows of `b` to a basis of Z^n.
pub fn complete_to_basis(b: &QMatrix) -> Result<QMatrix> {
    let n = b.ncols();
    let k = b.nrows();
    let rows = to_int_rows(&b.transpose())?;
    // v * b^T = h with v unimodular (n x n); then b * v^T = h^T
    let (h, v) = hnf_with_transform(&rows, k);
    let top = QMatrix::from_ints(&h[..k]);
    if top.det().abs() != Rational::one() {
        return Err(Error::Other("rows are not saturated".into()));
    }
    let vinv = QMatrix::from_ints(&v).inverse()?;
    // complement = last n-k rows of (v^{-1})^T
    let vt = vinv.transpose();
    Ok(vt.select_rows(&(k..n).collect::<Vec<_>>()))
}

/// Diagonal of the Smith normal form (non-zero invariant factors only).
pub fn smith_diagonal(a: &QMatrix) -> Result<Vec<Int>> {
    let mut rows = to_int_rows(a)?;
    let mut ncols = a.ncols();
    // alternate row and column Hermite reductions until diagonal
    loop {
        let (h, _) = hnf_with_transform(&rows, ncols);
        let h: Rows = h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        if h.is_empty() {
            return Ok(vec![]);
        }
        let diag = is_diagonal(&h);
        if diag {
            let mut d: Vec<Int> = (0..h.len()).map(|i| h[i][i].abs()).collect();
            // enforce divisibility chain
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    let g = d[i].gcd(&d[j]);
                    let l = d[i].lcm(&d[j]);
                    d[i] = g;
                    d[j] = l;
                }
            }
            return Ok(d);
        }
        let t: Rows = (0..ncols)
            .map(|j| h.iter().map(|r| r[j].clone()).collect())
            .collect();
        ncols = h.len();
        rows = t;
    }
}

fn is_diagonal(h: &Rows) -> bool {
    h.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

pub fn int_row(v: &[Rational]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| x.denom().is_one().then(|| x.numer().clone()))
        .collect()
}

pub fn rat_row(v: &[Int]) -> Vec<Rational> {
    v.iter().cloned().map(from_int).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rint;

    #[test]
    fn hnf_small_example() {
        let a = QMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        assert_eq!(hnf(&a).unwrap(), QMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn saturation_of_doubled_vector() {
        let a = QMatrix::from_i64(&[&[2, 4, 6]]);
        assert_eq!(saturate(&a).unwrap(), QMatrix::from_i64(&[&[1, 2, 3]]));
        let b = QMatrix::from_i64(&[&[1, 1, 0], &[1, -1, 0]]);
        assert_eq!(saturate(&b).unwrap(), QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(saturation_index(&b).unwrap(), Int::from(2));
    }

    #[test]
    fn kernel_is_kernel() {
        let a = QMatrix::from_i64(&[&[1, 2], &[2, 4], &[3, 1]]);
        let k = integer_left_kernel(&a).unwrap();
        assert_eq!(k.nrows(), 1);
        assert!(k.mul(&a).is_zero());
    }

    #[test]
    fn completion_is_unimodular() {
        let b = QMatrix::from_i64(&[&[1, 2, 3], &[0, 1, 4]]);
        let c = complete_to_basis(&b).unwrap();
        assert_eq!(b.vstack(&c).det().abs(), rint(1));
    }

    #[test]
    fn smith_of_diag() {
        let a = QMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_diagonal(&a).unwrap(), vec![Int::from(1), Int::from(6)]);
        let b = QMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(smith_diagonal(&b).unwrap(), vec![Int::from(2), Int::from(4)]);
    }
}
