//! Fincke–Pohst enumeration of short lattice vectors.
//!
//! The tree walk runs in floating point on an LLL-reduced Gram matrix with
//! every interval widened by a relative margin far above rounding error; each
//! emitted vector is re-checked with exact integer arithmetic, so the output is
//! exact and the search never drops a vector inside the bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::lll::lll_transform;
use crate::exact::rational::{to_f64, Rational};
use crate::exact::{Int, QMatrix};
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: Rational,
}

#[derive(Clone, Debug)]
pub struct ShortVectorList {
    pub bound: Rational,
    pub vectors: Vec<ShortVector>,
    pub complete: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Which {
    PrimitiveUpToSign,
    AllUpToSign,
}

/// A lattice prepared for repeated enumeration.
pub struct Enumerator {
    n: usize,
    u: Vec<Vec<i64>>,
    q: Vec<Vec<f64>>,
    /// original gram scaled by `scale` to integers
    gint: Vec<Vec<i128>>,
    scale: Int,
    scale_f64: f64,
    reduced_diag: Vec<Rational>,
}

struct Walk<'a> {
    e: &'a Enumerator,
    which: Which,
    bound_f: f64,
    bound_num: BigInt,
    bound_den: BigInt,
    cap: usize,
    out: Vec<ShortVector>,
    overflow: bool,
    x: Vec<i64>,
}

impl Enumerator {
    pub fn new(l: &Lattice) -> Self {
        let n = l.rank();
        let g = l.gram();
        let u = lll_transform(g);
        let uq = super::lll::to_qmatrix(&u);
        let red = uq.mul(g).mul(&uq.transpose());
        let q = decomposition(&red);
        let scale = g
            .entries()
            .iter()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let gint = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = (&g[(i, j)] * Rational::from_integer(scale.clone())).to_integer();
                        i128::try_from(v).expect("gram entry fits i128")
                    })
                    .collect()
            })
            .collect();
        let reduced_diag = (0..n).map(|i| red[(i, i)].clone()).collect();
        Enumerator {
            n,
            u,
            q,
            gint,
            scale_f64: to_f64(&Rational::from_integer(scale.clone())),
            scale,
            reduced_diag,
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Rows of the reduced basis in original coordinates.
    pub fn reduced_basis(&self) -> &[Vec<i64>] {
        &self.u
    }

    /// Largest squared norm among the reduced basis vectors (an upper bound for the last minimum).
    pub fn max_reduced_norm(&self) -> Rational {
        self.reduced_diag.iter().max().cloned().unwrap_or_default()
    }

    pub fn min_reduced_norm(&self) -> Rational {
        self.reduced_diag.iter().min().cloned().unwrap_or_default()
    }

    /// Denominator clearing factor of the Gram matrix.
    pub fn scale(&self) -> &Int {
        &self.scale
    }

    pub fn exact_norm(&self, v: &[i64]) -> Rational {
        Rational::new(BigInt::from(self.scaled_form(v, v)), self.scale.clone())
    }

    pub fn exact_inner(&self, v: &[i64], w: &[i64]) -> Rational {
        Rational::new(BigInt::from(self.scaled_form(v, w)), self.scale.clone())
    }

    pub fn inner_f64(&self, v: &[i64], w: &[i64]) -> f64 {
        self.scaled_form(v, w) as f64 / self.scale_f64
    }

    /// `scale * <v, w>` as an integer.
    pub(crate) fn scaled_form(&self, v: &[i64], w: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            let mut t: i128 = 0;
            for j in 0..self.n {
                if w[j] != 0 {
                    t += self.gint[i][j] * w[j] as i128;
                }
            }
            s += v[i] as i128 * t;
        }
        s
    }

    /// All vectors (up to sign) with squared norm at most `bound`, sorted by norm then lexicographically.
    pub fn vectors(&self, bound: &Rational, which: Which, cap: usize) -> ShortVectorList {
        let mut w = Walk {
            e: self,
            which,
            bound_f: to_f64(bound) * (1.0 + 1e-9) + 1e-12,
            bound_num: bound.numer().clone(),
            bound_den: bound.denom().clone(),
            cap,
            out: Vec::new(),
            overflow: false,
            x: vec![0; self.n],
        };
        if self.n > 0 && bound >= &Rational::zero() {
            w.rec(self.n - 1, w.bound_f, true);
        }
        let mut out = w.out;
        out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
        ShortVectorList {
            bound: bound.clone(),
            vectors: out,
            complete: !w.overflow,
        }
    }
}

impl Walk<'_> {
    fn rec(&mut self, i: usize, rem: f64, top_zero: bool) {
        if self.overflow {
            return;
        }
        let e = self.e;
        let n = e.n;
        let mut c = 0.0;
        for j in i + 1..n {
            c -= e.q[i][j] * self.x[j] as f64;
        }
        let t = (rem.max(0.0)) / e.q[i][i];
        let s = t.sqrt() * (1.0 + 1e-9) + 1e-9 * (1.0 + c.abs());
        let mut lo = (c - s).ceil() as i64;
        let hi = (c + s).floor() as i64;
        if top_zero {
            lo = lo.max(0);
        }
        let tol = 1e-9 * self.bound_f + 1e-12;
        for xi in lo..=hi {
            let d = xi as f64 - c;
            let r2 = rem - e.q[i][i] * d * d;
            if r2 < -tol {
                continue;
            }
            self.x[i] = xi;
            if i == 0 {
                if !(top_zero && xi == 0) {
                    self.leaf();
                }
            } else {
                self.rec(i - 1, r2, top_zero && xi == 0);
            }
            if self.overflow {
                break;
            }
        }
        self.x[i] = 0;
    }

    fn leaf(&mut self) {
        let e = self.e;
        if self.which == Which::PrimitiveUpToSign {
            let g = self.x.iter().fold(0i64, |acc, &v| acc.gcd(&v));
            if g != 1 {
                return;
            }
        }
        let n = e.n;
        let mut v = vec![0i64; n];
        for (i, &xi) in self.x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for c in 0..n {
                v[c] += xi * e.u[i][c];
            }
        }
        let form = BigInt::from(e.scaled_form(&v, &v));
        // form / scale <= num / den
        if form * &self.bound_den > &self.bound_num * &e.scale {
            return;
        }
        if v.iter().find(|&&t| t != 0).is_some_and(|&t| t < 0) {
            for t in v.iter_mut() {
                *t = -*t;
            }
        }
        let norm = e.exact_norm(&v);
        self.out.push(ShortVector { coords: v, norm });
        if self.out.len() > self.cap {
            self.overflow = true;
        }
    }
}

/// `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`, computed exactly then rounded.
fn decomposition(g: &QMatrix) -> Vec<Vec<f64>> {
    let n = g.nrows();
    let mut q = g.clone();
    for i in 0..n {
        for j in i + 1..n {
            q[(j, i)] = q[(i, j)].clone();
            let v = &q[(i, j)] / &q[(i, i)];
            q[(i, j)] = v;
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[(k, i)] * &q[(i, l)];
                q[(k, l)] -= v;
            }
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| if j >= i { to_f64(&q[(i, j)]) } else { 0.0 }).collect())
        .collect()
}

pub fn short_vectors(l: &Lattice, bound: &Rational) -> ShortVectorList {
    Enumerator::new(l).vectors(bound, Which::PrimitiveUpToSign, usize::MAX)
}
