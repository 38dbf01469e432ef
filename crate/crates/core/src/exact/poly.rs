//! Univariate polynomials over the rationals, characteristic polynomials and Sturm chains.

use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn constant(a: Rational) -> Self {
        Poly::new(vec![a])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.c.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a.clone()).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                let v = &f * b;
                r[k + j] -= v;
            }
            q[k] = f;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let l = l.clone();
                Poly::new(self.c.iter().map(|a| a / &l).collect())
            }
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Poly::constant(yi.clone());
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let inv = (xi - xj).recip();
                basis = basis.mul(&Poly::new(vec![-xj * &inv, inv]));
            }
            acc = acc.add(&basis);
        }
        acc
    }

    /// Cauchy bound: every real root has absolute value strictly below the result.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().expect("nonzero polynomial").abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Rational roots via the rational root theorem on the integer-cleared polynomial.
    pub fn rational_roots(&self) -> Vec<Rational> {
        use num_integer::Integer;
        let mut p = self.clone();
        let mut roots = Vec::new();
        // strip zero roots
        while p.c.first().is_some_and(|a| a.is_zero()) {
            p.c.remove(0);
            roots.push(Rational::zero());
        }
        if p.degree().unwrap_or(0) == 0 {
            roots.dedup();
            return roots;
        }
        let l = p.c.iter().fold(num_bigint::BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<_> = p.c.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let small = |x: &num_bigint::BigInt| x.bits() <= 40;
        if !small(&a0) || !small(&an) {
            roots.dedup();
            return roots;
        }
        let divisors = |n: &num_bigint::BigInt| {
            let n: u64 = n.try_into().unwrap();
            let mut v = Vec::new();
            let mut k = 1u64;
            while k * k <= n {
                if n % k == 0 {
                    v.push(k);
                    v.push(n / k);
                }
                k += 1;
            }
            v
        };
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for s in [1i64, -1] {
                    let r = Rational::new((s * num as i64).into(), (den as i64).into());
                    if p.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Characteristic polynomial `det(xI - A)` by the division-free Berkowitz recursion.
pub fn char_poly(a: &QMatrix) -> Poly {
    assert!(a.is_square());
    let n = a.nrows();
    if n == 0 {
        return Poly::constant(Rational::one());
    }
    // v holds coefficients highest degree first
    let mut v = vec![Rational::one(), -a[(0, 0)].clone()];
    for r in 1..n {
        // column C = a[0..r][r], row R = a[r][0..r], sub = a[0..r][0..r]
        let mut t = Vec::with_capacity(r + 2);
        t.push(Rational::one());
        t.push(-a[(r, r)].clone());
        let mut col: Vec<Rational> = (0..r).map(|i| a[(i, r)].clone()).collect();
        for _ in 0..r {
            let rc: Rational = (0..r).map(|j| &a[(r, j)] * &col[j]).sum();
            t.push(-rc);
            col = (0..r)
                .map(|i| (0..r).map(|j| &a[(i, j)] * &col[j]).sum())
                .collect();
        }
        // new v = T * v, T lower triangular Toeplitz (r+2) x (r+1)
        let mut nv = vec![Rational::zero(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot += &t[i - j] * vj;
                }
            }
        }
        v = nv;
    }
    v.reverse();
    Poly::new(v)
}

/// Sturm chain of a polynomial.
pub struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        // squarefree part, so that repeated roots at the endpoints are counted correctly
        let g = p.gcd(&p.derivative());
        let p = if g.degree().unwrap_or(0) > 0 { p.divrem(&g).0 } else { p.clone() };
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let k = chain.len();
            let (_, r) = chain[k - 2].divrem(&chain[k - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        Sturm { chain }
    }

    fn sign_changes(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Number of distinct real roots in the half open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.sign_changes(a) - self.sign_changes(b)
    }
}
