//! Numbers of the form `log(q) / (2d)` with `q` a positive rational, kept in a
//! canonical form so that equality is structural and order is decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{exact_root, fmt_rational, ln_f64, pow_rational, rint, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LogRational {
    q: Rational,
    d: u64,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = exact_root(q.numer(), k)?;
    let d = exact_root(q.denom(), k)?;
    Some(Rational::new(n, d))
}

fn pow_signed(q: &Rational, e: &BigInt) -> Rational {
    let mag = e.abs().to_u64().expect("exponent fits u64");
    let p = pow_rational(q, mag);
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

impl LogRational {
    /// `log(q) / (2d)`.
    pub fn new(q: Rational, d: u64) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::NonPositiveLog);
        }
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(q, d))
    }

    fn canonical(mut q: Rational, mut d: u64) -> Self {
        if q.is_one() {
            return LogRational {
                q,
                d: 1,
            };
        }
        for p in prime_factors(d) {
            while d % p == 0 {
                match rational_root(&q, p as u32) {
                    Some(r) => {
                        q = r;
                        d /= p;
                    }
                    None => break,
                }
            }
        }
        LogRational { q, d }
    }

    pub fn zero() -> Self {
        LogRational {
            q: Rational::one(),
            d: 1,
        }
    }

    /// `½ log q`.
    pub fn half_log(q: &Rational) -> Result<Self> {
        Self::new(q.clone(), 1)
    }

    /// `log q`.
    pub fn log(q: &Rational) -> Result<Self> {
        Self::new(q * q, 1)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_one()
    }

    pub fn signum(&self) -> Ordering {
        self.q.cmp(&Rational::one())
    }

    pub fn to_f64(&self) -> f64 {
        ln_f64(&self.q) / (2.0 * self.d as f64)
    }

    /// Multiply by a rational factor.
    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let num = r.numer().clone();
        let den = r.denom().to_u64().expect("scale denominator fits u64");
        let q = pow_signed(&self.q, &num);
        Self::canonical(q, self.d.checked_mul(den).expect("log denominator overflow"))
    }

    pub fn div_int(&self, n: u64) -> Self {
        self.scale(&Rational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.scale(&rint(n))
    }

    /// Both operands brought to the common denominator `lcm(d1, d2)`.
    fn common(&self, other: &Self) -> (Rational, Rational, u64) {
        let l = self.d.lcm(&other.d);
        let a = pow_rational(&self.q, l / self.d);
        let b = pow_rational(&other.q, l / other.d);
        (a, b, l)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a LogRational>) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| &acc + x)
    }

    /// Rendering as `c*log(m)`.
    pub fn exact_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // value = log(q)/(2d); render with argument > 1
        let (sign, arg) = if self.q > Rational::one() {
            ("", self.q.clone())
        } else {
            ("-", self.q.recip())
        };
        let (coef, arg) = match super::rational::exact_sqrt(&arg) {
            Some(r) => (self.d, r),
            None => (2 * self.d, arg),
        };
        if coef == 1 {
            format!("{sign}log({})", fmt_rational(&arg))
        } else {
            format!("{sign}1/{coef}*log({})", fmt_rational(&arg))
        }
    }
}

impl Default for LogRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &LogRational {
    type Output = LogRational;
    fn add(self, other: &LogRational) -> LogRational {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, l) = self.common(other);
        LogRational::canonical(a * b, l)
    }
}

impl Add for LogRational {
    type Output = LogRational;
    fn add(self, other: LogRational) -> LogRational {
        &self + &other
    }
}

impl Neg for &LogRational {
    type Output = LogRational;
    fn neg(self) -> LogRational {
        LogRational {
            q: self.q.recip(),
            d: self.d,
        }
    }
}

impl Neg for LogRational {
    type Output = LogRational;
    fn neg(self) -> LogRational {
        -&self
    }
}

impl Sub for &LogRational {
    type Output = LogRational;
    fn sub(self, other: &LogRational) -> LogRational {
        self + &(-other)
    }
}

impl Sub for LogRational {
    type Output = LogRational;
    fn sub(self, other: LogRational) -> LogRational {
        &self - &other
    }
}

impl Ord for LogRational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let (fa, fb) = (self.to_f64(), other.to_f64());
        let gap = (fa - fb).abs();
        if gap > 1e-9 * (1.0 + fa.abs().max(fb.abs())) {
            return fa.partial_cmp(&fb).unwrap();
        }
        // cross powering: q1^(L/d1) vs q2^(L/d2)
        let (a, b, _) = self.common(other);
        a.cmp(&b)
    }
}

impl PartialOrd for LogRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn hl(n: i64, d: i64) -> LogRational {
        LogRational::half_log(&rat(n, d)).unwrap()
    }

    #[test]
    fn cross_power_order() {
        let a = hl(2, 1);
        let b = LogRational::new(rint(3), 2).unwrap();
        assert!(a > b);
        assert_eq!(a.cmp(&a), Ordering::Equal);
        assert_eq!(hl(1, 1), LogRational::zero());
    }

    #[test]
    fn arithmetic_examples() {
        let m3 = -hl(3, 1);
        assert_eq!(&m3 + &m3, -hl(9, 1));
        assert_eq!(-hl(2, 1), hl(1, 2));
        assert_eq!(hl(4, 1).scale(&rat(1, 2)), hl(2, 1));
    }

    #[test]
    fn canonical_form_extracts_roots() {
        let x = LogRational::new(rint(9), 2).unwrap();
        assert_eq!(x, hl(3, 1));
        let y = LogRational::new(rat(1, 64), 6).unwrap();
        assert_eq!(y, hl(1, 2));
        assert_eq!(LogRational::new(rint(1), 7).unwrap().d(), 1);
    }

    #[test]
    fn near_ties_resolved_exactly() {
        // 1/2 log(2) vs 1/2 log(2 + tiny)
        let tiny = Rational::new(BigInt::one(), BigInt::from(10).pow(40));
        let a = hl(2, 1);
        let b = LogRational::half_log(&(rint(2) + tiny)).unwrap();
        assert!(a < b);
    }

    #[test]
    fn rendering() {
        assert_eq!((-hl(3, 1)).div_int(2).to_string(), "-1/4*log(3)");
        assert_eq!(LogRational::log(&rint(2)).unwrap().to_string(), "log(2)");
    }

    proptest! {
        #[test]
        fn agrees_with_floats(n1 in 1i64..10_000, d1 in 1i64..10_000, k1 in 1u64..12,
                              n2 in 1i64..10_000, d2 in 1i64..10_000, k2 in 1u64..12) {
            let a = LogRational::new(rat(n1, d1), k1).unwrap();
            let b = LogRational::new(rat(n2, d2), k2).unwrap();
            let fa = (n1 as f64 / d1 as f64).ln() / (2.0 * k1 as f64);
            let fb = (n2 as f64 / d2 as f64).ln() / (2.0 * k2 as f64);
            prop_assert!((a.to_f64() - fa).abs() < 1e-9);
            prop_assert!(((&a + &b).to_f64() - (fa + fb)).abs() < 1e-9);
            prop_assert!(((&a - &b).to_f64() - (fa - fb)).abs() < 1e-9);
            if (fa - fb).abs() > 1e-9 {
                prop_assert_eq!(a.cmp(&b), fa.partial_cmp(&fb).unwrap());
            }
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn scaling_is_linear(n in 1i64..1000, p in -20i64..20, s in 1i64..20) {
            let a = hl(n, 1);
            let r = rat(p, s);
            let expect = (n as f64).ln() / 2.0 * (p as f64 / s as f64);
            prop_assert!((a.scale(&r).to_f64() - expect).abs() < 1e-9);
        }
    }
}
