//! Certified evaluation of logarithms and the value type `LogRational + Rational`.
//!
//! Bounds such as `μ_max + ½·(1/2 + ... + 1/r)` mix a log with a rational, so
//! their comparison cannot be settled by cross-powering alone.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::logrational::LogRational;
use super::rational::{fmt_rational, to_f64, Int, Rational};

/// Largest precision (bits) tried before a sign question is declared undecided.
pub const MAX_BITS: u32 = 8192;

fn div_floor(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}

fn div_ceil(a: &Int, b: &Int) -> Int {
    -num_integer::Integer::div_floor(&-a, b)
}

/// Fixed point enclosure of `ln(y)` for rational `y` in `[1, 2]`, scaled by `2^p`.
fn ln_small_fixed(y: &Rational, p: u32) -> (Int, Int) {
    if y.is_one() {
        return (Int::zero(), Int::zero());
    }
    let scale = Int::one() << p;
    let z = (y - Rational::one()) / (y + Rational::one());
    let zs = &z * Rational::from_integer(scale.clone());
    let zl = zs.floor().to_integer();
    let zh = zs.ceil().to_integer();
    let zl2 = div_floor(&(&zl * &zl), &scale);
    let zh2 = div_ceil(&(&zh * &zh), &scale);
    // number of series terms: z <= 1/3 so z^(2N+1) < 2^-p for 2N+1 >= p/log2(3)
    let n_terms = (p as usize) / 3 + 2;
    let mut tl = zl.clone();
    let mut th = zh.clone();
    let mut sl = Int::zero();
    let mut sh = Int::zero();
    for n in 0..n_terms {
        let k = Int::from(2 * n + 1);
        sl += div_floor(&tl, &k);
        sh += div_ceil(&th, &k);
        tl = div_floor(&(&tl * &zl2), &scale);
        th = div_ceil(&(&th * &zh2), &scale);
    }
    // tail: sum_{n >= N} z^(2n+1)/(2n+1) <= z^(2N+1) / ((2N+1)(1 - z^2)) <= (9/8) th / (2N+1)
    let k = Int::from(2 * n_terms + 1);
    let tail = div_ceil(&(&th * Int::from(9)), &(&k * Int::from(8))) + Int::one();
    sh += tail;
    // ln y = 2 * atanh(z); the +2 absorbs truncation of the fixed point products
    (
        Int::from(2) * sl - Int::from(2 * n_terms as u64),
        Int::from(2) * sh + Int::from(2 * n_terms as u64),
    )
}

/// Rational enclosure `[lo, hi]` of `ln q` with absolute width about `|log2 q| * 2^-bits`.
pub fn ln_enclosure(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(q.is_positive(), "log of non-positive rational");
    if q.is_one() {
        return (Rational::zero(), Rational::zero());
    }
    // q = 2^k * y with y in [1, 2)
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(Int::one() << e as u64)
        } else {
            Rational::new(Int::one(), Int::one() << (-e) as u64)
        }
    };
    let mut y = q * pow2(-k);
    while y < Rational::one() {
        y *= Rational::from_integer(Int::from(2));
        k -= 1;
    }
    while y >= Rational::from_integer(Int::from(2)) {
        y /= Rational::from_integer(Int::from(2));
        k += 1;
    }
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let p = bits + 16 + extra;
    let (yl, yh) = ln_small_fixed(&y, p);
    let (l2l, l2h) = ln_small_fixed(&Rational::from_integer(Int::from(2)), p);
    let kk = BigInt::from(k);
    let (lo, hi) = if k >= 0 {
        (&kk * &l2l + yl, &kk * &l2h + yh)
    } else {
        (&kk * &l2h + yl, &kk * &l2l + yh)
    };
    let den = Int::one() << p;
    (Rational::new(lo, den.clone()), Rational::new(hi, den))
}

/// A real number `log(q)/(2d) + c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactReal {
    pub log: LogRational,
    pub rat: Rational,
}

impl ExactReal {
    pub fn new(log: LogRational, rat: Rational) -> Self {
        ExactReal { log, rat }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_log(log: LogRational) -> Self {
        ExactReal {
            log,
            rat: Rational::zero(),
        }
    }

    pub fn from_rational(rat: Rational) -> Self {
        ExactReal {
            log: LogRational::zero(),
            rat,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.log.to_f64() + to_f64(&self.rat)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactReal {
            log: self.log.scale(r),
            rat: &self.rat * r,
        }
    }

    /// Certified sign; `None` only when [`MAX_BITS`] of precision did not separate it from zero.
    pub fn signum(&self) -> Option<Ordering> {
        if self.rat.is_zero() {
            return Some(self.log.signum());
        }
        if self.log.is_zero() {
            return Some(self.rat.cmp(&Rational::zero()));
        }
        // sign of ln(q) + 2 d c
        let shift = &self.rat * Rational::from_integer(Int::from(2 * self.log.d()));
        let mut bits = 64;
        while bits <= MAX_BITS {
            let (lo, hi) = ln_enclosure(self.log.q(), bits);
            if (&lo + &shift).is_positive() {
                return Some(Ordering::Greater);
            }
            if (&hi + &shift).is_negative() {
                return Some(Ordering::Less);
            }
            bits *= 2;
        }
        None
    }

    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        let (fa, fb) = (self.to_f64(), other.to_f64());
        if (fa - fb).abs() > 1e-6 * (1.0 + fa.abs().max(fb.abs())) {
            return fa.partial_cmp(&fb);
        }
        (self - other).signum()
    }

    pub fn exact_string(&self) -> String {
        match (self.log.is_zero(), self.rat.is_zero()) {
            (true, _) => fmt_rational(&self.rat),
            (false, true) => self.log.exact_string(),
            (false, false) => {
                if self.rat.is_negative() {
                    format!("{} - {}", self.log, fmt_rational(&-self.rat.clone()))
                } else {
                    format!("{} + {}", self.log, fmt_rational(&self.rat))
                }
            }
        }
    }
}

impl From<LogRational> for ExactReal {
    fn from(l: LogRational) -> Self {
        ExactReal::from_log(l)
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, o: &ExactReal) -> ExactReal {
        ExactReal {
            log: &self.log + &o.log,
            rat: &self.rat + &o.rat,
        }
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, o: &ExactReal) -> ExactReal {
        ExactReal {
            log: &self.log - &o.log,
            rat: &self.rat - &o.rat,
        }
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal {
            log: -&self.log,
            rat: -self.rat.clone(),
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact_string())
    }
}

/// Closed enclosure of a real quantity; `None` endpoints are infinite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Enclosure {
    pub lo: Option<ExactReal>,
    pub hi: Option<ExactReal>,
}

impl Enclosure {
    pub fn point(x: ExactReal) -> Self {
        Enclosure {
            lo: Some(x.clone()),
            hi: Some(x),
        }
    }

    pub fn between(lo: ExactReal, hi: ExactReal) -> Self {
        Enclosure {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn at_least(lo: ExactReal) -> Self {
        Enclosure { lo: Some(lo), hi: None }
    }

    pub fn at_most(hi: ExactReal) -> Self {
        Enclosure { lo: None, hi: Some(hi) }
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        let lo = match (&self.lo, &o.lo) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let hi = match (&self.hi, &o.hi) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Enclosure { lo, hi }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.as_ref().map(|x| -x),
            hi: self.lo.as_ref().map(|x| -x),
        }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        self.add(&o.neg())
    }

    pub fn shift(&self, x: &ExactReal) -> Enclosure {
        self.add(&Enclosure::point(x.clone()))
    }

    /// Multiply by a rational (orientation flips for negative factors).
    pub fn scale(&self, r: &Rational) -> Enclosure {
        let lo = self.lo.as_ref().map(|x| x.scale(r));
        let hi = self.hi.as_ref().map(|x| x.scale(r));
        if r.is_negative() {
            Enclosure { lo: hi, hi: lo }
        } else {
            Enclosure { lo, hi }
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => 0.5 * (a.to_f64() + b.to_f64()),
            (Some(a), None) => a.to_f64(),
            (None, Some(b)) => b.to_f64(),
            (None, None) => f64::NAN,
        }
    }

    pub fn exact_string(&self) -> String {
        if self.is_point() {
            return self.lo.as_ref().unwrap().exact_string();
        }
        let f = |x: &Option<ExactReal>, inf: &str| {
            x.as_ref().map_or(inf.to_string(), |v| v.exact_string())
        };
        format!("[{}; {}]", f(&self.lo, "-inf"), f(&self.hi, "+inf"))
    }
}

impl From<LogRational> for Enclosure {
    fn from(l: LogRational) -> Self {
        Enclosure::point(ExactReal::from_log(l))
    }
}

impl From<ExactReal> for Enclosure {
    fn from(x: ExactReal) -> Self {
        Enclosure::point(x)
    }
}
