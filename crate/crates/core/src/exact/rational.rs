//! Helpers around arbitrary precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_int(n: Int) -> Rational {
    BigRational::from_integer(n)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Natural log of a positive big integer, good to f64 precision.
pub fn ln_int(x: &Int) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: Int = x >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of a positive rational as f64.
pub fn ln_f64(q: &Rational) -> f64 {
    ln_int(q.numer()) - ln_int(q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_f64(&q.abs())).exp()
}

/// Closest rational to a finite f64 (exact binary expansion).
pub fn from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn floor_int(q: &Rational) -> Int {
    q.floor().to_integer()
}

pub fn ceil_int(q: &Rational) -> Int {
    q.ceil().to_integer()
}

/// Simplest rational (smallest denominator, then numerator) in the closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    simplest_pos(lo, hi)
}

fn simplest_pos(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // same integer part; recurse on reciprocals of fractional parts
    let a = lo - &fl;
    let b = hi - &fl;
    let inner = simplest_pos(&b.recip(), &a.recip());
    fl + inner.recip()
}

/// Exact integer k-th root if `x` is a perfect k-th power.
pub fn exact_root(x: &Int, k: u32) -> Option<Int> {
    if x.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-x, k).map(|r| -r);
    }
    let r = x.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

pub fn pow_rational(q: &Rational, e: u64) -> Rational {
    Rational::new_raw(
        num_traits::pow(q.numer().clone(), e as usize),
        num_traits::pow(q.denom().clone(), e as usize),
    )
}

/// Greatest rational c with v/c integral for every entry (gcd of numerators over lcm of denominators).
pub fn content<'a>(entries: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut g = Int::zero();
    let mut l = Int::one();
    for e in entries {
        if e.is_zero() {
            continue;
        }
        g = g.gcd(e.numer());
        l = l.lcm(e.denom());
    }
    if g.is_zero() {
        return Rational::zero();
    }
    Rational::new(g, l)
}

/// Rational q with q >= x^(num/den), reasonably tight.
pub fn root_upper(x: &Rational, num: u64, den: u64) -> Rational {
    assert!(!x.is_negative() && den > 0);
    if x.is_zero() {
        return Rational::zero();
    }
    let est = (ln_f64(x) * num as f64 / den as f64).exp();
    let target = pow_rational(x, num);
    let mut y = from_f64(est * (1.0 + 1e-9) + f64::MIN_POSITIVE);
    let mut step = from_f64(est.max(1e-300) * 1e-6);
    while pow_rational(&y, den) < target {
        y += &step;
        step = &step * rint(2);
    }
    y
}

/// Rational q with q <= x^(num/den), reasonably tight, non-negative.
pub fn root_lower(x: &Rational, num: u64, den: u64) -> Rational {
    assert!(!x.is_negative() && den > 0);
    if x.is_zero() {
        return Rational::zero();
    }
    let est = (ln_f64(x) * num as f64 / den as f64).exp();
    let target = pow_rational(x, num);
    let mut y = from_f64(est * (1.0 - 1e-9));
    let mut step = from_f64(est.max(1e-300) * 1e-6);
    while y.is_positive() && pow_rational(&y, den) > target {
        y -= &step;
        step = &step * rint(2);
    }
    if y.is_negative() {
        Rational::zero()
    } else {
        y
    }
}

/// Harmonic tail sum over j = 2..=r of 1/j.
pub fn harmonic_tail(r: usize) -> Rational {
    let mut s = Rational::zero();
    for j in 2..=r {
        s += rat(1, j as i64);
    }
    s
}

/// Parse "p", "p/q" or "-p/q".
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: Int = a.trim().parse().ok()?;
        let d: Int = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        Some(from_int(s.parse().ok()?))
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact square root of a rational if it is a perfect square.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    Some(Rational::new(
        exact_root(q.numer(), 2)?,
        exact_root(q.denom(), 2)?,
    ))
}

/// Rational enclosure `[lo, hi]` of sqrt(q) of relative width about `2^-bits`.
pub fn sqrt_enclosure(q: &Rational, bits: u32) -> (Rational, Rational) {
    if let Some(s) = exact_sqrt(q) {
        return (s.clone(), s);
    }
    let scale = Int::one() << (2 * bits as u64);
    let scaled = (q * from_int(scale)).floor().to_integer();
    let r = scaled.sqrt();
    let denom = Int::one() << bits as u64;
    (
        Rational::new(r.clone(), denom.clone()),
        Rational::new(r + 1, denom),
    )
}
