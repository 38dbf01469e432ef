//! Rank-one points over the Euclidean imaginary quadratic rings `Z[i]`, `Z[ω]` and `Z[√-2]`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exact::rational::from_int;
use crate::exact::{rint, Enclosure, ExactReal, Int, LogRational, Rational};
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IQRing {
    /// `Z[i]`, `i² = -1`.
    Gauss,
    /// `Z[ω]`, `ω² = -1 - ω`.
    Eisenstein,
    /// `Z[θ]`, `θ² = -2`.
    Sqrt2,
}

impl fmt::Display for IQRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IQRing::Gauss => "gauss",
            IQRing::Eisenstein => "eisenstein",
            IQRing::Sqrt2 => "sqrt2",
        })
    }
}

impl FromStr for IQRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" => Ok(IQRing::Gauss),
            "eisenstein" => Ok(IQRing::Eisenstein),
            "sqrt2" | "sqrt-2" | "sqrt(-2)" => Ok(IQRing::Sqrt2),
            _ => Err(Error::Other(format!("unknown ring '{s}'"))),
        }
    }
}

/// `a + b θ` in the ring basis `(1, θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IQInt {
    pub a: Int,
    pub b: Int,
}

impl IQInt {
    pub fn new(a: i64, b: i64) -> Self {
        IQInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        IQInt::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for IQInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

fn round_div(x: &Int, n: &Int) -> Int {
    // nearest integer to x/n for n > 0
    let two = Int::from(2);
    (x * &two + n).div_floor(&(n * two))
}

impl IQRing {
    pub fn add(&self, x: &IQInt, y: &IQInt) -> IQInt {
        IQInt { a: &x.a + &y.a, b: &x.b + &y.b }
    }

    pub fn sub(&self, x: &IQInt, y: &IQInt) -> IQInt {
        IQInt { a: &x.a - &y.a, b: &x.b - &y.b }
    }

    pub fn mul(&self, x: &IQInt, y: &IQInt) -> IQInt {
        let (ac, bd) = (&x.a * &y.a, &x.b * &y.b);
        let cross = &x.a * &y.b + &x.b * &y.a;
        match self {
            IQRing::Gauss => IQInt { a: ac - bd, b: cross },
            IQRing::Eisenstein => IQInt { a: ac - &bd, b: cross - bd },
            IQRing::Sqrt2 => IQInt { a: ac - bd * 2, b: cross },
        }
    }

    pub fn conj(&self, x: &IQInt) -> IQInt {
        match self {
            IQRing::Eisenstein => IQInt { a: &x.a - &x.b, b: -&x.b },
            _ => IQInt { a: x.a.clone(), b: -&x.b },
        }
    }

    pub fn norm(&self, x: &IQInt) -> Int {
        match self {
            IQRing::Gauss => &x.a * &x.a + &x.b * &x.b,
            IQRing::Eisenstein => &x.a * &x.a - &x.a * &x.b + &x.b * &x.b,
            IQRing::Sqrt2 => &x.a * &x.a + &x.b * &x.b * 2,
        }
    }

    /// Real part of the image under the embedding with positive imaginary part.
    pub fn real_part(&self, x: &IQInt) -> Rational {
        match self {
            IQRing::Eisenstein => from_int(x.a.clone()) - Rational::new(x.b.clone(), 2.into()),
            _ => from_int(x.a.clone()),
        }
    }

    /// Quotient of the Euclidean division: each coordinate of `x / y` rounded.
    fn quo(&self, x: &IQInt, y: &IQInt) -> IQInt {
        let n = self.norm(y);
        let p = self.mul(x, &self.conj(y));
        IQInt { a: round_div(&p.a, &n), b: round_div(&p.b, &n) }
    }

    pub fn div_exact(&self, x: &IQInt, y: &IQInt) -> Option<IQInt> {
        let n = self.norm(y);
        if n.is_zero() {
            return None;
        }
        let p = self.mul(x, &self.conj(y));
        if (&p.a % &n).is_zero() && (&p.b % &n).is_zero() {
            Some(IQInt { a: p.a / &n, b: p.b / n })
        } else {
            None
        }
    }

    pub fn gcd(&self, x: &IQInt, y: &IQInt) -> IQInt {
        let (mut x, mut y) = (x.clone(), y.clone());
        while !y.is_zero() {
            let r = self.sub(&x, &self.mul(&self.quo(&x, &y), &y));
            debug_assert!(self.norm(&r) < self.norm(&y));
            x = y;
            y = r;
        }
        x
    }

    pub fn is_unit(&self, x: &IQInt) -> bool {
        self.norm(x).is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IQVector {
    pub ring: IQRing,
    pub coords: Vec<IQInt>,
}

impl IQVector {
    pub fn new(ring: IQRing, coords: &[(i64, i64)]) -> Self {
        IQVector {
            ring,
            coords: coords.iter().map(|&(a, b)| IQInt::new(a, b)).collect(),
        }
    }

    pub fn from_integers(ring: IQRing, v: &[i64]) -> Self {
        IQVector {
            ring,
            coords: v.iter().map(|&a| IQInt::new(a, 0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(IQInt::is_zero)
    }

    /// gcd of the coordinates, defined up to a unit.
    pub fn content(&self) -> IQInt {
        self.coords.iter().fold(IQInt::zero(), |g, x| self.ring.gcd(&g, x))
    }

    pub fn primitive(&self) -> Result<IQVector> {
        if self.is_zero() {
            return Err(Error::ZeroRank);
        }
        let g = self.content();
        let coords = self
            .coords
            .iter()
            .map(|x| self.ring.div_exact(x, &g).expect("gcd divides every coordinate"))
            .collect();
        Ok(IQVector { ring: self.ring, coords })
    }

    pub fn scale(&self, c: &IQInt) -> IQVector {
        IQVector {
            ring: self.ring,
            coords: self.coords.iter().map(|x| self.ring.mul(c, x)).collect(),
        }
    }

    /// `Σ G_ij v_i conj(v_j)`, a positive rational for non-zero `v`.
    pub fn hermitian_norm_sq(&self, gram: &crate::exact::QMatrix) -> Rational {
        let r = self.ring;
        let mut s = Rational::zero();
        for (i, x) in self.coords.iter().enumerate() {
            for (j, y) in self.coords.iter().enumerate() {
                let g = &gram[(i, j)];
                if !g.is_zero() {
                    s += g * r.real_part(&r.mul(x, &r.conj(y)));
                }
            }
        }
        s
    }
}

impl fmt::Display for IQVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "{}({})", self.ring, c.join(","))
    }
}

/// Degree of the saturated rank-one submodule of `L ⊗ O` spanned by `v`.
pub fn iq_line_degree(l: &Lattice, v: &IQVector) -> Result<LogRational> {
    if v.len() != l.rank() {
        return Err(Error::DimensionMismatch(format!("vector of length {} in a lattice of rank {}", v.len(), l.rank())));
    }
    let p = v.primitive()?;
    // both complex embeddings give the same norm, so the average is one term
    LogRational::half_log(&p.hermitian_norm_sq(l.gram()).recip())
}

/// Coordinates `X_0, …, X_n` in `Z^{n+1}` of a vector given in the simple-root basis of `A_n`.
pub fn a_n_ambient(v: &IQVector) -> Vec<IQInt> {
    let r = v.ring;
    let n = v.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push(v.coords[0].clone());
    for i in 1..n {
        out.push(r.sub(&v.coords[i], &v.coords[i - 1]));
    }
    out.push(r.sub(&IQInt::zero(), &v.coords[n - 1]));
    out
}

/// Vector of the simple-root basis with the given ambient coordinates (which must sum to zero).
pub fn a_n_from_ambient(ring: IQRing, x: &[IQInt]) -> Result<IQVector> {
    let mut acc = IQInt::zero();
    let mut coords = Vec::with_capacity(x.len().saturating_sub(1));
    for xi in &x[..x.len() - 1] {
        acc = ring.add(&acc, xi);
        coords.push(acc.clone());
    }
    if !ring.add(&acc, &x[x.len() - 1]).is_zero() {
        return Err(Error::Other("ambient coordinates do not sum to zero".into()));
    }
    Ok(IQVector { ring, coords })
}

/// Number of non-zero ambient coordinates.
pub fn alpha(v: &IQVector) -> usize {
    a_n_ambient(v).iter().filter(|x| !x.is_zero()).count()
}

/// `ndeg(O v) <= -½ log α(v)` inside `A_n ⊗ O`.
pub fn check_an_alpha_bound(n: usize, v: &IQVector) -> Result<CheckReport> {
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("vector of length {} for A_{n}", v.len())));
    }
    let d = iq_line_degree(&Lattice::a_n(n), v)?;
    let al = alpha(v);
    let bound = -LogRational::half_log(&rint(al as i64))?;
    Ok(CheckReport::le(
        "line degree vs support size",
        Enclosure::point(ExactReal::from_log(d)),
        Enclosure::point(ExactReal::from_log(bound)),
        format!("{v}, alpha = {al}"),
    ))
}

/// `(1, ω, ω²)` written in the simple-root basis of `A_2`.
pub fn eisenstein_a2_line() -> IQVector {
    let r = IQRing::Eisenstein;
    let w = IQInt::new(0, 1);
    let w2 = r.mul(&w, &w);
    a_n_from_ambient(r, &[IQInt::new(1, 0), w, w2]).expect("1 + ω + ω² = 0")
}

/// Best line degree among all vectors with coordinates `a + bθ`, `|a|, |b| <= bound`.
pub fn best_iq_line(l: &Lattice, ring: IQRing, bound: i64) -> Result<(IQVector, LogRational)> {
    let r = l.rank();
    let side = (2 * bound + 1) as usize;
    let cells = side * side;
    let total = cells.checked_pow(r as u32).filter(|&t| t <= 5_000_000).ok_or(Error::Budget("IQ box too large".into()))?;
    let mut best: Option<(IQVector, LogRational, Rational)> = None;
    for mut idx in 0..total {
        let mut coords = Vec::with_capacity(r);
        for _ in 0..r {
            let c = idx % cells;
            idx /= cells;
            coords.push(IQInt::new((c / side) as i64 - bound, (c % side) as i64 - bound));
        }
        let v = IQVector { ring, coords };
        if v.is_zero() {
            continue;
        }
        let h = v.primitive()?.hermitian_norm_sq(l.gram());
        if best.as_ref().is_none_or(|b| h < b.2) {
            let d = iq_line_degree(l, &v)?;
            best = Some((v, d, h));
        }
    }
    let (v, d, _) = best.ok_or(Error::ZeroRank)?;
    Ok((v, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_arithmetic() {
        let r = IQRing::Eisenstein;
        let w = IQInt::new(0, 1);
        let w3 = r.mul(&r.mul(&w, &w), &w);
        assert_eq!(w3, IQInt::new(1, 0));
        assert_eq!(r.norm(&IQInt::new(1, 1)), Int::from(1));
        for ring in [IQRing::Gauss, IQRing::Eisenstein, IQRing::Sqrt2] {
            let x = IQInt::new(7, -3);
            let y = IQInt::new(2, 5);
            assert_eq!(ring.norm(&ring.mul(&x, &y)), ring.norm(&x) * ring.norm(&y));
            let xy = ring.mul(&x, &y);
            assert_eq!(ring.div_exact(&xy, &y), Some(x.clone()));
            let g = ring.gcd(&ring.mul(&xy, &IQInt::new(3, 1)), &ring.mul(&xy, &IQInt::new(1, -2)));
            assert!(ring.div_exact(&g, &xy).is_some());
            assert_eq!(ring.real_part(&ring.mul(&x, &ring.conj(&x))), from_int(ring.norm(&x)));
        }
    }

    #[test]
    fn a2_degrees() {
        let a2 = Lattice::a_n(2);
        let v = eisenstein_a2_line();
        assert_eq!(iq_line_degree(&a2, &v).unwrap(), -LogRational::half_log(&rint(3)).unwrap());
        assert_eq!(alpha(&v), 3);
        let z = IQVector::from_integers(IQRing::Eisenstein, &[0, 1]);
        assert_eq!(iq_line_degree(&a2, &z).unwrap(), -LogRational::half_log(&rint(2)).unwrap());
        let doubled = v.scale(&IQInt::new(2, 0));
        assert_eq!(iq_line_degree(&a2, &doubled).unwrap(), iq_line_degree(&a2, &v).unwrap());
        let twisted = v.scale(&IQInt::new(1, 1));
        assert_eq!(iq_line_degree(&a2, &twisted).unwrap(), iq_line_degree(&a2, &v).unwrap());
        assert!(check_an_alpha_bound(2, &v).unwrap().passed());
        assert!(check_an_alpha_bound(2, &z).unwrap().passed());
    }

    #[test]
    fn integers_agree() {
        let l = Lattice::from_i64(&[&[2, 1], &[1, 3]]).unwrap();
        let v = IQVector::from_integers(IQRing::Gauss, &[2, 4]);
        // primitive vector (1, 2) has norm 2 + 4 + 12 = 18
        assert_eq!(iq_line_degree(&l, &v).unwrap(), -LogRational::half_log(&rint(18)).unwrap());
        assert!(iq_line_degree(&l, &IQVector::from_integers(IQRing::Gauss, &[0, 0])).is_err());
    }

    #[test]
    fn box_search() {
        let (_, d) = best_iq_line(&Lattice::a_n(2), IQRing::Eisenstein, 1).unwrap();
        assert_eq!(d, -LogRational::half_log(&rint(2)).unwrap());
    }
}
