//! Certified enclosures of largest eigenvalues.

use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::poly::{char_poly, Sturm};
use super::rational::{rint, simplest_in, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EigenInterval {
    pub lower: Rational,
    pub upper: Rational,
}

impl EigenInterval {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

/// Largest eigenvalue of a symmetric matrix, enclosed to width at most `eps`.
pub fn max_eigenvalue_interval(s: &QMatrix, eps: &Rational) -> Result<EigenInterval> {
    if !s.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    Ok(largest_real_root(s, eps))
}

/// Largest real eigenvalue of a square matrix with real spectrum (e.g. similar to a
/// symmetric one, such as `A * G` with `G` positive definite).
pub(crate) fn largest_real_root(a: &QMatrix, eps: &Rational) -> EigenInterval {
    let p = char_poly(a);
    let sturm = Sturm::new(&p);
    let mut hi = p.root_bound();
    let mut lo = -hi.clone();
    // invariant: largest root lies in (lo, hi]
    let pin = |lo: &Rational, hi: &Rational| -> Option<Rational> {
        let c = simplest_in(lo, hi);
        if &c > lo && p.eval(&c).is_zero() && sturm.count(&c, hi) == 0 {
            Some(c)
        } else {
            None
        }
    };
    let mut rounds = 0u32;
    loop {
        if &hi - &lo <= *eps {
            break;
        }
        if rounds % 8 == 0 {
            if let Some(c) = pin(&lo, &hi) {
                return EigenInterval {
                    lower: c.clone(),
                    upper: c,
                };
            }
        }
        let mid = (&lo + &hi) / rint(2);
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
        rounds += 1;
    }
    if let Some(c) = pin(&lo, &hi) {
        return EigenInterval {
            lower: c.clone(),
            upper: c,
        };
    }
    if p.eval(&hi).is_zero() && sturm.count(&hi, &(&hi + Rational::one())) == 0 {
        return EigenInterval {
            lower: hi.clone(),
            upper: hi,
        };
    }
    EigenInterval { lower: lo, upper: hi }
}

/// Like [`largest_real_root`] but refined until the lower end is positive (for nonzero PSD-like input).
pub(crate) fn largest_positive_root(a: &QMatrix, eps: &Rational) -> Option<EigenInterval> {
    let mut e = eps.clone();
    for _ in 0..200 {
        let iv = largest_real_root(a, &e);
        if iv.lower.is_positive() {
            return Some(iv);
        }
        if iv.upper.is_zero() || iv.upper.is_negative() {
            return None;
        }
        e /= rint(16);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, to_f64};
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let eps = rat(1, 100);
        let id = QMatrix::identity(2);
        let iv = max_eigenvalue_interval(&id, &eps).unwrap();
        assert!(iv.contains(&rint(1)) && iv.width() <= eps);
        let d = QMatrix::from_i64(&[&[1, 0], &[0, 4]]);
        assert!(max_eigenvalue_interval(&d, &eps).unwrap().contains(&rint(4)));
        let a2 = QMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        let iv = max_eigenvalue_interval(&a2, &eps).unwrap();
        assert!(iv.contains(&rint(3)));
        assert!(iv.is_exact());
    }

    #[test]
    fn irrational_eigenvalue() {
        // [[1,1],[1,0]] has largest eigenvalue the golden ratio
        let m = QMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let iv = max_eigenvalue_interval(&m, &rat(1, 1_000_000)).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(to_f64(&iv.lower) <= phi && phi <= to_f64(&iv.upper));
        assert!(!iv.is_exact());
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = QMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert_eq!(max_eigenvalue_interval(&m, &rat(1, 10)), Err(Error::NonSymmetric));
    }

    proptest! {
        #[test]
        fn rayleigh_and_trace_bounds(e in proptest::collection::vec(-6i64..6, 9), x in proptest::collection::vec(-5i64..5, 3)) {
            let b = QMatrix::from_fn(3, 3, |i, j| rint(e[3 * i + j]));
            let s = b.mul(&b.transpose());
            let iv = max_eigenvalue_interval(&s, &rat(1, 1000)).unwrap();
            prop_assert!(iv.upper >= s.trace() / rint(3));
            let xv: Vec<_> = x.iter().map(|&t| rint(t)).collect();
            let nn: Rational = xv.iter().map(|t| t * t).sum();
            if !nn.is_zero() {
                let rq = s.form(&xv, &xv) / nn;
                prop_assert!(rq <= iv.upper);
            }
        }
    }
}
