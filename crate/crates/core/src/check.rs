//! Verified inequality instances.

use std::cmp::Ordering;
use std::fmt;

use crate::exact::{Enclosure, ExactReal};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Heuristic,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Heuristic => "HEURISTIC",
        })
    }
}

/// Whether a certified value is exact or only a proven lower bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Mode {
    Exact,
    LowerBound,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "EXACT",
            Mode::LowerBound => "LOWER_BOUND",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub status: Status,
    pub witness: String,
}

fn le(a: &ExactReal, b: &ExactReal) -> Option<bool> {
    a.try_cmp(b).map(|o| o != Ordering::Greater)
}

fn lt(a: &ExactReal, b: &ExactReal) -> Option<bool> {
    a.try_cmp(b).map(|o| o == Ordering::Less)
}

/// Verdict for `lhs <= rhs` (or `<` when `strict`) given enclosures of both sides.
pub fn decide(lhs: &Enclosure, rhs: &Enclosure, strict: bool) -> Status {
    let cmp = if strict { lt } else { le };
    if let (Some(lh), Some(rl)) = (&lhs.hi, &rhs.lo) {
        if cmp(lh, rl) == Some(true) {
            return Status::Pass;
        }
    }
    // refuted when every admissible lhs beats every admissible rhs
    if let (Some(ll), Some(rh)) = (&lhs.lo, &rhs.hi) {
        if cmp(ll, rh) == Some(false) {
            return Status::Fail;
        }
    }
    Status::Inconclusive
}

impl CheckReport {
    pub fn le(name: impl Into<String>, lhs: Enclosure, rhs: Enclosure, witness: impl Into<String>) -> Self {
        let status = decide(&lhs, &rhs, false);
        CheckReport {
            name: name.into(),
            lhs,
            rhs,
            status,
            witness: witness.into(),
        }
    }

    pub fn lt(name: impl Into<String>, lhs: Enclosure, rhs: Enclosure, witness: impl Into<String>) -> Self {
        let status = decide(&lhs, &rhs, true);
        CheckReport {
            name: name.into(),
            lhs,
            rhs,
            status,
            witness: witness.into(),
        }
    }

    /// Exact equality of two point values.
    pub fn eq(name: impl Into<String>, lhs: ExactReal, rhs: ExactReal, witness: impl Into<String>) -> Self {
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        CheckReport {
            name: name.into(),
            lhs: Enclosure::point(lhs),
            rhs: Enclosure::point(rhs),
            status,
            witness: witness.into(),
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn slack_f64(&self) -> f64 {
        self.rhs.midpoint_f64() - self.lhs.midpoint_f64()
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} <= {} (slack {:.6})",
            self.status,
            self.name,
            self.lhs.exact_string(),
            self.rhs.exact_string(),
            self.slack_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint, LogRational};

    fn r(x: crate::exact::Rational) -> ExactReal {
        ExactReal::from_rational(x)
    }

    #[test]
    fn verdicts() {
        let one = Enclosure::point(r(rint(1)));
        let two = Enclosure::point(r(rint(2)));
        assert_eq!(decide(&one, &two, false), Status::Pass);
        assert_eq!(decide(&two, &one, false), Status::Fail);
        assert_eq!(decide(&one, &one, false), Status::Pass);
        assert_eq!(decide(&one, &one, true), Status::Fail);
        let wide = Enclosure::between(r(rint(0)), r(rint(3)));
        assert_eq!(decide(&wide, &two, false), Status::Inconclusive);
        let half_open = Enclosure::at_least(r(rint(3)));
        assert_eq!(decide(&half_open, &two, false), Status::Fail);
        assert_eq!(decide(&Enclosure::at_least(r(rint(0))), &two, false), Status::Inconclusive);
    }

    #[test]
    fn mixed_values() {
        // 1/4 log 3 <= 1/2 * (1/2)
        let l = Enclosure::from(LogRational::new(rint(3), 2).unwrap());
        let rr = Enclosure::point(r(rat(1, 4)));
        assert_eq!(decide(&l, &rr, false), Status::Fail);
    }
}
