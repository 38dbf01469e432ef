//! Independent lines of large degree in a lattice, with the exact Hadamard bookkeeping.

use num_traits::Signed;

use crate::check::{CheckReport, Status};
use crate::error::Result;
use crate::exact::rational::harmonic_tail;
use crate::exact::{rint, Enclosure, ExactReal, LogRational, QMatrix, Rational};
use crate::lattice::Lattice;
use crate::minima::search::successive_minima_sq;

#[derive(Clone, Debug)]
pub struct SiegelLines {
    /// Primitive generators in lattice coordinates.
    pub lines: Vec<Vec<i64>>,
    pub degrees: Vec<LogRational>,
    pub sum: LogRational,
    /// `½ log(Π |v_i|² / det Gram(v))`, non-negative.
    pub hadamard: LogRational,
    /// `log [L : Σ Z v_i]`.
    pub index: LogRational,
    /// `ndeg L = sum + hadamard + index`.
    pub identity_holds: bool,
    /// `ndeg L <= sum + ½ r ℓ(r)`, only heuristic for lines defined over Z.
    pub upper: CheckReport,
}

/// Greedy choice of independent lines of largest degree, i.e. vectors realizing the successive minima.
pub fn siegel_lines(l: &Lattice) -> Result<SiegelLines> {
    let r = l.rank();
    let (norms, vecs) = successive_minima_sq(l);
    let degrees: Vec<LogRational> = norms
        .iter()
        .map(|n| LogRational::half_log(&n.recip()))
        .collect::<Result<_>>()?;
    let sum = LogRational::sum(&degrees);
    let basis = QMatrix::from_fn(r, r, |i, j| rint(vecs[i][j]));
    let gram_det = basis.mul(l.gram()).mul(&basis.transpose()).det();
    let prod: Rational = norms.iter().cloned().product();
    let hadamard = LogRational::half_log(&(prod / &gram_det))?;
    let idx = basis.det().abs();
    let index = LogRational::log(&idx)?;
    let nd = l.ndeg();
    let identity_holds = nd == &(&sum + &hadamard) + &index;
    let mut upper = CheckReport::le(
        "degree vs lines",
        Enclosure::point(ExactReal::from_log(nd)),
        Enclosure::point(ExactReal::new(sum.clone(), harmonic_tail(r) * rint(r as i64) / rint(2))),
        "",
    );
    upper.status = if upper.status == Status::Pass {
        Status::Heuristic
    } else {
        Status::Inconclusive
    };
    Ok(SiegelLines {
        lines: vecs,
        degrees,
        sum,
        hadamard,
        index,
        identity_holds,
        upper,
    })
}
