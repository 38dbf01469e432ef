//! Harder-Narasimhan polygon, flag and slopes, with the filtration-based semistability functional.

use crate::check::{CheckReport, Mode};
use crate::error::{Error, Result};
use crate::exact::{Enclosure, ExactReal, LogRational, QMatrix, Rational};
use crate::filtration::RFiltration;
use crate::lattice::{Lattice, Sublattice};
use crate::minima::aut::{automorphism_group, commutant_dimension};
use crate::minima::{canonical_polygon_points, max_slope, Budget, CanonicalPolygon};

#[derive(Clone, Debug)]
pub struct HnData {
    /// Hull vertices `(rank, ndeg)`, starting at `(0, 0)` and ending at `(r, ndeg E)`.
    pub polygon: Vec<(usize, LogRational)>,
    /// Non-zero steps, the last one being the whole lattice.
    pub flag: Vec<Sublattice>,
    /// `μ̂_1 ≥ … ≥ μ̂_r`.
    pub slopes: Vec<LogRational>,
    pub mode: Mode,
}

impl HnData {
    pub fn rank(&self) -> usize {
        self.slopes.len()
    }

    pub fn max_slope(&self) -> &LogRational {
        &self.slopes[0]
    }

    pub fn min_slope(&self) -> &LogRational {
        self.slopes.last().expect("rank >= 1")
    }

    pub fn is_trivial(&self) -> bool {
        self.flag.len() == 1
    }

    /// Slopes of the flag subquotients, one per step.
    pub fn step_slopes(&self) -> Vec<LogRational> {
        self.polygon
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1).div_int((w[1].0 - w[0].0) as u64))
            .collect()
    }
}

/// Vertices of the upper concave hull of `(0, 0), (k, P(k))`, as ranks.
fn hull_vertices(p: &CanonicalPolygon) -> Vec<usize> {
    let seg = |a: usize, b: usize| (&p.value(b) - &p.value(a)).div_int((b - a) as u64);
    let mut hull: Vec<usize> = vec![0];
    for k in 1..=p.rank() {
        while hull.len() >= 2 {
            let n = hull.len();
            if seg(hull[n - 2], hull[n - 1]) <= seg(hull[n - 1], k) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

pub fn hn_from_polygon(l: &Lattice, p: &CanonicalPolygon) -> HnData {
    let verts = hull_vertices(p);
    let mut slopes = Vec::with_capacity(p.rank());
    let mut polygon = vec![(0, LogRational::zero())];
    let mut flag = Vec::new();
    for w in verts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let s = (&p.value(b) - &p.value(a)).div_int((b - a) as u64);
        slopes.extend(std::iter::repeat_n(s, b - a));
        polygon.push((b, p.value(b)));
        if b == p.rank() {
            flag.push(l.full());
        } else {
            flag.push(p.points[b - 1].witness.clone());
        }
    }
    HnData {
        polygon,
        flag,
        slopes,
        mode: p.mode(),
    }
}

pub fn hn_data(l: &Lattice, budget: Budget) -> Result<HnData> {
    let p = canonical_polygon_points(l, budget)?;
    Ok(hn_from_polygon(l, &p))
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// Rank one lattices have no proper saturated sublattice.
    RankOne,
    /// The automorphism group acts absolutely irreducibly, so the HN flag is trivial.
    Automorphisms { order: usize, commutant_dim: usize },
    /// Complete enumeration up to the given determinant bound found no destabilizer.
    Enumeration { completeness_bound: Rational },
}

#[derive(Clone, Debug)]
pub enum Semistability {
    Semistable(Certificate),
    /// A saturated sublattice of larger slope, with that slope.
    Unstable { witness: Sublattice, slope: LogRational },
    /// Only a lower bound on the maximal slope was available and no destabilizer was found.
    Inconclusive,
}

impl Semistability {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            Semistability::Semistable(_) => Some(true),
            Semistability::Unstable { .. } => Some(false),
            Semistability::Inconclusive => None,
        }
    }
}

/// Automorphism certificate when available, otherwise the maximal slope search.
pub fn is_semistable(l: &Lattice, budget: Budget) -> Result<Semistability> {
    let r = l.rank();
    if r == 1 {
        return Ok(Semistability::Semistable(Certificate::RankOne));
    }
    match automorphism_group(l) {
        Ok(g) => {
            let c = commutant_dimension(&g, r);
            if c == 1 {
                return Ok(Semistability::Semistable(Certificate::Automorphisms {
                    order: g.len(),
                    commutant_dim: c,
                }));
            }
        }
        Err(Error::Budget(_)) => {}
        Err(e) => return Err(e),
    }
    let m = max_slope(l, budget)?;
    let mu = l.slope();
    if m.value > mu {
        return Ok(Semistability::Unstable {
            witness: m.witness,
            slope: m.value,
        });
    }
    Ok(match m.mode {
        Mode::Exact => Semistability::Semistable(Certificate::Enumeration {
            completeness_bound: m.completeness_bound,
        }),
        Mode::LowerBound => Semistability::Inconclusive,
    })
}

/// Filtration of `Q^r` with real (logarithmic) jumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnFiltration {
    pub dim: usize,
    pub flag: Vec<QMatrix>,
    pub weights: Vec<LogRational>,
}

impl HnFiltration {
    pub fn expectation(&self) -> LogRational {
        let mut prev = 0;
        let mut s = LogRational::zero();
        for (b, w) in self.flag.iter().zip(&self.weights) {
            s = &s + &w.mul_int((b.nrows() - prev) as i64);
            prev = b.nrows();
        }
        s.div_int(self.dim as u64)
    }

    /// Weight of the smallest step containing `x`; `None` for the zero vector.
    pub fn lambda(&self, x: &[Rational]) -> Option<LogRational> {
        use num_traits::Zero;
        if x.iter().all(|v| v.is_zero()) {
            return None;
        }
        self.flag
            .iter()
            .zip(&self.weights)
            .find(|(b, _)| b.vstack(&QMatrix::row_vector(x)).rank() == b.nrows())
            .map(|(_, w)| w.clone())
    }
}

pub fn hn_rfiltration(l: &Lattice, budget: Budget) -> Result<HnFiltration> {
    let hn = hn_data(l, budget)?;
    hn_filtration_of(l, &hn)
}

pub fn hn_filtration_of(l: &Lattice, hn: &HnData) -> Result<HnFiltration> {
    if hn.mode != Mode::Exact {
        return Err(Error::NotExact("the real-indexed HN filtration".into()));
    }
    Ok(HnFiltration {
        dim: l.rank(),
        flag: hn.flag.iter().map(|s| s.basis().clone()).collect(),
        weights: hn.step_slopes(),
    })
}

/// `(1/r) Σ a_i (ndeg W_i - ndeg W_{i-1})` with each `W_i` saturated in `L`.
pub fn bogomolov_functional(l: &Lattice, f: &RFiltration) -> Result<LogRational> {
    if f.dim() != l.rank() {
        return Err(Error::DimensionMismatch(format!(
            "filtration of dimension {} on a lattice of rank {}",
            f.dim(),
            l.rank()
        )));
    }
    let mut prev = LogRational::zero();
    let mut s = LogRational::zero();
    for (w, a) in f.flag().iter().zip(f.weights()) {
        let nd = Sublattice::saturated(l, w)?.ndeg();
        s = &s + &(&nd - &prev).scale(a);
        prev = nd;
    }
    Ok(s.div_int(l.rank() as u64))
}

/// `E_μ̂[F] <= μ̂(L) E[F]`, which holds for every filtration when `L` is semistable.
pub fn bogomolov_check(l: &Lattice, f: &RFiltration) -> Result<CheckReport> {
    let lhs = bogomolov_functional(l, f)?;
    let rhs = l.slope().scale(&f.expectation());
    Ok(CheckReport::le(
        "slope-weighted expectation",
        Enclosure::point(ExactReal::from_log(lhs)),
        Enclosure::point(ExactReal::from_log(rhs)),
        f.to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn rectangle() {
        let l = Lattice::diagonal(&[1, 4]).unwrap();
        let hn = hn_data(&l, b()).unwrap();
        assert_eq!(hn.mode, Mode::Exact);
        assert_eq!(hn.flag.len(), 2);
        assert_eq!(hn.flag[0].basis(), &QMatrix::from_i64(&[&[1, 0]]));
        let log2 = LogRational::log(&rint(2)).unwrap();
        assert_eq!(hn.slopes, vec![LogRational::zero(), -log2.clone()]);
        match is_semistable(&l, b()).unwrap() {
            Semistability::Unstable { witness, slope } => {
                assert_eq!(witness.basis(), &QMatrix::from_i64(&[&[1, 0]]));
                assert!(slope.is_zero());
            }
            other => panic!("{other:?}"),
        }
        let f = hn_rfiltration(&l, b()).unwrap();
        assert_eq!(f.weights, vec![LogRational::zero(), -log2.clone()]);
        assert_eq!(f.expectation(), l.slope());
        assert_eq!(f.expectation(), -log2.div_int(2));
    }

    #[test]
    fn a2_is_semistable() {
        let l = Lattice::a_n(2);
        let hn = hn_data(&l, b()).unwrap();
        let q = LogRational::log(&rint(3)).unwrap().div_int(4);
        assert!(hn.is_trivial());
        assert_eq!(hn.slopes, vec![-q.clone(), -q.clone()]);
        match is_semistable(&l, b()).unwrap() {
            Semistability::Semistable(Certificate::Automorphisms { order, commutant_dim }) => {
                assert_eq!((order, commutant_dim), (12, 1));
            }
            other => panic!("{other:?}"),
        }
        let f = hn_rfiltration(&l, b()).unwrap();
        assert_eq!(f.weights, vec![-q]);
    }

    #[test]
    fn standard_and_rank_one() {
        let hn = hn_data(&Lattice::standard(3), b()).unwrap();
        assert!(hn.is_trivial());
        assert!(hn.slopes.iter().all(|s| s.is_zero()));
        let l = Lattice::diagonal(&[7]).unwrap();
        assert!(matches!(is_semistable(&l, b()).unwrap(), Semistability::Semistable(Certificate::RankOne)));
    }

    #[test]
    fn functional_examples() {
        let l = Lattice::diagonal(&[1, 4]).unwrap();
        assert!(bogomolov_functional(&l, &RFiltration::trivial(2)).unwrap().is_zero());
        let f = RFiltration::new(2, vec![QMatrix::from_i64(&[&[1, 0]]), QMatrix::identity(2)], vec![rint(1), rint(0)]).unwrap();
        assert!(bogomolov_functional(&l, &f).unwrap().is_zero());
        // destabilizing direction violates the inequality
        assert!(!bogomolov_check(&l, &f).unwrap().passed());
        let a2 = Lattice::a_n(2);
        for (v, w) in [([1, 0], rat(3, 2)), ([1, 1], rint(2)), ([2, -1], rat(1, 3))] {
            let g = RFiltration::new(2, vec![QMatrix::from_i64(&[&v]), QMatrix::identity(2)], vec![w, rint(-1)]).unwrap();
            assert!(bogomolov_check(&a2, &g).unwrap().passed());
        }
    }
}
