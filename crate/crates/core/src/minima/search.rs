//! Saturated sublattice search: canonical polygon, maximal slope, minima.
//!
//! A saturated rank-k sublattice F is recovered from its own successive-minima
//! vectors. Those satisfy `prod |v_i|^2 <= g_k det(F)` with `g_k = (4/3)^(k(k-1)/2)`,
//! each `|v_i|^2 >= lambda_1(E)^2`, and `det gram(v) <= prod |v_i|^2`, which bounds
//! both the vector list and the tuples visited.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::enumerate::{Enumerator, ShortVector, Which};
use super::intdet;
use super::Budget;
use crate::check::Mode;
use crate::error::Result;
use crate::exact::hnf::saturate;
use crate::exact::rational::{harmonic_tail, pow_rational, rat, root_upper, to_f64};
use crate::exact::{ExactReal, Int, LogRational, QMatrix, Rational};
use crate::lattice::{Lattice, Sublattice};

#[derive(Clone, Debug)]
pub struct SlopeCertificate {
    pub value: LogRational,
    pub witness: Sublattice,
    pub completeness_bound: Rational,
    pub mode: Mode,
}

#[derive(Clone, Debug)]
pub struct PolygonPoint {
    pub rank: usize,
    pub ndeg: LogRational,
    pub witness: Sublattice,
    pub completeness_bound: Rational,
    pub mode: Mode,
}

/// `P(1..=r)`; `P(0) = 0` is implicit.
#[derive(Clone, Debug)]
pub struct CanonicalPolygon {
    pub points: Vec<PolygonPoint>,
}

impl CanonicalPolygon {
    pub fn rank(&self) -> usize {
        self.points.len()
    }

    pub fn value(&self, k: usize) -> LogRational {
        if k == 0 {
            LogRational::zero()
        } else {
            self.points[k - 1].ndeg.clone()
        }
    }

    pub fn mode(&self) -> Mode {
        if self.points.iter().all(|p| p.mode == Mode::Exact) {
            Mode::Exact
        } else {
            Mode::LowerBound
        }
    }

    /// `max_k P(k)/k`.
    pub fn max_slope(&self) -> LogRational {
        (1..=self.rank())
            .map(|k| self.value(k).div_int(k as u64))
            .max()
            .unwrap_or_default()
    }

    /// Slope of the last segment of the upper hull: `min_k (P(r) - P(k)) / (r - k)`.
    pub fn min_slope(&self) -> LogRational {
        let r = self.rank();
        let top = self.value(r);
        (0..r)
            .map(|k| (&top - &self.value(k)).div_int((r - k) as u64))
            .min()
            .unwrap_or_default()
    }
}

/// Upper bound for `gamma_k^k`: exact Hermite constants up to rank 8, then `(4/3)^(k(k-1)/2)`.
fn gamma_power(k: usize) -> Rational {
    const KNOWN: [(i64, i64); 9] = [(1, 1), (1, 1), (4, 3), (2, 1), (4, 1), (8, 1), (64, 3), (64, 1), (256, 1)];
    match KNOWN.get(k) {
        Some(&(n, d)) => rat(n, d),
        None => pow_rational(&rat(4, 3), (k * (k - 1) / 2) as u64),
    }
}

fn lex_cmp(a: &QMatrix, b: &QMatrix) -> Ordering {
    a.entries()
        .iter()
        .cmp(b.entries().iter())
        .then(a.nrows().cmp(&b.nrows()))
}

fn rows_matrix(vs: &[&[i64]]) -> QMatrix {
    QMatrix::from_fn(vs.len(), vs[0].len(), |i, j| crate::exact::rint(vs[i][j]))
}

/// Outcome of a rank-k search: minimal determinant and all tied Hermite bases.
struct Found {
    det: Option<Rational>,
    hnfs: Vec<QMatrix>,
    complete: bool,
    bound: Rational,
}

struct Searcher {
    lat: Lattice,
    en: Enumerator,
    lambda1: Rational,
    budget: Budget,
}

impl Searcher {
    fn new(lat: &Lattice, budget: Budget) -> Self {
        let en = Enumerator::new(lat);
        let first = en.vectors(&en.min_reduced_norm(), Which::PrimitiveUpToSign, usize::MAX);
        let lambda1 = first.vectors[0].norm.clone();
        Searcher {
            lat: lat.clone(),
            en,
            lambda1,
            budget,
        }
    }

    /// Determinant of the saturation of the first k reduced basis vectors.
    fn seed_det(&self, k: usize) -> Rational {
        let rows: Vec<&[i64]> = self.en.reduced_basis()[..k].iter().map(|v| v.as_slice()).collect();
        let s = saturate(&rows_matrix(&rows)).expect("reduced basis is independent");
        s.mul(self.lat.gram()).mul(&s.transpose()).det()
    }

    /// Best saturation of `base` plus one short vector.
    fn grow_seed(&self, base: &QMatrix) -> Option<Rational> {
        let list = self.en.vectors(&self.en.max_reduced_norm(), Which::PrimitiveUpToSign, 4096);
        let k = base.nrows();
        let mut best: Option<Rational> = None;
        for v in list.vectors.iter().take(256) {
            let m = base.vstack(&rows_matrix(&[&v.coords]));
            if m.rank() == k {
                continue;
            }
            let s = saturate(&m).expect("independent rows");
            let d = s.mul(self.lat.gram()).mul(&s.transpose()).det();
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
        best
    }

    fn search(&self, k: usize, dmax: &Rational) -> Found {
        let g = gamma_power(k);
        let bound = if k == 1 {
            dmax.clone()
        } else {
            &g * dmax / pow_rational(&self.lambda1, (k - 1) as u64)
        };
        let mut found = Found {
            det: None,
            hnfs: Vec::new(),
            complete: true,
            bound: bound.clone(),
        };
        if bound < self.lambda1 {
            return found;
        }
        let list = self.en.vectors(&bound, Which::PrimitiveUpToSign, self.budget.max_vectors);
        found.complete = list.complete;
        let mut dfs = Dfs {
            s: self,
            k,
            vecs: &list.vectors,
            norms: list.vectors.iter().map(|v| to_f64(&v.norm)).collect(),
            gamma: to_f64(&g),
            limit: to_f64(&(&g * dmax)),
            dmax: dmax.clone(),
            dmax_f: to_f64(dmax),
            scale_k: self.en.scale().pow(k as u32),
            scale_k_f: self.en.scale().pow(k as u32).to_f64().unwrap_or(f64::INFINITY),
            chosen: Vec::with_capacity(k),
            mu: Vec::with_capacity(k),
            bstar: Vec::with_capacity(k),
            fragile: 0,
            seen: HashSet::new(),
            nodes: 0,
            found,
        };
        dfs.rec(0, 1.0);
        dfs.found
    }
}

struct Dfs<'a> {
    s: &'a Searcher,
    k: usize,
    vecs: &'a [ShortVector],
    norms: Vec<f64>,
    gamma: f64,
    limit: f64,
    dmax: Rational,
    dmax_f: f64,
    scale_k: Int,
    scale_k_f: f64,
    chosen: Vec<usize>,
    mu: Vec<Vec<f64>>,
    bstar: Vec<f64>,
    fragile: usize,
    seen: HashSet<Vec<BigInt>>,
    nodes: u64,
    found: Found,
}

impl Dfs<'_> {
    fn rec(&mut self, start: usize, prod: f64) {
        let depth = self.chosen.len();
        let rest = (self.k - depth - 1) as i32;
        for c in start..self.vecs.len() {
            let nc = self.norms[c];
            if prod * nc * nc.powi(rest) > self.limit * (1.0 + 1e-9) + 1e-300 {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.s.budget.max_subsets {
                self.found.complete = false;
                return;
            }
            let v = &self.vecs[c].coords;
            let mut mu_c = Vec::with_capacity(depth);
            let mut b = nc;
            for i in 0..depth {
                let mut t = self.s.en.inner_f64(v, &self.vecs[self.chosen[i]].coords);
                for l in 0..i {
                    t -= self.mu[i][l] * mu_c[l] * self.bstar[l];
                }
                let m = t / self.bstar[i];
                b -= m * m * self.bstar[i];
                mu_c.push(m);
            }
            let fragile = b <= 1e-7 * nc;
            if fragile && !self.exact_independent(c) {
                continue;
            }
            self.chosen.push(c);
            self.mu.push(mu_c);
            self.bstar.push(b.max(1e-300));
            self.fragile += usize::from(fragile);
            if depth + 1 == self.k {
                self.leaf();
            } else {
                self.rec(c + 1, prod * nc);
            }
            self.fragile -= usize::from(fragile);
            self.chosen.pop();
            self.mu.pop();
            self.bstar.pop();
            if !self.found.complete && self.nodes > self.s.budget.max_subsets {
                return;
            }
        }
    }

    fn exact_independent(&self, c: usize) -> bool {
        let mut rows: Vec<&[i64]> = self.chosen.iter().map(|&i| self.vecs[i].coords.as_slice()).collect();
        rows.push(&self.vecs[c].coords);
        intdet::is_independent(&rows)
    }

    fn leaf(&mut self) {
        if self.fragile == 0 {
            let det: f64 = self.bstar.iter().product();
            if det > self.limit * (1.0 + 1e-6) {
                return;
            }
        }
        let en = &self.s.en;
        let rows: Vec<&[i64]> = self.chosen.iter().map(|&i| self.vecs[i].coords.as_slice()).collect();
        // det(F) = det gram(v) / index^2, all in integers
        let k = self.k;
        let mut gram = Vec::with_capacity(k * k);
        for a in &rows {
            for b in &rows {
                gram.push(en.scaled_form(a, b));
            }
        }
        let dg = intdet::det(&gram, k);
        // det(F) <= dmax forces index^2 >= dg / (scale^k dmax)
        let need = dg.to_f64().unwrap_or(f64::INFINITY) / self.scale_k_f / self.dmax_f * (1.0 - 1e-9);
        let known_idx = if need > 1.0 {
            let Some((idx, _)) = intdet::minor_gcd_at_least(&rows, need) else {
                return;
            };
            Some(idx)
        } else {
            None
        };
        // one exact evaluation per rational span
        if !self.seen.insert(intdet::rref_key(&rows).0) {
            return;
        }
        let idx = known_idx.unwrap_or_else(|| intdet::maximal_minor_gcd(&rows));
        let det = Rational::new(dg, &self.scale_k * &idx * &idx);
        if det > self.dmax {
            return;
        }
        let ord = self.found.det.as_ref().map(|d| det.cmp(d));
        if ord == Some(Ordering::Greater) {
            return;
        }
        let sat = saturate(&rows_matrix(&rows)).expect("independent rows");
        match ord {
            Some(Ordering::Greater) => {}
            Some(Ordering::Equal) => self.found.hnfs.push(sat),
            _ => {
                self.limit = self.gamma * to_f64(&det);
                self.dmax = det.clone();
                self.dmax_f = to_f64(&det);
                self.found.det = Some(det);
                self.found.hnfs = vec![sat];
            }
        }
    }
}

/// Searches a lattice and its dual, always reporting in primal terms.
struct Engine {
    lat: Lattice,
    det: Rational,
    budget: Budget,
    primal: Option<Searcher>,
    dual: Option<Searcher>,
    /// best Hermite basis found so far per (side, rank)
    known: HashMap<(bool, usize), QMatrix>,
}

struct RankBest {
    det: Rational,
    witness: Sublattice,
    complete: bool,
    bound: Rational,
}

impl Engine {
    fn new(lat: &Lattice, budget: Budget) -> Self {
        Engine {
            lat: lat.clone(),
            det: lat.det(),
            budget,
            primal: None,
            dual: None,
            known: HashMap::new(),
        }
    }

    fn side(&mut self, dual: bool) -> &Searcher {
        let budget = self.budget;
        if dual {
            let lat = self.lat.dual();
            self.dual.get_or_insert_with(|| Searcher::new(&lat, budget))
        } else {
            let lat = &self.lat;
            self.primal.get_or_insert_with(|| Searcher::new(lat, budget))
        }
    }

    /// Determinant of some saturated rank-k sublattice on the given side.
    fn seed(&mut self, dual: bool, k: usize) -> Rational {
        let prev = if k > 1 { self.known.get(&(dual, k - 1)).cloned() } else { None };
        let s = self.side(dual);
        let mut best = s.seed_det(k);
        if let Some(base) = prev {
            if let Some(d) = s.grow_seed(&base) {
                best = best.min(d);
            }
        }
        best
    }

    /// Saturated rank-k sublattice of least determinant, searched on the smaller side.
    fn best(&mut self, k: usize, dmax: Option<&Rational>) -> Result<Option<RankBest>> {
        let r = self.lat.rank();
        if k == r {
            if dmax.is_some_and(|d| &self.det > d) {
                return Ok(None);
            }
            return Ok(Some(RankBest {
                det: self.det.clone(),
                witness: self.lat.full(),
                complete: true,
                bound: Rational::zero(),
            }));
        }
        // F ↦ annihilator swaps ranks and divides determinants by det(E)
        let dual = 2 * k > r;
        let (kk, conv) = if dual {
            (r - k, self.det.clone())
        } else {
            (k, Rational::one())
        };
        let seed = self.seed(dual, kk);
        let limit = match dmax {
            Some(d) => (d / &conv).min(seed),
            None => seed,
        };
        let lat = self.lat.clone();
        let s = self.side(dual);
        let f = s.search(kk, &limit);
        let Some(d) = f.det else {
            return Ok(None);
        };
        let mut best: Option<Sublattice> = None;
        for h in &f.hnfs {
            let w = if dual {
                Sublattice::saturated(&s.lat, h)?.annihilator_in(&lat)?
            } else {
                Sublattice::saturated(&lat, h)?
            };
            if best.as_ref().is_none_or(|b| lex_cmp(w.basis(), b.basis()) == Ordering::Less) {
                best = Some(w);
            }
        }
        let side_best = f.hnfs.iter().min_by(|a, b| lex_cmp(a, b)).expect("non-empty ties").clone();
        self.known.insert((dual, kk), side_best);
        Ok(Some(RankBest {
            det: d * conv,
            witness: best.expect("non-empty ties"),
            complete: f.complete,
            bound: f.bound,
        }))
    }
}

fn mode_of(complete: bool) -> Mode {
    if complete {
        Mode::Exact
    } else {
        Mode::LowerBound
    }
}

/// Ranks in an order where each side sees its own ranks ascending.
fn rank_order(r: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=r / 2).collect();
    v.extend((r / 2 + 1..=r).rev());
    v
}

/// `P(k)` for every rank with witnesses.
pub fn canonical_polygon_points(l: &Lattice, budget: Budget) -> Result<CanonicalPolygon> {
    let r = l.rank();
    let mut eng = Engine::new(l, budget);
    let mut points: Vec<Option<PolygonPoint>> = vec![None; r];
    for k in rank_order(r) {
        let b = eng.best(k, None)?.expect("seed sublattice is always found");
        points[k - 1] = Some(PolygonPoint {
            rank: k,
            ndeg: LogRational::half_log(&b.det.recip())?,
            witness: b.witness,
            completeness_bound: b.bound,
            mode: mode_of(b.complete),
        });
    }
    Ok(CanonicalPolygon {
        points: points.into_iter().map(|p| p.expect("every rank visited")).collect(),
    })
}

/// Maximal slope with the witness of least rank attaining it.
pub fn max_slope(l: &Lattice, budget: Budget) -> Result<SlopeCertificate> {
    let r = l.rank();
    let mut eng = Engine::new(l, budget);
    let mut best = SlopeCertificate {
        value: l.slope(),
        witness: l.full(),
        completeness_bound: Rational::zero(),
        mode: Mode::Exact,
    };
    let mut best_rank = r;
    let mut complete = true;
    for k in rank_order(r).into_iter().filter(|&k| k < r) {
        // det(F) <= exp(-2 k mu) = q^(-k/d) for mu = log(q)/(2d)
        let mu = &best.value;
        let dmax = root_upper(&mu.q().recip(), k as u64, mu.d());
        let Some(b) = eng.best(k, Some(&dmax))? else {
            continue;
        };
        complete &= b.complete;
        best.completeness_bound = best.completeness_bound.max(b.bound.clone());
        let slope = LogRational::half_log(&b.det.recip())?.div_int(k as u64);
        if slope > best.value || (slope == best.value && k < best_rank) {
            best.value = slope;
            best.witness = b.witness;
            best_rank = k;
        }
    }
    best.mode = mode_of(complete);
    Ok(best)
}

/// `min_k (P(r) - P(k)) / (r - k)`, with the polygon mode.
pub fn min_slope(l: &Lattice, budget: Budget) -> Result<(LogRational, Mode)> {
    let p = canonical_polygon_points(l, budget)?;
    Ok((p.min_slope(), p.mode()))
}

/// Squared successive minima and a realizing set of vectors.
pub fn successive_minima_sq(l: &Lattice) -> (Vec<Rational>, Vec<Vec<i64>>) {
    let r = l.rank();
    let en = Enumerator::new(l);
    let top = en.max_reduced_norm();
    let mut bound = en.min_reduced_norm();
    loop {
        let list = en.vectors(&bound, Which::PrimitiveUpToSign, usize::MAX);
        let mut picked: Vec<&ShortVector> = Vec::new();
        for v in &list.vectors {
            let mut rows: Vec<&[i64]> = picked.iter().map(|p| p.coords.as_slice()).collect();
            rows.push(&v.coords);
            if rows_matrix(&rows).rank() == rows.len() {
                picked.push(v);
                if picked.len() == r {
                    break;
                }
            }
        }
        if picked.len() == r || bound >= top {
            return (
                picked.iter().map(|v| v.norm.clone()).collect(),
                picked.iter().map(|v| v.coords.clone()).collect(),
            );
        }
        bound = (&bound * crate::exact::rint(2)).min(top.clone());
    }
}

/// `-log lambda_i` for each successive minimum.
pub fn successive_minima(l: &Lattice) -> Vec<LogRational> {
    successive_minima_sq(l)
        .0
        .iter()
        .map(|n| LogRational::half_log(&n.recip()).expect("positive norm"))
        .collect()
}

/// Best degree of a saturated rank-1 sublattice, `-log lambda_1`.
pub fn first_degree_z(l: &Lattice) -> Result<SlopeCertificate> {
    let en = Enumerator::new(l);
    let list = en.vectors(&en.min_reduced_norm(), Which::PrimitiveUpToSign, usize::MAX);
    let v = &list.vectors[0];
    let w = Sublattice::saturated(l, &rows_matrix(&[&v.coords]))?;
    Ok(SlopeCertificate {
        value: LogRational::half_log(&v.norm.recip())?,
        witness: w,
        completeness_bound: v.norm.clone(),
        mode: Mode::Exact,
    })
}

#[derive(Clone, Debug)]
pub struct VarsigmaInterval {
    pub lower: ExactReal,
    pub upper: ExactReal,
    pub mode: Mode,
}

/// Enclosure of the least first degree of a non-zero quotient: `[mu_min - l(r)/2, mu_min]`.
pub fn varsigma_estimate(l: &Lattice, budget: Budget) -> Result<VarsigmaInterval> {
    let r = l.rank();
    if r == 1 {
        let x = ExactReal::from_log(l.ndeg());
        return Ok(VarsigmaInterval {
            lower: x.clone(),
            upper: x,
            mode: Mode::Exact,
        });
    }
    let (mu_min, mode) = min_slope(l, budget)?;
    let half = harmonic_tail(r) * rat(1, 2);
    Ok(VarsigmaInterval {
        lower: ExactReal::new(mu_min.clone(), -half),
        upper: ExactReal::from_log(mu_min),
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    fn hl(n: i64, d: i64) -> LogRational {
        LogRational::half_log(&rat(n, d)).unwrap()
    }

    #[test]
    fn a2_is_its_own_maximum() {
        let a2 = Lattice::a_n(2);
        let c = max_slope(&a2, Budget::default()).unwrap();
        assert_eq!(c.value, hl(1, 3).div_int(2));
        assert_eq!(c.witness.rank(), 2);
        assert_eq!(c.mode, Mode::Exact);
    }

    #[test]
    fn diagonal_polygon() {
        let d = Lattice::diagonal(&[1, 4]).unwrap();
        let p = canonical_polygon_points(&d, Budget::default()).unwrap();
        assert_eq!(p.value(1), LogRational::zero());
        assert_eq!(p.value(2), hl(1, 4));
        assert_eq!(p.points[0].witness.basis(), &QMatrix::from_i64(&[&[1, 0]]));
        let c = max_slope(&d, Budget::default()).unwrap();
        assert_eq!(c.value, LogRational::zero());
        assert_eq!(c.witness.basis(), &QMatrix::from_i64(&[&[1, 0]]));
    }

    #[test]
    fn standard_lattice_is_flat() {
        let z = Lattice::standard(4);
        let p = canonical_polygon_points(&z, Budget::default()).unwrap();
        for k in 1..=4 {
            assert_eq!(p.value(k), LogRational::zero());
        }
        let c = max_slope(&z, Budget::default()).unwrap();
        assert_eq!((c.value, c.witness.rank()), (LogRational::zero(), 1));
    }

    #[test]
    fn minima_examples() {
        assert_eq!(successive_minima_sq(&Lattice::a_n(2)).0, vec![rint(2), rint(2)]);
        assert_eq!(successive_minima_sq(&Lattice::diagonal(&[1, 4]).unwrap()).0, vec![rint(1), rint(4)]);
        assert_eq!(first_degree_z(&Lattice::a_n(2)).unwrap().value, hl(1, 2));
        assert_eq!(first_degree_z(&Lattice::a_n(2).dual()).unwrap().value, hl(3, 2));
    }

    #[test]
    fn varsigma_examples() {
        let v = varsigma_estimate(&Lattice::standard(2), Budget::default()).unwrap();
        assert_eq!(v.upper, ExactReal::zero());
        let a2 = varsigma_estimate(&Lattice::a_n(2), Budget::default()).unwrap();
        assert_eq!(a2.upper, ExactReal::from_log(hl(1, 3).div_int(2)));
        assert_eq!(a2.lower, ExactReal::new(hl(1, 3).div_int(2), rat(-1, 4)));
        let line = Lattice::diagonal(&[5]).unwrap();
        let v = varsigma_estimate(&line, Budget::default()).unwrap();
        assert_eq!(v.lower, v.upper);
        assert_eq!(v.upper, ExactReal::from_log(hl(1, 5)));
    }
}
