//! Stability of subspaces `V ⊂ E ⊗ F` under the action of `GL(E) × GL(F)`.
//!
//! Tensors are `a × b` coefficient matrices `M` with `M_ij` the coordinate of `x_i ⊗ y_j`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{CheckReport, Status};
use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::rational::{fmt_rational, sqrt_enclosure};
use crate::exact::{rint, Enclosure, ExactReal, QMatrix, Rational};
use crate::filtration::RFiltration;
use crate::lattice::span_intersection;
use crate::tensor::{pencil_min_rank, rank_drop_poly, rho_profile, TensorSubspace};

const POOL_CAP: usize = 48;
const RANDOM_COMBOS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "LEFT",
            Side::Right => "RIGHT",
            Side::Both => "BOTH",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "both" => Ok(Side::Both),
            _ => Err(Error::Other(format!("unknown side '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GitStatus {
    Unstable,
    StableCertified,
    SemistableCertified,
    LikelySemistable,
}

impl fmt::Display for GitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GitStatus::Unstable => "UNSTABLE",
            GitStatus::StableCertified => "STABLE_CERTIFIED",
            GitStatus::SemistableCertified => "SEMISTABLE_CERTIFIED",
            GitStatus::LikelySemistable => "LIKELY_SEMISTABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GitWitness {
    /// `E_1` (rows) on the checked side with `meet = dim V ∩ (E_1 ⊗ F)`.
    Subspace { basis: QMatrix, meet: usize },
    /// Every element `tA + B` with `locus(t) = 0` has rank at most `rank`.
    AlgebraicLine { a: QMatrix, b: QMatrix, locus: Poly, rank: usize },
    /// `restricted = E[(F ⊗ G)|_V]`, `margin = restricted - E[F] - E[G]`.
    Filtrations {
        f: RFiltration,
        g: RFiltration,
        restricted: Rational,
        margin: Rational,
    },
}

impl fmt::Display for GitWitness {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GitWitness::Subspace { basis, meet } => {
                write!(out, "subspace {} (dim {}) meets V in dim {meet}", rows_str(basis), basis.nrows())
            }
            GitWitness::AlgebraicLine { locus, rank, .. } => {
                write!(out, "pencil elements of rank {rank} at roots of {:?}", locus.coeffs().iter().map(fmt_rational).collect::<Vec<_>>())
            }
            GitWitness::Filtrations { f, g, restricted, margin } => write!(
                out,
                "F = {f}; G = {g}; restricted expectation {}, margin {}",
                fmt_rational(restricted),
                fmt_rational(margin)
            ),
        }
    }
}

fn rows_str(m: &QMatrix) -> String {
    let rows: Vec<String> = m
        .rows_iter()
        .map(|r| format!("[{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

#[derive(Clone, Debug)]
pub struct SemistabilityVerdict {
    pub side: Side,
    pub status: GitStatus,
    pub witness: Option<GitWitness>,
    pub evidence: String,
}

impl SemistabilityVerdict {
    /// `Some(true)` when (semi)stability is proven, `Some(false)` when a violation is proven.
    pub fn semistable(&self) -> Option<bool> {
        match self.status {
            GitStatus::Unstable => Some(false),
            GitStatus::StableCertified | GitStatus::SemistableCertified => Some(true),
            GitStatus::LikelySemistable => None,
        }
    }
}

/// Extra candidate subspaces of `E` (left) and `F` (right).
#[derive(Clone, Debug, Default)]
pub struct CandidatePool {
    pub left: Vec<QMatrix>,
    pub right: Vec<QMatrix>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub flags_per_side: usize,
    pub weight_max: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            flags_per_side: 40,
            weight_max: 3,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig { seed, ..Default::default() }
    }

    fn deeper(self) -> Self {
        SearchConfig {
            seed: self.seed.wrapping_add(1),
            flags_per_side: self.flags_per_side * 2,
            weight_max: self.weight_max + 2,
        }
    }
}

/// `V` seen from `side`: the right side is handled by transposing.
fn oriented(v: &TensorSubspace, side: Side) -> Result<TensorSubspace> {
    match side {
        Side::Right => TensorSubspace::new(
            v.right.clone(),
            v.left.clone(),
            v.generators.iter().map(|g| g.transpose()).collect(),
        ),
        _ => Ok(v.clone()),
    }
}

fn col_space(m: &QMatrix) -> QMatrix {
    m.transpose().row_space()
}

/// Smallest subspace `E_1` with `V ⊂ E_1 ⊗ F`.
pub fn left_image(v: &TensorSubspace) -> QMatrix {
    let mut all = v.generators[0].transpose();
    for g in &v.generators[1..] {
        all = all.vstack(&g.transpose());
    }
    all.row_space()
}

/// `dim V ∩ (E_1 ⊗ F)`.
pub fn meet_dim(v: &TensorSubspace, e1: &QMatrix) -> usize {
    let (_, b) = v.shape();
    if e1.nrows() == 0 {
        return 0;
    }
    span_intersection(&v.flat(), &e1.kron(&QMatrix::identity(b))).nrows()
}

/// `E[(F ⊗ G)|_V]`, through the restricted filtration.
pub fn restricted_expectation(v: &TensorSubspace, f: &RFiltration, g: &RFiltration) -> Result<Rational> {
    let (a, b) = v.shape();
    if f.dim() != a || g.dim() != b {
        return Err(Error::DimensionMismatch(format!(
            "filtrations of dimensions {} and {} on a {a}x{b} tensor space",
            f.dim(),
            g.dim()
        )));
    }
    Ok(f.tensor(g).restrict(&v.flat())?.expectation())
}

/// `E[(F ⊗ G)|_V] - E[F] - E[G]`; positive means `(F, G)` destabilizes `V`.
pub fn restricted_margin(v: &TensorSubspace, f: &RFiltration, g: &RFiltration) -> Result<Rational> {
    Ok(restricted_expectation(v, f, g)? - f.expectation() - g.expectation())
}

fn push_candidate(out: &mut Vec<QMatrix>, m: QMatrix, a: usize) {
    let s = m.row_space();
    if s.nrows() == 0 || s.nrows() >= a || out.len() >= POOL_CAP {
        return;
    }
    if !out.contains(&s) {
        out.push(s);
    }
}

/// Element of minimal rank `k` in the pencil `<A, B>` if one is rational.
fn rational_low_rank(a: &QMatrix, b: &QMatrix, k: usize) -> Option<QMatrix> {
    if a.rank() <= k {
        return Some(a.clone());
    }
    rank_drop_poly(a, b, k)
        .rational_roots()
        .first()
        .map(|t| a.scale(t).add(b))
}

/// Candidate subspaces of `E`, deduplicated, proper and non-zero.
pub fn default_pool(v: &TensorSubspace, extra: &[QMatrix], seed: u64) -> Vec<QMatrix> {
    let (a, _) = v.shape();
    let m = v.dim();
    let mut out = Vec::new();
    for e in extra {
        push_candidate(&mut out, e.clone(), a);
    }
    push_candidate(&mut out, left_image(v), a);
    for g in &v.generators {
        push_candidate(&mut out, col_space(g), a);
        push_candidate(&mut out, g.left_kernel(), a);
    }
    for i in 0..m {
        for j in i + 1..m {
            let (x, y) = (&v.generators[i], &v.generators[j]);
            push_candidate(&mut out, col_space(&x.transpose().vstack(&y.transpose()).transpose()), a);
            push_candidate(&mut out, span_intersection(&x.left_kernel(), &y.left_kernel()), a);
            let k = pencil_min_rank(x, y);
            if k < x.rank().max(y.rank()) {
                if let Some(low) = rational_low_rank(x, y, k) {
                    push_candidate(&mut out, col_space(&low), a);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_COMBOS {
        let c: Vec<Rational> = (0..m).map(|_| rint(rng.gen_range(-3..=3))).collect();
        let e = v.element(&c);
        if !e.is_zero() {
            push_candidate(&mut out, col_space(&e), a);
            push_candidate(&mut out, e.left_kernel(), a);
        }
    }
    for i in 0..a {
        push_candidate(&mut out, QMatrix::from_fn(1, a, |_, j| rint(i64::from(i == j))), a);
    }
    for k in 2..a {
        push_candidate(&mut out, QMatrix::from_fn(k, a, |r, j| rint(i64::from(r == j))), a);
    }
    for k in 1..a {
        let e: Vec<Rational> = (0..k * a).map(|_| rint(rng.gen_range(-2..=2))).collect();
        push_candidate(&mut out, QMatrix::from_fn(k, a, |r, j| e[r * a + j].clone()), a);
    }
    out
}

fn subspace_witness(v: &TensorSubspace, e1: QMatrix) -> GitWitness {
    let meet = meet_dim(v, &e1);
    GitWitness::Subspace { basis: e1, meet }
}

/// Rank criterion `dim V ∩ (E_1 ⊗ F) / dim V <= dim E_1 / dim E` on one side.
pub fn left_right_check(v: &TensorSubspace, side: Side, pool: &CandidatePool, seed: u64) -> Result<SemistabilityVerdict> {
    if side == Side::Both {
        return both_sided_check(v, pool, SearchConfig::with_seed(seed));
    }
    let w = oriented(v, side)?;
    let extra = if side == Side::Left { &pool.left } else { &pool.right };
    let (a, _) = w.shape();
    let m = w.dim();
    let verdict = |status, witness, evidence: String| SemistabilityVerdict {
        side,
        status,
        witness,
        evidence,
    };

    if m == 1 {
        let rho = w.generators[0].rank();
        return Ok(if rho == a {
            verdict(GitStatus::StableCertified, None, format!("line of tensorial rank {rho} = {a}"))
        } else {
            verdict(
                GitStatus::Unstable,
                Some(subspace_witness(&w, col_space(&w.generators[0]))),
                format!("line of tensorial rank {rho} < {a}"),
            )
        });
    }
    let img = left_image(&w);
    if img.nrows() < a {
        return Ok(verdict(
            GitStatus::Unstable,
            Some(subspace_witness(&w, img.clone())),
            format!("image of dimension {} < {a}", img.nrows()),
        ));
    }
    if m == 2 {
        let (x, y) = (&w.generators[0], &w.generators[1]);
        let rho = pencil_min_rank(x, y);
        let ev = format!("pencil of minimal rank {rho}, full image of dimension {a}");
        return Ok(match (2 * rho).cmp(&a) {
            Ordering::Less => {
                let wit = match rational_low_rank(x, y, rho) {
                    Some(low) => subspace_witness(&w, col_space(&low)),
                    None => GitWitness::AlgebraicLine {
                        a: x.clone(),
                        b: y.clone(),
                        locus: rank_drop_poly(x, y, rho),
                        rank: rho,
                    },
                };
                verdict(GitStatus::Unstable, Some(wit), ev)
            }
            Ordering::Equal => verdict(GitStatus::SemistableCertified, None, ev),
            Ordering::Greater => verdict(GitStatus::StableCertified, None, ev),
        });
    }

    let cands = default_pool(&w, extra, seed);
    let mut equalities = 0;
    for e1 in &cands {
        let r = meet_dim(&w, e1);
        let k = e1.nrows();
        match (r * a).cmp(&(k * m)) {
            Ordering::Greater => {
                return Ok(verdict(
                    GitStatus::Unstable,
                    Some(GitWitness::Subspace { basis: e1.clone(), meet: r }),
                    format!("violation {r}/{m} > {k}/{a} among {} candidates", cands.len()),
                ))
            }
            Ordering::Equal => equalities += 1,
            Ordering::Less => {}
        }
    }
    Ok(verdict(
        GitStatus::LikelySemistable,
        None,
        format!("{} candidates, no violation, {equalities} equalities", cands.len()),
    ))
}

/// Proper nested chains of pool subspaces, the empty chain first.
fn flags_from_pool(pool: &[QMatrix], cap: usize) -> Vec<Vec<QMatrix>> {
    let mut out: Vec<Vec<QMatrix>> = vec![Vec::new()];
    for p in pool {
        if out.len() >= cap {
            return out;
        }
        out.push(vec![p.clone()]);
    }
    for p in pool {
        for q in pool {
            if out.len() >= cap {
                return out;
            }
            if p.nrows() < q.nrows() && q.vstack(p).rank() == q.nrows() {
                out.push(vec![p.clone(), q.clone()]);
            }
        }
    }
    out
}

/// Weights `a_1 > … > a_p = 0` with gaps in `1..=max`, smallest gaps first.
fn weight_vectors(p: usize, max: i64) -> Vec<Vec<Rational>> {
    let gaps = p - 1;
    let mut out = Vec::new();
    let mut d = vec![1i64; gaps];
    loop {
        let mut w = vec![rint(0); p];
        for i in (0..gaps).rev() {
            w[i] = &w[i + 1] + rint(d[i]);
        }
        out.push(w);
        let mut i = 0;
        loop {
            if i == gaps {
                out.sort_by_key(|w| w[0].clone());
                return out;
            }
            d[i] += 1;
            if d[i] <= max {
                break;
            }
            d[i] = 1;
            i += 1;
        }
    }
}

fn with_full(steps: &[QMatrix], n: usize) -> Vec<QMatrix> {
    let mut s = steps.to_vec();
    s.push(QMatrix::identity(n));
    s
}

/// Expectation and centered squared norm of the filtration with the given flag dimensions.
fn moments(dims: &[usize], w: &[Rational]) -> (Rational, Rational) {
    let n = Rational::from_integer((*dims.last().expect("non-empty")).into());
    let mut prev = 0;
    let (mut e, mut sq) = (Rational::zero(), Rational::zero());
    for (d, x) in dims.iter().zip(w) {
        let j = Rational::from_integer((d - prev).into());
        e += x * &j;
        sq += x * x * j;
        prev = *d;
    }
    let e = e / &n;
    let var = sq / n - &e * &e;
    (e, var)
}

/// Cached `dim V ∩ Σ W_i ⊗ U_{s_i - 1}` for one pair of flags.
struct PairEval<'a> {
    flat: &'a QMatrix,
    m: usize,
    fs: Vec<QMatrix>,
    gs: Vec<QMatrix>,
    cache: HashMap<Vec<usize>, usize>,
}

impl PairEval<'_> {
    fn meet(&mut self, stair: Vec<usize>) -> usize {
        if let Some(&d) = self.cache.get(&stair) {
            return d;
        }
        let mut s: Option<QMatrix> = None;
        for (i, &c) in stair.iter().enumerate() {
            if c > 0 {
                let blk = self.fs[i].kron(&self.gs[c - 1]);
                s = Some(match s {
                    Some(x) => x.vstack(&blk),
                    None => blk,
                });
            }
        }
        let d = match s {
            None => 0,
            Some(s) => self.m + s.rank() - self.flat.vstack(&s).rank(),
        };
        self.cache.insert(stair, d);
        d
    }

    fn restricted(&mut self, aw: &[Rational], bw: &[Rational]) -> Rational {
        let mut ts: Vec<Rational> = aw.iter().flat_map(|x| bw.iter().map(move |y| x + y)).collect();
        ts.sort();
        ts.dedup();
        let mut total = Rational::zero();
        let mut prev = 0;
        for t in ts.iter().rev() {
            let stair: Vec<usize> = aw.iter().map(|x| bw.iter().filter(|y| x + *y >= *t).count()).collect();
            let d = self.meet(stair);
            total += t * Rational::from_integer((d - prev).into());
            prev = d;
        }
        total / Rational::from_integer(self.m.into())
    }
}

/// `margin / sqrt(N)` ordering: larger means more destabilizing.
fn score_cmp(m1: &Rational, n1: &Rational, m2: &Rational, n2: &Rational) -> Ordering {
    match m1.signum().cmp(&m2.signum()) {
        Ordering::Equal => {}
        o => return o,
    }
    let l = m1 * m1 * n2;
    let r = m2 * m2 * n1;
    if m1.is_negative() {
        r.cmp(&l)
    } else {
        l.cmp(&r)
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    fi: usize,
    gi: usize,
    aw: Vec<Rational>,
    bw: Vec<Rational>,
    margin: Rational,
    norm_sq: Rational,
}

/// Best pair found for `Θ(F, G) = -E[(F ⊗ G)|_V] / sqrt(|F|² + |G|²)` over centered pairs.
#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// Enclosure `[lo, hi]` of `Θ` at the returned pair.
    pub theta: (Rational, Rational),
    pub f: RFiltration,
    pub g: RFiltration,
    /// `E[(F ⊗ G)|_V]` at the uncentered pair.
    pub restricted: Rational,
    pub margin: Rational,
    /// `|F|² + |G|²` after centering.
    pub norm_sq: Rational,
    pub evaluated: usize,
    pub flags: (usize, usize),
}

impl ThetaResult {
    pub fn theta_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.theta.0 + &self.theta.1) / rint(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn destabilizing(&self) -> bool {
        self.margin.is_positive()
    }
}

fn theta_enclosure(margin: &Rational, n: &Rational) -> (Rational, Rational) {
    if margin.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let (lo, hi) = sqrt_enclosure(n, 64);
    let a = -margin / &lo;
    let b = -margin / &hi;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Search over flag pairs from the pools with integer weight gaps.
pub fn theta_minimize(v: &TensorSubspace, pool: &CandidatePool, cfg: SearchConfig) -> Result<ThetaResult> {
    let (a, b) = v.shape();
    let right = oriented(v, Side::Right)?;
    let lf = flags_from_pool(&default_pool(v, &pool.left, cfg.seed), cfg.flags_per_side);
    let rf = flags_from_pool(&default_pool(&right, &pool.right, cfg.seed ^ 0x9e37_79b9), cfg.flags_per_side);
    if lf.len() + rf.len() <= 2 {
        return Err(Error::Degenerate);
    }
    let flat = v.flat();
    let m = v.dim();

    let per_left: Vec<(Option<Candidate>, usize)> = lf
        .par_iter()
        .enumerate()
        .map(|(fi, fl)| {
            let fs = with_full(fl, a);
            let fdims: Vec<usize> = fs.iter().map(|s| s.nrows()).collect();
            let awv = weight_vectors(fs.len(), cfg.weight_max);
            let mut best: Option<Candidate> = None;
            let mut count = 0;
            for (gi, gl) in rf.iter().enumerate() {
                let gs = with_full(gl, b);
                let gdims: Vec<usize> = gs.iter().map(|s| s.nrows()).collect();
                let bwv = weight_vectors(gs.len(), cfg.weight_max);
                let mut ev = PairEval {
                    flat: &flat,
                    m,
                    fs: fs.clone(),
                    gs,
                    cache: HashMap::new(),
                };
                for aw in &awv {
                    let (ef, vf) = moments(&fdims, aw);
                    for bw in &bwv {
                        let (eg, vg) = moments(&gdims, bw);
                        let n = &vf + &vg;
                        if n.is_zero() {
                            continue;
                        }
                        count += 1;
                        let margin = ev.restricted(aw, bw) - &ef - &eg;
                        let better = match &best {
                            None => true,
                            Some(c) => score_cmp(&margin, &n, &c.margin, &c.norm_sq) == Ordering::Greater,
                        };
                        if better {
                            best = Some(Candidate {
                                fi,
                                gi,
                                aw: aw.clone(),
                                bw: bw.clone(),
                                margin,
                                norm_sq: n,
                            });
                        }
                    }
                }
            }
            (best, count)
        })
        .collect();

    let mut best: Option<Candidate> = None;
    let mut evaluated = 0;
    for (c, n) in per_left {
        evaluated += n;
        if let Some(c) = c {
            let better = match &best {
                None => true,
                Some(b) => score_cmp(&c.margin, &c.norm_sq, &b.margin, &b.norm_sq) == Ordering::Greater,
            };
            if better {
                best = Some(c);
            }
        }
    }
    let c = best.ok_or(Error::Degenerate)?;
    let f = RFiltration::new(a, with_full(&lf[c.fi], a), c.aw.clone())?;
    // right flags live in F coordinates already
    let g = RFiltration::new(b, with_full(&rf[c.gi], b), c.bw.clone())?;
    let restricted = restricted_expectation(v, &f, &g)?;
    let margin = &restricted - f.expectation() - g.expectation();
    if margin != c.margin {
        return Err(Error::Other("cached and direct restricted expectations disagree".into()));
    }
    Ok(ThetaResult {
        theta: theta_enclosure(&margin, &c.norm_sq),
        f,
        g,
        restricted,
        margin,
        norm_sq: c.norm_sq,
        evaluated,
        flags: (lf.len(), rf.len()),
    })
}

fn two_step(n: usize, sub: &QMatrix) -> Result<RFiltration> {
    RFiltration::new(n, vec![sub.clone(), QMatrix::identity(n)], vec![rint(1), rint(0)])
}

fn filtration_witness(v: &TensorSubspace, f: RFiltration, g: RFiltration) -> Result<GitWitness> {
    let restricted = restricted_expectation(v, &f, &g)?;
    let margin = &restricted - f.expectation() - g.expectation();
    Ok(GitWitness::Filtrations { f, g, restricted, margin })
}

/// `E[(F ⊗ G)|_V] <= E[F] + E[G]` for every pair of filtrations.
pub fn both_sided_check(v: &TensorSubspace, pool: &CandidatePool, cfg: SearchConfig) -> Result<SemistabilityVerdict> {
    let (a, b) = v.shape();
    let verdict = |status, witness, evidence: String| SemistabilityVerdict {
        side: Side::Both,
        status,
        witness,
        evidence,
    };

    if v.dim() == 1 {
        let rho = v.generators[0].rank();
        if rho == a && rho == b {
            return Ok(verdict(GitStatus::SemistableCertified, None, format!("line of tensorial rank {rho} = {a} = {b}")));
        }
        let m = &v.generators[0];
        let (f, g) = if rho < a {
            (two_step(a, &col_space(m))?, RFiltration::trivial(b))
        } else {
            (RFiltration::trivial(a), two_step(b, &m.row_space())?)
        };
        let w = filtration_witness(v, f, g)?;
        return Ok(verdict(GitStatus::Unstable, Some(w), format!("line of tensorial rank {rho}, shape {a}x{b}")));
    }

    for side in [Side::Left, Side::Right] {
        let one = left_right_check(v, side, pool, cfg.seed)?;
        if one.status != GitStatus::Unstable {
            continue;
        }
        let w = match one.witness {
            Some(GitWitness::Subspace { basis, .. }) => {
                let (f, g) = if side == Side::Left {
                    (two_step(a, &basis)?, RFiltration::trivial(b))
                } else {
                    (RFiltration::trivial(a), two_step(b, &basis)?)
                };
                filtration_witness(v, f, g)?
            }
            other => other.ok_or(Error::Other("unstable verdict without witness".into()))?,
        };
        return Ok(verdict(GitStatus::Unstable, Some(w), format!("{side} unstable: {}", one.evidence)));
    }

    let t = theta_minimize(v, pool, cfg)?;
    let ev = format!(
        "{}x{} flags, {} weighted pairs, best theta ~ {:.6}",
        t.flags.0,
        t.flags.1,
        t.evaluated,
        t.theta_f64()
    );
    if t.destabilizing() {
        let w = GitWitness::Filtrations {
            f: t.f,
            g: t.g,
            restricted: t.restricted,
            margin: t.margin,
        };
        Ok(verdict(GitStatus::Unstable, Some(w), ev))
    } else {
        Ok(verdict(GitStatus::LikelySemistable, None, ev))
    }
}

/// Re-verify a witness from scratch; `true` iff it proves instability.
pub fn verify_witness(v: &TensorSubspace, side: Side, w: &GitWitness) -> Result<bool> {
    match w {
        GitWitness::Subspace { basis, .. } => {
            let o = oriented(v, side)?;
            let (a, _) = o.shape();
            Ok(meet_dim(&o, basis) * a > basis.nrows() * o.dim())
        }
        GitWitness::AlgebraicLine { a, b, locus, rank } => {
            let o = oriented(v, side)?;
            let (n, _) = o.shape();
            let in_v = |x: &QMatrix| o.flat().vstack(&QMatrix::row_vector(x.entries())).rank() == o.dim();
            Ok(in_v(a)
                && in_v(b)
                && locus.degree().is_some_and(|d| d > 0)
                && rank_drop_poly(a, b, *rank).divrem(locus).1.is_zero()
                && 2 * rank < n
                && o.dim() == 2)
        }
        GitWitness::Filtrations { f, g, .. } => Ok(restricted_margin(v, f, g)?.is_positive()),
    }
}

/// `E[(F ⊗ G)|_V] <= E[F] + E[G] + margin_1 (<F_1, F> + <G_1, G>) / N_1` with `(F_1, G_1)` centered.
pub fn totaro_check(v: &TensorSubspace, t: &ThetaResult, f: &RFiltration, g: &RFiltration) -> Result<CheckReport> {
    let f1 = t.f.translate(&-t.f.expectation());
    let g1 = t.g.translate(&-t.g.expectation());
    let lhs = restricted_expectation(v, f, g)?;
    let pairing = f1.inner(f)? + g1.inner(g)?;
    let rhs = f.expectation() + g.expectation() + &t.margin * pairing / &t.norm_sq;
    let c = CheckReport::le(
        "restricted expectation vs minimizer",
        Enclosure::point(ExactReal::from_rational(lhs)),
        Enclosure::point(ExactReal::from_rational(rhs)),
        format!("F = {f}; G = {g}"),
    );
    Ok(match c.status {
        Status::Pass => c.with_status(Status::Heuristic),
        _ => {
            let mut c = c.with_status(Status::Inconclusive);
            c.witness = format!("minimizer not optimal; {}", c.witness);
            c
        }
    })
}

fn q(n: usize, d: usize) -> Enclosure {
    Enclosure::point(ExactReal::from_rational(Rational::new(n.into(), d.into())))
}

/// Necessary conditions for the stability assumed on `assumed`, evaluated with an attained tensorial rank.
pub fn constraint_checks(v: &TensorSubspace, assumed: Side, seed: u64) -> Result<Vec<CheckReport>> {
    let (a, b) = v.shape();
    let m = v.dim();
    let profile = rho_profile(v, seed)?;
    // some line of V has rank at most hi, and each constraint is monotone in the rank
    let rho = profile.per_index[0].1;
    let wit = format!("rho_1 <= {rho}, dim V = {m}, shape {a}x{b}");
    let mut out = Vec::new();
    // the strict inequalities come from the line's image being a proper subspace
    let applies = |c: CheckReport, proper: bool| {
        if proper {
            c
        } else {
            let mut c = c.with_status(Status::Inconclusive);
            c.witness = format!("not applicable, line image is the whole space; {}", c.witness);
            c
        }
    };
    let left = |out: &mut Vec<CheckReport>| {
        out.push(applies(CheckReport::lt("left stable line rank", q(1, m), q(rho, a), wit.clone()), rho < a));
        out.push(CheckReport::eq(
            "left image fullness",
            ExactReal::from_rational(rint(left_image(v).nrows() as i64)),
            ExactReal::from_rational(rint(a as i64)),
            wit.clone(),
        ));
    };
    let right = |out: &mut Vec<CheckReport>| -> Result<()> {
        let r = oriented(v, Side::Right)?;
        out.push(applies(CheckReport::lt("right stable line rank", q(1, m), q(rho, b), wit.clone()), rho < b));
        out.push(CheckReport::eq(
            "right image fullness",
            ExactReal::from_rational(rint(left_image(&r).nrows() as i64)),
            ExactReal::from_rational(rint(b as i64)),
            wit.clone(),
        ));
        Ok(())
    };
    match assumed {
        Side::Left => left(&mut out),
        Side::Right => right(&mut out)?,
        Side::Both => {
            out.push(applies(
                CheckReport::lt("both-sided stable line rank", q(2, m), q(rho * b + rho * a, a * b), wit.clone()),
                rho < a && rho < b,
            ));
            left(&mut out);
            right(&mut out)?;
        }
    }
    Ok(out)
}

/// `μ̂(V) <= μ̂(E) + μ̂(F)` for small both-sided semistable `V`; nothing is claimed otherwise.
pub fn check_semistable_slope(v: &TensorSubspace, pool: &CandidatePool, cfg: SearchConfig) -> Result<CheckReport> {
    let lhs = Enclosure::point(ExactReal::from_log(v.slope()?));
    let rhs = Enclosure::point(ExactReal::from_log(v.left.slope() + v.right.slope()));
    let name = "semistable slope vs factors";
    let verdict = both_sided_check(v, pool, cfg)?;
    if verdict.status == GitStatus::Unstable || v.dim() > 3 {
        let c = CheckReport::le(name, lhs, rhs, format!("not applicable: {}", verdict.status));
        return Ok(c.with_status(Status::Inconclusive));
    }
    let c = CheckReport::le(name, lhs, rhs, verdict.evidence.clone());
    if c.status != Status::Fail {
        return Ok(c);
    }
    let deeper = both_sided_check(v, pool, cfg.deeper())?;
    if deeper.status == GitStatus::Unstable {
        let mut c = c.with_status(Status::Inconclusive);
        c.witness = format!("destabilized by deeper search: {}", deeper.evidence);
        return Ok(c);
    }
    Ok(c)
}
