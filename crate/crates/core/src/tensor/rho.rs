//! Successive tensorial ranks `ρ_i(V) = min{k : dim(V ∩ D_k) >= i}`, with `D_k` the matrices of rank at most `k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TensorSubspace;
use crate::error::Result;
use crate::exact::poly::Poly;
use crate::exact::{rint, QMatrix, Rational};
use crate::lattice::k_subsets;

const GRID_CAP: usize = 200_000;
const RANDOM_POINTS: usize = 24;
const SLICES: usize = 12;

/// Per-index enclosures `lo <= ρ_i <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RankProfile {
    pub per_index: Vec<(usize, usize)>,
    pub certified: Vec<bool>,
}

impl RankProfile {
    pub fn lower(&self) -> Vec<usize> {
        self.per_index.iter().map(|p| p.0).collect()
    }

    pub fn upper(&self) -> Vec<usize> {
        self.per_index.iter().map(|p| p.1).collect()
    }

    pub fn is_certified(&self) -> bool {
        self.certified.iter().all(|&c| c)
    }
}

fn combo(gens: &[QMatrix], t: &[Rational]) -> QMatrix {
    let mut m = QMatrix::zeros(gens[0].nrows(), gens[0].ncols());
    for (c, g) in t.iter().zip(gens) {
        if *c != rint(0) {
            m = m.add(&g.scale(c));
        }
    }
    m
}

fn random_point(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| rint(rng.gen_range(-50..=50))).collect()
}

/// Rank over `Q(t)` of `Σ t_i M_i`; the flag says whether the value is proven (otherwise it is a lower bound).
pub fn generic_rank(gens: &[QMatrix], seed: u64) -> (usize, bool) {
    let n = gens[0].nrows().min(gens[0].ncols());
    let m = gens.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = gens.iter().map(|g| g.rank()).max().unwrap_or(0);
    for _ in 0..RANDOM_POINTS {
        if best == n {
            return (n, true);
        }
        best = best.max(combo(gens, &random_point(&mut rng, m)).rank());
    }
    'grid: loop {
        if best == n {
            return (n, true);
        }
        // every (best+1)-minor is homogeneous of degree best+1, so vanishing on {0..=best+1}^m is vanishing everywhere
        let side = best + 2;
        let Some(total) = side.checked_pow(m as u32).filter(|&t| t <= GRID_CAP) else {
            return (best, false);
        };
        let mut t = vec![0usize; m];
        for _ in 0..total {
            let p: Vec<Rational> = t.iter().map(|&x| rint(x as i64)).collect();
            let r = combo(gens, &p).rank();
            if r > best {
                best = r;
                continue 'grid;
            }
            for d in t.iter_mut() {
                *d += 1;
                if *d < side {
                    break;
                }
                *d = 0;
            }
        }
        return (best, true);
    }
}

/// Univariate `det(t A + B)` restricted to rows `rs` and columns `cs`.
fn minor_poly(a: &QMatrix, b: &QMatrix, rs: &[usize], cs: &[usize]) -> Poly {
    let k = rs.len();
    let xs: Vec<Rational> = (0..=k).map(|i| rint(i as i64)).collect();
    let sa = a.submatrix(rs, cs);
    let sb = b.submatrix(rs, cs);
    let ys: Vec<Rational> = xs.iter().map(|x| sa.scale(x).add(&sb).det()).collect();
    Poly::interpolate(&xs, &ys)
}

/// gcd of the (k+1)-minors of `t A + B`: its roots are the `t` where the rank drops to `k` or less.
/// The zero polynomial means the whole pencil has rank at most `k`.
pub fn rank_drop_poly(a: &QMatrix, b: &QMatrix, k: usize) -> Poly {
    let mut g = Poly::zero();
    for rs in k_subsets(a.nrows(), k + 1) {
        for cs in k_subsets(a.ncols(), k + 1) {
            let p = minor_poly(a, b, &rs, &cs);
            if p.is_zero() {
                continue;
            }
            g = if g.is_zero() { p } else { g.gcd(&p) };
            if g.degree() == Some(0) {
                return g;
            }
        }
    }
    g
}

/// Least rank of a non-zero element of the pencil spanned by `a` and `b`, over the algebraic closure.
pub fn pencil_min_rank(a: &QMatrix, b: &QMatrix) -> usize {
    let n = a.nrows().min(a.ncols());
    let ra = a.rank();
    for k in 1..n {
        // the point at infinity is `a` itself
        if ra <= k {
            return k;
        }
        let g = rank_drop_poly(a, b, k);
        if g.is_zero() || g.degree().unwrap_or(0) > 0 {
            return k;
        }
    }
    n
}

/// Greedy linear subspace of `V` inside `D_k` grown from `start`; its dimension bounds `dim(V ∩ D_k)` below.
fn linear_witness(cands: &[Vec<Rational>], v: &TensorSubspace, k: usize, start: usize, seed: u64) -> usize {
    let mut chosen: Vec<Vec<Rational>> = vec![cands[start].clone()];
    for (i, c) in cands.iter().enumerate() {
        if i == start {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(c.clone());
        let mat = QMatrix::from_rows(trial.clone()).expect("same length");
        if mat.rank() < trial.len() {
            continue;
        }
        let elems: Vec<QMatrix> = trial.iter().map(|t| v.element(t)).collect();
        let (g, cert) = generic_rank(&elems, seed);
        if cert && g <= k {
            chosen = trial;
        }
    }
    chosen.len()
}

/// Enclosures of every `ρ_i(V)`. Lower bounds are always proven; upper bounds come from explicit witnesses.
pub fn rho_profile(v: &TensorSubspace, seed: u64) -> Result<RankProfile> {
    let (a, b) = v.shape();
    let m = v.dim();
    let n = a.min(b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, g_cert) = generic_rank(&v.generators, seed);

    let mut lo = vec![1usize; m + 1];
    let mut hi = vec![if g_cert { g } else { n }; m + 1];
    lo[m] = g;

    // D_k has dimension ab - (a-k)(b-k); its intersection with V has every component of dimension >= m - (a-k)(b-k)
    for i in 1..=m {
        let dk = |k: usize| a * b - (a - k) * (b - k);
        if let Some(k) = (1..=n).find(|&k| dk(k) >= i) {
            lo[i] = lo[i].max(k);
        }
        if let Some(k) = (1..=n).find(|&k| m as i64 - ((a - k) * (b - k)) as i64 >= i as i64) {
            hi[i] = hi[i].min(k);
        }
    }

    // candidates: generators, then random combinations
    let mut cands: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|j| rint(i64::from(i == j))).collect()).collect();
    for _ in 0..RANDOM_POINTS {
        let p: Vec<Rational> = (0..m).map(|_| rint(rng.gen_range(-3..=3))).collect();
        if p.iter().any(|x| *x != rint(0)) {
            cands.push(p);
        }
    }
    let ranks: Vec<usize> = cands.iter().map(|c| v.element(c).rank()).collect();
    hi[1] = hi[1].min(*ranks.iter().min().expect("non-empty"));

    if m == 1 {
        lo[1] = g;
        hi[1] = g;
    } else if m == 2 {
        let r1 = pencil_min_rank(&v.generators[0], &v.generators[1]);
        lo[1] = r1;
        hi[1] = r1;
    } else {
        // every plane W ⊂ V gives ρ_1(V) <= ρ_1(W), and ρ_{m-1}(V) >= ρ_1(W) since W meets V ∩ D_k when that has dimension m-1
        let mut best_lo = 1;
        for s in 0..SLICES {
            let (x, y) = if s < m - 1 {
                (cands[s].clone(), cands[s + 1].clone())
            } else {
                (random_point(&mut rng, m), random_point(&mut rng, m))
            };
            if QMatrix::from_rows(vec![x.clone(), y.clone()]).expect("same length").rank() < 2 {
                continue;
            }
            let r1 = pencil_min_rank(&v.element(&x), &v.element(&y));
            hi[1] = hi[1].min(r1);
            best_lo = best_lo.max(r1);
        }
        lo[m - 1] = lo[m - 1].max(best_lo);
    }

    // linear subspaces of low rank found among the candidates
    let mut done = vec![false; n + 1];
    for (idx, &k) in ranks.iter().enumerate() {
        if k >= g || done[k] {
            continue;
        }
        done[k] = true;
        let d = linear_witness(&cands, v, k, idx, seed);
        for h in hi.iter_mut().take(d + 1).skip(1) {
            *h = (*h).min(k);
        }
    }

    for i in 2..=m {
        lo[i] = lo[i].max(lo[i - 1]);
    }
    for i in (1..m).rev() {
        hi[i] = hi[i].min(hi[i + 1]);
    }
    let per_index: Vec<(usize, usize)> = (1..=m).map(|i| (lo[i], hi[i])).collect();
    debug_assert!(per_index.iter().all(|(l, h)| l <= h), "{per_index:?}");
    Ok(RankProfile {
        certified: per_index.iter().map(|(l, h)| l == h).collect(),
        per_index,
    })
}
