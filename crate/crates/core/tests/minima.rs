use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use slopelab::exact::{rat, rint, LogRational, QMatrix};
use slopelab::minima::{canonical_polygon_points, max_slope, successive_minima_sq, Budget};
use slopelab::{Lattice, Mode};

fn int_gram(b: &[i64], r: usize) -> Vec<Vec<i128>> {
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| (b[i * r + k] * b[j * r + k]) as i128).sum()).collect())
        .collect()
}

fn form(g: &[Vec<i128>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += g[i][j] * x[i] as i128 * y[j] as i128;
        }
    }
    s
}

/// Every lattice vector of squared norm at most `r2`, from a box containing the ellipsoid.
fn vectors_within(l: &Lattice, g: &[Vec<i128>], r2: f64) -> Vec<Vec<i64>> {
    let n = g.len();
    let inv = l.gram().inverse().unwrap().to_f64_rows();
    let bound: Vec<i64> = (0..n).map(|j| (r2 * inv[j][j]).sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut x = bound.iter().map(|b| -b).collect::<Vec<_>>();
    loop {
        if x.iter().any(|&c| c != 0) && (form(g, &x, &x) as f64) <= r2 * (1.0 + 1e-9) + 1e-9 {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= bound[i] {
                break;
            }
            x[i] = -bound[i];
            i += 1;
        }
    }
}

fn gcd_all(xs: impl IntoIterator<Item = i128>) -> i128 {
    xs.into_iter().fold(0i128, |a, b| a.gcd(&b))
}

/// Smallest covolume² of a saturated rank-k sublattice (k = 1, 2) among spans of the candidates, as (num, den).
fn min_det(g: &[Vec<i128>], cands: &[Vec<i64>], k: usize) -> Option<(i128, i128)> {
    let mut best: Option<(i128, i128)> = None;
    let mut take = |num: i128, den: i128| {
        if best.is_none_or(|(bn, bd)| num * bd < bn * den) {
            best = Some((num, den));
        }
    };
    match k {
        1 => {
            for v in cands {
                let c = gcd_all(v.iter().map(|&x| x as i128));
                take(form(g, v, v), c * c);
            }
        }
        2 => {
            let n = g.len();
            for (i, u) in cands.iter().enumerate() {
                for w in &cands[i + 1..] {
                    let minors: Vec<i128> = (0..n)
                        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                        .map(|(a, b)| u[a] as i128 * w[b] as i128 - u[b] as i128 * w[a] as i128)
                        .collect();
                    let idx = gcd_all(minors);
                    if idx == 0 {
                        continue;
                    }
                    let (a, b, c) = (form(g, u, u), form(g, u, w), form(g, w, w));
                    take(a * c - b * b, idx * idx);
                }
            }
        }
        _ => unreachable!(),
    }
    best
}

fn basis(max_rank: usize) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (2..=max_rank).prop_flat_map(|r| {
        proptest::collection::vec(-2i64..=2, r * r)
            .prop_filter("singular", move |b| QMatrix::from_fn(r, r, |i, j| rint(b[i * r + j])).det() != rint(0))
            .prop_map(move |b| (r, b))
    })
}

fn lattice_of(r: usize, b: &[i64]) -> Lattice {
    let m = QMatrix::from_fn(r, r, |i, j| rint(b[i * r + j]));
    Lattice::new(m.mul(&m.transpose())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // P(k) for k < r against an exhaustive search over a provably large enough box
    #[test]
    fn polygon_matches_brute_force((r, b) in basis(3)) {
        let l = lattice_of(r, &b);
        let g = int_gram(&b, r);
        let p = canonical_polygon_points(&l, Budget::default()).unwrap();
        prop_assume!(p.mode() == Mode::Exact);
        let (mins, _) = successive_minima_sq(&l);
        let lam1 = mins[0].to_f64().unwrap();
        for k in 1..r.min(3) {
            // covolume² of the claimed optimum; a reduced basis of any better sublattice lies in this ball
            let claimed = (-p.value(k).mul_int(2)).to_f64().exp();
            let radius = 2f64.powi((k * (k - 1) / 2) as i32) * claimed / lam1.powi(k as i32 - 1);
            let cands = vectors_within(&l, &g, radius);
            let (num, den) = min_det(&g, &cands, k).unwrap();
            let want = LogRational::half_log(&rat(den as i64, num as i64)).unwrap();
            prop_assert_eq!(p.value(k), want, "k = {}", k);
        }
        prop_assert_eq!(p.value(r), l.ndeg());
    }

    #[test]
    fn successive_minima_match_greedy_search((r, b) in basis(3)) {
        let l = lattice_of(r, &b);
        let g = int_gram(&b, r);
        let (mins, vecs) = successive_minima_sq(&l);
        let mut cands = vectors_within(&l, &g, mins[r - 1].to_f64().unwrap());
        cands.sort_by_key(|v| form(&g, v, v));
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        let mut norms = Vec::new();
        for v in cands {
            let mut rows = chosen.clone();
            rows.push(v.clone());
            let m = QMatrix::from_fn(rows.len(), r, |i, j| rint(rows[i][j]));
            if m.rank() == rows.len() {
                norms.push(form(&g, &v, &v));
                chosen.push(v);
            }
            if chosen.len() == r {
                break;
            }
        }
        prop_assert_eq!(norms.len(), r);
        for i in 0..r {
            prop_assert_eq!(mins[i].clone(), rint(norms[i] as i64));
            prop_assert_eq!(rint(form(&g, &vecs[i], &vecs[i]) as i64), mins[i].clone());
        }
    }

    #[test]
    fn max_slope_is_the_steepest_polygon_slope((r, b) in basis(3)) {
        let l = lattice_of(r, &b);
        let c = max_slope(&l, Budget::default()).unwrap();
        prop_assume!(c.mode == Mode::Exact);
        prop_assert_eq!(c.witness.slope(), c.value.clone());
        let p = canonical_polygon_points(&l, Budget::default()).unwrap();
        for k in 1..=r {
            prop_assert!(p.value(k).div_int(k as u64) <= c.value);
        }
        prop_assert!(l.slope() <= c.value);
    }
}

#[test]
fn a_n_polygons_are_straight() {
    for n in 1..=4 {
        let l = Lattice::a_n(n);
        let p = canonical_polygon_points(&l, Budget::default()).unwrap();
        assert_eq!(p.mode(), Mode::Exact);
        assert_eq!(p.max_slope(), l.slope());
    }
}

#[test]
fn diagonal_polygon() {
    // Z(1) ⊕ Z(4) ⊕ Z(9): best lines and planes are the obvious coordinate ones
    let l = Lattice::diagonal(&[1, 4, 9]).unwrap();
    let p = canonical_polygon_points(&l, Budget::default()).unwrap();
    assert_eq!(p.value(1), LogRational::zero());
    assert_eq!(p.value(2), -LogRational::half_log(&rint(4)).unwrap());
    assert_eq!(p.value(3), -LogRational::half_log(&rint(36)).unwrap());
}
