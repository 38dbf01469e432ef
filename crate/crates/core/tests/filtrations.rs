use proptest::prelude::*;
use slopelab::exact::{rint, QMatrix, Rational};
use slopelab::filtration::common_compatible_basis;
use slopelab::RFiltration;

fn r(n: usize) -> Rational {
    rint(n as i64)
}

fn filtration(dim: usize) -> impl Strategy<Value = RFiltration> {
    (
        proptest::collection::vec(-2i64..=2, dim * dim),
        proptest::collection::vec(-3i64..=3, dim),
    )
        .prop_filter_map("singular basis", move |(b, w)| {
            let m = QMatrix::from_fn(dim, dim, |i, j| rint(b[i * dim + j]));
            let w: Vec<Rational> = w.into_iter().map(rint).collect();
            RFiltration::from_weighted_basis(&m, &w).ok()
        })
}

fn pair() -> impl Strategy<Value = (RFiltration, RFiltration)> {
    (1usize..=3).prop_flat_map(|d| (filtration(d), filtration(d)))
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(-3i64..=3, dim).prop_map(|v| v.into_iter().map(rint).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_expectation_adds((f, g) in pair(), h in (1usize..=2).prop_flat_map(filtration)) {
        prop_assert_eq!(f.tensor(&h).expectation(), f.expectation() + h.expectation());
        prop_assert_eq!(f.tensor(&g).dim(), f.dim() * g.dim());
    }

    #[test]
    fn exterior_expectation((f, _) in pair(), n in 1usize..=3) {
        prop_assume!(n <= f.dim());
        prop_assert_eq!(f.exterior(n).unwrap().expectation(), r(n) * f.expectation());
    }

    #[test]
    fn dual_negates((f, _) in pair()) {
        let d = f.dual();
        prop_assert_eq!(d.expectation(), -f.expectation());
        prop_assert_eq!(d.norm_sq(), f.norm_sq());
        prop_assert_eq!(d.dual(), f);
    }

    #[test]
    fn translation_and_dilation((f, _) in pair(), a in -3i64..=3, e in 1i64..=4) {
        let a = rint(a);
        let t = f.translate(&a);
        prop_assert_eq!(t.expectation(), f.expectation() + &a);
        prop_assert_eq!(t.norm_sq(), f.norm_sq() + rint(2) * &a * f.expectation() + &a * &a);
        let e = Rational::new(e.into(), 2.into());
        let d = f.dilate(&e).unwrap();
        prop_assert_eq!(d.expectation(), f.expectation() * &e);
        prop_assert_eq!(d.norm_sq(), f.norm_sq() * &e * &e);
    }

    #[test]
    fn pairing((f, g) in pair()) {
        prop_assert_eq!(f.inner(&f).unwrap(), f.norm_sq());
        let fg = f.inner(&g).unwrap();
        prop_assert_eq!(&fg, &g.inner(&f).unwrap());
        prop_assert!(&fg * &fg <= f.norm_sq() * g.norm_sq());
        let b = common_compatible_basis(&f, &g).unwrap();
        prop_assert_eq!(b.rank(), f.dim());
        // both flags are spanned by basis vectors
        for s in f.flag().iter().chain(g.flag()) {
            let inside: Vec<usize> = (0..b.nrows())
                .filter(|&i| s.vstack(&b.select_rows(&[i])).rank() == s.nrows())
                .collect();
            prop_assert_eq!(inside.len(), s.nrows());
        }
        let c = RFiltration::trivial(f.dim()).translate(&rint(1));
        prop_assert_eq!(f.inner(&c).unwrap(), f.expectation());
    }

    #[test]
    fn ultrametric(f in (1usize..=3).prop_flat_map(filtration), seed in any::<u64>()) {
        let d = f.dim();
        let mk = |s: u64| -> Vec<Rational> {
            (0..d).map(|i| rint(((s >> (4 * i)) & 7) as i64 - 3)).collect()
        };
        let x = mk(seed);
        let y = mk(seed >> 16);
        let s: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        if let (Some(lx), Some(ly)) = (f.lambda(&x), f.lambda(&y)) {
            if let Some(ls) = f.lambda(&s) {
                prop_assert!(ls >= lx.min(ly));
            }
        }
        let c = rint(3);
        let cx: Vec<Rational> = x.iter().map(|a| a * &c).collect();
        prop_assert_eq!(f.lambda(&cx), f.lambda(&x));
    }

    #[test]
    fn any_basis_is_below_expectation(f in (1usize..=3).prop_flat_map(filtration), b in proptest::collection::vec(-2i64..=2, 9)) {
        let d = f.dim();
        let m = QMatrix::from_fn(d, d, |i, j| rint(b[i * 3 + j]));
        prop_assume!(m.rank() == d);
        let s: Rational = m.rows_iter().map(|v| f.lambda(v).unwrap()).sum();
        prop_assert!(s / r(d) <= f.expectation());
        let (cb, _) = f.compatible_basis();
        let s: Rational = cb.rows_iter().map(|v| f.lambda(v).unwrap()).sum();
        prop_assert_eq!(s / r(d), f.expectation());
    }

    #[test]
    fn direct_sum_average((f, _) in pair(), (g, _) in pair()) {
        let s = f.direct_sum(&g);
        let lhs = s.expectation() * r(s.dim());
        prop_assert_eq!(lhs, f.expectation() * r(f.dim()) + g.expectation() * r(g.dim()));
    }

    #[test]
    fn restriction_and_quotient_add_up(f in (2usize..=3).prop_flat_map(filtration), v in vector(3)) {
        let d = f.dim();
        let v: Vec<Rational> = v.into_iter().take(d).collect();
        prop_assume!(v.iter().any(|x| *x != rint(0)));
        let vm = QMatrix::row_vector(&v);
        let sub = f.restrict(&vm).unwrap();
        let quo = f.quotient(&vm).unwrap();
        prop_assert_eq!(sub.expectation(), f.lambda(&v).unwrap());
        prop_assert_eq!(sub.expectation() + quo.expectation() * r(d - 1), f.expectation() * r(d));
    }

    #[test]
    fn refinement_identities(f in (1usize..=3).prop_flat_map(filtration), shifts in proptest::collection::vec(-2i64..=2, 3)) {
        let ranks = f.jump_ranks();
        let trivial: Vec<RFiltration> = ranks.iter().map(|&k| RFiltration::trivial(k)).collect();
        prop_assert_eq!(f.refine(&trivial).unwrap(), RFiltration::trivial(f.dim()));
        let per: Vec<RFiltration> = ranks
            .iter()
            .zip(&shifts)
            .map(|(&k, &s)| RFiltration::constant(k, rint(s)))
            .collect();
        let g = f.refine(&per).unwrap();
        let mut want = Rational::from_integer(0.into());
        for ((k, a), s) in ranks.iter().zip(f.weights()).zip(&shifts) {
            want += r(*k) * a * rint(*s);
        }
        prop_assert_eq!(f.inner(&g).unwrap(), want / r(f.dim()));
    }
}
