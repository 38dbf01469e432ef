use proptest::prelude::*;
use slopelab::exact::{rint, LogRational, QMatrix, Rational};
use slopelab::hn::{bogomolov_check, hn_data, hn_filtration_of, is_semistable, Semistability};
use slopelab::minima::Budget;
use slopelab::{Lattice, Mode, RFiltration, Sublattice};

fn lattice(max_rank: usize) -> impl Strategy<Value = Lattice> {
    (1..=max_rank).prop_flat_map(|r| {
        proptest::collection::vec(-3i64..=3, r * r).prop_filter_map("singular", move |b| {
            let m = QMatrix::from_fn(r, r, |i, j| rint(b[i * r + j]));
            if m.det() == rint(0) {
                return None;
            }
            Lattice::new(m.mul(&m.transpose())).ok()
        })
    })
}

fn subquotient(big: &Sublattice, small: &Sublattice) -> Lattice {
    let coords: Vec<Vec<Rational>> = small
        .basis()
        .rows_iter()
        .map(|v| big.basis().solve_left(v).expect("nested flag"))
        .collect();
    let inner = big.induced();
    Sublattice::saturated(&inner, &QMatrix::from_rows(coords).unwrap())
        .unwrap()
        .quotient()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polygon_invariants(l in lattice(4)) {
        let hn = hn_data(&l, Budget::default()).unwrap();
        prop_assume!(hn.mode == Mode::Exact);
        prop_assert_eq!(LogRational::sum(&hn.slopes), l.ndeg());
        prop_assert!(hn.slopes.windows(2).all(|w| w[0] >= w[1]));
        let steps = hn.step_slopes();
        prop_assert!(steps.windows(2).all(|w| w[0] > w[1]));
        for (i, s) in hn.flag.iter().enumerate() {
            prop_assert!(s.is_saturated());
            prop_assert_eq!(s.rank(), hn.polygon[i + 1].0);
            prop_assert_eq!(s.ndeg(), hn.polygon[i + 1].1.clone());
            if i > 0 {
                prop_assert!(s.contains_span_of(&hn.flag[i - 1]));
                let q = subquotient(s, &hn.flag[i - 1]);
                prop_assert_eq!(q.slope(), steps[i].clone());
                prop_assert_eq!(is_semistable(&q, Budget::default()).unwrap().verdict(), Some(true));
            }
        }
        prop_assert_eq!(is_semistable(&hn.flag[0].induced(), Budget::default()).unwrap().verdict(), Some(true));
        let f = hn_filtration_of(&l, &hn).unwrap();
        prop_assert_eq!(f.expectation(), l.slope());
    }

    #[test]
    fn transference(l in lattice(3)) {
        let a = hn_data(&l, Budget::default()).unwrap();
        let b = hn_data(&l.dual(), Budget::default()).unwrap();
        prop_assume!(a.mode == Mode::Exact && b.mode == Mode::Exact);
        let r = l.rank();
        for i in 0..r {
            prop_assert_eq!(b.slopes[i].clone(), -a.slopes[r - 1 - i].clone());
        }
    }

    #[test]
    fn semistability_agrees_with_polygon(l in lattice(3)) {
        let hn = hn_data(&l, Budget::default()).unwrap();
        prop_assume!(hn.mode == Mode::Exact);
        let v = is_semistable(&l, Budget::default()).unwrap();
        prop_assert_eq!(v.verdict(), Some(hn.is_trivial()));
        if let Semistability::Unstable { slope, .. } = v {
            prop_assert_eq!(&slope, hn.max_slope());
        }
    }

    #[test]
    fn bogomolov_both_ways(l in lattice(3), v in proptest::collection::vec(-2i64..=2, 3), w in 1i64..=4) {
        let r = l.rank();
        prop_assume!(r >= 2);
        let v: Vec<Rational> = v.into_iter().take(r).map(rint).collect();
        prop_assume!(v.iter().any(|x| *x != rint(0)));
        let f = RFiltration::new(r, vec![QMatrix::row_vector(&v), QMatrix::identity(r)], vec![rint(w), rint(0)]).unwrap();
        let c = bogomolov_check(&l, &f).unwrap();
        let verdict = is_semistable(&l, Budget::default()).unwrap().verdict();
        if verdict == Some(true) {
            prop_assert!(c.passed());
        }
        if !c.passed() {
            prop_assert_eq!(verdict, Some(false));
        }
    }
}

#[test]
fn hn_flag_of_destabilized_sum() {
    // A_2 ⊕ <4>: the A_2 part has slope -log(3)/4 > -log(2)
    let a = Lattice::a_n(2).direct_sum(&Lattice::diagonal(&[4]).unwrap());
    let hn = hn_data(&a, Budget::default()).unwrap();
    assert_eq!(hn.flag.len(), 2);
    assert_eq!(hn.flag[0].basis(), &QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]));
    let q = LogRational::log(&rint(3)).unwrap().div_int(4);
    let l2 = LogRational::log(&rint(2)).unwrap();
    assert_eq!(hn.slopes, vec![-q.clone(), -q, -l2]);
}
