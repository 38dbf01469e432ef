use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use slopelab::algpoints::{
    a_n_ambient, alpha, best_iq_line, check_an_alpha_bound, eisenstein_a2_line, iq_line_degree, IQInt, IQRing, IQVector,
};
use slopelab::exact::{rint, Int, LogRational, QMatrix};
use slopelab::minima::{max_slope, Budget};
use slopelab::{Lattice, Mode};

fn ring() -> impl Strategy<Value = IQRing> {
    prop_oneof![Just(IQRing::Gauss), Just(IQRing::Eisenstein), Just(IQRing::Sqrt2)]
}

fn vector(r: IQRing, n: usize, h: i64) -> impl Strategy<Value = IQVector> {
    proptest::collection::vec((-h..=h, -h..=h), n).prop_map(move |c| IQVector::new(r, &c))
}

fn theta(r: IQRing) -> (f64, f64) {
    match r {
        IQRing::Gauss => (0.0, 1.0),
        IQRing::Eisenstein => (-0.5, 3f64.sqrt() / 2.0),
        IQRing::Sqrt2 => (0.0, 2f64.sqrt()),
    }
}

/// The Z-span of `v` and `θv` inside `Z^{2n}` is saturated iff its 2x2 minors are coprime.
fn z_saturated(v: &IQVector) -> bool {
    let tv = v.scale(&IQInt::new(0, 1));
    let flat = |x: &IQVector| -> Vec<Int> { x.coords.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect() };
    let (p, q) = (flat(v), flat(&tv));
    let mut g = Int::zero();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            g = g.gcd(&(&p[i] * &q[j] - &p[j] * &q[i]));
        }
    }
    g == Int::from(1)
}

fn float_norm(l: &Lattice, v: &IQVector) -> f64 {
    let (tr, ti) = theta(v.ring);
    let z: Vec<(f64, f64)> = v
        .coords
        .iter()
        .map(|c| {
            let (a, b) = (c.a.to_f64().unwrap(), c.b.to_f64().unwrap());
            (a + b * tr, b * ti)
        })
        .collect();
    let g = l.gram().to_f64_rows();
    let mut s = 0.0;
    for i in 0..z.len() {
        for j in 0..z.len() {
            s += g[i][j] * (z[i].0 * z[j].0 + z[i].1 * z[j].1);
        }
    }
    s
}

#[test]
fn a2_gap() {
    let a2 = Lattice::a_n(2);
    let mx = max_slope(&a2, Budget::default()).unwrap();
    assert_eq!(mx.mode, Mode::Exact);
    assert_eq!(mx.value, -LogRational::log(&rint(3)).unwrap().div_int(4));
    let (_, best) = best_iq_line(&a2, IQRing::Eisenstein, 2).unwrap();
    assert_eq!(best, -LogRational::half_log(&rint(2)).unwrap());
    assert_eq!(&mx.value - &best, LogRational::log(&slopelab::exact::rat(4, 3)).unwrap().div_int(4));
    assert_eq!(iq_line_degree(&a2, &eisenstein_a2_line()).unwrap(), -LogRational::half_log(&rint(3)).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn primitive_part_is_saturated(v in (1usize..=3).prop_flat_map(|n| ring().prop_flat_map(move |r| vector(r, n, 6)))) {
        prop_assume!(!v.is_zero());
        let p = v.primitive().unwrap();
        prop_assert!(z_saturated(&p));
        let l = Lattice::standard(v.len());
        let h = p.hermitian_norm_sq(l.gram());
        let f = float_norm(&l, &p);
        prop_assert!((h.to_f64().unwrap() - f).abs() < 1e-9 * f.max(1.0));
    }

    #[test]
    fn below_max_slope(v in ring().prop_flat_map(|r| vector(r, 3, 3)), b in proptest::collection::vec(-2i64..=2, 9)) {
        prop_assume!(!v.is_zero());
        let m = QMatrix::from_fn(3, 3, |i, j| rint(b[i * 3 + j]));
        prop_assume!(m.det() != rint(0));
        let l = Lattice::new(m.mul(&m.transpose())).unwrap();
        let mx = max_slope(&l, Budget::default()).unwrap();
        prop_assume!(mx.mode == Mode::Exact);
        prop_assert!(iq_line_degree(&l, &v).unwrap() <= mx.value);
    }

    #[test]
    fn eisenstein_lines_in_a2(v in vector(IQRing::Eisenstein, 2, 5)) {
        prop_assume!(!v.is_zero());
        let d = iq_line_degree(&Lattice::a_n(2), &v).unwrap();
        match alpha(&v) {
            3 => prop_assert!(d <= -LogRational::half_log(&rint(3)).unwrap()),
            2 => {
                // one of the three integral lines X_i = 0
                prop_assert_eq!(d, -LogRational::half_log(&rint(2)).unwrap());
                let x = a_n_ambient(&v.primitive().unwrap());
                prop_assert!(x.iter().filter(|c| !c.is_zero()).all(|c| IQRing::Eisenstein.is_unit(c)));
            }
            k => prop_assert!(false, "alpha = {}", k),
        }
    }

    #[test]
    fn alpha_bound(n in 1usize..=4, seed in proptest::collection::vec((-3i64..=3, -3i64..=3), 4), r in ring()) {
        let v = IQVector::new(r, &seed[..n]);
        prop_assume!(!v.is_zero());
        prop_assert!(check_an_alpha_bound(n, &v).unwrap().passed());
    }
}
