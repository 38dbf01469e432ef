use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use slopelab_ffi::*;

fn text(buf: &[c_char]) -> String {
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { sl_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    text(&buf)
}

#[test]
fn a2_through_the_c_interface() {
    let gram = [2i64, -1, -1, 2];
    let mut l = ptr::null_mut();
    unsafe {
        assert_eq!(sl_lattice_new(gram.as_ptr(), 2, &mut l), SlStatus::Ok);
        let mut r = 0usize;
        assert_eq!(sl_lattice_rank(l, &mut r), SlStatus::Ok);
        assert_eq!(r, 2);

        let (mut x, mut need) = (0.0f64, 0usize);
        let mut buf = [0 as c_char; 64];
        assert_eq!(sl_lattice_ndeg(l, &mut x, buf.as_mut_ptr(), buf.len(), &mut need), SlStatus::Ok);
        assert!((x + 0.5 * 3f64.ln()).abs() < 1e-12);
        assert_eq!(text(&buf), "-1/2*log(3)");

        let mut exact: c_int = 0;
        assert_eq!(sl_lattice_max_slope(l, &mut x, &mut exact, buf.as_mut_ptr(), buf.len(), &mut need), SlStatus::Ok);
        assert_eq!(exact, 1);
        assert_eq!(text(&buf), "-1/4*log(3)");

        let mut ss: c_int = -2;
        assert_eq!(sl_lattice_is_semistable(l, &mut ss), SlStatus::Ok);
        assert_eq!(ss, 1);

        let (mut d, mut t) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sl_lattice_dual(l, &mut d), SlStatus::Ok);
        assert_eq!(sl_lattice_tensor(l, d, &mut t), SlStatus::Ok);
        assert_eq!(sl_lattice_rank(t, &mut r), SlStatus::Ok);
        assert_eq!(r, 4);
        assert_eq!(sl_lattice_ndeg(t, &mut x, ptr::null_mut(), 0, ptr::null_mut()), SlStatus::Ok);
        assert!(x.abs() < 1e-12);
        sl_lattice_free(t);
        sl_lattice_free(d);
        sl_lattice_free(l);
    }
}

#[test]
fn short_buffers_report_the_needed_size() {
    let gram = [2i64, -1, -1, 2];
    let mut l = ptr::null_mut();
    unsafe {
        sl_lattice_new(gram.as_ptr(), 2, &mut l);
        let mut x = 0.0;
        let mut need = 0usize;
        assert_eq!(sl_lattice_ndeg(l, &mut x, ptr::null_mut(), 0, &mut need), SlStatus::Ok);
        assert_eq!(need, "-1/2*log(3)".len() + 1);
        let mut small = [0 as c_char; 4];
        assert_eq!(sl_lattice_ndeg(l, &mut x, small.as_mut_ptr(), small.len(), &mut need), SlStatus::BufferTooSmall);
        assert_eq!(text(&small), "-1/");
        sl_lattice_free(l);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    let mut l = ptr::null_mut();
    unsafe {
        let bad = [1i64, 2, 2, 1];
        assert_eq!(sl_lattice_new(bad.as_ptr(), 2, &mut l), SlStatus::Degenerate);
        assert!(last_error().contains("positive definite"));
        assert!(l.is_null());

        assert_eq!(sl_lattice_new(ptr::null(), 2, &mut l), SlStatus::NullPointer);
        let mut r = 0usize;
        assert_eq!(sl_lattice_rank(ptr::null(), &mut r), SlStatus::NullPointer);

        let json = CString::new(r#"{"gram": [[2, -1], [-1, "x"]]}"#).unwrap();
        assert_eq!(sl_lattice_from_json(json.as_ptr(), &mut l), SlStatus::InvalidInput);
        assert!(last_error().contains("gram[1][1]"), "{}", last_error());

        let json = CString::new("{\"gram\": [[1,").unwrap();
        assert_eq!(sl_lattice_from_json(json.as_ptr(), &mut l), SlStatus::InvalidInput);
        assert!(last_error().contains("line 1"));

        sl_lattice_free(ptr::null_mut());
        sl_subspace_free(ptr::null_mut());
        sl_filtration_free(ptr::null_mut());
    }
}

#[test]
fn git_counterexample() {
    let json = CString::new(
        r#"{"left": {"gram": [[1,0,0],[0,1,0],[0,0,1]]}, "right": {"gram": [[1,0,0],[0,1,0],[0,0,1]]},
            "generators": [[[0,1,0],[1,0,0],[0,0,0]], [[0,0,1],[0,0,0],[1,0,0]]]}"#,
    )
    .unwrap();
    let mut v = ptr::null_mut();
    unsafe {
        assert_eq!(sl_subspace_from_json(json.as_ptr(), ptr::null(), &mut v), SlStatus::Ok, "{}", last_error());
        let mut buf = vec![0 as c_char; 512];
        let mut need = 0usize;
        let mut st: c_int = -1;
        for side in [SL_SIDE_LEFT, SL_SIDE_RIGHT] {
            assert_eq!(sl_git_check(v, side, 0, &mut st, buf.as_mut_ptr(), buf.len(), &mut need), SlStatus::Ok);
            assert_eq!(st, SL_GIT_STABLE);
        }
        assert_eq!(sl_git_check(v, SL_SIDE_BOTH, 0, &mut st, buf.as_mut_ptr(), buf.len(), &mut need), SlStatus::Ok);
        assert_eq!(st, SL_GIT_UNSTABLE);
        assert!(text(&buf).contains("margin 1/3"), "{}", text(&buf));
        assert_eq!(sl_git_check(v, 7, 0, &mut st, buf.as_mut_ptr(), buf.len(), &mut need), SlStatus::InvalidInput);
        sl_subspace_free(v);
    }
}

#[test]
fn filtration_expectations() {
    let f = CString::new(r#"{"dim": 2, "steps": [{"basis": [[1, 0]], "weight": 1}, {"basis": [[1, 0], [0, 1]], "weight": "-1/2"}]}"#).unwrap();
    let mut h = ptr::null_mut();
    let mut buf = [0 as c_char; 32];
    let mut x = 0.0;
    unsafe {
        assert_eq!(sl_filtration_from_json(f.as_ptr(), &mut h), SlStatus::Ok);
        assert_eq!(sl_filtration_expectation(h, &mut x, buf.as_mut_ptr(), buf.len(), ptr::null_mut()), SlStatus::Ok);
        assert_eq!(text(&buf), "1/4");
        let (mut d, mut t) = (ptr::null_mut(), ptr::null_mut());
        sl_filtration_dual(h, &mut d);
        sl_filtration_expectation(d, &mut x, buf.as_mut_ptr(), buf.len(), ptr::null_mut());
        assert_eq!(text(&buf), "-1/4");
        sl_filtration_tensor(h, h, &mut t);
        sl_filtration_expectation(t, &mut x, buf.as_mut_ptr(), buf.len(), ptr::null_mut());
        assert_eq!(text(&buf), "1/2");
        assert_eq!(x, 0.5);
        for p in [h, d, t] {
            sl_filtration_free(p);
        }

        let bad = CString::new(r#"{"dim": 2, "steps": [{"basis": [[1, 0]], "weight": 0}, {"basis": [[1, 0], [0, 1]], "weight": 1}]}"#).unwrap();
        assert_eq!(sl_filtration_from_json(bad.as_ptr(), &mut h), SlStatus::InvalidInput);
    }
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/slopelab.h")).unwrap();
    for name in [
        "sl_last_error",
        "sl_lattice_new",
        "sl_lattice_from_json",
        "sl_lattice_free",
        "sl_lattice_rank",
        "sl_lattice_ndeg",
        "sl_lattice_max_slope",
        "sl_lattice_is_semistable",
        "sl_lattice_dual",
        "sl_lattice_tensor",
        "sl_subspace_from_json",
        "sl_subspace_free",
        "sl_git_check",
        "sl_filtration_from_json",
        "sl_filtration_free",
        "sl_filtration_expectation",
        "sl_filtration_tensor",
        "sl_filtration_dual",
        "typedef struct SlLattice SlLattice",
        "SL_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
