//! C interface to slopelab. Objects are opaque handles released with the matching `*_free`.
//! Every call returns an [`SlStatus`]; details of the last failure on the calling thread are
//! available through [`sl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use slopelab::check::Mode;
use slopelab::exact::rational::fmt_rational;
use slopelab::exact::{rint, QMatrix};
use slopelab::git::{both_sided_check, left_right_check, CandidatePool, GitStatus, SearchConfig, Side};
use slopelab::hn::is_semistable;
use slopelab::io::{parse_filtration, parse_lattice, parse_tensor_subspace};
use slopelab::minima::{max_slope, Budget};
use slopelab::tensor::TensorSubspace;
use slopelab::{Error, Lattice, RFiltration};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Degenerate = 3,
    BudgetExhausted = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

pub struct SlLattice(Lattice);
pub struct SlSubspace(TensorSubspace);
pub struct SlFiltration(RFiltration);

pub const SL_SIDE_LEFT: c_int = 0;
pub const SL_SIDE_RIGHT: c_int = 1;
pub const SL_SIDE_BOTH: c_int = 2;

pub const SL_GIT_UNSTABLE: c_int = 0;
pub const SL_GIT_STABLE: c_int = 1;
pub const SL_GIT_SEMISTABLE: c_int = 2;
pub const SL_GIT_LIKELY_SEMISTABLE: c_int = 3;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::Degenerate | Error::ZeroRank | Error::NotPositiveDefinite | Error::NonSymmetric => SlStatus::Degenerate,
        Error::Budget(_) | Error::NotExact(_) | Error::PrecisionCap => SlStatus::BudgetExhausted,
        Error::Other(_) => SlStatus::Internal,
        _ => SlStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (SlStatus, String)>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic in slopelab".into());
            SlStatus::Internal
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (SlStatus, String)>;
}

impl<T> Lift<T> for slopelab::Result<T> {
    fn lift(self) -> Result<T, (SlStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null() -> (SlStatus, String) {
    (SlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (SlStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn json_arg(s: *const c_char) -> Result<serde_json::Value, (SlStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SlStatus::InvalidInput, "string is not UTF-8".to_string()))?;
    serde_json::from_str(text).map_err(|e| (SlStatus::InvalidInput, format!("line {} column {}: {e}", e.line(), e.column())))
}

unsafe fn store<T>(out: *mut *mut T, v: T) -> Result<(), (SlStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// snprintf-like copy; `needed` receives the full length including the terminator.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), (SlStatus, String)> {
    let n = s.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if buf.is_null() || len == 0 {
        return if len == 0 { Ok(()) } else { Err(null()) };
    }
    let k = s.len().min(len - 1);
    ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, k);
    *buf.add(k) = 0;
    if n > len {
        return Err((SlStatus::BufferTooSmall, format!("need {n} bytes")));
    }
    Ok(())
}

/// Copies the message of the last failed call on this thread into `buf`.
///
/// # Safety
/// `buf` must be writable for `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> SlStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_str(&msg, buf, len, needed) {
        Ok(()) => SlStatus::Ok,
        Err((s, _)) => s,
    }
}

/// Lattice with the integer Gram matrix given row-major.
///
/// # Safety
/// `gram` must point to `rank * rank` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_new(gram: *const i64, rank: usize, out: *mut *mut SlLattice) -> SlStatus {
    guard(|| {
        if gram.is_null() || rank == 0 {
            return Err(null());
        }
        let g = std::slice::from_raw_parts(gram, rank * rank);
        let m = QMatrix::from_fn(rank, rank, |i, j| rint(g[i * rank + j]));
        store(out, SlLattice(Lattice::new(m).lift()?))
    })
}

/// Lattice from the JSON file format (`{"label", "gram"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_from_json(json: *const c_char, out: *mut *mut SlLattice) -> SlStatus {
    guard(|| {
        let v = json_arg(json)?;
        store(out, SlLattice(parse_lattice(&v, "").lift()?))
    })
}

/// # Safety
/// `l` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_free(l: *mut SlLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_rank(l: *const SlLattice, out: *mut usize) -> SlStatus {
    guard(|| {
        let l = deref(l)?;
        *out.as_mut().ok_or_else(null)? = l.0.rank();
        Ok(())
    })
}

/// Normalized degree as a double, with its exact form written into `buf`.
///
/// # Safety
/// Pointers must be valid; `buf` may be null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_ndeg(
    l: *const SlLattice,
    value: *mut f64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SlStatus {
    guard(|| {
        let d = deref(l)?.0.ndeg();
        *value.as_mut().ok_or_else(null)? = d.to_f64();
        write_str(&d.exact_string(), buf, len, needed)
    })
}

/// Maximal slope; `exact` is 1 when certified exact and 0 when only a lower bound.
///
/// # Safety
/// Pointers must be valid; `buf` may be null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_max_slope(
    l: *const SlLattice,
    value: *mut f64,
    exact: *mut c_int,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SlStatus {
    guard(|| {
        let c = max_slope(&deref(l)?.0, Budget::from_env()).lift()?;
        *value.as_mut().ok_or_else(null)? = c.value.to_f64();
        *exact.as_mut().ok_or_else(null)? = (c.mode == Mode::Exact) as c_int;
        write_str(&c.value.exact_string(), buf, len, needed)
    })
}

/// 1 semistable, 0 unstable, -1 undecided within budget.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_is_semistable(l: *const SlLattice, out: *mut c_int) -> SlStatus {
    guard(|| {
        let s = is_semistable(&deref(l)?.0, Budget::from_env()).lift()?;
        *out.as_mut().ok_or_else(null)? = match s.verdict() {
            Some(true) => 1,
            Some(false) => 0,
            None => -1,
        };
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_dual(l: *const SlLattice, out: *mut *mut SlLattice) -> SlStatus {
    guard(|| store(out, SlLattice(deref(l)?.0.dual())))
}

/// Kronecker product, basis `e_i ⊗ f_j` at index `i * rank(b) + j`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_lattice_tensor(a: *const SlLattice, b: *const SlLattice, out: *mut *mut SlLattice) -> SlStatus {
    guard(|| store(out, SlLattice(deref(a)?.0.tensor(&deref(b)?.0))))
}

/// Subspace of `E ⊗ F` from JSON; file references are resolved against `base_dir` (may be null).
///
/// # Safety
/// `json` and `base_dir` must be NUL-terminated strings or null, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subspace_from_json(json: *const c_char, base_dir: *const c_char, out: *mut *mut SlSubspace) -> SlStatus {
    guard(|| {
        let v = json_arg(json)?;
        let base = if base_dir.is_null() {
            ".".to_string()
        } else {
            CStr::from_ptr(base_dir).to_string_lossy().into_owned()
        };
        store(out, SlSubspace(parse_tensor_subspace(&v, "", Path::new(&base)).lift()?))
    })
}

/// # Safety
/// `v` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sl_subspace_free(v: *mut SlSubspace) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Semistability of `V` on one side (`SL_SIDE_*`); `status` receives an `SL_GIT_*` value and
/// the witness, if any, is written into `buf`.
///
/// # Safety
/// Pointers must be valid; `buf` may be null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn sl_git_check(
    v: *const SlSubspace,
    side: c_int,
    seed: u64,
    status: *mut c_int,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SlStatus {
    guard(|| {
        let v = &deref(v)?.0;
        let pool = CandidatePool::default();
        let r = match side {
            SL_SIDE_LEFT => left_right_check(v, Side::Left, &pool, seed),
            SL_SIDE_RIGHT => left_right_check(v, Side::Right, &pool, seed),
            SL_SIDE_BOTH => both_sided_check(v, &pool, SearchConfig::with_seed(seed)),
            _ => return Err((SlStatus::InvalidInput, format!("unknown side {side}"))),
        }
        .lift()?;
        *status.as_mut().ok_or_else(null)? = match r.status {
            GitStatus::Unstable => SL_GIT_UNSTABLE,
            GitStatus::StableCertified => SL_GIT_STABLE,
            GitStatus::SemistableCertified => SL_GIT_SEMISTABLE,
            GitStatus::LikelySemistable => SL_GIT_LIKELY_SEMISTABLE,
        };
        let w = r.witness.map(|w| w.to_string()).unwrap_or_default();
        write_str(&w, buf, len, needed)
    })
}

/// Filtration from JSON (`{"dim", "steps"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_filtration_from_json(json: *const c_char, out: *mut *mut SlFiltration) -> SlStatus {
    guard(|| {
        let v = json_arg(json)?;
        store(out, SlFiltration(parse_filtration(&v, "").lift()?))
    })
}

/// # Safety
/// `f` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sl_filtration_free(f: *mut SlFiltration) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Expectation as a double and as an exact `a/b` string.
///
/// # Safety
/// Pointers must be valid; `buf` may be null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn sl_filtration_expectation(
    f: *const SlFiltration,
    value: *mut f64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SlStatus {
    guard(|| {
        let e = deref(f)?.0.expectation();
        *value.as_mut().ok_or_else(null)? = slopelab::exact::rational::to_f64(&e);
        write_str(&fmt_rational(&e), buf, len, needed)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_filtration_tensor(f: *const SlFiltration, g: *const SlFiltration, out: *mut *mut SlFiltration) -> SlStatus {
    guard(|| store(out, SlFiltration(deref(f)?.0.tensor(&deref(g)?.0))))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sl_filtration_dual(f: *const SlFiltration, out: *mut *mut SlFiltration) -> SlStatus {
    guard(|| store(out, SlFiltration(deref(f)?.0.dual())))
}
