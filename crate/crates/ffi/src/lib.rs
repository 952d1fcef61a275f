//! C ABI over the speciallocus library.
//!
//! Objects are returned as opaque handles that the caller releases with the
//! matching `*_free` function. Every fallible call returns an `SlStatus`;
//! the message of the last error on the calling thread is available from
//! `sl_last_error`. Strings returned through out-parameters are owned by
//! the caller and released with `sl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use speciallocus::modpoly::{modular_poly, ModularPolynomial, DEFAULT_M_MAX};
use speciallocus::quadforms::{class_group, is_split, FormClassGroup};
use speciallocus::sl2mod::{min_proper_index, FiniteMatrixGroup};
use speciallocus::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Domain = 4,
    Resource = 5,
    OutOfRange = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: SlStatus, msg: impl Into<String>) -> SlStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SlStatus {
    let status = match &e {
        Error::InvalidInput(_) | Error::InvalidDiscriminant(_) | Error::InvalidForm(_) | Error::NotPrime(_) => {
            SlStatus::InvalidInput
        }
        e if e.is_resource() => SlStatus::Resource,
        _ => SlStatus::Domain,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> SlStatus) -> SlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SlStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, SlStatus> {
    if p.is_null() {
        return Err(fail(SlStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SlStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn read_bigint(p: *const c_char) -> Result<BigInt, SlStatus> {
    let s = read_str(p)?;
    s.trim().parse().map_err(|_| fail(SlStatus::InvalidInput, format!("not an integer: {s:?}")))
}

fn give_string(s: String, out: *mut *mut c_char) -> SlStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SlStatus::Ok
        }
        Err(_) => fail(SlStatus::Domain, "output contains a NUL byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! check_out {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(SlStatus::NullPointer, "null output pointer");
        })+
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The class group of the order of discriminant D.
pub struct SlClassGroup(FormClassGroup);

/// Builds the class group for a decimal discriminant.
///
/// # Safety
/// `disc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_classgroup_new(disc: *const c_char, out: *mut *mut SlClassGroup) -> SlStatus {
    guard(|| {
        check_out!(out);
        let d = try_status!(read_bigint(disc));
        match class_group(&d) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(SlClassGroup(g)));
                SlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `g` must be a live handle and `h` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_classgroup_order(g: *const SlClassGroup, h: *mut u64) -> SlStatus {
    check_out!(g, h);
    *h = (*g).0.h() as u64;
    SlStatus::Ok
}

/// The reduced form of class `index` as three decimal strings.
///
/// # Safety
/// `g` must be a live handle and `a`, `b`, `c` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_classgroup_form(
    g: *const SlClassGroup,
    index: usize,
    a: *mut *mut c_char,
    b: *mut *mut c_char,
    c: *mut *mut c_char,
) -> SlStatus {
    check_out!(g, a, b, c);
    let Some(f) = (&(*g).0).classes.get(index) else {
        return fail(SlStatus::OutOfRange, format!("class index {index} out of range"));
    };
    for (s, p) in [(&f.a, a), (&f.b, b), (&f.c, c)] {
        let st = give_string(s.to_string(), p);
        if st != SlStatus::Ok {
            return st;
        }
    }
    SlStatus::Ok
}

/// # Safety
/// `g` must be NULL or a handle from `sl_classgroup_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn sl_classgroup_free(g: *mut SlClassGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Whether the prime l splits in the order of discriminant D (1 or 0).
///
/// # Safety
/// `disc` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_is_split(l: u64, disc: *const c_char, out: *mut i32) -> SlStatus {
    guard(|| {
        check_out!(out);
        let d = try_status!(read_bigint(disc));
        match is_split(l, &d) {
            Ok(b) => {
                *out = b as i32;
                SlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// A classical modular polynomial Φ_m.
pub struct SlModPoly(std::sync::Arc<ModularPolynomial>);

/// Builds Φ_m for 1 ≤ m ≤ 20.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_modpoly_new(m: u64, out: *mut *mut SlModPoly) -> SlStatus {
    guard(|| {
        check_out!(out);
        match modular_poly(m, DEFAULT_M_MAX) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(SlModPoly(p)));
                SlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Degree of Φ_m in each variable.
///
/// # Safety
/// `p` must be a live handle and `deg` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_modpoly_degree(p: *const SlModPoly, deg: *mut u64) -> SlStatus {
    check_out!(p, deg);
    *deg = (*p).0.degree();
    SlStatus::Ok
}

/// Coefficient of x^i y^j as a decimal string.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_modpoly_coeff(p: *const SlModPoly, i: usize, j: usize, out: *mut *mut c_char) -> SlStatus {
    check_out!(p, out);
    let d = (*p).0.degree() as usize;
    if i > d || j > d {
        return fail(SlStatus::OutOfRange, format!("exponent ({i}, {j}) exceeds degree {d}"));
    }
    give_string((&(*p).0).poly.coeff(i, j).to_string(), out)
}

/// # Safety
/// `p` must be NULL or a handle from `sl_modpoly_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn sl_modpoly_free(p: *mut SlModPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The group SL₂(ℤ/N)/{±1}, enumerated.
pub struct SlGroup(FiniteMatrixGroup);

/// Enumerates the group when its order is at most `budget`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_group_new(n: u64, budget: u64, out: *mut *mut SlGroup) -> SlStatus {
    guard(|| {
        check_out!(out);
        match FiniteMatrixGroup::new(n, budget) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(SlGroup(g)));
                SlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `g` must be a live handle and `order` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_group_order(g: *const SlGroup, order: *mut u64) -> SlStatus {
    check_out!(g, order);
    *order = (*g).0.order() as u64;
    SlStatus::Ok
}

/// # Safety
/// `g` must be NULL or a handle from `sl_group_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn sl_group_free(g: *mut SlGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Least index of a proper subgroup up to `cap`. Writes 0 to both outputs
/// when there is none.
///
/// # Safety
/// `index` and `witness_order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_group_min_index(
    n: u64,
    cap: u64,
    budget: u64,
    index: *mut u64,
    witness_order: *mut u64,
) -> SlStatus {
    guard(|| {
        check_out!(index, witness_order);
        match min_proper_index(n, cap, budget) {
            Ok(r) => {
                let (i, w) = r.map_or((0, 0), |r| (r.index, r.witness_order));
                *index = i;
                *witness_order = w;
                SlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs a CLI command (argv without the program name) and returns its
/// output, error text and exit status.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out`, `err` and
/// `exit_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_run(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    err: *mut *mut c_char,
    exit_code: *mut i32,
) -> SlStatus {
    guard(|| {
        check_out!(out, err, exit_code);
        if argc > 0 && argv.is_null() {
            return fail(SlStatus::NullPointer, "null argv");
        }
        let mut args = vec!["speciallocus".to_string()];
        for k in 0..argc {
            args.push(try_status!(read_str(*argv.add(k))).to_string());
        }
        let (mut o, mut e) = (Vec::new(), Vec::new());
        *exit_code = speciallocus::cli::run(args, &mut o, &mut e);
        let st = give_string(String::from_utf8_lossy(&o).into_owned(), out);
        if st != SlStatus::Ok {
            return st;
        }
        give_string(String::from_utf8_lossy(&e).into_owned(), err)
    })
}
