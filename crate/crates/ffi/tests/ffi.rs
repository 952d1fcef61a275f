use std::ffi::{CStr, CString};
use std::ptr;

use speciallocus_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    sl_string_free(s);
    out
}

#[test]
fn class_group_handle() {
    unsafe {
        let d = CString::new("-23").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(sl_classgroup_new(d.as_ptr(), &mut g), SlStatus::Ok);
        let mut h = 0;
        assert_eq!(sl_classgroup_order(g, &mut h), SlStatus::Ok);
        assert_eq!(h, 3);
        let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(sl_classgroup_form(g, 0, &mut a, &mut b, &mut c), SlStatus::Ok);
        assert_eq!((take(a), take(b), take(c)), ("1".into(), "1".into(), "6".into()));
        assert_eq!(sl_classgroup_form(g, 3, &mut a, &mut b, &mut c), SlStatus::OutOfRange);
        sl_classgroup_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("-22").unwrap();
        assert_eq!(sl_classgroup_new(bad.as_ptr(), &mut g), SlStatus::InvalidInput);
        let msg = CStr::from_ptr(sl_last_error()).to_str().unwrap();
        assert!(msg.contains("-22"));
        let junk = CString::new("abc").unwrap();
        assert_eq!(sl_classgroup_new(junk.as_ptr(), &mut g), SlStatus::InvalidInput);
        assert_eq!(sl_classgroup_new(ptr::null(), &mut g), SlStatus::NullPointer);
        let mut grp = ptr::null_mut();
        assert_eq!(sl_group_new(49, 10_000, &mut grp), SlStatus::Resource);
    }
}

#[test]
fn modular_polynomial_handle() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(sl_modpoly_new(2, &mut p), SlStatus::Ok);
        let mut deg = 0;
        sl_modpoly_degree(p, &mut deg);
        assert_eq!(deg, 3);
        let mut s = ptr::null_mut();
        assert_eq!(sl_modpoly_coeff(p, 2, 1, &mut s), SlStatus::Ok);
        assert_eq!(take(s), "1488");
        assert_eq!(sl_modpoly_coeff(p, 4, 0, &mut s), SlStatus::OutOfRange);
        sl_modpoly_free(p);
        let d = CString::new("-23").unwrap();
        let mut split = -1;
        assert_eq!(sl_is_split(2, d.as_ptr(), &mut split), SlStatus::Ok);
        assert_eq!(split, 1);
    }
}

#[test]
fn groups() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(sl_group_new(5, 10_000, &mut g), SlStatus::Ok);
        let mut o = 0;
        sl_group_order(g, &mut o);
        assert_eq!(o, 60);
        sl_group_free(g);
        let (mut i, mut w) = (0, 0);
        assert_eq!(sl_group_min_index(11, 12, 10_000, &mut i, &mut w), SlStatus::Ok);
        assert_eq!((i, w), (11, 60));
        assert_eq!(sl_group_min_index(13, 13, 10_000, &mut i, &mut w), SlStatus::Ok);
        assert_eq!((i, w), (0, 0));
    }
}

#[test]
fn run_cli() {
    unsafe {
        let args: Vec<CString> = ["classgroup", "-23", "--no-cache"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
        let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
        assert_eq!(sl_run(ptrs.as_ptr(), ptrs.len(), &mut out, &mut err, &mut code), SlStatus::Ok);
        assert_eq!(code, 0);
        assert!(take(out).contains("\"h\":3"));
        assert_eq!(take(err), "");
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/speciallocus.h")).unwrap();
    for name in ["sl_classgroup_new", "sl_modpoly_coeff", "sl_group_min_index", "sl_run", "SL_STATUS_RESOURCE", "SlClassGroup"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
