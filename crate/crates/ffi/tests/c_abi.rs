use std::ffi::{c_char, CStr};
use std::ptr;

use rcms_ffi::*;

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    rcms_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = rcms_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn counts() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(rcms_count_total(6, 4, &mut s), RcmsStatus::Ok);
        assert_eq!(take_string(s), "1047649905");
        let mut n = 0u64;
        assert_eq!(rcms_class_count(4, 4, &mut n), RcmsStatus::Ok);
        assert_eq!(n, 43);
        assert!(rcms_last_error().is_null());
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        assert_eq!(
            rcms_class_count(4, 4, ptr::null_mut()),
            RcmsStatus::NullPointer
        );
        assert!(last_error().contains("out"));
        let mut list = ptr::null_mut();
        assert_eq!(
            rcms_class_list_new(9, 4, &mut list),
            RcmsStatus::Unsupported
        );
        assert!(list.is_null());
        assert!(last_error().contains('9'));
        let mut table = ptr::null_mut();
        assert_eq!(
            rcms_graph_table_new(0, &mut table),
            RcmsStatus::InvalidArgument
        );
    }
}

#[test]
fn class_list_round_trip() {
    unsafe {
        let mut list = ptr::null_mut();
        assert_eq!(rcms_class_list_new(3, 4, &mut list), RcmsStatus::Ok);
        assert_eq!(rcms_class_list_len(list), 9);
        let mut entries = [0u8; 9];
        let (mut orbit, mut factor) = (0u64, 0u64);
        let mut total = 0;
        for i in 0..9 {
            assert_eq!(
                rcms_class_list_get(list, i, entries.as_mut_ptr(), &mut orbit, &mut factor),
                RcmsStatus::Ok
            );
            total += orbit;
        }
        assert_eq!(total, 120);
        assert_eq!(
            rcms_class_list_get(list, 9, entries.as_mut_ptr(), &mut orbit, &mut factor),
            RcmsStatus::OutOfRange
        );
        rcms_class_list_free(list);
        rcms_class_list_free(ptr::null_mut());
        assert_eq!(rcms_class_list_len(ptr::null()), 0);
    }
}

#[test]
fn graph_table() {
    unsafe {
        let mut table = ptr::null_mut();
        assert_eq!(rcms_graph_table_new(3, &mut table), RcmsStatus::Ok);
        assert_eq!(rcms_graph_table_len(table), 7);
        let mut kleinert = Vec::new();
        let mut adj = [0u8; 9];
        for i in 0..7 {
            let (mut mt, mut mk) = (ptr::null_mut(), ptr::null_mut());
            let (mut s, mut connected) = (0u64, false);
            assert_eq!(
                rcms_graph_table_multiplicities(table, i, &mut mt, &mut mk, &mut s, &mut connected),
                RcmsStatus::Ok
            );
            let mt: u64 = take_string(mt).parse().unwrap();
            let mk: u64 = take_string(mk).parse().unwrap();
            assert_eq!(mt, mk * 720 * 64);
            kleinert.push(mk);
            assert_eq!(
                rcms_graph_table_adjacency(table, i, adj.as_mut_ptr()),
                RcmsStatus::Ok
            );
            for row in adj.chunks(3) {
                assert_eq!(row.iter().map(|&x| x as u32).sum::<u32>(), 4);
            }
        }
        kleinert.sort();
        assert_eq!(kleinert, vec![27, 216, 648, 1728, 1728, 2592, 3456]);
        rcms_graph_table_free(table);
    }
}

#[test]
fn equivalence_of_squares() {
    let a: [u8; 16] = [2, 1, 1, 0, 0, 0, 2, 2, 0, 2, 0, 2, 2, 1, 1, 0];
    let b: [u8; 16] = [2, 1, 1, 0, 0, 1, 1, 2, 0, 2, 2, 0, 2, 0, 0, 2];
    // rows reversed
    let c: [u8; 16] = [2, 1, 1, 0, 0, 2, 0, 2, 0, 0, 2, 2, 2, 1, 1, 0];
    let mut out = true;
    unsafe {
        assert_eq!(
            rcms_matrix_equivalent(4, a.as_ptr(), b.as_ptr(), &mut out),
            RcmsStatus::Ok
        );
        assert!(!out);
        assert_eq!(
            rcms_matrix_equivalent(4, a.as_ptr(), c.as_ptr(), &mut out),
            RcmsStatus::Ok
        );
        assert!(out);
        let bad: [u8; 4] = [4, 0, 1, 3];
        assert_eq!(
            rcms_matrix_equivalent(2, bad.as_ptr(), bad.as_ptr(), &mut out),
            RcmsStatus::InvalidArgument
        );
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rcms_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rcms.h")).unwrap();
    for name in [
        "rcms_last_error",
        "rcms_version",
        "rcms_string_free",
        "rcms_count_total",
        "rcms_class_count",
        "rcms_matrix_equivalent",
        "rcms_class_list_new",
        "rcms_class_list_len",
        "rcms_class_list_get",
        "rcms_class_list_free",
        "rcms_graph_table_new",
        "rcms_graph_table_len",
        "rcms_graph_table_adjacency",
        "rcms_graph_table_multiplicities",
        "rcms_graph_table_free",
        "typedef struct RcmsClassList RcmsClassList",
        "typedef struct RcmsGraphTable RcmsGraphTable",
        "RCMS_STATUS_OUT_OF_RANGE = 4",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
