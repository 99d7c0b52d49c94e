//! C interface to the `rcms` engine.
//!
//! Every function returns an [`RcmsStatus`]; on failure the message is
//! available from [`rcms_last_error`] on the same thread. Results are
//! returned through out-pointers as opaque handles that the caller releases
//! with the matching `_free` function. Strings handed to the caller are
//! released with [`rcms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rcms::burnside::burnside_class_count;
use rcms::enumerate::{class_representatives, count_total};
use rcms::verify::order_records;
use rcms::{ClassRep, MultiplicityRecord, RcMatrix, RcmsError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    OutOfRange = 4,
    Internal = 5,
}

/// Class representatives of one order.
pub struct RcmsClassList {
    classes: Vec<ClassRep>,
}

/// Merged graph records of one order.
pub struct RcmsGraphTable {
    records: Vec<MultiplicityRecord>,
    adjacency: Vec<Vec<u8>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &RcmsError) -> RcmsStatus {
    match e {
        RcmsError::Unsupported { .. } => RcmsStatus::Unsupported,
        RcmsError::Invariant(_) | RcmsError::Io(_) | RcmsError::Json(_) => RcmsStatus::Internal,
        _ => RcmsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (RcmsStatus, String)>) -> RcmsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RcmsStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside rcms".into());
            RcmsStatus::Internal
        }
    }
}

fn lift<T>(r: rcms::Result<T>) -> Result<T, (RcmsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), (RcmsStatus, String)> {
    if p.is_null() {
        Err((RcmsStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn order_of(m: u32) -> usize {
    m as usize
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn rcms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rcms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rcms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of `m × m` squares with all margins `d`, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer; the result is freed with
/// `rcms_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rcms_count_total(m: u32, d: u8, out: *mut *mut c_char) -> RcmsStatus {
    guard(|| {
        non_null(out, "out")?;
        let n = lift(count_total(order_of(m), d))?;
        let s = CString::new(n.to_string()).expect("digits only");
        *out = s.into_raw();
        Ok(())
    })
}

/// Number of equivalence classes under row and column permutations.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rcms_class_count(m: u32, d: u8, out: *mut u64) -> RcmsStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(burnside_class_count(order_of(m), d))?;
        Ok(())
    })
}

/// Builds a square from `m * m` row-major entries; all margins must equal
/// the first row's sum.
unsafe fn read_matrix(m: u32, entries: *const u8) -> Result<RcMatrix, (RcmsStatus, String)> {
    non_null(entries, "entries")?;
    let m = order_of(m);
    if m == 0 || m > rcms::perm::MAX_DIM {
        return Err((
            RcmsStatus::InvalidArgument,
            format!("order {m} out of range"),
        ));
    }
    let cells = std::slice::from_raw_parts(entries, m * m);
    let rows: Vec<&[u8]> = cells.chunks(m).collect();
    lift(RcMatrix::from_rows(&rows))
}

/// Whether two `m × m` squares are related by row and column permutations.
///
/// # Safety
/// `a` and `b` must each point to `m * m` bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rcms_matrix_equivalent(
    m: u32,
    a: *const u8,
    b: *const u8,
    out: *mut bool,
) -> RcmsStatus {
    guard(|| {
        non_null(out, "out")?;
        let a = read_matrix(m, a)?;
        let b = read_matrix(m, b)?;
        *out = lift(a.is_equivalent(&b))?;
        Ok(())
    })
}

/// Class representatives of order `m` and margin `d`.
///
/// # Safety
/// `out` must be valid; the list is freed with `rcms_class_list_free`.
#[no_mangle]
pub unsafe extern "C" fn rcms_class_list_new(
    m: u32,
    d: u8,
    out: *mut *mut RcmsClassList,
) -> RcmsStatus {
    guard(|| {
        non_null(out, "out")?;
        let classes = lift(class_representatives(order_of(m), d))?;
        *out = Box::into_raw(Box::new(RcmsClassList { classes }));
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a live list.
#[no_mangle]
pub unsafe extern "C" fn rcms_class_list_len(list: *const RcmsClassList) -> usize {
    list.as_ref().map_or(0, |l| l.classes.len())
}

/// Copies class `index` into `entries` (`m * m` bytes, row-major) and
/// reports its class size and multinomial factor.
///
/// # Safety
/// `list` must be live; `entries` must hold `m * m` bytes; the other
/// out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rcms_class_list_get(
    list: *const RcmsClassList,
    index: usize,
    entries: *mut u8,
    orbit_size: *mut u64,
    mult_factor: *mut u64,
) -> RcmsStatus {
    guard(|| {
        non_null(list, "list")?;
        non_null(entries, "entries")?;
        non_null(orbit_size, "orbit_size")?;
        non_null(mult_factor, "mult_factor")?;
        let list = &*list;
        let c = list.classes.get(index).ok_or_else(|| {
            (
                RcmsStatus::OutOfRange,
                format!("index {index} >= {}", list.classes.len()),
            )
        })?;
        let src = c.rep.entries();
        ptr::copy_nonoverlapping(src.as_ptr(), entries, src.len());
        *orbit_size = c.orbit_size;
        *mult_factor = c.mult_factor;
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a live list, and is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcms_class_list_free(list: *mut RcmsClassList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// All vacuum graphs of order `m` with their multiplicities, sorted
/// connected first.
///
/// # Safety
/// `out` must be valid; the table is freed with `rcms_graph_table_free`.
#[no_mangle]
pub unsafe extern "C" fn rcms_graph_table_new(m: u32, out: *mut *mut RcmsGraphTable) -> RcmsStatus {
    guard(|| {
        non_null(out, "out")?;
        let records = lift(order_records(order_of(m)))?;
        let adjacency = records
            .iter()
            .map(|r| r.graph.adjacency().to_vec())
            .collect();
        *out = Box::into_raw(Box::new(RcmsGraphTable { records, adjacency }));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a live table.
#[no_mangle]
pub unsafe extern "C" fn rcms_graph_table_len(table: *const RcmsGraphTable) -> usize {
    table.as_ref().map_or(0, |t| t.records.len())
}

/// Copies the canonical adjacency of graph `index` (`m * m` bytes,
/// diagonal = twice the loop count) into `out`.
///
/// # Safety
/// `table` must be live and `out` must hold `m * m` bytes.
#[no_mangle]
pub unsafe extern "C" fn rcms_graph_table_adjacency(
    table: *const RcmsGraphTable,
    index: usize,
    out: *mut u8,
) -> RcmsStatus {
    guard(|| {
        non_null(table, "table")?;
        non_null(out, "out")?;
        let t = &*table;
        let adj = t.adjacency.get(index).ok_or_else(|| {
            (
                RcmsStatus::OutOfRange,
                format!("index {index} >= {}", t.adjacency.len()),
            )
        })?;
        ptr::copy_nonoverlapping(adj.as_ptr(), out, adj.len());
        Ok(())
    })
}

/// `M_T` and `M_K` of graph `index` as decimal strings (freed with
/// `rcms_string_free`), its symmetry factor and connectivity.
///
/// # Safety
/// `table` must be live; all out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rcms_graph_table_multiplicities(
    table: *const RcmsGraphTable,
    index: usize,
    m_total: *mut *mut c_char,
    m_kleinert: *mut *mut c_char,
    sym_factor: *mut u64,
    connected: *mut bool,
) -> RcmsStatus {
    guard(|| {
        non_null(table, "table")?;
        non_null(m_total, "m_total")?;
        non_null(m_kleinert, "m_kleinert")?;
        non_null(sym_factor, "sym_factor")?;
        non_null(connected, "connected")?;
        let t = &*table;
        let r = t.records.get(index).ok_or_else(|| {
            (
                RcmsStatus::OutOfRange,
                format!("index {index} >= {}", t.records.len()),
            )
        })?;
        *m_total = CString::new(r.m_total.to_string())
            .expect("digits")
            .into_raw();
        *m_kleinert = CString::new(r.m_kleinert.to_string())
            .expect("digits")
            .into_raw();
        *sym_factor = r.sym_factor;
        *connected = r.connected;
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a live table, and is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcms_graph_table_free(table: *mut RcmsGraphTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
