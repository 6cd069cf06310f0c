//! C ABI for the `ratclos` reasoner.
//!
//! Knowledge bases are opaque `RcKb` handles created by [`rc_kb_parse`] and
//! released with [`rc_kb_free`]. Every fallible call returns an [`RcStatus`];
//! on failure a message is available from [`rc_last_error`] on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with [`rc_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use num_rational::BigRational;
use ratclos::epsilon::EpsilonDistribution;
use ratclos::model::build_closure_model_over;
use ratclos::{
    parse_assertion, parse_formula, pref_entails_query, ConditionalAssertion, KnowledgeBase,
    QueryResult, Rank, RationalClosure,
};

/// Result codes for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    ResourceLimit = 4,
    ZeroProbability = 5,
    InvalidArgument = 6,
    Internal = 7,
}

/// Opaque knowledge base with its rank partition precomputed.
pub struct RcKb {
    closure: RationalClosure,
}

/// Outcome of a closure or preferential query. Ranks are `-1` when the
/// formula has no rank.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RcQueryResult {
    pub answer: bool,
    pub rank_antecedent: i64,
    pub rank_refuter: i64,
    pub sat_calls: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: RcStatus, msg: impl Into<String>) -> RcStatus {
    set_error(msg);
    status
}

fn rank_code(r: Rank) -> i64 {
    r.finite().map_or(-1, |n| n as i64)
}

impl From<QueryResult> for RcQueryResult {
    fn from(r: QueryResult) -> Self {
        RcQueryResult {
            answer: r.answer,
            rank_antecedent: rank_code(r.rank_antecedent),
            rank_refuter: rank_code(r.rank_refuter),
            sat_calls: r.sat_calls,
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RcStatus> {
    if p.is_null() {
        return Err(fail(RcStatus::NullPointer, "null string argument"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(RcStatus::InvalidUtf8, e.to_string()))
}

fn guarded(body: impl FnOnce() -> RcStatus) -> RcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(RcStatus::Internal, "panic inside ratclos"),
    }
}

unsafe fn handle<'a>(kb: *const RcKb) -> Result<&'a RcKb, RcStatus> {
    kb.as_ref()
        .ok_or_else(|| fail(RcStatus::NullPointer, "null knowledge base handle"))
}

unsafe fn assertion_arg(p: *const c_char) -> Result<ConditionalAssertion, RcStatus> {
    parse_assertion(read_str(p)?).map_err(|e| fail(RcStatus::Parse, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> RcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            RcStatus::Ok
        }
        Err(e) => fail(RcStatus::Internal, e.to_string()),
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a knowledge base in the line-oriented `a |~ b` format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rc_kb_parse(text: *const c_char, out: *mut *mut RcKb) -> RcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        let text = tri!(read_str(text));
        let kb = tri!(KnowledgeBase::parse(text).map_err(|e| fail(RcStatus::Parse, e.to_string())));
        *out = Box::into_raw(Box::new(RcKb {
            closure: RationalClosure::new(kb),
        }));
        RcStatus::Ok
    })
}

/// # Safety
/// `kb` must be NULL or a handle from [`rc_kb_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_kb_free(kb: *mut RcKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

/// Number of distinct assertions in the base; 0 for NULL.
///
/// # Safety
/// `kb` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_kb_len(kb: *const RcKb) -> usize {
    kb.as_ref().map_or(0, |k| k.closure.kb().len())
}

/// Index of the fixpoint level of the rank partition; 0 for NULL.
///
/// # Safety
/// `kb` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_kb_height(kb: *const RcKb) -> usize {
    kb.as_ref().map_or(0, |k| k.closure.partition().height())
}

/// Rational-closure membership of `assertion`.
///
/// # Safety
/// `kb` must be a live handle, `assertion` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rc_check(
    kb: *const RcKb,
    assertion: *const c_char,
    out: *mut RcQueryResult,
) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        let a = tri!(assertion_arg(assertion));
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        *out = kb.closure.query(&a).into();
        RcStatus::Ok
    })
}

/// Preferential entailment of `assertion`.
///
/// # Safety
/// Same contract as [`rc_check`].
#[no_mangle]
pub unsafe extern "C" fn rc_pref(
    kb: *const RcKb,
    assertion: *const c_char,
    out: *mut RcQueryResult,
) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        let a = tri!(assertion_arg(assertion));
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        *out = pref_entails_query(kb.closure.kb(), &a).into();
        RcStatus::Ok
    })
}

/// Rank of `formula`; writes `-1` when it has no rank.
///
/// # Safety
/// `kb` must be a live handle, `formula` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rc_rank(
    kb: *const RcKb,
    formula: *const c_char,
    out: *mut i64,
) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        let f = tri!(parse_formula(tri!(read_str(formula)))
            .map_err(|e| fail(RcStatus::Parse, e.to_string())));
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        *out = rank_code(kb.closure.rank(&f));
        RcStatus::Ok
    })
}

/// Dump of the closure's ranked model, one `rank <n>: v=0 ...` line per world.
///
/// # Safety
/// `kb` must be a live handle and `out` a valid pointer. The string written to
/// `out` must be released with [`rc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rc_model_dump(kb: *const RcKb, out: *mut *mut c_char) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        let base = kb.closure.kb();
        let model = tri!(
            build_closure_model_over(base, base.signature(), Default::default())
                .map_err(|e| fail(RcStatus::ResourceLimit, e.to_string()))
        );
        write_string(out, model.to_string())
    })
}

/// Searches for a witness of non-entailment. Sets `*entailed` and, when a
/// witness exists, writes its text form to `*text` (NULL otherwise).
///
/// # Safety
/// `kb` must be a live handle, `assertion` a NUL-terminated string, and
/// `entailed`/`text` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rc_witness(
    kb: *const RcKb,
    assertion: *const c_char,
    entailed: *mut bool,
    text: *mut *mut c_char,
) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        let a = tri!(assertion_arg(assertion));
        if entailed.is_null() || text.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        let base = kb.closure.kb();
        let found = tri!(ratclos::find_witness(base, &a)
            .map_err(|e| fail(RcStatus::ResourceLimit, e.to_string())));
        match found {
            None => {
                *entailed = true;
                *text = ptr::null_mut();
                RcStatus::Ok
            }
            Some(w) => {
                if ratclos::verify_witness(base, &a, &w) != Ok(true) {
                    return fail(RcStatus::Internal, "witness failed verification");
                }
                *entailed = false;
                write_string(text, w.to_string())
            }
        }
    })
}

/// Exact conditional probability of the consequent given the antecedent of
/// `assertion` under the ε-assignment of the closure model, written as a
/// `p/q` string. `epsilon` is a fraction such as `"1/10"`.
///
/// # Safety
/// `kb` must be a live handle, `epsilon` and `assertion` NUL-terminated
/// strings and `out` a valid pointer. The string written to `out` must be
/// released with [`rc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rc_eps_probability(
    kb: *const RcKb,
    epsilon: *const c_char,
    assertion: *const c_char,
    out: *mut *mut c_char,
) -> RcStatus {
    guarded(|| {
        let kb = tri!(handle(kb));
        let eps_text = tri!(read_str(epsilon));
        let a = tri!(assertion_arg(assertion));
        if out.is_null() {
            return fail(RcStatus::NullPointer, "null output pointer");
        }
        let eps: BigRational = tri!(eps_text.trim().parse().map_err(|_| fail(
            RcStatus::InvalidArgument,
            format!("invalid epsilon `{eps_text}`")
        )));
        let base = kb.closure.kb();
        let signature = base
            .signature()
            .extended_with(&a.antecedent)
            .extended_with(&a.consequent);
        let model = tri!(
            build_closure_model_over(base, &signature, Default::default())
                .map_err(|e| fail(RcStatus::ResourceLimit, e.to_string()))
        );
        let dist = tri!(EpsilonDistribution::new(&model, eps).map_err(|e| {
            use ratclos::epsilon::EpsilonError;
            match e {
                EpsilonError::EmptyDomain => fail(RcStatus::ZeroProbability, e.to_string()),
                _ => fail(RcStatus::InvalidArgument, e.to_string()),
            }
        }));
        let p = tri!(dist
            .conditional(&a.consequent, &a.antecedent)
            .map_err(|e| fail(RcStatus::ZeroProbability, e.to_string())));
        write_string(out, p.to_string())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned through an out-parameter of this
/// library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
