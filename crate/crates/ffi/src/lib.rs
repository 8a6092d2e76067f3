//! C ABI over `polydiag`.
//!
//! Every fallible call returns a [`PdStatus`]; on failure a message is kept
//! per thread and read with [`pd_last_error`]. Strings handed out by this
//! library are owned by the caller and released with [`pd_string_free`].
//! Handles are opaque and each has its own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use polydiag::counting::{fm_strata, polydiag_strata, strata_by_codim, StrataTable};
use polydiag::hodge::HodgeContext;
use polydiag::limits::{classify, ApproachProfile};
use polydiag::polyring::Var;
use polydiag::trees::chain_to_tree;
use polydiag::{Chain, Error, IntegerPartition};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Identity = 4,
    Json = 5,
    Panic = 6,
}

/// Rendering variable for polynomials.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdVar {
    U = 0,
    T = 1,
}

impl From<PdVar> for Var {
    fn from(v: PdVar) -> Var {
        match v {
            PdVar::U => Var::U,
            PdVar::T => Var::T,
        }
    }
}

/// Memoizing polynomial context for a fixed base dimension `m`.
pub struct PdHodgeContext(HodgeContext);

/// A chain of set partitions.
pub struct PdChain(Chain);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(PdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            _ if e.is_identity_failure() => PdStatus::Identity,
            Error::Json(_) => PdStatus::Json,
            _ => PdStatus::Validation,
        };
        Failure(status, format!("error[{}]: {e}", e.kind()))
    }
}

fn null(what: &str) -> Failure {
    Failure(PdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(PdStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(PdStatus::Validation, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failure on this thread; empty if none. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn pd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Number of strata of `X⟨n⟩`, or those of codimension `codim` when
/// `codim >= 0`, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer to write a string pointer into.
#[no_mangle]
pub unsafe extern "C" fn pd_strata_count(n: usize, codim: i64, out: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let count = if codim >= 0 {
            strata_by_codim(n, codim as usize)?
        } else {
            polydiag_strata(n)?
        };
        write_string(out, count.to_string())
    })
}

/// Number of strata of the Fulton–MacPherson space `X[n]`.
///
/// # Safety
/// `out` must be a valid pointer to write a string pointer into.
#[no_mangle]
pub unsafe extern "C" fn pd_fm_strata_count(n: usize, out: *mut *mut c_char) -> PdStatus {
    guard(|| write_string(out, fm_strata(n)?.to_string()))
}

/// CSV strata table for `n = 2..=max_n`.
///
/// # Safety
/// `out` must be a valid pointer to write a string pointer into.
#[no_mangle]
pub unsafe extern "C" fn pd_strata_table_csv(max_n: usize, out: *mut *mut c_char) -> PdStatus {
    guard(|| write_string(out, StrataTable::new(max_n)?.to_csv()))
}

/// # Safety
/// `out` must be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn pd_hodge_context_new(m: usize, out: *mut *mut PdHodgeContext) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(PdHodgeContext(HodgeContext::new(m)?)));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`pd_hodge_context_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_hodge_context_free(ctx: *mut PdHodgeContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `U^m_n` rendered as text.
///
/// # Safety
/// `ctx` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_u_poly(
    ctx: *const PdHodgeContext,
    n: usize,
    var: PdVar,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        write_string(out, ctx.0.u_poly(n)?.render(var.into()))
    })
}

/// Brick polynomial of the partition with parts `parts[0..len]` (any order),
/// closed or open.
///
/// # Safety
/// `parts` must point to `len` readable values; `ctx` must be a live handle
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_brick_poly(
    ctx: *const PdHodgeContext,
    parts: *const usize,
    len: usize,
    open: bool,
    var: PdVar,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        if parts.is_null() && len > 0 {
            return Err(null("parts"));
        }
        let parts = if len == 0 { &[][..] } else { std::slice::from_raw_parts(parts, len) };
        let shape = IntegerPartition::new(parts.to_vec())?;
        let p = if open { ctx.0.open_brick_poly(&shape)? } else { ctx.0.brick_poly(&shape)? };
        write_string(out, p.render(var.into()))
    })
}

/// Runs the open-strata consistency check; on success `*ok` says whether the
/// identity held and `*report` (if non-null) receives the JSON report.
///
/// # Safety
/// `ctx` must be a live handle; `ok` must be valid; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn pd_consistency_check(
    ctx: *const PdHodgeContext,
    n: usize,
    ok: *mut bool,
    report: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        if ok.is_null() {
            return Err(null("ok"));
        }
        let r = ctx.0.consistency_check(n)?;
        *ok = r.ok;
        if !report.is_null() {
            write_string(report, serde_json::to_string(&r).map_err(Error::from)?)?;
        }
        Ok(())
    })
}

/// Parses a chain from `{"n":..,"partitions":[{"n":..,"blocks":[[..]]},..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_chain_from_json(json: *const c_char, out: *mut *mut PdChain) -> PdStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let chain: Chain = serde_json::from_str(text).map_err(Error::from)?;
        *out = Box::into_raw(Box::new(PdChain(chain)));
        Ok(())
    })
}

/// # Safety
/// `chain` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_chain_free(chain: *mut PdChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Length of the chain, i.e. the codimension of its stratum; 0 for null.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_chain_len(chain: *const PdChain) -> usize {
    chain.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_chain_to_string(chain: *const PdChain, out: *mut *mut c_char) -> PdStatus {
    guard(|| write_string(out, handle(chain, "chain")?.0.to_string()))
}

/// The leveled tree of the chain in DOT syntax.
///
/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_chain_tree_dot(chain: *const PdChain, out: *mut *mut c_char) -> PdStatus {
    guard(|| write_string(out, chain_to_tree(&handle(chain, "chain")?.0).to_dot()))
}

/// Hodge polynomial of the closed or open stratum of `chain`.
///
/// # Safety
/// `ctx` and `chain` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_stratum_poly(
    ctx: *const PdHodgeContext,
    chain: *const PdChain,
    open: bool,
    var: PdVar,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let chain = handle(chain, "chain")?;
        write_string(out, ctx.0.stratum_poly(&chain.0, open)?.render(var.into()))
    })
}

/// Classifies an exponent profile given as JSON; writes
/// `{"chain":..,"tree":..,"nest":..}`.
///
/// # Safety
/// `profile_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_classify_json(
    profile_json: *const c_char,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let text = read_str(profile_json, "profile_json")?;
        let profile: ApproachProfile = serde_json::from_str(text).map_err(Error::from)?;
        let c = classify(&profile)?;
        write_string(out, serde_json::to_string(&c).map_err(Error::from)?)
    })
}
