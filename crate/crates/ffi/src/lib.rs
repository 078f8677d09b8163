//! C ABI over `polymu`.
//!
//! Formulas and transition systems cross the boundary as opaque handles that
//! the caller frees with the matching `*_free` function. Every fallible call
//! returns a [`PolymuStatus`]; on failure a message is available from
//! [`polymu_last_error`] on the same thread until the next failing call.
//! Strings returned by the library are owned by the caller and released with
//! [`polymu_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polymu::alternation::{alternation_depth, Class};
use polymu::formula::{normalize_replacements, parse_formula, Formula};
use polymu::lts::{parse_lts, Lts};
use polymu::{bisim, diagonal, fixed_sig, Engine};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolymuStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    EvaluationError = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolymuEngine {
    Naive = 0,
    Game = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolymuClass {
    Sigma = 0,
    Pi = 1,
}

/// Opaque formula handle.
pub struct PolymuFormula(Formula);

/// Opaque transition-system handle.
pub struct PolymuLts(Lts);

/// Verdicts of a diagonal check: the formula on its encoding, and the
/// simulating formula on the same system. Exactly one should hold.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PolymuDiagReport {
    pub phi_holds: bool,
    pub diag_holds: bool,
    pub states: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PolymuStatus, String);

impl Failure {
    fn new(status: PolymuStatus, e: impl ToString) -> Self {
        Failure(status, e.to_string())
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

// Runs `body`, recording the message of any failure or panic.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PolymuStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PolymuStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {message}"));
            PolymuStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(PolymuStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(PolymuStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(PolymuStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(PolymuStatus::NullArgument, format!("{what} is null")))
}

unsafe fn props_arg(props: *const *const c_char, len: usize) -> Result<Vec<String>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if props.is_null() {
        return Err(Failure::new(PolymuStatus::NullArgument, "props is null"));
    }
    std::slice::from_raw_parts(props, len)
        .iter()
        .map(|&p| str_arg(p, "proposition").map(str::to_string))
        .collect()
}

fn engine(e: PolymuEngine) -> Engine {
    match e {
        PolymuEngine::Naive => Engine::Naive,
        PolymuEngine::Game => Engine::Game,
    }
}

fn class(c: PolymuClass) -> Class {
    match c {
        PolymuClass::Sigma => Class::Sigma,
        PolymuClass::Pi => Class::Pi,
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::new(PolymuStatus::InvalidArgument, e)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn boxed_formula(out: &mut *mut PolymuFormula, phi: Formula) {
    *out = Box::into_raw(Box::new(PolymuFormula(phi)));
}

fn boxed_lts(out: &mut *mut PolymuLts, lts: Lts) {
    *out = Box::into_raw(Box::new(PolymuLts(lts)));
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn polymu_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn polymu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polymu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a closed or open formula.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_parse(text: *const c_char, out: *mut *mut PolymuFormula) -> PolymuStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let phi = parse_formula(str_arg(text, "text")?).map_err(|e| Failure::new(PolymuStatus::ParseError, e))?;
        boxed_formula(out, phi);
        Ok(())
    })
}

/// # Safety
/// `phi` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_free(phi: *mut PolymuFormula) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// Concrete syntax of the formula; free with [`polymu_string_free`].
/// Returns null if `phi` is null.
///
/// # Safety
/// `phi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_to_string(phi: *const PolymuFormula) -> *mut c_char {
    match phi.as_ref() {
        Some(phi) => into_c_string(phi.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Largest position mentioned by the formula (0 if none).
///
/// # Safety
/// `phi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_arity(phi: *const PolymuFormula) -> usize {
    phi.as_ref().map_or(0, |phi| phi.0.arity())
}

/// Σ and Π levels of the formula at its own arity.
///
/// # Safety
/// `phi` must be a live handle; `sigma` and `pi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_levels(
    phi: *const PolymuFormula,
    sigma: *mut usize,
    pi: *mut usize,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let (sigma, pi) = (out_arg(sigma, "sigma")?, out_arg(pi, "pi")?);
        let info = alternation_depth(&phi.0);
        *sigma = info.sigma_level;
        *pi = info.pi_level;
        Ok(())
    })
}

/// Rewrites every replacement into simple swaps and copies.
///
/// # Safety
/// `phi` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_normalize(
    phi: *const PolymuFormula,
    out: *mut *mut PolymuFormula,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let out = out_arg(out, "out")?;
        boxed_formula(out, normalize_replacements(&phi.0));
        Ok(())
    })
}

/// Negation pushed to the literals.
///
/// # Safety
/// `phi` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polymu_formula_negate(
    phi: *const PolymuFormula,
    out: *mut *mut PolymuFormula,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let out = out_arg(out, "out")?;
        boxed_formula(out, phi.0.negation());
        Ok(())
    })
}

/// Parses the line-based LTS format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polymu_lts_parse(text: *const c_char, out: *mut *mut PolymuLts) -> PolymuStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let lts = parse_lts(str_arg(text, "text")?).map_err(|e| Failure::new(PolymuStatus::ParseError, e))?;
        boxed_lts(out, lts);
        Ok(())
    })
}

/// # Safety
/// `lts` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn polymu_lts_free(lts: *mut PolymuLts) {
    if !lts.is_null() {
        drop(Box::from_raw(lts));
    }
}

/// # Safety
/// `lts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polymu_lts_num_states(lts: *const PolymuLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.num_states())
}

/// # Safety
/// `lts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polymu_lts_init(lts: *const PolymuLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.init())
}

/// Text form of the system; free with [`polymu_string_free`].
///
/// # Safety
/// `lts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polymu_lts_to_string(lts: *const PolymuLts) -> *mut c_char {
    match lts.as_ref() {
        Some(l) => into_c_string(l.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Decides `lts, tuple ⊨ phi`. A null `tuple` with `len == 0` is the empty
/// tuple.
///
/// # Safety
/// Handles must be live; `tuple` must point to `len` readable values; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn polymu_check(
    engine_: PolymuEngine,
    phi: *const PolymuFormula,
    lts: *const PolymuLts,
    tuple: *const usize,
    len: usize,
    out: *mut bool,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let lts = ref_arg(lts, "lts")?;
        let out = out_arg(out, "out")?;
        let tuple: &[usize] = if len == 0 {
            &[]
        } else if tuple.is_null() {
            return Err(Failure::new(PolymuStatus::NullArgument, "tuple is null"));
        } else {
            std::slice::from_raw_parts(tuple, len)
        };
        *out = polymu::holds(engine(engine_), &phi.0, &lts.0, tuple)
            .map_err(|e| Failure::new(PolymuStatus::EvaluationError, e))?;
        Ok(())
    })
}

/// Whether states `s` and `t` are bisimilar.
///
/// # Safety
/// `lts` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn polymu_bisimilar(lts: *const PolymuLts, s: usize, t: usize, out: *mut bool) -> PolymuStatus {
    guard(|| {
        let lts = ref_arg(lts, "lts")?;
        let out = out_arg(out, "out")?;
        *out = bisim::bisimilar(&lts.0, s, t).map_err(invalid)?;
        Ok(())
    })
}

/// Encodes a closed formula as a transition system over the propositions
/// `props`, or over the fixed ten-letter signature when `fixed` is set (then
/// `k` bounds the arity and `props` is ignored).
///
/// # Safety
/// `phi` must be live; `props` must point to `nprops` NUL-terminated strings
/// (may be null when `nprops == 0`); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn polymu_encode(
    phi: *const PolymuFormula,
    fixed: bool,
    k: usize,
    props: *const *const c_char,
    nprops: usize,
    out: *mut *mut PolymuLts,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let out = out_arg(out, "out")?;
        let lts = if fixed {
            fixed_sig::encode_lts_fixed(&phi.0, k)
        } else {
            diagonal::encode_lts(&phi.0, &props_arg(props, nprops)?)
        }
        .map_err(invalid)?;
        boxed_lts(out, lts);
        Ok(())
    })
}

/// The simulating formula of arity `k + 1` and level `m`; `dual` selects the
/// Π variant.
///
/// # Safety
/// As for [`polymu_encode`].
#[no_mangle]
pub unsafe extern "C" fn polymu_diagonal_formula(
    k: usize,
    m: usize,
    fixed: bool,
    props: *const *const c_char,
    nprops: usize,
    dual: bool,
    out: *mut *mut PolymuFormula,
) -> PolymuStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let phi = if fixed {
            fixed_sig::diagonal_formula_fixed(k, m, dual)
        } else {
            diagonal::diagonal_formula(k, m, &props_arg(props, nprops)?, dual)
        }
        .map_err(invalid)?;
        boxed_formula(out, phi);
        Ok(())
    })
}

/// Evaluates `phi` and the simulating formula on the encoding of `phi`.
///
/// # Safety
/// As for [`polymu_encode`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn polymu_diagonal_check(
    phi: *const PolymuFormula,
    k: usize,
    m: usize,
    class_: PolymuClass,
    engine_: PolymuEngine,
    fixed: bool,
    props: *const *const c_char,
    nprops: usize,
    out: *mut PolymuDiagReport,
) -> PolymuStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        let out = out_arg(out, "out")?;
        let (class_, engine_) = (class(class_), engine(engine_));
        let r = if fixed {
            fixed_sig::diagonal_check_fixed(&phi.0, k, m, class_, engine_)
        } else {
            diagonal::diagonal_check(&phi.0, k, m, &props_arg(props, nprops)?, class_, engine_)
        }
        .map_err(invalid)?;
        *out = PolymuDiagReport {
            phi_holds: r.phi_holds,
            diag_holds: r.diag_holds,
            states: r.states,
        };
        Ok(())
    })
}
