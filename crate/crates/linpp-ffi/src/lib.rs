//! C ABI for the linpp library.
//!
//! All structured values cross the boundary either as opaque handles
//! (`LinppTower`, `LinppSpec`, `LinppInverse`) or as JSON / compact
//! coefficient strings in the same formats the CLI uses. Every function
//! returns a `LinppStatus`; on failure a thread-local message is readable
//! through `linpp_last_error_message` until the next failing call on the
//! same thread.
//!
//! Memory rules: every `*_new`/`*_from_json`/`construct*`/`invert` output
//! handle is released with the matching `*_free`; strings returned through
//! `char **` are released with `linpp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Arc;

use linpp::error::Error;
use linpp::field_tower::{FieldTower, Level};
use linpp::oracle;
use linpp::polyring::Poly;
use linpp::pp_engine::{
    check_pp_general, construct_cpp_from_base, construct_from_base_pp,
    construct_variant_from_base_pp, invert_trace_pp, invert_variant_pp, BaseConstructInput,
    InverseSpec, PpSpec,
};
use linpp::serial;

/// Status codes mirroring the library error set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinppStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    NonPrime = 3,
    DegenerateDegree = 4,
    TowerTooLarge = 5,
    DivisionByZero = 6,
    LevelMismatch = 7,
    BoundExceeded = 8,
    BothZero = 9,
    NotCoprime = 10,
    DuplicateNode = 11,
    ZeroPolynomial = 12,
    NotADivisor = 13,
    NotARoot = 14,
    HypothesisViolated = 15,
    PreconditionFailed = 16,
    KNotUnitValued = 17,
    InvalidA = 18,
    InvalidDelta = 19,
    NoSolution = 20,
    NotAPermutation = 21,
    BaseNotPp = 22,
    BaseNotCpp = 23,
    HNotCoprime = 24,
    HConditionFailed = 25,
    RejectionCapExceeded = 26,
    UnsupportedDivisor = 27,
    InvalidInput = 28,
    JsonError = 29,
    BufferTooSmall = 30,
}

/// Opaque tower handle.
pub struct LinppTower {
    inner: Arc<FieldTower>,
}

/// Opaque permutation-spec handle.
pub struct LinppSpec {
    inner: PpSpec,
}

/// Opaque inverse-spec handle.
pub struct LinppInverse {
    inner: InverseSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> LinppStatus {
    match err {
        Error::NonPrime(_) => LinppStatus::NonPrime,
        Error::DegenerateDegree => LinppStatus::DegenerateDegree,
        Error::TowerTooLarge => LinppStatus::TowerTooLarge,
        Error::DivisionByZero => LinppStatus::DivisionByZero,
        Error::LevelMismatch => LinppStatus::LevelMismatch,
        Error::BoundExceeded { .. } => LinppStatus::BoundExceeded,
        Error::BothZero => LinppStatus::BothZero,
        Error::NotCoprime => LinppStatus::NotCoprime,
        Error::DuplicateNode => LinppStatus::DuplicateNode,
        Error::ZeroPolynomial => LinppStatus::ZeroPolynomial,
        Error::NotADivisor => LinppStatus::NotADivisor,
        Error::NotARoot => LinppStatus::NotARoot,
        Error::HypothesisViolated => LinppStatus::HypothesisViolated,
        Error::PreconditionFailed(_) => LinppStatus::PreconditionFailed,
        Error::KNotUnitValued => LinppStatus::KNotUnitValued,
        Error::InvalidA => LinppStatus::InvalidA,
        Error::InvalidDelta => LinppStatus::InvalidDelta,
        Error::NoSolution => LinppStatus::NoSolution,
        Error::NotAPermutation => LinppStatus::NotAPermutation,
        Error::BaseNotPp => LinppStatus::BaseNotPp,
        Error::BaseNotCpp => LinppStatus::BaseNotCpp,
        Error::HNotCoprime => LinppStatus::HNotCoprime,
        Error::HConditionFailed => LinppStatus::HConditionFailed,
        Error::RejectionCapExceeded => LinppStatus::RejectionCapExceeded,
        Error::UnsupportedDivisor => LinppStatus::UnsupportedDivisor,
        Error::InvalidInput(_) => LinppStatus::InvalidInput,
        Error::Json(_) => LinppStatus::JsonError,
    }
}

fn fail(err: Error) -> LinppStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string or the call fails cleanly
/// only when it is null; a dangling pointer is undefined behavior.
unsafe fn cstr_in<'a>(ptr: *const c_char) -> Result<&'a str, LinppStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(LinppStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        LinppStatus::InvalidUtf8
    })
}

fn string_out(s: String, out: *mut *mut c_char) -> LinppStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("output string contained an interior NUL");
            return LinppStatus::InvalidInput;
        }
    };
    unsafe { *out = c.into_raw() };
    LinppStatus::Ok
}

macro_rules! require_nonnull {
    ($($ptr:expr),+) => {
        $(
            if $ptr.is_null() {
                set_error("null argument");
                return LinppStatus::NullArgument;
            }
        )+
    };
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread. Never free this pointer.
#[no_mangle]
pub extern "C" fn linpp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Frees a string returned through a `char **` output.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn linpp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the deterministic tower F_p ⊆ F_{p^k} ⊆ F_{q^n}.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn linpp_tower_new(
    p: u64,
    k: u32,
    n: u32,
    enum_bound: u64,
    out: *mut *mut LinppTower,
) -> LinppStatus {
    require_nonnull!(out);
    let bound = if enum_bound == 0 {
        linpp::DEFAULT_ENUM_BOUND
    } else {
        enum_bound
    };
    match FieldTower::build_with_bound(p, k, n, bound) {
        Ok(tower) => {
            *out = Box::into_raw(Box::new(LinppTower { inner: tower }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `tower` must come from `linpp_tower_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn linpp_tower_free(tower: *mut LinppTower) {
    if !tower.is_null() {
        drop(Box::from_raw(tower));
    }
}

/// Number of elements of F_{q^n} (the value-table length).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn linpp_tower_field_size(
    tower: *const LinppTower,
    out: *mut u64,
) -> LinppStatus {
    require_nonnull!(tower, out);
    let qn = (*tower).inner.qn();
    if qn > u64::MAX as u128 {
        set_error("field size exceeds u64");
        return LinppStatus::TowerTooLarge;
    }
    *out = qn as u64;
    LinppStatus::Ok
}

/// Tower description as JSON.
///
/// # Safety
/// Pointers must be valid; free the output with `linpp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_tower_to_json(
    tower: *const LinppTower,
    out: *mut *mut c_char,
) -> LinppStatus {
    require_nonnull!(tower, out);
    let v = serial::tower_to_json(&(*tower).inner);
    string_out(serial::to_pretty_string(&v), out)
}

/// Factorization of x^n - 1 over F_q as a factor_set JSON artifact.
///
/// # Safety
/// Pointers must be valid; free the output with `linpp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_factor_to_json(
    tower: *const LinppTower,
    out: *mut *mut c_char,
) -> LinppStatus {
    require_nonnull!(tower, out);
    match linpp::cyclo_factor::factor_xn_minus_1(&(*tower).inner) {
        Ok(fs) => string_out(
            serial::to_pretty_string(&serial::factor_set_to_json(&fs)),
            out,
        ),
        Err(e) => fail(e),
    }
}

unsafe fn parse_fq_poly(
    tower: &FieldTower,
    s: *const c_char,
) -> Result<Poly, LinppStatus> {
    let s = cstr_in(s)?;
    serial::poly_from_compact(tower, Level::Fq, s).map_err(|e| fail(e))
}

/// Builds a permutation of F_{q^n} from a base permutation `b` of F_q.
/// `b`, `h`, `k` use the compact coefficient syntax; `k` may be null for
/// the constant 1.
///
/// # Safety
/// Pointers must be valid; free the spec with `linpp_spec_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_construct(
    tower: *const LinppTower,
    b: *const c_char,
    h: *const c_char,
    k: *const c_char,
    seed: u64,
    out: *mut *mut LinppSpec,
) -> LinppStatus {
    require_nonnull!(tower, out);
    let tw = &(*tower).inner;
    let input = BaseConstructInput {
        b: match parse_fq_poly(tw, b) {
            Ok(p) => p,
            Err(s) => return s,
        },
        h: match parse_fq_poly(tw, h) {
            Ok(p) => p,
            Err(s) => return s,
        },
        k: if k.is_null() {
            Poly::one(tw, Level::Fq)
        } else {
            match parse_fq_poly(tw, k) {
                Ok(p) => p,
                Err(s) => return s,
            }
        },
        sampler_seed: seed,
    };
    match construct_from_base_pp(tw, &input) {
        Ok((_, spec)) => {
            *out = Box::into_raw(Box::new(LinppSpec { inner: spec }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Complete-permutation lift with k = 1.
///
/// # Safety
/// Same contracts as `linpp_construct`.
#[no_mangle]
pub unsafe extern "C" fn linpp_construct_cpp(
    tower: *const LinppTower,
    b: *const c_char,
    h: *const c_char,
    seed: u64,
    out: *mut *mut LinppSpec,
) -> LinppStatus {
    require_nonnull!(tower, out);
    let tw = &(*tower).inner;
    let b = match parse_fq_poly(tw, b) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let h = match parse_fq_poly(tw, h) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match construct_cpp_from_base(tw, &b, &h, seed) {
        Ok((_, spec)) => {
            *out = Box::into_raw(Box::new(LinppSpec { inner: spec }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Twisted-divisor lift: `a` is a compact element of F_q with a^n = 1.
///
/// # Safety
/// Same contracts as `linpp_construct`.
#[no_mangle]
pub unsafe extern "C" fn linpp_construct_variant(
    tower: *const LinppTower,
    b: *const c_char,
    a: *const c_char,
    h: *const c_char,
    k: *const c_char,
    seed: u64,
    out: *mut *mut LinppSpec,
) -> LinppStatus {
    require_nonnull!(tower, out);
    let tw = &(*tower).inner;
    let b = match parse_fq_poly(tw, b) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let a = match cstr_in(a) {
        Ok(s) => match serial::elem_from_compact(tw, Level::Fq, s) {
            Ok(e) => e,
            Err(e) => return fail(e),
        },
        Err(s) => return s,
    };
    let h = match parse_fq_poly(tw, h) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let k = if k.is_null() {
        Poly::one(tw, Level::Fq)
    } else {
        match cstr_in(k) {
            Ok(s) => {
                let level = match serial::detect_compact_level(tw, s) {
                    Ok(l) => l,
                    Err(e) => return fail(e),
                };
                match serial::poly_from_compact(tw, level, s) {
                    Ok(p) => p,
                    Err(e) => return fail(e),
                }
            }
            Err(s) => return s,
        }
    };
    match construct_variant_from_base_pp(tw, &b, &a, &h, &k, seed) {
        Ok((_, spec)) => {
            *out = Box::into_raw(Box::new(LinppSpec { inner: spec }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `spec` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_free(spec: *mut LinppSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Parses a pp_spec JSON artifact. `enum_bound` of 0 means the default.
///
/// # Safety
/// Pointers must be valid; free the spec with `linpp_spec_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_from_json(
    json: *const c_char,
    enum_bound: u64,
    out: *mut *mut LinppSpec,
) -> LinppStatus {
    require_nonnull!(out);
    let text = match cstr_in(json) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let bound = if enum_bound == 0 {
        linpp::DEFAULT_ENUM_BOUND
    } else {
        enum_bound
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return fail(Error::Json(e)),
    };
    match serial::pp_spec_from_json(&value, bound) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(LinppSpec { inner: spec }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// Pointers must be valid; free the output with `linpp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_to_json(
    spec: *const LinppSpec,
    out: *mut *mut c_char,
) -> LinppStatus {
    require_nonnull!(spec, out);
    string_out(
        serial::to_pretty_string(&serial::pp_spec_to_json(&(*spec).inner)),
        out,
    )
}

/// General permutation criterion (gcd condition plus reduced-map
/// injectivity).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_check_criterion(
    spec: *const LinppSpec,
    out: *mut bool,
) -> LinppStatus {
    require_nonnull!(spec, out);
    match check_pp_general(&(*spec).inner) {
        Ok(v) => {
            *out = v.is_pp;
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Brute-force permutation oracle over the whole field.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_is_permutation(
    spec: *const LinppSpec,
    out: *mut bool,
) -> LinppStatus {
    require_nonnull!(spec, out);
    match oracle::is_permutation_spec(&(*spec).inner) {
        Ok(v) => {
            *out = v;
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Writes the full value table (output element indices in canonical order)
/// into `buf`; `len` must be exactly the field size.
///
/// # Safety
/// `buf` must point to `len` writable u64 slots.
#[no_mangle]
pub unsafe extern "C" fn linpp_spec_table(
    spec: *const LinppSpec,
    buf: *mut u64,
    len: usize,
) -> LinppStatus {
    require_nonnull!(spec, buf);
    let spec = &(*spec).inner;
    let tower = spec.tower();
    if (len as u128) != tower.qn() {
        set_error("buffer length must equal the field size");
        return LinppStatus::BufferTooSmall;
    }
    match oracle::value_table(tower, Level::Fqn, |c| spec.evaluate(c)) {
        Ok(table) => {
            std::ptr::copy_nonoverlapping(table.as_ptr(), buf, table.len());
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Inverts a spec whose divisor has the shape (x^n-1)/(x-a).
///
/// # Safety
/// Pointers must be valid; free the output with `linpp_inverse_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_invert(
    spec: *const LinppSpec,
    out: *mut *mut LinppInverse,
) -> LinppStatus {
    require_nonnull!(spec, out);
    let spec = &(*spec).inner;
    let tower = spec.tower();
    let n = tower.n();
    let a = if n == 1 {
        tower.one(Level::Fq)
    } else if spec.g().degree() == Some(n as usize - 1) {
        spec.g().coeff(tower, n as usize - 2)
    } else {
        return fail(Error::UnsupportedDivisor);
    };
    match linpp::cyclo_factor::variant_divisor(tower, &a) {
        Ok(expect) if expect == *spec.g() => {}
        _ => return fail(Error::UnsupportedDivisor),
    }
    let result = if a == tower.one(Level::Fq) {
        invert_trace_pp(tower, spec.f(), spec.h(), spec.k())
    } else {
        invert_variant_pp(tower, spec.f(), &a, spec.h(), spec.k())
    };
    match result {
        Ok(inv) => {
            *out = Box::into_raw(Box::new(LinppInverse { inner: inv }));
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `inv` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn linpp_inverse_free(inv: *mut LinppInverse) {
    if !inv.is_null() {
        drop(Box::from_raw(inv));
    }
}

/// # Safety
/// Pointers must be valid; free the output with `linpp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn linpp_inverse_to_json(
    inv: *const LinppInverse,
    out: *mut *mut c_char,
) -> LinppStatus {
    require_nonnull!(inv, out);
    string_out(
        serial::to_pretty_string(&serial::inverse_spec_to_json(&(*inv).inner)),
        out,
    )
}

/// Value table of the inverse permutation; `len` must equal the field size.
///
/// # Safety
/// `buf` must point to `len` writable u64 slots.
#[no_mangle]
pub unsafe extern "C" fn linpp_inverse_table(
    inv: *const LinppInverse,
    buf: *mut u64,
    len: usize,
) -> LinppStatus {
    require_nonnull!(inv, buf);
    let inv = &(*inv).inner;
    let tower = inv.tower();
    if (len as u128) != tower.qn() {
        set_error("buffer length must equal the field size");
        return LinppStatus::BufferTooSmall;
    }
    match oracle::value_table(tower, Level::Fqn, |c| inv.evaluate(c)) {
        Ok(table) => {
            std::ptr::copy_nonoverlapping(table.as_ptr(), buf, table.len());
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Exhaustive two-sided round-trip check of a spec/inverse pair.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn linpp_verify_inverse(
    spec: *const LinppSpec,
    inv: *const LinppInverse,
    out: *mut bool,
) -> LinppStatus {
    require_nonnull!(spec, inv, out);
    match oracle::verify_inverse(&(*spec).inner, &(*inv).inner) {
        Ok(v) => {
            *out = v;
            LinppStatus::Ok
        }
        Err(e) => fail(e),
    }
}
