//! C ABI for `numfield-gcd`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `nfg_*_new`/`nfg_*_parse` call and released with the matching `*_free`.
//! Fallible calls return an [`NfgStatus`]; the message for the last failure
//! on the calling thread is available from [`nfg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use numfield_gcd::{
    modular_gcd_with_stats, parse_poly, parse_tower, trial_divide, Error, GcdOptions, GcdOutcome, RPoly, RingSpec,
    Schedule,
};

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Bad tower, option or operand combination.
    Invalid = 4,
    RingMismatch = 5,
    NotDivisible = 6,
    /// Ran out of primes or time.
    Exhausted = 7,
    Panic = 8,
}

/// Kind of a gcd outcome.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfgOutcomeKind {
    Gcd = 0,
    ZeroDivisor = 1,
}

/// Options for [`nfg_gcd`]; start from [`nfg_gcd_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct NfgGcdOptions {
    pub prime_bits: u32,
    pub seed: u64,
    pub cofactor: bool,
    /// Reserved prime for the division pre-test, 0 for none.
    pub precheck_prime: u64,
    pub fibonacci_schedule: bool,
    pub threads: u32,
}

/// A tower `Q[z_1..z_n]/(m_1..m_n)` with a main variable.
pub struct NfgRing {
    spec: Arc<RingSpec>,
}

/// A polynomial in the main variable over a ring.
pub struct NfgPoly {
    poly: RPoly,
}

/// Result of [`nfg_gcd`].
pub struct NfgOutcome {
    outcome: GcdOutcome,
    primes_used: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> NfgStatus {
    match e {
        Error::Parse(_) => NfgStatus::Parse,
        Error::RingMismatch => NfgStatus::RingMismatch,
        Error::PrimeBudget(_) | Error::PrimesExhausted(_) | Error::Timeout => NfgStatus::Exhausted,
        _ => NfgStatus::Invalid,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (NfgStatus, String)>) -> NfgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NfgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NfgStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (NfgStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NfgStatus, String)> {
    if p.is_null() {
        return Err((NfgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (NfgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, (NfgStatus, String)> {
    p.as_ref().ok_or_else(|| (NfgStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(out: *mut *mut T) -> Result<(), (NfgStatus, String)> {
    if out.is_null() {
        Err((NfgStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nfg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a tower from `n_exts` extension polynomials, innermost first.
///
/// # Safety
/// `exts` must point to `n_exts` NUL-terminated strings (or be null when
/// `n_exts` is 0); `main_var` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nfg_ring_new(
    exts: *const *const c_char,
    n_exts: usize,
    main_var: *const c_char,
    out: *mut *mut NfgRing,
) -> NfgStatus {
    guard(|| {
        out_arg(out)?;
        if exts.is_null() && n_exts > 0 {
            return Err((NfgStatus::NullPointer, "extension list is null".into()));
        }
        let texts = (0..n_exts).map(|i| str_arg(*exts.add(i), "extension")).collect::<Result<Vec<_>, _>>()?;
        let var = str_arg(main_var, "main variable")?;
        let spec = parse_tower(&texts, var).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NfgRing { spec }));
        Ok(())
    })
}

/// # Safety
/// `ring` must come from [`nfg_ring_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn nfg_ring_free(ring: *mut NfgRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Parses a polynomial over `ring`.
///
/// # Safety
/// `ring` must be valid, `text` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfg_poly_parse(ring: *const NfgRing, text: *const c_char, out: *mut *mut NfgPoly) -> NfgStatus {
    guard(|| {
        out_arg(out)?;
        let ring = ref_arg(ring, "ring")?;
        let text = str_arg(text, "polynomial")?;
        let poly = parse_poly(text, &ring.spec).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NfgPoly { poly }));
        Ok(())
    })
}

/// # Safety
/// `poly` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nfg_poly_free(poly: *mut NfgPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree in the main variable, or -1 for zero.
///
/// # Safety
/// `poly` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn nfg_poly_degree(poly: *const NfgPoly) -> i64 {
    poly.as_ref().and_then(|p| p.poly.degree()).map_or(-1, |d| d as i64)
}

/// Text form of `poly`; release with [`nfg_string_free`]. Null on failure.
///
/// # Safety
/// `poly` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn nfg_poly_to_string(poly: *const NfgPoly) -> *mut c_char {
    let mut s = ptr::null_mut();
    let status = guard(|| {
        let p = ref_arg(poly, "polynomial")?;
        s = CString::new(p.poly.to_string()).unwrap().into_raw();
        Ok(())
    });
    if status == NfgStatus::Ok {
        s
    } else {
        ptr::null_mut()
    }
}

/// # Safety
/// `s` must come from [`nfg_poly_to_string`] or be null.
#[no_mangle]
pub unsafe extern "C" fn nfg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact quotient `a / b`; [`NfgStatus::NotDivisible`] when `b` does not divide `a`.
///
/// # Safety
/// `a`, `b` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfg_divide(a: *const NfgPoly, b: *const NfgPoly, out: *mut *mut NfgPoly) -> NfgStatus {
    guard(|| {
        out_arg(out)?;
        let (a, b) = (ref_arg(a, "dividend")?, ref_arg(b, "divisor")?);
        match trial_divide(&a.poly, &b.poly).map_err(lib_err)? {
            Some(poly) => {
                *out = Box::into_raw(Box::new(NfgPoly { poly }));
                Ok(())
            }
            None => Err((NfgStatus::NotDivisible, "divisor does not divide exactly".into())),
        }
    })
}

#[no_mangle]
pub extern "C" fn nfg_gcd_options_default() -> NfgGcdOptions {
    let d = GcdOptions::default();
    NfgGcdOptions {
        prime_bits: d.prime_bits,
        seed: d.seed,
        cofactor: d.cofactor_mode,
        precheck_prime: 0,
        fibonacci_schedule: false,
        threads: 1,
    }
}

/// Monic gcd of `f1` and `f2` by the modular algorithm.
///
/// # Safety
/// `f1`, `f2` must be valid; `opts` valid or null for defaults; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfg_gcd(
    f1: *const NfgPoly,
    f2: *const NfgPoly,
    opts: *const NfgGcdOptions,
    out: *mut *mut NfgOutcome,
) -> NfgStatus {
    guard(|| {
        out_arg(out)?;
        let (f1, f2) = (ref_arg(f1, "f1")?, ref_arg(f2, "f2")?);
        let o = opts.as_ref().copied().unwrap_or_else(|| nfg_gcd_options_default());
        let opts = GcdOptions {
            prime_bits: o.prime_bits,
            seed: o.seed,
            cofactor_mode: o.cofactor,
            precheck_prime: (o.precheck_prime != 0).then_some(o.precheck_prime),
            schedule: if o.fibonacci_schedule { Schedule::Fibonacci } else { Schedule::EveryPrime },
            threads: o.threads.max(1) as usize,
            ..GcdOptions::default()
        };
        let (outcome, stats) = modular_gcd_with_stats(&f1.poly, &f2.poly, &opts).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NfgOutcome { outcome, primes_used: stats.primes_used }));
        Ok(())
    })
}

/// # Safety
/// `o` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nfg_outcome_kind(o: *const NfgOutcome) -> NfgOutcomeKind {
    match o.as_ref().map(|o| &o.outcome) {
        Some(GcdOutcome::ZeroDivisor(_)) => NfgOutcomeKind::ZeroDivisor,
        _ => NfgOutcomeKind::Gcd,
    }
}

/// Extension level of a zero-divisor outcome, 0 for a gcd.
///
/// # Safety
/// `o` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn nfg_outcome_level(o: *const NfgOutcome) -> usize {
    match o.as_ref().map(|o| &o.outcome) {
        Some(GcdOutcome::ZeroDivisor(zd)) => zd.level,
        _ => 0,
    }
}

/// # Safety
/// `o` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn nfg_outcome_primes_used(o: *const NfgOutcome) -> usize {
    o.as_ref().map_or(0, |o| o.primes_used)
}

/// The gcd, or the extension factor for a zero-divisor outcome, as a new polynomial.
///
/// # Safety
/// `o` must be valid or null. The result is freed with [`nfg_poly_free`].
#[no_mangle]
pub unsafe extern "C" fn nfg_outcome_poly(o: *const NfgOutcome) -> *mut NfgPoly {
    match o.as_ref().map(|o| &o.outcome) {
        Some(GcdOutcome::Gcd(g)) => Box::into_raw(Box::new(NfgPoly { poly: g.clone() })),
        Some(GcdOutcome::ZeroDivisor(zd)) => Box::into_raw(Box::new(NfgPoly { poly: zd.factor.clone() })),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `o` must come from [`nfg_gcd`] or be null.
#[no_mangle]
pub unsafe extern "C" fn nfg_outcome_free(o: *mut NfgOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}
