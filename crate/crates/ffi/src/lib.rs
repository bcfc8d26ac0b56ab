//! C interface to `lnprm`.
//!
//! Every fallible function returns an [`LnprmStatus`] and writes its result
//! through an out pointer. Samples and profiles are opaque handles that must
//! be released with their `_free` function. The detailed message of the
//! last failure on the calling thread is available from
//! [`lnprm_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lnprm::search::{self, Branch, ProfileRecord, SearchConfig};
use lnprm::{datasets, math, Error, PrmOutcome, Sample};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LnprmStatus {
    Ok = 0,
    NullPointer = 1,
    TooFewObservations = 2,
    TiedExtreme = 3,
    NonFiniteValue = 4,
    InvalidLambda = 5,
    NegativeLambda = 6,
    DomainViolation = 7,
    AlphaOutOfDomain = 8,
    EmptyProfile = 9,
    InvalidConfig = 10,
    Parse = 11,
    UnknownDataset = 12,
    Io = 13,
    IndexOutOfRange = 14,
    Panic = 15,
}

impl From<&Error> for LnprmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::TooFewObservations(_) => LnprmStatus::TooFewObservations,
            Error::TiedExtreme(_) => LnprmStatus::TiedExtreme,
            Error::NonFiniteValue { .. } => LnprmStatus::NonFiniteValue,
            Error::InvalidLambda(_) => LnprmStatus::InvalidLambda,
            Error::NegativeLambda(_) => LnprmStatus::NegativeLambda,
            Error::DomainViolation { .. } => LnprmStatus::DomainViolation,
            Error::AlphaOutOfDomain { .. } => LnprmStatus::AlphaOutOfDomain,
            Error::EmptyProfile(_) => LnprmStatus::EmptyProfile,
            Error::InvalidConfig(_) => LnprmStatus::InvalidConfig,
            Error::Parse { .. } => LnprmStatus::Parse,
            Error::UnknownDataset(_) => LnprmStatus::UnknownDataset,
            Error::Io(_) => LnprmStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LnprmBranch {
    Positive = 0,
    Negative = 1,
}

/// Search constants. When `use_delta0` is false the first grid point of
/// each branch starts from the population standard deviation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnprmSearchConfig {
    pub use_delta0: bool,
    pub delta0: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub lambda_max_pos: f64,
    pub lambda_min_neg: f64,
    pub dlambda: f64,
}

impl From<LnprmSearchConfig> for SearchConfig {
    fn from(c: LnprmSearchConfig) -> Self {
        SearchConfig {
            delta0: c.use_delta0.then_some(c.delta0),
            eps0: c.eps0,
            eps1: c.eps1,
            eps2: c.eps2,
            lambda_max_pos: c.lambda_max_pos,
            lambda_min_neg: c.lambda_min_neg,
            dlambda: c.dlambda,
        }
    }
}

/// Refined estimate. All parameter fields are NaN when `found` is false;
/// the classic fields are NaN unless `has_classic` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnprmEstimate {
    pub found: bool,
    pub lambda: f64,
    pub tau: f64,
    pub s: f64,
    pub mu: f64,
    pub sigma: f64,
    pub has_classic: bool,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub f_value: f64,
    pub log_likelihood: f64,
    pub lambda_resolution: f64,
}

impl LnprmEstimate {
    fn missing() -> Self {
        LnprmEstimate {
            found: false,
            lambda: f64::NAN,
            tau: f64::NAN,
            s: f64::NAN,
            mu: f64::NAN,
            sigma: f64::NAN,
            has_classic: false,
            alpha: f64::NAN,
            beta: f64::NAN,
            gamma: f64::NAN,
            f_value: f64::NAN,
            log_likelihood: f64::NAN,
            lambda_resolution: f64::NAN,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnprmProfilePoint {
    pub lambda: f64,
    pub tau0: f64,
    pub f_value: f64,
    pub s_hat: f64,
    pub residual: f64,
}

/// Opaque validated sample.
pub struct LnprmSample(Sample);

/// Opaque traced profile branch.
pub struct LnprmProfile(ProfileRecord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), LnprmStatus>) -> LnprmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LnprmStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            remember("internal panic".into());
            LnprmStatus::Panic
        }
    }
}

fn fail(e: Error) -> LnprmStatus {
    let status = LnprmStatus::from(&e);
    remember(e.to_string());
    status
}

fn null() -> LnprmStatus {
    remember("a required pointer argument was null".into());
    LnprmStatus::NullPointer
}

unsafe fn sample_ref<'a>(sample: *const LnprmSample) -> Result<&'a Sample, LnprmStatus> {
    sample.as_ref().map(|s| &s.0).ok_or_else(null)
}

unsafe fn config_from(config: *const LnprmSearchConfig) -> Result<SearchConfig, LnprmStatus> {
    config
        .as_ref()
        .map(|c| SearchConfig::from(*c))
        .ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), LnprmStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn lnprm_status_message(status: LnprmStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        LnprmStatus::Ok => b"ok\0",
        LnprmStatus::NullPointer => b"null pointer argument\0",
        LnprmStatus::TooFewObservations => b"need at least 3 observations\0",
        LnprmStatus::TiedExtreme => b"largest or smallest observation is tied\0",
        LnprmStatus::NonFiniteValue => b"observation is not finite\0",
        LnprmStatus::InvalidLambda => b"lambda must be finite and nonzero\0",
        LnprmStatus::NegativeLambda => b"negative lambda has no classic form\0",
        LnprmStatus::DomainViolation => b"lambda * x + tau must be positive\0",
        LnprmStatus::AlphaOutOfDomain => b"threshold must lie below the smallest observation\0",
        LnprmStatus::EmptyProfile => b"profile branch has no points\0",
        LnprmStatus::InvalidConfig => b"invalid search configuration\0",
        LnprmStatus::Parse => b"parse error\0",
        LnprmStatus::UnknownDataset => b"unknown built-in dataset\0",
        LnprmStatus::Io => b"i/o error\0",
        LnprmStatus::IndexOutOfRange => b"index out of range\0",
        LnprmStatus::Panic => b"internal panic\0",
    };
    text.as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lnprm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn lnprm_search_config_default() -> LnprmSearchConfig {
    let d = SearchConfig::default();
    LnprmSearchConfig {
        use_delta0: d.delta0.is_some(),
        delta0: d.delta0.unwrap_or(f64::NAN),
        eps0: d.eps0,
        eps1: d.eps1,
        eps2: d.eps2,
        lambda_max_pos: d.lambda_max_pos,
        lambda_min_neg: d.lambda_min_neg,
        dlambda: d.dlambda,
    }
}

/// Validates `len` observations and stores a new sample in `*out`.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_sample_new(
    values: *const f64,
    len: usize,
    out: *mut *mut LnprmSample,
) -> LnprmStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            return Err(null());
        }
        let raw = std::slice::from_raw_parts(values, len);
        let sample = Sample::new(raw).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LnprmSample(sample))))
    })
}

/// Built-in dataset `index` (1 to 6).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_builtin_dataset(
    index: usize,
    out: *mut *mut LnprmSample,
) -> LnprmStatus {
    guard(|| {
        let sample = datasets::builtin(index).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LnprmSample(sample))))
    })
}

/// # Safety
/// `sample` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lnprm_sample_free(sample: *mut LnprmSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of observations, 0 for NULL.
///
/// # Safety
/// `sample` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lnprm_sample_len(sample: *const LnprmSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// Population standard deviation, the starting `tau` near `lambda = 0`.
/// NaN for NULL.
///
/// # Safety
/// `sample` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lnprm_tau_star(sample: *const LnprmSample) -> f64 {
    sample.as_ref().map_or(f64::NAN, |s| math::tau_star(&s.0))
}

/// # Safety
/// `sample` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_f_objective(
    sample: *const LnprmSample,
    lambda: f64,
    tau: f64,
    out: *mut f64,
) -> LnprmStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        write(out, math::f_objective(s, lambda, tau).map_err(fail)?)
    })
}

/// # Safety
/// `sample` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_df_dtau(
    sample: *const LnprmSample,
    lambda: f64,
    tau: f64,
    out: *mut f64,
) -> LnprmStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        write(out, math::df_dtau(s, lambda, tau).map_err(fail)?)
    })
}

/// Open interval that contains the root of `dF/dtau` at `lambda`.
///
/// # Safety
/// `sample` must be a live handle; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_tau_bracket(
    sample: *const LnprmSample,
    lambda: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> LnprmStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        if lower.is_null() || upper.is_null() {
            return Err(null());
        }
        let b = math::tau_bracket(s, lambda).map_err(fail)?;
        write(lower, b.lower)?;
        write(upper, b.upper)
    })
}

/// Full search: trace both branches, detect and refine. A sample without a
/// maximum returns `Ok` with `found == false`.
///
/// # Safety
/// `sample` must be a live handle, `config` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_estimate(
    sample: *const LnprmSample,
    config: *const LnprmSearchConfig,
    out: *mut LnprmEstimate,
) -> LnprmStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        let config = config_from(config)?;
        let est = search::estimate(s, &config).map_err(fail)?;
        let result = match &est.refined {
            PrmOutcome::Found(e) => {
                let mut r = LnprmEstimate {
                    found: true,
                    lambda: e.repar.lambda,
                    tau: e.repar.tau,
                    s: e.repar.s,
                    mu: e.extended.mu,
                    sigma: e.extended.sigma,
                    f_value: e.f_value,
                    log_likelihood: e.log_likelihood,
                    lambda_resolution: e.lambda_resolution,
                    ..LnprmEstimate::missing()
                };
                if let Some(c) = e.classic {
                    r.has_classic = true;
                    r.alpha = c.alpha;
                    r.beta = c.beta;
                    r.gamma = c.gamma;
                }
                r
            }
            PrmOutcome::NotFound(_) => LnprmEstimate::missing(),
        };
        write(out, result)
    })
}

/// Traces one branch of the profile on the coarse grid.
///
/// # Safety
/// `sample` must be a live handle, `config` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_profile_trace(
    sample: *const LnprmSample,
    config: *const LnprmSearchConfig,
    branch: LnprmBranch,
    out: *mut *mut LnprmProfile,
) -> LnprmStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        let config = config_from(config)?;
        let branch = match branch {
            LnprmBranch::Positive => Branch::Positive,
            LnprmBranch::Negative => Branch::Negative,
        };
        let rec = search::trace_profile(s, branch, &config).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LnprmProfile(rec))))
    })
}

/// Number of recorded points, 0 for NULL.
///
/// # Safety
/// `profile` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lnprm_profile_len(profile: *const LnprmProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.0.points.len())
}

/// Point `index`, ordered by increasing `|lambda|`.
///
/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lnprm_profile_point(
    profile: *const LnprmProfile,
    index: usize,
    out: *mut LnprmProfilePoint,
) -> LnprmStatus {
    guard(|| {
        let p = profile.as_ref().ok_or_else(null)?;
        let Some(pt) = p.0.points.get(index) else {
            remember(format!(
                "index {index} out of range (len {})",
                p.0.points.len()
            ));
            return Err(LnprmStatus::IndexOutOfRange);
        };
        write(
            out,
            LnprmProfilePoint {
                lambda: pt.lambda,
                tau0: pt.tau0,
                f_value: pt.f_value,
                s_hat: pt.s_hat,
                residual: pt.residual,
            },
        )
    })
}

/// # Safety
/// `profile` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lnprm_profile_free(profile: *mut LnprmProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}
