use std::ffi::CStr;
use std::ptr;

use lnprm_ffi::*;

fn builtin(index: usize) -> *mut LnprmSample {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { lnprm_builtin_dataset(index, &mut s) },
        LnprmStatus::Ok
    );
    s
}

#[test]
fn estimate_bearings() {
    let s = builtin(1);
    let config = lnprm_search_config_default();
    let mut est = unsafe { std::mem::zeroed::<LnprmEstimate>() };
    assert_eq!(
        unsafe { lnprm_estimate(s, &config, &mut est) },
        LnprmStatus::Ok
    );
    assert!(est.found && est.has_classic);
    assert!((est.lambda - 0.9095).abs() < 1e-9);
    assert!((est.tau + 131.0716).abs() < 1e-3);
    assert!((est.alpha - 144.1139).abs() < 1e-3);
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn estimate_without_maximum() {
    let s = builtin(6);
    let config = lnprm_search_config_default();
    let mut est = unsafe { std::mem::zeroed::<LnprmEstimate>() };
    assert_eq!(
        unsafe { lnprm_estimate(s, &config, &mut est) },
        LnprmStatus::Ok
    );
    assert!(!est.found);
    assert!(est.lambda.is_nan());
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn sample_errors_map_to_status() {
    let mut s = ptr::null_mut();
    let tied = [3.0, 3.0, 1.0, 2.0];
    assert_eq!(
        unsafe { lnprm_sample_new(tied.as_ptr(), 4, &mut s) },
        LnprmStatus::TiedExtreme
    );
    assert!(s.is_null());
    let msg = unsafe { CStr::from_ptr(lnprm_last_error()) }
        .to_str()
        .unwrap();
    assert!(msg.contains("largest"), "{msg}");

    let short = [1.0, 2.0];
    assert_eq!(
        unsafe { lnprm_sample_new(short.as_ptr(), 2, &mut s) },
        LnprmStatus::TooFewObservations
    );
    assert_eq!(
        unsafe { lnprm_sample_new(ptr::null(), 3, &mut s) },
        LnprmStatus::NullPointer
    );
    assert_eq!(
        unsafe { lnprm_builtin_dataset(7, &mut s) },
        LnprmStatus::UnknownDataset
    );

    let ok = [3.0, 1.0, 2.0];
    assert_eq!(
        unsafe { lnprm_sample_new(ok.as_ptr(), 3, &mut s) },
        LnprmStatus::Ok
    );
    assert_eq!(unsafe { lnprm_sample_len(s) }, 3);
    assert!((unsafe { lnprm_tau_star(s) } - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn objective_and_bracket() {
    let s = builtin(1);
    let mut f = 0.0;
    assert_eq!(
        unsafe { lnprm_f_objective(s, 0.90, -129.4756, &mut f) },
        LnprmStatus::Ok
    );
    assert!((f + 43.4380).abs() < 5e-5);

    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(
        unsafe { lnprm_tau_bracket(s, 0.9, &mut lo, &mut hi) },
        LnprmStatus::Ok
    );
    let mut d = 0.0;
    assert_eq!(
        unsafe { lnprm_df_dtau(s, 0.9, hi, &mut d) },
        LnprmStatus::Ok
    );
    assert!(lo < hi && d < 0.0);

    assert_eq!(
        unsafe { lnprm_f_objective(s, 0.9, lo - 1.0, &mut f) },
        LnprmStatus::DomainViolation
    );
    assert_eq!(
        unsafe { lnprm_f_objective(s, 0.0, 1.0, &mut f) },
        LnprmStatus::InvalidLambda
    );
    assert_eq!(
        unsafe { lnprm_f_objective(s, 0.9, -129.0, ptr::null_mut()) },
        LnprmStatus::NullPointer
    );
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn profile_handles() {
    let s = builtin(1);
    let config = lnprm_search_config_default();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { lnprm_profile_trace(s, &config, LnprmBranch::Positive, &mut p) },
        LnprmStatus::Ok
    );
    let len = unsafe { lnprm_profile_len(p) };
    assert!(len > 20);
    let mut pt = unsafe { std::mem::zeroed::<LnprmProfilePoint>() };
    assert_eq!(
        unsafe { lnprm_profile_point(p, 17, &mut pt) },
        LnprmStatus::Ok
    );
    assert!((pt.lambda - 0.90).abs() < 1e-9);
    assert!((pt.tau0 + 129.4756).abs() < 5e-5);
    assert_eq!(
        unsafe { lnprm_profile_point(p, len, &mut pt) },
        LnprmStatus::IndexOutOfRange
    );
    unsafe { lnprm_profile_free(p) };
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn invalid_config_is_rejected() {
    let s = builtin(2);
    let mut config = lnprm_search_config_default();
    config.eps1 = -1.0;
    let mut est = unsafe { std::mem::zeroed::<LnprmEstimate>() };
    assert_eq!(
        unsafe { lnprm_estimate(s, &config, &mut est) },
        LnprmStatus::InvalidConfig
    );
    unsafe { lnprm_sample_free(s) };
}

#[test]
fn status_messages_are_static() {
    for status in [
        LnprmStatus::Ok,
        LnprmStatus::Panic,
        LnprmStatus::IndexOutOfRange,
    ] {
        let text = unsafe { CStr::from_ptr(lnprm_status_message(status)) };
        assert!(!text.to_bytes().is_empty());
    }
    unsafe { lnprm_sample_free(ptr::null_mut()) };
    unsafe { lnprm_profile_free(ptr::null_mut()) };
}
