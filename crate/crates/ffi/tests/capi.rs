//! Exercise the C ABI the way a foreign binding would: through raw pointers,
//! NUL-terminated strings, and explicit frees.

use std::ffi::{CStr, CString};
use std::ptr;

use siphi_link_ffi::*;

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(siphi_version()) };
    assert!(!version.to_str().unwrap().is_empty());
}

#[test]
fn builtin_platform_handles() {
    assert_eq!(siphi_builtin_platform_count(), 3);
    let p = siphi_platform_builtin(0);
    assert!(!p.is_null());
    let json_ptr = unsafe { siphi_platform_to_json(p) };
    let json = unsafe { CStr::from_ptr(json_ptr) }.to_str().unwrap();
    let value: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(value["name"], "45nm-soi");
    assert_eq!(value["propagation_loss"], 3.7);
    unsafe {
        siphi_string_free(json_ptr);
        siphi_platform_free(p);
    }
    assert!(siphi_platform_builtin(99).is_null());
}

#[test]
fn budget_through_the_abi_matches_reference_numbers() {
    let p = siphi_platform_builtin(0);
    let v = unsafe { siphi_variant_new(p, false, false, false) };
    assert!(!v.is_null());
    let settings = siphi_settings_default();
    let mut budget = std::mem::MaybeUninit::<SiphiBudget>::uninit();
    let status = unsafe { siphi_evaluate_budget(v, &settings, 1.0, 42, 12.0, budget.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::Ok);
    let budget = unsafe { budget.assume_init() };
    assert!((budget.opb_per_wavelength_db - 19.945).abs() < 1e-9);
    assert!((budget.opb_per_waveguide_db - 37.645).abs() < 1e-9);
    assert!((budget.loss_total_db - 10.08).abs() < 1e-9);
    assert!(budget.per_wavelength_ok && budget.per_waveguide_ok);
    unsafe {
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
}

#[test]
fn unbounded_cap_maps_to_infinity() {
    let p = siphi_platform_builtin(0);
    let v = unsafe { siphi_variant_new(p, false, false, true) };
    let settings = siphi_settings_default();
    let mut budget = std::mem::MaybeUninit::<SiphiBudget>::uninit();
    let status = unsafe { siphi_evaluate_budget(v, &settings, 1.0, 4, 12.0, budget.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::Ok);
    assert!(unsafe { budget.assume_init() }
        .opb_per_waveguide_db
        .is_infinite());
    unsafe {
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
}

#[test]
fn optimize_through_the_abi() {
    let p = siphi_platform_builtin(0);
    let v = unsafe { siphi_variant_new(p, true, false, false) };
    let settings = siphi_settings_default();
    let mut optimum = std::mem::MaybeUninit::<SiphiOptimum>::uninit();
    let status = unsafe { siphi_optimize(v, &settings, 10.0, optimum.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::Ok);
    let optimum = unsafe { optimum.assume_init() };
    assert!(optimum.feasible);
    assert_eq!(optimum.br_gbps, 12.0);
    assert_eq!(optimum.aggregate_bw_gbps, optimum.n_lambda as f64 * 12.0);
    assert!(optimum.epb_pj.is_finite());
    unsafe {
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
}

#[test]
fn infeasible_optimum_reports_nan_epb() {
    let p = siphi_platform_builtin(2); // poly-si vanilla never closes
    let v = unsafe { siphi_variant_new(p, false, false, false) };
    let settings = siphi_settings_default();
    let mut optimum = std::mem::MaybeUninit::<SiphiOptimum>::uninit();
    let status = unsafe { siphi_optimize(v, &settings, 5.0, optimum.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::Ok);
    let optimum = unsafe { optimum.assume_init() };
    assert!(!optimum.feasible);
    assert_eq!(optimum.n_lambda, 0);
    assert!(optimum.epb_pj.is_nan());
    unsafe {
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
}

#[test]
fn status_codes_cover_bad_arguments() {
    let settings = siphi_settings_default();
    let mut optimum = std::mem::MaybeUninit::<SiphiOptimum>::uninit();
    let status = unsafe { siphi_optimize(ptr::null(), &settings, 1.0, optimum.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::NullArgument);

    let p = siphi_platform_builtin(0);
    let v = unsafe { siphi_variant_new(p, false, false, false) };
    let status = unsafe { siphi_optimize(v, &settings, -2.0, optimum.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::InvalidArgument);

    let mut bad = settings;
    bad.laser_wallplug_efficiency = 0.0;
    let status = unsafe { siphi_optimize(v, &bad, 1.0, optimum.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::InvalidArgument);

    let mut budget = std::mem::MaybeUninit::<SiphiBudget>::uninit();
    let status = unsafe { siphi_evaluate_budget(v, &settings, 1.0, 0, 12.0, budget.as_mut_ptr()) };
    assert_eq!(status, SiphiStatus::InvalidArgument);

    unsafe {
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
}

#[test]
fn platform_json_round_trip() {
    let p = siphi_platform_builtin(1);
    let json_ptr = unsafe { siphi_platform_to_json(p) };
    let mut reparsed: *mut SiphiPlatform = ptr::null_mut();
    let status = unsafe { siphi_platform_from_json(json_ptr, &mut reparsed) };
    assert_eq!(status, SiphiStatus::Ok);
    assert!(!reparsed.is_null());
    unsafe {
        siphi_string_free(json_ptr);
        siphi_platform_free(reparsed);
        siphi_platform_free(p);
    }

    let garbage = CString::new("{not json").unwrap();
    let mut out: *mut SiphiPlatform = ptr::null_mut();
    let status = unsafe { siphi_platform_from_json(garbage.as_ptr(), &mut out) };
    assert_eq!(status, SiphiStatus::InvalidJson);
}

#[test]
fn grid_csv_over_the_abi() {
    let settings = siphi_settings_default();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { siphi_grid_csv(&settings, ptr::null(), 10.0, 8.0, &mut out) };
    assert_eq!(status, SiphiStatus::Ok);
    let csv = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { siphi_string_free(out) };
    assert_eq!(csv.lines().count(), 25);
    assert!(csv.starts_with("platform,minimized_loss,wide_fsr,increased_maop,class,"));
}

#[test]
fn sweep_json_over_the_abi() {
    let p = siphi_platform_builtin(0);
    let v = unsafe { siphi_variant_new(p, true, true, false) };
    let settings = siphi_settings_default();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { siphi_sweep_json(v, &settings, 10.0, 1.0, &mut out) };
    assert_eq!(status, SiphiStatus::Ok);
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe {
        siphi_string_free(out);
        siphi_variant_free(v);
        siphi_platform_free(p);
    }
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["points"].as_array().unwrap().len(), 10);
}

#[test]
fn generated_header_exists_and_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/siphi_link.h"))
            .expect("cbindgen header generated at build time");
    for symbol in [
        "siphi_version",
        "siphi_settings_default",
        "siphi_platform_builtin",
        "siphi_variant_new",
        "siphi_evaluate_budget",
        "siphi_optimize",
        "siphi_grid_csv",
        "siphi_string_free",
        "SIPHI_STATUS_OK",
        "typedef struct SiphiPlatform SiphiPlatform;",
    ] {
        assert!(header.contains(symbol), "header is missing `{symbol}`");
    }
}
