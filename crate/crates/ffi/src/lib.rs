//! C ABI over the siphi-link library: opaque handles for platforms and link
//! variants, plain structs for results, and status codes for everything that
//! can fail. The generated header lives at `include/siphi_link.h`.
//!
//! Ownership rules: every `*_new`/`*_builtin`/`*_from_json` result must be
//! released with the matching `*_free`; strings returned through out-params
//! must be released with [`siphi_string_free`]. Handles are not reference
//! counted and must not be used after free.

use std::ffi::{c_char, CStr, CString};
use std::num::NonZeroU32;
use std::ptr;

use siphi_link::budget::LinkGeometry;
use siphi_link::explore::{build_grid, sweep};
use siphi_link::optimize::{BitrateSearch, EnergyModel, Optimizer, DEFAULT_MIN_SPACING_LINEWIDTHS};
use siphi_link::platform::{
    apply_pathways, builtin_platforms, FabricationPlatform, LinkVariant, PathwaySet,
};
use siphi_link::report;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiphiStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was out of range or a record failed validation.
    InvalidArgument = 2,
    /// A JSON document failed to parse.
    InvalidJson = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
}

/// Opaque fabrication-platform record.
pub struct SiphiPlatform {
    inner: FabricationPlatform,
}

/// Opaque link variant: a platform with a pathway set applied.
pub struct SiphiVariant {
    inner: LinkVariant,
}

/// Model and search settings shared by all evaluation calls.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SiphiSettings {
    /// How many times the lumped coupling loss is incurred per link (>= 1).
    pub coupler_count: u32,
    /// Minimum channel spacing in filter linewidths (> 0).
    pub min_spacing_linewidths: f64,
    /// Nonzero to search bitrates in 0.5 Gb/s steps instead of the line rate.
    pub br_sweep: bool,
    /// Laser wall-plug efficiency in (0, 1].
    pub laser_wallplug_efficiency: f64,
    /// Thermal tuning power per ring, mW.
    pub tuning_power_per_mrr: f64,
    /// Modulator driver energy, pJ/bit.
    pub driver_energy: f64,
    /// Receiver energy, pJ/bit.
    pub receiver_energy: f64,
}

/// Flattened budget evaluation of one (N, BR) duplet.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SiphiBudget {
    pub opb_per_wavelength_db: f64,
    /// Positive infinity when the per-waveguide cap is unbounded.
    pub opb_per_waveguide_db: f64,
    pub coupling_db: f64,
    pub propagation_db: f64,
    pub modulator_il_db: f64,
    pub filter_il_db: f64,
    pub loss_total_db: f64,
    pub modulator_array_db: f64,
    pub filter_array_db: f64,
    pub penalty_total_db: f64,
    pub p_loss_total_db: f64,
    /// Negative infinity when the per-wavelength check fails outright.
    pub opb_margin_db: f64,
    pub per_wavelength_ok: bool,
    pub per_waveguide_ok: bool,
}

/// The optimizer's chosen duplet.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SiphiOptimum {
    pub n_lambda: u32,
    pub br_gbps: f64,
    pub aggregate_bw_gbps: f64,
    pub error_db: f64,
    pub feasible: bool,
    /// NaN when the cell is infeasible.
    pub epb_pj: f64,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn siphi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Default settings: single coupler pass, 1.3-linewidth spacing floor, fixed
/// line rate, and the default energy coefficients.
#[no_mangle]
pub extern "C" fn siphi_settings_default() -> SiphiSettings {
    let energy = EnergyModel::default();
    SiphiSettings {
        coupler_count: 1,
        min_spacing_linewidths: DEFAULT_MIN_SPACING_LINEWIDTHS,
        br_sweep: false,
        laser_wallplug_efficiency: energy.laser_wallplug_efficiency,
        tuning_power_per_mrr: energy.tuning_power_per_mrr,
        driver_energy: energy.driver_energy,
        receiver_energy: energy.receiver_energy,
    }
}

/// Number of built-in fabrication platforms.
#[no_mangle]
pub extern "C" fn siphi_builtin_platform_count() -> usize {
    builtin_platforms().len()
}

/// New handle to a built-in platform by index, or null when out of range.
#[no_mangle]
pub extern "C" fn siphi_platform_builtin(index: usize) -> *mut SiphiPlatform {
    match builtin_platforms().into_iter().nth(index) {
        Some(inner) => Box::into_raw(Box::new(SiphiPlatform { inner })),
        None => ptr::null_mut(),
    }
}

/// Parse one platform record from JSON (same schema as the platforms file).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn siphi_platform_from_json(
    json: *const c_char,
    out: *mut *mut SiphiPlatform,
) -> SiphiStatus {
    if json.is_null() || out.is_null() {
        return SiphiStatus::NullArgument;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return SiphiStatus::InvalidUtf8,
    };
    let platform: FabricationPlatform = match serde_json::from_str(text) {
        Ok(p) => p,
        Err(_) => return SiphiStatus::InvalidJson,
    };
    if platform.validate().is_err() {
        return SiphiStatus::InvalidArgument;
    }
    *out = Box::into_raw(Box::new(SiphiPlatform { inner: platform }));
    SiphiStatus::Ok
}

/// Serialize a platform record to JSON; free with [`siphi_string_free`].
///
/// # Safety
/// `platform` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn siphi_platform_to_json(platform: *const SiphiPlatform) -> *mut c_char {
    if platform.is_null() {
        return ptr::null_mut();
    }
    let json = serde_json::to_string(&(*platform).inner).expect("platform serializes");
    CString::new(json).expect("no interior NULs").into_raw()
}

/// # Safety
/// `platform` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn siphi_platform_free(platform: *mut SiphiPlatform) {
    if !platform.is_null() {
        drop(Box::from_raw(platform));
    }
}

/// Apply a pathway set to a platform, producing a link variant handle.
///
/// # Safety
/// `platform` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn siphi_variant_new(
    platform: *const SiphiPlatform,
    minimized_loss: bool,
    wide_fsr: bool,
    increased_maop: bool,
) -> *mut SiphiVariant {
    if platform.is_null() {
        return ptr::null_mut();
    }
    let pathways = PathwaySet {
        minimized_loss,
        wide_fsr,
        increased_maop,
    };
    let inner = apply_pathways(&(*platform).inner, pathways);
    Box::into_raw(Box::new(SiphiVariant { inner }))
}

/// # Safety
/// `variant` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn siphi_variant_free(variant: *mut SiphiVariant) {
    if !variant.is_null() {
        drop(Box::from_raw(variant));
    }
}

fn optimizer_from_settings(settings: &SiphiSettings) -> Result<Optimizer, SiphiStatus> {
    if settings.coupler_count < 1
        || !settings.min_spacing_linewidths.is_finite()
        || settings.min_spacing_linewidths <= 0.0
    {
        return Err(SiphiStatus::InvalidArgument);
    }
    let energy = EnergyModel {
        laser_wallplug_efficiency: settings.laser_wallplug_efficiency,
        tuning_power_per_mrr: settings.tuning_power_per_mrr,
        driver_energy: settings.driver_energy,
        receiver_energy: settings.receiver_energy,
    };
    if energy.validate().is_err() {
        return Err(SiphiStatus::InvalidArgument);
    }
    let mut optimizer = Optimizer {
        energy,
        bitrate_search: if settings.br_sweep {
            BitrateSearch::Sweep
        } else {
            BitrateSearch::FixedMax
        },
        min_spacing_linewidths: settings.min_spacing_linewidths,
        ..Optimizer::default()
    };
    optimizer.model.coupler_count = settings.coupler_count;
    Ok(optimizer)
}

/// Evaluate the power budget of one (N, BR) duplet at one length.
///
/// # Safety
/// `variant`, `settings`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn siphi_evaluate_budget(
    variant: *const SiphiVariant,
    settings: *const SiphiSettings,
    length_cm: f64,
    n_lambda: u32,
    br_gbps: f64,
    out: *mut SiphiBudget,
) -> SiphiStatus {
    if variant.is_null() || settings.is_null() || out.is_null() {
        return SiphiStatus::NullArgument;
    }
    let optimizer = match optimizer_from_settings(&*settings) {
        Ok(o) => o,
        Err(status) => return status,
    };
    let variant = &(*variant).inner;
    let geometry = match LinkGeometry::new(length_cm) {
        Ok(g) => g,
        Err(_) => return SiphiStatus::InvalidArgument,
    };
    let n = match NonZeroU32::new(n_lambda) {
        Some(n) => n,
        None => return SiphiStatus::InvalidArgument,
    };
    if !(br_gbps > 0.0 && br_gbps <= variant.effective.bitrate_max) {
        return SiphiStatus::InvalidArgument;
    }
    let eval = optimizer.model.evaluate(variant, geometry, n, br_gbps);
    *out = SiphiBudget {
        opb_per_wavelength_db: eval.opb_per_wavelength_db,
        opb_per_waveguide_db: eval.opb_per_waveguide_db.unwrap_or(f64::INFINITY),
        coupling_db: eval.loss.coupling_db,
        propagation_db: eval.loss.propagation_db,
        modulator_il_db: eval.loss.modulator_il_db,
        filter_il_db: eval.loss.filter_il_db,
        loss_total_db: eval.loss.total_db,
        modulator_array_db: eval.penalty.modulator_array_db,
        filter_array_db: eval.penalty.filter_array_db,
        penalty_total_db: eval.penalty.total_db,
        p_loss_total_db: eval.p_loss_total_db,
        opb_margin_db: eval.opb_margin_db,
        per_wavelength_ok: eval.per_wavelength_ok,
        per_waveguide_ok: eval.per_waveguide_ok,
    };
    SiphiStatus::Ok
}

/// Find the optimal duplet for a variant at one length.
///
/// # Safety
/// `variant`, `settings`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn siphi_optimize(
    variant: *const SiphiVariant,
    settings: *const SiphiSettings,
    length_cm: f64,
    out: *mut SiphiOptimum,
) -> SiphiStatus {
    if variant.is_null() || settings.is_null() || out.is_null() {
        return SiphiStatus::NullArgument;
    }
    let optimizer = match optimizer_from_settings(&*settings) {
        Ok(o) => o,
        Err(status) => return status,
    };
    let geometry = match LinkGeometry::new(length_cm) {
        Ok(g) => g,
        Err(_) => return SiphiStatus::InvalidArgument,
    };
    let duplet = optimizer.optimize(&(*variant).inner, geometry);
    *out = SiphiOptimum {
        n_lambda: duplet.n_lambda,
        br_gbps: duplet.br_gbps,
        aggregate_bw_gbps: duplet.aggregate_bw_gbps,
        error_db: duplet.error_db,
        feasible: duplet.feasible,
        epb_pj: duplet.epb_pj.unwrap_or(f64::NAN),
    };
    SiphiStatus::Ok
}

/// Sweep a variant from 1 cm to `l_max_cm` and return the series as a JSON
/// document; free with [`siphi_string_free`].
///
/// # Safety
/// `variant`, `settings`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn siphi_sweep_json(
    variant: *const SiphiVariant,
    settings: *const SiphiSettings,
    l_max_cm: f64,
    step_cm: f64,
    out: *mut *mut c_char,
) -> SiphiStatus {
    if variant.is_null() || settings.is_null() || out.is_null() {
        return SiphiStatus::NullArgument;
    }
    let optimizer = match optimizer_from_settings(&*settings) {
        Ok(o) => o,
        Err(status) => return status,
    };
    let swept = match sweep(&optimizer, &(*variant).inner, l_max_cm, step_cm) {
        Ok(s) => s,
        Err(_) => return SiphiStatus::InvalidArgument,
    };
    let json = report::to_json(&swept);
    *out = CString::new(json).expect("no interior NULs").into_raw();
    SiphiStatus::Ok
}

/// Build the viability grid and return it as CSV; platforms come from
/// `platforms_json` (a JSON array of platform records) or the built-ins when
/// null. Free the result with [`siphi_string_free`].
///
/// # Safety
/// `settings` and `out` must be valid pointers; `platforms_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn siphi_grid_csv(
    settings: *const SiphiSettings,
    platforms_json: *const c_char,
    l_max_cm: f64,
    report_length_cm: f64,
    out: *mut *mut c_char,
) -> SiphiStatus {
    if settings.is_null() || out.is_null() {
        return SiphiStatus::NullArgument;
    }
    let optimizer = match optimizer_from_settings(&*settings) {
        Ok(o) => o,
        Err(status) => return status,
    };
    let platforms: Vec<FabricationPlatform> = if platforms_json.is_null() {
        builtin_platforms()
    } else {
        let text = match CStr::from_ptr(platforms_json).to_str() {
            Ok(t) => t,
            Err(_) => return SiphiStatus::InvalidUtf8,
        };
        match serde_json::from_str(text) {
            Ok(list) => list,
            Err(_) => return SiphiStatus::InvalidJson,
        }
    };
    if platforms.iter().any(|p| p.validate().is_err()) {
        return SiphiStatus::InvalidArgument;
    }
    let grid = match build_grid(&optimizer, &platforms, l_max_cm, report_length_cm) {
        Ok(g) => g,
        Err(_) => return SiphiStatus::InvalidArgument,
    };
    let csv = report::grid_csv(&grid);
    *out = CString::new(csv).expect("no interior NULs").into_raw();
    SiphiStatus::Ok
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn siphi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
