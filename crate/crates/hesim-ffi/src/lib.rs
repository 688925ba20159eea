//! C interface to the double-slit simulator.
//!
//! The surface is a single opaque model handle plus plain-double
//! evaluators; every fallible call returns a [`HesStatus`] and writes its
//! result through an out pointer. Nothing here panics across the boundary:
//! bad handles, bad arguments, and internal failures all come back as
//! status codes. A model created by [`hes_model_new`] is owned by the
//! caller until [`hes_model_free`].
//!
//! The matching C header is generated into `include/hesim.h` at build
//! time. Evaluator signatures share one shape so bindings stay
//! mechanical: the handle first, plain doubles in, one double out.

use std::ffi::c_char;

use hesim::analysis::{
    corrected_polarization_visibility, corrected_spatial_visibility,
    corrected_visibility_bounds, singles_visibility,
};
use hesim::harness::experiment::ScanRecord;
use hesim::harness::scan::ScanDefinition;
use hesim::optics::Geometry;
use hesim::patterns::PatternModel;
use hesim::source::{HybridState, PolarizationProjection};

/// Half width of a reference bench slit, meters.
pub const HES_REFERENCE_SLIT_HALF_WIDTH_M: f64 = 40e-6;
/// Center-to-center slit separation of the reference bench, meters.
pub const HES_REFERENCE_SLIT_SEPARATION_M: f64 = 250e-6;
/// Reference bench wavelength, meters.
pub const HES_REFERENCE_WAVELENGTH_M: f64 = 702e-9;
/// Slit-plane to detection-plane distance of the reference bench, meters.
pub const HES_REFERENCE_DISTANCE_M: f64 = 0.42;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HesStatus {
    /// The call succeeded and any out parameter holds a value.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range, non-finite, or inconsistent.
    InvalidArgument = 2,
    /// The simulation itself failed; out parameters are untouched.
    RunFailed = 3,
}

/// Which curve a simulated counting scan sweeps.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HesScanKind {
    /// Coincidences against detector position at a fixed analyzer angle.
    CoincidenceSpatial = 0,
    /// Coincidences against analyzer angle at a fixed detector position.
    CoincidencePolarization = 1,
    /// Signal singles against detector position.
    SinglesSpatial = 2,
    /// Idler singles against analyzer angle.
    SinglesPolarization = 3,
}

/// Opaque simulator state: slit geometry plus the prepared two-photon
/// state. Create with `hes_model_new`, release with `hes_model_free`.
pub struct HesModel {
    inner: PatternModel,
}

fn status_of(err: &hesim::Error) -> HesStatus {
    use hesim::Error::*;
    match err {
        InvalidProjection(_) | InvalidGeometry(_) | InvalidScan(_) | NotNormalized(_)
        | AllRatesZero => HesStatus::InvalidArgument,
        _ => HesStatus::RunFailed,
    }
}

/// Common evaluator plumbing: resolve the handle, validate the numeric
/// arguments, write the value.
unsafe fn eval(
    model: *const HesModel,
    args_finite: bool,
    out: *mut f64,
    f: impl FnOnce(&PatternModel) -> f64,
) -> HesStatus {
    let Some(model) = model.as_ref() else {
        return HesStatus::NullPointer;
    };
    if !args_finite {
        return HesStatus::InvalidArgument;
    }
    if out.is_null() {
        return HesStatus::NullPointer;
    }
    out.write(f(&model.inner));
    HesStatus::Ok
}

/// Builds a model from the projection amplitudes that prepare the state
/// (`alpha² + beta² = 1`) and the bench geometry, all in SI units.
///
/// On success writes a heap-allocated handle through `out_model`; the
/// caller owns it and must release it with `hes_model_free`.
///
/// # Safety
///
/// `out_model` must be null (reported as an error) or valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn hes_model_new(
    alpha: f64,
    beta: f64,
    projection_phase_rad: f64,
    slit_half_width_m: f64,
    slit_separation_m: f64,
    wavelength_m: f64,
    distance_m: f64,
    out_model: *mut *mut HesModel,
) -> HesStatus {
    if out_model.is_null() {
        return HesStatus::NullPointer;
    }
    let projection = match PolarizationProjection::new(alpha, beta, projection_phase_rad) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let geometry = match Geometry::new(
        slit_half_width_m,
        slit_separation_m,
        wavelength_m,
        distance_m,
    ) {
        Ok(g) => g,
        Err(e) => return status_of(&e),
    };
    let model = PatternModel::new(geometry, HybridState::new(projection));
    out_model.write(Box::into_raw(Box::new(HesModel { inner: model })));
    HesStatus::Ok
}

/// Releases a model created by `hes_model_new`. Null is a no-op.
///
/// # Safety
///
/// `model` must be null or a handle from `hes_model_new` that has not
/// been freed already; the handle is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn hes_model_free(model: *mut HesModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Coincidence density per meter of detector travel and radian of
/// analyzer angle, at analyzer angle `theta_rad` and position `x_m`.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_coincidence_density(
    model: *const HesModel,
    theta_rad: f64,
    x_m: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, theta_rad.is_finite() && x_m.is_finite(), out, |m| {
        m.coincidence_density(theta_rad, x_m)
    })
}

/// Coincidence density with both singles marginals subtracted and the
/// envelope baseline restored; its fringe depth tracks entanglement.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_corrected_density(
    model: *const HesModel,
    theta_rad: f64,
    x_m: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, theta_rad.is_finite() && x_m.is_finite(), out, |m| {
        m.corrected_density(theta_rad, x_m)
    })
}

/// Signal-arm detection density per meter at position `x_m`, analyzer
/// ignored.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_spatial_singles(
    model: *const HesModel,
    x_m: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, x_m.is_finite(), out, |m| m.spatial_singles(x_m))
}

/// Idler-arm detection density per radian at analyzer angle `theta_rad`,
/// position integrated out.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_polarization_singles(
    model: *const HesModel,
    theta_rad: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, theta_rad.is_finite(), out, |m| {
        m.polarization_singles(theta_rad)
    })
}

/// Concurrence of the prepared state: 0 for a product state, 1 for a
/// maximally entangled one.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_concurrence(model: *const HesModel, out: *mut f64) -> HesStatus {
    eval(model, true, out, |m| m.concurrence())
}

/// Fringe visibility shared by both singles patterns.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_singles_visibility(
    model: *const HesModel,
    out: *mut f64,
) -> HesStatus {
    eval(model, true, out, |m| singles_visibility(m.state()))
}

/// Corrected-fringe visibility at the fringe-aligned analyzer settings;
/// equals the squared concurrence.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_corrected_visibility_aligned(
    model: *const HesModel,
    out: *mut f64,
) -> HesStatus {
    eval(model, true, out, |m| {
        corrected_visibility_bounds(m.state()).at_aligned
    })
}

/// Largest corrected-fringe visibility over all analyzer settings.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_corrected_visibility_ceiling(
    model: *const HesModel,
    out: *mut f64,
) -> HesStatus {
    eval(model, true, out, |m| {
        corrected_visibility_bounds(m.state()).max_over_settings
    })
}

/// Corrected-fringe visibility of a position scan at analyzer angle
/// `theta_rad`.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_corrected_spatial_visibility(
    model: *const HesModel,
    theta_rad: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, theta_rad.is_finite(), out, |m| {
        corrected_spatial_visibility(m, theta_rad)
    })
}

/// Corrected-fringe visibility of an analyzer scan at detector position
/// `x_m`.
///
/// # Safety
///
/// `model` must be null or a live handle; `out` must be null or valid
/// for writing one double.
#[no_mangle]
pub unsafe extern "C" fn hes_corrected_polarization_visibility(
    model: *const HesModel,
    x_m: f64,
    out: *mut f64,
) -> HesStatus {
    eval(model, x_m.is_finite(), out, |m| {
        corrected_polarization_visibility(m, x_m)
    })
}

/// Simulates one counting scan on a uniform grid and writes the Poisson
/// draws into `out_counts`.
///
/// `kind` selects the swept curve (a `HesScanKind` value; anything else
/// is rejected). `fixed_setting` is the analyzer angle for a coincidence
/// position scan, the detector position for a coincidence analyzer scan,
/// and ignored for singles. The grid runs from `scan_min` to `scan_max`
/// inclusive with `points` entries; `expected_total` is the expected
/// event budget for the whole scan. Identical arguments and `seed`
/// reproduce identical counts.
///
/// # Safety
///
/// `model` must be null or a live handle; `out_counts` must be null or
/// valid for writing `points` unsigned 64-bit integers.
#[no_mangle]
pub unsafe extern "C" fn hes_simulate_counts(
    model: *const HesModel,
    kind: u32,
    fixed_setting: f64,
    scan_min: f64,
    scan_max: f64,
    points: usize,
    expected_total: f64,
    seed: u64,
    out_counts: *mut u64,
) -> HesStatus {
    let Some(model) = model.as_ref().map(|m| &m.inner) else {
        return HesStatus::NullPointer;
    };
    if out_counts.is_null() {
        return HesStatus::NullPointer;
    }
    if !fixed_setting.is_finite() {
        return HesStatus::InvalidArgument;
    }
    let scan = match ScanDefinition::uniform(scan_min, scan_max, points, expected_total) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let density: Box<dyn Fn(f64) -> f64> = match kind {
        k if k == HesScanKind::CoincidenceSpatial as u32 => {
            Box::new(move |x| model.coincidence_density(fixed_setting, x))
        }
        k if k == HesScanKind::CoincidencePolarization as u32 => {
            Box::new(move |t| model.coincidence_density(t, fixed_setting))
        }
        k if k == HesScanKind::SinglesSpatial as u32 => {
            Box::new(move |x| model.spatial_singles(x))
        }
        k if k == HesScanKind::SinglesPolarization as u32 => {
            Box::new(move |t| model.polarization_singles(t))
        }
        _ => return HesStatus::InvalidArgument,
    };
    match ScanRecord::synthesize(&scan, density, seed) {
        Ok(record) => {
            std::slice::from_raw_parts_mut(out_counts, points).copy_from_slice(&record.counts);
            HesStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Static, NUL-terminated name for a status code; unknown codes map to
/// "unknown".
#[no_mangle]
pub extern "C" fn hes_status_name(status: u32) -> *const c_char {
    let name: &'static [u8] = match status {
        s if s == HesStatus::Ok as u32 => b"ok\0",
        s if s == HesStatus::NullPointer as u32 => b"null pointer\0",
        s if s == HesStatus::InvalidArgument as u32 => b"invalid argument\0",
        s if s == HesStatus::RunFailed as u32 => b"run failed\0",
        _ => b"unknown\0",
    };
    name.as_ptr().cast()
}

/// Static, NUL-terminated library version string.
#[no_mangle]
pub extern "C" fn hes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
