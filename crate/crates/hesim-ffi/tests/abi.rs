//! Exercises the C surface from Rust: handle lifecycle, status codes,
//! and agreement with the underlying library.

use std::ffi::CStr;
use std::ptr;

use hesim_ffi::*;

use hesim::harness::experiment::ScanRecord;
use hesim::harness::scan::ScanDefinition;
use hesim::optics::reference_geometry;
use hesim::patterns::PatternModel;
use hesim::source::HybridState;

/// Reference-bench model for the half-wave-plate state at 10°.
unsafe fn waveplate_model() -> *mut HesModel {
    let xi = 10f64.to_radians();
    let mut model = ptr::null_mut();
    let status = hes_model_new(
        (2.0 * xi).cos(),
        (2.0 * xi).sin(),
        0.0,
        HES_REFERENCE_SLIT_HALF_WIDTH_M,
        HES_REFERENCE_SLIT_SEPARATION_M,
        HES_REFERENCE_WAVELENGTH_M,
        HES_REFERENCE_DISTANCE_M,
        &mut model,
    );
    assert_eq!(status, HesStatus::Ok);
    assert!(!model.is_null());
    model
}

#[test]
fn model_reports_the_closed_form_observables() {
    unsafe {
        let model = waveplate_model();
        let reference = PatternModel::new(
            reference_geometry(),
            HybridState::from_waveplate_angle(10f64.to_radians()),
        );

        let mut value = f64::NAN;
        assert_eq!(hes_concurrence(model, &mut value), HesStatus::Ok);
        assert_eq!(value, reference.concurrence());

        assert_eq!(hes_singles_visibility(model, &mut value), HesStatus::Ok);
        assert_eq!(value, hesim::analysis::singles_visibility(reference.state()));

        assert_eq!(
            hes_corrected_visibility_aligned(model, &mut value),
            HesStatus::Ok
        );
        let c = reference.concurrence();
        assert!((value - c * c).abs() < 1e-15);
        assert_eq!(
            hes_corrected_visibility_ceiling(model, &mut value),
            HesStatus::Ok
        );
        assert!((value - c).abs() < 1e-15);

        for (theta, x) in [(0.0, 1.1e-4), (0.7, -2.3e-3), (2.4, 6.0e-4)] {
            assert_eq!(
                hes_coincidence_density(model, theta, x, &mut value),
                HesStatus::Ok
            );
            assert_eq!(value, reference.coincidence_density(theta, x));
            assert_eq!(
                hes_corrected_density(model, theta, x, &mut value),
                HesStatus::Ok
            );
            assert_eq!(value, reference.corrected_density(theta, x));
            assert_eq!(hes_spatial_singles(model, x, &mut value), HesStatus::Ok);
            assert_eq!(value, reference.spatial_singles(x));
            assert_eq!(
                hes_polarization_singles(model, theta, &mut value),
                HesStatus::Ok
            );
            assert_eq!(value, reference.polarization_singles(theta));
        }

        hes_model_free(model);
    }
}

#[test]
fn bad_handles_and_arguments_come_back_as_status_codes() {
    unsafe {
        let mut value = 0.0;
        assert_eq!(
            hes_concurrence(ptr::null(), &mut value),
            HesStatus::NullPointer
        );

        let model = waveplate_model();
        assert_eq!(
            hes_coincidence_density(model, f64::NAN, 0.0, &mut value),
            HesStatus::InvalidArgument
        );
        assert_eq!(
            hes_spatial_singles(model, 0.0, ptr::null_mut()),
            HesStatus::NullPointer
        );

        // Projection amplitudes must be normalized; geometry must be
        // positive and physical.
        let mut out = ptr::null_mut();
        assert_eq!(
            hes_model_new(0.9, 0.9, 0.0, 40e-6, 250e-6, 702e-9, 0.42, &mut out),
            HesStatus::InvalidArgument
        );
        assert_eq!(
            hes_model_new(0.6, 0.8, 0.0, 40e-6, 250e-6, -702e-9, 0.42, &mut out),
            HesStatus::InvalidArgument
        );
        assert!(out.is_null());

        let mut counts = vec![0u64; 8];
        assert_eq!(
            hes_simulate_counts(model, 99, 0.0, -1e-3, 1e-3, 8, 1e3, 1, counts.as_mut_ptr()),
            HesStatus::InvalidArgument
        );
        assert_eq!(
            hes_simulate_counts(
                model,
                HesScanKind::SinglesSpatial as u32,
                0.0,
                1e-3,
                -1e-3,
                8,
                1e3,
                1,
                counts.as_mut_ptr(),
            ),
            HesStatus::InvalidArgument
        );

        hes_model_free(model);
        hes_model_free(ptr::null_mut());
    }
}

#[test]
fn simulated_counts_are_deterministic_and_match_the_library() {
    unsafe {
        let model = waveplate_model();
        let (theta, points, seed) = (0.25 * std::f64::consts::PI, 41, 9u64);
        let mut first = vec![0u64; points];
        let mut second = vec![0u64; points];
        for counts in [&mut first, &mut second] {
            assert_eq!(
                hes_simulate_counts(
                    model,
                    HesScanKind::CoincidenceSpatial as u32,
                    theta,
                    -3.2e-3,
                    3.2e-3,
                    points,
                    1e4,
                    seed,
                    counts.as_mut_ptr(),
                ),
                HesStatus::Ok
            );
        }
        assert_eq!(first, second);
        assert!(first.iter().sum::<u64>() > 0);

        let reference = PatternModel::new(
            reference_geometry(),
            HybridState::from_waveplate_angle(10f64.to_radians()),
        );
        let scan = ScanDefinition::uniform(-3.2e-3, 3.2e-3, points, 1e4).unwrap();
        let record = ScanRecord::synthesize(
            &scan,
            |x| reference.coincidence_density(theta, x),
            seed,
        )
        .unwrap();
        assert_eq!(first, record.counts);

        hes_model_free(model);
    }
}

#[test]
fn status_names_and_version_are_static_c_strings() {
    unsafe {
        for (status, want) in [
            (HesStatus::Ok, "ok"),
            (HesStatus::NullPointer, "null pointer"),
            (HesStatus::InvalidArgument, "invalid argument"),
            (HesStatus::RunFailed, "run failed"),
        ] {
            let name = CStr::from_ptr(hes_status_name(status as u32));
            assert_eq!(name.to_str().unwrap(), want);
        }
        assert_eq!(
            CStr::from_ptr(hes_status_name(77)).to_str().unwrap(),
            "unknown"
        );
        assert_eq!(
            CStr::from_ptr(hes_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/hesim.h"
    ))
    .expect("header generated at build time");
    for needle in [
        "typedef struct HesModel HesModel;",
        "typedef enum HesStatus",
        "typedef enum HesScanKind",
        "hes_model_new",
        "hes_model_free",
        "hes_coincidence_density",
        "hes_simulate_counts",
        "hes_status_name",
    ] {
        assert!(header.contains(needle), "header lacks {needle}");
    }
}
