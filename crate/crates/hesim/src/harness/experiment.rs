//! Reproducible count synthesis and the four-scan measurement run.
//!
//! Every scan point draws from its own stream cipher seeded by the run seed
//! and the point index, so a count depends only on (seed, index, mean) and
//! never on how many points precede it or on how other points consumed
//! randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::config::Config;
use crate::harness::corrected::{
    corrected_polarization_curve, corrected_spatial_curve, CorrectedPolarizationCurve,
    CorrectedSpatialCurve,
};
use crate::harness::fit::{
    fit_polarization_counts, fit_spatial_counts, PolarizationFitResult, SpatialFitResult,
};
use crate::patterns::PatternModel;
use crate::Result;

/// One recorded scan: where the detector sat and what it counted.
#[derive(Clone, Debug)]
pub struct ScanRecord {
    pub settings: Vec<f64>,
    pub expected: Vec<f64>,
    pub counts: Vec<u64>,
}

impl ScanRecord {
    /// Draws the scan's counts from the density under the given seed.
    pub fn synthesize(
        scan: &crate::harness::scan::ScanDefinition,
        density: impl Fn(f64) -> f64,
        seed: u64,
    ) -> Result<ScanRecord> {
        let expected = scan.expected_counts(density)?;
        let counts = poisson_counts(&expected, seed);
        Ok(ScanRecord {
            settings: scan.settings().to_vec(),
            expected,
            counts,
        })
    }
}

/// Complete simulated run: four Poisson scans, their fits, and the
/// corrected curves rebuilt from the counted data alone.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub model: PatternModel,
    pub seed: u64,
    pub theta_fixed: f64,
    pub x_fixed: f64,
    pub coincidence_spatial: ScanRecord,
    pub coincidence_polarization: ScanRecord,
    pub singles_spatial: ScanRecord,
    pub singles_polarization: ScanRecord,
    pub coincidence_spatial_fit: SpatialFitResult,
    pub coincidence_polarization_fit: PolarizationFitResult,
    pub singles_spatial_fit: SpatialFitResult,
    pub singles_polarization_fit: PolarizationFitResult,
    pub corrected_spatial: CorrectedSpatialCurve,
    pub corrected_polarization: CorrectedPolarizationCurve,
}

/// Stream for scan number `k`; distinct seeds never share a stream.
fn scan_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(4).wrapping_add(k)
}

/// Simulates the four scans (position and analyzer, coincidences and
/// singles), fits each, and assembles the corrected curves.
pub fn run_experiment(config: &Config, seed: u64) -> Result<ExperimentRun> {
    let geometry = config.geometry()?;
    let state = config.state()?;
    let theta_fixed = config.theta_fixed(&state);
    let x_fixed = config.x_fixed(&geometry, &state);
    let model = PatternModel::new(geometry, state);
    let spatial = config.spatial_scan()?;
    let angular = config.polarization_scan()?;

    let coincidence_spatial = ScanRecord::synthesize(
        &spatial,
        |x| model.coincidence_density(theta_fixed, x),
        scan_seed(seed, 0),
    )?;
    let coincidence_polarization = ScanRecord::synthesize(
        &angular,
        |t| model.coincidence_density(t, x_fixed),
        scan_seed(seed, 1),
    )?;
    let singles_spatial = ScanRecord::synthesize(
        &config.spatial_singles_scan()?,
        |x| model.spatial_singles(x),
        scan_seed(seed, 2),
    )?;
    let singles_polarization = ScanRecord::synthesize(
        &config.polarization_singles_scan()?,
        |t| model.polarization_singles(t),
        scan_seed(seed, 3),
    )?;

    let coincidence_spatial_fit = fit_spatial_counts(
        &geometry,
        &coincidence_spatial.settings,
        &coincidence_spatial.counts,
    )?;
    let coincidence_polarization_fit = fit_polarization_counts(
        &coincidence_polarization.settings,
        &coincidence_polarization.counts,
    )?;
    let singles_spatial_fit =
        fit_spatial_counts(&geometry, &singles_spatial.settings, &singles_spatial.counts)?;
    let singles_polarization_fit = fit_polarization_counts(
        &singles_polarization.settings,
        &singles_polarization.counts,
    )?;

    let corrected_spatial = corrected_spatial_curve(
        &geometry,
        theta_fixed,
        &coincidence_spatial.settings,
        &coincidence_spatial.counts,
        &coincidence_spatial_fit,
        &singles_spatial_fit,
        &singles_polarization_fit,
    )?;
    let corrected_polarization = corrected_polarization_curve(
        &geometry,
        x_fixed,
        &coincidence_polarization.settings,
        &coincidence_polarization.counts,
        &coincidence_polarization_fit,
        &singles_spatial_fit,
        &singles_polarization_fit,
    )?;

    Ok(ExperimentRun {
        model,
        seed,
        theta_fixed,
        x_fixed,
        coincidence_spatial,
        coincidence_polarization,
        singles_spatial,
        singles_polarization,
        coincidence_spatial_fit,
        coincidence_polarization_fit,
        singles_spatial_fit,
        singles_polarization_fit,
        corrected_spatial,
        corrected_polarization,
    })
}

/// Poisson draws for the expected counts under the given run seed.
pub fn poisson_counts(expected: &[f64], seed: u64) -> Vec<u64> {
    expected
        .iter()
        .enumerate()
        .map(|(index, &mean)| draw(mean, seed, index as u64))
        .collect()
}

fn draw(mean: f64, seed: u64, index: u64) -> u64 {
    assert!(mean.is_finite() && mean >= 0.0, "Poisson mean {mean}");
    if mean == 0.0 {
        return 0;
    }
    let mut rng = point_rng(seed, index);
    Poisson::new(mean)
        .expect("positive finite mean")
        .sample(&mut rng) as u64
}

fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
