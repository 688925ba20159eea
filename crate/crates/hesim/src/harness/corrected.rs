//! Rebuilds the marginal-free coincidence curve from counted data.
//!
//! Counts arrive in arbitrary rate units. The fitted singles shapes are
//! pinned to their physical normalizations (the position singles integrate
//! to one, the analyzer singles to one over a full turn), which fixes the
//! counts-to-density conversion for the coincidence scan. The corrected
//! points are then
//!
//! ```text
//! p_corr(sᵢ) = scale·nᵢ - p̂_s·p̂_p + (κ/4)·sinc²(A·(pos - center))
//! ```
//!
//! with the count noise propagated through the same scale. Refitting the
//! corrected points yields the marginal-free visibility an experiment
//! would quote.

use std::f64::consts::PI;

use crate::harness::fit::{
    fit_polarization_curve, fit_spatial_curve, PolarizationFitResult, SpatialFitResult,
};
use crate::optics::Geometry;
use crate::quad::sinc;
use crate::{Error, Result};

/// Fitted analyzer singles at their physical level, mean 1/2π.
fn analyzer_singles(fit: &PolarizationFitResult, theta: f64) -> f64 {
    (1.0 + fit.visibility() * (2.0 * (theta - fit.orientation())).cos()) / (2.0 * PI)
}

/// Fitted position singles at their physical level; the envelope peak is
/// pinned to |u_F(0)|²/2 so the curve integrates to one.
fn position_singles(geometry: &Geometry, fit: &SpatialFitResult, x: f64) -> f64 {
    let s = sinc(geometry.envelope_rate() * (x - fit.center()));
    let fringe = 1.0
        + fit.visibility()
            * (2.0 * geometry.fringe_rate() * (x - fit.center()) + fit.phase()).cos();
    0.5 * geometry.mode_peak_sqr() * s * s * fringe
}

fn envelope_baseline(geometry: &Geometry, center: f64, x: f64) -> f64 {
    let s = sinc(geometry.envelope_rate() * (x - center));
    0.25 * geometry.mode_peak_sqr() / PI * s * s
}

/// Marginal-free position curve in physical density units.
#[derive(Clone, Debug)]
pub struct CorrectedSpatialCurve {
    pub theta_fixed: f64,
    pub positions: Vec<f64>,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    /// Counts-to-density factor applied to the coincidence scan.
    pub scale: f64,
    /// Refit of the corrected points; absent when they carry no
    /// identifiable fringe (a flat curve leaves the phase undetermined).
    pub fit: Option<SpatialFitResult>,
}

/// Marginal-free analyzer curve in physical density units.
#[derive(Clone, Debug)]
pub struct CorrectedPolarizationCurve {
    pub x_fixed: f64,
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub scale: f64,
    pub fit: Option<PolarizationFitResult>,
}

/// Corrects a position scan of coincidences taken at a fixed analyzer
/// angle, given the fitted raw coincidence shape and both fitted singles.
pub fn corrected_spatial_curve(
    geometry: &Geometry,
    theta_fixed: f64,
    positions: &[f64],
    counts: &[u64],
    coincidence_fit: &SpatialFitResult,
    position_singles_fit: &SpatialFitResult,
    analyzer_singles_fit: &PolarizationFitResult,
) -> Result<CorrectedSpatialCurve> {
    if positions.len() != counts.len() {
        return Err(Error::InvalidScan("positions and counts must align"));
    }
    let kappa = geometry.mode_peak_sqr() / PI;
    let p_p = analyzer_singles(analyzer_singles_fit, theta_fixed);
    // Physical fringe level at θ: κπ·p_p/2 replaces the fitted amplitude.
    let scale = kappa * PI * p_p / (2.0 * coincidence_fit.amplitude());
    let mut values = Vec::with_capacity(counts.len());
    let mut sigmas = Vec::with_capacity(counts.len());
    for (&x, &n) in positions.iter().zip(counts) {
        let p_s = position_singles(geometry, position_singles_fit, x);
        let baseline = envelope_baseline(geometry, coincidence_fit.center(), x);
        values.push(scale * n as f64 - p_s * p_p + baseline);
        // Expected counts from the raw fit, not the observed draw: weights
        // taken from the data would bias the refit toward deep minima.
        sigmas.push(scale * coincidence_fit.value_at(x).max(1.0).sqrt());
    }
    let fit = fit_spatial_curve(geometry, positions, &values, &sigmas).ok();
    Ok(CorrectedSpatialCurve {
        theta_fixed,
        positions: positions.to_vec(),
        values,
        sigmas,
        scale,
        fit,
    })
}

/// Corrects an analyzer scan of coincidences taken at a fixed detector
/// position, given the fitted raw fringe and both fitted singles.
pub fn corrected_polarization_curve(
    geometry: &Geometry,
    x_fixed: f64,
    angles: &[f64],
    counts: &[u64],
    coincidence_fit: &PolarizationFitResult,
    position_singles_fit: &SpatialFitResult,
    analyzer_singles_fit: &PolarizationFitResult,
) -> Result<CorrectedPolarizationCurve> {
    if angles.len() != counts.len() {
        return Err(Error::InvalidScan("angles and counts must align"));
    }
    let p_s = position_singles(geometry, position_singles_fit, x_fixed);
    // Physical mean of the analyzer fringe replaces the fitted amplitude.
    let scale = p_s / (2.0 * PI * coincidence_fit.amplitude());
    let baseline = envelope_baseline(geometry, position_singles_fit.center(), x_fixed);
    let mut values = Vec::with_capacity(counts.len());
    let mut sigmas = Vec::with_capacity(counts.len());
    for (&theta, &n) in angles.iter().zip(counts) {
        let p_p = analyzer_singles(analyzer_singles_fit, theta);
        values.push(scale * n as f64 - p_s * p_p + baseline);
        // Same reasoning as the position scan: model-based weights.
        sigmas.push(scale * coincidence_fit.value_at(theta).max(1.0).sqrt());
    }
    let fit = fit_polarization_curve(angles, &values, &sigmas).ok();
    Ok(CorrectedPolarizationCurve {
        x_fixed,
        angles: angles.to_vec(),
        values,
        sigmas,
        scale,
        fit,
    })
}
