//! Scan grids and the expected counts they would accumulate.
//!
//! A scan holds the settings of one swept knob (detector position or
//! analyzer angle) while everything else stays fixed. Expected counts are
//! the sampled density normalized across the scan and scaled to a total
//! acquisition budget, so the physical rate scale drops out the same way an
//! integration-time choice would.

use crate::{Error, Result};

/// Uniform inclusive grid from `min` to `max` with `points` entries.
pub fn linspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidScan("a scan needs at least two points"));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidScan("scan range must be finite and increasing"));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points).map(|i| min + step * i as f64).collect())
}

/// One sweep: its settings and the total expected count budget.
#[derive(Clone, Debug)]
pub struct ScanDefinition {
    settings: Vec<f64>,
    expected_total: f64,
}

impl ScanDefinition {
    pub fn new(settings: Vec<f64>, expected_total: f64) -> Result<Self> {
        if settings.len() < 2 {
            return Err(Error::InvalidScan("a scan needs at least two points"));
        }
        if settings.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidScan("scan settings must be finite"));
        }
        if !(expected_total.is_finite() && expected_total > 0.0) {
            return Err(Error::InvalidScan("expected total must be positive"));
        }
        Ok(Self {
            settings,
            expected_total,
        })
    }

    pub fn uniform(min: f64, max: f64, points: usize, expected_total: f64) -> Result<Self> {
        Self::new(linspace(min, max, points)?, expected_total)
    }

    pub fn settings(&self) -> &[f64] {
        &self.settings
    }

    pub fn expected_total(&self) -> f64 {
        self.expected_total
    }

    /// Expected counts per point for a detection density sampled at the
    /// settings: density(sᵢ)·total/Σdensity. Errors when the density
    /// vanishes (or is negative) across the whole scan.
    pub fn expected_counts(&self, density: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let rates: Vec<f64> = self.settings.iter().map(|&s| density(s)).collect();
        if rates.iter().any(|r| !r.is_finite() || *r < -1e-9) {
            return Err(Error::InvalidScan("density must be finite and nonnegative"));
        }
        let sum: f64 = rates.iter().sum();
        if sum <= 0.0 {
            return Err(Error::AllRatesZero);
        }
        let scale = self.expected_total / sum;
        Ok(rates.iter().map(|r| r.max(0.0) * scale).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::reference_geometry;
    use crate::patterns::PatternModel;
    use crate::source::HybridState;
    use std::f64::consts::PI;

    #[test]
    fn linspace_hits_both_endpoints_uniformly() {
        let grid = linspace(-1.0, 3.0, 5).unwrap();
        assert_eq!(grid, vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(linspace(1.0, 0.0, 4).is_err());
        assert!(linspace(0.0, f64::INFINITY, 4).is_err());
    }

    #[test]
    fn expected_counts_keep_density_proportions_and_total() {
        let scan = ScanDefinition::uniform(0.0, 2.0 * PI, 64, 1e4).unwrap();
        let expected = scan
            .expected_counts(|theta| 1.0 + 0.5 * (2.0 * theta).cos())
            .unwrap();
        let total: f64 = expected.iter().sum();
        assert!((total - 1e4).abs() < 1e-9);
        // Proportions survive the normalization.
        let ratio = expected[0] / expected[16];
        let want = 1.5 / (1.0 + 0.5 * (2.0 * scan.settings()[16]).cos());
        assert!((ratio - want).abs() < 1e-12);
    }

    #[test]
    fn degenerate_scans_are_rejected() {
        assert!(ScanDefinition::uniform(0.0, 1.0, 8, 0.0).is_err());
        assert!(ScanDefinition::uniform(0.0, 1.0, 8, f64::NAN).is_err());
        assert!(ScanDefinition::new(vec![0.0], 10.0).is_err());
        let scan = ScanDefinition::uniform(0.0, 1.0, 8, 10.0).unwrap();
        assert!(matches!(
            scan.expected_counts(|_| 0.0),
            Err(Error::AllRatesZero)
        ));
        assert!(scan.expected_counts(|_| -1.0).is_err());
    }

    #[test]
    fn coincidence_scan_peaks_follow_the_density() {
        let model = PatternModel::new(reference_geometry(), HybridState::circular());
        let scan = ScanDefinition::uniform(-3.2e-3, 3.2e-3, 161, 1e4).unwrap();
        let expected = scan
            .expected_counts(|x| model.coincidence_density(PI / 2.0, x))
            .unwrap();
        // The analyzer along V selects the symmetric mode: bright center.
        let center = expected[80];
        assert!(center > 0.9 * expected.iter().cloned().fold(0.0, f64::max));
        let total: f64 = expected.iter().sum();
        assert!((total - 1e4).abs() < 1e-9);
    }
}
