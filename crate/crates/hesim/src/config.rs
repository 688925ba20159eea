//! Run configuration: bench geometry, prepared state, and scan layout.
//!
//! Every field has a default matching the reference bench, so a config
//! file only names what it changes. Unknown keys are rejected rather
//! than ignored; a typo must not silently fall back to a default.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::harness::scan::ScanDefinition;
use crate::optics::Geometry;
use crate::source::{HybridState, PolarizationProjection};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub geometry: GeometryConfig,
    pub state: StateConfig,
    pub scans: ScansConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub slit_half_width_m: f64,
    pub slit_separation_m: f64,
    pub wavelength_m: f64,
    pub distance_m: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            slit_half_width_m: 40e-6,
            slit_separation_m: 250e-6,
            wavelength_m: 702e-9,
            distance_m: 0.42,
        }
    }
}

/// Prepared state, selected by the idler analyzer setting.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateConfig {
    /// Circular analyzer: maximally entangled, flat singles.
    Circular,
    /// Analyzer behind a half-wave plate at the given angle.
    Waveplate(WaveplateConfig),
    /// Explicit analyzer amplitudes.
    Projection(ProjectionConfig),
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig::Waveplate(WaveplateConfig { angle_deg: 10.0 })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveplateConfig {
    pub angle_deg: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProjectionConfig {
    pub alpha: f64,
    pub beta: f64,
    pub phase_rad: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            alpha: 1.0 / 2f64.sqrt(),
            beta: 1.0 / 2f64.sqrt(),
            phase_rad: 0.5 * PI,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScansConfig {
    pub spatial: SpatialScanConfig,
    pub polarization: PolarizationScanConfig,
    /// Expected coincidences per scan; Poisson noise scales as its
    /// square root.
    pub expected_total: f64,
    /// Singles scans accumulate this multiple of `expected_total`.
    /// Unheralded detection sees every photon, not just the paired ones,
    /// so singles rates run well above the coincidence rate.
    pub singles_rate_factor: f64,
    /// Analyzer angle held during position scans; defaults to the
    /// strongest corrected-fringe quadrature for the configured state.
    pub theta_fixed_rad: Option<f64>,
    /// Detector position held during analyzer scans; same defaulting.
    pub x_fixed_m: Option<f64>,
}

impl Default for ScansConfig {
    fn default() -> Self {
        ScansConfig {
            spatial: SpatialScanConfig::default(),
            polarization: PolarizationScanConfig::default(),
            expected_total: 1e4,
            singles_rate_factor: 25.0,
            theta_fixed_rad: None,
            x_fixed_m: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpatialScanConfig {
    pub min_m: f64,
    pub max_m: f64,
    pub points: usize,
}

impl Default for SpatialScanConfig {
    fn default() -> Self {
        SpatialScanConfig {
            min_m: -3.2e-3,
            max_m: 3.2e-3,
            points: 161,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolarizationScanConfig {
    pub min_rad: f64,
    pub max_rad: f64,
    pub points: usize,
}

impl Default for PolarizationScanConfig {
    fn default() -> Self {
        PolarizationScanConfig {
            min_rad: 0.0,
            max_rad: 2.0 * PI,
            points: 73,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path)?;
        Config::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Config> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn geometry(&self) -> Result<Geometry> {
        let g = &self.geometry;
        Geometry::new(
            g.slit_half_width_m,
            g.slit_separation_m,
            g.wavelength_m,
            g.distance_m,
        )
    }

    pub fn state(&self) -> Result<HybridState> {
        match &self.state {
            StateConfig::Circular => Ok(HybridState::circular()),
            StateConfig::Waveplate(w) => {
                if !w.angle_deg.is_finite() {
                    return Err(Error::Config("waveplate angle must be finite".into()));
                }
                Ok(HybridState::from_waveplate_angle(w.angle_deg.to_radians()))
            }
            StateConfig::Projection(p) => {
                let projection =
                    PolarizationProjection::new(p.alpha, p.beta, p.phase_rad)?;
                Ok(HybridState::new(projection))
            }
        }
    }

    pub fn spatial_scan(&self) -> Result<ScanDefinition> {
        let s = &self.scans.spatial;
        ScanDefinition::uniform(s.min_m, s.max_m, s.points, self.scans.expected_total)
    }

    pub fn polarization_scan(&self) -> Result<ScanDefinition> {
        let s = &self.scans.polarization;
        ScanDefinition::uniform(s.min_rad, s.max_rad, s.points, self.scans.expected_total)
    }

    fn singles_total(&self) -> f64 {
        self.scans.expected_total * self.scans.singles_rate_factor
    }

    pub fn spatial_singles_scan(&self) -> Result<ScanDefinition> {
        let s = &self.scans.spatial;
        ScanDefinition::uniform(s.min_m, s.max_m, s.points, self.singles_total())
    }

    pub fn polarization_singles_scan(&self) -> Result<ScanDefinition> {
        let s = &self.scans.polarization;
        ScanDefinition::uniform(s.min_rad, s.max_rad, s.points, self.singles_total())
    }

    /// Analyzer angle for position scans. The corrected fringe carries a
    /// first-order term ∝ cos φ_P at the diagonal angle and a second-order
    /// term at the aligned angle; the default picks whichever is larger
    /// for the configured state.
    pub fn theta_fixed(&self, state: &HybridState) -> f64 {
        self.scans
            .theta_fixed_rad
            .unwrap_or_else(|| match strongest_term(state) {
                CorrectedTerm::FirstOrder => 0.25 * PI,
                CorrectedTerm::SecondOrder => 0.0,
            })
    }

    /// Detector position for analyzer scans, defaulting to the quarter-
    /// fringe offset (first-order term) or a bright fringe (second-order).
    pub fn x_fixed(&self, geometry: &Geometry, state: &HybridState) -> f64 {
        self.scans
            .x_fixed_m
            .unwrap_or_else(|| match strongest_term(state) {
                CorrectedTerm::FirstOrder => 0.25 * geometry.fringe_period(),
                CorrectedTerm::SecondOrder => 0.0,
            })
    }
}

enum CorrectedTerm {
    FirstOrder,
    SecondOrder,
}

fn strongest_term(state: &HybridState) -> CorrectedTerm {
    let c = state.concurrence();
    if c * state.phi_p().cos().abs() >= c * c {
        CorrectedTerm::FirstOrder
    } else {
        CorrectedTerm::SecondOrder
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_yields_reference_defaults() {
        let config = Config::from_json("{}").unwrap();
        let geometry = config.geometry().unwrap();
        assert!((geometry.fringe_period() - 1.17936e-3).abs() < 1e-17);
        let state = config.state().unwrap();
        assert!((state.concurrence() - (4.0 * 10f64.to_radians()).sin()).abs() < 1e-15);
        assert_eq!(config.spatial_scan().unwrap().settings().len(), 161);
        assert_eq!(config.polarization_scan().unwrap().settings().len(), 73);
    }

    #[test]
    fn unknown_keys_are_rejected_at_every_level() {
        assert!(Config::from_json(r#"{"geomtry": {}}"#).is_err());
        assert!(Config::from_json(r#"{"geometry": {"wavelength_nm": 702}}"#).is_err());
        assert!(
            Config::from_json(r#"{"state": {"waveplate": {"angle": 10.0}}}"#).is_err()
        );
        assert!(Config::from_json(r#"{"scans": {"spatial": {"n": 5}}}"#).is_err());
        assert!(Config::from_json(r#"{"state": {"quarterwave": {}}}"#).is_err());
    }

    #[test]
    fn state_variants_build_the_advertised_preparations() {
        let circular = Config::from_json(r#"{"state": "circular"}"#).unwrap();
        assert!((circular.state().unwrap().concurrence() - 1.0).abs() < 1e-12);

        let explicit = Config::from_json(
            r#"{"state": {"projection": {"alpha": 0.6, "beta": 0.8, "phase_rad": 0.0}}}"#,
        )
        .unwrap();
        let state = explicit.state().unwrap();
        assert!((state.alpha() - 0.6).abs() < 1e-12);
        assert!((state.concurrence() - 0.96).abs() < 1e-12);

        let bad = Config::from_json(
            r#"{"state": {"projection": {"alpha": 0.9, "beta": 0.9, "phase_rad": 0.0}}}"#,
        )
        .unwrap();
        assert!(bad.state().is_err());
    }

    #[test]
    fn fixed_settings_follow_the_strongest_corrected_term() {
        let linear = Config::default();
        let state = linear.state().unwrap();
        let geometry = linear.geometry().unwrap();
        assert!((linear.theta_fixed(&state) - 0.25 * PI).abs() < 1e-15);
        assert!(
            (linear.x_fixed(&geometry, &state) - 0.25 * geometry.fringe_period()).abs()
                < 1e-18
        );

        // Circular analyser kills the first-order term; fall back to the
        // aligned settings where the second-order fringe is strongest.
        let circular = Config::from_json(r#"{"state": "circular"}"#).unwrap();
        let state = circular.state().unwrap();
        assert_eq!(circular.theta_fixed(&state), 0.0);
        assert_eq!(circular.x_fixed(&geometry, &state), 0.0);

        // Explicit override wins.
        let pinned =
            Config::from_json(r#"{"scans": {"theta_fixed_rad": 1.0, "x_fixed_m": 0.0}}"#)
                .unwrap();
        assert_eq!(pinned.theta_fixed(&pinned.state().unwrap()), 1.0);
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = Config::default();
        let echoed = Config::from_json(&config.to_json()).unwrap();
        assert_eq!(echoed.to_json(), config.to_json());
    }
}
