//! Output rendering: CSV curves and the versioned JSON run report.
//!
//! CSV files open with `#` comment lines echoing the generating config,
//! then a header row naming each column with its unit, then data rows.
//! All numbers render through the shortest round-trip float formatter,
//! so identical runs produce byte-identical files.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{corrected_visibility_bounds, singles_visibility};
use crate::config::Config;
use crate::harness::experiment::ExperimentRun;
use crate::harness::fit::{PolarizationFitResult, SpatialFitResult};
use crate::patterns::PatternModel;

pub const REPORT_FORMAT_VERSION: u32 = 1;

fn csv_preamble(title: &str, config: &Config, lines: &[(&str, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {title}");
    let _ = writeln!(out, "# config: {}", config.to_json());
    for (name, value) in lines {
        let _ = writeln!(out, "# {name}: {value}");
    }
    out
}

fn comment(name: &str, value: impl std::fmt::Display) -> (&str, String) {
    (name, value.to_string())
}

/// Closed-form position curves at a fixed analyzer angle.
pub fn spatial_pattern_csv(model: &PatternModel, config: &Config, theta_fixed: f64) -> String {
    let scan = config.spatial_scan().expect("validated scan");
    let mut out = csv_preamble(
        "position patterns at a fixed analyzer angle",
        config,
        &[comment("theta_fixed_rad", theta_fixed)],
    );
    out.push_str(
        "x_m,coincidence_density_per_m_rad,corrected_density_per_m_rad,singles_density_per_m\n",
    );
    for &x in scan.settings() {
        let _ = writeln!(
            out,
            "{x},{},{},{}",
            model.coincidence_density(theta_fixed, x),
            model.corrected_density(theta_fixed, x),
            model.spatial_singles(x)
        );
    }
    out
}

/// Closed-form analyzer curves at a fixed detector position.
pub fn polarization_pattern_csv(model: &PatternModel, config: &Config, x_fixed: f64) -> String {
    let scan = config.polarization_scan().expect("validated scan");
    let mut out = csv_preamble(
        "analyzer patterns at a fixed detector position",
        config,
        &[comment("x_fixed_m", x_fixed)],
    );
    out.push_str(
        "theta_rad,coincidence_density_per_m_rad,corrected_density_per_m_rad,singles_density_per_rad\n",
    );
    for &theta in scan.settings() {
        let _ = writeln!(
            out,
            "{theta},{},{},{}",
            model.coincidence_density(theta, x_fixed),
            model.corrected_density(theta, x_fixed),
            model.polarization_singles(theta)
        );
    }
    out
}

/// Counted scan: setting, expected rate, and the Poisson draw.
pub fn counts_csv(
    title: &str,
    config: &Config,
    fixed: &[(&str, String)],
    setting_column: &str,
    settings: &[f64],
    expected: &[f64],
    counts: &[u64],
) -> String {
    let mut out = csv_preamble(title, config, fixed);
    let _ = writeln!(out, "{setting_column},expected_counts,counts");
    for ((&s, &e), &n) in settings.iter().zip(expected).zip(counts) {
        let _ = writeln!(out, "{s},{e},{n}");
    }
    out
}

/// Corrected curve with propagated uncertainties.
pub fn corrected_csv(
    title: &str,
    config: &Config,
    fixed: &[(&str, String)],
    columns: (&str, &str),
    settings: &[f64],
    values: &[f64],
    sigmas: &[f64],
) -> String {
    let (setting_column, value_column) = columns;
    let mut out = csv_preamble(title, config, fixed);
    let _ = writeln!(out, "{setting_column},{value_column},{value_column}_sigma");
    for ((&s, &v), &sigma) in settings.iter().zip(values).zip(sigmas) {
        let _ = writeln!(out, "{s},{v},{sigma}");
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub seed: u64,
    pub config: Config,
    pub state: StateBlock,
    pub scans: ScansBlock,
    pub corrected: CorrectedBlock,
    pub complementarity: ComplementarityBlock,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateBlock {
    pub alpha: f64,
    pub beta: f64,
    pub projection_phase_rad: f64,
    pub concurrence: f64,
    pub singles_visibility: f64,
    pub theta_fixed_rad: f64,
    pub x_fixed_m: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScansBlock {
    pub coincidence_spatial: SpatialFitBlock,
    pub coincidence_polarization: PolarizationFitBlock,
    pub singles_spatial: SpatialFitBlock,
    pub singles_polarization: PolarizationFitBlock,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpatialFitBlock {
    pub amplitude: f64,
    pub visibility: f64,
    pub visibility_sigma: f64,
    pub center_m: f64,
    pub phase_rad: f64,
    pub chi_sq: f64,
    pub dof: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarizationFitBlock {
    pub amplitude: f64,
    pub visibility: f64,
    pub visibility_sigma: f64,
    pub orientation_rad: f64,
    pub chi_sq: f64,
    pub dof: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectedBlock {
    pub spatial: CorrectedFitBlock,
    pub polarization: CorrectedFitBlock,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectedFitBlock {
    /// Counts-to-density factor applied to the raw scan.
    pub scale: f64,
    pub visibility: Option<f64>,
    pub visibility_sigma: Option<f64>,
    pub chi_sq: Option<f64>,
    pub dof: Option<usize>,
}

/// Entanglement bookkeeping: how much fringe visibility the corrected
/// pattern can show, where, and what remains at the aligned setting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplementarityBlock {
    pub predicted: PredictedBlock,
    pub measured: MeasuredBlock,
    pub residuals: ResidualBlock,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PredictedBlock {
    pub concurrence: f64,
    pub singles_visibility: f64,
    pub corrected_visibility_aligned: f64,
    pub corrected_visibility_ceiling: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasuredBlock {
    pub singles_visibility: f64,
    pub corrected_visibility_spatial: Option<f64>,
    pub corrected_visibility_polarization: Option<f64>,
}

/// Squared corrected visibility minus the budget left by the singles,
/// `V² + V₁² - 1`, which closes only at the optimal analyzer setting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualBlock {
    pub fixed_setting: f64,
    pub optimal_setting: f64,
}

fn spatial_fit_block(fit: &SpatialFitResult) -> SpatialFitBlock {
    SpatialFitBlock {
        amplitude: fit.amplitude(),
        visibility: fit.visibility_unclamped(),
        visibility_sigma: fit.visibility_error(),
        center_m: fit.center(),
        phase_rad: fit.phase(),
        chi_sq: fit.outcome().chi_sq,
        dof: fit.outcome().dof,
        converged: fit.outcome().converged,
    }
}

fn polarization_fit_block(fit: &PolarizationFitResult) -> PolarizationFitBlock {
    PolarizationFitBlock {
        amplitude: fit.amplitude(),
        visibility: fit.visibility_unclamped(),
        visibility_sigma: fit.visibility_error(),
        orientation_rad: fit.orientation(),
        chi_sq: fit.outcome().chi_sq,
        dof: fit.outcome().dof,
        converged: fit.outcome().converged,
    }
}

pub fn build_report(config: &Config, run: &ExperimentRun) -> Report {
    let state = run.model.state();
    let bounds = corrected_visibility_bounds(state);
    let v1 = singles_visibility(state);
    let budget = 1.0 - v1 * v1;
    let corrected_spatial = CorrectedFitBlock {
        scale: run.corrected_spatial.scale,
        visibility: run
            .corrected_spatial
            .fit
            .as_ref()
            .map(SpatialFitResult::visibility_unclamped),
        visibility_sigma: run
            .corrected_spatial
            .fit
            .as_ref()
            .map(SpatialFitResult::visibility_error),
        chi_sq: run.corrected_spatial.fit.as_ref().map(|f| f.outcome().chi_sq),
        dof: run.corrected_spatial.fit.as_ref().map(|f| f.outcome().dof),
    };
    let corrected_polarization = CorrectedFitBlock {
        scale: run.corrected_polarization.scale,
        visibility: run
            .corrected_polarization
            .fit
            .as_ref()
            .map(PolarizationFitResult::visibility_unclamped),
        visibility_sigma: run
            .corrected_polarization
            .fit
            .as_ref()
            .map(PolarizationFitResult::visibility_error),
        chi_sq: run
            .corrected_polarization
            .fit
            .as_ref()
            .map(|f| f.outcome().chi_sq),
        dof: run
            .corrected_polarization
            .fit
            .as_ref()
            .map(|f| f.outcome().dof),
    };

    Report {
        format_version: REPORT_FORMAT_VERSION,
        seed: run.seed,
        config: config.clone(),
        state: StateBlock {
            alpha: state.alpha(),
            beta: state.beta(),
            projection_phase_rad: state.phi_p(),
            concurrence: state.concurrence(),
            singles_visibility: v1,
            theta_fixed_rad: run.theta_fixed,
            x_fixed_m: run.x_fixed,
        },
        scans: ScansBlock {
            coincidence_spatial: spatial_fit_block(&run.coincidence_spatial_fit),
            coincidence_polarization: polarization_fit_block(
                &run.coincidence_polarization_fit,
            ),
            singles_spatial: spatial_fit_block(&run.singles_spatial_fit),
            singles_polarization: polarization_fit_block(&run.singles_polarization_fit),
        },
        corrected: CorrectedBlock {
            spatial: corrected_spatial,
            polarization: corrected_polarization,
        },
        complementarity: ComplementarityBlock {
            predicted: PredictedBlock {
                concurrence: state.concurrence(),
                singles_visibility: v1,
                corrected_visibility_aligned: bounds.at_aligned,
                corrected_visibility_ceiling: bounds.max_over_settings,
            },
            measured: MeasuredBlock {
                singles_visibility: run.singles_spatial_fit.visibility(),
                corrected_visibility_spatial: run
                    .corrected_spatial
                    .fit
                    .as_ref()
                    .map(SpatialFitResult::visibility_unclamped),
                corrected_visibility_polarization: run
                    .corrected_polarization
                    .fit
                    .as_ref()
                    .map(PolarizationFitResult::visibility_unclamped),
            },
            residuals: ResidualBlock {
                fixed_setting: bounds.at_aligned * bounds.at_aligned - budget,
                optimal_setting: bounds.max_over_settings * bounds.max_over_settings
                    - budget,
            },
        },
    }
}

pub fn report_json(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}
