//! Fringe visibilities of the detection patterns, in closed form and as
//! numerical quadratures of sampled curves.
//!
//! Raw coincidence fringes mix single-photon and two-photon interference;
//! their visibility can saturate at 1 even for a product state. The
//! marginal-free pattern isolates the two-photon part: its visibility never
//! exceeds the concurrence C, reads exactly C² at fringe-aligned settings,
//! and reaches C only when the projection phase is a multiple of π.

use std::f64::consts::PI;

use crate::patterns::PatternModel;
use crate::source::HybridState;

/// Mean level below which a fringe visibility is reported as undefined.
const MEAN_FLOOR: f64 = 1e-12;

/// Visibility of the raw coincidence fringe along x at analyzer angle θ
/// (envelope divided out). `None` when the fringe mean vanishes, which
/// happens only at analyzer settings that extinguish the whole curve.
pub fn raw_spatial_visibility(model: &PatternModel, theta: f64) -> Option<f64> {
    let (alpha, beta) = (model.state().alpha(), model.state().beta());
    let (sin_t, cos_t) = theta.sin_cos();
    let m = beta * beta * cos_t * cos_t + alpha * alpha * sin_t * sin_t;
    let p = alpha * alpha * sin_t * sin_t - beta * beta * cos_t * cos_t;
    let q = alpha * beta * (2.0 * theta).sin() * model.state().phi_p().cos();
    if m < MEAN_FLOOR {
        return None;
    }
    Some(p.hypot(q) / m)
}

/// Visibility of the raw coincidence fringe in θ at detector position x.
/// `None` when the fringe mean vanishes (a dark point of a product state).
pub fn raw_polarization_visibility(model: &PatternModel, x: f64) -> Option<f64> {
    let (alpha, beta) = (model.state().alpha(), model.state().beta());
    let b = model.geometry().fringe_rate() * x;
    let (sin_b, cos_b) = b.sin_cos();
    let a1 = beta * beta * sin_b * sin_b;
    let a2 = alpha * alpha * cos_b * cos_b;
    let a3 = 0.5 * alpha * beta * (2.0 * b).sin() * model.state().phi_p().cos();
    if a1 + a2 < MEAN_FLOOR {
        return None;
    }
    Some((a1 - a2).hypot(2.0 * a3) / (a1 + a2))
}

/// Visibility of the marginal-free fringe along x at analyzer angle θ:
/// √(C²·sin²2θ·cos²φ_P + C⁴·cos²2θ). Always defined; the mean is pinned
/// to the envelope baseline.
pub fn corrected_spatial_visibility(model: &PatternModel, theta: f64) -> f64 {
    let c = model.concurrence();
    let cos_phi = model.state().phi_p().cos();
    let s = c * (2.0 * theta).sin() * cos_phi;
    let d = c * c * (2.0 * theta).cos();
    s.hypot(d)
}

/// Visibility of the marginal-free fringe in θ at detector position x:
/// √(C²·sin²2Bx·cos²φ_P + C⁴·cos²2Bx).
pub fn corrected_polarization_visibility(model: &PatternModel, x: f64) -> f64 {
    let c = model.concurrence();
    let two_b = 2.0 * model.geometry().fringe_rate() * x;
    let cos_phi = model.state().phi_p().cos();
    (c * two_b.sin() * cos_phi).hypot(c * c * two_b.cos())
}

/// Fringe visibility common to both singles patterns, |α² - β²|.
pub fn singles_visibility(state: &HybridState) -> f64 {
    (state.alpha().powi(2) - state.beta().powi(2)).abs()
}

/// How the marginal-free visibility ranges over analyzer settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityBounds {
    /// Value at the fringe-aligned settings θ ∈ {0, π/2}: exactly C².
    pub at_aligned: f64,
    /// Largest value over all settings, max(C², C·|cos φ_P|).
    pub max_over_settings: f64,
    /// Setting reaching the overall ceiling C, present iff cos φ_P = ±1.
    pub attains_ceiling_at: Option<f64>,
}

pub fn corrected_visibility_bounds(state: &HybridState) -> VisibilityBounds {
    let c = state.concurrence();
    let cos_phi = state.phi_p().cos();
    VisibilityBounds {
        at_aligned: c * c,
        max_over_settings: (c * c).max(c * cos_phi.abs()),
        attains_ceiling_at: (1.0 - cos_phi.abs() <= 1e-12).then_some(PI / 4.0),
    }
}

/// Mean and fundamental quadratures of a curve over one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FringeComponents {
    pub mean: f64,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

impl FringeComponents {
    /// Modulation depth √(cos² + sin²)/mean; `None` for a vanishing mean.
    pub fn visibility(&self) -> Option<f64> {
        if self.mean.abs() < MEAN_FLOOR {
            return None;
        }
        Some(self.cos_amp.hypot(self.sin_amp) / self.mean)
    }

    /// Phase φ of the composite fringe mean + r·cos(ω·(t-start) - φ).
    pub fn phase(&self) -> f64 {
        self.sin_amp.atan2(self.cos_amp)
    }
}

/// Discrete Fourier projection of `f` onto its mean and fundamental over
/// one period starting at `start`. Uniform sampling makes the projection
/// exact for trigonometric polynomials with up to 15 harmonics.
pub fn fringe_quadratures(
    f: impl Fn(f64) -> f64,
    start: f64,
    period: f64,
) -> FringeComponents {
    const N: usize = 32;
    let mut mean = 0.0;
    let mut cos_amp = 0.0;
    let mut sin_amp = 0.0;
    for j in 0..N {
        let w = 2.0 * PI * j as f64 / N as f64;
        let value = f(start + period * j as f64 / N as f64);
        mean += value;
        cos_amp += value * w.cos();
        sin_amp += value * w.sin();
    }
    FringeComponents {
        mean: mean / N as f64,
        cos_amp: 2.0 * cos_amp / N as f64,
        sin_amp: 2.0 * sin_amp / N as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::reference_geometry;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn model_for(state: HybridState) -> PatternModel {
        PatternModel::new(reference_geometry(), state)
    }

    #[test]
    fn quadratures_recover_a_synthetic_fringe() {
        let f = |t: f64| 2.5 + 0.7 * (2.0 * PI * t / 3.0).cos() - 0.4 * (2.0 * PI * t / 3.0).sin();
        let c = fringe_quadratures(f, 0.0, 3.0);
        assert!(close(c.mean, 2.5, 1e-14));
        assert!(close(c.cos_amp, 0.7, 1e-14));
        assert!(close(c.sin_amp, -0.4, 1e-14));
        assert!(close(c.visibility().unwrap(), 0.7f64.hypot(0.4) / 2.5, 1e-13));
    }

    #[test]
    fn closed_form_spatial_visibility_matches_sampled_fringe() {
        for state in [
            HybridState::circular(),
            HybridState::from_waveplate_angle(5f64.to_radians()),
            HybridState::from_waveplate_angle(10f64.to_radians()),
        ] {
            let model = model_for(state);
            let period = model.geometry().fringe_period();
            for &theta in &[0.0, 0.4, PI / 4.0, 1.3, PI / 2.0] {
                // Envelope divided out so the fringe is strictly periodic.
                let g = |x: f64| {
                    model.coincidence_density(theta, x) / model.envelope_baseline(x)
                };
                let sampled = fringe_quadratures(g, 0.0, period).visibility().unwrap();
                let closed = raw_spatial_visibility(&model, theta).unwrap();
                assert!(close(sampled, closed, 1e-11), "θ = {theta}");
            }
        }
    }

    #[test]
    fn closed_form_polarization_visibility_matches_sampled_fringe() {
        for state in [
            HybridState::circular(),
            HybridState::from_waveplate_angle(5f64.to_radians()),
        ] {
            let model = model_for(state);
            for &x in &[1.1e-4, 2.9e-4, 6.3e-4] {
                let f = |theta: f64| model.coincidence_density(theta, x);
                let sampled = fringe_quadratures(f, 0.0, PI).visibility().unwrap();
                let closed = raw_polarization_visibility(&model, x).unwrap();
                assert!(close(sampled, closed, 1e-11), "x = {x}");
            }
        }
    }

    #[test]
    fn corrected_visibilities_follow_the_concurrence() {
        let cases = [
            (5f64.to_radians(), 0.342_020_143_325_668_7),
            (10f64.to_radians(), 0.642_787_609_686_539_3),
        ];
        for (xi, c) in cases {
            let model = model_for(HybridState::from_waveplate_angle(xi));
            // Aligned settings read C², the diagonal setting reads C.
            assert!(close(corrected_spatial_visibility(&model, 0.0), c * c, 1e-13));
            assert!(close(
                corrected_spatial_visibility(&model, PI / 2.0),
                c * c,
                1e-13
            ));
            assert!(close(
                corrected_spatial_visibility(&model, PI / 4.0),
                c,
                1e-13
            ));
            // Same readings along the position fringe.
            let quarter = PI / (4.0 * model.geometry().fringe_rate());
            assert!(close(corrected_polarization_visibility(&model, 0.0), c * c, 1e-13));
            assert!(close(
                corrected_polarization_visibility(&model, quarter),
                c,
                1e-12
            ));
            // The sampled marginal-free fringe agrees.
            let period = model.geometry().fringe_period();
            let g =
                |x: f64| model.corrected_density(PI / 4.0, x) / model.envelope_baseline(x);
            let sampled = fringe_quadratures(g, 0.0, period).visibility().unwrap();
            assert!(close(sampled, c, 1e-11));
        }
    }

    #[test]
    fn balanced_state_with_quarter_phase_peaks_at_aligned_settings() {
        // cos φ_P = 0 kills the diagonal term: visibility C²·|cos 2θ|.
        let model = model_for(HybridState::circular());
        assert!(close(corrected_spatial_visibility(&model, 0.0), 1.0, 1e-14));
        assert!(corrected_spatial_visibility(&model, PI / 4.0).abs() < 1e-15);
        let bounds = corrected_visibility_bounds(model.state());
        assert!(close(bounds.at_aligned, 1.0, 1e-14));
        assert!(close(bounds.max_over_settings, 1.0, 1e-14));
        assert_eq!(bounds.attains_ceiling_at, None);
    }

    #[test]
    fn product_state_has_perfect_raw_and_vanishing_corrected_fringes() {
        // One-sided state: the raw coincidence fringe is fully modulated at
        // every analyzer setting even though nothing is entangled; the
        // marginal-free visibility exposes that by dropping to zero.
        let model = model_for(HybridState::from_waveplate_angle(0.0));
        for &theta in &[0.2, PI / 4.0, 1.1, PI / 2.0] {
            assert!(close(raw_spatial_visibility(&model, theta).unwrap(), 1.0, 1e-13));
            assert!(corrected_spatial_visibility(&model, theta).abs() < 1e-15);
        }
        // At the extinguished setting the raw visibility is undefined.
        assert_eq!(raw_spatial_visibility(&model, 0.0), None);
        // Dark quarter-fringe point for the θ scan of the same state.
        let quarter = PI / (2.0 * model.geometry().fringe_rate());
        assert_eq!(raw_polarization_visibility(&model, quarter), None);
        assert!(close(
            raw_polarization_visibility(&model, 1.3e-4).unwrap(),
            1.0,
            1e-13
        ));
    }

    #[test]
    fn aligned_bounds_for_the_waveplate_family() {
        let cases = [
            (0.0, 0.0, 1.0),
            (5f64.to_radians(), 0.342_020_143_325_668_7, 0.939_692_620_785_908_4),
            (10f64.to_radians(), 0.642_787_609_686_539_3, 0.766_044_443_118_978),
        ];
        for (xi, c, v1) in cases {
            let state = HybridState::from_waveplate_angle(xi);
            let bounds = corrected_visibility_bounds(&state);
            assert!(close(bounds.at_aligned, c * c, 1e-13));
            assert!(close(bounds.max_over_settings, c.max(c * c), 1e-13));
            assert_eq!(bounds.attains_ceiling_at, Some(PI / 4.0));
            assert!(close(singles_visibility(&state), v1, 1e-13));
            // Complementarity across the family: C² + V₁² = 1.
            assert!(close(c * c + v1 * v1, 1.0, 1e-13));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        /// Raw visibility never exceeds 1; corrected never exceeds C.
        #[test]
        fn visibility_ranges(
            chi in 0.001..(PI / 2.0 - 0.001),
            phi_p in 0.0..(2.0 * PI),
            theta in 0.0..(2.0 * PI),
            x_frac in -3.0..3.0f64,
        ) {
            let proj = crate::source::PolarizationProjection::new(
                chi.cos(),
                chi.sin(),
                phi_p,
            )
            .unwrap();
            let model = model_for(HybridState::new(proj));
            let x = x_frac * model.geometry().fringe_period();
            let c = model.concurrence();

            if let Some(v) = raw_spatial_visibility(&model, theta) {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
            if let Some(v) = raw_polarization_visibility(&model, x) {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
            prop_assert!(corrected_spatial_visibility(&model, theta) <= c + 1e-12);
            prop_assert!(corrected_polarization_visibility(&model, x) <= c + 1e-12);

            // Sampled fringe agrees with the closed form away from the
            // ill-conditioned dark settings.
            let closed = raw_spatial_visibility(&model, theta);
            if let Some(closed) = closed {
                let g = |x: f64| {
                    model.coincidence_density(theta, x) / model.envelope_baseline(x)
                };
                let sampled = fringe_quadratures(g, 0.0, model.geometry().fringe_period());
                if sampled.mean > 1e-6 {
                    let sampled = sampled.visibility().unwrap();
                    prop_assert!(
                        (sampled - closed).abs() <= 1e-9 * sampled.abs().max(1.0),
                        "sampled {sampled} vs closed {closed}"
                    );
                }
            }
        }
    }
}
