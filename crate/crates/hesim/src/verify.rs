//! Self-checking identity suite with injectable formula mutations.
//!
//! Each check pits two routes to the same quantity against each other: a
//! closed-form candidate reimplemented here against the state-vector
//! pipeline, a quadrature, or frozen reference constants. A [`Mutation`]
//! rewrites one term of one candidate formula; a healthy suite flags
//! every mutation while passing untouched, which demonstrates the checks
//! can actually see the physics they claim to pin down.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::analysis::fringe_quadratures;
use crate::optics::Geometry;
use crate::patterns::PatternModel;
use crate::quad::{integrate_detection_axis, integrate_interval, sinc};
use crate::source::{
    attach_idler_spatial, bell_psi, cvp_triple, HybridState, PolarizationProjection,
};
use crate::hilbert::QubitLabel;
use crate::Error;

/// Single defect deliberately injected into one candidate formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Position singles fringe at half the true frequency.
    MarginalFringeFrequency,
    /// Sign of the second-order term in the corrected pattern flipped.
    CorrectedTermSign,
    /// State weights swapped between the two analyzer quadratures.
    StateWeightSwap,
    /// Analyzer marginal modulated with the complementary weight.
    ProjectionWeightSwap,
    /// Geometry built for a neighboring wavelength.
    Wavelength,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::MarginalFringeFrequency,
        Mutation::CorrectedTermSign,
        Mutation::StateWeightSwap,
        Mutation::ProjectionWeightSwap,
        Mutation::Wavelength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::MarginalFringeFrequency => "marginal-fringe-frequency",
            Mutation::CorrectedTermSign => "corrected-term-sign",
            Mutation::StateWeightSwap => "state-weight-swap",
            Mutation::ProjectionWeightSwap => "projection-weight-swap",
            Mutation::Wavelength => "wavelength",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mutation '{s}'")))
    }
}

/// One identity comparison with its observed worst deviation.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation <= self.tolerance
    }
}

pub fn suite_passes(checks: &[IdentityCheck]) -> bool {
    checks.iter().all(IdentityCheck::passed)
}

/// Closed-form formulas under test, with the mutation hooks.
struct Candidate {
    mutation: Option<Mutation>,
    model: PatternModel,
}

impl Candidate {
    fn new(mutation: Option<Mutation>, state: HybridState) -> Self {
        let wavelength = if mutation == Some(Mutation::Wavelength) {
            692e-9
        } else {
            702e-9
        };
        let geometry = Geometry::new(40e-6, 250e-6, wavelength, 0.42).unwrap();
        Candidate {
            mutation,
            model: PatternModel::new(geometry, state),
        }
    }

    fn is(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    fn geometry(&self) -> &Geometry {
        self.model.geometry()
    }

    fn state(&self) -> &HybridState {
        self.model.state()
    }

    fn kappa(&self) -> f64 {
        self.geometry().mode_peak_sqr() / PI
    }

    fn envelope_sqr(&self, x: f64) -> f64 {
        let s = sinc(self.geometry().envelope_rate() * x);
        s * s
    }

    fn coincidence_density(&self, theta: f64, x: f64) -> f64 {
        let (alpha, beta) = (self.state().alpha(), self.state().beta());
        let (mut a_cos, mut a_sin) = (beta * beta, alpha * alpha);
        if self.is(Mutation::StateWeightSwap) {
            std::mem::swap(&mut a_cos, &mut a_sin);
        }
        let b = self.geometry().fringe_rate() * x;
        let bracket = a_cos * theta.cos().powi(2) * b.sin().powi(2)
            + a_sin * theta.sin().powi(2) * b.cos().powi(2)
            + 0.5 * alpha
                * beta
                * (2.0 * theta).sin()
                * (2.0 * b).sin()
                * self.state().phi_p().cos();
        self.kappa() * self.envelope_sqr(x) * bracket
    }

    fn spatial_singles(&self, x: f64) -> f64 {
        let (alpha, beta) = (self.state().alpha(), self.state().beta());
        let frequency = if self.is(Mutation::MarginalFringeFrequency) {
            1.0
        } else {
            2.0
        };
        let fringe = 1.0
            + (alpha * alpha - beta * beta)
                * (frequency * self.geometry().fringe_rate() * x).cos();
        0.5 * self.kappa() * PI * self.envelope_sqr(x) * fringe
    }

    fn polarization_singles(&self, theta: f64) -> f64 {
        let (alpha, beta) = (self.state().alpha(), self.state().beta());
        let mut weight = beta * beta - alpha * alpha;
        if self.is(Mutation::ProjectionWeightSwap) {
            weight = -weight;
        }
        (1.0 + weight * (2.0 * theta).cos()) / (2.0 * PI)
    }

    fn corrected_density(&self, theta: f64, x: f64) -> f64 {
        let c = self.state().concurrence();
        let sign = if self.is(Mutation::CorrectedTermSign) {
            1.0
        } else {
            -1.0
        };
        let b = self.geometry().fringe_rate() * x;
        let bracket = 1.0
            + c * (2.0 * theta).sin() * (2.0 * b).sin() * self.state().phi_p().cos()
            + sign * c * c * (2.0 * theta).cos() * (2.0 * b).cos();
        0.25 * self.kappa() * self.envelope_sqr(x) * bracket
    }
}

fn normalized(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn position_grid(geometry: &Geometry) -> Vec<f64> {
    // Irrational-looking pitch so fringe nodes never line up with samples.
    (0..21)
        .map(|i| (i as f64 - 10.0) * 2.9e-4 + 0.37 * geometry.fringe_period())
        .collect()
}

fn angle_grid() -> Vec<f64> {
    (0..13).map(|i| i as f64 * 2.0 * PI / 13.0).collect()
}

fn suite_states() -> [HybridState; 2] {
    [
        HybridState::from_waveplate_angle(10f64.to_radians()),
        HybridState::circular(),
    ]
}

/// Runs every identity check, optionally with one mutation injected.
pub fn run_identity_suite(mutation: Option<Mutation>) -> Vec<IdentityCheck> {
    let candidates: Vec<Candidate> = suite_states()
        .into_iter()
        .map(|state| Candidate::new(mutation, state))
        .collect();
    let mut checks = Vec::new();

    // The closed coincidence pattern must reproduce the squared
    // two-photon amplitude from the state vector and slit modes, per
    // unit analyzer angle.
    let mut worst = 0.0f64;
    for cand in &candidates {
        for &x in &position_grid(cand.geometry()) {
            for &theta in &angle_grid() {
                let reference = cand.model.two_photon_amplitude(theta, x).norm_sqr() / PI;
                worst = worst.max(normalized(cand.coincidence_density(theta, x), reference));
            }
        }
    }
    checks.push(IdentityCheck {
        name: "amplitude-vs-closed-density",
        max_deviation: worst,
        tolerance: 1e-10,
    });

    // Coincidences at two analyzer angles a quarter turn apart must add
    // up to the position marginal (per unit analyzer angle).
    let mut worst = 0.0f64;
    for cand in &candidates {
        for &x in &position_grid(cand.geometry()) {
            for &theta in &angle_grid() {
                let pair = cand.coincidence_density(theta, x)
                    + cand.coincidence_density(theta + PI / 2.0, x);
                worst = worst.max(normalized(pair, cand.spatial_singles(x) / PI));
            }
        }
    }
    checks.push(IdentityCheck {
        name: "analyzer-pair-sum",
        max_deviation: worst,
        tolerance: 1e-10,
    });

    // Both marginals are probability densities.
    let mut worst = 0.0f64;
    for cand in &candidates {
        let geometry = cand.geometry();
        let total_x = integrate_detection_axis(
            |x| cand.spatial_singles(x),
            geometry.envelope_rate(),
            geometry.fringe_rate(),
        );
        let total_theta =
            integrate_interval(|t| cand.polarization_singles(t), 0.0, 2.0 * PI, 8);
        worst = worst.max((total_x - 1.0).abs()).max((total_theta - 1.0).abs());
    }
    checks.push(IdentityCheck {
        name: "marginal-normalizations",
        max_deviation: worst,
        tolerance: 1e-8,
    });

    // Integrating coincidences over the detection axis must leave the
    // analyzer marginal, pointwise in the analyzer angle.
    let mut worst = 0.0f64;
    for cand in &candidates {
        let geometry = cand.geometry();
        for &theta in &angle_grid() {
            let integrated = integrate_detection_axis(
                |x| cand.coincidence_density(theta, x),
                geometry.envelope_rate(),
                geometry.fringe_rate(),
            );
            worst = worst.max(normalized(
                integrated * 2.0 * PI,
                cand.polarization_singles(theta) * 2.0 * PI,
            ));
        }
    }
    checks.push(IdentityCheck {
        name: "position-integral-vs-analyzer-marginal",
        max_deviation: worst,
        tolerance: 1e-8,
    });

    // The closed corrected pattern must equal coincidences minus the
    // product of marginals plus the envelope baseline.
    let mut worst = 0.0f64;
    for cand in &candidates {
        for &x in &position_grid(cand.geometry()) {
            for &theta in &angle_grid() {
                let assembled = cand.coincidence_density(theta, x)
                    - cand.spatial_singles(x) * cand.polarization_singles(theta)
                    + 0.25 * cand.kappa() * cand.envelope_sqr(x);
                worst = worst.max(normalized(cand.corrected_density(theta, x), assembled));
            }
        }
    }
    checks.push(IdentityCheck {
        name: "corrected-assembly",
        max_deviation: worst,
        tolerance: 1e-10,
    });

    // Quadrature components of the corrected fringe against the closed
    // first- and second-order terms.
    let mut worst = 0.0f64;
    for cand in &candidates {
        let geometry = cand.geometry();
        let period = geometry.fringe_period();
        let c = cand.state().concurrence();
        for &theta in &angle_grid() {
            let flat = |x: f64| {
                cand.corrected_density(theta, x) / (0.25 * cand.kappa() * cand.envelope_sqr(x))
            };
            let parts = fringe_quadratures(flat, 0.0, period);
            let want_cos = -c * c * (2.0 * theta).cos();
            let want_sin = c * (2.0 * theta).sin() * cand.state().phi_p().cos();
            worst = worst
                .max(normalized(parts.mean, 1.0))
                .max(normalized(parts.cos_amp, want_cos))
                .max(normalized(parts.sin_amp, want_sin));
        }
    }
    checks.push(IdentityCheck {
        name: "corrected-fringe-quadratures",
        max_deviation: worst,
        tolerance: 1e-9,
    });

    // Projecting the idler onto any analyzer keeps half the pairs, for
    // any pair phase, slit phase, and projector.
    let mut worst = 0.0f64;
    for (phi_pol, phi_spa, projection) in [
        (0.0, 0.0, PolarizationProjection::left_circular()),
        (0.7, 1.3, PolarizationProjection::linear(0.2)),
        (-2.1, 0.4, PolarizationProjection::new(0.6, 0.8, 1.0).unwrap()),
    ] {
        let pipeline = attach_idler_spatial(&bell_psi(phi_pol), phi_spa).unwrap();
        let (_, prob) = pipeline
            .project_qubit(QubitLabel::IdlerPol, projection.ket())
            .unwrap();
        worst = worst.max((prob - 0.5).abs());
    }
    checks.push(IdentityCheck {
        name: "projection-probability",
        max_deviation: worst,
        tolerance: 1e-12,
    });

    // Concurrence, fringe visibility, and predictability close to one.
    let mut worst = 0.0f64;
    for state in suite_states() {
        let (c, v, p) = cvp_triple(&state).unwrap();
        worst = worst.max((c * c + v * v + p * p - 1.0).abs());
    }
    checks.push(IdentityCheck {
        name: "complementarity-triple",
        max_deviation: worst,
        tolerance: 1e-12,
    });

    // The two slit modes form an orthonormal pair on the detection axis.
    let worst;
    {
        let geometry = *candidates[0].geometry();
        let (a, b) = (geometry.envelope_rate(), geometry.fringe_rate());
        let norm_f =
            integrate_detection_axis(|x| geometry.mode_f(x).norm_sqr(), a, b);
        let norm_a =
            integrate_detection_axis(|x| geometry.mode_a(x).norm_sqr(), a, b);
        let overlap = integrate_detection_axis(
            |x| (geometry.mode_f(x).conj() * geometry.mode_a(x)).re,
            a,
            b,
        );
        let overlap_im = integrate_detection_axis(
            |x| (geometry.mode_f(x).conj() * geometry.mode_a(x)).im,
            a,
            b,
        );
        worst = (norm_f - 1.0)
            .abs()
            .max((norm_a - 1.0).abs())
            .max(overlap.abs())
            .max(overlap_im.abs());
    }
    checks.push(IdentityCheck {
        name: "mode-orthonormality",
        max_deviation: worst,
        tolerance: 1e-8,
    });

    // Geometry rates for the reference bench, frozen once from the
    // defining expressions and pinned here against drift.
    let mut worst = 0.0f64;
    {
        let geometry = candidates[0].geometry();
        worst = worst
            .max(normalized(geometry.envelope_rate(), 852.419_659_093_689_6))
            .max(normalized(geometry.fringe_rate(), 2_663.811_434_667_78))
            .max(normalized(geometry.mode_peak_sqr(), 542.667_209_333_876))
            .max(normalized(geometry.fringe_period(), 1.179_36e-3));
    }
    checks.push(IdentityCheck {
        name: "frozen-reference-scales",
        max_deviation: worst,
        tolerance: 1e-9,
    });

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes_every_check() {
        let checks = run_identity_suite(None);
        assert_eq!(checks.len(), 10);
        for check in &checks {
            assert!(
                check.passed(),
                "{}: {} > {}",
                check.name,
                check.max_deviation,
                check.tolerance
            );
        }
        assert!(suite_passes(&checks));
    }

    #[test]
    fn every_mutation_trips_at_least_one_check() {
        for mutation in Mutation::ALL {
            let checks = run_identity_suite(Some(mutation));
            let tripped: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| c.name)
                .collect();
            assert!(!tripped.is_empty(), "{mutation} slipped through");
        }
    }

    #[test]
    fn mutations_trip_the_checks_that_watch_their_term() {
        let failing = |m: Mutation| -> Vec<&'static str> {
            run_identity_suite(Some(m))
                .iter()
                .filter(|c| !c.passed())
                .map(|c| c.name)
                .collect()
        };
        assert!(failing(Mutation::MarginalFringeFrequency).contains(&"analyzer-pair-sum"));
        assert!(failing(Mutation::CorrectedTermSign).contains(&"corrected-assembly"));
        assert!(failing(Mutation::CorrectedTermSign)
            .contains(&"corrected-fringe-quadratures"));
        assert!(failing(Mutation::StateWeightSwap).contains(&"amplitude-vs-closed-density"));
        assert!(failing(Mutation::ProjectionWeightSwap)
            .contains(&"position-integral-vs-analyzer-marginal"));
        assert!(failing(Mutation::Wavelength).contains(&"frozen-reference-scales"));
    }

    #[test]
    fn mutation_names_round_trip() {
        for mutation in Mutation::ALL {
            let parsed: Mutation = mutation.name().parse().unwrap();
            assert_eq!(parsed, mutation);
        }
        assert!("no-such-defect".parse::<Mutation>().is_err());
    }
}
