//! Detection-plane densities for the hybrid state behind the double slit.
//!
//! The signal photon meets a polarization analyzer at angle θ and the idler
//! propagates through the slits to a transverse position x. Everything here
//! is a genuine probability density: the joint coincidence density
//! integrates to one over (θ, x) ∈ [0, 2π) × ℝ and the two singles
//! densities are its marginals.
//!
//! Writing C = 2αβ for the concurrence, A and B for the envelope and fringe
//! rates and κ = |u_F(0)|²/π, the closed forms are
//!
//! ```text
//! p_cc(θ,x) = κ·sinc²(Ax)·[β²cos²θ·sin²(Bx) + α²sin²θ·cos²(Bx)
//!                          + ½αβ·sin(2θ)·sin(2Bx)·cos φ_P]
//! p_s(x)    = (κπ/2)·sinc²(Ax)·[1 + (α²-β²)cos(2Bx)]
//! p_p(θ)    = (1/2π)·[1 + (β²-α²)cos(2θ)]
//! ```
//!
//! Subtracting the product of marginals and restoring the envelope baseline
//! (κ/4)·sinc²(Ax) distills the genuinely two-photon interference:
//!
//! ```text
//! p_corr(θ,x) = (κ/4)·sinc²(Ax)·[1 + C·sin(2θ)·sin(2Bx)·cos φ_P
//!                                  - C²·cos(2θ)·cos(2Bx)]
//! ```
//!
//! which depends on the state only through C and φ_P and is nonnegative.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::hilbert::QubitLabel;
use crate::optics::Geometry;
use crate::quad::sinc;
use crate::source::HybridState;

/// Closed-form detection densities for one state in one geometry.
#[derive(Clone, Debug)]
pub struct PatternModel {
    geometry: Geometry,
    state: HybridState,
}

impl PatternModel {
    pub fn new(geometry: Geometry, state: HybridState) -> Self {
        Self { geometry, state }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn state(&self) -> &HybridState {
        &self.state
    }

    pub fn concurrence(&self) -> f64 {
        self.state.concurrence()
    }

    /// Scale of the coincidence density, κ = |u_F(0)|²/π.
    pub fn coincidence_scale(&self) -> f64 {
        self.geometry.mode_peak_sqr() / PI
    }

    fn envelope_sqr(&self, x: f64) -> f64 {
        let s = sinc(self.geometry.envelope_rate() * x);
        s * s
    }

    /// Joint amplitude for the analyzer at θ and the idler at x, assembled
    /// directly from the state vector and the slit-mode amplitudes.
    pub fn two_photon_amplitude(&self, theta: f64, x: f64) -> Complex64 {
        let v = self.state.vector();
        debug_assert_eq!(
            v.labels(),
            &[QubitLabel::SignalPol, QubitLabel::IdlerPath]
        );
        let analyzer = [theta.cos(), theta.sin()];
        let modes = [self.geometry.mode_f(x), self.geometry.mode_a(x)];
        let mut amp = Complex64::ZERO;
        for (s, pol) in analyzer.iter().enumerate() {
            for (m, mode) in modes.iter().enumerate() {
                amp += *pol * mode * v.amp((s << 1) | m);
            }
        }
        amp
    }

    /// Coincidence density p_cc(θ, x).
    pub fn coincidence_density(&self, theta: f64, x: f64) -> f64 {
        let (alpha, beta) = (self.state.alpha(), self.state.beta());
        let b = self.geometry.fringe_rate() * x;
        let (sin_b, cos_b) = b.sin_cos();
        let (sin_t, cos_t) = theta.sin_cos();
        let bracket = beta * beta * cos_t * cos_t * sin_b * sin_b
            + alpha * alpha * sin_t * sin_t * cos_b * cos_b
            + 0.5 * alpha
                * beta
                * (2.0 * theta).sin()
                * (2.0 * b).sin()
                * self.state.phi_p().cos();
        self.coincidence_scale() * self.envelope_sqr(x) * bracket
    }

    /// Idler singles density p_s(x); integrates to one along the axis.
    pub fn spatial_singles(&self, x: f64) -> f64 {
        let weight = self.state.alpha().powi(2) - self.state.beta().powi(2);
        let fringe = 1.0 + weight * (2.0 * self.geometry.fringe_rate() * x).cos();
        0.5 * PI * self.coincidence_scale() * self.envelope_sqr(x) * fringe
    }

    /// Analyzer singles density p_p(θ) over θ ∈ [0, 2π).
    pub fn polarization_singles(&self, theta: f64) -> f64 {
        let weight = self.state.beta().powi(2) - self.state.alpha().powi(2);
        (1.0 + weight * (2.0 * theta).cos()) / (2.0 * PI)
    }

    /// Envelope baseline (κ/4)·sinc²(Ax), the product of the marginal
    /// envelope levels; restored when the singles product is subtracted.
    pub fn envelope_baseline(&self, x: f64) -> f64 {
        0.25 * self.coincidence_scale() * self.envelope_sqr(x)
    }

    /// Marginal-free coincidence density in closed form.
    pub fn corrected_density(&self, theta: f64, x: f64) -> f64 {
        let c = self.concurrence();
        let two_b = 2.0 * self.geometry.fringe_rate() * x;
        let bracket = 1.0
            + c * (2.0 * theta).sin() * two_b.sin() * self.state.phi_p().cos()
            - c * c * (2.0 * theta).cos() * two_b.cos();
        self.envelope_baseline(x) * bracket
    }

    /// Marginal-free coincidence density assembled the operational way:
    /// raw coincidences minus the singles product, plus the envelope
    /// baseline. Agrees with [`corrected_density`](Self::corrected_density)
    /// identically.
    pub fn corrected_from_raw(&self, theta: f64, x: f64) -> f64 {
        self.coincidence_density(theta, x)
            - self.spatial_singles(x) * self.polarization_singles(theta)
            + self.envelope_baseline(x)
    }
}
