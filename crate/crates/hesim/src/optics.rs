//! Slit geometry and the far-field amplitudes of the two slit modes.
//!
//! Two identical slits of half-width `a` are centered at ±d/2 in the slit
//! plane; detection happens a distance `z` downstream along a transverse
//! coordinate x. The symmetric (F) and antisymmetric (A) superpositions of
//! the slits diffract to
//!
//! ```text
//! u_F(x) =    √(2ka/(πz)) · cos(Bx) · sinc(Ax)
//! u_A(x) = -i·√(2ka/(πz)) · sin(Bx) · sinc(Ax)
//! ```
//!
//! with envelope rate A = ka/z and fringe rate B = kd/(2z). Each mode is
//! unit-normalized along the detection axis and the two are orthogonal by
//! parity.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::quad::sinc;
use crate::{Error, Result};

/// Double-slit geometry, all lengths in meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geometry {
    slit_half_width: f64,
    slit_separation: f64,
    wavelength: f64,
    distance: f64,
}

/// Geometry of the reference apparatus: 80 µm slits separated by 250 µm,
/// read out 0.42 m downstream at 702 nm.
pub fn reference_geometry() -> Geometry {
    Geometry::new(40e-6, 250e-6, 702e-9, 0.42).expect("reference geometry is valid")
}

impl Geometry {
    /// Requires positive finite lengths and non-overlapping slits
    /// (`slit_separation > 2·slit_half_width`).
    pub fn new(
        slit_half_width: f64,
        slit_separation: f64,
        wavelength: f64,
        distance: f64,
    ) -> Result<Self> {
        let lengths = [slit_half_width, slit_separation, wavelength, distance];
        if lengths.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidGeometry("lengths must be positive and finite"));
        }
        if slit_separation <= 2.0 * slit_half_width {
            return Err(Error::InvalidGeometry("slits overlap"));
        }
        Ok(Self {
            slit_half_width,
            slit_separation,
            wavelength,
            distance,
        })
    }

    pub fn slit_half_width(&self) -> f64 {
        self.slit_half_width
    }

    pub fn slit_separation(&self) -> f64 {
        self.slit_separation
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Envelope rate A = ka/z; sinc(Ax) first vanishes at x = π/A.
    pub fn envelope_rate(&self) -> f64 {
        self.wavenumber() * self.slit_half_width / self.distance
    }

    /// Fringe rate B = kd/(2z); intensity fringes go like cos(2Bx).
    pub fn fringe_rate(&self) -> f64 {
        self.wavenumber() * self.slit_separation / (2.0 * self.distance)
    }

    /// Position of the first envelope null, π/A.
    pub fn envelope_null(&self) -> f64 {
        PI / self.envelope_rate()
    }

    /// Intensity fringe period π/B = λz/d.
    pub fn fringe_period(&self) -> f64 {
        PI / self.fringe_rate()
    }

    /// Squared peak of the symmetric mode, |u_F(0)|² = 2ka/(πz).
    pub fn mode_peak_sqr(&self) -> f64 {
        2.0 * self.wavenumber() * self.slit_half_width / (PI * self.distance)
    }

    /// Far-field amplitude of the symmetric slit mode.
    pub fn mode_f(&self, x: f64) -> Complex64 {
        let scale = self.mode_peak_sqr().sqrt();
        let value = scale * (self.fringe_rate() * x).cos() * sinc(self.envelope_rate() * x);
        Complex64::new(value, 0.0)
    }

    /// Far-field amplitude of the antisymmetric slit mode.
    pub fn mode_a(&self, x: f64) -> Complex64 {
        let scale = self.mode_peak_sqr().sqrt();
        let value = scale * (self.fringe_rate() * x).sin() * sinc(self.envelope_rate() * x);
        Complex64::new(0.0, -value)
    }

    /// Far-field amplitude of a single normalized slit centered at `center`.
    pub fn slit_amplitude(&self, x: f64, center: f64) -> Complex64 {
        let scale = (self.envelope_rate() / PI).sqrt();
        let phase = -self.wavenumber() * x * center / self.distance;
        Complex64::from_polar(scale * sinc(self.envelope_rate() * x), phase)
    }
}

/// Far-field modes rebuilt from the individual slit amplitudes:
/// u_F = (upper + lower)/√2, u_A = (upper - lower)/√2.
pub fn modes_from_slits(geometry: &Geometry, x: f64) -> (Complex64, Complex64) {
    let half = geometry.slit_separation / 2.0;
    let upper = geometry.slit_amplitude(x, half);
    let lower = geometry.slit_amplitude(x, -half);
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ((upper + lower) * s, (upper - lower) * s)
}
