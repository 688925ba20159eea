//! Weighted Levenberg-Marquardt fits of the two fringe shapes seen in the
//! scans: a sinc²-enveloped position fringe and a plain analyzer fringe.
//!
//! Counts are weighted by σᵢ = √max(nᵢ, 1). Jacobians are analytic, the
//! damping scales the normal-equation diagonal, and the reported errors are
//! the square roots of the diagonal of (JᵀWJ)⁻¹ at the solution, without a
//! χ² rescaling. The visibility parameter floats freely during the fit;
//! accessors clamp it to [0, 1] for reporting while keeping the raw value
//! available for pull statistics.

use std::f64::consts::PI;

use crate::optics::Geometry;
use crate::quad::sinc;
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 200;
const INITIAL_DAMPING: f64 = 1e-3;
const MIN_DAMPING: f64 = 1e-12;
const MAX_DAMPING: f64 = 1e12;
const RELATIVE_TOLERANCE: f64 = 1e-10;

/// A parametric fringe shape the optimizer can fit.
pub trait FringeModel {
    fn parameter_count(&self) -> usize;
    fn value(&self, params: &[f64], setting: f64) -> f64;
    /// Writes ∂value/∂paramⱼ into `out`.
    fn gradient(&self, params: &[f64], setting: f64, out: &mut [f64]);
    fn initial_guess(&self, settings: &[f64], values: &[f64]) -> Result<Vec<f64>>;
    /// Folds sign and phase ambiguities into a canonical parameter form,
    /// mirroring the same reflection in the covariance.
    fn canonicalize(&self, params: &mut [f64], covariance: &mut [f64]);
}

/// R·sinc²(A(x-x₀))·(1 + V·cos(2B(x-x₀)+φ)); parameters [R, V, x₀, φ].
/// The envelope and fringe rates are fixed by the geometry, not fitted.
#[derive(Clone, Copy, Debug)]
pub struct SpatialFringe {
    pub envelope_rate: f64,
    pub fringe_rate: f64,
}

impl SpatialFringe {
    pub fn for_geometry(geometry: &Geometry) -> Self {
        Self {
            envelope_rate: geometry.envelope_rate(),
            fringe_rate: geometry.fringe_rate(),
        }
    }
}

/// d sinc(u)/du, series-expanded near the removable singularity.
fn sinc_deriv(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        -u / 3.0 * (1.0 - u * u / 10.0)
    } else {
        (u.cos() - sinc(u)) / u
    }
}

impl FringeModel for SpatialFringe {
    fn parameter_count(&self) -> usize {
        4
    }

    fn value(&self, params: &[f64], x: f64) -> f64 {
        let [r, v, x0, phi] = params else { unreachable!() };
        let s = sinc(self.envelope_rate * (x - x0));
        let psi = 2.0 * self.fringe_rate * (x - x0) + phi;
        r * s * s * (1.0 + v * psi.cos())
    }

    fn gradient(&self, params: &[f64], x: f64, out: &mut [f64]) {
        let [r, v, x0, phi] = params else { unreachable!() };
        let u = self.envelope_rate * (x - x0);
        let s = sinc(u);
        let e = s * s;
        let psi = 2.0 * self.fringe_rate * (x - x0) + phi;
        let (sin_psi, cos_psi) = psi.sin_cos();
        let fringe = 1.0 + v * cos_psi;
        out[0] = e * fringe;
        out[1] = r * e * cos_psi;
        out[2] = -2.0 * self.envelope_rate * r * s * sinc_deriv(u) * fringe
            + 2.0 * self.fringe_rate * r * e * v * sin_psi;
        out[3] = -r * e * v * sin_psi;
    }

    fn initial_guess(&self, settings: &[f64], values: &[f64]) -> Result<Vec<f64>> {
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return Err(Error::FitFailed("no counts to seed the fit"));
        }
        let center = settings
            .iter()
            .zip(values)
            .map(|(x, y)| x * y)
            .sum::<f64>()
            / total;
        let envelope_mass: f64 = settings
            .iter()
            .map(|&x| {
                let s = sinc(self.envelope_rate * (x - center));
                s * s
            })
            .sum();
        let amplitude = total / envelope_mass;

        // Project the envelope-flattened residual onto the fringe
        // quadratures, using only points inside the main lobe.
        let (mut c, mut s, mut used) = (0.0, 0.0, 0usize);
        for (&x, &y) in settings.iter().zip(values) {
            let u = self.envelope_rate * (x - center);
            let e = sinc(u) * sinc(u);
            if e < 0.1 {
                continue;
            }
            let g = y / (amplitude * e) - 1.0;
            let w = 2.0 * self.fringe_rate * (x - center);
            c += g * w.cos();
            s += g * w.sin();
            used += 1;
        }
        if used < 4 {
            return Err(Error::FitFailed("scan misses the envelope main lobe"));
        }
        c *= 2.0 / used as f64;
        s *= 2.0 / used as f64;
        let visibility = c.hypot(s).min(1.5);
        let phase = (-s).atan2(c);
        Ok(vec![amplitude, visibility, center, phase])
    }

    fn canonicalize(&self, params: &mut [f64], covariance: &mut [f64]) {
        if params[1] < 0.0 {
            params[1] = -params[1];
            params[3] += PI;
            reflect_parameter(covariance, 4, 1);
        }
        params[3] = wrap_angle(params[3]);
    }
}

/// R·(1 + V·cos(2(θ-θ₀))); parameters [R, V, θ₀].
#[derive(Clone, Copy, Debug, Default)]
pub struct PolarizationFringe;

impl FringeModel for PolarizationFringe {
    fn parameter_count(&self) -> usize {
        3
    }

    fn value(&self, params: &[f64], theta: f64) -> f64 {
        let [r, v, t0] = params else { unreachable!() };
        r * (1.0 + v * (2.0 * (theta - t0)).cos())
    }

    fn gradient(&self, params: &[f64], theta: f64, out: &mut [f64]) {
        let [r, v, t0] = params else { unreachable!() };
        let psi = 2.0 * (theta - t0);
        let (sin_psi, cos_psi) = psi.sin_cos();
        out[0] = 1.0 + v * cos_psi;
        out[1] = r * cos_psi;
        out[2] = 2.0 * r * v * sin_psi;
    }

    fn initial_guess(&self, settings: &[f64], values: &[f64]) -> Result<Vec<f64>> {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if mean <= 0.0 {
            return Err(Error::FitFailed("no counts to seed the fit"));
        }
        let (mut c, mut s) = (0.0, 0.0);
        for (&theta, &y) in settings.iter().zip(values) {
            let g = y / mean - 1.0;
            c += g * (2.0 * theta).cos();
            s += g * (2.0 * theta).sin();
        }
        c *= 2.0 / n;
        s *= 2.0 / n;
        Ok(vec![mean, c.hypot(s).min(1.5), 0.5 * s.atan2(c)])
    }

    fn canonicalize(&self, params: &mut [f64], covariance: &mut [f64]) {
        if params[1] < 0.0 {
            params[1] = -params[1];
            params[2] += PI / 2.0;
            reflect_parameter(covariance, 3, 1);
        }
        params[2] = params[2].rem_euclid(PI);
    }
}

fn wrap_angle(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Negates row and column `index` of a dim×dim covariance (a parameter
/// reflection); the diagonal is untouched.
fn reflect_parameter(covariance: &mut [f64], dim: usize, index: usize) {
    if covariance.is_empty() {
        return;
    }
    for j in 0..dim {
        if j != index {
            covariance[index * dim + j] = -covariance[index * dim + j];
            covariance[j * dim + index] = -covariance[j * dim + index];
        }
    }
}

/// Everything a fit run reports.
#[derive(Clone, Debug)]
pub struct FitOutcome {
    pub params: Vec<f64>,
    pub errors: Vec<f64>,
    /// Row-major (JᵀWJ)⁻¹ at the solution.
    pub covariance: Vec<f64>,
    pub chi_sq: f64,
    pub dof: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Weighted Levenberg-Marquardt descent from the model's own initial guess.
pub fn fit_curve(
    model: &impl FringeModel,
    settings: &[f64],
    values: &[f64],
    sigmas: &[f64],
) -> Result<FitOutcome> {
    let n = settings.len();
    let p = model.parameter_count();
    if values.len() != n || sigmas.len() != n {
        return Err(Error::FitFailed("settings, values and sigmas must align"));
    }
    if n <= p {
        return Err(Error::FitFailed("more parameters than points"));
    }
    if values.iter().chain(sigmas).any(|v| !v.is_finite()) {
        return Err(Error::FitFailed("non-finite data"));
    }
    if sigmas.iter().any(|s| *s <= 0.0) {
        return Err(Error::FitFailed("sigmas must be positive"));
    }

    let chi_sq_of = |params: &[f64]| -> f64 {
        settings
            .iter()
            .zip(values)
            .zip(sigmas)
            .map(|((&x, &y), &sigma)| {
                let r = (y - model.value(params, x)) / sigma;
                r * r
            })
            .sum()
    };

    let mut params = model.initial_guess(settings, values)?;
    let mut chi_sq = chi_sq_of(&params);
    let mut damping = INITIAL_DAMPING;
    let mut converged = false;
    let mut iterations = 0;
    let mut grad = vec![0.0; p];
    let mut hessian = vec![0.0; p * p];

    'outer: for iter in 1..=MAX_ITERATIONS {
        iterations = iter;
        normal_equations(model, settings, values, sigmas, &params, &mut hessian, &mut grad);

        loop {
            let mut damped = hessian.clone();
            for j in 0..p {
                damped[j * p + j] *= 1.0 + damping;
            }
            let step = match solve_spd(&damped, &grad, p) {
                Some(step) => step,
                None => {
                    damping *= 10.0;
                    if damping > MAX_DAMPING {
                        break 'outer;
                    }
                    continue;
                }
            };
            let trial: Vec<f64> = params.iter().zip(&step).map(|(a, b)| a + b).collect();
            let trial_chi = chi_sq_of(&trial);
            if trial_chi <= chi_sq {
                let improvement = chi_sq - trial_chi;
                params = trial;
                chi_sq = trial_chi;
                damping = (damping / 10.0).max(MIN_DAMPING);
                if improvement <= RELATIVE_TOLERANCE * chi_sq.max(1e-30) {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            damping *= 10.0;
            if damping > MAX_DAMPING {
                break 'outer;
            }
        }
    }

    normal_equations(model, settings, values, sigmas, &params, &mut hessian, &mut grad);
    let covariance = invert_spd(&hessian, p)
        .ok_or(Error::FitFailed("degenerate fit: singular normal equations"))?;
    let errors = (0..p)
        .map(|j| covariance[j * p + j].max(0.0).sqrt())
        .collect();

    let mut covariance = covariance;
    model.canonicalize(&mut params, &mut covariance);

    Ok(FitOutcome {
        params,
        errors,
        covariance,
        chi_sq,
        dof: n - p,
        iterations,
        converged,
    })
}

fn normal_equations(
    model: &impl FringeModel,
    settings: &[f64],
    values: &[f64],
    sigmas: &[f64],
    params: &[f64],
    hessian: &mut [f64],
    grad: &mut [f64],
) {
    let p = params.len();
    hessian.fill(0.0);
    grad.fill(0.0);
    let mut row = vec![0.0; p];
    for ((&x, &y), &sigma) in settings.iter().zip(values).zip(sigmas) {
        model.gradient(params, x, &mut row);
        let w = 1.0 / (sigma * sigma);
        let r = y - model.value(params, x);
        for j in 0..p {
            grad[j] += w * row[j] * r;
            for k in j..p {
                hessian[j * p + k] += w * row[j] * row[k];
            }
        }
    }
    for j in 0..p {
        for k in 0..j {
            hessian[j * p + k] = hessian[k * p + j];
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(a: &mut [f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut x: Vec<f64> = b.to_vec();
    let scale = a
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .abs()
                    .partial_cmp(&a[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot_row * n + col].abs() < 1e-14 * scale {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            x.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            x[row] -= factor * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * x[k];
        }
        x[col] = acc / a[col * n + col];
    }
    Some(x)
}

/// Row/column scaling giving a symmetric positive matrix a unit diagonal;
/// `None` when a diagonal entry is not strictly positive (a parameter the
/// data does not constrain at all).
fn equilibration(a: &[f64], n: usize) -> Option<Vec<f64>> {
    (0..n)
        .map(|j| {
            let d = a[j * n + j];
            (d > 0.0).then(|| 1.0 / d.sqrt())
        })
        .collect()
}

fn equilibrate(a: &[f64], d: &[f64], n: usize) -> Vec<f64> {
    let mut scaled = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            scaled[i * n + j] = a[i * n + j] * d[i] * d[j];
        }
    }
    scaled
}

/// Solves a symmetric positive system after equilibrating it, so the pivot
/// test stays meaningful when parameter scales differ by many orders (a
/// fringe amplitude in counts against a center in meters).
fn solve_spd(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let d = equilibration(a, n)?;
    let mut scaled = equilibrate(a, &d, n);
    let rhs: Vec<f64> = b.iter().zip(&d).map(|(v, s)| v * s).collect();
    let y = solve(&mut scaled, &rhs, n)?;
    Some(y.into_iter().zip(&d).map(|(v, s)| v * s).collect())
}

/// Inverse of a symmetric positive matrix via the equilibrated solve.
fn invert_spd(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let d = equilibration(a, n)?;
    let inv_scaled = invert(&equilibrate(a, &d, n), n)?;
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            inv[i * n + j] = inv_scaled[i * n + j] * d[i] * d[j];
        }
    }
    Some(inv)
}

/// Matrix inverse via column-by-column solves; `None` when singular.
fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        let mut unit = vec![0.0; n];
        unit[col] = 1.0;
        let mut work = a.to_vec();
        let column = solve(&mut work, &unit, n)?;
        for row in 0..n {
            inv[row * n + col] = column[row];
        }
    }
    Some(inv)
}

fn counts_to_curve(counts: &[u64]) -> (Vec<f64>, Vec<f64>) {
    let values: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
    let sigmas = values.iter().map(|&v| v.max(1.0).sqrt()).collect();
    (values, sigmas)
}

/// Reweighting passes for count fits. Weights taken from the observed
/// counts favor downward fluctuations wherever the curve runs low, which
/// deepens fitted minima and inflates the visibility by ~1/n per point;
/// two passes against the fitted model remove the effect.
const REWEIGHT_PASSES: usize = 2;

fn model_sigmas(fitted: impl Fn(f64) -> f64, settings: &[f64]) -> Vec<f64> {
    settings.iter().map(|&s| fitted(s).max(1.0).sqrt()).collect()
}

/// Fit of the enveloped position fringe, with named parameter access.
#[derive(Clone, Debug)]
pub struct SpatialFitResult {
    model: SpatialFringe,
    outcome: FitOutcome,
}

impl SpatialFitResult {
    pub fn outcome(&self) -> &FitOutcome {
        &self.outcome
    }

    pub fn amplitude(&self) -> f64 {
        self.outcome.params[0]
    }

    pub fn amplitude_error(&self) -> f64 {
        self.outcome.errors[0]
    }

    /// Modulation depth clamped to the physical range [0, 1].
    pub fn visibility(&self) -> f64 {
        self.outcome.params[1].clamp(0.0, 1.0)
    }

    /// Modulation depth as fitted, allowed outside [0, 1] by noise.
    pub fn visibility_unclamped(&self) -> f64 {
        self.outcome.params[1]
    }

    pub fn visibility_error(&self) -> f64 {
        self.outcome.errors[1]
    }

    pub fn center(&self) -> f64 {
        self.outcome.params[2]
    }

    pub fn center_error(&self) -> f64 {
        self.outcome.errors[2]
    }

    pub fn phase(&self) -> f64 {
        self.outcome.params[3]
    }

    pub fn phase_error(&self) -> f64 {
        self.outcome.errors[3]
    }

    /// Fitted curve evaluated at `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.model.value(&self.outcome.params, x)
    }
}

/// Fit of the analyzer fringe, with named parameter access.
#[derive(Clone, Debug)]
pub struct PolarizationFitResult {
    outcome: FitOutcome,
}

impl PolarizationFitResult {
    pub fn outcome(&self) -> &FitOutcome {
        &self.outcome
    }

    pub fn amplitude(&self) -> f64 {
        self.outcome.params[0]
    }

    pub fn amplitude_error(&self) -> f64 {
        self.outcome.errors[0]
    }

    pub fn visibility(&self) -> f64 {
        self.outcome.params[1].clamp(0.0, 1.0)
    }

    pub fn visibility_unclamped(&self) -> f64 {
        self.outcome.params[1]
    }

    pub fn visibility_error(&self) -> f64 {
        self.outcome.errors[1]
    }

    /// Fringe orientation folded into [0, π).
    pub fn orientation(&self) -> f64 {
        self.outcome.params[2]
    }

    pub fn orientation_error(&self) -> f64 {
        self.outcome.errors[2]
    }

    pub fn value_at(&self, theta: f64) -> f64 {
        PolarizationFringe.value(&self.outcome.params, theta)
    }
}

pub fn fit_spatial_curve(
    geometry: &Geometry,
    positions: &[f64],
    values: &[f64],
    sigmas: &[f64],
) -> Result<SpatialFitResult> {
    let model = SpatialFringe::for_geometry(geometry);
    let outcome = fit_curve(&model, positions, values, sigmas)?;
    Ok(SpatialFitResult { model, outcome })
}

pub fn fit_spatial_counts(
    geometry: &Geometry,
    positions: &[f64],
    counts: &[u64],
) -> Result<SpatialFitResult> {
    let (values, sigmas) = counts_to_curve(counts);
    let mut fit = fit_spatial_curve(geometry, positions, &values, &sigmas)?;
    for _ in 0..REWEIGHT_PASSES {
        let sigmas = model_sigmas(|x| fit.value_at(x), positions);
        fit = fit_spatial_curve(geometry, positions, &values, &sigmas)?;
    }
    Ok(fit)
}

pub fn fit_polarization_curve(
    angles: &[f64],
    values: &[f64],
    sigmas: &[f64],
) -> Result<PolarizationFitResult> {
    let outcome = fit_curve(&PolarizationFringe, angles, values, sigmas)?;
    Ok(PolarizationFitResult { outcome })
}

pub fn fit_polarization_counts(angles: &[f64], counts: &[u64]) -> Result<PolarizationFitResult> {
    let (values, sigmas) = counts_to_curve(counts);
    let mut fit = fit_polarization_curve(angles, &values, &sigmas)?;
    for _ in 0..REWEIGHT_PASSES {
        let sigmas = model_sigmas(|t| fit.value_at(t), angles);
        fit = fit_polarization_curve(angles, &values, &sigmas)?;
    }
    Ok(fit)
}
