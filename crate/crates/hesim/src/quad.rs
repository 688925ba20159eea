//! Numerical integration: composite Simpson and Gauss-Legendre rules on
//! finite intervals, plus an improper-integral scheme for detection-axis
//! profiles that decay like the squared slit envelope.

use std::f64::consts::PI;

/// Panels per envelope half-period in [`integrate_detection_axis`].
const PANELS_PER_NULL_INTERVAL: usize = 2;

/// Envelope half-periods covered on each side of the axis before switching
/// to the analytic tail.
const NULL_WINDOW: usize = 1000;

/// Gauss-Legendre order used by the panel rules.
const GAUSS_ORDER: usize = 16;

/// Composite Simpson rule with `n` subintervals (`n` even, ≥ 2).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n.is_multiple_of(2), "simpson needs an even subdivision");
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Roots are found by Newton iteration from the Chebyshev-like initial
/// guesses; the rule integrates polynomials through degree 2n-1 exactly.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (x, w);
        rule[n - 1 - i] = (-x, w);
    }
    rule
}

/// Legendre polynomial P_n and its derivative at `x` via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Integrates `f` over [a, b] with `panels` composite Gauss-Legendre panels.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1);
    let rule = gauss_legendre(GAUSS_ORDER);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        acc += gauss_panel(&f, lo, lo + width, &rule);
    }
    acc
}

fn gauss_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in rule {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrates `f` over the whole detection axis.
///
/// The integrand must factor as sinc²(envelope_rate·x) times a bounded
/// function that is periodic with the fringe intensity period
/// π/fringe_rate (a constant counts). Gauss-Legendre panels cover the
/// central ±`NULL_WINDOW` envelope half-periods with panel edges pinned to
/// the envelope nulls; beyond that the oscillations average out and the
/// remaining mass is added analytically from the mean fringe level:
///
/// ```text
/// ∫_{|x|>X} sinc²(Ax)·g(x) dx ≈ c₀/(A²X),   c₀ = fringe-period mean of g
/// ```
///
/// Cutting the window at a null makes the neglected oscillatory remainder
/// O(1/(A³X²)), far below the 1e-9 relative accuracy this targets.
pub fn integrate_detection_axis(
    f: impl Fn(f64) -> f64,
    envelope_rate: f64,
    fringe_rate: f64,
) -> f64 {
    assert!(envelope_rate > 0.0 && fringe_rate > 0.0);
    let rule = gauss_legendre(GAUSS_ORDER);
    let null_spacing = PI / envelope_rate;
    let mut acc = 0.0;
    for interval in 0..2 * NULL_WINDOW {
        let start = (interval as f64 - NULL_WINDOW as f64) * null_spacing;
        let width = null_spacing / PANELS_PER_NULL_INTERVAL as f64;
        for p in 0..PANELS_PER_NULL_INTERVAL {
            let lo = start + p as f64 * width;
            acc += gauss_panel(&f, lo, lo + width, &rule);
        }
    }

    // Mean fringe level, sampled where the envelope has no null so the
    // division stays well conditioned.
    let period = PI / fringe_rate;
    let x0 = 0.1 * null_spacing;
    assert!(
        x0 + period < null_spacing,
        "fringe period must fit between adjacent envelope nulls"
    );
    let sinc_sqr = |x: f64| {
        let s = sinc(envelope_rate * x);
        s * s
    };
    let c0 = integrate_interval(|x| f(x) / sinc_sqr(x), x0, x0 + period, 8) / period;

    let cutoff = NULL_WINDOW as f64 * null_spacing;
    acc + c0 / (envelope_rate * envelope_rate * cutoff)
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        // Below this threshold 1 - x²/6 is exact to double precision.
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
