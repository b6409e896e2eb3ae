//! The time map of the planar system `u' = p`, `p' = -lambda u - f(u)` and
//! the amplitude solve that matches it to the interval half-length.
//!
//! On the energy level `lambda / 2` the orbit through `(0, sqrt(lambda))`
//! reaches `(1, 0)` in time
//!
//! ```text
//!     Phi(k) = integral_0^1 ds / sqrt(k s^2 (1-s)^2 + lambda (1 - s^2)),
//! ```
//!
//! where `k` is the amplitude of the cubic reaction.  `Phi` is strictly
//! decreasing with `Phi(0+) = pi / (2 sqrt(lambda))` and `Phi -> 0` as
//! `k -> infinity`, so `Phi(M) = (b - a) / 2` has a unique solution exactly
//! when `0 < lambda < pi^2 / (b - a)^2`.
//!
//! The integrand has an inverse-square-root singularity at `s = 1`.  The
//! substitution `s = 1 - t^2` removes it:
//!
//! ```text
//!     Phi(k) = integral_0^1 2 dt / sqrt(k t^2 (1 - t^2)^2 + lambda (2 - t^2)),
//! ```
//!
//! whose denominator is bounded below by `sqrt(lambda)`.  All full-range
//! evaluations go through this smooth form; partial-range position
//! integrals use the raw form away from the singular endpoint.

use crate::numerics::{
    bracket_decreasing, find_root_monotone, integrate, NumericsError, QuadratureConfig,
    RootFindConfig,
};
use std::f64::consts::PI;
use thiserror::Error;

/// Relative margin around the admissible spectral interval `(0, lambda1)`:
/// values of `lambda` within `1e-12 * lambda1` of either endpoint are
/// rejected, because the amplitude degenerates to `0` or `infinity` there
/// and bracketing becomes unreliable.
pub const ADMISSIBILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TimeMapError {
    #[error("interval endpoints must satisfy a < b, got a = {a}, b = {b}")]
    InvalidInterval { a: f64, b: f64 },
    #[error("lambda = {lambda} is outside the admissible range (0, {lambda1}) for this interval")]
    LambdaOutOfRange { lambda: f64, lambda1: f64 },
    #[error("position map argument t = {t} is outside [0, 1]")]
    TOutOfRange { t: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Problem data: the interval `(a, b)` and the spectral parameter `lambda`
/// of `-u'' = lambda u + f(u)` with zero boundary values.
#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
}

impl ProblemSpec {
    pub fn new(a: f64, b: f64, lambda: f64) -> Result<Self, TimeMapError> {
        if !(a.is_finite() && b.is_finite() && lambda.is_finite() && a < b) {
            return Err(TimeMapError::InvalidInterval { a, b });
        }
        Ok(Self { a, b, lambda })
    }

    /// First Dirichlet eigenvalue of `-u''` on the interval:
    /// `pi^2 / (b - a)^2`.
    pub fn lambda1(&self) -> f64 {
        let len = self.b - self.a;
        PI * PI / (len * len)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// Whether `lambda` lies inside `(0, lambda1)` with the safety margin
    /// [`ADMISSIBILITY_MARGIN`] at both endpoints.
    pub fn is_admissible(&self) -> bool {
        let lambda1 = self.lambda1();
        let margin = ADMISSIBILITY_MARGIN * lambda1;
        self.lambda > margin && self.lambda < lambda1 - margin
    }

    /// Like [`Self::is_admissible`], but reports the failing range.
    pub fn require_admissible(&self) -> Result<(), TimeMapError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(TimeMapError::LambdaOutOfRange {
                lambda: self.lambda,
                lambda1: self.lambda1(),
            })
        }
    }
}

/// Outcome of the amplitude solve `Phi(M) = (b - a) / 2`.
#[derive(Debug, Clone, Copy)]
pub struct TimeMapSolve {
    /// The amplitude `M` of the cubic reaction.
    pub amplitude: f64,
    /// `Phi(M)` recomputed at the root.
    pub time_map_value: f64,
    /// `|Phi(M) - (b - a) / 2|`.
    pub residual: f64,
    /// Root-finder iterations (bracket expansion not included).
    pub iterations: u32,
}

fn desingularized_integrand(k: f64, lambda: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let one_minus_t2 = 1.0 - t * t;
        2.0 / (k * t * t * one_minus_t2 * one_minus_t2 + lambda * (2.0 - t * t)).sqrt()
    }
}

fn raw_integrand(k: f64, lambda: f64) -> impl Fn(f64) -> f64 {
    move |s: f64| {
        let w = s * (1.0 - s);
        1.0 / (k * w * w + lambda * (1.0 - s * s)).sqrt()
    }
}

/// The time map `Phi(k)` for reaction amplitude `k >= 0` and spectral
/// parameter `lambda > 0`, evaluated through the desingularised integrand.
/// `k = 0` is the continuous extension with value `pi / (2 sqrt(lambda))`.
pub fn time_map(k: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64, TimeMapError> {
    assert!(
        k.is_finite() && k >= 0.0,
        "amplitude must be nonnegative, got {k}"
    );
    assert!(
        lambda.is_finite() && lambda > 0.0,
        "lambda must be positive, got {lambda}"
    );
    let q = integrate(desingularized_integrand(k, lambda), 0.0, 1.0, cfg)?;
    Ok(q.value)
}

/// Solves `Phi(M) = (b - a) / 2` for the unique amplitude `M > 0`.
///
/// The bracket is grown geometrically from the fixed seed `k0 = 1` (the
/// time map spans its full range over `k in (0, infinity)`, so the seed
/// only affects the number of expansion steps, never the root).
pub fn solve_amplitude(
    spec: &ProblemSpec,
    quad: &QuadratureConfig,
    root: &RootFindConfig,
) -> Result<TimeMapSolve, TimeMapError> {
    spec.require_admissible()?;
    let lambda = spec.lambda;
    let target = spec.half_length();

    let mut h = |k: f64| -> Result<f64, NumericsError> {
        let q = integrate(desingularized_integrand(k, lambda), 0.0, 1.0, quad)?;
        Ok(q.value - target)
    };
    let bracket = bracket_decreasing(&mut h, 1.0)?;
    // Phi - target is strictly decreasing in k; the finder works on the
    // negated objective so that the "monotone" orientation is increasing.
    let r = find_root_monotone(|k| h(k).map(|v| -v), bracket, root)?;

    let time_map_value = time_map(r.x, lambda, quad)?;
    Ok(TimeMapSolve {
        amplitude: r.x,
        time_map_value,
        residual: (time_map_value - target).abs(),
        iterations: r.iterations,
    })
}

/// Position map `Psi(t) = a + integral_0^t ds / sqrt(M s^2 (1-s)^2 +
/// lambda (1 - s^2))`: the point of `[a, midpoint]` where the constructed
/// solution takes the value `t`.
///
/// For `t < 1` the raw integrand is smooth on `[0, t]` and integrated
/// directly; `t = 1` is delegated to the desingularised full-range form.
pub fn position_of_value(
    t: f64,
    amplitude: f64,
    spec: &ProblemSpec,
    cfg: &QuadratureConfig,
) -> Result<f64, TimeMapError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(TimeMapError::TOutOfRange { t });
    }
    if t == 0.0 {
        return Ok(spec.a);
    }
    if t == 1.0 {
        return Ok(spec.a + time_map(amplitude, spec.lambda, cfg)?);
    }
    let q = integrate(raw_integrand(amplitude, spec.lambda), 0.0, t, cfg)?;
    Ok(spec.a + q.value)
}

/// Same value as [`position_of_value`], computed through the substituted
/// variable: `Psi(t) = a + integral_{sqrt(1-t)}^1 2 du / sqrt(M u^2
/// (1-u^2)^2 + lambda (2 - u^2))`.  Smooth for every `t` in `[0, 1]`;
/// used near the apex and as an independent route in tests.
pub fn position_of_value_desingularized(
    t: f64,
    amplitude: f64,
    spec: &ProblemSpec,
    cfg: &QuadratureConfig,
) -> Result<f64, TimeMapError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(TimeMapError::TOutOfRange { t });
    }
    let w = (1.0 - t).sqrt();
    let q = integrate(
        desingularized_integrand(amplitude, spec.lambda),
        w,
        1.0,
        cfg,
    )?;
    Ok(spec.a + q.value)
}

/// Remaining travel time from value `t` to the apex value `1`:
/// `Psi(1) - Psi(t)`, computed in the substituted variable where the
/// integrand is smooth.
pub(crate) fn apex_tail(
    t: f64,
    amplitude: f64,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, NumericsError> {
    debug_assert!((0.0..=1.0).contains(&t));
    let w = (1.0 - t).sqrt();
    integrate(desingularized_integrand(amplitude, lambda), 0.0, w, cfg).map(|q| q.value)
}
