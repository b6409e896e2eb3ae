//! The cubic reaction term of the constructive solution family.
//!
//! For an amplitude `M` the reaction is `f(s) = -M s (s - 1)(2s - 1)` with
//! primitive `F(s) = -M s^2 (1 - s)^2 / 2 <= 0`.  The sign condition on the
//! primitive is what makes the planar system's energy level `lambda / 2`
//! reachable from the origin, so it is asserted by tests rather than trusted.

/// Cubic reaction `f(s) = -M s (s - 1)(2s - 1)` with amplitude `M`.
///
/// The constructive pipeline always produces `M > 0`; amplitude `0` is
/// accepted as the degenerate linear equation (`f` identically zero), which
/// the shooting self-tests exercise.
#[derive(Debug, Clone, Copy)]
pub struct CubicNonlinearity {
    amplitude: f64,
}

impl CubicNonlinearity {
    pub fn new(amplitude: f64) -> Self {
        assert!(
            amplitude.is_finite() && amplitude >= 0.0,
            "amplitude must be finite and nonnegative, got {amplitude}"
        );
        Self { amplitude }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// `f(s) = -M s (s - 1)(2s - 1)`.  Vanishes at 0, 1/2 and 1.
    pub fn value(&self, s: f64) -> f64 {
        -self.amplitude * s * (s - 1.0) * (2.0 * s - 1.0)
    }

    /// Primitive `F(s) = -M s^2 (1 - s)^2 / 2`, normalised so `F(0) = 0`.
    /// Nonpositive for every real `s`.
    pub fn primitive(&self, s: f64) -> f64 {
        let w = s * (1.0 - s);
        -0.5 * self.amplitude * w * w
    }

    /// Energy of a phase-plane state `(u, p)`:
    /// `E = p^2 / 2 + lambda u^2 / 2 + F(u)`.
    ///
    /// Along any orbit of `u'' + lambda u + f(u) = 0` this is conserved; the
    /// constructed solutions live on the level `E = lambda / 2`.
    pub fn energy(&self, lambda: f64, u: f64, p: f64) -> f64 {
        0.5 * p * p + 0.5 * lambda * u * u + self.primitive(u)
    }
}
