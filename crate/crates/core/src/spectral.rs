//! Principal Dirichlet eigenvalues, the eigenfunction existence branch,
//! and the certificate classifier.
//!
//! Two domains are covered.  On an interval `(a, b)` the first eigenvalue
//! has the closed form `pi^2 / (b - a)^2` and the eigenfunction is a sine.
//! On the ball of radius `R` in dimension `N` — the canonical star-shaped
//! domain — the eigenvalue comes from a radial finite-difference
//! discretization of `-u'' - ((N-1)/r) u'` with a ghost-node reflection at
//! `r = 0` encoding the regularity condition `u'(0) = 0`, solved by inverse
//! power iteration with tridiagonal factorizations.
//!
//! The classifier combines `lambda`, `lambda1`, the dimension, and an
//! asserted star-shapedness flag into a certificate: trivial-only,
//! nontrivial-for-some-reaction, or open.  Each certificate carries the
//! clause that fired, so a verdict can be traced to the rule behind it.

use crate::verify::CandidateSolution;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid interval: need a < b, got a = {a}, b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("x = {x} outside [{a}, {b}]")]
    XOutOfRange { x: f64, a: f64, b: f64 },

    #[error("dimension {dimension} too low: the nonexistence threshold needs N >= 3")]
    DimensionTooLow { dimension: usize },

    #[error("eigenvalue iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
}

fn invalid(reason: impl Into<String>) -> SpectralError {
    SpectralError::InvalidArgument {
        reason: reason.into(),
    }
}

/// How a [`SpectralResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralMethod {
    #[serde(rename = "CLOSED_FORM_INTERVAL")]
    ClosedFormInterval,
    #[serde(rename = "RADIAL_FD")]
    RadialFd,
}

/// A computed first Dirichlet eigenvalue together with its provenance and
/// an error estimate (`0` for closed forms, Richardson extrapolation for
/// the finite-difference route).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    pub method: SpectralMethod,
    pub grid_n: Option<usize>,
    pub error_estimate: f64,
}

/// First Dirichlet eigenvalue of `-u''` on `(a, b)`: `pi^2 / (b - a)^2`.
pub fn lambda1_interval(a: f64, b: f64) -> Result<SpectralResult, SpectralError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(SpectralError::InvalidInterval { a, b });
    }
    let len = b - a;
    Ok(SpectralResult {
        lambda1: PI * PI / (len * len),
        method: SpectralMethod::ClosedFormInterval,
        grid_n: None,
        error_estimate: 0.0,
    })
}

/// Sup-normalized first Dirichlet eigenfunction of the interval,
/// `sin(pi (x - a) / (b - a))`.
pub fn eigenfunction_interval(a: f64, b: f64, x: f64) -> Result<f64, SpectralError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(SpectralError::InvalidInterval { a, b });
    }
    if !(x >= a && x <= b) {
        return Err(SpectralError::XOutOfRange { x, a, b });
    }
    Ok((PI * (x - a) / (b - a)).sin())
}

/// The interval eigenfunction packaged as a verification candidate.
///
/// With the linear reaction `f(u) = (lambda1 - lambda) u` the eigenfunction
/// solves `-u'' = lambda u + f(u)` for *any* `lambda`, which realizes a
/// nontrivial solution in the `lambda >= lambda1` existence branch.  It
/// plugs into every oracle in the verify module, including the full report.
#[derive(Debug, Clone)]
pub struct EigenfunctionProfile {
    a: f64,
    b: f64,
    lambda: f64,
    lambda1: f64,
}

impl EigenfunctionProfile {
    pub fn new(a: f64, b: f64, lambda: f64) -> Result<Self, SpectralError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(SpectralError::InvalidInterval { a, b });
        }
        if !lambda.is_finite() {
            return Err(invalid(format!("lambda must be finite, got {lambda}")));
        }
        let len = b - a;
        Ok(Self {
            a,
            b,
            lambda,
            lambda1: PI * PI / (len * len),
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }
}

impl CandidateSolution for EigenfunctionProfile {
    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn amplitude(&self) -> f64 {
        0.0
    }

    fn u_at(&self, x: f64) -> f64 {
        let x = x.clamp(self.a, self.b);
        (PI * (x - self.a) / (self.b - self.a)).sin()
    }

    fn du_at(&self, x: f64) -> f64 {
        let x = x.clamp(self.a, self.b);
        let omega = PI / (self.b - self.a);
        omega * (omega * (x - self.a)).cos()
    }

    fn reaction(&self, s: f64) -> f64 {
        (self.lambda1 - self.lambda) * s
    }

    fn reaction_primitive(&self, s: f64) -> f64 {
        0.5 * (self.lambda1 - self.lambda) * s * s
    }
}

/// Prefactored tridiagonal system, reused across inverse-iteration solves.
struct Tridiagonal {
    /// `sub[j]` multiplies `v[j-1]` in row `j` (`sub[0]` unused).
    sub: Vec<f64>,
    /// Pivots after forward elimination.
    den: Vec<f64>,
    /// Normalized superdiagonal after forward elimination.
    cp: Vec<f64>,
}

impl Tridiagonal {
    fn factor(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Self {
        let n = diag.len();
        let mut den = vec![0.0; n];
        let mut cp = vec![0.0; n];
        den[0] = diag[0];
        cp[0] = sup[0] / den[0];
        for j in 1..n {
            den[j] = diag[j] - sub[j] * cp[j - 1];
            if j + 1 < n {
                cp[j] = sup[j] / den[j];
            }
        }
        Self { sub, den, cp }
    }

    fn solve(&self, rhs: &[f64], out: &mut [f64]) {
        let n = rhs.len();
        out[0] = rhs[0] / self.den[0];
        for j in 1..n {
            out[j] = (rhs[j] - self.sub[j] * out[j - 1]) / self.den[j];
        }
        for j in (0..n - 1).rev() {
            out[j] -= self.cp[j] * out[j + 1];
        }
    }
}

const MAX_EIGEN_ITERATIONS: usize = 10_000;

/// Smallest eigenvalue of the radial discretization on `n` nodes
/// `r_j = j h`, `h = R / n`, with `u(R) = 0` eliminated.
fn radial_min_eigenvalue(dimension: usize, radius: f64, n: usize) -> Result<f64, SpectralError> {
    let h = radius / n as f64;
    let h2 = h * h;
    let nu = (dimension - 1) as f64;

    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    // Center row: near r = 0 the drift term tends to (N-1) u''(0), so the
    // operator limit is -N u''(0); the ghost reflection u(-h) = u(h) turns
    // that into 2N (u_0 - u_1) / h^2.
    diag[0] = 2.0 * dimension as f64 / h2;
    sup[0] = -2.0 * dimension as f64 / h2;
    for j in 1..n {
        let drift = nu / (2.0 * j as f64);
        sub[j] = (-1.0 + drift) / h2;
        diag[j] = 2.0 / h2;
        sup[j] = (-1.0 - drift) / h2;
    }
    let matrix = Tridiagonal::factor(sub.clone(), diag.clone(), sup.clone());

    // Positive start vector (a parabola vanishing at the wall) is never
    // orthogonal to the positive ground state.
    let mut v: Vec<f64> = (0..n)
        .map(|j| {
            let r = j as f64 * h;
            1.0 - (r / radius).powi(2)
        })
        .collect();
    normalize(&mut v);

    let mut w = vec![0.0; n];
    let mut lambda_prev = f64::INFINITY;
    for _ in 0..MAX_EIGEN_ITERATIONS {
        matrix.solve(&v, &mut w);
        // Since A w = v, the Rayleigh quotient (w . A w) / (w . w)
        // collapses to (w . v) / (w . w).
        let lambda = dot(&w, &v) / dot(&w, &w);
        if (lambda - lambda_prev).abs() <= 1e-12 * lambda.abs().max(1.0) {
            return Ok(lambda);
        }
        lambda_prev = lambda;
        v.copy_from_slice(&w);
        normalize(&mut v);
    }
    Err(SpectralError::NoConvergence {
        iterations: MAX_EIGEN_ITERATIONS,
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// First Dirichlet eigenvalue of the ball of radius `radius` in dimension
/// `dimension`, from the radial finite-difference operator on `grid_n`
/// nodes.  The error estimate is the Richardson comparison
/// `|lambda(n) - lambda(n/2)| / 3` of the second-order scheme.
pub fn lambda1_ball(
    dimension: usize,
    radius: f64,
    grid_n: usize,
) -> Result<SpectralResult, SpectralError> {
    if dimension < 1 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    if grid_n < 64 {
        return Err(invalid(format!(
            "grid must have at least 64 nodes, got {grid_n}"
        )));
    }
    let fine = radial_min_eigenvalue(dimension, radius, grid_n)?;
    let coarse = radial_min_eigenvalue(dimension, radius, grid_n / 2)?;
    Ok(SpectralResult {
        lambda1: fine,
        method: SpectralMethod::RadialFd,
        grid_n: Some(grid_n),
        error_estimate: (fine - coarse).abs() / 3.0,
    })
}

/// Nonexistence threshold `(N - 2) / N * lambda1` for star-shaped domains
/// in dimension `N >= 3`.
pub fn pohozaev_threshold(dimension: usize, lambda1: f64) -> Result<f64, SpectralError> {
    if dimension < 3 {
        return Err(SpectralError::DimensionTooLow { dimension });
    }
    if !(lambda1.is_finite() && lambda1 > 0.0) {
        return Err(invalid(format!("lambda1 must be positive, got {lambda1}")));
    }
    Ok((dimension as f64 - 2.0) / dimension as f64 * lambda1)
}

/// Classifier verdict for a `(dimension, lambda, lambda1)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Only `u = 0` solves the problem, for every admissible reaction.
    #[serde(rename = "UNIQUE_TRIVIAL")]
    UniqueTrivial,
    /// Some admissible reaction admits a nontrivial solution.
    #[serde(rename = "NONTRIVIAL_EXISTS_FOR_SOME_f")]
    NontrivialExistsForSomeF,
    /// Neither an existence nor a nonexistence rule applies.
    #[serde(rename = "OPEN")]
    Open,
}

/// Outcome of [`classify`]: the verdict plus the clause that produced it
/// and the inputs it was judged on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub dimension: usize,
    pub lambda: f64,
    pub lambda1: f64,
    pub verdict: Verdict,
    pub clause: String,
    pub starshaped_assumed: bool,
}

const CLAUSE_NONPOSITIVE: &str =
    "lambda <= 0: the equation admits only the trivial solution in any dimension";
const CLAUSE_POHOZAEV: &str = "star-shaped domain in dimension N >= 3 with lambda <= \
     (N-2)/N * lambda1: the Pohozaev identity excludes nontrivial solutions";
const CLAUSE_EIGENFUNCTION: &str = "lambda >= lambda1: the principal eigenfunction with \
     linear reaction f(u) = (lambda1 - lambda) u is a nontrivial solution";
const CLAUSE_TIME_MAP: &str = "N = 1 and 0 < lambda < lambda1: the time map attains the \
     half-length, yielding a positive solution of the cubic problem";
const CLAUSE_OPEN: &str = "0 < lambda < lambda1 in dimension N >= 2, outside the \
     nonexistence range: existence of a nontrivial solution is an open question";

/// Classifies `(dimension, lambda, lambda1, starshaped)` by the first
/// matching rule:
///
/// 1. `lambda <= 0` — trivial solution only, any dimension;
/// 2. `N >= 3`, star-shaped, `lambda <= (N-2)/N * lambda1` — trivial
///    solution only, by the Pohozaev identity;
/// 3. `lambda >= lambda1` — nontrivial solution for the linear reaction
///    built from the principal eigenfunction;
/// 4. `N = 1`, `0 < lambda < lambda1` — nontrivial solution from the
///    time-map construction;
/// 5. otherwise — open.
///
/// Star-shapedness is an assertion by the caller (recorded in the
/// certificate); geometry is not checked here.
pub fn classify(
    dimension: usize,
    lambda: f64,
    lambda1: f64,
    starshaped: bool,
) -> Result<Certificate, SpectralError> {
    if dimension < 1 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !lambda.is_finite() {
        return Err(invalid(format!("lambda must be finite, got {lambda}")));
    }
    if !(lambda1.is_finite() && lambda1 > 0.0) {
        return Err(invalid(format!("lambda1 must be positive, got {lambda1}")));
    }

    let (verdict, clause) = if lambda <= 0.0 {
        (Verdict::UniqueTrivial, CLAUSE_NONPOSITIVE)
    } else if dimension >= 3
        && starshaped
        && lambda <= pohozaev_threshold(dimension, lambda1).expect("dimension >= 3 checked")
    {
        (Verdict::UniqueTrivial, CLAUSE_POHOZAEV)
    } else if lambda >= lambda1 {
        (Verdict::NontrivialExistsForSomeF, CLAUSE_EIGENFUNCTION)
    } else if dimension == 1 {
        (Verdict::NontrivialExistsForSomeF, CLAUSE_TIME_MAP)
    } else {
        (Verdict::Open, CLAUSE_OPEN)
    };

    Ok(Certificate {
        dimension,
        lambda,
        lambda1,
        verdict,
        clause: clause.to_string(),
        starshaped_assumed: starshaped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{QuadratureConfig, RootFindConfig};
    use crate::solution::SolutionProfile;
    use crate::timemap::ProblemSpec;
    use crate::verify::{fd_order_estimate, full_report};
    use proptest::prelude::*;

    #[test]
    fn interval_eigenvalue_matches_the_closed_form() {
        let unit = lambda1_interval(0.0, PI).unwrap();
        assert_eq!(unit.lambda1, 1.0);
        assert_eq!(unit.method, SpectralMethod::ClosedFormInterval);
        assert_eq!(unit.grid_n, None);
        assert_eq!(unit.error_estimate, 0.0);

        assert_eq!(lambda1_interval(0.0, 1.0).unwrap().lambda1, PI * PI);
        assert_eq!(lambda1_interval(-1.0, 1.0).unwrap().lambda1, PI * PI / 4.0);
    }

    #[test]
    fn interval_eigenvalue_agrees_with_the_problem_spec_helper() {
        let spec = ProblemSpec::new(0.3, 2.7, 0.5).unwrap();
        let result = lambda1_interval(0.3, 2.7).unwrap();
        assert_eq!(result.lambda1, spec.lambda1());
    }

    #[test]
    fn interval_eigenvalue_rejects_degenerate_intervals() {
        assert!(matches!(
            lambda1_interval(1.0, 1.0),
            Err(SpectralError::InvalidInterval { .. })
        ));
        assert!(matches!(
            lambda1_interval(2.0, -2.0),
            Err(SpectralError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn eigenfunction_peaks_at_the_midpoint_and_vanishes_at_the_walls() {
        assert_eq!(eigenfunction_interval(0.0, PI, 0.5 * PI).unwrap(), 1.0);
        assert_eq!(eigenfunction_interval(0.0, PI, 0.0).unwrap(), 0.0);
        assert!(eigenfunction_interval(0.0, PI, PI).unwrap().abs() <= 1e-15);
        assert!(matches!(
            eigenfunction_interval(0.0, PI, -0.1),
            Err(SpectralError::XOutOfRange { .. })
        ));
    }

    #[test]
    fn eigenfunction_profile_satisfies_the_equation_at_second_order() {
        // lambda above lambda1: the linear reaction (lambda1 - lambda) u
        // makes the sine a genuine solution; the residual stencil must
        // shrink quadratically.
        let p = EigenfunctionProfile::new(0.0, PI, 2.5).unwrap();
        let order = fd_order_estimate(&p, 256);
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn eigenfunction_profile_passes_full_verification_at_and_above_lambda1() {
        for factor in [1.0, 1.5] {
            let lambda1 = PI * PI;
            let p = EigenfunctionProfile::new(0.0, 1.0, factor * lambda1).unwrap();
            assert_eq!(p.lambda1(), lambda1);
            let report = full_report(&p);
            assert!(report.passed, "factor {factor}: {report:?}");
        }
    }

    #[test]
    fn ball_eigenvalue_in_dimension_one_reduces_to_the_interval() {
        // Radial symmetry on (-1, 1) is du/dr = 0 at 0 with u(1) = 0,
        // so the value is pi^2 / 4.
        let res = lambda1_ball(1, 1.0, 2048).unwrap();
        assert_eq!(res.method, SpectralMethod::RadialFd);
        assert_eq!(res.grid_n, Some(2048));
        assert!(
            (res.lambda1 - PI * PI / 4.0).abs() <= 1e-3,
            "lambda1 {}",
            res.lambda1
        );
        assert!(res.error_estimate > 0.0 && res.error_estimate <= 1e-3);
    }

    #[test]
    fn ball_eigenvalue_in_dimension_two_matches_the_bessel_zero() {
        // First zero of the order-zero Bessel function, squared:
        // 2.404825557695773^2.
        let reference = 5.783185962946785;
        let res = lambda1_ball(2, 1.0, 2048).unwrap();
        assert!(
            (res.lambda1 - reference).abs() <= 1e-3,
            "lambda1 {}",
            res.lambda1
        );
    }

    #[test]
    fn ball_eigenvalue_in_dimension_three_is_pi_squared() {
        // sin(pi r) / r vanishes first at r = 1, so lambda1 = pi^2.
        let res = lambda1_ball(3, 1.0, 2048).unwrap();
        assert!(
            (res.lambda1 - PI * PI).abs() <= 1e-3,
            "lambda1 {}",
            res.lambda1
        );
    }

    #[test]
    fn ball_eigenvalue_scales_inversely_with_the_squared_radius() {
        for radius in [0.5, 1.0, 2.0] {
            let exact = PI * PI / (radius * radius);
            let res = lambda1_ball(3, radius, 1024).unwrap();
            let rel = (res.lambda1 - exact).abs() / exact;
            assert!(rel <= 1e-3, "radius {radius}: relative error {rel}");
        }
    }

    #[test]
    fn ball_eigenvalue_error_estimate_shrinks_at_second_order() {
        let mid = lambda1_ball(3, 1.0, 1024).unwrap();
        let fine = lambda1_ball(3, 1.0, 2048).unwrap();
        let order = (mid.error_estimate / fine.error_estimate).log2();
        assert!((1.7..=2.3).contains(&order), "Richardson order {order}");
    }

    #[test]
    fn ball_eigenvalue_rejects_bad_arguments() {
        assert!(matches!(
            lambda1_ball(0, 1.0, 128),
            Err(SpectralError::InvalidArgument { .. })
        ));
        assert!(matches!(
            lambda1_ball(3, -1.0, 128),
            Err(SpectralError::InvalidArgument { .. })
        ));
        assert!(matches!(
            lambda1_ball(3, 1.0, 32),
            Err(SpectralError::InvalidArgument { .. })
        ));
    }

    #[test]
    fn threshold_is_a_fixed_fraction_of_the_eigenvalue() {
        let l1 = PI * PI;
        let t = pohozaev_threshold(3, l1).unwrap();
        assert!((t - l1 / 3.0).abs() <= 1e-12);
        assert_eq!(pohozaev_threshold(4, 1.0).unwrap(), 0.5);
        assert!(matches!(
            pohozaev_threshold(2, 1.0),
            Err(SpectralError::DimensionTooLow { dimension: 2 })
        ));
        assert!(matches!(
            pohozaev_threshold(3, 0.0),
            Err(SpectralError::InvalidArgument { .. })
        ));
    }

    #[test]
    fn classifier_reproduces_the_summary_table() {
        let l1 = PI * PI;
        let rows: &[(usize, f64, bool, Verdict)] = &[
            (1, -1.0, false, Verdict::UniqueTrivial),
            (1, 0.5 * l1, false, Verdict::NontrivialExistsForSomeF),
            (2, 0.5 * l1, false, Verdict::Open),
            (3, 0.3 * l1, true, Verdict::UniqueTrivial),
            (3, 0.5 * l1, true, Verdict::Open),
            (3, 0.5 * l1, false, Verdict::Open),
            (2, l1, false, Verdict::NontrivialExistsForSomeF),
            (3, l1, true, Verdict::NontrivialExistsForSomeF),
            (4, 2.0 * l1, true, Verdict::NontrivialExistsForSomeF),
        ];
        for &(dim, lambda, star, expected) in rows {
            let cert = classify(dim, lambda, l1, star).unwrap();
            assert_eq!(
                cert.verdict, expected,
                "dim {dim}, lambda {lambda}, starshaped {star}: got {:?} ({})",
                cert.verdict, cert.clause
            );
            assert_eq!(cert.dimension, dim);
            assert_eq!(cert.starshaped_assumed, star);
        }
    }

    #[test]
    fn classifier_prefers_the_nonpositive_rule_over_the_geometric_one() {
        let cert = classify(3, 0.0, PI * PI, true).unwrap();
        assert_eq!(cert.verdict, Verdict::UniqueTrivial);
        assert!(
            cert.clause.contains("lambda <= 0"),
            "clause: {}",
            cert.clause
        );
    }

    #[test]
    fn classifier_boundary_lambda1_counts_as_existence() {
        let cert = classify(2, 4.0, 4.0, false).unwrap();
        assert_eq!(cert.verdict, Verdict::NontrivialExistsForSomeF);
        assert!(
            cert.clause.contains("lambda >= lambda1"),
            "clause: {}",
            cert.clause
        );
    }

    #[test]
    fn classifier_rejects_invalid_inputs() {
        assert!(classify(0, 1.0, 1.0, false).is_err());
        assert!(classify(1, f64::NAN, 1.0, false).is_err());
        assert!(classify(1, 1.0, 0.0, false).is_err());
        assert!(classify(1, 1.0, -3.0, false).is_err());
    }

    #[test]
    fn existence_verdicts_in_one_dimension_come_with_verified_witnesses() {
        // Below lambda1 the witness is the constructed cubic profile; at
        // and above it, the eigenfunction with its linear reaction.
        let (a, b) = (0.0, PI);
        let l1 = lambda1_interval(a, b).unwrap().lambda1;

        let below = classify(1, 0.5 * l1, l1, false).unwrap();
        assert_eq!(below.verdict, Verdict::NontrivialExistsForSomeF);
        let spec = ProblemSpec::new(a, b, 0.5 * l1).unwrap();
        let profile = SolutionProfile::construct(
            &spec,
            256,
            &QuadratureConfig::default(),
            &RootFindConfig::default(),
        )
        .unwrap();
        assert!(full_report(&profile).passed);

        let above = classify(1, 2.0 * l1, l1, false).unwrap();
        assert_eq!(above.verdict, Verdict::NontrivialExistsForSomeF);
        let eigen = EigenfunctionProfile::new(a, b, 2.0 * l1).unwrap();
        assert!(full_report(&eigen).passed);
    }

    #[test]
    fn certificate_and_result_serialize_with_stable_names() {
        let cert = classify(3, 1.0, 9.8696, true).unwrap();
        let value = serde_json::to_value(&cert).unwrap();
        for key in [
            "dimension",
            "lambda",
            "lambda1",
            "verdict",
            "clause",
            "starshaped_assumed",
        ] {
            assert!(value.get(key).is_some(), "missing field {key}");
        }
        assert_eq!(value["verdict"], "UNIQUE_TRIVIAL");

        let open = classify(2, 1.0, 9.8696, false).unwrap();
        assert_eq!(serde_json::to_value(&open).unwrap()["verdict"], "OPEN");
        let exists = classify(1, 1.0, 9.8696, false).unwrap();
        assert_eq!(
            serde_json::to_value(&exists).unwrap()["verdict"],
            "NONTRIVIAL_EXISTS_FOR_SOME_f"
        );

        let interval = lambda1_interval(0.0, 1.0).unwrap();
        assert_eq!(
            serde_json::to_value(&interval).unwrap()["method"],
            "CLOSED_FORM_INTERVAL"
        );
        let ball = lambda1_ball(2, 1.0, 128).unwrap();
        assert_eq!(serde_json::to_value(&ball).unwrap()["method"], "RADIAL_FD");
    }

    /// Decision oracle written as a region decomposition instead of a
    /// first-match rule list, to cross-check the classifier's ordering.
    fn region_oracle(dim: usize, lambda: f64, lambda1: f64, star: bool) -> Verdict {
        let pohozaev_excludes =
            dim >= 3 && star && lambda <= (dim as f64 - 2.0) / dim as f64 * lambda1;
        if lambda <= 0.0 {
            Verdict::UniqueTrivial
        } else if lambda >= lambda1 {
            // The nonexistence threshold (N-2)/N * lambda1 sits strictly
            // below lambda1, so it cannot fire here.
            Verdict::NontrivialExistsForSomeF
        } else if pohozaev_excludes {
            Verdict::UniqueTrivial
        } else if dim == 1 {
            Verdict::NontrivialExistsForSomeF
        } else {
            Verdict::Open
        }
    }

    proptest! {
        #[test]
        fn classifier_matches_the_region_oracle(
            dim in 1usize..=6,
            lambda1 in 0.01f64..50.0,
            factor in -2.0f64..2.5,
            star in proptest::bool::ANY,
        ) {
            let lambda = factor * lambda1;
            let cert = classify(dim, lambda, lambda1, star).unwrap();
            prop_assert_eq!(cert.verdict, region_oracle(dim, lambda, lambda1, star));

            // Clause text always pairs with its verdict family.
            let clause_ok = match cert.verdict {
                Verdict::UniqueTrivial =>
                    cert.clause.contains("lambda <= 0")
                        || cert.clause.contains("Pohozaev"),
                Verdict::NontrivialExistsForSomeF =>
                    cert.clause.contains("eigenfunction")
                        || cert.clause.contains("time map"),
                Verdict::Open => cert.clause.contains("open question"),
            };
            prop_assert!(clause_ok, "verdict {:?} with clause {}", cert.verdict, cert.clause);
        }
    }
}
