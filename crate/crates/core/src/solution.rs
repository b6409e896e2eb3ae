//! Constructed solution profiles.
//!
//! A profile represents the positive solution of `-u'' = lambda u + f(u)`,
//! `u(a) = u(b) = 0`, built from the time map: on the left half-interval
//! the solution is the inverse of the position map `Psi`, it reaches the
//! value 1 exactly at the midpoint, and the right half is the mirror image
//! `u(x) = u(a + b - x)`.
//!
//! The profile stores a table of nodes `(t_i, Psi(t_i))` on a grid that is
//! uniform in the solution value `t_i = i / n` (uniform-in-`x` grids lose
//! resolution near the flat apex, uniform-in-`u` grids do not).  Point
//! evaluation between nodes does not trust interpolation: it re-solves
//! `Psi(t) = x` inside the bracketing node pair with live quadrature, so
//! the recorded `tolerance_budget` is a guaranteed pointwise bound.

use crate::nonlinearity::CubicNonlinearity;
use crate::numerics::{integrate, NumericsError, QuadratureConfig, RootFindConfig};
use crate::timemap::{apex_tail, solve_amplitude, ProblemSpec, TimeMapError, TimeMapSolve};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("x = {x} is outside the interval [{a}, {b}]")]
    XOutOfRange { x: f64, a: f64, b: f64 },
    #[error("node count n = {n} is below the minimum of 16")]
    TooFewNodes { n: usize },
    #[error("sample count n_out = {n_out} is below the minimum of 2")]
    TooFewSamples { n_out: usize },
    #[error("profile document is not usable: {reason}")]
    InvalidDocument { reason: String },
    #[error(transparent)]
    TimeMap(#[from] TimeMapError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Output format for [`SolutionProfile::export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// Serialized form of a profile: problem data plus equally spaced samples
/// over the whole interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub n: usize,
    pub tolerance: f64,
    pub samples: Vec<ProfileSample>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileSample {
    pub x: f64,
    pub u: f64,
    pub du: f64,
}

/// A constructed (or re-imported) solution profile.
#[derive(Debug, Clone)]
pub struct SolutionProfile {
    spec: ProblemSpec,
    nonlinearity: CubicNonlinearity,
    solve: Option<TimeMapSolve>,
    /// Strictly increasing in both coordinates; first node `(0, a)`, last
    /// node `(1, midpoint)`.
    nodes: Vec<(f64, f64)>,
    /// `(x, u)` pairs that evaluate verbatim, bypassing refinement: empty
    /// for constructed profiles, the full sample table for imported ones
    /// (which makes re-evaluation at exported positions bit-exact on both
    /// halves of the interval).
    exact_samples: Vec<(f64, f64)>,
    tolerance_budget: f64,
    refine_tol: f64,
    quad: QuadratureConfig,
}

impl SolutionProfile {
    /// Builds the profile for `spec` on a value grid with `n >= 16` nodes:
    /// solves for the amplitude, then tabulates `Psi` incrementally so that
    /// adjacent nodes stay consistent to quadrature accuracy.
    ///
    /// The final node is pinned to `(1, midpoint)`: the amplitude solve has
    /// already matched `Psi(1) - a` to the half-length within the root
    /// residual, which is folded into the tolerance budget.
    pub fn construct(
        spec: &ProblemSpec,
        n: usize,
        quad: &QuadratureConfig,
        root: &RootFindConfig,
    ) -> Result<Self, SolutionError> {
        if n < 16 {
            return Err(SolutionError::TooFewNodes { n });
        }
        let solve = solve_amplitude(spec, quad, root)?;
        let m = solve.amplitude;
        let lambda = spec.lambda;

        let raw = move |s: f64| {
            let w = s * (1.0 - s);
            1.0 / (m * w * w + lambda * (1.0 - s * s)).sqrt()
        };

        let mut nodes = Vec::with_capacity(n + 1);
        nodes.push((0.0, spec.a));
        let mut x = spec.a;
        for i in 1..n {
            let t0 = (i - 1) as f64 / n as f64;
            let t1 = i as f64 / n as f64;
            x += integrate(raw, t0, t1, quad)?.value;
            nodes.push((t1, x));
        }
        let tail = apex_tail((n - 1) as f64 / n as f64, m, lambda, quad)?;
        let snap_residual = (x + tail - spec.midpoint()).abs();
        nodes.push((1.0, spec.midpoint()));

        let refine_tol = refine_tolerance(spec);
        let tolerance_budget = derivative_sup(m, lambda)
            * (n as f64 * quad.abs_tol + root.f_tol + snap_residual + refine_tol);

        Ok(Self {
            spec: *spec,
            nonlinearity: CubicNonlinearity::new(m),
            solve: Some(solve),
            nodes,
            exact_samples: Vec::new(),
            tolerance_budget,
            refine_tol,
            quad: quad.clone(),
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn amplitude(&self) -> f64 {
        self.nonlinearity.amplitude()
    }

    pub fn nonlinearity(&self) -> &CubicNonlinearity {
        &self.nonlinearity
    }

    /// The amplitude solve record; `None` for profiles rebuilt from a
    /// document.
    pub fn time_map_solve(&self) -> Option<&TimeMapSolve> {
        self.solve.as_ref()
    }

    /// Guaranteed pointwise accuracy of [`Self::u`] between nodes.
    pub fn tolerance_budget(&self) -> f64 {
        self.tolerance_budget
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Solution value at `x`.  Node positions (and, for imported profiles,
    /// the original sample positions) evaluate exactly to their tabulated
    /// values; between nodes the value is re-solved from `Psi(t) = x` by a
    /// bracketed secant/bisection iteration with live quadrature, never by
    /// trusting interpolation.
    pub fn u(&self, x: f64) -> Result<f64, SolutionError> {
        let (a, b) = (self.spec.a, self.spec.b);
        if !(x >= a && x <= b) {
            return Err(SolutionError::XOutOfRange { x, a, b });
        }
        if let Ok(i) = self
            .exact_samples
            .binary_search_by(|(sx, _)| sx.partial_cmp(&x).expect("samples are NaN-free"))
        {
            return Ok(self.exact_samples[i].1);
        }
        let mid = self.spec.midpoint();
        // Reflect the right half onto the left.  The fold is clamped, and
        // the far wall is mapped to the near wall explicitly: (a + b) - b
        // need not round back to a exactly, but u(b) = u(a) = 0 must hold
        // bit-for-bit.
        let xl = if x > mid {
            if x == b {
                a
            } else {
                (a + b - x).clamp(a, mid)
            }
        } else {
            x
        };
        match self
            .nodes
            .binary_search_by(|(_, nx)| nx.partial_cmp(&xl).expect("node table is NaN-free"))
        {
            Ok(i) => Ok(self.nodes[i].0),
            Err(pos) => {
                debug_assert!(pos >= 1 && pos < self.nodes.len());
                Ok(self.refine_bracket(pos - 1, xl))
            }
        }
    }

    /// Derivative at `x`: `+sqrt(M u^2 (1-u)^2 + lambda (1 - u^2))` on the
    /// left half (the first-integral identity), the mirrored negative on
    /// the right half, and exactly `0` at the midpoint.
    pub fn du(&self, x: f64) -> Result<f64, SolutionError> {
        let mid = self.spec.midpoint();
        if x == mid {
            return Ok(0.0);
        }
        let u = self.u(x)?;
        let w = u * (1.0 - u);
        let slope = (self.amplitude() * w * w + self.spec.lambda * (1.0 - u * u))
            .max(0.0)
            .sqrt();
        Ok(if x < mid { slope } else { -slope })
    }

    /// Solves `Psi(t) = xl` for `t` inside the node bracket `i`.
    ///
    /// Interior brackets integrate the raw integrand from the left node;
    /// the apex bracket works with the remaining tail in the substituted
    /// variable, where the integrand stays smooth.  If the bracket does not
    /// actually straddle `xl` (possible only for corrupted imports) the
    /// method degrades to monotone linear interpolation and leaves the
    /// discrepancy for the verification oracles to flag.
    fn refine_bracket(&self, i: usize, xl: f64) -> f64 {
        let (t_lo, x_lo) = self.nodes[i];
        let (t_hi, x_hi) = self.nodes[i + 1];
        let apex_bracket = i + 2 == self.nodes.len();
        let m = self.amplitude();
        let lambda = self.spec.lambda;

        let raw = move |s: f64| {
            let w = s * (1.0 - s);
            1.0 / (m * w * w + lambda * (1.0 - s * s)).sqrt()
        };
        // g(t) = Psi(t) - xl, increasing in t.
        let g = |t: f64| -> f64 {
            if apex_bracket {
                let tail = apex_tail(t, m, lambda, &self.quad).unwrap_or_else(exhausted_value);
                (x_hi - xl) - tail
            } else {
                let inc = integrate(raw, t_lo, t, &self.quad)
                    .map(|q| q.value)
                    .unwrap_or_else(exhausted_value);
                (x_lo + inc) - xl
            }
        };

        let linear = t_lo + (t_hi - t_lo) * (xl - x_lo) / (x_hi - x_lo);
        let linear = linear.clamp(t_lo.min(t_hi), t_lo.max(t_hi));

        // Imported documents may tabulate values outside [0, 1], where the
        // first-integral quadrature loses meaning; degrade to interpolation
        // and let the oracles report the damage.
        if !(0.0..=1.0).contains(&t_lo) || !(0.0..=1.0).contains(&t_hi) {
            return linear;
        }

        let (mut ta, mut ga) = (t_lo, if apex_bracket { g(t_lo) } else { x_lo - xl });
        let (mut tb, mut gb) = (t_hi, if apex_bracket { x_hi - xl } else { g(t_hi) });
        if !(ga <= 0.0 && gb >= 0.0) {
            return linear;
        }

        let (mut t_prev, mut g_prev) = (ta, ga);
        let (mut t_cur, mut g_cur) = (linear, g(linear));
        for _ in 0..80 {
            if g_cur.abs() <= self.refine_tol {
                return t_cur;
            }
            if g_cur <= 0.0 {
                (ta, ga) = (t_cur, g_cur);
            } else {
                (tb, gb) = (t_cur, g_cur);
            }
            if tb - ta <= f64::EPSILON * (1.0 + tb.abs()) {
                return if ga.abs() <= gb.abs() { ta } else { tb };
            }
            let secant = t_cur - g_cur * (t_cur - t_prev) / (g_cur - g_prev);
            let t_next = if secant.is_finite() && secant > ta && secant < tb {
                secant
            } else {
                0.5 * (ta + tb)
            };
            (t_prev, g_prev) = (t_cur, g_cur);
            (t_cur, g_cur) = (t_next, g(t_next));
        }
        if g_cur.abs() <= ga.abs().min(gb.abs()) {
            t_cur
        } else if ga.abs() <= gb.abs() {
            ta
        } else {
            tb
        }
    }

    /// Emits `n_out + 1` equally spaced samples over `[a, b]`.
    pub fn export(&self, format: ExportFormat, n_out: usize) -> Result<String, SolutionError> {
        match format {
            ExportFormat::Csv => self.to_csv(n_out),
            ExportFormat::Json => {
                let doc = self.to_document(n_out)?;
                Ok(serde_json::to_string_pretty(&doc).expect("profile document serializes"))
            }
        }
    }

    /// CSV with the exact header `x,u,du` and 17-significant-digit values.
    pub fn to_csv(&self, n_out: usize) -> Result<String, SolutionError> {
        let samples = self.sample(n_out)?;
        let mut out = String::from("x,u,du\n");
        for s in samples {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::format_17sig(s.x),
                crate::format_17sig(s.u),
                crate::format_17sig(s.du)
            ));
        }
        Ok(out)
    }

    pub fn to_document(&self, n_out: usize) -> Result<ProfileDocument, SolutionError> {
        Ok(ProfileDocument {
            a: self.spec.a,
            b: self.spec.b,
            lambda: self.spec.lambda,
            m: self.amplitude(),
            n: self.nodes.len() - 1,
            tolerance: self.tolerance_budget,
            samples: self.sample(n_out)?,
        })
    }

    fn sample(&self, n_out: usize) -> Result<Vec<ProfileSample>, SolutionError> {
        if n_out < 2 {
            return Err(SolutionError::TooFewSamples { n_out });
        }
        let (a, b) = (self.spec.a, self.spec.b);
        let mut samples = Vec::with_capacity(n_out + 1);
        for k in 0..=n_out {
            let theta = k as f64 / n_out as f64;
            let x = a * (1.0 - theta) + b * theta;
            samples.push(ProfileSample {
                x,
                u: self.u(x)?,
                du: self.du(x)?,
            });
        }
        Ok(samples)
    }

    /// Rebuilds a live profile from a document.
    ///
    /// The problem data `(a, b, lambda, M)` fully determine the position
    /// map, so the left-half samples become the node table and evaluation
    /// works exactly as for a constructed profile; in addition the full
    /// sample table is kept, so evaluation at exactly the exported
    /// positions returns the stored values bit-for-bit.  Sample values are
    /// taken as-is - a corrupted document yields a profile whose
    /// verification report fails, not an import error - but structural
    /// problems (non-monotone x, NaN, empty table, nonsensical problem
    /// data) are rejected.
    pub fn from_document(doc: &ProfileDocument) -> Result<Self, SolutionError> {
        let spec = ProblemSpec::new(doc.a, doc.b, doc.lambda)?;
        if !(doc.m.is_finite() && doc.m > 0.0) {
            return Err(SolutionError::InvalidDocument {
                reason: format!("amplitude M must be positive, got {}", doc.m),
            });
        }
        // ProblemSpec::new has already rejected non-finite lambda.
        if doc.lambda <= 0.0 {
            return Err(SolutionError::InvalidDocument {
                reason: format!("lambda must be positive, got {}", doc.lambda),
            });
        }
        if doc.samples.is_empty() {
            return Err(SolutionError::InvalidDocument {
                reason: "no samples".into(),
            });
        }
        for s in &doc.samples {
            if !(s.x.is_finite() && s.u.is_finite() && s.du.is_finite()) {
                return Err(SolutionError::InvalidDocument {
                    reason: format!("non-finite sample at x = {}", s.x),
                });
            }
        }
        for w in doc.samples.windows(2) {
            // Finiteness was checked above, so >= is a complete test.
            if w[0].x >= w[1].x {
                return Err(SolutionError::InvalidDocument {
                    reason: format!("sample positions not strictly increasing at x = {}", w[1].x),
                });
            }
        }

        let mid = 0.5 * (doc.a + doc.b);
        let mut nodes: Vec<(f64, f64)> = Vec::new();
        nodes.push((0.0, doc.a));
        for s in &doc.samples {
            if s.x <= doc.a || s.x > mid {
                continue;
            }
            nodes.push((s.u, s.x));
        }
        if nodes.last().expect("nodes nonempty").1 < mid {
            nodes.push((1.0, mid));
        } else {
            // The midpoint sample is the apex node regardless of its stored
            // u value only if it claims the apex; otherwise keep the data.
            let last = nodes.last_mut().expect("nodes nonempty");
            last.1 = mid;
        }
        if nodes.len() < 2 {
            return Err(SolutionError::InvalidDocument {
                reason: "no usable left-half samples".into(),
            });
        }

        let tolerance_budget = if doc.tolerance.is_finite() && doc.tolerance > 0.0 {
            doc.tolerance
        } else {
            return Err(SolutionError::InvalidDocument {
                reason: format!("tolerance must be positive, got {}", doc.tolerance),
            });
        };

        Ok(Self {
            spec,
            nonlinearity: CubicNonlinearity::new(doc.m),
            solve: None,
            nodes,
            exact_samples: doc.samples.iter().map(|s| (s.x, s.u)).collect(),
            tolerance_budget,
            refine_tol: refine_tolerance(&spec),
            quad: QuadratureConfig::default(),
        })
    }

    pub fn from_json(json: &str) -> Result<Self, SolutionError> {
        let doc: ProfileDocument =
            serde_json::from_str(json).map_err(|e| SolutionError::InvalidDocument {
                reason: format!("JSON parse error: {e}"),
            })?;
        Self::from_document(&doc)
    }
}

/// Upper bound on `|u'|` over the orbit: `sqrt(M / 16 + lambda)` (the cubic
/// factor `u^2 (1-u)^2` peaks at `1/16`).  Converts position residuals into
/// value-space error.
fn derivative_sup(m: f64, lambda: f64) -> f64 {
    (m / 16.0 + lambda).sqrt()
}

fn refine_tolerance(spec: &ProblemSpec) -> f64 {
    1e-13 * (1.0 + (spec.b - spec.a))
}

fn exhausted_value(e: NumericsError) -> f64 {
    match e {
        NumericsError::SubdivisionExhausted { value, .. } => value,
        // Quadrature has no other failure mode.
        other => unreachable!("unexpected quadrature error: {other}"),
    }
}
