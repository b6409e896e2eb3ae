//! Deterministic numerical primitives: adaptive quadrature on a fixed
//! embedded Gauss-Kronrod pair, and a safeguarded bisection/secant root
//! finder for bracketed monotone functions.
//!
//! Both routines are fully deterministic: no randomness, no parallelism,
//! no dependence on allocation addresses.  Identical inputs produce
//! bit-identical outputs on a given platform.

use thiserror::Error;

/// Errors shared by the quadrature and root-finding routines.
#[derive(Debug, Error)]
pub enum NumericsError {
    /// Adaptive bisection hit the subdivision cap before meeting the
    /// tolerance.  Carries the best available estimate so callers that can
    /// tolerate a degraded answer may still use it.
    #[error("quadrature did not converge within {subdivisions} subdivisions (value {value:.17e}, error estimate {error_estimate:.3e})")]
    SubdivisionExhausted {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    /// The supplied bracket does not straddle a sign change.
    #[error("no sign change over the bracket: h(lo) = {f_lo:.6e}, h(hi) = {f_hi:.6e}")]
    NoSignChange { f_lo: f64, f_hi: f64 },
    /// Root iteration cap reached before convergence.
    #[error(
        "root finder reached the iteration limit at x = {last_x:.17e} with |h| = {f_last:.6e}"
    )]
    MaxIterations { last_x: f64, f_last: f64 },
    /// Geometric bracket expansion ran out of doublings/halvings.
    #[error("bracket expansion exhausted after {steps} steps from k0 = {k0:.6e}")]
    BracketExhausted { k0: f64, steps: u32 },
}

/// Tolerances and caps for [`integrate`].
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Absolute tolerance on the total integral.
    pub abs_tol: f64,
    /// Relative tolerance on the total integral.
    pub rel_tol: f64,
    /// Maximum number of panel bisections.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

/// Tolerances and caps for [`find_root_monotone`].
#[derive(Debug, Clone)]
pub struct RootFindConfig {
    /// Bracket-width convergence threshold.
    pub x_tol: f64,
    /// Residual convergence threshold.
    pub f_tol: f64,
    /// Iteration cap.
    pub max_iterations: u32,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-11,
            max_iterations: 200,
        }
    }
}

/// Result of [`integrate`]: the value and an upper bound on the local error
/// estimate actually achieved.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// Result of [`find_root_monotone`].
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub x: f64,
    pub f_value: f64,
    pub iterations: u32,
}

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
// The Kronrod rule is exact for polynomials through degree 22; the
// difference to the embedded Gauss value drives the error estimate.
// Abscissae are symmetric; XGK holds the nonnegative half in descending
// order, odd indices are the Gauss points.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Kronrod error rescaling as popularised by QUADPACK: sharpens the raw
/// |K - G| difference using the integral of |f| and of |f - mean|.
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut err = err.abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 {
            result_asc * scale
        } else {
            result_asc
        };
    }
    let min_pos = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if result_abs > min_pos {
        let min_err = 50.0 * f64::EPSILON * result_abs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

/// One 15-point Kronrod panel over [lo, hi]; returns value and error estimate.
fn qk15<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let f_center = g(center);
    let mut result_gauss = f_center * WG[3];
    let mut result_kronrod = f_center * WGK[7];
    let mut result_abs = result_kronrod.abs();

    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];
    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = g(center - abscissa);
        let f2 = g(center + abscissa);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            result_gauss += WG[(j - 1) / 2] * fsum;
        }
        result_kronrod += WGK[j] * fsum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half;
    result_abs *= half.abs();
    result_asc *= half.abs();
    let err = rescale_error(
        (result_kronrod - result_gauss) * half,
        result_abs,
        result_asc,
    );
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn eval_panel<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Panel {
    let (value, err) = qk15(g, lo, hi);
    Panel { lo, hi, value, err }
}

/// Adaptive quadrature of `g` over `[lo, hi]`: repeatedly bisects the panel
/// with the largest error estimate until the summed estimate meets
/// `max(abs_tol, rel_tol * |value|)` or the subdivision cap is hit.
///
/// Deterministic worst-first refinement; panel order and all arithmetic are
/// fixed by the inputs alone.
pub fn integrate<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature, NumericsError> {
    assert!(
        lo.is_finite() && hi.is_finite() && lo <= hi,
        "invalid interval [{lo}, {hi}]"
    );
    if lo == hi {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
        });
    }

    let span = hi - lo;
    let mut panels = vec![eval_panel(&g, lo, hi)];
    let mut subdivisions = 0usize;

    loop {
        let mut value = 0.0;
        let mut err = 0.0;
        let mut worst = 0usize;
        let mut worst_err = -1.0;
        for (i, p) in panels.iter().enumerate() {
            value += p.value;
            err += p.err;
            if p.err > worst_err {
                worst_err = p.err;
                worst = i;
            }
        }

        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if err <= tol {
            return Ok(Quadrature {
                value,
                error_estimate: err,
            });
        }
        let width = panels[worst].hi - panels[worst].lo;
        if subdivisions >= cfg.max_subdivisions || width <= f64::EPSILON * span {
            return Err(NumericsError::SubdivisionExhausted {
                value,
                error_estimate: err,
                subdivisions,
            });
        }

        let Panel {
            lo: plo, hi: phi, ..
        } = panels[worst];
        let mid = 0.5 * (plo + phi);
        panels[worst] = eval_panel(&g, plo, mid);
        panels.push(eval_panel(&g, mid, phi));
        subdivisions += 1;
    }
}

/// Finds the root of a bracketed monotone function by a safeguarded
/// secant/bisection hybrid.  Never evaluates `h` outside the initial
/// bracket.  Converges when `|h(x)| <= f_tol` or the bracket width drops
/// below `x_tol`.
///
/// `h` is fallible so that integrand-backed objectives (e.g. time-map
/// residuals) can propagate quadrature failures.
pub fn find_root_monotone<H>(
    mut h: H,
    bracket: (f64, f64),
    cfg: &RootFindConfig,
) -> Result<RootResult, NumericsError>
where
    H: FnMut(f64) -> Result<f64, NumericsError>,
{
    let (mut a, mut b) = bracket;
    assert!(
        a.is_finite() && b.is_finite() && a < b,
        "invalid bracket ({a}, {b})"
    );

    let mut fa = h(a)?;
    let mut fb = h(b)?;
    if fa.abs() <= cfg.f_tol {
        return Ok(RootResult {
            x: a,
            f_value: fa,
            iterations: 0,
        });
    }
    if fb.abs() <= cfg.f_tol {
        return Ok(RootResult {
            x: b,
            f_value: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange { f_lo: fa, f_hi: fb });
    }

    // Secant memory; the previous-previous width safeguard forces a
    // bisection whenever the secant stops making real progress.
    let (mut x_prev, mut f_prev) = (a, fa);
    let (mut x_cur, mut f_cur) = (b, fb);
    let mut width_before_last = b - a;

    let mut last = (x_cur, f_cur);
    for iter in 1..=cfg.max_iterations {
        let width = b - a;
        let secant = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev);
        let x_new = if secant.is_finite()
            && secant > a
            && secant < b
            && (secant - x_cur).abs() < 0.5 * width_before_last
        {
            secant
        } else {
            0.5 * (a + b)
        };
        width_before_last = width;

        let f_new = h(x_new)?;
        last = (x_new, f_new);
        if f_new.abs() <= cfg.f_tol {
            return Ok(RootResult {
                x: x_new,
                f_value: f_new,
                iterations: iter,
            });
        }
        if f_new.signum() == fa.signum() {
            a = x_new;
            fa = f_new;
        } else {
            b = x_new;
            fb = f_new;
        }
        if b - a <= cfg.x_tol {
            // Report the endpoint with the smaller residual.
            let (x, f_value) = if fa.abs() <= fb.abs() {
                (a, fa)
            } else {
                (b, fb)
            };
            return Ok(RootResult {
                x,
                f_value,
                iterations: iter,
            });
        }
        (x_prev, f_prev) = (x_cur, f_cur);
        (x_cur, f_cur) = (x_new, f_new);
    }

    Err(NumericsError::MaxIterations {
        last_x: last.0,
        f_last: last.1,
    })
}

/// Expands an initial guess `k0 > 0` into a sign-change bracket for a
/// strictly decreasing function with `h(0+) > 0 > h(+inf)`: doubles upward
/// while `h` stays nonnegative, halves downward while it stays negative.
/// Capped at 200 steps in either direction, i.e. the scan spans
/// `[k0 * 2^-200, k0 * 2^200]`.
pub fn bracket_decreasing<H>(mut h: H, k0: f64) -> Result<(f64, f64), NumericsError>
where
    H: FnMut(f64) -> Result<f64, NumericsError>,
{
    assert!(
        k0.is_finite() && k0 > 0.0,
        "initial guess must be positive, got {k0}"
    );
    const MAX_STEPS: u32 = 200;

    let f0 = h(k0)?;
    if f0 >= 0.0 {
        let mut lo = k0;
        let mut hi = 2.0 * k0;
        for _ in 0..MAX_STEPS {
            if h(hi)? < 0.0 {
                return Ok((lo, hi));
            }
            lo = hi;
            hi *= 2.0;
        }
    } else {
        let mut hi = k0;
        let mut lo = 0.5 * k0;
        for _ in 0..MAX_STEPS {
            if h(lo)? > 0.0 {
                return Ok((lo, hi));
            }
            hi = lo;
            lo *= 0.5;
        }
    }
    Err(NumericsError::BracketExhausted {
        k0,
        steps: MAX_STEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cell::RefCell;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn default_quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn integrates_constants_and_low_degree_polynomials_exactly() {
        let cfg = default_quad();
        let one = integrate(|_| 1.0, 0.0, 1.0, &cfg).unwrap();
        assert!((one.value - 1.0).abs() <= 1e-14);

        let sq = integrate(|s| s * s, 0.0, 1.0, &cfg).unwrap();
        assert!((sq.value - 1.0 / 3.0).abs() <= 1e-14 / 3.0);
    }

    #[test]
    fn integrates_polynomials_up_to_the_exactness_degree() {
        // The Kronrod rule is exact through degree 22; check the worst case
        // and a mixed polynomial against closed forms.
        let cfg = default_quad();
        let p22 = integrate(|s| s.powi(22), 0.0, 1.0, &cfg).unwrap();
        let exact = 1.0 / 23.0;
        assert!(
            ((p22.value - exact) / exact).abs() <= 1e-14,
            "degree-22 relative error {:.3e}",
            ((p22.value - exact) / exact).abs()
        );

        let mixed = integrate(
            |s| 3.0 * s.powi(21) - 5.0 * s.powi(10) + 7.0,
            -1.0,
            2.0,
            &cfg,
        )
        .unwrap();
        // antiderivative: (3/22) s^22 - (5/11) s^11 + 7 s
        let f = |s: f64| 3.0 / 22.0 * s.powi(22) - 5.0 / 11.0 * s.powi(11) + 7.0 * s;
        let exact = f(2.0) - f(-1.0);
        assert!(((mixed.value - exact) / exact).abs() <= 1e-14);
    }

    #[test]
    fn integrates_the_flat_time_map_integrand() {
        // 2 / sqrt(2 - s^2) over [0, 1] = pi/2: the k = 0 time-map integrand
        // after desingularisation, with unit spectral parameter.
        let cfg = default_quad();
        let q = integrate(|s| 2.0 / (2.0 - s * s).sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert!((q.value - FRAC_PI_2).abs() <= 1e-10, "got {}", q.value);
    }

    #[test]
    fn reports_its_achieved_error_estimate() {
        let cfg = default_quad();
        let q = integrate(|s| (10.0 * s).sin().exp(), 0.0, PI, &cfg).unwrap();
        assert!(q.error_estimate <= cfg.abs_tol.max(cfg.rel_tol * q.value.abs()));
    }

    #[test]
    fn empty_interval_is_zero() {
        let q = integrate(|s| s.exp(), 2.0, 2.0, &default_quad()).unwrap();
        assert_eq!(q.value, 0.0);
        assert_eq!(q.error_estimate, 0.0);
    }

    #[test]
    fn deterministic_bit_identical_reruns() {
        let cfg = default_quad();
        let g = |s: f64| (s * s + 0.25).sqrt().recip();
        let q1 = integrate(g, 0.0, 3.0, &cfg).unwrap();
        let q2 = integrate(g, 0.0, 3.0, &cfg).unwrap();
        assert_eq!(q1.value.to_bits(), q2.value.to_bits());
        assert_eq!(q1.error_estimate.to_bits(), q2.error_estimate.to_bits());
    }

    #[test]
    fn subdivision_cap_is_reported_with_best_estimate() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..default_quad()
        };
        // |s|^(-1/2) with an interior singularity cannot converge in 3 splits.
        let res = integrate(|s| 1.0 / s.abs().sqrt().max(1e-300), -1.0, 1.0, &cfg);
        match res {
            Err(NumericsError::SubdivisionExhausted {
                value,
                subdivisions,
                ..
            }) => {
                assert_eq!(subdivisions, 3);
                assert!(value.is_finite());
            }
            other => panic!("expected SubdivisionExhausted, got {other:?}"),
        }
    }

    #[test]
    fn finds_a_linear_root() {
        let cfg = RootFindConfig::default();
        let r = find_root_monotone(|x| Ok(x - 2.0), (0.0, 5.0), &cfg).unwrap();
        assert!((r.x - 2.0).abs() <= 1e-12, "root {}", r.x);
    }

    #[test]
    fn agrees_with_a_fixed_point_oracle_for_cos() {
        // Independent oracle: fixed-point iteration of cos, which converges
        // to the unique solution of cos(x) = x.
        let mut y = 0.5_f64;
        for _ in 0..200 {
            y = y.cos();
        }
        let cfg = RootFindConfig::default();
        let r = find_root_monotone(|x| Ok(x.cos() - x), (0.0, 1.0), &cfg).unwrap();
        assert!((r.x - y).abs() <= 1e-9, "solver {} vs oracle {y}", r.x);
        assert!((r.x - 0.739_085_133_2).abs() <= 1e-9);
    }

    #[test]
    fn rejects_brackets_without_sign_change() {
        let cfg = RootFindConfig::default();
        let res = find_root_monotone(|x| Ok(x * x + 1.0), (0.0, 1.0), &cfg);
        assert!(matches!(res, Err(NumericsError::NoSignChange { .. })));
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let cfg = RootFindConfig {
            max_iterations: 2,
            f_tol: 0.0,
            x_tol: 0.0,
        };
        let res = find_root_monotone(|x| Ok(x.tanh() - 0.31), (-4.0, 4.0), &cfg);
        assert!(matches!(res, Err(NumericsError::MaxIterations { .. })));
    }

    #[test]
    fn bracket_expansion_walks_down_to_the_root() {
        // Strictly decreasing with root at k = 1, probed from far above.
        let mut h = |k: f64| Ok(1.0 - k);
        let (lo, hi) = bracket_decreasing(&mut h, 1.0e6).unwrap();
        assert!(
            lo < 1.0 && 1.0 <= hi,
            "bracket ({lo}, {hi}) misses the root"
        );
    }

    #[test]
    fn bracket_expansion_walks_up_to_the_root() {
        let mut h = |k: f64| Ok(100.0 - k);
        let (lo, hi) = bracket_decreasing(&mut h, 1.0e-3).unwrap();
        assert!(lo < 100.0 && 100.0 <= hi);
    }

    #[test]
    fn bracket_expansion_reports_exhaustion() {
        // Strictly positive h never crosses zero.
        let res = bracket_decreasing(|_| Ok(1.0), 1.0);
        match res {
            Err(NumericsError::BracketExhausted { steps, .. }) => assert_eq!(steps, 200),
            other => panic!("expected BracketExhausted, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn root_finder_never_leaves_the_bracket(
            root in -5.0_f64..5.0,
            scale in 0.1_f64..10.0,
            pad_lo in 0.01_f64..4.0,
            pad_hi in 0.01_f64..4.0,
        ) {
            let lo = root - pad_lo;
            let hi = root + pad_hi;
            let evals = RefCell::new(Vec::new());
            let cfg = RootFindConfig::default();
            let r = find_root_monotone(
                |x| {
                    evals.borrow_mut().push(x);
                    Ok(scale * (x - root))
                },
                (lo, hi),
                &cfg,
            )
            .unwrap();
            prop_assert!((r.x - root).abs() <= 1e-9);
            for &x in evals.borrow().iter() {
                prop_assert!(x >= lo && x <= hi, "evaluated at {x} outside [{lo}, {hi}]");
            }
        }

        #[test]
        fn quadrature_matches_closed_form_for_smooth_exponentials(rate in 0.1_f64..3.0, hi in 0.5_f64..4.0) {
            let cfg = QuadratureConfig::default();
            let q = integrate(|s| (-rate * s).exp(), 0.0, hi, &cfg).unwrap();
            let exact = (1.0 - (-rate * hi).exp()) / rate;
            prop_assert!((q.value - exact).abs() <= 1e-11 * exact.abs().max(1.0));
        }
    }
}
