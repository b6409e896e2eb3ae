//! Constructive solver and verification toolkit for the one-dimensional
//! Dirichlet problem
//!
//! ```text
//!     -u'' = lambda * u + f(u)   on (a, b),      u(a) = u(b) = 0,
//! ```
//!
//! with the cubic nonlinearity `f(s) = -M s (s - 1)(2s - 1)`.  For
//! `0 < lambda < lambda1 = pi^2 / (b - a)^2` there is a unique amplitude
//! `M > 0` such that the problem has a positive solution with maximum 1 at
//! the interval midpoint; the solver finds `M` through the time map of the
//! associated planar Hamiltonian system and tabulates the solution as the
//! inverse of a position map.
//!
//! The crate is organised by role:
//!
//! * [`numerics`] - deterministic adaptive quadrature and bracketed root
//!   finding (the only two numerical primitives everything else uses),
//! * [`nonlinearity`] - the cubic reaction term, its primitive, and the
//!   conserved energy,
//! * [`timemap`] - the time map, amplitude solve, and position map,
//! * [`solution`] - solution profiles: construction, evaluation, CSV/JSON
//!   export and import,
//! * [`verify`] - independent a-posteriori checks (finite differences,
//!   shooting, energy drift, a one-dimensional Pohozaev balance),
//! * [`spectral`] - first Dirichlet eigenvalues (interval closed form,
//!   radial finite differences for the ball) and the existence /
//!   nonexistence certificate,
//! * [`cli`] - the command-line front end wired to all of the above.

pub mod cli;
pub mod nonlinearity;
pub mod numerics;
pub mod solution;
pub mod spectral;
pub mod timemap;
pub mod verify;

/// Formats `x` with 17 significant digits, enough to reproduce the exact
/// `f64` on re-parse.  Plain decimal notation where reasonable, scientific
/// for extreme magnitudes.
pub fn format_17sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..17).contains(&mag) {
        let decimals = (16 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.parse::<f64>() == Ok(x) {
            return s;
        }
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::format_17sig;

    #[test]
    fn format_round_trips_exactly() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            0.5,
            std::f64::consts::PI,
            -std::f64::consts::FRAC_PI_2,
            1.0e-7,
            123456.789,
            9.869604401089358,
            2.2250738585072014e-308,
        ] {
            let s = format_17sig(x);
            assert_eq!(
                s.parse::<f64>().unwrap(),
                x,
                "round trip failed for {x} -> {s}"
            );
        }
    }

    #[test]
    fn format_uses_decimal_notation_in_normal_range() {
        assert_eq!(format_17sig(1.0), "1.0000000000000000");
        assert_eq!(format_17sig(0.0), "0");
        assert!(!format_17sig(0.5).contains('e'));
        assert!(format_17sig(1.0e-30).contains('e'));
    }
}
