//! Closed-form quantities of probabilistic angle interpolation.

use crate::error::{Error, Result};

/// Upper guard on the interpolation angle; `tan(delta/2)` diverges at pi.
pub const DELTA_GUARD: f64 = 1e-6;

pub fn validate_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= std::f64::consts::PI - DELTA_GUARD) {
        return Err(Error::InvalidParameter(format!(
            "interpolation angle {delta} outside (0, pi)"
        )));
    }
    Ok(())
}

/// Coefficients `(g1, g2, g3)` decomposing the rotation channel `R(theta)`
/// into identity, `R(sgn(theta) delta)` and `R(pi)`. Evaluated at `|theta|`.
pub fn gamma_coefficients(theta: f64, delta: f64) -> Result<(f64, f64, f64)> {
    validate_delta(delta)?;
    let th = theta.abs();
    let g1 = (th / 2.0).cos() * ((delta - th) / 2.0).sin() / (delta / 2.0).sin();
    let g2 = th.sin() / delta.sin();
    let g3 = -(th / 2.0).sin() * ((delta - th) / 2.0).sin() / (delta / 2.0).cos();
    Ok((g1, g2, g3))
}

/// Sampling overhead `exp(2 t l1 tan(delta/2))` of a TE-PAI circuit.
pub fn n_sample(t: f64, l1: f64, delta: f64) -> Result<f64> {
    validate_delta(delta)?;
    check_nonneg(t, l1)?;
    Ok((2.0 * t * l1 * (delta / 2.0).tan()).exp())
}

/// Expected gate count `t l1 (3 - cos delta) / sin delta` of a TE-PAI circuit.
pub fn n_gates(t: f64, l1: f64, delta: f64) -> Result<f64> {
    validate_delta(delta)?;
    check_nonneg(t, l1)?;
    Ok(t * l1 * (3.0 - delta.cos()) / delta.sin())
}

/// TETRIS normalisation `exp(s l1 tan(delta/2))`.
pub fn n_tetris(s: f64, l1: f64, delta: f64) -> Result<f64> {
    validate_delta(delta)?;
    check_nonneg(s, l1)?;
    Ok((s * l1 * (delta / 2.0).tan()).exp())
}

fn check_nonneg(t: f64, l1: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite() && l1 >= 0.0 && l1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time {t} and l1 norm {l1} must be finite and non-negative"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_endpoints() {
        let (a, b, c) = gamma_coefficients(0.0, 0.7).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15 && c.abs() < 1e-15);
        let (a, b, c) = gamma_coefficients(0.7, 0.7).unwrap();
        assert!(a.abs() < 1e-15 && (b - 1.0).abs() < 1e-15 && c.abs() < 1e-15);
    }

    #[test]
    fn gamma_uses_magnitude() {
        assert_eq!(
            gamma_coefficients(-0.2, 0.5).unwrap(),
            gamma_coefficients(0.2, 0.5).unwrap()
        );
    }

    #[test]
    fn delta_domain() {
        assert!(gamma_coefficients(0.1, 0.0).is_err());
        assert!(gamma_coefficients(0.1, PI).is_err());
        assert!(n_sample(1.0, 1.0, -0.1).is_err());
        assert!(n_gates(-1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn overhead_values() {
        assert_eq!(n_sample(0.0, 3.0, 0.4).unwrap(), 1.0);
        assert!((n_sample(1.0, 1.0, PI / 2.0).unwrap() - 7.389_056_098_930_65).abs() < 1e-12);
        assert_eq!(n_gates(0.0, 3.0, 0.4).unwrap(), 0.0);
        assert!((n_gates(1.0, 1.0, PI / 2.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn overhead_monotone_in_delta() {
        let mut prev = 0.0;
        for k in 1..100 {
            let d = k as f64 * 0.015;
            let v = n_sample(1.3, 0.8, d).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn small_delta_gate_asymptote() {
        let d = 1e-3;
        let exact = n_gates(2.0, 1.5, d).unwrap();
        let approx = 2.0 * 2.0 * 1.5 / d;
        assert!((exact / approx - 1.0).abs() < 1e-6);
    }
}
