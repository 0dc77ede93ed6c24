//! The Bessel function `J₁`, its first positive zero, and the radius at
//! which the transform of the unit-area disk first vanishes.

use std::f64::consts::PI;

use crate::error::{Result, TilingError};

/// `J₁(x)` by the ascending series `Σ (−1)^m / (m!(m+1)!) (x/2)^{2m+1}`,
/// valid for `|x| ≤ 12` with relative error below 1e−12.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if x.abs() > 12.0 {
        return Err(TilingError::Domain(
            "bessel_j1 series is certified only for |x| <= 12".into(),
        ));
    }
    let half = x / 2.0;
    let mut term = half; // m = 0: (x/2) / (0! 1!)
    let mut sum = term;
    for m in 1..=40 {
        term *= -(half * half) / (m as f64 * (m + 1) as f64);
        sum += term;
    }
    Ok(sum)
}

/// The first positive zero `j₁,₁ ≈ 3.8317`, by bisection on `[3.5, 4.2]`
/// to width 1e−12.
pub fn j1_first_zero() -> f64 {
    j1_first_zero_in(3.5, 4.2).expect("standard bracket contains the zero")
}

/// Bisection with a caller-supplied bracket (used to probe stability of the
/// disk certificate under bracket perturbation).
pub fn j1_first_zero_in(mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = bessel_j1(lo)?;
    let fhi = bessel_j1(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(TilingError::Precondition(
            "bracket does not straddle a sign change of J1".into(),
        ));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j1(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Distance from the origin to the first zero of the transform of the
/// *unit-area* disk: `j₁,₁ / (2√π)`.
pub fn disk_first_zero_radius() -> f64 {
    j1_first_zero() / (2.0 * PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1_at_zero() {
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
    }

    #[test]
    fn j1_small_argument_series_oracle() {
        // independent high-precision partial sums at a few points
        // (alternating series, so truncation error < first omitted term)
        let check = |x: f64| {
            let mut term = x / 2.0;
            let mut sum = term;
            for m in 1..=60u32 {
                term *= -(x * x / 4.0) / (m as f64 * (m + 1) as f64);
                sum += term;
            }
            assert!((bessel_j1(x).unwrap() - sum).abs() < 1e-14, "x={x}");
        };
        check(0.5);
        check(1.0);
        check(3.8);
        check(11.9);
    }

    #[test]
    fn j1_odd_function() {
        for &x in &[0.3, 1.7, 5.2] {
            assert!((bessel_j1(x).unwrap() + bessel_j1(-x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn j1_domain_guard() {
        assert!(bessel_j1(12.5).is_err());
    }

    #[test]
    fn first_zero_value() {
        let z = j1_first_zero();
        assert!((z - 3.8317).abs() < 1e-3);
        // tighter pin against the standard reference value
        assert!((z - 3.831_705_970_207_512).abs() < 1e-9);
    }

    #[test]
    fn first_zero_stable_under_bracket_perturbation() {
        let base = j1_first_zero();
        for &(lo, hi) in &[(3.5 + 1e-6, 4.2), (3.5, 4.2 - 1e-6), (3.6, 4.1)] {
            let z = j1_first_zero_in(lo, hi).unwrap();
            assert!((z - base).abs() < 1e-9);
        }
    }

    #[test]
    fn disk_radius_value() {
        assert!((disk_first_zero_radius() - 1.08098).abs() < 1e-4);
    }

    #[test]
    fn bad_bracket_rejected() {
        assert!(j1_first_zero_in(0.5, 1.0).is_err());
    }
}
