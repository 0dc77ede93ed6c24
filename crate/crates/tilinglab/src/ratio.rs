//! Exact rational scalars and vectors, plus the `"p/q"` string format used
//! everywhere rationals cross a serialization boundary.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::TilingError;

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Componentwise fractional part in `[0, 1)`.
pub fn fract(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn bigint_to_f64(x: &num::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// ∞-norm of a rational vector.
pub fn norm_inf(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn zero_vec(dim: usize) -> RatVec {
    vec![Rat::zero(); dim]
}

/// Formats a rational as `"p/q"`, omitting `/q` when the denominator is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `"p/q"` format (and plain integers, and decimal strings like
/// `"0.25"`).
pub fn parse_rat(s: &str) -> Result<Rat, TilingError> {
    let s = s.trim();
    let bad = || TilingError::Parse(format!("invalid rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(TilingError::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(p, q))
    } else if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let denom = BigInt::from(10u32).pow(digits);
        let neg = s.starts_with('-');
        let numer = &int * &denom + if neg { -frac_val } else { frac_val };
        Ok(BigRational::new(numer, denom))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(p))
    }
}

pub fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn parse_vec(v: &[String]) -> Result<RatVec, TilingError> {
    v.iter().map(|s| parse_rat(s)).collect()
}
