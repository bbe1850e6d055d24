//! Numeric command-line arguments, kept both exactly and as `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// A number given as an integer, a fraction `a/b` or a decimal with an
/// optional exponent (`-0.25`, `3e-2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Number {
    pub exact: BigRational,
    pub approx: f64,
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let bad = || format!("invalid number {s:?} (expected an integer, a/b or a decimal)");
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(format!("invalid number {s:?}: zero denominator"));
            }
            let exact = BigRational::new(n, d);
            let approx = exact.to_f64().ok_or_else(bad)?;
            return Ok(Number { exact, approx });
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let all: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        let mut exact = if scale >= 0 {
            BigRational::from_integer(all * ten.pow(scale as u32))
        } else {
            BigRational::new(all, ten.pow(scale.unsigned_abs()))
        };
        if neg {
            exact = -exact;
        }
        let approx: f64 = t.parse().map_err(|_| bad())?;
        Ok(Number { exact, approx })
    }
}
