//! Rational scalars, the exponent `p`, and mixed exact/approximate values.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if t.contains('/') {
            return Err(Error::Parse(format!("malformed rational `{t}`")));
        }
        let negative = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if !digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("malformed decimal `{t}`")));
        }
        let whole: String = [digits, frac_part].concat();
        let numer = BigInt::from_str(if whole.is_empty() { "0" } else { &whole })
            .map_err(|_| Error::Parse(format!("malformed decimal `{t}`")))?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let value = Rational::from_str(t).map_err(|_| Error::Parse(format!("malformed rational `{t}`")))?;
    Ok(value)
}

/// Canonical text form: `"3"` for integers, `"num/den"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational image of a finite `f64`.
pub fn from_f64(value: f64) -> Result<Rational> {
    Rational::from_float(value).ok_or_else(|| Error::Parse(format!("non-finite value {value}")))
}

pub fn signum(value: &Rational) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

/// The exponent `p >= 1` of `h_{A,p}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponent(Rational);

impl Exponent {
    pub fn one() -> Self {
        Exponent(Rational::one())
    }

    pub fn new(p: Rational) -> Result<Self> {
        if p < Rational::one() {
            return Err(Error::precondition(format!("exponent p = {p} must be >= 1")));
        }
        Ok(Exponent(p))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`; infinite for `p = 1`.
    pub fn conjugate_f64(&self) -> f64 {
        if self.is_one() {
            f64::INFINITY
        } else {
            let p = self.as_f64();
            p / (p - 1.0)
        }
    }
}

impl Default for Exponent {
    fn default() -> Self {
        Exponent::one()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A value that is exact for `p = 1` and floating for `p > 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(v) => *v == 0.0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => r.fmt(f),
            Scalar::Approx(v) => v.fmt(f),
        }
    }
}

/// `|a|^p` in floating point.
pub(crate) fn abs_pow(value: &Rational, p: f64) -> f64 {
    libm::pow(to_f64(value).abs(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2/3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&int(3)), "3");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn exponent_bounds() {
        assert!(Exponent::new(rat(1, 2)).is_err());
        let p = Exponent::new(int(2)).unwrap();
        assert_eq!(p.conjugate_f64(), 2.0);
        assert!(Exponent::one().conjugate_f64().is_infinite());
    }
}
