//! Thin helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal literal `{0}` not accepted here (use a/b)")]
    DecimalNotAllowed(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated floats for huge operands.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `a`, `a/b`, or (when `allow_decimal`) `a.b` with optional sign.
///
/// Decimal literals are converted to the exact rational they denote; the
/// returned flag is `true` when a decimal point was present.
pub fn parse_rational(text: &str, allow_decimal: bool) -> Result<(Rational, bool), RationalParseError> {
    let s = text.trim();
    let invalid = || RationalParseError::Invalid(s.to_string());
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s.strip_prefix('+').unwrap_or(s).trim_start()),
    };
    if body.is_empty() {
        return Err(invalid());
    }
    let (value, inexact) = if let Some((num, den)) = body.split_once('/') {
        let n: BigInt = parse_digits(num.trim()).ok_or_else(invalid)?;
        let d: BigInt = parse_digits(den.trim()).ok_or_else(invalid)?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator(s.to_string()));
        }
        (Rational::new(n, d), false)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if !allow_decimal {
            return Err(RationalParseError::DecimalNotAllowed(s.to_string()));
        }
        if whole.is_empty() && frac.is_empty() {
            return Err(invalid());
        }
        let digits = format!("{whole}{frac}");
        let n = parse_digits(&digits).ok_or_else(invalid)?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        (Rational::new(n, d), true)
    } else {
        (Rational::from_integer(parse_digits(body).ok_or_else(invalid)?), false)
    };
    Ok((if negative { -value } else { value }, inexact))
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `a` or `a/b`, the canonical text form.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Formats a float with twelve significant digits, trimming trailing zeros.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Rounds to twelve significant digits (the value `format_sig12` prints).
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("-1/2", false).unwrap(), (rat(-1, 2), false));
        assert_eq!(parse_rational(" 7 ", false).unwrap(), (int(7), false));
        assert_eq!(parse_rational("0.25", true).unwrap(), (rat(1, 4), true));
        assert!(matches!(
            parse_rational("0.25", false),
            Err(RationalParseError::DecimalNotAllowed(_))
        ));
        assert!(matches!(
            parse_rational("3/0", false),
            Err(RationalParseError::ZeroDenominator(_))
        ));
        assert!(parse_rational("1/x", false).is_err());
        assert!(parse_rational("", false).is_err());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(-2.25), "-2.25");
        assert_eq!(format_sig12(-50.0 / 9.0), "-5.55555555556");
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1e-7), "1.00000000000e-7");
        assert_eq!(round_sig12(-50.0 / 9.0), -5.55555555556);
    }
}
