//! Exact rationals and their text form.
//!
//! Values are kept as [`BigRational`], which is always reduced with a
//! positive denominator. The text form is `p/q`, or `p` when `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, WgError};

pub type ExactRational = BigRational;

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn format_rational(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`. The text must already be in canonical (reduced)
/// form, so that parsing and formatting are exact inverses.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let bad = |reason: &str| WgError::Parse {
        what: "rational",
        reason: format!("{text:?}: {reason}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    let value = BigRational::new(num, den);
    if format_rational(&value) != text {
        return Err(bad("not in reduced canonical form"));
    }
    Ok(value)
}

pub fn signum(x: &ExactRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `base^exp` for a rational base.
pub fn pow(base: &ExactRational, exp: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        assert_eq!(format_rational(&ratio(-2, 240)), "-1/120");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(parse_rational("-1/120").unwrap(), ratio(-1, 120));
        assert_eq!(parse_rational("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(parse_rational("2/4").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("3/1").is_err());
    }
}
