//! Exact rational parsing and rendering.
//!
//! All probabilities, rates and unfairness values in this crate are
//! `num_rational::BigRational`. Machine output renders them as `"p/q"`
//! strings; the 6-place decimal rendering is display-only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Shorthand used throughout the crate.
pub type Rat = BigRational;

/// Build a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse an exact rational from a `"p/q"` or `"p"` string.
///
/// The denominator must be positive. Whitespace is not accepted.
pub fn parse_rational(s: &str) -> Result<Rat, Error> {
    let malformed = || Error::MalformedRational(s.to_string());
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| malformed())?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => BigInt::one(),
    };
    if !is_plain_integer(num_s) || den_s.is_some_and(|d| !is_plain_integer(d)) {
        return Err(malformed());
    }
    if den <= BigInt::zero() {
        return Err(malformed());
    }
    Ok(Rat::new(num, den))
}

// BigInt::parse accepts a leading `+`; the document format does not.
fn is_plain_integer(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Render as `"p/q"`, or `"p"` when the value is an integer.
pub fn ratio_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering truncated toward zero at 6 places, for human output.
pub fn decimal_string(r: &Rat) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scaled = abs.numer() * BigInt::from(1_000_000u32) / abs.denom();
    let int_part = &scaled / BigInt::from(1_000_000u32);
    let frac_part = &scaled % BigInt::from(1_000_000u32);
    format!("{sign}{int_part}.{frac_part:06}")
}
