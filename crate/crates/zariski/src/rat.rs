//! Exact rational scalars and small parsing/formatting helpers.
//!
//! All arithmetic in this crate is exact; nothing here ever touches
//! floating point. `Rat` is backed by arbitrary-precision integers and
//! is kept normalized (positive denominator, coprime parts) by
//! construction.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number: arbitrary-precision, always normalized.
pub type Rat = BigRational;

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for small integer constants.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` with arbitrary-precision parts.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let err = || Error::invalid(format!("malformed rational `{s}`"));
    let (num_part, den_part) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_part.parse().map_err(|_| err())?;
    let den: BigInt = match den_part {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num, den))
}

/// Prints `p/q`, omitting `/1`.
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Deterministic enumeration key for rational search: candidates are
/// visited by increasing `max(|numerator|, denominator)`, negatives
/// before positives at equal height, then by absolute numerator.
pub fn search_key(value: &Rat) -> (BigInt, i8, BigInt) {
    let height = value.numer().abs().max(value.denom().clone());
    let sign = match value.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    };
    (height, sign, value.numer().abs())
}

/// Sorts rationals into the deterministic search order.
pub fn sort_for_search(values: &mut Vec<Rat>) {
    values.sort_by_key(search_key);
    values.dedup();
}
