//! Exact rational scalars.
//!
//! Coefficients, point coordinates and group-element entries are all
//! arbitrary-precision rationals; fixed-width arithmetic is never used.

use num::bigint::BigInt;
pub use num::rational::BigRational as Rat;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The fraction p/q. Panics on q = 0.
pub fn ratq(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}

/// Canonical "p/q" string (q omitted when 1, q > 0, fraction reduced).
/// `BigRational` keeps exactly that normal form internally.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parse "p", "p/q" or "-p/q".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rat::from_integer)
            .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}"))),
        Some((p, q)) => {
            let p = p
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
            let q = q
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Sign as -1, 0 or 1.
pub fn signum(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "-7/3", "39/77", "-39/77", "12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn reduces() {
        assert_eq!(format_rat(&parse_rat("390/-770").unwrap()), "-39/77");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }
}
