//! Exact rational scalars and their canonical text form `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FormatError;

/// The ground field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Canonical `p/q` with `gcd(p, q) = 1` and `q > 0`. Integers keep the `/1`.
pub fn format_q(x: &Q) -> String {
    // BigRational is always kept reduced with a positive denominator.
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q, FormatError> {
    let bad = || FormatError::Rational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn sign(parity_odd: bool) -> Q {
    if parity_odd {
        -one()
    } else {
        one()
    }
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_form() {
        assert_eq!(format_q(&qf(4, -6)), "-2/3");
        assert_eq!(format_q(&q(5)), "5/1");
        assert_eq!(format_q(&zero()), "0/1");
        assert_eq!(parse_q(" 6/4 ").unwrap(), qf(3, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
