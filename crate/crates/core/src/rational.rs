//! Rational values and their `p/q` text form.

use alloc::format;
use alloc::string::String;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational used for every lattice quantity.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {text:?}")]
pub struct RationalParseError {
    pub text: String,
}

/// Formats `r` as `p/q` with `q > 0`, including integers (`1/1`, `0/1`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. The result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError { text: String::from(text) };
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: i64 = p.parse().map_err(|_| err())?;
    let q: i64 = q.parse().map_err(|_| err())?;
    if q == 0 {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

/// `a ∸ b = max(a - b, 0)`.
#[inline]
pub fn tsub(a: Rational, b: Rational) -> Rational {
    let v = a - b;
    if v.is_negative() {
        Rational::zero()
    } else {
        v
    }
}

/// Least common multiple of the denominators of `values`, or `None` on overflow.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<i64> {
    let mut l: i64 = 1;
    for v in values {
        let q = *v.denom();
        let g = l.gcd(&q);
        l = (l / g).checked_mul(q)?;
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_print_with_denominator() {
        assert_eq!(fmt_rational(&Rational::from_integer(0)), "0/1");
        assert_eq!(fmt_rational(&Rational::from_integer(1)), "1/1");
        assert_eq!(fmt_rational(&Rational::new(-2, 4)), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/5", "0/1", "1/1", "-7/3", "10/14"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
        }
        assert_eq!(parse_rational("2").unwrap(), Rational::from_integer(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [Rational::new(1, 4), Rational::new(1, 6), Rational::new(2, 3)];
        assert_eq!(common_denominator(&v), Some(12));
    }
}
