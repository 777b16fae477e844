//! Exact rationals. Everything numeric that leaves the crate is a [`Rational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `"a/b"`, or `"a"` for integers.
pub fn fmt_exact(q: &Rational) -> String {
    q.to_string()
}

/// Fixed-point rendering with `digits` places, rounded half away from zero.
pub fn fmt_decimal(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let (whole, frac) = rounded.abs().div_rem(&scale);
    let mut out = String::new();
    if neg && !(whole.is_zero() && frac.is_zero()) {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    out
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Serde hook writing the exact string form.
pub(crate) fn serialize<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_exact(q))
}

pub(crate) fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_exact(&ratio(130, 7)), "130/7");
        assert_eq!(fmt_exact(&ratio(-4, 2)), "-2");
        assert_eq!(fmt_decimal(&ratio(130, 7), 4), "18.5714");
        assert_eq!(fmt_decimal(&ratio(-1, 6), 3), "-0.167");
        assert_eq!(fmt_decimal(&ratio(-1, 3000), 2), "0.00");
    }

    #[test]
    fn parses() {
        assert_eq!(parse_rational("11/2"), Some(ratio(11, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
