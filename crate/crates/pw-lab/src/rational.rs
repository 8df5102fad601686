//! Arbitrary-precision rational scalars and their canonical string form.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Scalar type used everywhere: reduced fraction, denominator always positive.
pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for n/d.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// n! as a rational, for clearing the factorial denominators of relation
/// polynomials.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Binomial coefficient C(n, k) as an exact integer; zero when k is out of
/// range.
pub fn binomial(n: usize, k: isize) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Canonical string form: "p/q", or "p" when the denominator is one.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the canonical string form back into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next()?.parse().ok()?;
    match parts.next() {
        None => Some(BigRational::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.parse().ok()?;
            if denom.is_zero() {
                None
            } else {
                Some(BigRational::new(numer, denom))
            }
        }
    }
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Absolute value.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(rational_string(&rat(5)), "5");
        assert_eq!(rational_string(&rat(-3)), "-3");
        assert_eq!(rational_string(&ratio(1, 2)), "1/2");
        assert_eq!(rational_string(&ratio(-2, 4)), "-1/2");
        assert_eq!(rational_string(&ratio(6, 3)), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-7", "3/4", "-22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(rational_string(&r), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(5), rat(120));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(4, -2), BigInt::from(0));
        assert_eq!(binomial(4, 5), BigInt::from(0));
        // Pascal identity on a few rows.
        for n in 1..8usize {
            for k in 0..=n as isize {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }
}
