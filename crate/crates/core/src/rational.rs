//! Helpers around [`BigRational`], the exact scalar used by every
//! polynomial, LP and certificate computation in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::domain(format!("non-finite value {x}")))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q`, `p`, or a plain decimal such as `-0.125` (decimals are
/// converted exactly, never through a float).
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(format!("empty rational literal")));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad numerator in {t:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad denominator in {t:?}")))?;
        if den.is_zero() {
            return Err(Error::parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(format!("bad decimal {t:?}")));
        }
        let mag: BigInt = digits.parse().map_err(|_| Error::parse(format!("bad decimal {t:?}")))?;
        let den = num_traits::pow(BigInt::from(10), fracpart.len());
        let r = Rational::new(mag, den);
        return Ok(if negative { -r } else { r });
    }
    t.parse::<BigInt>()
        .map(big)
        .map_err(|_| Error::parse(format!("bad rational literal {t:?}")))
}

/// The rational with the smallest denominator inside `[x - tol, x + tol]`
/// (Stern–Brocot / continued-fraction search).
pub fn simplest_within(x: f64, tol: f64) -> Result<Rational> {
    let lo = from_f64(x - tol)?;
    let hi = from_f64(x + tol)?;
    Ok(simplest_between(&lo, &hi))
}

/// Simplest rational in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl + Rational::one() <= *hi {
        return lo.ceil();
    }
    // Same integer part: recurse on the reciprocals of the fractional parts.
    let whole = lo.floor();
    let a = lo - &whole;
    let b = hi - &whole;
    let inner = simplest_between(&b.recip(), &a.recip());
    whole + inner.recip()
}

/// Rounds `x` outward to a dyadic rational with `bits` fractional bits.
pub fn dyadic_up(x: f64, bits: u32) -> Result<Rational> {
    let scale = Rational::from_integer(BigInt::one() << bits);
    let v = from_f64(x)? * &scale;
    Ok(v.ceil() / scale)
}

pub fn dyadic_nearest(x: f64, bits: u32) -> Result<Rational> {
    let scale = Rational::from_integer(BigInt::one() << bits);
    let v = from_f64(x)? * &scale;
    Ok(v.round() / scale)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Serde adapter storing a [`Rational`] as its `p/q` string.
pub mod as_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter for vectors of rationals stored as strings.
pub mod vec_as_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(super::format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter().map(|t| super::parse(t).map_err(D::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["320/3", "-16/7", "0", "5", "2560/4641"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse("-0.125").unwrap(), frac(-1, 8));
        assert_eq!(parse("2.2360680").unwrap(), frac(22360680, 10000000));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn simplest_rational_recovers_small_fractions() {
        assert_eq!(simplest_within(0.25000000001, 1e-6).unwrap(), frac(1, 4));
        assert_eq!(simplest_within(-0.6666666, 1e-6).unwrap(), frac(-2, 3));
        assert_eq!(simplest_within(3.0, 1e-9).unwrap(), int(3));
        assert_eq!(simplest_within(1e-12, 1e-9).unwrap(), int(0));
        let pi = simplest_within(std::f64::consts::PI, 1e-6).unwrap();
        assert_eq!(pi, frac(355, 113));
    }

    #[test]
    fn dyadic_rounding_is_outward() {
        let r = dyadic_up(0.1, 10).unwrap();
        assert!(to_f64(&r) >= 0.1);
        assert!((BigInt::from(1024) % r.denom()).is_zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(24, 12), BigInt::from(2704156));
    }
}
