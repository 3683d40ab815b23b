//! Exact scalars and the numeric trait shared by exact and floating tensors.

use std::fmt::Debug;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{FromPrimitive, Signed, ToPrimitive};
use num::{BigRational, Integer, One, Zero};

use crate::error::Error;

/// Arbitrary-precision rational used by every analytic predicate.
pub type Rational = BigRational;

/// Field-like scalar a tensor can be stored over.
pub trait Scalar: Signed + FromPrimitive + Clone + PartialOrd + Debug + Send + Sync {}

impl<T> Scalar for T where T: Signed + FromPrimitive + Clone + PartialOrd + Debug + Send + Sync {}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse `"p/q"`, an integer, or a decimal literal (optionally with an
/// exponent) into an exact rational. Decimals are expanded in base 10, never
/// through a binary float.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&joined).map_err(|_| bad())?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `"p/q"` or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positive multiple of `v` with coprime integer coordinates; the zero
/// vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
}

/// Nearest rational with the given denominator.
pub fn rationalize(x: f64, denominator: i64) -> Rational {
    let scaled = (x * denominator as f64).round();
    let n = BigInt::from_f64(scaled).unwrap_or_else(BigInt::zero);
    Rational::new(n, BigInt::from(denominator))
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Sign of `p + q·√r` for `r ≥ 0`, decided without any square root.
pub fn sign_of_surd(p: &Rational, q: &Rational, r: &Rational) -> i8 {
    debug_assert!(!r.is_negative());
    let sp = sign(p);
    let sq = if r.is_zero() { 0 } else { sign(q) };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // Opposite signs: the larger magnitude wins.
    let lhs = p * p;
    let rhs = q * q * r;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sp,
        std::cmp::Ordering::Less => sq,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Sign of `u·√α − v·√β` for `α, β ≥ 0`.
pub fn sign_of_radical_difference(u: &Rational, alpha: &Rational, v: &Rational, beta: &Rational) -> i8 {
    let left = if alpha.is_zero() { 0 } else { sign(u) };
    let right = if beta.is_zero() { 0 } else { sign(v) };
    if left != right {
        // u√α and v√β have different signs, so their difference has the sign
        // of whichever is larger in the signed order.
        return (left - right).signum();
    }
    if left == 0 {
        return 0;
    }
    let a = u * u * alpha;
    let b = v * v * beta;
    let magnitude = match a.cmp(&b) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    };
    magnitude * left
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
