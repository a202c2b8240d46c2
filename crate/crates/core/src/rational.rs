//! Exact rational helpers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `a/b`, an integer, or a decimal with optional exponent
/// (`2.5`, `-1e-3`) into an exact rational.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Domain(format!("cannot parse {text:?} as a rational number"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => {
            let e: i64 = s[at + 1..].parse().map_err(|_| bad())?;
            (&s[..at], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let mut q = Rational::from_integer(all);
    if scale >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}

/// Binomial coefficient by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn binomial_q(n: u64, k: u64) -> Rational {
    Rational::from_integer(BigInt::from(binomial(n, k)))
}

/// `Σ 1/x` inverted; `None` if any term is not strictly positive or the input is empty.
pub fn harmonic_inverse<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut sum = Rational::zero();
    let mut any = false;
    for v in values {
        if !v.is_positive() {
            return None;
        }
        sum += v.recip();
        any = true;
    }
    any.then(|| sum.recip())
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}
