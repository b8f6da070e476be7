//! Exact rational helpers and extended integer types.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Q) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn frac(x: &Q) -> Q {
    x - Q::from_integer(floor(x))
}

pub fn pow_i(base: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge ratios: fall back to scaled integer conversion.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db;
        let scaled = if shift > 0 {
            Q::new(x.numer().clone(), x.denom() << (shift as usize))
        } else {
            Q::new(x.numer() << ((-shift) as usize), x.denom().clone())
        };
        scaled.to_f64().unwrap_or(0.0) * (shift as f64).exp2()
    })
}

/// Largest `r` with `r^k` equal to `x`, if `x` is an exact `k`-th power of a rational.
pub fn exact_root(x: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    if x.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-x, k).map(|r| -r);
    }
    let n = x.numer().nth_root(k);
    let d = x.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *x.numer()
        && num_traits::pow(d.clone(), k as usize) == *x.denom()
    {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Exact `x^alpha` for rational `alpha`, when the result is rational.
pub fn rational_pow(x: &Q, alpha: &Q) -> Option<Q> {
    let p = alpha.numer().to_i64()?;
    let r = alpha.denom().to_u32()?;
    let root = exact_root(x, r)?;
    if root.is_zero() && p < 0 {
        return None;
    }
    Some(pow_i(&root, p))
}

pub fn render(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q`, or a finite decimal like `-0.125`.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a rational literal: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() && ip.is_empty() {
            return Err(bad());
        }
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Decimal rendering truncated toward negative infinity to `digits` fractional digits.
pub fn to_decimal(x: &Q, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = floor(&(x * Q::from_integer(scale.clone())));
    let neg = scaled.sign() == Sign::Minus;
    let abs = scaled.abs();
    let (ip, fp) = abs.div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&ip.to_string());
    if digits > 0 {
        out.push('.');
        let f = fp.to_string();
        out.push_str(&"0".repeat(digits - f.len()));
        out.push_str(&f);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Integer extended by `-inf` and `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(BigInt),
    PosInf,
}

impl ExtInt {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ExtInt::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtInt::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Finite(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "inf"),
        }
    }
}

/// Natural number or infinity. Orders infinity last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatOrInf {
    Finite(usize),
    Infinite,
}

impl fmt::Display for NatOrInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatOrInf::Finite(n) => write!(f, "{n}"),
            NatOrInf::Infinite => write!(f, "inf"),
        }
    }
}

/// Rational extended by signed infinities, used for f-expansion images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtQ {
    NegInf,
    Finite(Q),
    PosInf,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(floor(&q(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&q(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&q(7, 2)), BigInt::from(4));
        assert_eq!(floor(&qi(3)), BigInt::from(3));
        assert_eq!(ceil(&qi(3)), BigInt::from(3));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("355/113").unwrap(), q(355, 113));
        assert_eq!(parse("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse(".5").unwrap(), q(1, 2));
        assert_eq!(parse("12").unwrap(), qi(12));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(exact_root(&q(9, 4), 2), Some(q(3, 2)));
        assert_eq!(exact_root(&q(2, 1), 2), None);
        assert_eq!(exact_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(rational_pow(&q(4, 9), &q(-3, 2)), Some(q(27, 8)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&qi(5), 0), "5");
    }

    #[test]
    fn ext_int_order() {
        let a = ExtInt::Finite(BigInt::from(5));
        assert!(ExtInt::NegInf < a && a < ExtInt::PosInf);
        assert!(NatOrInf::Finite(100) < NatOrInf::Infinite);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
