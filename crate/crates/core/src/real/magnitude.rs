use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::real as r;

fn ten_pow(c: i64) -> Q {
    rational::pow_i(&rational::qi(10), c)
}

fn estimate_log10(y: &Element) -> i64 {
    let mid = match y {
        Element::Rational(a) => a.clone(),
        Element::Interval(iv) => iv.midpoint(),
        _ => return 0,
    };
    if mid.is_zero() {
        return 0;
    }
    let bits = mid.numer().bits() as f64 - mid.denom().bits() as f64;
    (bits * std::f64::consts::LOG10_2).round() as i64
}

/// Smallest integer `c` with `y / 10^c < 1`, and the mantissa `y / 10^c`.
/// `y = 0` maps to `(0, 0)`.
pub fn magnitude_prefix(y: &Element) -> Result<(BigInt, Element)> {
    if r::cmp_q(y, &Q::zero())? == Ordering::Less {
        return Err(Error::domain(format!("magnitude prefix of negative {y}")));
    }
    if matches!(y, Element::Infinity) {
        return Err(Error::domain("magnitude prefix of infinity"));
    }
    if r::is_zero(y)? {
        return Ok((BigInt::zero(), Element::zero()));
    }
    let mut c = estimate_log10(y);
    // Invariant sought: 10^(c-1) <= y < 10^c.
    loop {
        if r::cmp_q(y, &ten_pow(c))? != Ordering::Less {
            c += 1;
        } else if r::cmp_q(y, &ten_pow(c - 1))? == Ordering::Less {
            c -= 1;
        } else {
            break;
        }
    }
    let mantissa = r::mul_q(y, &ten_pow(-c))?;
    debug_assert!(r::cmp_q(&mantissa, &Q::one()).map(|o| o == Ordering::Less).unwrap_or(true));
    Ok((BigInt::from(c), mantissa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::CertifiedReal;
    use crate::rational::{q, qi};

    #[test]
    fn spec_cases() {
        assert_eq!(
            magnitude_prefix(&Element::Rational(qi(125))).unwrap(),
            (BigInt::from(3), Element::Rational(q(1, 8)))
        );
        assert_eq!(magnitude_prefix(&Element::zero()).unwrap(), (BigInt::zero(), Element::zero()));
        assert_eq!(
            magnitude_prefix(&Element::Rational(qi(1))).unwrap(),
            (BigInt::from(1), Element::Rational(q(1, 10)))
        );
    }

    #[test]
    fn small_values_have_negative_exponent() {
        let (c, m) = magnitude_prefix(&Element::Rational(q(1, 1000))).unwrap();
        assert_eq!(c, BigInt::from(-2));
        assert_eq!(m, Element::Rational(q(1, 10)));
    }

    #[test]
    fn interval_at_power_of_ten_is_uncertified() {
        let iv = CertifiedReal::new(q(99, 10), q(101, 10), 32).unwrap();
        assert!(matches!(
            magnitude_prefix(&Element::Interval(iv)),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn negative_input_rejected() {
        assert!(magnitude_prefix(&Element::Rational(q(-1, 2))).is_err());
    }
}
