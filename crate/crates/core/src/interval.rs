//! Certified real enclosures with rational endpoints.
//!
//! Every operation returns an interval that contains the exact result. Endpoints
//! are rounded outward to dyadic rationals once they outgrow the precision
//! budget, so small exact inputs stay exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Q,
    hi: Q,
    bits: u32,
}

fn bit_size(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// floor(log2 |x|) for nonzero x, within one.
fn log2_approx(x: &Q) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

fn round_down(x: &Q, k: i64) -> Q {
    scale_round(x, k, false)
}

fn round_up(x: &Q, k: i64) -> Q {
    scale_round(x, k, true)
}

/// Rounds `x` to a multiple of `2^-k`, downward or upward.
fn scale_round(x: &Q, k: i64, up: bool) -> Q {
    let scale = if k >= 0 {
        Q::from_integer(BigInt::one() << (k as usize))
    } else {
        Q::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    };
    let scaled = x * &scale;
    let n = if up { rational::ceil(&scaled) } else { rational::floor(&scaled) };
    Q::from_integer(n) / scale
}

impl CertifiedReal {
    pub fn exact(x: Q, bits: u32) -> Self {
        CertifiedReal { lo: x.clone(), hi: x, bits }
    }

    pub fn new(lo: Q, hi: Q, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("interval with lo > hi"));
        }
        Ok(CertifiedReal { lo, hi, bits }.normalized())
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `|x|`; an interval straddling zero becomes `[0, max(|lo|, |hi|)]`.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            CertifiedReal { lo: Q::zero(), hi: m, bits: self.bits }
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_exact(&self) -> Option<&Q> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / rational::qi(2)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.midpoint())
    }

    fn working_bits(&self) -> i64 {
        self.bits as i64 + 32
    }

    fn normalized(mut self) -> Self {
        let budget = 2 * self.working_bits() as u64 + 64;
        if bit_size(&self.lo) > budget || bit_size(&self.hi) > budget {
            let mag = if self.lo.abs() > self.hi.abs() { &self.lo } else { &self.hi };
            let e = if mag.is_zero() { 0 } else { log2_approx(mag) };
            let k = self.working_bits() - e;
            self.lo = round_down(&self.lo, k);
            self.hi = round_up(&self.hi, k);
        }
        self
    }

    fn with(&self, lo: Q, hi: Q, other_bits: u32) -> Self {
        CertifiedReal { lo, hi, bits: self.bits.min(other_bits) }.normalized()
    }

    pub fn add(&self, o: &CertifiedReal) -> Self {
        self.with(&self.lo + &o.lo, &self.hi + &o.hi, o.bits)
    }

    pub fn sub(&self, o: &CertifiedReal) -> Self {
        self.with(&self.lo - &o.hi, &self.hi - &o.lo, o.bits)
    }

    pub fn neg(&self) -> Self {
        CertifiedReal { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub fn add_q(&self, x: &Q) -> Self {
        self.with(&self.lo + x, &self.hi + x, self.bits)
    }

    pub fn mul_q(&self, x: &Q) -> Self {
        let a = &self.lo * x;
        let b = &self.hi * x;
        if a <= b {
            self.with(a, b, self.bits)
        } else {
            self.with(b, a, self.bits)
        }
    }

    pub fn mul(&self, o: &CertifiedReal) -> Self {
        let cands = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = cands.iter().min().cloned().unwrap_or_default();
        let hi = cands.iter().max().cloned().unwrap_or_default();
        self.with(lo, hi, o.bits)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains(&Q::zero()) {
            return Err(Error::PrecisionExhausted(format!(
                "reciprocal of an interval containing zero: {self}"
            )));
        }
        Ok(self.with(self.hi.recip(), self.lo.recip(), self.bits))
    }

    pub fn div(&self, o: &CertifiedReal) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = CertifiedReal::exact(Q::one(), self.bits);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        if e.unsigned_abs().is_multiple_of(2) && self.contains(&Q::zero()) {
            acc.lo = Q::zero();
        }
        Ok(acc)
    }

    /// Certified floor: both endpoints must agree.
    pub fn floor(&self) -> Result<BigInt> {
        let a = rational::floor(&self.lo);
        let b = rational::floor(&self.hi);
        if a == b {
            Ok(a)
        } else {
            Err(Error::PrecisionExhausted(format!("floor of {self} is not certified")))
        }
    }

    pub fn ceil(&self) -> Result<BigInt> {
        let a = rational::ceil(&self.lo);
        let b = rational::ceil(&self.hi);
        if a == b {
            Ok(a)
        } else {
            Err(Error::PrecisionExhausted(format!("ceiling of {self} is not certified")))
        }
    }

    pub fn frac(&self) -> Result<Self> {
        let f = self.floor()?;
        Ok(self.add_q(&-Q::from_integer(f)))
    }

    /// Certified comparison against an exact rational.
    pub fn cmp_q(&self, x: &Q) -> Result<Ordering> {
        if &self.hi < x {
            Ok(Ordering::Less)
        } else if &self.lo > x {
            Ok(Ordering::Greater)
        } else if self.is_exact() {
            Ok(Ordering::Equal)
        } else {
            Err(Error::PrecisionExhausted(format!(
                "cannot order {self} against {}",
                rational::render(x)
            )))
        }
    }

    pub fn cmp_certified(&self, o: &CertifiedReal) -> Result<Ordering> {
        if self.hi < o.lo {
            Ok(Ordering::Less)
        } else if self.lo > o.hi {
            Ok(Ordering::Greater)
        } else if self.is_exact() && o.is_exact() {
            Ok(Ordering::Equal)
        } else {
            Err(Error::PrecisionExhausted(format!("cannot order {self} against {o}")))
        }
    }

    pub fn sqrt_q(x: &Q, bits: u32) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::domain("square root of a negative number"));
        }
        if let Some(r) = rational::exact_root(x, 2) {
            return Ok(CertifiedReal::exact(r, bits));
        }
        let k = bits as usize + 16;
        let scale = BigInt::one() << (2 * k);
        let scaled = x * Q::from_integer(scale);
        let lo = rational::floor(&scaled).sqrt();
        let hi = rational::ceil(&scaled).sqrt() + BigInt::one();
        let den = BigInt::one() << k;
        CertifiedReal::new(Q::new(lo, den.clone()), Q::new(hi, den), bits)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::PrecisionExhausted(format!("square root of {self}")));
        }
        let a = CertifiedReal::sqrt_q(&self.lo, self.bits)?;
        let b = CertifiedReal::sqrt_q(&self.hi, self.bits)?;
        CertifiedReal::new(a.lo, b.hi, self.bits)
    }

    /// pi via Machin's formula, summed in fixed point with explicit error bounds.
    pub fn pi(bits: u32) -> Self {
        let p = bits as usize + 24;
        let (a, ea) = atan_inv_fixed(5, p);
        let (b, eb) = atan_inv_fixed(239, p);
        let s = BigInt::from(16) * a - BigInt::from(4) * b;
        let err = BigInt::from(16) * ea + BigInt::from(4) * eb;
        fixed_interval(s, err, p, bits)
    }

    /// Euler's number from its factorial series.
    pub fn e(bits: u32) -> Self {
        let p = bits as usize + 24;
        let one = BigInt::one() << p;
        let mut term = one.clone();
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        let mut err = BigInt::zero();
        while !term.is_zero() {
            sum += &term;
            err += BigInt::one();
            k += 1;
            term /= BigInt::from(k);
        }
        // Tail after the loop is below 2 ulps.
        err += BigInt::from(2);
        fixed_interval(sum, err, p, bits)
    }

    fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

fn fixed_interval(s: BigInt, err: BigInt, p: usize, bits: u32) -> CertifiedReal {
    let den = BigInt::one() << p;
    CertifiedReal {
        lo: Q::new(&s - &err, den.clone()),
        hi: Q::new(s + err, den),
        bits,
    }
}

/// atan(1/x) scaled by 2^p, with an absolute error bound in ulps.
fn atan_inv_fixed(x: u64, p: usize) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << p) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut terms = 0u64;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        terms += 1;
        power /= &x2;
        k += 1;
    }
    // Each truncated division loses under one ulp; the alternating tail is below one ulp.
    (sum, BigInt::from(2 * terms + 2))
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = self.as_exact() {
            return write!(f, "{}", rational::render(x));
        }
        let d = self.decimal_digits();
        let lo = rational::to_decimal(&self.lo, d);
        let hi = {
            let neg = -&self.hi;
            let s = rational::to_decimal(&neg, d);
            match s.strip_prefix('-') {
                Some(rest) => rest.to_string(),
                None if s.chars().all(|c| c == '0' || c == '.') => s,
                None => format!("-{s}"),
            }
        };
        write!(f, "[{lo},{hi}]")
    }
}
