use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Truncated power series in `(x - x0)` with exact rational coefficients.
///
/// `trunc = Some(n)` means coefficients `0..=n` are known and nothing beyond is;
/// `coeffs.len() == n + 1`. `trunc = None` marks an exact polynomial whose
/// omitted coefficients are zero; its trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    x0: Q,
    coeffs: Vec<Q>,
    trunc: Option<usize>,
}

fn min_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl PowerSeries {
    pub fn new(x0: Q, mut coeffs: Vec<Q>, trunc: Option<usize>) -> Self {
        match trunc {
            Some(n) => coeffs.resize(n + 1, Q::zero()),
            None => {
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
            }
        }
        PowerSeries { x0, coeffs, trunc }
    }

    pub fn exact(x0: Q, coeffs: Vec<Q>) -> Self {
        Self::new(x0, coeffs, None)
    }

    pub fn truncated(x0: Q, coeffs: Vec<Q>, n: usize) -> Self {
        Self::new(x0, coeffs, Some(n))
    }

    pub fn constant(x0: Q, c: Q) -> Self {
        Self::exact(x0, vec![c])
    }

    pub fn zero(x0: Q) -> Self {
        Self::exact(x0, vec![])
    }

    pub fn one(x0: Q) -> Self {
        Self::constant(x0, Q::one())
    }

    /// The identity function `x`, written around `x0`.
    pub fn variable(x0: Q) -> Self {
        let c0 = x0.clone();
        Self::exact(x0, vec![c0, Q::one()])
    }

    /// `(x - x0)^m`.
    pub fn monomial(x0: Q, m: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); m];
        v.push(c);
        Self::exact(x0, v)
    }

    pub fn x0(&self) -> &Q {
        &self.x0
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Coefficient `k`; `None` when `k` lies beyond the truncation order.
    pub fn get(&self, k: usize) -> Option<Q> {
        match self.trunc {
            Some(n) if k > n => None,
            _ => Some(self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)),
        }
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(0)
    }

    /// Upper index bound for loops: the truncation order, or the degree.
    fn span(&self) -> usize {
        match self.trunc {
            Some(n) => n + 1,
            None => self.coeffs.len(),
        }
    }

    pub fn with_order(&self, n: usize) -> Self {
        let t = min_trunc(self.trunc, Some(n));
        Self::new(self.x0.clone(), self.coeffs.clone(), t)
    }

    /// Truncate to `n` only when exactness would otherwise be lost.
    pub fn ensure_order(&self, n: usize) -> Self {
        if self.trunc.is_some() {
            self.clone()
        } else {
            self.with_order(n.max(self.coeffs.len().saturating_sub(1)))
        }
    }

    fn check_base(&self, o: &PowerSeries) -> Result<()> {
        if self.x0 != o.x0 {
            return Err(Error::domain(format!(
                "series base points differ: {} vs {}",
                rational::render(&self.x0),
                rational::render(&o.x0)
            )));
        }
        Ok(())
    }

    fn zip_with(&self, o: &PowerSeries, f: impl Fn(Q, Q) -> Q) -> Result<PowerSeries> {
        self.check_base(o)?;
        let t = min_trunc(self.trunc, o.trunc);
        let len = match t {
            Some(n) => n + 1,
            None => self.coeffs.len().max(o.coeffs.len()),
        };
        let v = (0..len).map(|k| f(self.coeff(k), o.coeff(k))).collect();
        Ok(Self::new(self.x0.clone(), v, t))
    }

    pub fn add(&self, o: &PowerSeries) -> Result<PowerSeries> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &PowerSeries) -> Result<PowerSeries> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn neg(&self) -> PowerSeries {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> PowerSeries {
        let v = self.coeffs.iter().map(|a| a * c).collect();
        Self::new(self.x0.clone(), v, self.trunc)
    }

    pub fn add_constant(&self, c: &Q) -> PowerSeries {
        let mut v = self.coeffs.clone();
        if v.is_empty() {
            v.push(Q::zero());
        }
        v[0] = &v[0] + c;
        Self::new(self.x0.clone(), v, self.trunc)
    }

    pub fn mul(&self, o: &PowerSeries) -> Result<PowerSeries> {
        self.check_base(o)?;
        let t = min_trunc(self.trunc, o.trunc);
        let len = match t {
            Some(n) => n + 1,
            None => (self.coeffs.len() + o.coeffs.len()).saturating_sub(1),
        };
        let mut v = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Ok(Self::new(self.x0.clone(), v, t))
    }

    fn require_trunc(&self, op: &str) -> Result<usize> {
        self.trunc.ok_or_else(|| {
            Error::domain(format!("{op} of an exact polynomial needs a truncation order"))
        })
    }

    pub fn recip(&self) -> Result<PowerSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::domain("reciprocal of a series with zero constant term"));
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::constant(self.x0.clone(), c0.recip()));
        }
        let n = self.require_trunc("reciprocal")?;
        let inv0 = c0.recip();
        let mut g = vec![inv0.clone()];
        for k in 1..=n {
            let mut s = Q::zero();
            for j in 1..=k {
                let h = &self.coeffs[j];
                if !h.is_zero() {
                    s += h * &g[k - j];
                }
            }
            g.push(-s * &inv0);
        }
        Ok(Self::truncated(self.x0.clone(), g, n))
    }

    pub fn div(&self, o: &PowerSeries) -> Result<PowerSeries> {
        self.mul(&o.recip()?)
    }

    /// Multiplicity of the zero at `x0`: index of the first nonzero coefficient.
    /// `None` when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_identically_zero(&self) -> bool {
        self.is_exact() && self.coeffs.is_empty()
    }

    /// Divides by `(x - x0)^m`; the first `m` coefficients must vanish.
    pub fn shift_down(&self, m: usize) -> Result<PowerSeries> {
        if self.coeffs.iter().take(m).any(|c| !c.is_zero()) {
            return Err(Error::domain("shift_down across a nonzero coefficient"));
        }
        let t = match self.trunc {
            Some(n) if n < m => {
                return Err(Error::TruncationInconclusive(format!(
                    "cannot divide by (x-x0)^{m} at truncation order {n}"
                )))
            }
            Some(n) => Some(n - m),
            None => None,
        };
        let v = self.coeffs.iter().skip(m).cloned().collect();
        Ok(Self::new(self.x0.clone(), v, t))
    }

    pub fn shift_up(&self, m: usize) -> PowerSeries {
        let mut v = vec![Q::zero(); m];
        v.extend(self.coeffs.iter().cloned());
        Self::new(self.x0.clone(), v, self.trunc.map(|n| n + m))
    }

    pub fn derivative(&self) -> PowerSeries {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rational::qi(k as i64))
            .collect();
        let t = self.trunc.map(|n| n.saturating_sub(1));
        Self::new(self.x0.clone(), v, t)
    }

    /// Antiderivative with value `constant` at `x0`.
    pub fn integral(&self, constant: Q) -> PowerSeries {
        let mut v = vec![constant];
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c / rational::qi(k as i64 + 1));
        }
        Self::new(self.x0.clone(), v, self.trunc.map(|n| n + 1))
    }

    /// `self^alpha` for a series with constant term 1, principal branch.
    ///
    /// Uses the recurrence `k h0 g_k = sum_{j=1..k} ((alpha+1) j - k) h_j g_{k-j}`.
    pub fn pow(&self, alpha: &Q) -> Result<PowerSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::domain("series_pow requires constant term 1"));
        }
        if alpha.is_integer() && !alpha.is_negative() && self.is_exact() {
            let e = alpha.to_integer().to_usize().ok_or_else(|| Error::domain("exponent too large"))?;
            let mut acc = Self::one(self.x0.clone());
            for _ in 0..e {
                acc = acc.mul(self)?;
            }
            return Ok(acc);
        }
        let n = self.require_trunc("series_pow")?;
        let a1 = alpha + Q::one();
        let mut g = vec![Q::one()];
        for k in 1..=n {
            let kq = rational::qi(k as i64);
            let mut s = Q::zero();
            for j in 1..=k {
                let h = &self.coeffs[j];
                if h.is_zero() {
                    continue;
                }
                let w = &a1 * rational::qi(j as i64) - &kq;
                s += w * h * &g[k - j];
            }
            g.push(s / kq);
        }
        Ok(Self::truncated(self.x0.clone(), g, n))
    }

    /// Principal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<PowerSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::domain("series_log requires constant term 1"));
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::zero(self.x0.clone()));
        }
        let n = self.require_trunc("series_log")?;
        let mut l = vec![Q::zero()];
        for k in 1..=n {
            let mut s = rational::qi(k as i64) * &self.coeffs[k];
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                let h = &self.coeffs[k - j];
                if !h.is_zero() && !lj.is_zero() {
                    s -= rational::qi(j as i64) * lj * h;
                }
            }
            l.push(s / rational::qi(k as i64));
        }
        Ok(Self::truncated(self.x0.clone(), l, n))
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<PowerSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::domain("series_exp requires constant term 0"));
        }
        if self.is_identically_zero() {
            return Ok(Self::one(self.x0.clone()));
        }
        let n = self.require_trunc("series_exp")?;
        let mut g = vec![Q::one()];
        for k in 1..=n {
            let mut s = Q::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    s += rational::qi(j as i64) * a * &g[k - j];
                }
            }
            g.push(s / rational::qi(k as i64));
        }
        Ok(Self::truncated(self.x0.clone(), g, n))
    }

    /// `(sin s, cos s)` for `s` with constant term 0; with `hyperbolic`, `(sinh s, cosh s)`.
    pub fn sin_cos(&self, hyperbolic: bool) -> Result<(PowerSeries, PowerSeries)> {
        if !self.constant_term().is_zero() {
            return Err(Error::domain("trigonometric series require constant term 0"));
        }
        let n = self.require_trunc("sin/cos")?;
        let mut sn = vec![Q::zero()];
        let mut cs = vec![Q::one()];
        for k in 1..=n {
            let mut a = Q::zero();
            let mut b = Q::zero();
            for j in 1..=k {
                let sj = &self.coeffs[j];
                if sj.is_zero() {
                    continue;
                }
                let w = rational::qi(j as i64) * sj;
                a += &w * &cs[k - j];
                b += &w * &sn[k - j];
            }
            let kq = rational::qi(k as i64);
            sn.push(a / &kq);
            cs.push(if hyperbolic { b / kq } else { -b / kq });
        }
        Ok((
            Self::truncated(self.x0.clone(), sn, n),
            Self::truncated(self.x0.clone(), cs, n),
        ))
    }

    /// Exact value at a rational point; only for exact polynomials.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        if !self.is_exact() {
            return Err(Error::domain("exact evaluation of a truncated series"));
        }
        let t = x - &self.x0;
        Ok(self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * &t + c))
    }

    /// Partial sum at a complex point.
    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let t = x - Complex64::new(rational::to_f64(&self.x0), 0.0);
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + rational::to_f64(c))
    }

    /// Coefficientwise agreement on the common known range.
    pub fn agrees_with(&self, o: &PowerSeries) -> bool {
        if self.x0 != o.x0 {
            return false;
        }
        let len = match min_trunc(self.trunc, o.trunc) {
            Some(n) => n + 1,
            None => self.coeffs.len().max(o.coeffs.len()),
        };
        (0..len).all(|k| self.coeff(k) == o.coeff(k))
    }

    /// Certified equality: definite when both are exact or they differ within the
    /// known range, otherwise `TruncationInconclusive`.
    pub fn certified_eq(&self, o: &PowerSeries) -> Result<bool> {
        if self.x0 != o.x0 {
            return Ok(false);
        }
        if !self.agrees_with(o) {
            return Ok(false);
        }
        if self.is_exact() && o.is_exact() {
            return Ok(true);
        }
        Err(Error::TruncationInconclusive(format!(
            "series agree to order {} but equality beyond it is unknown",
            self.span().min(o.span()).saturating_sub(1)
        )))
    }

    fn variable_name(&self) -> String {
        if self.x0.is_zero() {
            "x".to_string()
        } else if self.x0.is_negative() {
            format!("(x+{})", rational::render(&-&self.x0))
        } else {
            format!("(x-{})", rational::render(&self.x0))
        }
    }
}

pub(crate) fn render_terms(coeffs: &[Q], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = match k {
            0 => rational::render(&a),
            _ => {
                let v = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                if a.is_one() {
                    v
                } else {
                    format!("{}*{v}", rational::render(&a))
                }
            }
        };
        out.push_str(&body);
    }
    out
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.variable_name();
        let body = render_terms(&self.coeffs, &var);
        match self.trunc {
            Some(n) => {
                if body.is_empty() {
                    write!(f, "O({var}^{})", n + 1)
                } else {
                    write!(f, "{body} + O({var}^{})", n + 1)
                }
            }
            None if body.is_empty() => write!(f, "0"),
            None => write!(f, "{body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn ser(v: &[(i64, i64)], n: usize) -> PowerSeries {
        PowerSeries::truncated(Q::zero(), v.iter().map(|&(a, b)| q(a, b)).collect(), n)
    }

    #[test]
    fn pow_binomial_exact() {
        let p = PowerSeries::exact(Q::zero(), vec![qi(1), qi(1)]);
        let c = p.pow(&qi(3)).unwrap();
        assert_eq!(c.coeffs(), &[qi(1), qi(3), qi(3), qi(1)]);
        assert!(c.is_exact());
    }

    #[test]
    fn log_one_plus_x() {
        let l = ser(&[(1, 1), (1, 1)], 6).log().unwrap();
        let want: Vec<Q> = (0..=6)
            .map(|k| if k == 0 { Q::zero() } else { q(if k % 2 == 1 { 1 } else { -1 }, k) })
            .collect();
        assert_eq!(l.coeffs(), &want[..]);
    }

    #[test]
    fn exp_log_inverse() {
        let s = ser(&[(1, 1), (1, 1)], 12);
        let back = s.log().unwrap().exp().unwrap();
        assert!(back.agrees_with(&s));
    }

    #[test]
    fn fractional_pow_squares_back() {
        let s = ser(&[(1, 1), (-1, 1)], 10);
        let r = s.pow(&q(1, 2)).unwrap();
        assert_eq!(r.coeff(2), q(-1, 8));
        assert!(r.mul(&r).unwrap().agrees_with(&s));
        let inv = s.pow(&q(-1, 2)).unwrap();
        assert_eq!(&inv.coeffs()[..4], &[qi(1), q(1, 2), q(3, 8), q(5, 16)]);
    }

    #[test]
    fn sin_cos_identity() {
        let x = ser(&[(0, 1), (1, 1)], 9);
        let (s, c) = x.sin_cos(false).unwrap();
        assert_eq!(s.coeff(3), q(-1, 6));
        assert_eq!(c.coeff(4), q(1, 24));
        let one = s.mul(&s).unwrap().add(&c.mul(&c).unwrap()).unwrap();
        assert!(one.agrees_with(&PowerSeries::one(Q::zero())));
        let (sh, ch) = x.sin_cos(true).unwrap();
        assert_eq!(sh.coeff(3), q(1, 6));
        assert_eq!(ch.coeff(2), q(1, 2));
    }

    #[test]
    fn base_point_mismatch_is_domain_error() {
        let a = PowerSeries::one(Q::zero());
        let b = PowerSeries::one(Q::one());
        assert!(matches!(a.add(&b), Err(Error::Domain(_))));
    }

    #[test]
    fn truncation_tracks_minimum() {
        let a = ser(&[(1, 1), (2, 1)], 5);
        let b = ser(&[(1, 1)], 3);
        assert_eq!(a.mul(&b).unwrap().trunc(), Some(3));
        assert_eq!(a.derivative().trunc(), Some(4));
        assert_eq!(a.integral(Q::zero()).trunc(), Some(6));
    }

    #[test]
    fn certified_equality() {
        let z = PowerSeries::zero(Q::zero());
        assert_eq!(z.certified_eq(&PowerSeries::zero(Q::zero())), Ok(true));
        let t = ser(&[], 4);
        assert!(matches!(t.certified_eq(&z), Err(Error::TruncationInconclusive(_))));
        assert_eq!(ser(&[(1, 1)], 4).certified_eq(&z), Ok(false));
    }

    #[test]
    fn rendering() {
        let p = PowerSeries::exact(Q::zero(), vec![q(1, 2), qi(1), qi(-1)]);
        assert_eq!(p.to_string(), "1/2 + x - x^2");
        let s = PowerSeries::truncated(qi(1), vec![qi(1), q(1, 2)], 2);
        assert_eq!(s.to_string(), "1 + 1/2*(x-1) + O((x-1)^3)");
    }
}
