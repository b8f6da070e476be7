use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Q};
use crate::series::power_series::render_terms;

/// Exact rational polynomial in the monomial basis; trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&a| rational::qi(a)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn powi(&self, e: usize) -> Polynomial {
        (0..e).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational::to_f64(c))
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + rational::to_f64(c))
    }

    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::qi(k as i64))
                .collect(),
        )
    }

    /// `p(x + a)` by Horner's scheme in the shifted variable.
    pub fn shift(&self, a: &Q) -> Polynomial {
        let lin = Self::new(vec![a.clone(), Q::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Forward difference `p(x+1) - p(x)`.
    pub fn forward_difference(&self) -> Polynomial {
        self.shift(&Q::one()).sub(self)
    }

    /// Backward difference `p(x) - p(x-1)`.
    pub fn backward_difference(&self) -> Polynomial {
        self.sub(&self.shift(&-Q::one()))
    }

    /// `binom(x, k) = x (x-1) ... (x-k+1) / k!`.
    pub fn falling_basis(k: usize) -> Polynomial {
        let mut p = Self::constant(Q::one());
        for j in 0..k {
            p = p.mul(&Self::new(vec![-rational::qi(j as i64), Q::one()]));
        }
        p.scale(&Q::from_integer(rational::factorial(k)).recip())
    }

    /// `x (x+1) ... (x+k-1) / k!`.
    pub fn rising_basis(k: usize) -> Polynomial {
        let mut p = Self::constant(Q::one());
        for j in 0..k {
            p = p.mul(&Self::new(vec![rational::qi(j as i64), Q::one()]));
        }
        p.scale(&Q::from_integer(rational::factorial(k)).recip())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut qv = vec![Q::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            qv[k] = c;
        }
        r.truncate(dd);
        (Self::new(qv), Self::new(r))
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, o: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the squarefree factors of odd multiplicity (Yun's algorithm), monic.
    pub fn odd_multiplicity_part(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return Self::constant(Q::one());
        }
        let d = self.derivative();
        let mut a = self.gcd(&d);
        let mut b = self.div_rem(&a).0;
        let mut c = d.div_rem(&a).0;
        let mut dpoly = c.sub(&b.derivative());
        let mut out = Self::constant(Q::one());
        let mut mult = 1usize;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&dpoly);
            if mult % 2 == 1 {
                out = out.mul(&a);
            }
            b = b.div_rem(&a).0;
            c = dpoly.div_rem(&a).0;
            dpoly = c.sub(&b.derivative());
            mult += 1;
        }
        out.monic()
    }

    /// Sturm sequence of a squarefree polynomial.
    pub fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        if self.is_zero() {
            return 0;
        }
        let sq = self.div_rem(&self.gcd(&self.derivative())).0;
        let seq = sq.sturm_sequence();
        let var = |x: &Q| {
            let signs: Vec<bool> = seq
                .iter()
                .map(|p| p.eval(x))
                .filter(|v| !v.is_zero())
                .map(|v| v.is_positive())
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        var(a).saturating_sub(var(b))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", render_terms(&self.coeffs, "x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn differences_of_square() {
        let p = Polynomial::from_ints(&[0, 0, 1]);
        assert_eq!(p.forward_difference(), Polynomial::from_ints(&[1, 2]));
        assert_eq!(p.backward_difference(), Polynomial::from_ints(&[-1, 2]));
    }

    #[test]
    fn bases_satisfy_difference_rules() {
        for k in 1..6 {
            assert_eq!(
                Polynomial::falling_basis(k).forward_difference(),
                Polynomial::falling_basis(k - 1)
            );
            assert_eq!(
                Polynomial::rising_basis(k).backward_difference(),
                Polynomial::rising_basis(k - 1)
            );
        }
    }

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_ints(&[-1, 0, 1]);
        let b = Polynomial::from_ints(&[1, 1]);
        let (quo, rem) = a.div_rem(&b);
        assert_eq!(quo, Polynomial::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&Polynomial::from_ints(&[-1, 1]).mul(&Polynomial::from_ints(&[2, 1]))), Polynomial::from_ints(&[-1, 1]));
    }

    #[test]
    fn odd_part_drops_squares() {
        // (x-1)^2 (x-2)^3 (x+1)
        let p = Polynomial::from_ints(&[-1, 1])
            .powi(2)
            .mul(&Polynomial::from_ints(&[-2, 1]).powi(3))
            .mul(&Polynomial::from_ints(&[1, 1]));
        let odd = p.odd_multiplicity_part();
        assert_eq!(odd, Polynomial::from_ints(&[-2, 1]).mul(&Polynomial::from_ints(&[1, 1])));
    }

    #[test]
    fn sturm_counts() {
        // roots 1/3, 1/2, 2
        let p = Polynomial::new(vec![q(-1, 3), Q::one()])
            .mul(&Polynomial::new(vec![q(-1, 2), Q::one()]))
            .mul(&Polynomial::from_ints(&[-2, 1]));
        assert_eq!(p.count_roots(&Q::zero(), &Q::one()), 2);
        assert_eq!(p.count_roots(&Q::zero(), &qi(2)), 3);
        assert_eq!(p.count_roots(&q(1, 2), &Q::one()), 0);
    }

    #[test]
    fn shift_and_reflect() {
        let p = Polynomial::from_ints(&[1, 2, 3]);
        assert_eq!(p.shift(&qi(1)).eval(&qi(2)), p.eval(&qi(3)));
        assert_eq!(p.reflect().eval(&qi(2)), p.eval(&qi(-2)));
        assert_eq!(p.to_string(), "1 + 2*x + 3*x^2");
    }
}
