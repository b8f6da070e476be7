use std::collections::BTreeMap;
use std::fmt;

use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Q};

pub type CQ = Complex<Q>;

pub fn cq(re: Q, im: Q) -> CQ {
    Complex::new(re, im)
}

pub fn cq_real(re: Q) -> CQ {
    Complex::new(re, Q::zero())
}

pub fn render_cq(z: &CQ) -> String {
    if z.im.is_zero() {
        return rational::render(&z.re);
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!("{}{}{}i", rational::render(&z.re), sign, rational::render(&z.im.abs()))
}

/// Finite sum `sum_k c_k e^{ikx}` with exact complex rational amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPolynomial {
    modes: BTreeMap<i64, CQ>,
}

impl TrigPolynomial {
    pub fn new(modes: impl IntoIterator<Item = (i64, CQ)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in modes {
            let e: &mut CQ = map.entry(k).or_insert_with(CQ::zero);
            *e = &*e + c;
        }
        map.retain(|_, c: &mut CQ| !c.is_zero());
        TrigPolynomial { modes: map }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CQ) -> Self {
        Self::new([(0, c)])
    }

    pub fn exp_ikx(k: i64) -> Self {
        Self::new([(k, CQ::one())])
    }

    pub fn cos_kx(k: i64) -> Self {
        let h = cq_real(rational::q(1, 2));
        Self::new([(k, h.clone()), (-k, h)])
    }

    pub fn sin_kx(k: i64) -> Self {
        // (e^{ikx} - e^{-ikx}) / 2i
        let a = cq(Q::zero(), rational::q(-1, 2));
        let b = cq(Q::zero(), rational::q(1, 2));
        Self::new([(k, a), (-k, b)])
    }

    pub fn mode(&self, k: i64) -> CQ {
        self.modes.get(&k).cloned().unwrap_or_else(CQ::zero)
    }

    pub fn modes(&self) -> &BTreeMap<i64, CQ> {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn max_mode(&self) -> Option<u64> {
        self.modes.keys().map(|k| k.unsigned_abs()).max()
    }

    /// Smallest `|k|` carrying a nonzero mode.
    pub fn min_mode(&self) -> Option<u64> {
        self.modes.keys().map(|k| k.unsigned_abs()).min()
    }

    pub fn add(&self, o: &TrigPolynomial) -> Self {
        Self::new(self.modes.iter().chain(o.modes.iter()).map(|(k, c)| (*k, c.clone())))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.modes.iter().map(|(k, c)| (*k, -c.clone())))
    }

    pub fn sub(&self, o: &TrigPolynomial) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &CQ) -> Self {
        Self::new(self.modes.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn mul(&self, o: &TrigPolynomial) -> Self {
        let mut terms = Vec::new();
        for (a, ca) in &self.modes {
            for (b, cb) in &o.modes {
                terms.push((a + b, ca * cb));
            }
        }
        Self::new(terms)
    }

    pub fn without_modes(&self, ks: &[i64]) -> Self {
        Self::new(
            self.modes
                .iter()
                .filter(|(k, _)| !ks.contains(k))
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.modes.iter().fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
            let z = Complex64::new(rational::to_f64(&c.re), rational::to_f64(&c.im));
            acc + z * Complex64::from_polar(1.0, *k as f64 * t)
        })
    }
}

impl fmt::Display for TrigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .modes
            .iter()
            .map(|(k, c)| match k {
                0 => format!("({})", render_cq(c)),
                _ => format!("({})e^({}ix)", render_cq(c), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
