use num_traits::{One, Zero};

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::series::polynomial::Polynomial;
use crate::system::ExpansionSystem;

/// Exact test of `q >= 0` on `[0,1]`.
///
/// Sign changes of `q` in `(0,1)` happen exactly at roots of its odd-multiplicity
/// part; without such roots the sign on `(0,1)` is the sign at any nonroot point.
pub fn nonnegative_on_unit(q: &Polynomial) -> bool {
    if q.is_zero() {
        return true;
    }
    let odd = q.odd_multiplicity_part();
    let mut crossings = odd.count_roots(&Q::zero(), &Q::one());
    if odd.eval(&Q::one()).is_zero() {
        crossings -= 1;
    }
    if crossings > 0 {
        return false;
    }
    let mut k = 2i64;
    loop {
        for j in 1..k {
            let t = rational::q(j, k);
            let v = q.eval(&t);
            if !v.is_zero() {
                return v > Q::zero();
            }
        }
        k += 1;
    }
}

/// `sup_{[0,1]} |p| <= 1`, decided exactly.
pub fn sup_norm_at_most_one(p: &Polynomial) -> bool {
    let one = Polynomial::constant(Q::one());
    nonnegative_on_unit(&one.sub(p)) && nonnegative_on_unit(&one.add(p))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Approximate `(sup |p|, argmax)` on `[0,1]` from the critical points of `p`.
pub fn approx_sup_norm(p: &Polynomial) -> (f64, f64) {
    let dp = p.derivative();
    let mut cands = vec![0.0, 1.0];
    let n = 4096;
    let mut prev = dp.eval_f64(0.0);
    for k in 1..=n {
        let x = k as f64 / n as f64;
        let v = dp.eval_f64(x);
        if v == 0.0 {
            cands.push(x);
        } else if (prev < 0.0) != (v < 0.0) && prev != 0.0 {
            cands.push(bisect(|t| dp.eval_f64(t), (k - 1) as f64 / n as f64, x));
        }
        prev = v;
    }
    cands
        .into_iter()
        .map(|x| (p.eval_f64(x).abs(), x))
        .fold((f64::NEG_INFINITY, 0.0), |best, c| if c.0 > best.0 { c } else { best })
}

/// Taylor expansion at 0 of polynomials restricted to
/// `S_i = { y : sup_{[0,1]} |E^j y| <= 1 for all j >= 0 }`.
///
/// The restriction makes `F` non-surjective, so convergents can be improper.
#[derive(Debug, Clone, Default)]
pub struct NormRestrictedTaylor;

impl NormRestrictedTaylor {
    pub fn new() -> Self {
        NormRestrictedTaylor
    }

    fn shift(p: &Polynomial) -> Polynomial {
        Polynomial::new(p.coeffs().iter().skip(1).cloned().collect())
    }

    /// `y` and all of its expansion images have sup-norm at most 1.
    pub fn admissible(p: &Polynomial) -> bool {
        let mut cur = p.clone();
        loop {
            if !sup_norm_at_most_one(&cur) {
                return false;
            }
            if cur.is_zero() {
                return true;
            }
            cur = Self::shift(&cur);
        }
    }
}

impl ExpansionSystem for NormRestrictedTaylor {
    fn id(&self) -> String {
        "norm-fixture".into()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Polynomial
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        CoefficientKind::Scalar
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::Polynomial(Polynomial::zero())
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(self.step(level, y)?.0)
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        Ok(self.step(level, y)?.1)
    }

    fn step(&self, _level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        let p = y.as_polynomial()?;
        if !sup_norm_at_most_one(p) {
            return Err(Error::domain(format!("{p} has sup-norm above 1 on [0,1]")));
        }
        Ok((CoefficientValue::Scalar(p.coeff(0)), Element::Polynomial(Self::shift(p))))
    }

    fn reconstruct(&self, _level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let c = c.scalar()?;
        let tail = y.as_polynomial()?;
        let cand = Polynomial::x().mul(tail).add(&Polynomial::constant(c.clone()));
        Ok(Self::admissible(&cand).then_some(Element::Polynomial(cand)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn fixture() -> Polynomial {
        Polynomial::new(vec![q(1, 2), qi(1), qi(-1), qi(1), qi(-1)])
    }

    #[test]
    fn exact_norm_decisions() {
        assert!(sup_norm_at_most_one(&fixture()));
        assert!(!sup_norm_at_most_one(&Polynomial::new(vec![q(1, 2), qi(1)])));
        assert!(sup_norm_at_most_one(&Polynomial::new(vec![q(1, 2), qi(1), qi(-1)])));
        // touches 1 at an interior double root: 1 - (2x-1)^2 has max exactly 1
        let touch = Polynomial::from_ints(&[0, 4, -4]);
        assert!(sup_norm_at_most_one(&touch));
        assert!(!sup_norm_at_most_one(&touch.scale(&q(101, 100))));
    }

    #[test]
    fn approximate_norm_of_fixture() {
        let (n, at) = approx_sup_norm(&fixture());
        assert!((n - 0.826_446_776_523_59).abs() < 1e-9, "{n}");
        assert!((at - 0.605_829_586_188_268_3).abs() < 1e-9, "{at}");
        let (n2, _) = approx_sup_norm(&Polynomial::new(vec![q(1, 2), qi(1)]));
        assert!((n2 - 1.5).abs() < 1e-12);
    }
}
