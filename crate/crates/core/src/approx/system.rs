use num_traits::{One, Signed, Zero};

use crate::approx::config::{AsConfig, Nonlinearity, Transform};
use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::{self, NatOrInf, Q};
use crate::series::power_series::PowerSeries;
use crate::system::{coefficient_code, convergent, ExpansionSystem};

/// Multiplicity of the zero of a germ at its base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Multiplicity {
    pub value: NatOrInf,
    /// False when every known coefficient vanishes but the series is truncated.
    pub certain: bool,
}

impl Multiplicity {
    pub fn certified(self) -> Result<NatOrInf> {
        if self.certain {
            Ok(self.value)
        } else {
            Err(Error::TruncationInconclusive(
                "series vanishes to its truncation order; multiplicity unknown".into(),
            ))
        }
    }
}

pub fn multiplicity(y: &PowerSeries) -> Multiplicity {
    match y.valuation() {
        Some(m) => Multiplicity { value: NatOrInf::Finite(m), certain: true },
        None => Multiplicity { value: NatOrInf::Infinite, certain: y.is_exact() },
    }
}

/// The iterated-integral systems on germs.
///
/// With `T` the configured transform and `(c, m)` the leading coefficient and
/// multiplicity of `T y`, the expansion is `(T y / (c (x-x0)^m))^alpha_i`
/// (or its logarithm), and reconstruction inverts it by integration.
#[derive(Debug, Clone)]
pub struct ApproximationSystem {
    cfg: AsConfig,
}

fn is_nonneg_integer(q: &Q) -> bool {
    q.is_integer() && !q.is_negative()
}

impl ApproximationSystem {
    pub fn new(cfg: AsConfig) -> Result<Self> {
        if let Nonlinearity::Power(s) = &cfg.nonlinearity {
            s.validate(1)?;
        }
        Ok(ApproximationSystem { cfg })
    }

    pub fn config(&self) -> &AsConfig {
        &self.cfg
    }

    fn germ<'a>(&self, y: &'a Element) -> Result<&'a PowerSeries> {
        let s = y.as_series()?;
        if s.x0() != &self.cfg.x0 {
            return Err(Error::domain(format!(
                "germ at {} given to a system at {}",
                rational::render(s.x0()),
                rational::render(&self.cfg.x0)
            )));
        }
        Ok(s)
    }

    fn in_space(&self, s: &PowerSeries) -> bool {
        s.constant_term() == self.cfg.base_value()
    }

    fn base(&self) -> PowerSeries {
        PowerSeries::constant(self.cfg.x0.clone(), self.cfg.base_value())
    }

    fn alpha(&self, i: usize) -> Result<Q> {
        let a = self.cfg.alpha(i).unwrap_or_else(Q::one);
        if a.is_zero() {
            return Err(Error::domain(format!("alpha_{i} is zero")));
        }
        Ok(a)
    }

    /// `u^e` for a germ with constant term 1, staying exact when possible.
    fn power(&self, u: &PowerSeries, e: &Q) -> Result<PowerSeries> {
        if u.is_exact() && u.coeffs().len() == 1 {
            return Ok(u.clone());
        }
        if u.is_exact() && is_nonneg_integer(e) {
            // Degrees multiply level by level; beyond the working order exactness buys nothing.
            return Ok(self.cap_exact(u.pow(e)?));
        }
        u.ensure_order(self.cfg.order).pow(e)
    }

    fn cap_exact(&self, s: PowerSeries) -> PowerSeries {
        if s.is_exact() && s.coeffs().len() > self.cfg.order + 1 {
            s.with_order(self.cfg.order)
        } else {
            s
        }
    }

    fn cap(&self, s: PowerSeries) -> PowerSeries {
        match s.trunc() {
            Some(n) if n > self.cfg.order => s.with_order(self.cfg.order),
            _ => s,
        }
    }

    /// Nonlinearity applied to a normalized germ (constant term 1).
    fn forward_nonlinear(&self, i: usize, u: &PowerSeries) -> Result<PowerSeries> {
        match &self.cfg.nonlinearity {
            Nonlinearity::Power(_) => self.power(u, &self.alpha(i)?),
            Nonlinearity::LogExp => {
                if u.is_exact() && u.coeffs().len() == 1 {
                    return Ok(PowerSeries::zero(u.x0().clone()));
                }
                u.ensure_order(self.cfg.order).log()
            }
        }
    }

    fn inverse_nonlinear(&self, i: usize, y: &PowerSeries) -> Result<PowerSeries> {
        match &self.cfg.nonlinearity {
            Nonlinearity::Power(_) => self.power(y, &self.alpha(i)?.recip()),
            Nonlinearity::LogExp => {
                if y.is_identically_zero() {
                    return Ok(PowerSeries::one(y.x0().clone()));
                }
                y.ensure_order(self.cfg.order).exp()
            }
        }
    }

    fn make_coefficient(&self, b: Option<Q>, c: Q, m: NatOrInf) -> CoefficientValue {
        match b {
            Some(b) => CoefficientValue::As3 { b, c, m },
            None => CoefficientValue::As { c, m },
        }
    }

    /// Index through which any germ with this code prefix agrees with its
    /// convergent of the same order.
    ///
    /// Each level turns agreement through `K` of the tails into agreement through
    /// `K + m` (K) or `K + m + 1` (D, KD); the seed agrees through the constant term.
    /// A code that hits `m = inf` reproduces the germ exactly.
    pub fn agreement_index(&self, code: &[CoefficientValue]) -> usize {
        let lift = usize::from(self.cfg.transform != Transform::K);
        let mut k = 0usize;
        for c in code {
            let m = match c {
                CoefficientValue::As { m, .. } | CoefficientValue::As3 { m, .. } => *m,
                _ => return k,
            };
            match m {
                NatOrInf::Finite(m) => k += m + lift,
                NatOrInf::Infinite => return usize::MAX,
            }
        }
        k
    }

    /// Image of `y` under the configured transform, plus `b` for `KD`.
    fn transformed(&self, y: &PowerSeries) -> (Option<Q>, PowerSeries) {
        match self.cfg.transform {
            Transform::D => (None, y.derivative()),
            Transform::K => (None, y.add_constant(&-y.constant_term())),
            Transform::KD => {
                let d = y.derivative();
                let b = d.constant_term();
                (Some(b.clone()), d.add_constant(&-b))
            }
        }
    }

    /// The part of `F_i` that follows the transform: `(b, T y) -> (c, y_{i+1})`.
    pub(crate) fn step_transformed(
        &self,
        level: usize,
        b: Option<Q>,
        t: &PowerSeries,
    ) -> Result<(CoefficientValue, Element)> {
        let m = match multiplicity(t).certified()? {
            NatOrInf::Infinite => {
                let c = self.make_coefficient(b, Q::zero(), NatOrInf::Infinite);
                return Ok((c, self.neutral(level + 1)));
            }
            NatOrInf::Finite(m) => m,
        };
        let c = t.coeff(m);
        let u = t.shift_down(m)?.scale(&c.recip());
        let next = self.forward_nonlinear(level, &u)?;
        Ok((self.make_coefficient(b, c, NatOrInf::Finite(m)), Element::Series(next)))
    }
}

impl ExpansionSystem for ApproximationSystem {
    fn id(&self) -> String {
        self.cfg.id()
    }

    fn element_kind(&self) -> ElementKind {
        ElementKind::Series
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        match self.cfg.transform {
            Transform::KD => CoefficientKind::As3,
            _ => CoefficientKind::As,
        }
    }

    fn neutral(&self, _level: usize) -> Element {
        Element::Series(self.base())
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        Ok(self.step(level, y)?.0)
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        Ok(self.step(level, y)?.1)
    }

    fn step(&self, level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        let s = self.germ(y)?;
        if !self.in_space(s) {
            return Err(Error::domain(format!(
                "germ has constant term {}, expected {}",
                rational::render(&s.constant_term()),
                rational::render(&self.cfg.base_value())
            )));
        }
        let (b, t) = self.transformed(s);
        self.step_transformed(level, b, &t)
    }

    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let (b, c, m) = match (c, self.cfg.transform) {
            (CoefficientValue::As3 { b, c, m }, Transform::KD) => (Some(b), c, *m),
            (CoefficientValue::As { c, m }, Transform::D | Transform::K) => (None, c, *m),
            _ => return Ok(None),
        };
        let tail = self.germ(y)?;
        if !self.in_space(tail) {
            return Ok(None);
        }
        let x0 = self.cfg.x0.clone();
        let mut out = self.base();
        if let Some(b) = b {
            out = out.add(&PowerSeries::monomial(x0.clone(), 1, b.clone()))?;
        }
        let m = match m {
            NatOrInf::Infinite => {
                let ok = c.is_zero() && self.is_neutral(level + 1, y)?;
                return Ok(ok.then_some(Element::Series(out)));
            }
            NatOrInf::Finite(m) => m,
        };
        if c.is_zero() || (self.cfg.transform != Transform::D && m == 0) {
            return Ok(None);
        }
        let h = self.inverse_nonlinear(level, tail)?.shift_up(m).scale(c);
        let lifted = match self.cfg.transform {
            Transform::K => h,
            Transform::D | Transform::KD => h.integral(Q::zero()),
        };
        Ok(Some(Element::Series(self.cap(out.add(&lifted)?))))
    }
}

/// Checks that `y^[n]` reproduces the first `n-1` nonzero Taylor terms of `y`.
pub fn head_coincidence(sys: &ApproximationSystem, y: &PowerSeries, n: usize) -> Result<bool> {
    if n <= 1 {
        return Ok(true);
    }
    let elem = Element::Series(y.clone());
    let code = coefficient_code(sys, &elem, n)?;
    let yn = convergent(sys, &code.values, n)?.into_value()?;
    heads_agree(y, yn.as_series()?, n)
}

/// Outcome of one head-coincidence check in a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadCheck {
    Coincides,
    /// First mismatching index and the index through which agreement is forced
    /// by the code alone (see [`ApproximationSystem::agreement_index`]).
    Differs { at: usize, forced_through: usize },
    Improper,
    /// The code or the convergent needs coefficients beyond the configured order.
    Inconclusive,
}

/// `head_coincidence` for every `n <= n_max` from a single code computation.
///
/// Works at the smallest order in 16, 24, 32, ... up to the configured one that is
/// conclusive. Truncated arithmetic is exact on every coefficient it reports, so
/// the answer equals the one at the configured order; only the cost differs, and
/// coefficient heights grow with the order at every level.
pub fn head_coincidence_profile(sys: &ApproximationSystem, y: &PowerSeries, n_max: usize) -> Result<Vec<HeadCheck>> {
    let full = sys.cfg.order;
    let mut order = full.min(16);
    loop {
        let prof = if order == full {
            head_profile_at(sys, y, n_max)?
        } else {
            let lower = ApproximationSystem { cfg: sys.cfg.clone().with_order(order) };
            let y = if y.is_exact() && y.coeffs().len() <= order + 1 { y.clone() } else { y.with_order(order) };
            head_profile_at(&lower, &y, n_max)?
        };
        if order == full || !prof.contains(&HeadCheck::Inconclusive) {
            return Ok(prof);
        }
        order = (order + 8).min(full);
    }
}

fn inconclusive_as<T>(r: Result<T>, v: impl FnOnce(T) -> HeadCheck) -> Result<HeadCheck> {
    match r {
        Ok(t) => Ok(v(t)),
        Err(Error::TruncationInconclusive(_)) => Ok(HeadCheck::Inconclusive),
        Err(e) => Err(e),
    }
}

fn head_profile_at(sys: &ApproximationSystem, y: &PowerSeries, n_max: usize) -> Result<Vec<HeadCheck>> {
    // The code is known up to the first level whose multiplicity is uncertain.
    let mut code = Vec::with_capacity(n_max);
    let mut cur = Element::Series(y.clone());
    for i in 0..n_max {
        match sys.step(i, &cur) {
            Ok((c, next)) => {
                code.push(c);
                cur = next;
            }
            Err(Error::TruncationInconclusive(_)) => break,
            Err(e) => return Err(e),
        }
    }
    (0..=n_max)
        .map(|n| {
            if n > code.len() {
                return Ok(HeadCheck::Inconclusive);
            }
            if n <= 1 {
                return Ok(HeadCheck::Coincides);
            }
            let trace = match convergent(sys, &code, n) {
                Ok(t) => t,
                Err(Error::TruncationInconclusive(_)) => return Ok(HeadCheck::Inconclusive),
                Err(e) => return Err(e),
            };
            match trace.value() {
                Some(yn) => inconclusive_as(first_head_mismatch(y, yn.as_series()?, n), |m| match m {
                    None => HeadCheck::Coincides,
                    Some(at) => HeadCheck::Differs { at, forced_through: sys.agreement_index(&code[..n]) },
                }),
                None => Ok(HeadCheck::Improper),
            }
        })
        .collect()
}

fn heads_agree(y: &PowerSeries, yn: &PowerSeries, n: usize) -> Result<bool> {
    Ok(first_head_mismatch(y, yn, n)?.is_none())
}

fn first_head_mismatch(y: &PowerSeries, yn: &PowerSeries, n: usize) -> Result<Option<usize>> {
    let nonzero: Vec<usize> = y
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| k)
        .take(n - 1)
        .collect();
    if nonzero.len() < n - 1 && !y.is_exact() {
        return Err(Error::TruncationInconclusive(format!(
            "only {} nonzero terms known, need {}",
            nonzero.len(),
            n - 1
        )));
    }
    let last = nonzero.last().copied().unwrap_or(0);
    if yn.trunc().is_some_and(|t| t < last) {
        return Err(Error::TruncationInconclusive(format!(
            "convergent known to order {:?}, need {last}",
            yn.trunc()
        )));
    }
    Ok((0..=last).find(|&k| yn.coeff(k) != y.coeff(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn sqrt_inv(n: usize) -> PowerSeries {
        PowerSeries::truncated(Q::zero(), vec![qi(1), qi(-1)], n).pow(&q(-1, 2)).unwrap()
    }

    #[test]
    fn multiplicity_cases() {
        let p = PowerSeries::exact(Q::zero(), vec![qi(0), qi(0), qi(0), qi(1), qi(0), qi(-1)]);
        assert_eq!(multiplicity(&p).certified(), Ok(NatOrInf::Finite(3)));
        let z = PowerSeries::truncated(Q::zero(), vec![], 5);
        let m = multiplicity(&z);
        assert_eq!(m.value, NatOrInf::Infinite);
        assert!(!m.certain && m.certified().is_err());
        let s = PowerSeries::exact(Q::zero(), vec![qi(0), qi(7)]);
        assert_eq!(multiplicity(&s).value, NatOrInf::Finite(1));
    }

    #[test]
    fn neutral_fixed_and_inconclusive_tail() {
        let sys = ApproximationSystem::new(AsConfig::power(Transform::D, q(1, 2))).unwrap();
        let (c, e) = sys.step(0, &sys.neutral(0)).unwrap();
        assert_eq!(c, CoefficientValue::As { c: Q::zero(), m: NatOrInf::Infinite });
        assert_eq!(e, sys.neutral(1));
        let one_trunc = Element::Series(PowerSeries::truncated(Q::zero(), vec![qi(1)], 4));
        assert!(matches!(sys.step(0, &one_trunc), Err(Error::TruncationInconclusive(_))));
    }

    #[test]
    fn constant_term_convention_enforced() {
        let sys = ApproximationSystem::new(AsConfig::logexp(Transform::D)).unwrap();
        let bad = Element::Series(PowerSeries::exact(Q::zero(), vec![qi(1), qi(1)]));
        assert!(matches!(sys.step(0, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn sparse_germ_breaks_nonzero_count_but_not_forced_index() {
        let sys = ApproximationSystem::new(AsConfig::power(Transform::D, qi(-1))).unwrap();
        let y = PowerSeries::exact(
            Q::zero(),
            vec![qi(1), q(4, 3), q(4, 3), qi(2), qi(0), qi(0), qi(0), qi(-4)],
        );
        let prof = head_coincidence_profile(&sys, &y, 6).unwrap();
        assert!(prof[..6].iter().all(|c| *c == HeadCheck::Coincides));
        assert_eq!(prof[6], HeadCheck::Differs { at: 7, forced_through: 6 });
    }

    #[test]
    fn agreement_index_per_transform() {
        let c = |m| CoefficientValue::As { c: qi(1), m: NatOrInf::Finite(m) };
        let d = ApproximationSystem::new(AsConfig::power(Transform::D, qi(-1))).unwrap();
        let k = ApproximationSystem::new(AsConfig::power(Transform::K, qi(-1))).unwrap();
        assert_eq!(d.agreement_index(&[c(0), c(2)]), 4);
        assert_eq!(k.agreement_index(&[c(1), c(2)]), 3);
        let end = CoefficientValue::As { c: Q::zero(), m: NatOrInf::Infinite };
        assert_eq!(d.agreement_index(&[c(0), end]), usize::MAX);
    }

    #[test]
    fn terminating_code_is_inconclusive_under_truncation() {
        // exp(x) - 1 under LogExp: log of the normalised derivative is x, then the code ends,
        // which a truncated series cannot certify.
        let sys = ApproximationSystem::new(AsConfig::logexp(Transform::D).with_order(20)).unwrap();
        let y = PowerSeries::variable(Q::zero()).with_order(20).exp().unwrap().add_constant(&qi(-1));
        let prof = head_coincidence_profile(&sys, &y, 4).unwrap();
        assert_eq!(prof[2], HeadCheck::Coincides);
        assert_eq!(prof[4], HeadCheck::Inconclusive);
    }

    #[test]
    fn head_coincidence_on_inverse_sqrt() {
        let sys = ApproximationSystem::new(AsConfig::power(Transform::D, q(1, 2))).unwrap();
        for n in 0..5 {
            assert!(head_coincidence(&sys, &sqrt_inv(40), n).unwrap());
        }
    }
}
