//! The expansion-system contract and the generic operations built on it.

use std::fmt;
use std::sync::Arc;

use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};

/// Order on a coefficient space used when comparing `F_i` images lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientOrder {
    Natural,
    Reversed,
}

/// A level-indexed family of projections `P_i`, expansions `E_i` and partial
/// inverses of `F_i = (P_i, E_i)`.
///
/// Invariants: `expand(i, neutral(i)) == neutral(i+1)`, and
/// `reconstruct(i, project(i, y), expand(i, y)) == Some(y)` for every admissible `y`.
/// `reconstruct` returns `Ok(None)` when `(c, y')` lies outside the image of `F_i`.
pub trait ExpansionSystem: Send + Sync {
    fn id(&self) -> String;
    fn element_kind(&self) -> ElementKind;
    fn coefficient_kind(&self) -> CoefficientKind;
    fn neutral(&self, level: usize) -> Element;
    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue>;
    fn expand(&self, level: usize, y: &Element) -> Result<Element>;
    fn reconstruct(
        &self,
        level: usize,
        c: &CoefficientValue,
        y: &Element,
    ) -> Result<Option<Element>>;

    /// `F_i(y)`; systems override this when projection and expansion share work.
    fn step(&self, level: usize, y: &Element) -> Result<(CoefficientValue, Element)> {
        Ok((self.project(level, y)?, self.expand(level, y)?))
    }

    fn is_neutral(&self, level: usize, y: &Element) -> Result<bool> {
        y.certified_eq(&self.neutral(level))
    }

    fn coefficient_order(&self) -> CoefficientOrder {
        CoefficientOrder::Natural
    }
}

pub type SystemRef = Arc<dyn ExpansionSystem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientCode {
    pub system_id: String,
    pub values: Vec<CoefficientValue>,
}

impl CoefficientCode {
    pub fn prefix(&self, n: usize) -> &[CoefficientValue] {
        &self.values[..n.min(self.values.len())]
    }
}

impl fmt::Display for CoefficientCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Proper,
    ImproperAt(usize),
}

impl Verdict {
    pub fn is_proper(&self) -> bool {
        matches!(self, Verdict::Proper)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proper => write!(f, "proper"),
            Verdict::ImproperAt(i) => write!(f, "improper@{i}"),
        }
    }
}

/// Backward reconstruction from `neutral(n)`.
///
/// `stages[i]` holds `y_i^[n]`; entries below an improper level are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTrace {
    pub n: usize,
    pub stages: Vec<Option<Element>>,
    pub verdict: Verdict,
}

impl ConvergentTrace {
    pub fn value(&self) -> Option<&Element> {
        match self.verdict {
            Verdict::Proper => self.stages[0].as_ref(),
            Verdict::ImproperAt(_) => None,
        }
    }

    pub fn into_value(self) -> Result<Element> {
        match self.verdict {
            Verdict::Proper => self.stages.into_iter().next().flatten().ok_or(Error::Improper(0)),
            Verdict::ImproperAt(i) => Err(Error::Improper(i)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderResult {
    Finite(usize),
    InfiniteUpTo(usize),
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite(n) => write!(f, "finite {n}"),
            OrderResult::InfiniteUpTo(d) => write!(f, "infinite-up-to {d}"),
        }
    }
}

fn check_kind(sys: &dyn ExpansionSystem, y: &Element) -> Result<()> {
    if y.kind() != sys.element_kind() {
        return Err(Error::domain(format!(
            "system {} expects {:?} elements, got {y}",
            sys.id(),
            sys.element_kind()
        )));
    }
    Ok(())
}

/// Trajectory `y_0..=y_depth` together with the coefficients `c_0..c_{depth-1}`.
pub fn walk(
    sys: &dyn ExpansionSystem,
    y: &Element,
    depth: usize,
) -> Result<(Vec<Element>, Vec<CoefficientValue>)> {
    check_kind(sys, y)?;
    let mut states = Vec::with_capacity(depth + 1);
    let mut coeffs = Vec::with_capacity(depth);
    states.push(y.clone());
    for i in 0..depth {
        let (c, next) = sys.step(i, &states[i])?;
        coeffs.push(c);
        states.push(next);
    }
    Ok((states, coeffs))
}

pub fn coefficient_code(
    sys: &dyn ExpansionSystem,
    y: &Element,
    depth: usize,
) -> Result<CoefficientCode> {
    let (_, values) = walk(sys, y, depth)?;
    Ok(CoefficientCode { system_id: sys.id(), values })
}

pub fn trajectory(sys: &dyn ExpansionSystem, y: &Element, depth: usize) -> Result<Vec<Element>> {
    Ok(walk(sys, y, depth)?.0)
}

/// The `n`-th convergent of a code prefix. Improperness is reported in the verdict.
pub fn convergent(
    sys: &dyn ExpansionSystem,
    code: &[CoefficientValue],
    n: usize,
) -> Result<ConvergentTrace> {
    if code.len() < n {
        return Err(Error::domain(format!(
            "convergent of order {n} needs {n} coefficients, got {}",
            code.len()
        )));
    }
    let mut stages: Vec<Option<Element>> = vec![None; n + 1];
    stages[n] = Some(sys.neutral(n));
    for i in (0..n).rev() {
        let next = stages[i + 1].as_ref().ok_or(Error::Improper(i + 1))?;
        match sys.reconstruct(i, &code[i], next)? {
            Some(y) => stages[i] = Some(y),
            None => return Ok(ConvergentTrace { n, stages, verdict: Verdict::ImproperAt(i) }),
        }
    }
    Ok(ConvergentTrace { n, stages, verdict: Verdict::Proper })
}

pub fn order(sys: &dyn ExpansionSystem, y: &Element, max_depth: usize) -> Result<OrderResult> {
    check_kind(sys, y)?;
    let mut cur = y.clone();
    for i in 0..=max_depth {
        if sys.is_neutral(i, &cur)? {
            return Ok(OrderResult::Finite(i));
        }
        if i < max_depth {
            cur = sys.expand(i, &cur)?;
        }
    }
    Ok(OrderResult::InfiniteUpTo(max_depth))
}

pub fn properness_profile(
    sys: &dyn ExpansionSystem,
    y: &Element,
    n_max: usize,
) -> Result<Vec<(usize, Verdict)>> {
    let code = coefficient_code(sys, y, n_max)?;
    (0..=n_max)
        .map(|n| Ok((n, convergent(sys, &code.values, n)?.verdict)))
        .collect()
}

pub fn roundtrip_check(sys: &dyn ExpansionSystem, y: &Element, depth: usize) -> Result<bool> {
    let (states, coeffs) = walk(sys, y, depth)?;
    for i in 0..depth {
        match sys.reconstruct(i, &coeffs[i], &states[i + 1])? {
            Some(back) if back.consistent_with(&states[i]) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Theorem-level head coincidence: a proper `y^[n]` has the same first `n`
/// coefficients as `y`. Returns `Ok(None)` when the convergent is improper.
pub fn code_head_coincides(
    sys: &dyn ExpansionSystem,
    y: &Element,
    n: usize,
) -> Result<Option<bool>> {
    let code = coefficient_code(sys, y, n)?;
    let trace = convergent(sys, &code.values, n)?;
    let Some(yn) = trace.value() else {
        return Ok(None);
    };
    let code_n = coefficient_code(sys, yn, n)?;
    Ok(Some(code_n.values == code.values))
}
