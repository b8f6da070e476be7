//! Homomorphisms between expansion systems, checked on samples.
//!
//! A morphism is a pair of level-indexed maps `lambda_s(i, .)` on elements and
//! `lambda_c(i, .)` on coefficients. It is a homomorphism when it sends neutral
//! elements to neutral elements and commutes with every `E_i` and `P_i`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::approx::{ApproximationSystem, Transform};
use crate::element::{CoefficientKind, CoefficientValue, Element, ElementKind};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real as r;
use crate::system::{coefficient_code, convergent, ExpansionSystem, SystemRef};

pub type ElementMap = Arc<dyn Fn(usize, &Element) -> Result<Element> + Send + Sync>;
pub type CoefficientMap = Arc<dyn Fn(usize, &CoefficientValue) -> Result<CoefficientValue> + Send + Sync>;

#[derive(Clone)]
pub struct MorphismSpec {
    pub name: String,
    pub lambda_s: ElementMap,
    pub lambda_c: CoefficientMap,
    /// Inverse maps; present exactly when the morphism claims to be bijective.
    pub inverse: Option<(ElementMap, CoefficientMap)>,
}

impl fmt::Debug for MorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MorphismSpec")
            .field("name", &self.name)
            .field("bijective", &self.claims_bijective())
            .finish()
    }
}

impl MorphismSpec {
    pub fn new(
        name: impl Into<String>,
        lambda_s: impl Fn(usize, &Element) -> Result<Element> + Send + Sync + 'static,
        lambda_c: impl Fn(usize, &CoefficientValue) -> Result<CoefficientValue> + Send + Sync + 'static,
    ) -> Self {
        MorphismSpec { name: name.into(), lambda_s: Arc::new(lambda_s), lambda_c: Arc::new(lambda_c), inverse: None }
    }

    pub fn with_inverse(
        mut self,
        inv_s: impl Fn(usize, &Element) -> Result<Element> + Send + Sync + 'static,
        inv_c: impl Fn(usize, &CoefficientValue) -> Result<CoefficientValue> + Send + Sync + 'static,
    ) -> Self {
        self.inverse = Some((Arc::new(inv_s), Arc::new(inv_c)));
        self
    }

    pub fn identity() -> Self {
        MorphismSpec::new("identity", |_, y| Ok(y.clone()), |_, c| Ok(c.clone()))
            .with_inverse(|_, y| Ok(y.clone()), |_, c| Ok(c.clone()))
    }

    pub fn claims_bijective(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply_s(&self, level: usize, y: &Element) -> Result<Element> {
        (self.lambda_s)(level, y)
    }

    pub fn apply_c(&self, level: usize, c: &CoefficientValue) -> Result<CoefficientValue> {
        (self.lambda_c)(level, c)
    }

    /// The inverse morphism, when one was supplied.
    pub fn inverted(&self) -> Option<MorphismSpec> {
        let (s, c) = self.inverse.clone()?;
        Some(MorphismSpec {
            name: format!("inverse({})", self.name),
            lambda_s: s,
            lambda_c: c,
            inverse: Some((self.lambda_s.clone(), self.lambda_c.clone())),
        })
    }

    /// `next` after `self`.
    pub fn then(&self, next: &MorphismSpec) -> MorphismSpec {
        let (s1, c1, s2, c2) = (self.lambda_s.clone(), self.lambda_c.clone(), next.lambda_s.clone(), next.lambda_c.clone());
        let inverse = match (&self.inverse, &next.inverse) {
            (Some((is1, ic1)), Some((is2, ic2))) => {
                let (is1, ic1, is2, ic2) = (is1.clone(), ic1.clone(), is2.clone(), ic2.clone());
                let s: ElementMap = Arc::new(move |i, y| is1(i, &is2(i, y)?));
                let c: CoefficientMap = Arc::new(move |i, v| ic1(i, &ic2(i, v)?));
                Some((s, c))
            }
            _ => None,
        };
        MorphismSpec {
            name: format!("{} then {}", self.name, next.name),
            lambda_s: Arc::new(move |i, y| s2(i, &s1(i, y)?)),
            lambda_c: Arc::new(move |i, v| c2(i, &c1(i, v)?)),
            inverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `lambda_s(i, nu_i) = nu'_i`.
    Neutral,
    /// `lambda_s(i+1, E_i y) = E'_i lambda_s(i, y)`.
    Expand,
    /// `lambda_c(i, P_i y) = P'_i lambda_s(i, y)`.
    Project,
    /// The supplied inverse undoes the forward map.
    Inverse,
    /// A map or a system step raised an error.
    Evaluation,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Equation::Neutral => "hom-neutral",
            Equation::Expand => "hom-E",
            Equation::Project => "hom-P",
            Equation::Inverse => "inverse",
            Equation::Evaluation => "evaluation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub equation: Equation,
    pub level: usize,
    /// Index into the sample list; `None` for neutral-element checks.
    pub sample: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub morphism: String,
    pub samples: usize,
    pub depth: usize,
    pub checks: usize,
    pub violation: Option<Violation>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for HomomorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(
                f,
                "{}: no violation found on {} samples to depth {} ({} checks)",
                self.morphism, self.samples, self.depth, self.checks
            ),
            Some(v) => {
                write!(f, "{}: {} violated at level {}", self.morphism, v.equation, v.level)?;
                if let Some(k) = v.sample {
                    write!(f, " on sample {k}")?;
                }
                write!(f, ": {}", v.detail)
            }
        }
    }
}

/// Equality used by the checks; truncated series compare on their common range.
fn same(a: &Element, b: &Element) -> bool {
    match (a, b) {
        (Element::Series(x), Element::Series(y)) => x.agrees_with(y),
        _ => a.certified_eq(b).unwrap_or(false),
    }
}

struct Checker<'a> {
    checks: usize,
    spec: &'a MorphismSpec,
}

impl Checker<'_> {
    fn fail<T>(equation: Equation, level: usize, sample: Option<usize>, detail: String) -> std::result::Result<T, Violation> {
        Err(Violation { equation, level, sample, detail })
    }

    fn eval<T>(level: usize, sample: Option<usize>, r: Result<T>) -> std::result::Result<T, Violation> {
        r.or_else(|e| Self::fail(Equation::Evaluation, level, sample, e.to_string()))
    }

    fn expect(&mut self, ok: bool, eq: Equation, level: usize, sample: Option<usize>, detail: impl FnOnce() -> String) -> std::result::Result<(), Violation> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Self::fail(eq, level, sample, detail())
        }
    }

    fn inverse_roundtrip(&mut self, level: usize, k: usize, y: &Element, ly: &Element, c: &CoefficientValue, lc: &CoefficientValue) -> std::result::Result<(), Violation> {
        let Some((inv_s, inv_c)) = &self.spec.inverse else {
            return Ok(());
        };
        let back = Self::eval(level, Some(k), inv_s(level, ly))?;
        self.expect(same(&back, y), Equation::Inverse, level, Some(k), || format!("element {y} returns as {back}"))?;
        let back_c = Self::eval(level, Some(k), inv_c(level, lc))?;
        self.expect(&back_c == c, Equation::Inverse, level, Some(k), || format!("coefficient {c} returns as {back_c}"))
    }

    fn run(
        &mut self,
        source: &dyn ExpansionSystem,
        target: &dyn ExpansionSystem,
        samples: &[Element],
        depth: usize,
    ) -> std::result::Result<(), Violation> {
        for i in 0..=depth {
            let mapped = Self::eval(i, None, self.spec.apply_s(i, &source.neutral(i)))?;
            let want = target.neutral(i);
            self.expect(same(&mapped, &want), Equation::Neutral, i, None, || format!("neutral maps to {mapped}, expected {want}"))?;
        }
        for (k, y0) in samples.iter().enumerate() {
            let mut y = y0.clone();
            for i in 0..depth {
                let s = Some(k);
                let (c, next) = Self::eval(i, s, source.step(i, &y))?;
                let ly = Self::eval(i, s, self.spec.apply_s(i, &y))?;
                let (c2, next2) = Self::eval(i, s, target.step(i, &ly))?;
                let lc = Self::eval(i, s, self.spec.apply_c(i, &c))?;
                self.expect(lc == c2, Equation::Project, i, s, || format!("lambda_c(P y) = {lc} but P'(lambda_s y) = {c2} for y = {y}"))?;
                let lnext = Self::eval(i + 1, s, self.spec.apply_s(i + 1, &next))?;
                self.expect(same(&lnext, &next2), Equation::Expand, i, s, || {
                    format!("lambda_s(E y) = {lnext} but E'(lambda_s y) = {next2} for y = {y}")
                })?;
                self.inverse_roundtrip(i, k, &y, &ly, &c, &lc)?;
                y = next;
            }
        }
        Ok(())
    }
}

/// Checks the homomorphism equations along each sample's trajectory.
///
/// Verification is sample-based; a pass means no violation was found.
pub fn verify_homomorphism(
    spec: &MorphismSpec,
    source: &dyn ExpansionSystem,
    target: &dyn ExpansionSystem,
    samples: &[Element],
    depth: usize,
) -> HomomorphismReport {
    let mut checker = Checker { checks: 0, spec };
    let violation = checker.run(source, target, samples, depth).err();
    HomomorphismReport { morphism: spec.name.clone(), samples: samples.len(), depth, checks: checker.checks, violation }
}

/// `y'^[n]` computed through the source: `lambda_s(0, (lambda_s^{-1}(0, y'))^[n])`.
pub fn translate_convergent(
    spec: &MorphismSpec,
    source: &dyn ExpansionSystem,
    y_target: &Element,
    n: usize,
) -> Result<Element> {
    let (inv_s, _) = spec
        .inverse
        .as_ref()
        .ok_or_else(|| Error::domain(format!("morphism {} is not bijective", spec.name)))?;
    let y = inv_s(0, y_target)?;
    let code = coefficient_code(source, &y, n)?;
    let yn = convergent(source, &code.values, n)?.into_value()?;
    spec.apply_s(0, &yn)
}

fn reflection_sign(level: usize) -> Q {
    if level.is_multiple_of(2) {
        -Q::one()
    } else {
        Q::one()
    }
}

fn reflect(level: usize, y: &Element) -> Result<Element> {
    Ok(Element::Polynomial(y.as_polynomial()?.reflect().scale(&reflection_sign(level))))
}

fn sign_scalar(level: usize, c: &CoefficientValue) -> Result<CoefficientValue> {
    Ok(CoefficientValue::Scalar(c.scalar()? * reflection_sign(level)))
}

/// Forward-difference system to backward-difference system:
/// `lambda_s(i, y) = (-1)^{i+1} y(-x)` and `lambda_c(i, c) = (-1)^{i+1} c`.
///
/// The alternating sign is forced by `D (R y) = -R (B y)` with `R y = y(-x)`,
/// `D`/`B` the forward/backward differences. Each level map is an involution.
pub fn newton_reflection_morphism() -> MorphismSpec {
    MorphismSpec::new("newton-reflection", reflect, sign_scalar).with_inverse(reflect, sign_scalar)
}

/// The reflection with the coefficient negation left out; fails `hom-P` at level 0.
pub fn newton_reflection_without_negation() -> MorphismSpec {
    MorphismSpec::new("newton-reflection-unsigned", reflect, |_, c| Ok(c.clone()))
}

/// Factorization `E_i = E2_i o E1_i` with `E1_i` bijective onto its image.
pub trait Split: Send + Sync {
    fn name(&self) -> String;
    fn e1(&self, level: usize, y: &Element) -> Result<Element>;
    fn e1_inv(&self, level: usize, y: &Element) -> Result<Element>;
    fn e2(&self, level: usize, z: &Element) -> Result<Element>;
}

/// The primed system of a split: `nu'_i = E1 nu_i`, `P'_i = P_i o E1_i^{-1}`,
/// `E'_i = E1_{i+1} o E2_i`, `F'^{-1}_i(c, t) = E1_i F_i^{-1}(c, E1_{i+1}^{-1} t)`.
#[derive(Clone)]
pub struct ShiftedSystem {
    source: SystemRef,
    split: Arc<dyn Split>,
}

impl fmt::Debug for ShiftedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftedSystem({})", self.id())
    }
}

impl ExpansionSystem for ShiftedSystem {
    fn id(&self) -> String {
        format!("{}'{}", self.source.id(), self.split.name())
    }

    fn element_kind(&self) -> ElementKind {
        self.source.element_kind()
    }

    fn coefficient_kind(&self) -> CoefficientKind {
        self.source.coefficient_kind()
    }

    fn neutral(&self, level: usize) -> Element {
        self.split
            .e1(level, &self.source.neutral(level))
            .expect("split must be defined on neutral elements")
    }

    fn project(&self, level: usize, y: &Element) -> Result<CoefficientValue> {
        self.source.project(level, &self.split.e1_inv(level, y)?)
    }

    fn expand(&self, level: usize, y: &Element) -> Result<Element> {
        self.split.e1(level + 1, &self.split.e2(level, y)?)
    }

    fn reconstruct(&self, level: usize, c: &CoefficientValue, y: &Element) -> Result<Option<Element>> {
        let t = self.split.e1_inv(level + 1, y)?;
        match self.source.reconstruct(level, c, &t)? {
            Some(x) => Ok(Some(self.split.e1(level, &x)?)),
            None => Ok(None),
        }
    }

    fn coefficient_order(&self) -> crate::system::CoefficientOrder {
        self.source.coefficient_order()
    }
}

/// Builds the primed system and the isomorphism `lambda_s = E1`, `lambda_c = id`.
///
/// The split is checked on the samples' trajectories to `depth`: `E1^{-1} E1 = id`
/// and `E2 E1 = E`. A failure is a `Domain` error.
pub fn shift_isomorphism(
    source: SystemRef,
    split: Arc<dyn Split>,
    samples: &[Element],
    depth: usize,
) -> Result<(ShiftedSystem, MorphismSpec)> {
    for y0 in samples {
        let mut y = y0.clone();
        for i in 0..depth {
            let z = split.e1(i, &y)?;
            let back = split.e1_inv(i, &z)?;
            if !same(&back, &y) {
                return Err(Error::domain(format!("split inverse fails at level {i}: {y} returns as {back}")));
            }
            let via = split.e2(i, &z)?;
            let direct = source.expand(i, &y)?;
            if !same(&via, &direct) {
                return Err(Error::domain(format!("split does not factor E at level {i} for {y}")));
            }
            y = direct;
        }
    }
    let (s1, s2) = (split.clone(), split.clone());
    let spec = MorphismSpec::new(format!("shift{}", split.name()), move |i, y| s1.e1(i, y), |_, c| Ok(c.clone()))
        .with_inverse(move |i, y| s2.e1_inv(i, y), |_, c| Ok(c.clone()));
    Ok((ShiftedSystem { source, split }, spec))
}

/// Radix split: `E1 y = b y` onto `[0, b)`, `E2 z = frac(z)`.
#[derive(Debug, Clone)]
pub struct RadixSplit {
    pub base: u32,
}

impl Split for RadixSplit {
    fn name(&self) -> String {
        format!("[x{}]", self.base)
    }

    fn e1(&self, _level: usize, y: &Element) -> Result<Element> {
        r::mul_q(y, &Q::from_integer(self.base.into()))
    }

    fn e1_inv(&self, _level: usize, y: &Element) -> Result<Element> {
        r::mul_q(y, &Q::new(1.into(), self.base.into()))
    }

    fn e2(&self, _level: usize, z: &Element) -> Result<Element> {
        let f = r::floor(z)?;
        r::add_q(z, &-Q::from_integer(f))
    }
}

/// Continued-fraction split: `E1 y = 1/y` (with `1/0 = inf`) onto `(1, inf]`, `E2 z = frac(z)`.
#[derive(Debug, Clone, Default)]
pub struct ReciprocalSplit;

impl Split for ReciprocalSplit {
    fn name(&self) -> String {
        "[1/x]".into()
    }

    fn e1(&self, _level: usize, y: &Element) -> Result<Element> {
        r::recip(y)
    }

    fn e1_inv(&self, _level: usize, y: &Element) -> Result<Element> {
        r::recip(y)
    }

    fn e2(&self, _level: usize, z: &Element) -> Result<Element> {
        if matches!(z, Element::Infinity) {
            return Ok(Element::zero());
        }
        let f = r::floor(z)?;
        r::add_q(z, &-Q::from_integer(f))
    }
}

/// Approximation-system split: `E1` is the transform (`D` or `K`), `E2` the
/// normalization and nonlinearity applied to the transformed germ.
///
/// `K o D` drops `Dy(x0)` and is not injective, so it has no split.
#[derive(Debug, Clone)]
pub struct TransformSplit {
    sys: ApproximationSystem,
}

impl TransformSplit {
    pub fn new(sys: ApproximationSystem) -> Result<Self> {
        if sys.config().transform == Transform::KD {
            return Err(Error::domain("the K o D transform is not injective and has no split"));
        }
        Ok(TransformSplit { sys })
    }
}

impl Split for TransformSplit {
    fn name(&self) -> String {
        format!("[{}]", self.sys.config().transform.name())
    }

    fn e1(&self, _level: usize, y: &Element) -> Result<Element> {
        let s = y.as_series()?;
        let base = self.sys.config().base_value();
        Ok(Element::Series(match self.sys.config().transform {
            Transform::D => s.derivative(),
            _ => s.add_constant(&-base),
        }))
    }

    fn e1_inv(&self, _level: usize, z: &Element) -> Result<Element> {
        let s = z.as_series()?;
        let base = self.sys.config().base_value();
        Ok(Element::Series(match self.sys.config().transform {
            Transform::D => s.integral(base),
            _ => {
                if !s.constant_term().is_zero() {
                    return Err(Error::domain(format!("{s} is outside the image of K")));
                }
                s.add_constant(&base)
            }
        }))
    }

    fn e2(&self, level: usize, z: &Element) -> Result<Element> {
        Ok(self.sys.step_transformed(level, None, z.as_series()?)?.1)
    }
}

/// Maps a coefficient code through `lambda_c`.
pub fn map_code(spec: &MorphismSpec, code: &[CoefficientValue]) -> Result<Vec<CoefficientValue>> {
    code.iter().enumerate().map(|(i, c)| spec.apply_c(i, c)).collect()
}
