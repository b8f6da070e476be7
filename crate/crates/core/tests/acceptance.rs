//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_DIVERGENT` are reported as FAIL and required to stay
//! failing; every other criterion must pass.

use std::sync::Arc;
use std::time::{Duration, Instant};

use expsys::approx::{
    detect_cycle, eval_convergent_path, head_coincidence, head_coincidence_profile, AlphaSchedule, ApproximationSystem,
    AsConfig, HeadCheck, Nonlinearity, QuadSettings, Transform,
};
use expsys::morphism::{
    newton_reflection_morphism, shift_isomorphism, translate_convergent, verify_homomorphism, RadixSplit,
    ReciprocalSplit, TransformSplit,
};
use expsys::rational::{q, qi};
use expsys::real::cf::termination_certificate;
use expsys::real::{
    BaseSystem, ContinuedFractionSystem, DecimalExtSystem, EgyptianSystem, EngelSystem, FExpansionSpec,
    FExpansionSystem, LinearMap, ReciprocalMap,
};
use expsys::series::{
    cq, FourierSystem, NewtonBackwardSystem, NewtonForwardSystem, NormRestrictedTaylor, Polynomial, PowerSeries,
    TaylorSystem, TrigPolynomial,
};
use expsys::system::code_head_coincides;
use expsys::{
    coefficient_code, convergent, properness_profile, CertifiedReal, CoefficientValue, Element, ExpansionSystem, ExtInt,
    NatOrInf, SystemRef, Verdict, Q,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Check);

/// Criteria whose stated form contradicts an independent oracle.
const KNOWN_DIVERGENT: &[(usize, &str)] = &[
    (
        9,
        "with alpha = 1/3 the code is b = 3, 1/6, -5/36; the stated b_i = 3/2^i, c_i = 3/2^(2i-1) needs alpha = 3",
    ),
    (
        10,
        "the nonzero-term count fails on sparse germs; agreement holds through the forced index sum(m_i + 1), \
         which covers the first n-1 nonzero terms only when the germ has no gaps",
    ),
];

const N: usize = 64;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cm(c: Q, m: usize) -> CoefficientValue {
    CoefficientValue::As { c, m: NatOrInf::Finite(m) }
}

fn series_of(sys: &ApproximationSystem, code: &[CoefficientValue], n: usize) -> std::result::Result<PowerSeries, String> {
    let y = convergent(sys, code, n).map_err(e)?.into_value().map_err(e)?;
    Ok(y.as_series().map_err(e)?.clone())
}

fn inv_sqrt_one_minus_x() -> PowerSeries {
    PowerSeries::truncated(Q::zero(), vec![qi(1), qi(-1)], N).pow(&q(-1, 2)).unwrap()
}

fn unit_rationals(r: &mut ChaCha8Rng, count: usize, lo: i64) -> Vec<Q> {
    (0..count)
        .map(|_| {
            let d = r.gen_range(2..1_000_000i64);
            q(r.gen_range(lo..d), d)
        })
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let y = Element::Interval(CertifiedReal::sqrt_q(&q(1, 2), 256).map_err(e)?);
    let code = coefficient_code(&EgyptianSystem, &y, 4).map_err(e)?;
    let took = start.elapsed();
    let want: Vec<CoefficientValue> =
        [2, 5, 141, 68575].iter().map(|&k| CoefficientValue::Ext(ExtInt::Finite(BigInt::from(k)))).collect();
    ensure(code.values == want, || format!("code {code}"))?;
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("code {code} in {took:?}"))
}

fn criterion_2() -> Check {
    let sys = BaseSystem::decimal();
    let mut r = rng(2);
    let ys = unit_rationals(&mut r, 100, 0);
    for y in &ys {
        let code = coefficient_code(&sys, &Element::Rational(y.clone()), 12).map_err(e)?;
        for n in 0..=12 {
            let got = convergent(&sys, &code.values, n).map_err(e)?.into_value().map_err(e)?;
            let mut sum = Q::zero();
            let mut scale = Q::one();
            for c in &code.values[..n] {
                scale /= qi(10);
                let CoefficientValue::Int(d) = c else { return Err(format!("non-integer digit {c}")) };
                sum += Q::from_integer(d.clone()) * &scale;
            }
            ensure(got == Element::Rational(sum.clone()), || format!("y = {y}, n = {n}: {got} vs {sum}"))?;
        }
    }
    Ok("100 rationals, n <= 12".into())
}

fn criterion_3() -> Check {
    let mut r = rng(3);
    let ys = unit_rationals(&mut r, 500, 0);
    let mut longest = 0;
    for y in &ys {
        let cert = termination_certificate(y, 200).ok_or_else(|| format!("{y}: no termination within 200 steps"))?;
        ensure(cert.windows(2).all(|w| w[1] < w[0]), || format!("{y}: certificate {cert:?} not decreasing"))?;
        longest = longest.max(cert.len());
    }
    Ok(format!("500 rationals, longest certificate {longest}"))
}

fn criterion_4() -> Check {
    let y = Element::Polynomial(Polynomial::new(vec![q(1, 2), qi(1), qi(-1), qi(1), qi(-1)]));
    let prof = properness_profile(&NormRestrictedTaylor, &y, 4).map_err(e)?;
    let at = |n: usize| prof[n].1;
    ensure(at(3) == Verdict::Proper, || format!("n = 3: {}", at(3)))?;
    ensure(!at(2).is_proper(), || format!("n = 2: {}", at(2)))?;
    ensure(!at(4).is_proper(), || format!("n = 4: {}", at(4)))?;
    Ok(format!("n = 2: {}, n = 3: {}, n = 4: {}", at(2), at(3), at(4)))
}

fn random_poly(r: &mut ChaCha8Rng, max_deg: usize) -> Polynomial {
    let deg = r.gen_range(0..=max_deg);
    let mut c: Vec<Q> = (0..=deg).map(|_| q(r.gen_range(-20..=20), r.gen_range(1..=6))).collect();
    c[deg] = q(r.gen_range(1..=20), r.gen_range(1..=6));
    Polynomial::new(c)
}

fn criterion_5() -> Check {
    let mut r = rng(5);
    let spec = newton_reflection_morphism();
    for _ in 0..100 {
        let p = random_poly(&mut r, 8);
        let n = p.degree().unwrap_or(0) + 1;
        let y = Element::Polynomial(p.clone());
        let code = coefficient_code(&NewtonForwardSystem, &y, n).map_err(e)?;
        let yn = convergent(&NewtonForwardSystem, &code.values, n).map_err(e)?.into_value().map_err(e)?;
        ensure(yn == y, || format!("forward n = {n}: {yn} vs {p}"))?;
        for k in 0..=n {
            let via = translate_convergent(&spec, &NewtonForwardSystem, &y, k).map_err(e)?;
            let bcode = coefficient_code(&NewtonBackwardSystem, &y, k).map_err(e)?;
            let direct = convergent(&NewtonBackwardSystem, &bcode.values, k).map_err(e)?.into_value().map_err(e)?;
            ensure(via == direct, || format!("backward n = {k} for {p}: {via} vs {direct}"))?;
        }
    }
    Ok("100 polynomials of degree <= 8".into())
}

fn criterion_6() -> Check {
    let sys = ApproximationSystem::new(AsConfig::power(Transform::D, q(1, 2))).map_err(e)?;
    let code = coefficient_code(&sys, &Element::Series(inv_sqrt_one_minus_x()), 3).map_err(e)?.values;
    let want = vec![cm(q(1, 2), 0), cm(q(3, 4), 0), cm(q(7, 8), 0)];
    ensure(code == want, || format!("code {code:?}"))?;
    let y1 = series_of(&sys, &code, 1)?;
    let y2 = series_of(&sys, &code, 2)?;
    ensure(y1.coeffs() == [qi(1), q(1, 2)], || format!("y1 = {y1}"))?;
    ensure(y2.coeffs() == [qi(1), q(1, 2), q(3, 8), q(3, 32)], || format!("y2 = {y2}"))?;
    Ok(format!("y1 = {y1}, y2 = {y2}"))
}

fn criterion_7() -> Check {
    let sys = ApproximationSystem::new(AsConfig::power(Transform::D, qi(-1))).map_err(e)?;
    let exp = PowerSeries::variable(Q::zero()).with_order(N).exp().map_err(e)?;
    let code = coefficient_code(&sys, &Element::Series(exp), 6).map_err(e)?.values;
    for (i, v) in code.iter().enumerate() {
        let want = cm(qi(if i % 2 == 0 { 1 } else { -1 }), 0);
        ensure(v == &want, || format!("c_{i} = {v}"))?;
    }
    let period = detect_cycle(&code, 3);
    ensure(period == Some(2), || format!("period {period:?}"))?;
    let y2 = series_of(&sys, &code, 2)?;
    let x = PowerSeries::variable(Q::zero()).with_order(33);
    let oracle = x.neg().add_constant(&qi(1)).log().map_err(e)?.neg().add_constant(&qi(1));
    for k in 0..=32 {
        ensure(y2.coeff(k) == oracle.coeff(k), || format!("x^{k}: {} vs {}", y2.coeff(k), oracle.coeff(k)))?;
    }
    Ok("period 2, y2 = 1 - log(1-x) through x^32".into())
}

fn criterion_8() -> Check {
    let a = q(1, 2);
    let sys = ApproximationSystem::new(AsConfig::power(Transform::D, qi(-1)).at(qi(1))).map_err(e)?;
    let y = PowerSeries::truncated(qi(1), vec![qi(1), qi(1)], N).pow(&a).map_err(e)?;
    let code = coefficient_code(&sys, &Element::Series(y), 8).map_err(e)?.values;
    for (i, v) in code.iter().enumerate() {
        let want = cm(if i % 2 == 0 { a.clone() } else { Q::one() - &a }, 0);
        ensure(v == &want, || format!("c_{i} = {v}"))?;
    }
    Ok("8 levels alternate 1/2, 1/2 with m = 0".into())
}

fn criterion_9() -> Check {
    let sys = ApproximationSystem::new(AsConfig::power(Transform::KD, q(1, 3))).map_err(e)?;
    let cube = PowerSeries::exact(Q::zero(), vec![qi(1), qi(3), qi(3), qi(1)]);
    // Level by level, so a mismatch is reported without paying for the deeper levels.
    let mut y = Element::Series(cube);
    for i in 0..7 {
        let (v, next) = sys.step(i, &y).map_err(e)?;
        y = next;
        let v = &v;
        let CoefficientValue::As3 { b, c, .. } = v else { return Err(format!("c_{i} = {v}")) };
        let want_b = q(3, 1 << i);
        let want_c = if i == 0 { qi(6) } else { q(3, 1 << (2 * i - 1)) };
        ensure(*b == want_b && *c == want_c, || {
            format!("level {i}: got (b, c) = ({b}, {c}), want ({want_b}, {want_c})")
        })?;
    }
    Ok("b_i = 3/2^i, c_i = 3/2^(2i-1) for i <= 6".into())
}

fn real_systems() -> Vec<(SystemRef, Q)> {
    // Each system with an exclusive upper bound for its random inputs.
    vec![
        (Arc::new(BaseSystem::decimal()), qi(1)),
        (Arc::new(BaseSystem::new(2).unwrap()), qi(1)),
        (Arc::new(BaseSystem::new(7).unwrap()), qi(1)),
        (Arc::new(DecimalExtSystem::new()), qi(1000)),
        (Arc::new(ContinuedFractionSystem::new()), qi(1)),
        (Arc::new(EgyptianSystem::new()), qi(1)),
        (Arc::new(EngelSystem::new()), qi(1)),
        (Arc::new(FExpansionSystem::new(FExpansionSpec::new(ReciprocalMap))), qi(1)),
        (Arc::new(FExpansionSystem::new(FExpansionSpec::new(LinearMap::new(q(5, 2)).unwrap()))), qi(1)),
    ]
}

fn as_configs() -> Vec<AsConfig> {
    let mut out = Vec::new();
    for t in [Transform::D, Transform::K, Transform::KD] {
        for a in [q(1, 2), qi(-1), qi(3)] {
            out.push(AsConfig::power(t, a));
        }
        out.push(AsConfig::logexp(t));
    }
    out.push(AsConfig::power(Transform::D, qi(-1)).at(qi(1)));
    out.push(AsConfig::logexp(Transform::D).at(qi(1)));
    out.push(AsConfig::new(
        Transform::D,
        Nonlinearity::Power(AlphaSchedule::indexed("1/(i+2)", |i| q(1, i as i64 + 2))),
    ));
    out
}

fn random_germ(r: &mut ChaCha8Rng, cfg: &AsConfig) -> PowerSeries {
    let deg = r.gen_range(2..=7);
    let mut c: Vec<Q> = (0..=deg).map(|_| q(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
    c[0] = cfg.base_value();
    c[1] = q(r.gen_range(1..=4), r.gen_range(1..=3));
    c[2] = q(r.gen_range(1..=4), r.gen_range(1..=3));
    PowerSeries::exact(cfg.x0.clone(), c)
}

/// `exp(p) - 1 + base` for a random polynomial `p` vanishing at the base point.
fn random_exp_germ(r: &mut ChaCha8Rng, cfg: &AsConfig) -> PowerSeries {
    let deg = r.gen_range(1..=4);
    let mut c: Vec<Q> = (0..=deg).map(|_| q(r.gen_range(-3..=3), r.gen_range(1..=2))).collect();
    c[0] = Q::zero();
    c[1] = q(r.gen_range(1..=3), r.gen_range(1..=2));
    let p = PowerSeries::truncated(cfg.x0.clone(), c, N);
    p.exp().unwrap().add_constant(&(cfg.base_value() - Q::one()))
}

/// Runs `code_head_coincides` for n <= 6 and counts the proper convergents.
fn code_heads(sys: &dyn ExpansionSystem, ys: &[Element]) -> std::result::Result<usize, String> {
    let mut proper = 0;
    for y in ys {
        for n in 0..=6 {
            match code_head_coincides(sys, y, n).map_err(|err| format!("{}: {y} at n = {n}: {err}", sys.id()))? {
                Some(true) => proper += 1,
                Some(false) => return Err(format!("{}: {y} at n = {n}", sys.id())),
                None => {}
            }
        }
    }
    Ok(proper)
}

fn criterion_10() -> Check {
    let mut r = rng(10);
    let mut systems = 0;
    let mut proper = 0;
    let mut improper = 0;
    for (sys, hi) in real_systems() {
        let ys: Vec<Element> = (0..50)
            .map(|_| {
                let d = r.gen_range(2..100_000i64);
                Element::Rational(q(r.gen_range(1..d), d) * &hi)
            })
            .collect();
        proper += code_heads(sys.as_ref(), &ys)?;
        systems += 1;
    }
    for x0 in [Q::zero(), qi(1)] {
        let ys: Vec<Element> = (0..50)
            .map(|_| {
                let c = (0..12).map(|_| q(r.gen_range(-9..=9), r.gen_range(1..=5))).collect();
                Element::Series(PowerSeries::truncated(x0.clone(), c, N))
            })
            .collect();
        proper += code_heads(&TaylorSystem::new(x0), &ys)?;
        systems += 1;
    }
    let polys: Vec<Element> = (0..50).map(|_| Element::Polynomial(random_poly(&mut r, 8))).collect();
    for sys in [&NewtonForwardSystem as &dyn ExpansionSystem, &NewtonBackwardSystem] {
        proper += code_heads(sys, &polys)?;
        systems += 1;
    }
    let trigs: Vec<Element> = (0..50)
        .map(|_| {
            let modes = (-3..=3i64).map(|k| (k, cq(q(r.gen_range(-5..=5), 2), q(r.gen_range(-5..=5), 3))));
            Element::Trig(TrigPolynomial::new(modes))
        })
        .collect();
    proper += code_heads(&FourierSystem::new(), &trigs)?;
    systems += 1;
    let small: Vec<Element> = (0..50)
        .map(|_| {
            let deg = r.gen_range(0..=5);
            let c = (0..=deg).map(|_| q(r.gen_range(-3..=3), 4 * (deg as i64 + 1))).collect();
            Element::Polynomial(Polynomial::new(c))
        })
        .collect();
    proper += code_heads(&NormRestrictedTaylor::new(), &small)?;
    systems += 1;

    let mut inconclusive = 0;
    let mut cross = 0;
    let mut differs = Vec::new();
    for cfg in as_configs() {
        let sys = ApproximationSystem::new(cfg.clone()).map_err(e)?;
        for k in 0..50 {
            let y = if k % 2 == 0 { random_germ(&mut r, &cfg) } else { random_exp_germ(&mut r, &cfg) };
            let prof = head_coincidence_profile(&sys, &y, 6).map_err(|err| format!("{}: {y}: {err}", cfg.id()))?;
            for (n, v) in prof.iter().enumerate() {
                match v {
                    HeadCheck::Coincides => proper += 1,
                    HeadCheck::Differs { at, forced_through } => {
                        // A mismatch inside the forced range would be a defect, not a counterexample.
                        if *at <= *forced_through {
                            return Err(format!("{}: {y} differs at x^{at} within forced index {forced_through}", cfg.id()));
                        }
                        differs.push(format!("{} on {y} at n = {n} (x^{at}, forced through x^{forced_through})", cfg.id()));
                    }
                    HeadCheck::Improper => improper += 1,
                    HeadCheck::Inconclusive => inconclusive += 1,
                }
            }
            // The adaptive profile must agree with a direct run at the full order.
            if k == 0 && cfg.transform != Transform::KD {
                for (n, &got) in prof.iter().enumerate().take(5).skip(2) {
                    let direct = match head_coincidence(&sys, &y, n) {
                        Ok(true) => HeadCheck::Coincides,
                        Ok(false) => HeadCheck::Differs { at: 0, forced_through: 0 },
                        Err(expsys::Error::Improper(_)) => HeadCheck::Improper,
                        Err(expsys::Error::TruncationInconclusive(_)) => HeadCheck::Inconclusive,
                        Err(err) => return Err(format!("{}: {y}: {err}", cfg.id())),
                    };
                    let same = match (direct, got) {
                        (HeadCheck::Differs { .. }, HeadCheck::Differs { .. }) => true,
                        (a, b) => a == b,
                    };
                    ensure(same, || format!("{}: {y} at n = {n}: {direct:?} vs {got:?}", cfg.id()))?;
                    cross += 1;
                }
            }
        }
        systems += 1;
    }
    let summary = format!(
        "{systems} systems x 50 inputs: {proper} proper convergents agree, {} differ, {improper} improper, \
         {inconclusive} truncation-inconclusive, {cross} checks repeated at order {N}",
        differs.len()
    );
    match differs.first() {
        None => Ok(summary),
        Some(first) => Err(format!("{summary}; first counterexample: {first}")),
    }
}

fn criterion_11() -> Check {
    let mut r = rng(11);
    let mut lines = Vec::new();
    let polys: Vec<Element> = (0..20).map(|_| Element::Polynomial(random_poly(&mut r, 8))).collect();
    let rep = verify_homomorphism(&newton_reflection_morphism(), &NewtonForwardSystem, &NewtonBackwardSystem, &polys, 6);
    ensure(rep.passed(), || rep.to_string())?;
    lines.push(rep.checks);

    let rats: Vec<Element> = unit_rationals(&mut r, 20, 0).into_iter().map(Element::Rational).collect();
    let dec: SystemRef = Arc::new(BaseSystem::decimal());
    let (tgt, spec) = shift_isomorphism(dec.clone(), Arc::new(RadixSplit { base: 10 }), &rats, 6).map_err(e)?;
    let rep = verify_homomorphism(&spec, dec.as_ref(), &tgt, &rats, 6);
    ensure(rep.passed(), || rep.to_string())?;
    lines.push(rep.checks);

    let cf: SystemRef = Arc::new(ContinuedFractionSystem::new());
    let (tgt, spec) = shift_isomorphism(cf.clone(), Arc::new(ReciprocalSplit), &rats, 6).map_err(e)?;
    let rep = verify_homomorphism(&spec, cf.as_ref(), &tgt, &rats, 6);
    ensure(rep.passed(), || rep.to_string())?;
    lines.push(rep.checks);

    let cfg = AsConfig::power(Transform::D, q(1, 2)).with_order(24);
    let germs: Vec<Element> = (0..20).map(|_| Element::Series(random_germ(&mut r, &cfg).ensure_order(24))).collect();
    let sys = ApproximationSystem::new(cfg).map_err(e)?;
    let src: SystemRef = Arc::new(sys.clone());
    let split = Arc::new(TransformSplit::new(sys).map_err(e)?);
    let (tgt, spec) = shift_isomorphism(src.clone(), split, &germs, 6).map_err(e)?;
    let rep = verify_homomorphism(&spec, src.as_ref(), &tgt, &germs, 6);
    ensure(rep.passed(), || rep.to_string())?;
    lines.push(rep.checks);
    Ok(format!("4 morphisms, 20 samples, depth 6, checks {lines:?}"))
}

fn criterion_12() -> Check {
    let start = Instant::now();
    let cfg = AsConfig::power(Transform::D, q(1, 2));
    let sys = ApproximationSystem::new(cfg.clone()).map_err(e)?;
    let code = coefficient_code(&sys, &Element::Series(inv_sqrt_one_minus_x()), 4).map_err(e)?.values;
    let path = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
    let mut worst = 0f64;
    for n in 0..=4 {
        let ev = eval_convergent_path(&cfg, &code, n, &path, &QuadSettings::default()).map_err(e)?;
        let exact = series_of(&sys, &code, n)?;
        for (x, v) in path.iter().zip(&ev.values) {
            worst = worst.max((v - exact.eval_complex(*x)).norm());
        }
    }
    let took = start.elapsed();
    ensure(worst < 1e-8, || format!("max error {worst:e}"))?;
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!("max error {worst:.1e} in {took:?}"))
}

/// Non-gating: `x^(1/2)` convergents continued once around the origin.
///
/// The convergents have poles on the negative axis, so squares of a few sizes are tried.
fn stretch_sqrt_loop() -> String {
    let cfg = AsConfig::power(Transform::D, qi(-1)).at(qi(1)).with_order(32);
    let run = |h: f64| -> expsys::Result<String> {
        let sys = ApproximationSystem::new(cfg.clone())?;
        let y = PowerSeries::truncated(qi(1), vec![qi(1), qi(1)], 32).pow(&q(1, 2))?;
        let code = coefficient_code(&sys, &Element::Series(y), 8)?.values;
        let c = |re, im| Complex64::new(re, im);
        let path = [c(1.0, 0.0), c(1.0, h), c(-h, h), c(-h, -h), c(1.0, -h), c(1.0, 0.0)];
        let mut out = Vec::new();
        for n in [2, 4, 6, 8] {
            let ev = eval_convergent_path(&cfg, &code, n, &path, &QuadSettings::default())?;
            let z = ev.values[ev.values.len() - 1];
            out.push(format!("n={n}: {:.4}{:+.4}i", z.re, z.im));
        }
        Ok(out.join(", "))
    };
    let mut last = String::new();
    for h in [0.9, 0.75, 0.6, 1.2] {
        match run(h) {
            Ok(s) => return format!("square of half-width {h}: endpoint values {s} (continued branch -1)"),
            Err(err) => last = format!("half-width {h}: {err}"),
        }
    }
    format!("not evaluated, {last}")
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (1, "egyptian code of 1/sqrt(2)", criterion_1),
        (2, "decimal convergents are digit sums", criterion_2),
        (3, "continued fraction termination certificates", criterion_3),
        (4, "norm-restricted properness profile", criterion_4),
        (5, "newton interpolation and reflected backward convergents", criterion_5),
        (6, "D power 1/2 code and convergents of 1/sqrt(1-x)", criterion_6),
        (7, "D power -1 cycle on exp", criterion_7),
        (8, "D power -1 on x^(1/2) at 1", criterion_8),
        (9, "KD power 1/3 on (1+x)^3", criterion_9),
        (10, "head coincidence across built-in systems", criterion_10),
        (11, "homomorphism equations", criterion_11),
        (12, "path evaluation of convergents", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let known = KNOWN_DIVERGENT.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        match (&res, known) {
            (Ok(d), _) => println!("criterion {id:>2}: PASS  {name} [{d}] ({took:.2?})"),
            (Err(d), Some(why)) => {
                println!("criterion {id:>2}: FAIL  {name} [{d}] ({took:.2?}) known divergence: {why}")
            }
            (Err(d), None) => println!("criterion {id:>2}: FAIL  {name} [{d}] ({took:.2?})"),
        }
        if res.is_ok() == known.is_some() {
            unexpected.push(id);
        }
    }
    println!("stretch (non-gating): {}", stretch_sqrt_loop());
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
