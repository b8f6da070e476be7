//! Command-line driver for the `expsys` library.
//!
//! [`run`] takes the full argument vector and returns the exit code together with
//! everything written to stdout and stderr, so the binary and the tests share it.

pub mod expr;
pub mod registry;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use expsys::analysis::{convergence_report, ExportFormat, Metric, ReportRecord};
use expsys::approx::{detect_cycle, eval_convergent_path, ApproximationSystem, AsConfig, QuadSettings};
use expsys::morphism::{
    newton_reflection_morphism, newton_reflection_without_negation, shift_isomorphism, verify_homomorphism,
    MorphismSpec, RadixSplit, ReciprocalSplit, TransformSplit,
};
use expsys::rational::{self, Q};
use expsys::real::{BaseSystem, ContinuedFractionSystem};
use expsys::series::{NewtonBackwardSystem, NewtonForwardSystem, Polynomial, PowerSeries};
use expsys::{
    coefficient_code, convergent, order, CoefficientValue, Element, ElementKind, Error, ExpansionSystem, NatOrInf,
    SystemRef,
};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::SeriesContext;

#[derive(Parser, Debug)]
#[command(name = "expsys", version, about = "Expansion systems: codes, convergents and checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// System id (see `systems list`).
    #[arg(long)]
    system: String,
    /// Input expression.
    #[arg(long, allow_hyphen_values = true)]
    input: String,
    /// Precision of certified reals in bits.
    #[arg(long, default_value_t = 128)]
    bits: u32,
    /// Truncation order of power series.
    #[arg(long = "series-order", default_value_t = expsys::approx::DEFAULT_ORDER)]
    series_order: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Built-in systems.
    Systems {
        #[command(subcommand)]
        action: SystemsCmd,
    },
    /// Coefficient code of an element.
    #[command(args_override_self = true)]
    Expand {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        depth: usize,
    },
    /// The n-th convergent.
    #[command(args_override_self = true)]
    Convergent {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        order: usize,
        /// `value` or `trace`.
        #[arg(long, default_value = "value")]
        emit: String,
        /// Print real values as decimals with this many digits.
        #[arg(long)]
        approx: Option<usize>,
    },
    /// Order of an element.
    #[command(args_override_self = true)]
    Order {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        max: usize,
    },
    /// Convergence report as CSV or JSON.
    #[command(args_override_self = true)]
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        nmax: usize,
        /// `abs`, `head` or `sup-grid`.
        #[arg(long, default_value = "abs")]
        metric: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Path nodes for `sup-grid`.
        #[arg(long)]
        path: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Morphism checks.
    Morphism {
        #[command(subcommand)]
        action: MorphismCmd,
    },
    /// Approximation systems on power series.
    As {
        #[command(subcommand)]
        action: AsCmd,
    },
}

#[derive(Subcommand, Debug)]
enum SystemsCmd {
    List,
}

#[derive(Subcommand, Debug)]
enum MorphismCmd {
    /// Check the homomorphism equations of a built-in morphism on random samples.
    #[command(args_override_self = true)]
    Verify {
        /// newton-reflection, newton-reflection-unsigned, decimal-shift, cf-shift, as-d-shift or identity.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct AsArgs {
    #[arg(long, default_value = "d")]
    transform: String,
    #[arg(long, default_value = "power")]
    nonlinearity: String,
    /// A constant, a comma list, or an expression in `i` such as `1/(i+2)`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Series expression, optionally with `at x0`.
    #[arg(long, allow_hyphen_values = true)]
    input: String,
    #[arg(long = "series-order", default_value_t = expsys::approx::DEFAULT_ORDER)]
    series_order: usize,
}

#[derive(Subcommand, Debug)]
enum AsCmd {
    /// Coefficient code.
    #[command(args_override_self = true)]
    Run {
        #[command(flatten)]
        cfg: AsArgs,
        #[arg(long)]
        depth: usize,
    },
    /// Numerical values of a convergent along a polyline from the base point.
    #[command(args_override_self = true)]
    Eval {
        #[command(flatten)]
        cfg: AsArgs,
        /// Comma-separated complex nodes, e.g. "0,1/2" or "1,1+i,-1+i,-1-i,1-i,1".
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<String, (String, Failure)>;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Io(_) => 2,
        Error::PrecisionExhausted(_)
        | Error::TruncationInconclusive(_)
        | Error::QuadratureFailure(_)
        | Error::SingularityOnPath(_) => 3,
        Error::Improper(_) => 4,
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Number of leading tokens naming the subcommand.
fn subcommand_len(args: &[String]) -> usize {
    match args.first().map(String::as_str) {
        Some("systems" | "morphism" | "as") => 2,
        Some(_) => 1,
        None => 0,
    }
}

/// Moves `--config FILE` contents in as flags right after the subcommand, so that
/// explicit flags, which come later, win.
fn apply_config(args: &[String]) -> expsys::Result<Vec<String>> {
    let mut rest = Vec::new();
    let mut config = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Error::domain("--config needs a file"))?.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a.clone());
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)?;
    let json: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::domain(format!("config {path}: {e}")))?;
    let obj = json.as_object().ok_or_else(|| Error::domain(format!("config {path}: expected a JSON object")))?;
    let k = subcommand_len(&rest).min(rest.len());
    let mut out: Vec<String> = rest[..k].to_vec();
    for (key, v) in obj {
        let val = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Bool(b) => b.to_string(),
            other => return Err(Error::domain(format!("config {path}: unsupported value for {key}: {other}"))),
        };
        out.push(format!("--{}", key.replace('_', "-")));
        out.push(val);
    }
    out.extend_from_slice(&rest[k..]);
    Ok(out)
}

/// Runs the CLI on `args` (without the program name).
pub fn run(args: &[String]) -> Outcome {
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => return failure(String::new(), Failure::Lib(e)),
    };
    let cli = match Cli::try_parse_from(std::iter::once("expsys".to_string()).chain(args)) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: format!("error[usage]: {}\n{text}", one_line(&e.kind().to_string())) }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err((stdout, f)) => failure(stdout, f),
    }
}

fn failure(stdout: String, f: Failure) -> Outcome {
    let (code, kind, msg) = match f {
        Failure::Lib(e) => (exit_code(&e), e.kind().to_string(), e.to_string()),
        Failure::Verification(m) => (1, "verification-failed".to_string(), m),
    };
    Outcome { code, stdout, stderr: format!("error[{kind}]: {}\n", one_line(&msg)) }
}

fn lib<T>(r: expsys::Result<T>) -> std::result::Result<T, (String, Failure)> {
    r.map_err(|e| (String::new(), Failure::Lib(e)))
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Systems { action: SystemsCmd::List } => {
            let mut out = String::new();
            for (id, about) in registry::LISTING {
                let _ = writeln!(out, "{id:<42} {about}");
            }
            Ok(out)
        }
        Cmd::Expand { input, depth } => {
            let (sys, y) = lib(load(&input))?;
            let code = lib(coefficient_code(sys.as_ref(), &y, depth))?;
            Ok(format!("{code}\n"))
        }
        Cmd::Convergent { input, order: n, emit, approx } => convergent_cmd(&input, n, &emit, approx),
        Cmd::Order { input, max } => {
            let (sys, y) = lib(load(&input))?;
            Ok(format!("{}\n", lib(order(sys.as_ref(), &y, max))?))
        }
        Cmd::Report { input, nmax, metric, out, format, path, tol } => {
            report_cmd(&input, nmax, &metric, out, &format, path.as_deref(), tol)
        }
        Cmd::Morphism { action: MorphismCmd::Verify { spec, samples, depth, seed } } => {
            morphism_cmd(&spec, samples, depth, seed)
        }
        Cmd::As { action: AsCmd::Run { cfg, depth } } => as_run(&cfg, depth),
        Cmd::As { action: AsCmd::Eval { cfg, path, order: n, tol } } => as_eval(&cfg, &path, n, tol),
    }
}

fn element_for(sys: &dyn ExpansionSystem, id: &str, src: &str, bits: u32, series_order: usize) -> expsys::Result<Element> {
    let parsed = expr::parse(src)?;
    let at = parsed.at.as_ref().map(|a| expr::eval_rational(a, None)).transpose()?;
    if at.is_some() && sys.element_kind() != ElementKind::Series {
        return Err(Error::domain("`at` is only meaningful for series inputs"));
    }
    match sys.element_kind() {
        ElementKind::Real => expr::scalar_element(&parsed.expr, bits),
        ElementKind::Polynomial => Ok(Element::Polynomial(expr::eval_polynomial(&parsed.expr)?)),
        ElementKind::Trig => Ok(Element::Trig(expr::eval_trig(&parsed.expr)?)),
        ElementKind::Series => {
            let fixed = registry::base_point(id)?;
            let x0 = match (at, fixed) {
                (Some(a), Some(f)) if a != f => {
                    return Err(Error::domain(format!(
                        "input is at {} but system {id} is at {}",
                        rational::render(&a),
                        rational::render(&f)
                    )))
                }
                (Some(a), _) => a,
                (None, Some(f)) => f,
                (None, None) => Q::zero(),
            };
            SeriesContext { x0, order: series_order }.element(&parsed.expr)
        }
    }
}

fn load(input: &InputArgs) -> expsys::Result<(SystemRef, Element)> {
    let id = match registry::base_point(&input.system)? {
        None if input.system == "taylor" => taylor_id_for(&input.input)?,
        _ => input.system.clone(),
    };
    let sys = registry::resolve(&id, input.series_order)?;
    let y = element_for(sys.as_ref(), &id, &input.input, input.bits, input.series_order)?;
    Ok((sys, y))
}

/// `taylor` follows the base point of its input.
fn taylor_id_for(src: &str) -> expsys::Result<String> {
    let parsed = expr::parse(src)?;
    Ok(match parsed.at {
        Some(a) => {
            let x0 = expr::eval_rational(&a, None)?;
            if x0.is_zero() {
                "taylor".into()
            } else {
                format!("taylor@{}", rational::render(&x0))
            }
        }
        None => "taylor".into(),
    })
}

fn render_element(y: &Element, approx: Option<usize>) -> String {
    match (y, approx) {
        (Element::Rational(q), Some(d)) => rational::to_decimal(q, d),
        (Element::Interval(iv), Some(d)) => {
            format!("[{},{}]", rational::to_decimal(iv.lo(), d), rational::to_decimal(iv.hi(), d))
        }
        _ => y.to_string(),
    }
}

fn convergent_cmd(input: &InputArgs, n: usize, emit: &str, approx: Option<usize>) -> CmdResult {
    let (sys, y) = lib(load(input))?;
    let code = lib(coefficient_code(sys.as_ref(), &y, n))?;
    let trace = lib(convergent(sys.as_ref(), &code.values, n))?;
    let mut out = String::new();
    match emit {
        "value" => {}
        "trace" => {
            let _ = writeln!(out, "verdict: {}", trace.verdict);
            for (i, st) in trace.stages.iter().enumerate() {
                let s = st.as_ref().map(|e| render_element(e, approx)).unwrap_or_else(|| "-".into());
                let _ = writeln!(out, "y_{i}: {s}");
            }
        }
        other => return lib(Err(Error::domain(format!("unknown --emit {other:?} (expected value or trace)")))),
    }
    match trace.value() {
        Some(v) => {
            if emit == "value" {
                let _ = writeln!(out, "{}", render_element(v, approx));
            }
            Ok(out)
        }
        None => {
            let i = match trace.verdict {
                expsys::Verdict::ImproperAt(i) => i,
                expsys::Verdict::Proper => 0,
            };
            Err((out, Failure::Lib(Error::Improper(i))))
        }
    }
}

fn parse_path(s: &str) -> expsys::Result<Vec<Complex64>> {
    expr::split_top_level(s).into_iter().map(|p| expr::eval_complex(&expr::parse(p)?.expr)).collect()
}

fn report_cmd(
    input: &InputArgs,
    nmax: usize,
    metric: &str,
    out: Option<PathBuf>,
    format: &str,
    path: Option<&str>,
    tol: f64,
) -> CmdResult {
    let (sys, y) = lib(load(input))?;
    let fmt: ExportFormat = lib(format.parse())?;
    let metric = match metric {
        "abs" => Metric::Absolute,
        "head" => Metric::CoefficientHead,
        "sup-grid" => {
            let cfg = lib(registry::resolve_as(&input.system, input.series_order))?;
            let cfg = lib(cfg.ok_or_else(|| Error::domain("sup-grid needs an approximation-system id")))?;
            let path = lib(path.ok_or_else(|| Error::domain("sup-grid needs --path")))?;
            Metric::SupGrid { cfg, path: lib(parse_path(path))?, quad: QuadSettings { tol, ..QuadSettings::default() } }
        }
        other => return lib(Err(Error::domain(format!("unknown metric {other:?}")))),
    };
    let rep = lib(convergence_report(sys.as_ref(), &y, nmax, &metric))?;
    let text = ReportRecord::from(&rep).render(fmt);
    match out {
        Some(p) => {
            lib(std::fs::write(&p, &text).map_err(Error::from))?;
            Ok(format!("wrote {} rows to {}\n", rep.rows.len(), p.display()))
        }
        None => Ok(text),
    }
}

fn random_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Element> {
    (0..n)
        .map(|_| {
            let d: i64 = rng.gen_range(2..100_000);
            Element::Rational(rational::q(rng.gen_range(0..d), d))
        })
        .collect()
}

fn random_polynomials(rng: &mut ChaCha8Rng, n: usize) -> Vec<Element> {
    (0..n)
        .map(|_| {
            let deg = rng.gen_range(0..=8);
            let mut c: Vec<Q> = (0..=deg).map(|_| rational::q(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
            c[0] = rational::qi(rng.gen_range(1..=9));
            Element::Polynomial(Polynomial::new(c))
        })
        .collect()
}

fn random_germs(rng: &mut ChaCha8Rng, n: usize, order: usize) -> Vec<Element> {
    (0..n)
        .map(|_| {
            let mut c: Vec<Q> = (0..=order).map(|_| rational::q(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
            c[0] = rational::qi(1);
            c[1] = rational::q(rng.gen_range(1..=5), rng.gen_range(1..=3));
            Element::Series(PowerSeries::truncated(Q::zero(), c, order))
        })
        .collect()
}

fn morphism_cmd(spec: &str, n: usize, depth: usize, seed: u64) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, source, target, samples): (MorphismSpec, SystemRef, SystemRef, Vec<Element>) = match spec {
        "newton-reflection" | "newton-reflection-unsigned" => {
            let m = if spec == "newton-reflection" {
                newton_reflection_morphism()
            } else {
                newton_reflection_without_negation()
            };
            (m, Arc::new(NewtonForwardSystem), Arc::new(NewtonBackwardSystem), random_polynomials(&mut rng, n))
        }
        "identity" => {
            let s: SystemRef = Arc::new(BaseSystem::decimal());
            (MorphismSpec::identity(), s.clone(), s, random_rationals(&mut rng, n))
        }
        "decimal-shift" | "cf-shift" => {
            let samples = random_rationals(&mut rng, n);
            let (src, split): (SystemRef, Arc<dyn expsys::morphism::Split>) = if spec == "decimal-shift" {
                (Arc::new(BaseSystem::decimal()), Arc::new(RadixSplit { base: 10 }))
            } else {
                (Arc::new(ContinuedFractionSystem), Arc::new(ReciprocalSplit))
            };
            let (tgt, m) = lib(shift_isomorphism(src.clone(), split, &samples, depth))?;
            (m, src, Arc::new(tgt), samples)
        }
        "as-d-shift" => {
            let order = 24;
            let sys = lib(ApproximationSystem::new(AsConfig::power(expsys::approx::Transform::D, rational::q(1, 2)).with_order(order)))?;
            let samples = random_germs(&mut rng, n, order);
            let src: SystemRef = Arc::new(sys.clone());
            let (tgt, m) = lib(shift_isomorphism(src.clone(), Arc::new(lib(TransformSplit::new(sys))?), &samples, depth))?;
            (m, src, Arc::new(tgt), samples)
        }
        other => return lib(Err(Error::domain(format!("unknown morphism spec {other:?}")))),
    };
    let rep = verify_homomorphism(&m, source.as_ref(), target.as_ref(), &samples, depth);
    let line = format!("{rep}\n");
    if rep.passed() {
        Ok(line)
    } else {
        Err((line, Failure::Verification(rep.to_string())))
    }
}

fn as_setup(args: &AsArgs) -> expsys::Result<(AsConfig, ApproximationSystem, Element)> {
    let t = registry::transform(&args.transform)?;
    let nl = registry::nonlinearity(&args.nonlinearity, args.alpha.as_deref())?;
    let parsed = expr::parse(&args.input)?;
    let x0 = parsed.at.as_ref().map(|a| expr::eval_rational(a, None)).transpose()?.unwrap_or_default();
    let cfg = AsConfig::new(t, nl).at(x0.clone()).with_order(args.series_order);
    let sys = ApproximationSystem::new(cfg.clone())?;
    let y = SeriesContext { x0, order: args.series_order }.element(&parsed.expr)?;
    Ok((cfg, sys, y))
}

fn as_run(args: &AsArgs, depth: usize) -> CmdResult {
    let (cfg, sys, y) = lib(as_setup(args))?;
    let code = lib(coefficient_code(&sys, &y, depth))?;
    let (mut bs, mut cs, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    for v in &code.values {
        let (b, c, m) = match v {
            CoefficientValue::As { c, m } => (None, c, m),
            CoefficientValue::As3 { b, c, m } => (Some(b), c, m),
            other => return lib(Err(Error::domain(format!("unexpected coefficient {other}")))),
        };
        if let Some(b) = b {
            bs.push(rational::render(b));
        }
        cs.push(rational::render(c));
        ms.push(match m {
            NatOrInf::Finite(k) => k.to_string(),
            NatOrInf::Infinite => "inf".into(),
        });
    }
    let mut out = format!("system: {}\n", cfg.id());
    if !bs.is_empty() {
        let _ = writeln!(out, "b: {}", bs.join(" "));
    }
    let _ = writeln!(out, "c: {}", cs.join(" "));
    let _ = writeln!(out, "m: {}", ms.join(" "));
    let period = detect_cycle(&code.values, depth / 2).map(|p| p.to_string()).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "period: {period}");
    Ok(out)
}

fn render_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn as_eval(args: &AsArgs, path: &str, n: usize, tol: f64) -> CmdResult {
    let (cfg, sys, y) = lib(as_setup(args))?;
    let nodes = lib(parse_path(path))?;
    let code = lib(coefficient_code(&sys, &y, n))?;
    let quad = QuadSettings { tol, ..QuadSettings::default() };
    let ev = lib(eval_convergent_path(&cfg, &code.values, n, &nodes, &quad))?;
    let mut out = String::new();
    for (x, v) in ev.nodes.iter().zip(&ev.values) {
        let _ = writeln!(out, "{}\t{}", render_complex(*x), render_complex(*v));
    }
    let _ = writeln!(out, "error-estimate: {:e}", ev.error_estimate);
    Ok(out)
}
