use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;
use wavesym::catalog::{self, load_catalog, Binding};
use wavesym::expr::{ZeroConfig, ZeroVerdict};
use wavesym::liealg::{Closure, LieAlgebraSpan, SpanConfig};
use wavesym::ptrans::{pushforward_theta_with, verify_admissible_with};
use wavesym::solver::{dimension_profile, solve_symmetries, ExtraBasis, Mode, SolverConfig};
use wavesym::deteq::is_symmetry_with;
use wavesym::{commutator, ClassMember, Error, PointTransformation, Rational, VectorField};

#[derive(Parser)]
#[command(name = "wavesym", version, about = "Symmetries and admissible transformations of u_tt = f(x,u) u_xx + g(x,u)")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Equation {
    /// Coefficient f(x, u) of u_xx.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Source term g(x, u).
    #[arg(long, allow_hyphen_values = true)]
    g: String,
}

#[derive(Args, Clone)]
struct Sampling {
    /// Seed for sample points.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Rational factor applied to every sampled coordinate, e.g. `1/4` to
    /// stay on the principal branch of arctan-based inverses.
    #[arg(long, default_value = "1")]
    sample_scale: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exact elimination, falling back to float for transcendental equations.
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtraArg {
    Exp2t,
    Trig2t,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Polynomial degree of the ansatz in t and x.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Extra factors multiplying the polynomial ansatz.
    #[arg(long = "extra", value_enum)]
    extra: Vec<ExtraArg>,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Subcommand)]
enum Command {
    /// Check that vector fields are Lie symmetries of an equation.
    CheckInvariance {
        #[command(flatten)]
        eq: Equation,
        /// Field as `t=expr, x=expr, u=expr`; omitted components are 0.
        #[arg(long = "field", required = true, allow_hyphen_values = true)]
        fields: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Solve the determining equations over a polynomial ansatz.
    Solve {
        #[command(flatten)]
        eq: Equation,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Symmetry dimensions for ansatz degrees 0..=degree.
    Profile {
        #[command(flatten)]
        eq: Equation,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Image of an equation under a point transformation.
    Pushforward {
        #[command(flatten)]
        eq: Equation,
        /// Map as `t=expr, x=expr, u=expr`; omitted components are the identity.
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// Inverse map, same format.
        #[arg(long, allow_hyphen_values = true)]
        inverse: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Check the conditions for (source, map, target) to be admissible.
    VerifyAdmissible {
        #[command(flatten)]
        eq: Equation,
        /// Map as `t=expr, x=expr, u=expr`; omitted components are the identity.
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// Inverse map; required when the target is omitted.
        #[arg(long, allow_hyphen_values = true)]
        inverse: Option<String>,
        /// Target f; defaults to the pushforward of the source.
        #[arg(long, requires = "target_g", allow_hyphen_values = true)]
        target_f: Option<String>,
        /// Target g; given together with the target f.
        #[arg(long, requires = "target_f", allow_hyphen_values = true)]
        target_g: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Verify every catalog entry.
    VerifyCatalog {
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Commutator table of fields or equivalence-algebra generators.
    Commutators {
        /// A field spec or a generator such as `D(x^2)`, `Z(1)`, `Pt`, `Dt`, `Du`.
        #[arg(long = "field", required = true, allow_hyphen_values = true)]
        fields: Vec<String>,
    },
    /// Dimension, derived dimension, center and Killing signature.
    AlgebraInvariants {
        /// Basis field, as a spec or a generator combination.
        #[arg(long = "field", required = true, allow_hyphen_values = true)]
        fields: Vec<String>,
    },
    /// Catalog export.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the full catalog.
    Export {
        #[arg(long, value_enum, default_value = "json")]
        format: ExportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
}

enum Outcome {
    Pass(Value, String),
    Fail(Value, String),
}

fn member(eq: &Equation) -> Result<ClassMember, Error> {
    ClassMember::parse(&eq.f, &eq.g)
}

fn zero_cfg(theta: &ClassMember, s: &Sampling) -> Result<ZeroConfig, Error> {
    let scale = wavesym::parse(&s.sample_scale)?
        .as_const()
        .cloned()
        .filter(|q| *q > Rational::from_integer(0.into()))
        .ok_or_else(|| Error::Invalid(format!("sample scale `{}` is not a positive rational", s.sample_scale)))?;
    Ok(ZeroConfig { seed: s.seed, ..theta.zero_config() }.with_scale(scale))
}

fn solver_cfg(a: &SolverArgs) -> SolverConfig {
    SolverConfig {
        seed: a.sampling.seed,
        mode: match a.mode {
            ModeArg::Auto | ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        },
        extra_basis: a
            .extra
            .iter()
            .map(|e| match e {
                ExtraArg::Exp2t => ExtraBasis::Exp2t,
                ExtraArg::Trig2t => ExtraBasis::Trig2t,
            })
            .collect(),
        ..SolverConfig::default()
    }
}

/// Runs `op` under the requested mode; `auto` retries in float mode when
/// exact elimination is impossible.
fn with_mode<T>(a: &SolverArgs, op: impl Fn(&SolverConfig) -> Result<T, Error>) -> Result<T, Error> {
    let cfg = solver_cfg(a);
    match (op(&cfg), a.mode) {
        (Err(Error::Precondition(_)), ModeArg::Auto) => op(&SolverConfig { mode: Mode::Float, ..cfg }),
        (r, _) => r,
    }
}

fn field_arg(s: &str) -> Result<VectorField, Error> {
    if s.contains('=') {
        VectorField::parse(s)
    } else {
        catalog::combination_field(s, &Binding::default())
    }
}

fn verdict_text(v: &ZeroVerdict) -> String {
    match v {
        ZeroVerdict::ProvenZero => "proven zero".into(),
        ZeroVerdict::LikelyZero { samples, .. } => format!("zero at {samples} samples"),
        ZeroVerdict::NonZero { point, value } => format!("nonzero: {value} at {point:?}"),
    }
}

fn check_invariance(eq: &Equation, fields: &[String], s: &Sampling) -> Result<Outcome, Error> {
    let theta = member(eq)?;
    let cfg = zero_cfg(&theta, s)?;
    let (mut rows, mut text, mut all) = (vec![], String::new(), true);
    for spec in fields {
        let q = VectorField::parse(spec)?;
        let r = is_symmetry_with(&q, &theta, &cfg)?;
        all &= r.holds;
        let line = match r.failure() {
            None => format!("PASS {q}"),
            Some((eqn, v)) => format!("FAIL {q}: {eqn}: {}", verdict_text(v)),
        };
        text.push_str(&line);
        text.push('\n');
        rows.push(json!({ "field": q.spec(), "holds": r.holds, "exact": r.exact, "report": r }));
    }
    let v = json!({ "equation": theta.to_string(), "fields": rows, "verdict": if all { "PASS" } else { "FAIL" } });
    Ok(if all { Outcome::Pass(v, text) } else { Outcome::Fail(v, text) })
}

fn solve(eq: &Equation, a: &SolverArgs) -> Result<Outcome, Error> {
    let theta = member(eq)?;
    let sol = with_mode(a, |cfg| solve_symmetries(&theta, a.degree, cfg))?;
    let fields: Vec<String> = sol.span.basis.iter().map(|q| q.to_string()).collect();
    let closed = matches!(sol.closure, Closure::Closed(_));
    let mut text = format!("{} basis fields at degree {}{}\n", sol.dim(), a.degree, if sol.numeric { " (float elimination)" } else { "" });
    for (i, q) in fields.iter().enumerate() {
        text.push_str(&format!("  X{} = {q}\n", i + 1));
    }
    text.push_str(if closed { "closed under commutators\n" } else { "not closed at this degree\n" });
    for w in &sol.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let v = json!({
        "equation": theta.to_string(),
        "degree": a.degree,
        "dim": sol.dim(),
        "basis": sol.span.basis.iter().map(|q| q.spec()).collect::<Vec<_>>(),
        "closed": closed,
        "mode": if sol.numeric { "float" } else { "exact" },
        "unknowns": sol.unknowns,
        "equations": sol.equations,
        "warnings": sol.warnings,
    });
    Ok(Outcome::Pass(v, text))
}

fn profile(eq: &Equation, a: &SolverArgs) -> Result<Outcome, Error> {
    let theta = member(eq)?;
    let dims = with_mode(a, |cfg| dimension_profile(&theta, a.degree, cfg))?;
    let text = format!("{dims:?}\n");
    Ok(Outcome::Pass(json!({ "equation": theta.to_string(), "profile": dims }), text))
}

fn pushforward(eq: &Equation, map: &str, inverse: &str, s: &Sampling) -> Result<Outcome, Error> {
    let theta = member(eq)?;
    let cfg = zero_cfg(&theta, s)?;
    let m = PointTransformation::parse_spec_with_inverse(map, inverse, &cfg)?;
    let img = pushforward_theta_with(&m, &theta, theta.chart.clone(), &cfg)?;
    let v = json!({ "source": theta.to_string(), "map": m.to_string(), "f": img.f.to_string(), "g": img.g.to_string() });
    let text = format!("f~ = {}\ng~ = {}\n", img.f, img.g);
    Ok(Outcome::Pass(v, text))
}

fn verify_admissible_cmd(
    eq: &Equation,
    map: &str,
    inverse: Option<&str>,
    target: Option<(&str, &str)>,
    s: &Sampling,
) -> Result<Outcome, Error> {
    let theta = member(eq)?;
    let cfg = zero_cfg(&theta, s)?;
    let m = match inverse {
        Some(inv) => PointTransformation::parse_spec_with_inverse(map, inv, &cfg)?,
        None => PointTransformation::parse_spec(map)?,
    };
    let tgt = match target {
        Some((f, g)) => ClassMember::parse(f, g)?,
        None => pushforward_theta_with(&m, &theta, theta.chart.clone(), &cfg)?,
    };
    let r = verify_admissible_with(&theta, &m, &tgt, &cfg)?;
    let mut text = String::new();
    for c in &r.conditions {
        text.push_str(&format!("{} {}: {}\n", if c.holds { "PASS" } else { "FAIL" }, c.name, verdict_text(&c.verdict)));
    }
    text.push_str(if r.holds { "admissible\n" } else { "not admissible\n" });
    let v = json!({ "source": theta.to_string(), "target": tgt.to_string(), "map": m.to_string(), "report": r });
    Ok(if r.holds { Outcome::Pass(v, text) } else { Outcome::Fail(v, text) })
}

fn verify_catalog_cmd(jobs: Option<usize>) -> Result<Outcome, Error> {
    let report = catalog::verify_catalog(load_catalog(), jobs)?;
    let mut text = String::new();
    for c in report.failures() {
        text.push_str(&format!("FAIL {} [{}]: {}\n", c.id, c.citation, c.witness.as_deref().unwrap_or("")));
    }
    text.push_str(&report.summary_line());
    text.push('\n');
    let v = json!({
        "summary": report.summary_line(),
        "cases": report.cases,
        "family_instances": report.family_instances,
        "arrows": report.arrows,
        "checks": report.checks,
    });
    Ok(if report.all_pass() { Outcome::Pass(v, text) } else { Outcome::Fail(v, text) })
}

fn commutators(specs: &[String]) -> Result<Outcome, Error> {
    let fields = specs.iter().map(|s| field_arg(s)).collect::<Result<Vec<_>, _>>()?;
    let (mut rows, mut text) = (vec![], String::new());
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let c = commutator(&fields[i], &fields[j])?;
            text.push_str(&format!("[{}, {}] = {}\n", specs[i], specs[j], c));
            rows.push(json!({ "left": specs[i], "right": specs[j], "commutator": c.spec() }));
        }
    }
    Ok(Outcome::Pass(json!({ "commutators": rows }), text))
}

fn algebra_invariants(specs: &[String]) -> Result<Outcome, Error> {
    let fields = specs.iter().map(|s| field_arg(s)).collect::<Result<Vec<_>, _>>()?;
    let mut span = LieAlgebraSpan::with_config(fields, SpanConfig::default())?;
    let inv = span.invariants()?;
    let (p, z, n) = inv.killing_signature;
    let text = format!(
        "dim {}, derived dim {}, center dim {}, Killing signature (+{p}, 0:{z}, -{n})\n",
        inv.dim, inv.derived_dim, inv.center_dim
    );
    Ok(Outcome::Pass(json!({ "invariants": inv }), text))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::CheckInvariance { eq, fields, sampling } => check_invariance(eq, fields, sampling),
        Command::Solve { eq, solver } => solve(eq, solver),
        Command::Profile { eq, solver } => profile(eq, solver),
        Command::Pushforward { eq, map, inverse, sampling } => pushforward(eq, map, inverse, sampling),
        Command::VerifyAdmissible { eq, map, inverse, target_f, target_g, sampling } => {
            let target = target_f.as_deref().zip(target_g.as_deref());
            verify_admissible_cmd(eq, map, inverse.as_deref(), target, sampling)
        }
        Command::VerifyCatalog { jobs } => verify_catalog_cmd(*jobs),
        Command::Commutators { fields } => commutators(fields),
        Command::AlgebraInvariants { fields } => algebra_invariants(fields),
        Command::Catalog { action: CatalogAction::Export { format: ExportFormat::Json } } => {
            let v: Value = serde_json::from_str(&load_catalog().to_json()).map_err(|e| Error::Invalid(e.to_string()))?;
            let text = serde_json::to_string_pretty(&v).map_err(|e| Error::Invalid(e.to_string()))? + "\n";
            Ok(Outcome::Pass(v, text))
        }
    }
}

/// Input that could not be understood maps to the usage exit code.
fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Parse { .. } | Error::UnknownFunction { .. } | Error::InvalidMember(_) | Error::Invalid(_) | Error::UnknownEntry(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = |v: Value, text: String| {
        if cli.json {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable report"));
        } else {
            print!("{text}");
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass(v, text)) => {
            emit(v, text);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(v, text)) => {
            emit(v, text);
            ExitCode::from(1)
        }
        Err(e) => {
            let code = if is_usage_error(&e) { 2 } else { 1 };
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": code }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
