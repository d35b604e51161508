//! The classification as data: extension cases, families of admissible
//! transformations, additional equivalences between cases, subalgebra
//! lists of the equivalence algebra, and the verification drivers that
//! re-check every entry.

mod data;

use crate::deteq::{is_symmetry, ClassMember};
use crate::equiv::Generator;
use crate::expr::{eval_num, is_zero, parse, Chart, Expr, Point, Rational, ZeroConfig, ZeroVerdict};
use crate::jets::{VectorField, TXU};
use crate::liealg::{subspace_equal, Closure, Invariants, LieAlgebraSpan, SpanConfig};
use crate::ptrans::{pushforward_theta_with, verify_admissible_with, PointTransformation};
use crate::solver::{solve_symmetries, ExtraBasis, Mode, SolverConfig};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

/// Concrete values for the parameters and function slots of a template.
/// Parameter values are expressions without free symbols; slot values are
/// expressions in the dummy variable `s`, or in `t, x` for slots without an
/// argument.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Binding {
    pub label: String,
    pub params: BTreeMap<String, String>,
    pub slots: BTreeMap<String, String>,
}

impl Binding {
    pub fn new(params: &[(&str, &str)], slots: &[(&str, &str)]) -> Binding {
        let params: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let slots: BTreeMap<String, String> = slots.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let label = params.iter().chain(slots.iter()).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ");
        Binding { label, params, slots }
    }

    fn param_pairs(&self) -> Result<Vec<(String, Expr)>> {
        self.params.iter().map(|(k, v)| Ok((k.clone(), parse(v)?))).collect()
    }
}

/// A function slot such as `fhat(u)`; `arg` is the argument template, or
/// `None` when the bound expression is used verbatim.
#[derive(Clone, Debug, Serialize)]
pub struct Slot {
    pub name: String,
    pub arg: Option<String>,
}

/// Substitutes slots, then parameters, into `template`.
pub fn instantiate(template: &str, slots: &[Slot], b: &Binding) -> Result<Expr> {
    let params = b.param_pairs()?;
    let pairs: Vec<(&str, Expr)> = params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let mut e = parse(template)?;
    let mut slot_pairs = Vec::new();
    for s in slots {
        let Some(v) = b.slots.get(&s.name) else {
            if e.contains(&s.name) {
                return Err(Error::Precondition(format!("slot `{}` is unbound", s.name)));
            }
            continue;
        };
        let v = parse(v)?;
        let bound = match &s.arg {
            Some(a) => v.subst_pairs(&[("s", parse(a)?)]),
            None => v,
        };
        slot_pairs.push((s.name.as_str(), bound));
    }
    e = e.subst_pairs(&slot_pairs);
    Ok(e.subst_pairs(&pairs).simplify())
}

/// A vector-field template on (t, x, u).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldTemplate {
    /// Comma-separated `coord=expr` components.
    Components { spec: String },
    /// `Phi_x ∂_t + Phi_t ∂_x`.
    Rotation { phi: String },
    /// `Phi_x ∂_t + Phi_t ∂_x - 2 Phi_tx ∂_u`.
    RotationShift { phi: String },
}

impl FieldTemplate {
    /// `"R:phi"`, `"R':phi"` or a component spec.
    pub fn short(s: &str) -> FieldTemplate {
        if let Some(phi) = s.strip_prefix("R':") {
            FieldTemplate::RotationShift { phi: phi.into() }
        } else if let Some(phi) = s.strip_prefix("R:") {
            FieldTemplate::Rotation { phi: phi.into() }
        } else {
            FieldTemplate::Components { spec: s.into() }
        }
    }

    pub fn instantiate(&self, b: &Binding) -> Result<VectorField> {
        let params = b.param_pairs()?;
        let pairs: Vec<(&str, Expr)> = params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        let q = match self {
            FieldTemplate::Components { spec } => VectorField::parse(spec)?,
            FieldTemplate::Rotation { phi } | FieldTemplate::RotationShift { phi } => {
                let phi = parse(phi)?;
                let eta = match self {
                    FieldTemplate::RotationShift { .. } => -(Expr::integer(2) * phi.diff("t").diff("x")),
                    _ => Expr::zero(),
                };
                VectorField::txu(phi.diff("x"), phi.diff("t"), eta)
            }
        };
        let comps = q.comps.iter().map(|c| c.subst_pairs(&pairs).simplify()).collect();
        Ok(VectorField::new(&TXU, comps))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Basis {
    Fields { fields: Vec<FieldTemplate> },
    /// Polynomial slice `deg <= max_degree` of `τ∂_t + ξ∂_x - 2τ_t∂_u` with
    /// `τ_t = ξ_x`, `ξ_t = eps τ_x`; closure is checked on `deg <= closure_degree`.
    ConformalSlice { max_degree: usize, closure_degree: usize },
}

/// Parameter condition: every listed expression must be nonzero
/// (`nonzero`) or zero (`zero`) after substitution.
#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub text: String,
    pub nonzero: Vec<String>,
    pub zero: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularity {
    /// Generators of the equivalence subalgebra, e.g. `"2*Du - p*Dt + 2*D(delta)"`.
    Regular { subalgebra: Vec<String> },
    Singular { witness: FieldTemplate },
}

#[derive(Clone, Debug, Serialize)]
pub struct Probe {
    pub degree: usize,
    pub extra_basis: Vec<ExtraBasis>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogCase {
    pub id: String,
    pub citation: String,
    pub f: String,
    pub g: String,
    pub slots: Vec<Slot>,
    pub basis: Basis,
    pub constraints: Vec<Constraint>,
    pub instances: Vec<Binding>,
    pub regularity: Regularity,
    /// Solver maximality probe; absent when the basis lies outside every
    /// supported ansatz.
    pub probe: Option<Probe>,
    pub notes: Vec<String>,
}

impl CatalogCase {
    pub fn is_regular(&self) -> bool {
        matches!(self.regularity, Regularity::Regular { .. })
    }

    pub fn check_constraints(&self, b: &Binding) -> Result<()> {
        for c in &self.constraints {
            for (e, want_zero) in c.nonzero.iter().map(|e| (e, false)).chain(c.zero.iter().map(|e| (e, true))) {
                let v = instantiate(e, &[], b)?;
                let (n, _) = eval_num(&v, &Point::new(), 128)
                    .map_err(|err| Error::Precondition(format!("constraint `{}` of case {}: {err}", c.text, self.id)))?;
                if n.is_zero() != want_zero {
                    return Err(Error::Precondition(format!("case {} with {}: constraint `{}` violated", self.id, b.label, c.text)));
                }
            }
        }
        Ok(())
    }

    pub fn member(&self, b: &Binding) -> Result<ClassMember> {
        ClassMember::new(instantiate(&self.f, &self.slots, b)?, instantiate(&self.g, &self.slots, b)?)
    }

    /// The extension basis under `b`; only the parameters of `b` are used.
    pub fn basis_fields(&self, b: &Binding) -> Result<Vec<VectorField>> {
        match &self.basis {
            Basis::Fields { fields } => fields.iter().map(|f| f.instantiate(b)).collect(),
            Basis::ConformalSlice { max_degree, .. } => conformal_slice(eps_of(b)?, *max_degree),
        }
    }

    /// Basis on which closure is checked, always containing `∂_t`.
    pub fn closure_basis(&self, b: &Binding) -> Result<Vec<VectorField>> {
        let mut fields = match &self.basis {
            Basis::ConformalSlice { closure_degree, .. } => return conformal_slice(eps_of(b)?, *closure_degree),
            Basis::Fields { .. } => self.basis_fields(b)?,
        };
        fields.insert(0, time_shift());
        Ok(fields)
    }

    /// Dimension of the full algebra, kernel included.
    pub fn documented_dim(&self, b: &Binding) -> Result<usize> {
        Ok(self.closure_basis(b)?.len())
    }
}

fn time_shift() -> VectorField {
    VectorField::txu(Expr::one(), Expr::zero(), Expr::zero())
}

fn eps_of(b: &Binding) -> Result<i64> {
    let e = instantiate("eps", &[], b)?;
    match e.as_const().map(|q| q.to_string()) {
        Some(s) if s == "1" => Ok(1),
        Some(s) if s == "-1" => Ok(-1),
        _ => Err(Error::Precondition(format!("eps must be ±1, got {e}"))),
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Polynomial solutions of `τ_t = ξ_x`, `ξ_t = eps τ_x` up to `deg`, as
/// fields `τ∂_t + ξ∂_x - 2τ_t∂_u`.
pub fn conformal_slice(eps: i64, deg: usize) -> Result<Vec<VectorField>> {
    let (t, x) = (Expr::sym("t"), Expr::sym("x"));
    let field = |tau: Expr, xi: Expr| {
        let eta = -(Expr::integer(2) * tau.diff("t"));
        VectorField::txu(tau.simplify(), xi.simplify(), eta.simplify())
    };
    let mut out = Vec::new();
    for k in 0..=deg {
        if eps == 1 {
            let a = (&t + &x).powi(k as i64);
            let b = (&t - &x).powi(k as i64);
            out.push(field(a.clone(), a));
            out.push(field(b.clone(), -b));
        } else {
            // xi + i tau = (x + i t)^k and i (x + i t)^k.
            let (mut re, mut im) = (Vec::new(), Vec::new());
            for j in 0..=k {
                let term = Expr::integer(binomial(k, j)) * x.powi((k - j) as i64) * t.powi(j as i64);
                match j % 4 {
                    0 => re.push(term),
                    1 => im.push(term),
                    2 => re.push(-term),
                    _ => im.push(-term),
                }
            }
            let (re, im) = (Expr::add_all(re), Expr::add_all(im));
            out.push(field(im.clone(), re.clone()));
            out.push(field(re, -im));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformationFamily {
    pub id: String,
    pub citation: String,
    pub source: (String, String),
    pub target: (String, String),
    pub slots: Vec<Slot>,
    pub map: [String; 3],
    pub inverse: [String; 3],
    pub domain: String,
    pub instances: Vec<Binding>,
    /// Sampling box scale for checks that hold on one branch only.
    pub sample_scale: Option<String>,
    /// `U = u + ln|T_t^2 - eps T_x^2|` is derived from the `(T, X)` slots.
    pub derived_u: bool,
}

impl TransformationFamily {
    pub fn zero_config(&self) -> Result<ZeroConfig> {
        let mut cfg = ZeroConfig::default();
        if let Some(s) = &self.sample_scale {
            let e = parse(s)?;
            cfg = cfg.with_scale(e.as_const().cloned().ok_or_else(|| Error::Invalid(format!("sample scale {s}")))?);
        }
        Ok(cfg)
    }

    pub fn source_member(&self, b: &Binding) -> Result<ClassMember> {
        ClassMember::new(instantiate(&self.source.0, &self.slots, b)?, instantiate(&self.source.1, &self.slots, b)?)
    }

    pub fn target_member(&self, b: &Binding) -> Result<ClassMember> {
        ClassMember::new(instantiate(&self.target.0, &self.slots, b)?, instantiate(&self.target.1, &self.slots, b)?)
    }

    /// The map with its checked inverse.
    pub fn point_map(&self, b: &Binding) -> Result<PointTransformation> {
        let comp = |s: &str| instantiate(s, &self.slots, b);
        let (mut m, mut inv) = ([comp(&self.map[0])?, comp(&self.map[1])?, comp(&self.map[2])?], [
            comp(&self.inverse[0])?,
            comp(&self.inverse[1])?,
            comp(&self.inverse[2])?,
        ]);
        if self.derived_u {
            let eps = instantiate("eps", &[], b)?;
            let jac = m[0].diff("t").powi(2) - eps * m[0].diff("x").powi(2);
            let jac_back = jac.subst_pairs(&[("t", inv[0].clone()), ("x", inv[1].clone())]);
            m[2] = (&m[2] - jac.simplify().abs().ln()).simplify();
            inv[2] = (&inv[2] + jac_back.abs().ln()).simplify();
        }
        let [t, x, u] = m;
        let [it, ix, iu] = inv;
        PointTransformation::new(t, x, u).with_inverse_on(it, ix, iu, &self.zero_config()?)
    }
}

/// A recorded mapping between classification cases.
#[derive(Clone, Debug, Serialize)]
pub struct Arrow {
    pub id: String,
    pub citation: String,
    pub family: String,
    /// Explicit map and inverse when the arrow composes the family map with
    /// a discrete transformation.
    pub map_override: Option<([String; 3], [String; 3])>,
    pub source: (String, Binding),
    pub target: (String, Binding),
}

/// A sampled subalgebra of the equivalence algebra.
#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraEntry {
    pub id: String,
    pub citation: String,
    pub generators: Vec<String>,
    pub params: Binding,
    /// Expected outcome of the appropriateness test.
    pub appropriate: bool,
    pub case: Option<(String, Binding)>,
}

/// A kernel algebra of the `(eps u^-4, mu(x) u^-3 + sigma u)` subclass.
#[derive(Clone, Debug, Serialize)]
pub struct KernelAlgebra {
    pub sigma: i64,
    pub citation: String,
    pub fields: Vec<FieldTemplate>,
    /// Family conjugating this algebra onto the `sigma = 0` one.
    pub conjugator: Option<String>,
}

/// A row of the extension list for the subclass, by the shape of `mu`.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialCase {
    pub id: String,
    pub citation: String,
    pub sigma: i64,
    pub mu_kind: String,
    pub samples: Vec<Binding>,
    pub extension: Vec<FieldTemplate>,
}

/// A sampled normalization transformation within the `sigma = 0` subclass.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizationSample {
    pub id: String,
    pub citation: String,
    pub params: Binding,
}

/// Symmetry algebras that separate the four shapes of `g^1` for
/// `u_tt = eps u_xx + eps2 e^u + g^1(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatingAlgebra {
    pub id: String,
    pub citation: String,
    pub f: String,
    pub g: String,
    pub fields: Vec<FieldTemplate>,
    pub expected: Invariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct Catalog {
    pub cases: Vec<CatalogCase>,
    pub families: Vec<TransformationFamily>,
    pub arrows: Vec<Arrow>,
    pub subalgebras: Vec<SubalgebraEntry>,
    pub kernels: Vec<KernelAlgebra>,
    pub special_cases: Vec<SpecialCase>,
    pub normalizations: Vec<NormalizationSample>,
    pub separating: Vec<SeparatingAlgebra>,
}

pub fn load_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(data::build)
}

impl Catalog {
    pub fn case(&self, id: &str) -> Result<&CatalogCase> {
        self.cases.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownEntry(id.into()))
    }

    pub fn family(&self, id: &str) -> Result<&TransformationFamily> {
        self.families.iter().find(|f| f.id == id).ok_or_else(|| Error::UnknownEntry(id.into()))
    }

    pub fn family_instances(&self) -> usize {
        self.families.iter().map(|f| f.instances.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub citation: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub mode: Mode,
    pub millis: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Collects sub-check outcomes for one report.
struct Tally {
    id: String,
    citation: String,
    start: Instant,
    exact: bool,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(id: impl Into<String>, citation: &str) -> Tally {
        Tally { id: id.into(), citation: citation.into(), start: Instant::now(), exact: true, failures: vec![], notes: vec![] }
    }

    fn verdict(&mut self, what: &str, v: &ZeroVerdict, want_zero: bool) {
        self.exact &= v.is_exact();
        if v.holds() != want_zero {
            self.failures.push(format!("{what}: {v:?}"));
        }
    }

    fn require(&mut self, what: impl Into<String>, ok: bool) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    /// Records an error as a failed sub-check.
    fn run<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn symmetry(&mut self, q: &VectorField, theta: &ClassMember) {
        if let Some(r) = self.run(&format!("is_symmetry({q})"), is_symmetry(q, theta)) {
            self.exact &= r.exact;
            if !r.holds {
                let detail = r.failure().map(|(name, v)| format!("{name}: {v:?}")).unwrap_or_else(|| format!("{:?}", r.criterion));
                self.failures.push(format!("{q} is not a symmetry of {}: {detail}", theta.fingerprint()));
            }
        }
    }

    fn closure(&mut self, fields: Vec<VectorField>, chart: &Chart) {
        let span = self.run("basis", LieAlgebraSpan::with_config(fields, SpanConfig::with_chart(chart.clone())));
        if let Some(mut span) = span {
            if let Some(c) = self.run("closure", span.closure_check()) {
                if let Closure::NotClosed { pair, residual } = c {
                    self.failures.push(format!("not closed: [b{}, b{}] = {residual}", pair.0, pair.1));
                }
            }
        }
    }

    fn finish(self) -> CheckReport {
        let pass = self.failures.is_empty();
        CheckReport {
            id: self.id,
            citation: self.citation,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witness: (!pass).then(|| self.failures.join("; ")),
            mode: if self.exact { Mode::Exact } else { Mode::Float },
            millis: self.start.elapsed().as_millis() as u64,
            notes: self.notes,
        }
    }
}

// ---------------------------------------------------------------------------
// Equivalence-algebra combinations

/// Parses `"2*Du - q*Dt + 2*D(delta) - Z(4)"` into coefficient/generator
/// pairs; names are `Pt`, `Dt`, `Du`, `D(zeta)` and `Z(chi)`.
pub fn parse_combination(s: &str, b: &Binding) -> Result<Vec<(Expr, Generator)>> {
    let mut terms = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    let bytes = s.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                terms.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    let mut out = Vec::new();
    for raw in terms {
        let term = raw.trim();
        let (sign, body) = match term.strip_prefix('-') {
            Some(r) => (-1, r.trim()),
            None => (1, term.strip_prefix('+').unwrap_or(term).trim()),
        };
        let (coeff, gen) = split_generator(body).ok_or_else(|| Error::Invalid(format!("bad generator term `{term}` in `{s}`")))?;
        let coeff = if coeff.is_empty() { Expr::one() } else { instantiate(coeff, &[], b)? };
        let gen = match gen {
            "Pt" => Generator::TimeShift,
            "Dt" => Generator::TimeScale,
            "Du" => Generator::Scale,
            g if g.starts_with("D(") => Generator::Change(instantiate(&g[2..g.len() - 1], &[], b)?),
            g => Generator::Shift(instantiate(&g[2..g.len() - 1], &[], b)?),
        };
        out.push((Expr::integer(sign) * coeff, gen));
    }
    Ok(out)
}

fn split_generator(body: &str) -> Option<(&str, &str)> {
    let start = if body.ends_with(')') {
        let mut depth = 0;
        let mut open = None;
        for (i, c) in body.char_indices().rev() {
            match c {
                ')' => depth += 1,
                '(' => {
                    depth -= 1;
                    if depth == 0 {
                        open = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let i = open?.checked_sub(1)?;
        if !matches!(body.as_bytes()[i], b'D' | b'Z') {
            return None;
        }
        i
    } else {
        body.len().checked_sub(2)?
    };
    let gen = &body[start..];
    if !(matches!(gen, "Pt" | "Dt" | "Du") || gen.ends_with(')')) {
        return None;
    }
    Some((body[..start].trim().trim_end_matches('*').trim(), gen))
}

/// The combination as a field on (t, x, u, f, g).
pub fn combination_field(s: &str, b: &Binding) -> Result<VectorField> {
    let terms = parse_combination(s, b)?;
    let fields: Vec<VectorField> = terms.iter().map(|(_, g)| g.field()).collect();
    let coeffs: Vec<Expr> = terms.iter().map(|(c, _)| c.clone()).collect();
    let q = VectorField::linear_combination(&fields, &coeffs);
    Ok(VectorField::new(&q.coords.iter().map(|c| c.as_str()).collect::<Vec<_>>(), q.comps.iter().map(|c| c.simplify()).collect()))
}

/// Generators over which singular witnesses are probed.
pub fn probe_slice() -> Vec<Generator> {
    let mut gens = vec![Generator::TimeShift, Generator::TimeScale, Generator::Scale];
    for k in 0..=3 {
        let xk = Expr::sym("x").powi(k);
        gens.push(Generator::Change(xk.clone()));
        gens.push(Generator::Shift(xk));
    }
    gens
}

/// Whether some combination of the probe slice projects onto `witness`
/// and preserves `(f, g)`. Returns the combination if so.
pub fn witness_is_projectable(witness: &VectorField, theta: &ClassMember) -> Result<Option<Vec<Rational>>> {
    let gens = probe_slice();
    let full: Vec<VectorField> = gens.iter().map(|g| g.field()).collect();
    let projected: Vec<VectorField> = full.iter().map(|q| q.project(&TXU)).collect();
    let cfg = SpanConfig::with_chart(theta.chart.clone());
    let Some(c) = crate::liealg::coordinates(&projected, witness, &cfg)? else { return Ok(None) };
    let combo = VectorField::linear_combination(&full, &c.iter().map(|q| Expr::constant(q.clone())).collect::<Vec<_>>());
    let on_theta = |e: &Expr| e.subst_pairs(&[("f", theta.f.clone()), ("g", theta.g.clone())]);
    let (tau, xi, eta) = (on_theta(&combo.comps[0]), on_theta(&combo.comps[1]), on_theta(&combo.comps[2]));
    let along = |h: &Expr| &xi * h.diff("x") + &eta * h.diff("u") + &tau * h.diff("t");
    let zc = theta.zero_config();
    let pf = is_zero(&(on_theta(&combo.comps[3]) - along(&theta.f)), &zc)?.holds();
    let pg = is_zero(&(on_theta(&combo.comps[4]) - along(&theta.g)), &zc)?.holds();
    Ok((pf && pg).then_some(c))
}

// ---------------------------------------------------------------------------
// Drivers

/// Per-field symmetry, closure, regularity data and the solver probe for
/// one instantiation of a case.
pub fn verify_case(case: &CatalogCase, b: &Binding) -> Result<CheckReport> {
    case.check_constraints(b)?;
    let mut t = Tally::new(format!("case:{}#{}", case.id, b.label), &case.citation);
    let Some(theta) = t.run("member", case.member(b)) else { return Ok(t.finish()) };
    let Some(fields) = t.run("basis", case.basis_fields(b)) else { return Ok(t.finish()) };
    for q in &fields {
        t.symmetry(q, &theta);
    }
    if let Some(cl) = t.run("closure basis", case.closure_basis(b)) {
        t.closure(cl, &theta.chart);
    }
    let documented = case.closure_basis(b).ok().and_then(|mut v| {
        if let Basis::ConformalSlice { .. } = case.basis {
            v = fields.clone();
        }
        LieAlgebraSpan::with_config(v, SpanConfig::with_chart(theta.chart.clone())).ok()
    });
    match &case.regularity {
        Regularity::Regular { subalgebra } => {
            let proj: Result<Vec<VectorField>> =
                subalgebra.iter().map(|s| combination_field(s, b).map(|q| q.project(&TXU))).collect();
            if let (Some(mut proj), Some(doc)) = (t.run("subalgebra", proj), documented.as_ref()) {
                proj.insert(0, time_shift());
                if let Some(span) = t.run("projected span", LieAlgebraSpan::with_config(proj, doc.cfg.clone())) {
                    let eq = t.run("span comparison", subspace_equal(&span, doc)).unwrap_or(false);
                    t.require("projection of the recorded subalgebra differs from the basis", eq);
                }
            }
        }
        Regularity::Singular { witness } => {
            if let Some(w) = t.run("witness", witness.instantiate(b)) {
                t.symmetry(&w, &theta);
                if let Some(r) = t.run("witness probe", witness_is_projectable(&w, &theta)) {
                    t.require(format!("witness {w} is the projection of an equivalence generator combination {r:?}"), r.is_none());
                }
            }
        }
    }
    match (&case.probe, documented.as_ref()) {
        (Some(p), Some(doc)) => probe_case(&mut t, &theta, p, doc),
        (None, _) => t.notes.push("solver probe skipped: basis outside the supported ansatz".into()),
        _ => {}
    }
    Ok(t.finish())
}

fn probe_case(t: &mut Tally, theta: &ClassMember, p: &Probe, doc: &LieAlgebraSpan) {
    let mut cfg = SolverConfig { extra_basis: p.extra_basis.clone(), ..SolverConfig::default() };
    if !p.extra_basis.is_empty() {
        cfg.mode = Mode::Float;
    }
    let mut sol = solve_symmetries(theta, p.degree, &cfg);
    if matches!(sol, Err(Error::Precondition(_))) {
        cfg.mode = Mode::Float;
        sol = solve_symmetries(theta, p.degree, &cfg);
    }
    if cfg.mode == Mode::Float {
        t.exact = false;
    }
    if let Some(sol) = t.run("solver probe", sol) {
        if sol.dim() != doc.dim() {
            let found: Vec<String> = sol.span.basis.iter().map(|q| q.to_string()).collect();
            t.failures.push(format!("solver probe at degree {} found dim {} (documented {}): {found:?}", p.degree, sol.dim(), doc.dim()));
        } else {
            let eq = t.run("probe comparison", subspace_equal(&sol.span, doc)).unwrap_or(false);
            t.require("solver span differs from the documented basis", eq);
        }
    }
}

pub fn verify_family(fam: &TransformationFamily, b: &Binding) -> CheckReport {
    let mut t = Tally::new(format!("family:{}#{}", fam.id, b.label), &fam.citation);
    let (Some(src), Some(tgt)) = (t.run("source", fam.source_member(b)), t.run("target", fam.target_member(b))) else {
        return t.finish();
    };
    let Some(map) = t.run("map", fam.point_map(b)) else { return t.finish() };
    if fam.derived_u {
        t.conformal_constraints(fam, b);
    }
    let cfg = match fam.zero_config() {
        Ok(c) => c.with_chart(src.chart.clone()),
        Err(e) => {
            t.failures.push(e.to_string());
            return t.finish();
        }
    };
    if let Some(r) = t.run("verify_admissible", verify_admissible_with(&src, &map, &tgt, &cfg)) {
        t.exact &= r.exact;
        for c in r.conditions.iter().filter(|c| !c.holds) {
            t.failures.push(format!("{}: {:?}", c.name, c.verdict));
        }
    }
    t.finish()
}

impl Tally {
    /// `T_t = X_x`, `X_t = eps T_x`, `(T_tt, T_x) != (0, 0)`.
    fn conformal_constraints(&mut self, fam: &TransformationFamily, b: &Binding) {
        let get = |s: &str| instantiate(s, &fam.slots, b);
        let (Some(tt), Some(xx), Some(eps)) = (self.run("T", get("T")), self.run("X", get("X")), self.run("eps", get("eps"))) else {
            return;
        };
        let cfg = ZeroConfig::default();
        let checks = [
            ("T_t - X_x", tt.diff("t") - xx.diff("x"), true),
            ("X_t - eps T_x", xx.diff("t") - &eps * tt.diff("x"), true),
        ];
        for (name, e, want) in checks {
            if let Some(v) = self.run(name, is_zero(&e, &cfg)) {
                self.verdict(name, &v, want);
            }
        }
        let nd = [tt.diff("t").diff("t"), tt.diff("x")];
        let all_zero = nd.iter().all(|e| is_zero(e, &cfg).map(|v| v.holds()).unwrap_or(true));
        self.require("(T_tt, T_x) vanishes", !all_zero);
    }
}

pub fn verify_arrow(cat: &Catalog, a: &Arrow) -> CheckReport {
    let mut t = Tally::new(format!("arrow:{}", a.id), &a.citation);
    let res = (|| -> Result<(ZeroConfig, ClassMember, ClassMember)> {
        let src_case = cat.case(&a.source.0)?;
        let tgt_case = cat.case(&a.target.0)?;
        let src = src_case.member(&a.source.1)?;
        let tgt = tgt_case.member(&a.target.1)?;
        let fam = cat.family(&a.family)?;
        let map = match &a.map_override {
            Some((m, i)) => PointTransformation::parse(&m[0], &m[1], &m[2])?.with_inverse(parse(&i[0])?, parse(&i[1])?, parse(&i[2])?)?,
            None => fam.point_map(&Binding::default())?,
        };
        let cfg = fam.zero_config()?;
        let img = pushforward_theta_with(&map, &src, tgt.chart.clone(), &cfg)?;
        Ok((cfg.with_chart(tgt.chart.clone()), img, tgt))
    })();
    if let Some((cfg, img, tgt)) = t.run("pushforward", res) {
        for (name, d) in [("f", &img.f - &tgt.f), ("g", &img.g - &tgt.g)] {
            if let Some(v) = t.run(name, is_zero(&d, &cfg)) {
                if !v.holds() {
                    t.failures.push(format!("{name} mismatch: image {} vs target {}", img.fingerprint(), tgt.fingerprint()));
                }
                t.exact &= v.is_exact();
            }
        }
    }
    t.finish()
}

/// Closure, the appropriateness test, and the projection correspondence.
pub fn verify_subalgebra(cat: &Catalog, s: &SubalgebraEntry) -> CheckReport {
    let mut t = Tally::new(format!("subalgebra:{}", s.id), &s.citation);
    let fields: Result<Vec<VectorField>> = s.generators.iter().map(|g| combination_field(g, &s.params)).collect();
    let Some(fields) = t.run("generators", fields) else { return t.finish() };
    t.closure(fields.clone(), &Chart::default());
    match appropriate(&fields) {
        Ok(ok) => t.require(format!("appropriateness test gave {ok}, expected {}", s.appropriate), ok == s.appropriate),
        Err(e) => t.failures.push(e.to_string()),
    }
    if let Some((id, b)) = &s.case {
        let res = (|| -> Result<bool> {
            let case = cat.case(id)?;
            let cfg = SpanConfig::default();
            let mut proj: Vec<VectorField> = fields.iter().map(|q| q.project(&TXU)).collect();
            proj.insert(0, time_shift());
            let a = LieAlgebraSpan::with_config(proj, cfg.clone())?;
            let mut doc = case.basis_fields(b)?;
            doc.insert(0, time_shift());
            subspace_equal(&a, &LieAlgebraSpan::with_config(doc, cfg)?)
        })();
        if let Some(eq) = t.run("projection", res) {
            t.require(format!("projection differs from the basis of case {id}"), eq);
        }
    }
    t.finish()
}

/// `s ∩ ⟨Du, Z(χ)⟩ = s ∩ ⟨Dt⟩ = {0}` for a span of equivalence-algebra
/// fields: the `(τ, ξ)` parts are independent and `Dt` is outside the span.
pub fn appropriate(fields: &[VectorField]) -> Result<bool> {
    let cfg = SpanConfig::default();
    let tx: Vec<VectorField> = fields.iter().map(|q| q.project(&["t", "x"])).collect();
    if crate::liealg::field_rank(&tx, &cfg)? != fields.len() {
        return Ok(false);
    }
    Ok(crate::liealg::coordinates(fields, &Generator::TimeScale.field(), &cfg)?.is_none())
}

fn special_member(sigma: i64, b: &Binding) -> Result<ClassMember> {
    let slots = [Slot { name: "mu".into(), arg: Some("x".into()) }];
    let f = instantiate("eps*u^(-4)", &slots, b)?;
    let g = instantiate(&format!("mu*u^(-3) + ({sigma})*u"), &slots, b)?;
    ClassMember::new(f, g)
}

/// Kernel algebra of the subclass: symmetry for every sample and, via the
/// stored conjugator, equal to the `sigma = 0` kernel after push-forward.
pub fn verify_kernel(cat: &Catalog, k: &KernelAlgebra) -> CheckReport {
    let mut t = Tally::new(format!("kernel:sigma={}", k.sigma), &k.citation);
    let samples = [
        Binding::new(&[("eps", "1")], &[("mu", "s")]),
        Binding::new(&[("eps", "-1")], &[("mu", "s^3 + s")]),
        Binding::new(&[("eps", "1")], &[("mu", "2*s^(-2)")]),
        Binding::new(&[("eps", "-1")], &[("mu", "1")]),
    ];
    let Some(fields) = t.run("fields", k.fields.iter().map(|f| f.instantiate(&Binding::default())).collect::<Result<Vec<_>>>()) else {
        return t.finish();
    };
    for b in &samples {
        if let Some(theta) = t.run("member", special_member(k.sigma, b)) {
            for q in &fields {
                t.symmetry(q, &theta);
            }
        }
    }
    t.closure(fields.clone(), &Chart::default());
    if let Some(fid) = &k.conjugator {
        let res = (|| -> Result<bool> {
            let map = cat.family(fid)?.point_map(&Binding::default())?;
            let pushed = fields.iter().map(|q| map.pushforward_field(q)).collect::<Result<Vec<_>>>()?;
            let zero = cat.kernels.iter().find(|k| k.sigma == 0).ok_or_else(|| Error::UnknownEntry("kernel sigma=0".into()))?;
            let base = zero.fields.iter().map(|f| f.instantiate(&Binding::default())).collect::<Result<Vec<_>>>()?;
            let cfg = SpanConfig::default();
            subspace_equal(&LieAlgebraSpan::with_config(pushed, cfg.clone())?, &LieAlgebraSpan::with_config(base, cfg)?)
        })();
        if let Some(eq) = t.run("conjugation", res) {
            t.require(format!("{fid} does not conjugate the kernel onto the sigma = 0 kernel"), eq);
        }
    }
    t.finish()
}

pub fn verify_special_case(cat: &Catalog, s: &SpecialCase) -> CheckReport {
    let mut t = Tally::new(format!("special:{}", s.id), &s.citation);
    let Some(kernel) = cat.kernels.iter().find(|k| k.sigma == s.sigma) else {
        t.failures.push(format!("no kernel for sigma = {}", s.sigma));
        return t.finish();
    };
    let all: Vec<&FieldTemplate> = kernel.fields.iter().chain(&s.extension).collect();
    for b in &s.samples {
        let Some(theta) = t.run("member", special_member(s.sigma, b)) else { continue };
        let Some(fields) = t.run("fields", all.iter().map(|f| f.instantiate(b)).collect::<Result<Vec<_>>>()) else { continue };
        for q in &fields {
            t.symmetry(q, &theta);
        }
        t.closure(fields, &theta.chart);
    }
    t.finish()
}

/// `t -> (a1 t + a0)/(a3 t + a2)`, `x -> b1 x + b0`,
/// `u -> sqrt|T_t / b1| u` maps `(eps u^-4, mu u^-3)` to
/// `(eps u^-4, b1^-2 mu((x - b0)/b1) u^-3)`.
pub fn verify_normalization(n: &NormalizationSample) -> CheckReport {
    let mut t = Tally::new(format!("normalization:{}", n.id), &n.citation);
    let res = (|| -> Result<_> {
        let b = &n.params;
        let slots = [Slot { name: "mu".into(), arg: Some("x".into()) }];
        let src = ClassMember::new(instantiate("eps*u^(-4)", &slots, b)?, instantiate("mu*u^(-3)", &slots, b)?);
        let target_slots = [Slot { name: "mu".into(), arg: Some("(x - b0)/b1".into()) }];
        let tgt = ClassMember::new(instantiate("eps*u^(-4)", &target_slots, b)?, instantiate("b1^(-2)*mu*u^(-3)", &target_slots, b)?);
        let m = PointTransformation::new(
            instantiate("(a1*t + a0)/(a3*t + a2)", &[], b)?,
            instantiate("b1*x + b0", &[], b)?,
            instantiate("abs((a1*a2 - a0*a3)/b1)^(1/2)*u/abs(a3*t + a2)", &[], b)?,
        );
        let (src, tgt) = (src?, tgt?);
        verify_admissible_with(&src, &m, &tgt, &src.zero_config())
    })();
    if let Some(r) = t.run("verify_admissible", res) {
        t.exact &= r.exact;
        for c in r.conditions.iter().filter(|c| !c.holds) {
            t.failures.push(format!("{}: {:?}", c.name, c.verdict));
        }
    }
    t.finish()
}

pub fn verify_separating(all: &[SeparatingAlgebra], s: &SeparatingAlgebra) -> CheckReport {
    let mut t = Tally::new(format!("separating:{}", s.id), &s.citation);
    let Some(theta) = t.run("member", ClassMember::parse(&s.f, &s.g)) else { return t.finish() };
    let Some(fields) = t.run("fields", s.fields.iter().map(|f| f.instantiate(&Binding::default())).collect::<Result<Vec<_>>>()) else {
        return t.finish();
    };
    for q in &fields {
        t.symmetry(q, &theta);
    }
    let inv = LieAlgebraSpan::with_config(fields, SpanConfig::with_chart(theta.chart.clone())).and_then(|mut s| s.invariants());
    if let Some(inv) = t.run("invariants", inv) {
        t.require(format!("invariants {inv:?} differ from expected {:?}", s.expected), inv == s.expected);
        t.notes.push(format!("invariants {inv:?}"));
    }
    let clash = all.iter().filter(|o| o.id != s.id && o.expected == s.expected).map(|o| o.id.clone()).collect::<Vec<_>>();
    t.require(format!("invariants coincide with {clash:?}"), clash.is_empty());
    t.finish()
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub cases: usize,
    pub family_instances: usize,
    pub arrows: usize,
    pub checks: Vec<CheckReport>,
}

impl CatalogReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn summary_line(&self) -> String {
        let status = match self.failures().len() {
            0 => "all PASS".to_string(),
            n => format!("{n} of {} checks FAIL", self.checks.len()),
        };
        format!("{} cases, {} family instances, {} additional equivalences: {status}", self.cases, self.family_instances, self.arrows)
    }
}

enum Job<'a> {
    Case(&'a CatalogCase, &'a Binding),
    Family(&'a TransformationFamily, &'a Binding),
    Arrow(&'a Arrow),
    Subalgebra(&'a SubalgebraEntry),
    Kernel(&'a KernelAlgebra),
    Special(&'a SpecialCase),
    Normalization(&'a NormalizationSample),
    Separating(&'a SeparatingAlgebra),
}

/// Runs every driver over every entry on a pool of `jobs` threads
/// (available parallelism when `None`). Reports are sorted by id.
pub fn verify_catalog(cat: &Catalog, jobs: Option<usize>) -> Result<CatalogReport> {
    let mut work: Vec<Job> = Vec::new();
    for c in &cat.cases {
        work.extend(c.instances.iter().map(|b| Job::Case(c, b)));
    }
    for f in &cat.families {
        work.extend(f.instances.iter().map(|b| Job::Family(f, b)));
    }
    work.extend(cat.arrows.iter().map(Job::Arrow));
    work.extend(cat.subalgebras.iter().map(Job::Subalgebra));
    work.extend(cat.kernels.iter().map(Job::Kernel));
    work.extend(cat.special_cases.iter().map(Job::Special));
    work.extend(cat.normalizations.iter().map(Job::Normalization));
    work.extend(cat.separating.iter().map(Job::Separating));
    let run = |j: &Job| -> Result<CheckReport> {
        Ok(match j {
            Job::Case(c, b) => verify_case(c, b)?,
            Job::Family(f, b) => verify_family(f, b),
            Job::Arrow(a) => verify_arrow(cat, a),
            Job::Subalgebra(s) => verify_subalgebra(cat, s),
            Job::Kernel(k) => verify_kernel(cat, k),
            Job::Special(s) => verify_special_case(cat, s),
            Job::Normalization(n) => verify_normalization(n),
            Job::Separating(s) => verify_separating(&cat.separating, s),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let mut checks = pool.install(|| work.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(CatalogReport { cases: cat.cases.len(), family_instances: cat.family_instances(), arrows: cat.arrows.len(), checks })
}

#[cfg(test)]
mod tests;
