//! Point transformations of (t, x, u), verification of admissible
//! transformations between class members, and the groupoid operations.

use crate::deteq::ClassMember;
use crate::expr::{eval_num, is_zero, parse, rat, rationalize, Chart, ChartSign, Expr, Point, ZeroConfig, ZeroVerdict};
use crate::jets::{VectorField, TXU};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `(t, x, u) -> (T, X, U)`, optionally with an explicit inverse whose
/// components are written in the same coordinate names.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct PointTransformation {
    pub t: Expr,
    pub x: Expr,
    pub u: Expr,
    pub inverse: Option<Box<PointTransformation>>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    #[serde(rename = "T")]
    t: String,
    #[serde(rename = "X")]
    x: String,
    #[serde(rename = "U")]
    u: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<Box<MapRepr>>,
}

impl TryFrom<MapRepr> for PointTransformation {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        let mut m = PointTransformation::parse(&r.t, &r.x, &r.u)?;
        if let Some(inv) = r.inverse {
            let i = PointTransformation::try_from(*inv)?;
            m = m.with_inverse(i.t, i.x, i.u)?;
        }
        Ok(m)
    }
}

impl From<PointTransformation> for MapRepr {
    fn from(m: PointTransformation) -> Self {
        MapRepr {
            t: m.t.to_string(),
            x: m.x.to_string(),
            u: m.u.to_string(),
            inverse: m.inverse.map(|i| Box::new(MapRepr::from(PointTransformation { inverse: None, ..*i }))),
        }
    }
}

impl fmt::Debug for PointTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointTransformation[{self}]")
    }
}

impl fmt::Display for PointTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t~ = {}, x~ = {}, u~ = {}", self.t, self.x, self.u)
    }
}

impl PointTransformation {
    pub fn new(t: Expr, x: Expr, u: Expr) -> PointTransformation {
        PointTransformation { t: t.simplify(), x: x.simplify(), u: u.simplify(), inverse: None }
    }

    pub fn parse(t: &str, x: &str, u: &str) -> Result<PointTransformation> {
        Ok(PointTransformation::new(parse(t)?, parse(x)?, parse(u)?))
    }

    /// Parses `"t=expr, x=expr, u=expr"`; omitted components are the
    /// identity.
    pub fn parse_spec(spec: &str) -> Result<PointTransformation> {
        let mut comps = [Expr::sym("t"), Expr::sym("x"), Expr::sym("u")];
        for chunk in crate::jets::split_top_level(spec) {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (k, v) = chunk
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("map component `{chunk}` is not of the form coord=expr")))?;
            let slot = match k.trim() {
                "t" => 0,
                "x" => 1,
                "u" => 2,
                other => return Err(Error::Invalid(format!("unknown coordinate `{other}`"))),
            };
            comps[slot] = parse(v.trim())?;
        }
        let [t, x, u] = comps;
        Ok(PointTransformation::new(t, x, u))
    }

    /// [`parse_spec`](Self::parse_spec) for a map and its stated inverse.
    pub fn parse_spec_with_inverse(map: &str, inverse: &str, cfg: &ZeroConfig) -> Result<PointTransformation> {
        let inv = PointTransformation::parse_spec(inverse)?;
        let [t, x, u] = inv.components();
        PointTransformation::parse_spec(map)?.with_inverse_on(t, x, u, cfg)
    }

    pub fn identity() -> PointTransformation {
        let id = || PointTransformation::new(Expr::sym("t"), Expr::sym("x"), Expr::sym("u"));
        PointTransformation { inverse: Some(Box::new(id())), ..id() }
    }

    /// Attaches an inverse after checking that it undoes the map on the
    /// default chart and that the Jacobian does not vanish.
    pub fn with_inverse(self, t: Expr, x: Expr, u: Expr) -> Result<PointTransformation> {
        self.with_inverse_on(t, x, u, &ZeroConfig::default())
    }

    pub fn with_inverse_on(self, t: Expr, x: Expr, u: Expr, cfg: &ZeroConfig) -> Result<PointTransformation> {
        let inv = PointTransformation::new(t, x, u);
        let m = PointTransformation { inverse: Some(Box::new(inv.clone())), ..self };
        let back = inv.after(&m);
        for (name, c) in [("t", &back.t), ("x", &back.x), ("u", &back.u)] {
            let d = c - Expr::sym(name);
            if !is_zero(&d, cfg)?.holds() {
                return Err(Error::Invalid(format!("stated inverse does not undo the map in the {name} component: {d}")));
            }
        }
        if is_zero(&m.jacobian(), cfg)?.holds() {
            return Err(Error::Invalid(format!("degenerate map {m}: the Jacobian vanishes")));
        }
        Ok(m)
    }

    pub fn components(&self) -> [Expr; 3] {
        [self.t.clone(), self.x.clone(), self.u.clone()]
    }

    pub fn jacobian(&self) -> Expr {
        let c = self.components();
        let m: Vec<Vec<Expr>> = c.iter().map(|e| TXU.iter().map(|v| e.diff(v)).collect()).collect();
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    /// Substitutes this map into `e`: `e(T, X, U)`.
    pub fn apply_to(&self, e: &Expr) -> Expr {
        e.subst_pairs(&[("t", self.t.clone()), ("x", self.x.clone()), ("u", self.u.clone())])
    }

    /// `self ∘ first`: apply `first`, then `self`. Inverses compose in the
    /// opposite order when both are present.
    pub fn after(&self, first: &PointTransformation) -> PointTransformation {
        let raw = PointTransformation::new(first.apply_to(&self.t), first.apply_to(&self.x), first.apply_to(&self.u));
        let inverse = match (&self.inverse, &first.inverse) {
            (Some(a), Some(b)) => Some(Box::new(b.after(a).without_inverse())),
            _ => None,
        };
        PointTransformation { inverse, ..raw }
    }

    fn without_inverse(&self) -> PointTransformation {
        PointTransformation { inverse: None, ..self.clone() }
    }

    pub fn invert(&self) -> Result<PointTransformation> {
        let inv = self.inverse.as_ref().ok_or(Error::MissingInverse)?;
        Ok(PointTransformation { inverse: Some(Box::new(self.without_inverse())), ..(**inv).clone() })
    }

    pub fn inverse_map(&self) -> Result<&PointTransformation> {
        self.inverse.as_deref().ok_or(Error::MissingInverse)
    }

    /// Push-forward of a vector field on (t, x, u), expressed in the new
    /// coordinates.
    pub fn pushforward_field(&self, q: &VectorField) -> Result<VectorField> {
        let inv = self.inverse_map()?;
        pushforward_by(&TXU, &self.components(), &inv.components(), q)
    }
}

/// Push-forward of `q` along the map `coords -> map` whose inverse is
/// `inverse`: component `i` is `q(map_i)` rewritten through the inverse.
pub fn pushforward_by(coords: &[&str], map: &[Expr], inverse: &[Expr], q: &VectorField) -> Result<VectorField> {
    if q.coords.iter().map(|s| s.as_str()).ne(coords.iter().copied()) {
        return Err(Error::Precondition(format!("field on ({}) pushed along a map on ({})", q.coords.join(","), coords.join(","))));
    }
    let pairs: Vec<(&str, Expr)> = coords.iter().copied().zip(inverse.iter().cloned()).collect();
    let comps = map.iter().map(|m| q.apply(m).subst_pairs(&pairs)).collect();
    Ok(VectorField::new(coords, comps))
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    /// Zero-test verdict of the condition's expression. For the
    /// nondegeneracy condition a `NonZero` verdict is the passing one.
    pub verdict: ZeroVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibleReport {
    pub holds: bool,
    pub exact: bool,
    pub conditions: Vec<Condition>,
}

impl AdmissibleReport {
    pub fn failures(&self) -> Vec<&Condition> {
        self.conditions.iter().filter(|c| !c.holds).collect()
    }
}

struct Parts {
    tt: Expr,
    tx: Expr,
    xt: Expr,
    xx: Expr,
    u_u: Expr,
    ratio_t: Expr,
    ratio_x: Expr,
}

fn parts(m: &PointTransformation) -> Parts {
    let u_u = m.u.diff("u");
    Parts {
        tt: m.t.diff("t"),
        tx: m.t.diff("x"),
        xt: m.x.diff("t"),
        xx: m.x.diff("x"),
        ratio_t: m.u.diff("u").diff("t") / &u_u,
        ratio_x: m.u.diff("u").diff("x") / &u_u,
        u_u,
    }
}

/// Checks the split conditions for `(source, map, target)` to be an
/// admissible transformation. Target arbitrary elements are evaluated at
/// `(X, U)`.
pub fn verify_admissible(source: &ClassMember, map: &PointTransformation, target: &ClassMember) -> Result<AdmissibleReport> {
    verify_admissible_with(source, map, target, &source.zero_config())
}

pub fn verify_admissible_with(
    source: &ClassMember,
    map: &PointTransformation,
    target: &ClassMember,
    cfg: &ZeroConfig,
) -> Result<AdmissibleReport> {
    let (f, g) = (&source.f, &source.g);
    let p = parts(map);
    let at_image = |e: &Expr| e.subst_pairs(&[("x", map.x.clone()), ("u", map.u.clone())]);
    let (ft, gt) = (at_image(&target.f), at_image(&target.g));
    let two = Expr::integer(2);
    let denom = &p.tt * &p.tt - f * &p.tx * &p.tx;
    if is_zero(&denom, cfg)?.holds() {
        return Err(Error::Precondition(format!("T_t^2 - f T_x^2 vanishes identically for {map}")));
    }
    let (t, x, u) = (&map.t, &map.x, &map.u);
    let d2 = |e: &Expr, a: &str, b: &str| e.diff(a).diff(b);
    let second = |e: &Expr| {
        d2(e, "t", "t") - &two * &p.ratio_t * e.diff("t") - f * (d2(e, "x", "x") - &two * &p.ratio_x * e.diff("x"))
    };
    let nondegenerate = &p.u_u * (&p.tt * &p.xx - &p.tx * &p.xt);
    let mut conditions = Vec::new();
    let mut check = |name: &'static str, e: Expr| -> Result<()> {
        let verdict = is_zero(&e, cfg)?;
        conditions.push(Condition { name, holds: verdict.holds(), verdict });
        Ok(())
    };
    check("T_u", t.diff("u"))?;
    check("X_u", x.diff("u"))?;
    check("U_uu", u.diff("u").diff("u"))?;
    check("T_t X_t - f T_x X_x", &p.tt * &p.xt - f * &p.tx * &p.xx)?;
    check(
        "f~ T_t^2 + X_t^2 - f (f~ T_x^2 + X_x^2)",
        &ft * &p.tt * &p.tt + &p.xt * &p.xt - f * (&ft * &p.tx * &p.tx + &p.xx * &p.xx),
    )?;
    check("T equation", second(t))?;
    check("X equation", second(x))?;
    check(
        "g equation",
        &gt * &p.tt * &p.tt - d2(u, "t", "t") + &two * &p.ratio_t * u.diff("t")
            - f * (&gt * &p.tx * &p.tx - d2(u, "x", "x") + &two * &p.ratio_x * u.diff("x"))
            - g * &p.u_u,
    )?;
    let nd = is_zero(&nondegenerate, cfg)?;
    conditions.push(Condition { name: "U_u (T_t X_x - T_x X_t) != 0", holds: !nd.holds(), verdict: nd });
    let holds = conditions.iter().all(|c| c.holds);
    let exact = conditions.iter().all(|c| c.verdict.is_exact());
    Ok(AdmissibleReport { holds, exact, conditions })
}

/// The transformed equation written out before splitting: with `w_t, w_x,
/// w_tx, w_xx` the target derivatives and `w_tt = f~ w_xx + g~`, the
/// returned expression vanishes identically iff the map is admissible.
pub fn admissible_raw_residual(source: &ClassMember, map: &PointTransformation, target: &ClassMember) -> Expr {
    let s = Expr::sym;
    let (ut, ux) = (s("u_t"), s("u_x"));
    let (wt, wx, wtx, wxx) = (s("w_t"), s("w_x"), s("w_tx"), s("w_xx"));
    let at_image = |e: &Expr| e.subst_pairs(&[("x", map.x.clone()), ("u", map.u.clone())]);
    let wtt = at_image(&target.f) * &wxx + at_image(&target.g);
    let (t, x, u) = (&map.t, &map.x, &map.u);
    let two = Expr::integer(2);
    let d = |e: &Expr, v: &str, jet: &Expr| e.diff(v) + e.diff("u") * jet;
    let v2 = |e: &Expr, v: &str, jet: &Expr| {
        e.diff(v).diff(v) + &two * jet * e.diff(v).diff("u") + jet * jet * e.diff("u").diff("u")
    };
    let side = |v: &str, jet: &Expr| {
        let (dt, dx) = (d(t, v, jet), d(x, v, jet));
        &wtt * &dt * &dt + &two * &wtx * &dt * &dx + &wxx * &dx * &dx + &wt * v2(t, v, jet) + &wx * v2(x, v, jet) - v2(u, v, jet)
    };
    let k = &wt * t.diff("u") + &wx * x.diff("u") - u.diff("u");
    let residual = side("t", &ut) - &source.f * side("x", &ux) + &source.g * &k;
    let solve = |v: &str| (u.diff(v) - &wt * t.diff(v) - &wx * x.diff(v)) / &k;
    residual.subst_pairs(&[("u_t", solve("t")), ("u_x", solve("x"))])
}

pub fn verify_admissible_raw(source: &ClassMember, map: &PointTransformation, target: &ClassMember) -> Result<ZeroVerdict> {
    is_zero(&admissible_raw_residual(source, map, target), &source.zero_config())
}

/// Removes a variable on which `e` does not depend, failing when it does.
fn eliminate(e: &Expr, v: &str, cfg: &ZeroConfig, what: &str) -> Result<Expr> {
    if !e.contains(v) {
        return Ok(e.clone());
    }
    // `e` is free of `v` exactly when it agrees with its restriction to a
    // fixed value of `v`; this avoids differentiating large compositions.
    let mut last = None;
    for c in [rat(1, 2), rat(1, 3), rat(2, 7), rat(3, 5)] {
        let fixed = e.subst_pairs(&[(v, Expr::constant(c * &cfg.sample_scale))]);
        match is_zero(&(&fixed - e), cfg) {
            Ok(z) if z.holds() => return Ok(fixed),
            Ok(_) => return Err(Error::NotAdmissible(format!("{what} = {e} depends on {v}"))),
            Err(err) => last = Some(err),
        }
    }
    Err(last.unwrap_or_else(|| Error::NotAdmissible(format!("could not eliminate {v} from {what} = {e}"))))
}

/// Image of `theta` under `map`, from the `f~` and `g~` equations composed
/// with the stored inverse. The result lives on `target_chart`.
pub fn pushforward_theta(map: &PointTransformation, theta: &ClassMember) -> Result<ClassMember> {
    pushforward_theta_on(map, theta, theta.chart.clone())
}

pub fn pushforward_theta_on(map: &PointTransformation, theta: &ClassMember, target_chart: Chart) -> Result<ClassMember> {
    pushforward_theta_with(map, theta, target_chart, &ZeroConfig::default())
}

/// As [`pushforward_theta_on`], sampling with `base` (its chart is replaced
/// by the source and target charts in turn).
pub fn pushforward_theta_with(map: &PointTransformation, theta: &ClassMember, target_chart: Chart, base: &ZeroConfig) -> Result<ClassMember> {
    let inv = map.inverse_map()?;
    let cfg = base.clone().with_chart(theta.chart.clone());
    for (name, e) in [("T_u", map.t.diff("u")), ("X_u", map.x.diff("u")), ("U_uu", map.u.diff("u").diff("u"))] {
        if !is_zero(&e, &cfg)?.holds() {
            return Err(Error::Precondition(format!("{name} = {e} does not vanish")));
        }
    }
    let (f, g) = (&theta.f, &theta.g);
    let p = parts(map);
    let denom = &p.tt * &p.tt - f * &p.tx * &p.tx;
    if is_zero(&denom, &cfg)?.holds() {
        return Err(Error::Precondition(format!("T_t^2 - f T_x^2 vanishes identically for {map}")));
    }
    let two = Expr::integer(2);
    let u = &map.u;
    let f_new = (f * &p.xx * &p.xx - &p.xt * &p.xt) / &denom;
    let g_num = u.diff("t").diff("t") - &two * &p.ratio_t * u.diff("t")
        - f * (u.diff("x").diff("x") - &two * &p.ratio_x * u.diff("x"))
        + g * &p.u_u;
    let g_new = g_num / &denom;
    let tcfg = base.clone().with_chart(target_chart.clone());
    let f_t = eliminate(&inv.apply_to(&f_new), "t", &tcfg, "f~")?;
    let g_t = eliminate(&inv.apply_to(&g_new), "t", &tcfg, "g~")?;
    for (name, e) in [("f~", &f_t), ("g~", &g_t)] {
        if let Some(s) = e.free_symbols().into_iter().find(|s| s != "x" && s != "u") {
            return Err(Error::NotAdmissible(format!("{name} = {e} depends on {s}")));
        }
    }
    ClassMember::with_chart(compact(f_t, &tcfg), compact(g_t, &tcfg), target_chart)
}

/// Replaces a large expression by the rational constant it equals, when it
/// is one; compositions with transcendental inverses often collapse to
/// constants the rewrite rules cannot see.
fn compact(e: Expr, cfg: &ZeroConfig) -> Expr {
    if e.size() < 24 {
        return e;
    }
    let point: Point = e
        .free_symbols()
        .into_iter()
        .map(|s| {
            let q = rat(3, 5) * &cfg.sample_scale;
            let q = if cfg.chart.sign_of(&s) == ChartSign::Neg { -q } else { q };
            (s, q)
        })
        .collect();
    let Ok((v, _)) = eval_num(&e, &point, 128) else { return e };
    let Some(q) = rationalize(v.to_f64(), 1000, 1e-12) else { return e };
    let c = Expr::constant(q);
    match is_zero(&(&e - &c), cfg) {
        Ok(z) if z.holds() => c,
        _ => e,
    }
}

/// A groupoid arrow `(source, map, target)`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibleTransformation {
    pub source: ClassMember,
    pub map: PointTransformation,
    pub target: ClassMember,
}

impl AdmissibleTransformation {
    /// Builds the arrow after a successful [`verify_admissible`].
    pub fn verified(source: ClassMember, map: PointTransformation, target: ClassMember) -> Result<AdmissibleTransformation> {
        let r = verify_admissible(&source, &map, &target)?;
        if !r.holds {
            let names: Vec<&str> = r.failures().iter().map(|c| c.name).collect();
            return Err(Error::NotAdmissible(format!("{map} from {} to {}: failing {names:?}", source.fingerprint(), target.fingerprint())));
        }
        Ok(AdmissibleTransformation { source, map, target })
    }

    pub fn identity_at(theta: &ClassMember) -> AdmissibleTransformation {
        AdmissibleTransformation { source: theta.clone(), map: PointTransformation::identity(), target: theta.clone() }
    }

    pub fn verify(&self) -> Result<AdmissibleReport> {
        verify_admissible(&self.source, &self.map, &self.target)
    }
}

/// `first ⋆ second`: apply `first`, then `second`.
pub fn compose_admissible(first: &AdmissibleTransformation, second: &AdmissibleTransformation) -> Result<AdmissibleTransformation> {
    if !first.target.same_as(&second.source)? {
        return Err(Error::NotComposable { left: first.target.fingerprint(), right: second.source.fingerprint() });
    }
    AdmissibleTransformation::verified(first.source.clone(), second.map.after(&first.map), second.target.clone())
}

pub fn invert_admissible(a: &AdmissibleTransformation) -> Result<AdmissibleTransformation> {
    let map = a.map.invert()?;
    let r = verify_admissible(&a.target, &map, &a.source)?;
    if !r.holds {
        return Err(Error::NotAdmissible(format!("inverse of {} fails verification", a.map)));
    }
    Ok(AdmissibleTransformation { source: a.target.clone(), map, target: a.source.clone() })
}
