//! Members of the class `u_tt = f(x,u) u_xx + g(x,u)` and the determining
//! equations for their Lie symmetries.

use crate::expr::{is_zero, parse, Chart, Expr, ZeroConfig, ZeroVerdict};
use crate::jets::{check_point_field, prolong2, VectorField};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One equation of the class, fixed by the pair `(f, g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MemberRepr", into = "MemberRepr")]
pub struct ClassMember {
    pub f: Expr,
    pub g: Expr,
    pub chart: Chart,
}

#[derive(Serialize, Deserialize)]
struct MemberRepr {
    f: String,
    g: String,
    #[serde(default)]
    chart: Option<Chart>,
}

impl TryFrom<MemberRepr> for ClassMember {
    type Error = Error;
    fn try_from(r: MemberRepr) -> Result<Self> {
        ClassMember::with_chart(parse(&r.f)?, parse(&r.g)?, r.chart.unwrap_or_default())
    }
}

impl From<ClassMember> for MemberRepr {
    fn from(m: ClassMember) -> Self {
        MemberRepr { f: m.f.to_string(), g: m.g.to_string(), chart: Some(m.chart) }
    }
}

impl ClassMember {
    /// Validated member on the default chart (u > 0, x > 0).
    pub fn new(f: Expr, g: Expr) -> Result<ClassMember> {
        ClassMember::with_chart(f, g, Chart::default())
    }

    pub fn with_chart(f: Expr, g: Expr, chart: Chart) -> Result<ClassMember> {
        let m = ClassMember::unchecked(f, g, chart);
        m.validate()?;
        Ok(m)
    }

    /// Builds a member without checking the auxiliary inequalities.
    pub fn unchecked(f: Expr, g: Expr, chart: Chart) -> ClassMember {
        ClassMember { f: f.simplify(), g: g.simplify(), chart }
    }

    pub fn parse(f: &str, g: &str) -> Result<ClassMember> {
        ClassMember::new(parse(f)?, parse(g)?)
    }

    pub fn zero_config(&self) -> ZeroConfig {
        ZeroConfig::default().with_chart(self.chart.clone())
    }

    /// Checks that `f, g` depend on `(x, u)` only, that `f != 0`, and that
    /// `(f_u, g_uu) != (0, 0)`. A `LikelyZero` verdict for `f` counts as a
    /// violation.
    pub fn validate(&self) -> Result<()> {
        for (name, e) in [("f", &self.f), ("g", &self.g)] {
            if let Some(s) = e.free_symbols().into_iter().find(|s| s != "x" && s != "u") {
                return Err(Error::InvalidMember(format!("{name} depends on `{s}`; only x and u are allowed")));
            }
        }
        let cfg = self.zero_config();
        if is_zero(&self.f, &cfg)?.holds() {
            return Err(Error::InvalidMember(format!("f = {} vanishes on the chart", self.f)));
        }
        let fu = self.f.diff("u");
        let guu = self.g.diff("u").diff("u");
        if is_zero(&fu, &cfg)?.holds() && is_zero(&guu, &cfg)?.holds() {
            return Err(Error::InvalidMember(format!(
                "linear equation: f_u and g_uu both vanish for f = {}, g = {}",
                self.f, self.g
            )));
        }
        Ok(())
    }

    /// Equality of both arbitrary elements up to the zero test.
    pub fn same_as(&self, other: &ClassMember) -> Result<bool> {
        let cfg = self.zero_config();
        Ok(is_zero(&(&self.f - &other.f), &cfg)?.holds() && is_zero(&(&self.g - &other.g), &cfg)?.holds())
    }

    pub fn fingerprint(&self) -> String {
        format!("(f = {}, g = {})", self.f, self.g)
    }
}

impl fmt::Display for ClassMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u_tt = ({})*u_xx + {}", self.f, self.g)
    }
}

pub const RESIDUAL_LABELS: [&str; 5] = [
    "xi_t - tau_x f",
    "tau_tt - tau_xx f - 2 eta_tu",
    "xi_tt - xi_xx f + 2 eta_xu f",
    "xi f_x + eta f_u - 2 (xi_x - tau_t) f",
    "xi g_x + eta g_u - (eta_u - 2 tau_t) g + eta_xx f - eta_tt",
];

/// Rejects fields that are not projectable or not affine in `u`.
pub fn check_projectable(q: &VectorField, cfg: &ZeroConfig) -> Result<()> {
    check_point_field(q)?;
    let checks = [
        ("tau_u", q.tau().diff("u")),
        ("xi_u", q.xi().diff("u")),
        ("eta_uu", q.eta().diff("u").diff("u")),
    ];
    for (name, d) in checks {
        if !is_zero(&d, cfg)?.holds() {
            return Err(Error::Precondition(format!("{name} = {d} does not vanish")));
        }
    }
    Ok(())
}

/// The five determining equations as `left - right`, with `f, g` inserted.
pub fn invariance_residuals(q: &VectorField, theta: &ClassMember) -> Result<[Expr; 5]> {
    check_projectable(q, &theta.zero_config())?;
    Ok(residuals_unchecked(q, theta))
}

pub(crate) fn residuals_unchecked(q: &VectorField, theta: &ClassMember) -> [Expr; 5] {
    let (tau, xi, eta) = (q.tau(), q.xi(), q.eta());
    let (f, g) = (&theta.f, &theta.g);
    let d = |e: &Expr, v: &[&str]| e.diff_n(v);
    let two = Expr::integer(2);
    [
        d(&xi, &["t"]) - d(&tau, &["x"]) * f,
        d(&tau, &["t", "t"]) - d(&tau, &["x", "x"]) * f - &two * d(&eta, &["t", "u"]),
        d(&xi, &["t", "t"]) - d(&xi, &["x", "x"]) * f + &two * d(&eta, &["x", "u"]) * f,
        &xi * f.diff("x") + &eta * f.diff("u") - &two * (d(&xi, &["x"]) - d(&tau, &["t"])) * f,
        &xi * g.diff("x") + &eta * g.diff("u") - (d(&eta, &["u"]) - &two * d(&tau, &["t"])) * g
            + d(&eta, &["x", "x"]) * f
            - d(&eta, &["t", "t"]),
    ]
}

/// The infinitesimal invariance criterion on the second jet space, with
/// `u_tt` replaced by `f u_xx + g`.
pub fn criterion_residual(q: &VectorField, theta: &ClassMember) -> Result<Expr> {
    let p = prolong2(q)?;
    let (f, g) = (&theta.f, &theta.g);
    let (xi, eta) = (q.xi(), q.eta());
    let uxx = Expr::sym("u_xx");
    let raw = &p.eta_tt - (&xi * f.diff("x") + &eta * f.diff("u")) * &uxx - f * &p.eta_xx - &xi * g.diff("x") - &eta * g.diff("u");
    let on_shell = raw.subst_pairs(&[("u_tt", f * &uxx + g)]);
    if on_shell.contains("u_tt") {
        return Err(Error::Invalid("criterion still depends on u_tt after substitution".into()));
    }
    Ok(on_shell)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub holds: bool,
    /// Verdicts for the five determining equations, in order.
    pub residuals: Vec<ZeroVerdict>,
    /// Verdict for the jet-space criterion.
    pub criterion: ZeroVerdict,
    /// No floating-point evidence was used.
    pub exact: bool,
}

impl SymmetryReport {
    /// First failing determining equation with its witness.
    pub fn failure(&self) -> Option<(&'static str, &ZeroVerdict)> {
        self.residuals.iter().enumerate().find(|(_, v)| !v.holds()).map(|(i, v)| (RESIDUAL_LABELS[i], v))
    }
}

pub fn is_symmetry(q: &VectorField, theta: &ClassMember) -> Result<SymmetryReport> {
    is_symmetry_with(q, theta, &theta.zero_config())
}

/// Runs both the split determining equations and the direct jet criterion;
/// a disagreement between the two is an error.
pub fn is_symmetry_with(q: &VectorField, theta: &ClassMember, cfg: &ZeroConfig) -> Result<SymmetryReport> {
    check_projectable(q, cfg)?;
    let mut exprs: Vec<Expr> = residuals_unchecked(q, theta).into_iter().collect();
    exprs.push(criterion_residual(q, theta)?);
    let mut verdicts = exprs.par_iter().map(|e| is_zero(e, cfg)).collect::<Result<Vec<_>>>()?;
    let criterion = verdicts.pop().expect("six verdicts");
    let split = verdicts.iter().all(|v| v.holds());
    if split != criterion.holds() {
        return Err(Error::RouteDisagreement(format!(
            "field {} on {}: determining equations say {}, jet criterion says {}",
            q.spec(),
            theta.fingerprint(),
            split,
            criterion.holds()
        )));
    }
    let exact = verdicts.iter().all(|v| v.is_exact()) && criterion.is_exact();
    Ok(SymmetryReport { holds: split, residuals: verdicts, criterion, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ex;

    fn member(f: &str, g: &str) -> ClassMember {
        ClassMember::parse(f, g).unwrap()
    }

    #[test]
    fn member_validation() {
        assert!(ClassMember::parse("0", "u^2").is_err());
        assert!(ClassMember::parse("x", "u + x").is_err());
        assert!(ClassMember::parse("x", "u^2").is_ok());
        assert!(ClassMember::parse("t*u", "0").is_err());
        let m = member("u^(-4)", "0");
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"f":"u^(-4)","g":"0","chart":{"u":"+","x":"+"}}"#);
        let back: ClassMember = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn kernel_field() {
        let dt = VectorField::parse("t=1").unwrap();
        for (f, g) in [("u", "u^2"), ("x*exp(u)", "sin(x)*u^3"), ("u^(-4)", "x*u^(-3)")] {
            let r = is_symmetry(&dt, &member(f, g)).unwrap();
            assert!(r.holds);
            assert!(r.residuals.iter().all(|v| v.is_proven()));
        }
    }

    #[test]
    fn scaling_symmetry_of_power_member() {
        let q = VectorField::parse("t=-t, u=2*u").unwrap();
        let r = is_symmetry(&q, &member("x*u", "x^2*u^2")).unwrap();
        assert!(r.holds && r.exact);
    }

    #[test]
    fn shift_in_x_fails_with_witness() {
        let dx = VectorField::parse("x=1").unwrap();
        let res = invariance_residuals(&dx, &member("x*u", "u")).unwrap();
        assert_eq!(res[3], ex("u"));
        let r = is_symmetry(&dx, &member("x*u", "u^2")).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failure().unwrap().0, RESIDUAL_LABELS[3]);
    }

    #[test]
    fn time_scaling_not_symmetry() {
        let q = VectorField::parse("t=t").unwrap();
        let res = invariance_residuals(&q, &member("1", "u^3")).unwrap();
        assert_eq!(res[3], ex("2"));
    }

    #[test]
    fn boost_symmetry() {
        let q = VectorField::parse("t=x, x=t").unwrap();
        assert!(is_symmetry(&q, &member("1", "u^3")).unwrap().holds);
    }

    #[test]
    fn non_projectable_rejected() {
        let q = VectorField::parse("t=u").unwrap();
        assert!(matches!(is_symmetry(&q, &member("u", "u")), Err(Error::Precondition(_))));
    }
}
