//! The equivalence group of the class: parametrized elements, their action on
//! members, the factorization into elementary transformations, and the
//! equivalence algebra with its adjoint action.

use crate::deteq::ClassMember;
use crate::expr::{is_zero, parse, ChartSign, Expr, Rational, ZeroConfig};
use crate::jets::{VectorField, TXUFG};
use crate::ptrans::{pushforward_by, pushforward_theta_on, PointTransformation};
use crate::{Error, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `t~ = c1 t + c0, x~ = phi(x), u~ = c2 |phi_x|^(1/2) u + psi(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct EquivalenceElement {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub phi: Expr,
    pub phi_inv: Expr,
    pub psi: Expr,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    c0: String,
    c1: String,
    c2: String,
    phi: String,
    phi_inv: String,
    psi: String,
}

fn parse_rational(s: &str) -> Result<Rational> {
    parse(s)?
        .simplify()
        .as_const()
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("`{s}` is not a rational constant")))
}

fn show_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl TryFrom<ElementRepr> for EquivalenceElement {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        EquivalenceElement::new(
            parse_rational(&r.c0)?,
            parse_rational(&r.c1)?,
            parse_rational(&r.c2)?,
            parse(&r.phi)?,
            parse(&r.phi_inv)?,
            parse(&r.psi)?,
        )
    }
}

impl From<EquivalenceElement> for ElementRepr {
    fn from(e: EquivalenceElement) -> Self {
        ElementRepr {
            c0: show_rational(&e.c0),
            c1: show_rational(&e.c1),
            c2: show_rational(&e.c2),
            phi: e.phi.to_string(),
            phi_inv: e.phi_inv.to_string(),
            psi: e.psi.to_string(),
        }
    }
}

fn x() -> Expr {
    Expr::sym("x")
}

fn at(e: &Expr, inner: &Expr) -> Expr {
    e.subst_pairs(&[("x", inner.clone())])
}

/// `(2 phi_xxx phi_x - 3 phi_xx^2) / (4 |phi_x|^(3/2))`.
pub fn alpha(phi: &Expr) -> Expr {
    let p1 = phi.diff("x");
    let p2 = p1.diff("x");
    let p3 = p2.diff("x");
    (Expr::integer(2) * &p3 * &p1 - Expr::integer(3) * &p2 * &p2) / (Expr::integer(4) * p1.abs().powq(3, 2))
}

impl EquivalenceElement {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, phi: Expr, phi_inv: Expr, psi: Expr) -> Result<EquivalenceElement> {
        let e = EquivalenceElement { c0, c1, c2, phi: phi.simplify(), phi_inv: phi_inv.simplify(), psi: psi.simplify() };
        e.validate()?;
        Ok(e)
    }

    pub fn identity() -> EquivalenceElement {
        EquivalenceElement {
            c0: Rational::zero(),
            c1: Rational::one(),
            c2: Rational::one(),
            phi: x(),
            phi_inv: x(),
            psi: Expr::zero(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.c1.is_zero() || self.c2.is_zero() {
            return Err(Error::Precondition("c1 c2 must not vanish".into()));
        }
        for (name, e) in [("phi", &self.phi), ("phi_inv", &self.phi_inv), ("psi", &self.psi)] {
            if let Some(s) = e.free_symbols().into_iter().find(|s| s != "x") {
                return Err(Error::Precondition(format!("{name} depends on `{s}`; only x is allowed")));
            }
        }
        let cfg = ZeroConfig::default();
        if is_zero(&self.phi.diff("x"), &cfg)?.holds() {
            return Err(Error::Precondition(format!("phi_x vanishes for phi = {}", self.phi)));
        }
        if !is_zero(&(at(&self.phi_inv, &self.phi) - x()), &cfg)?.holds() {
            return Err(Error::Precondition(format!("{} is not the inverse of {}", self.phi_inv, self.phi)));
        }
        Ok(())
    }

    fn root_phi_x(&self) -> Expr {
        self.phi.diff("x").abs().powq(1, 2)
    }

    /// The action on (t, x, u, f, g), components in source coordinates.
    pub fn full_map(&self) -> [Expr; 5] {
        let (t, u, f, g) = (Expr::sym("t"), Expr::sym("u"), Expr::sym("f"), Expr::sym("g"));
        let c = |q: &Rational| Expr::constant(q.clone());
        let c1sq = c(&(&self.c1 * &self.c1));
        let px = self.phi.diff("x");
        let r = self.root_phi_x();
        let psi_x = self.psi.diff("x");
        let bracket = c(&self.c2) * alpha(&self.phi) * &u + psi_x.diff("x") - px.diff("x") / &px * &psi_x;
        [
            c(&self.c1) * &t + c(&self.c0),
            self.phi.clone(),
            c(&self.c2) * &r * &u + &self.psi,
            &px * &px / &c1sq * &f,
            (c(&self.c2) * &r * &g - bracket * &f) / &c1sq,
        ]
    }

    /// The (t, x, u) part with its inverse attached.
    pub fn point_map(&self) -> Result<PointTransformation> {
        let [t, x_, u, _, _] = self.full_map();
        let inv = self.invert();
        let [ti, xi, ui, _, _] = inv.full_map();
        PointTransformation::new(t, x_, u).with_inverse(ti, xi, ui)
    }

    /// Closed-form inverse element.
    pub fn invert(&self) -> EquivalenceElement {
        let c1 = self.c1.recip();
        let c2 = self.c2.recip();
        let inv_root = self.phi_inv.diff("x").abs().powq(1, 2);
        EquivalenceElement {
            c0: -&self.c0 * &c1,
            psi: -(at(&self.psi, &self.phi_inv) * inv_root * Expr::constant(c2.clone())),
            c1,
            c2,
            phi: self.phi_inv.clone(),
            phi_inv: self.phi.clone(),
        }
    }

    /// `then ∘ self`: apply `self` first.
    pub fn then(&self, then: &EquivalenceElement) -> EquivalenceElement {
        let r2 = at(&then.root_phi_x(), &self.phi);
        EquivalenceElement {
            c0: &then.c1 * &self.c0 + &then.c0,
            c1: &self.c1 * &then.c1,
            c2: &self.c2 * &then.c2,
            phi: at(&then.phi, &self.phi),
            phi_inv: at(&self.phi_inv, &then.phi_inv),
            psi: Expr::constant(then.c2.clone()) * r2 * &self.psi + at(&then.psi, &self.phi),
        }
    }

    /// `(f~, g~)` in the target coordinates, from the closed-form group
    /// action; cross-checked against the push-forward of the point map.
    pub fn apply_to_member(&self, theta: &ClassMember) -> Result<ClassMember> {
        let direct = self.apply_formula(theta)?;
        let via_map = pushforward_theta_on(&self.point_map()?, theta, theta.chart.clone())?;
        if !direct.same_as(&via_map)? {
            return Err(Error::RouteDisagreement(format!(
                "group action gives {}, point push-forward gives {}",
                direct.fingerprint(),
                via_map.fingerprint()
            )));
        }
        Ok(direct)
    }

    /// The closed-form action alone.
    pub fn apply_formula(&self, theta: &ClassMember) -> Result<ClassMember> {
        let [_, _, _, fm, gm] = self.full_map();
        let fg = [("f", theta.f.clone()), ("g", theta.g.clone())];
        let (f_src, g_src) = (fm.subst_pairs(&fg), gm.subst_pairs(&fg));
        let [_, xi, ui, _, _] = self.invert().full_map();
        let back = [("x", xi), ("u", ui)];
        ClassMember::with_chart(f_src.subst_pairs(&back), g_src.subst_pairs(&back), theta.chart.clone())
    }

    /// Five-factor decomposition, listed outermost first:
    /// `P^t(c0) ∘ D^t(c1) ∘ Z(psi∘phi_inv) ∘ D(phi) ∘ D^u(c2)`.
    pub fn factor_elementary(&self) -> Result<Vec<Elementary>> {
        let factors = vec![
            Elementary::TimeShift(self.c0.clone()),
            Elementary::TimeScale(self.c1.clone()),
            Elementary::Shift(at(&self.psi, &self.phi_inv)),
            Elementary::Change { phi: self.phi.clone(), phi_inv: self.phi_inv.clone() },
            Elementary::Scale(self.c2.clone()),
        ];
        let mut acc = EquivalenceElement::identity();
        for f in factors.iter().rev() {
            acc = acc.then(&f.element());
        }
        let cfg = ZeroConfig::default();
        for (a, b) in acc.full_map().iter().zip(self.full_map().iter()) {
            if !is_zero(&(a - b), &cfg)?.holds() {
                return Err(Error::Invalid(format!("recomposed factors act as {a} instead of {b}")));
            }
        }
        Ok(factors)
    }
}

impl fmt::Display for EquivalenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(c0 = {}, c1 = {}, c2 = {}, phi = {}, psi = {})",
            show_rational(&self.c0),
            show_rational(&self.c1),
            show_rational(&self.c2),
            self.phi,
            self.psi
        )
    }
}

/// One-parameter families of elementary equivalence transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elementary {
    TimeShift(Rational),
    TimeScale(Rational),
    Scale(Rational),
    Change { phi: Expr, phi_inv: Expr },
    Shift(Expr),
}

impl Elementary {
    pub fn element(&self) -> EquivalenceElement {
        let id = EquivalenceElement::identity();
        match self {
            Elementary::TimeShift(c) => EquivalenceElement { c0: c.clone(), ..id },
            Elementary::TimeScale(c) => EquivalenceElement { c1: c.clone(), ..id },
            Elementary::Scale(c) => EquivalenceElement { c2: c.clone(), ..id },
            Elementary::Change { phi, phi_inv } => EquivalenceElement { phi: phi.clone(), phi_inv: phi_inv.clone(), ..id },
            Elementary::Shift(psi) => EquivalenceElement { psi: psi.clone(), ..id },
        }
    }

    pub fn label(&self) -> String {
        match self {
            Elementary::TimeShift(c) => format!("P^t({})", show_rational(c)),
            Elementary::TimeScale(c) => format!("D^t({})", show_rational(c)),
            Elementary::Scale(c) => format!("D^u({})", show_rational(c)),
            Elementary::Change { phi, .. } => format!("D({phi})"),
            Elementary::Shift(psi) => format!("Z({psi})"),
        }
    }
}

/// Generators of the equivalence algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    TimeShift,
    TimeScale,
    Scale,
    Change(Expr),
    Shift(Expr),
}

impl Generator {
    /// The generator as a field on (t, x, u, f, g).
    pub fn field(&self) -> VectorField {
        let (t, u, f, g) = (Expr::sym("t"), Expr::sym("u"), Expr::sym("f"), Expr::sym("g"));
        let z = Expr::zero;
        let two = Expr::integer(2);
        let half = Expr::half();
        let comps = match self {
            Generator::TimeShift => vec![Expr::one(), z(), z(), z(), z()],
            Generator::TimeScale => vec![t, z(), z(), -(&two * &f), -(&two * &g)],
            Generator::Scale => vec![z(), z(), u, z(), g],
            Generator::Change(zeta) => {
                let zx = zeta.diff("x");
                let zxxx = zx.diff("x").diff("x");
                vec![z(), zeta.clone(), &half * &zx * &u, &two * &zx * &f, &half * (&zx * &g - zxxx * &u * &f)]
            }
            Generator::Shift(chi) => vec![z(), z(), chi.clone(), z(), -(chi.diff("x").diff("x") * &f)],
        };
        VectorField::new(&TXUFG, comps)
    }

    pub fn label(&self) -> String {
        match self {
            Generator::TimeShift => "P^t".into(),
            Generator::TimeScale => "D^t".into(),
            Generator::Scale => "D^u".into(),
            Generator::Change(z) => format!("D({z})"),
            Generator::Shift(c) => format!("Z({c})"),
        }
    }
}

/// Push-forward of a generator by an elementary transformation.
pub fn adjoint_on_generator(elem: &Elementary, gen: &Generator) -> Result<VectorField> {
    let e = elem.element();
    pushforward_by(&TXUFG, &e.full_map(), &e.invert().full_map(), &gen.field())
}

/// Sign-alternating involutions of (t, x, u).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Involution {
    T,
    X,
    U,
}

impl Involution {
    pub fn point_map(self) -> PointTransformation {
        let (t, x, u) = (Expr::sym("t"), Expr::sym("x"), Expr::sym("u"));
        let (t, x, u) = match self {
            Involution::T => (-t, x, u),
            Involution::X => (t, -x, u),
            Involution::U => (t, x, -u),
        };
        PointTransformation { inverse: Some(Box::new(PointTransformation::new(t.clone(), x.clone(), u.clone()))), ..PointTransformation::new(t, x, u) }
    }

    /// `(f, g) -> (f, g)`, `(f, g)` or `(f, -g)` at the mirrored point, on the
    /// mirrored chart; cross-checked against the push-forward.
    pub fn apply_to_member(self, theta: &ClassMember) -> Result<ClassMember> {
        let flip = |s: ChartSign| if s == ChartSign::Pos { ChartSign::Neg } else { ChartSign::Pos };
        let mut chart = theta.chart.clone();
        let (f, g) = match self {
            Involution::T => (theta.f.clone(), theta.g.clone()),
            Involution::X => {
                chart = chart.clone().with("x", flip(chart.sign_of("x")));
                let m = [("x", -x())];
                (theta.f.subst_pairs(&m), theta.g.subst_pairs(&m))
            }
            Involution::U => {
                chart = chart.clone().with("u", flip(chart.sign_of("u")));
                let m = [("u", -Expr::sym("u"))];
                (theta.f.subst_pairs(&m), -theta.g.subst_pairs(&m))
            }
        };
        let direct = ClassMember::with_chart(f, g, chart.clone())?;
        let via = pushforward_theta_on(&self.point_map(), theta, chart)?;
        if !direct.same_as(&via)? {
            return Err(Error::RouteDisagreement(format!("involution {self:?}: {} vs {}", direct.fingerprint(), via.fingerprint())));
        }
        Ok(direct)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{ex, rat};

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn identity_and_shift_in_u() {
        let m = ClassMember::parse("x*u", "u^2").unwrap();
        let id = EquivalenceElement::identity();
        assert!(id.apply_to_member(&m).unwrap().same_as(&m).unwrap());
        let z = EquivalenceElement { psi: ex("x^2"), ..id };
        let img = z.apply_to_member(&m).unwrap();
        // g~ = g - psi_xx f at the preimage u = u~ - x^2.
        assert!(img.same_as(&ClassMember::parse("x*(u - x^2)", "(u - x^2)^2 - 2*x*(u - x^2)").unwrap()).unwrap());
    }

    #[test]
    fn affine_change_of_x() {
        let m = ClassMember::parse("x*u", "u^2").unwrap();
        let e = EquivalenceElement { phi: ex("2*x"), phi_inv: ex("x/2"), ..EquivalenceElement::identity() };
        let img = e.apply_to_member(&m).unwrap();
        // u = u~/sqrt 2 and x = x~/2 at the preimage.
        let want = ClassMember::parse("4*(x/2)*(u*2^(-1/2))", "2^(1/2)*(u*2^(-1/2))^2").unwrap();
        assert!(img.same_as(&want).unwrap());
    }

    #[test]
    fn factorization_recomposes() {
        let e = EquivalenceElement::new(q(1), q(2), q(3), ex("x^3 + x"), ex("x"), ex("x^2"));
        assert!(e.is_err(), "wrong inverse must be rejected");
        let e = EquivalenceElement::new(q(1), q(2), q(3), ex("x^3"), ex("x^(1/3)"), ex("x^2")).unwrap();
        let f = e.factor_elementary().unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f[0], Elementary::TimeShift(q(1)));
        assert_eq!(f[2], Elementary::Shift(ex("x^(2/3)")));
        let m = ClassMember::parse("x*u", "u^3").unwrap();
        let mut acc = m.clone();
        for fac in f.iter().rev() {
            acc = fac.element().apply_to_member(&acc).unwrap();
        }
        assert!(acc.same_as(&e.apply_to_member(&m).unwrap()).unwrap());
    }

    #[test]
    fn composition_and_inverse() {
        let a = EquivalenceElement::new(q(0), q(2), q(1), ex("x"), ex("x"), ex("0")).unwrap();
        let b = EquivalenceElement::new(q(0), q(3), q(1), ex("x"), ex("x"), ex("0")).unwrap();
        assert_eq!(a.then(&b).c1, q(6));
        let c = EquivalenceElement::new(q(1), q(2), q(3), ex("x^3"), ex("x^(1/3)"), ex("x+1")).unwrap();
        let round = c.then(&c.invert());
        let cfg = ZeroConfig::default();
        for (a, b) in round.full_map().iter().zip(EquivalenceElement::identity().full_map().iter()) {
            assert!(is_zero(&(a - b), &cfg).unwrap().holds(), "{a} vs {b}");
        }
    }

    #[test]
    fn generators_as_printed() {
        assert_eq!(Generator::Scale.field().spec(), "t=0, x=0, u=u, f=0, g=g");
        assert_eq!(Generator::Shift(ex("x^2")).field(), VectorField::parse("u=x^2, g=-2*f").unwrap());
        assert_eq!(Generator::Change(ex("1")).field(), VectorField::parse("x=1, f=0").unwrap());
    }

    #[test]
    fn adjoint_shift_on_scale() {
        let r = adjoint_on_generator(&Elementary::Shift(ex("x^3")), &Generator::Scale).unwrap();
        let want = Generator::Scale.field().sub(&Generator::Shift(ex("x^3")).field());
        assert_eq!(r, want);
    }

    #[test]
    fn involutions() {
        let m = ClassMember::parse("x*u", "u^3 + x").unwrap();
        let img = Involution::U.apply_to_member(&m).unwrap();
        assert_eq!(img.f, ex("-x*u"));
        assert_eq!(img.g, ex("u^3 - x"));
        Involution::X.apply_to_member(&m).unwrap();
        Involution::T.apply_to_member(&m).unwrap();
    }
}
