//! Vector fields, total derivatives on the second jet space over (t, x, u),
//! and the second prolongation of point vector fields.

use crate::expr::{is_zero, parse, Expr, ZeroConfig, ZeroVerdict};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const TXU: [&str; 3] = ["t", "x", "u"];
pub const TXUFG: [&str; 5] = ["t", "x", "u", "f", "g"];

pub const FIRST: [&str; 2] = ["u_t", "u_x"];
pub const SECOND: [&str; 3] = ["u_tt", "u_tx", "u_xx"];
pub const THIRD: [&str; 4] = ["u_ttt", "u_ttx", "u_txx", "u_xxx"];

/// A vector field `sum_i comps[i] * d/d coords[i]`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    pub coords: Vec<String>,
    pub comps: Vec<Expr>,
}

impl VectorField {
    pub fn new(coords: &[&str], comps: Vec<Expr>) -> VectorField {
        assert_eq!(coords.len(), comps.len(), "one component per coordinate");
        VectorField { coords: coords.iter().map(|s| s.to_string()).collect(), comps: comps.into_iter().map(|c| c.simplify()).collect() }
    }

    /// `tau d_t + xi d_x + eta d_u`.
    pub fn txu(tau: Expr, xi: Expr, eta: Expr) -> VectorField {
        VectorField::new(&TXU, vec![tau, xi, eta])
    }

    pub fn zero(coords: &[&str]) -> VectorField {
        VectorField::new(coords, coords.iter().map(|_| Expr::zero()).collect())
    }

    /// Parses `"t=expr, x=expr, u=expr"`; omitted coordinates are zero.
    /// Coordinates `f` or `g` switch to the five-dimensional space.
    pub fn parse(spec: &str) -> Result<VectorField> {
        let mut parts: BTreeMap<String, Expr> = BTreeMap::new();
        for chunk in split_top_level(spec) {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (k, v) = chunk
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("field component `{chunk}` is not of the form coord=expr")))?;
            let k = k.trim().to_string();
            if !TXUFG.contains(&k.as_str()) {
                return Err(Error::Invalid(format!("unknown coordinate `{k}`")));
            }
            parts.insert(k, parse(v.trim())?.simplify());
        }
        let five = parts.contains_key("f") || parts.contains_key("g");
        let coords: &[&str] = if five { &TXUFG } else { &TXU };
        Ok(VectorField::new(coords, coords.iter().map(|c| parts.get(*c).cloned().unwrap_or_else(Expr::zero)).collect()))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn component(&self, c: &str) -> Expr {
        self.coords.iter().position(|k| k == c).map(|i| self.comps[i].clone()).unwrap_or_else(Expr::zero)
    }

    pub fn tau(&self) -> Expr {
        self.component("t")
    }
    pub fn xi(&self) -> Expr {
        self.component("x")
    }
    pub fn eta(&self) -> Expr {
        self.component("u")
    }

    /// Action on a function: `Q(e) = sum_i Q^i de/dy_i`.
    pub fn apply(&self, e: &Expr) -> Expr {
        Expr::add_all(
            self.coords
                .iter()
                .zip(&self.comps)
                .filter(|(_, q)| !q.is_zero_const())
                .map(|(c, q)| q * e.diff(c))
                .collect::<Vec<_>>(),
        )
    }

    fn aligned(&self, o: &VectorField) -> (Vec<String>, Vec<Expr>, Vec<Expr>) {
        let mut coords = self.coords.clone();
        for c in &o.coords {
            if !coords.contains(c) {
                coords.push(c.clone());
            }
        }
        let a = coords.iter().map(|c| self.component(c)).collect();
        let b = coords.iter().map(|c| o.component(c)).collect();
        (coords, a, b)
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let (coords, a, b) = self.aligned(o);
        VectorField { coords, comps: a.iter().zip(&b).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        let (coords, a, b) = self.aligned(o);
        VectorField { coords, comps: a.iter().zip(&b).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField { coords: self.coords.clone(), comps: self.comps.iter().map(|q| q * c).collect() }
    }

    pub fn linear_combination(fields: &[VectorField], coeffs: &[Expr]) -> VectorField {
        let mut acc = VectorField { coords: fields.first().map(|f| f.coords.clone()).unwrap_or_default(), comps: vec![] };
        acc.comps = acc.coords.iter().map(|_| Expr::zero()).collect();
        for (f, c) in fields.iter().zip(coeffs) {
            acc = acc.add(&f.scale(c));
        }
        acc
    }

    /// Restriction to the given coordinates (drops the others).
    pub fn project(&self, coords: &[&str]) -> VectorField {
        VectorField::new(coords, coords.iter().map(|c| self.component(c)).collect())
    }

    pub fn subst(&self, pairs: &[(&str, Expr)]) -> VectorField {
        VectorField { coords: self.coords.clone(), comps: self.comps.iter().map(|c| c.subst_pairs(pairs)).collect() }
    }

    /// Zero test for every component.
    pub fn is_zero(&self, cfg: &ZeroConfig) -> Result<Vec<ZeroVerdict>> {
        self.comps.iter().map(|c| is_zero(c, cfg)).collect()
    }

    pub fn vanishes(&self, cfg: &ZeroConfig) -> Result<bool> {
        Ok(self.is_zero(cfg)?.iter().all(|v| v.holds()))
    }

    /// Canonical textual form, parseable by [`VectorField::parse`].
    pub fn spec(&self) -> String {
        self.coords.iter().zip(&self.comps).map(|(c, q)| format!("{c}={q}")).collect::<Vec<_>>().join(", ")
    }
}

pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(&self.comps)
            .filter(|(_, q)| !q.is_zero_const())
            .map(|(c, q)| {
                if q.is_one() {
                    format!("d_{c}")
                } else if matches!(q.node(), crate::expr::Node::Add(_)) {
                    format!("({q})*d_{c}")
                } else {
                    format!("{q}*d_{c}")
                }
            })
            .collect();
        let Some((first, rest)) = parts.split_first() else { return write!(f, "0") };
        write!(f, "{first}")?;
        for p in rest {
            match p.strip_prefix('-') {
                Some(neg) => write!(f, " - {neg}")?,
                None => write!(f, " + {p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{}]", self.spec())
    }
}

impl Serialize for VectorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&str, String> = self.coords.iter().zip(&self.comps).map(|(c, q)| (c.as_str(), q.to_string())).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let spec = m.iter().map(|(k, v)| format!("{k}=({v})")).collect::<Vec<_>>().join(", ");
        VectorField::parse(&spec).map_err(serde::de::Error::custom)
    }
}

/// Lie bracket `[a, b]^i = a(b^i) - b(a^i)`.
pub fn commutator(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    if a.coords != b.coords {
        return Err(Error::Precondition(format!(
            "commutator of fields on different coordinates ({}) and ({})",
            a.coords.join(","),
            b.coords.join(",")
        )));
    }
    Ok(bracket(a, b))
}

pub(crate) fn bracket(a: &VectorField, b: &VectorField) -> VectorField {
    let comps = a.coords.iter().map(|c| a.apply(&b.component(c)) - b.apply(&a.component(c))).collect();
    VectorField { coords: a.coords.clone(), comps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    T,
    X,
}

fn jet_chain(var: Var) -> [(&'static str, &'static str); 7] {
    match var {
        Var::T => [
            ("u", "u_t"),
            ("u_t", "u_tt"),
            ("u_x", "u_tx"),
            ("u_tt", "u_ttt"),
            ("u_tx", "u_ttx"),
            ("u_xx", "u_txx"),
            ("", ""),
        ],
        Var::X => [
            ("u", "u_x"),
            ("u_t", "u_tx"),
            ("u_x", "u_xx"),
            ("u_tt", "u_ttx"),
            ("u_tx", "u_txx"),
            ("u_xx", "u_xxx"),
            ("", ""),
        ],
    }
}

fn total_derivative_unchecked(e: &Expr, var: Var) -> Expr {
    let base = match var {
        Var::T => "t",
        Var::X => "x",
    };
    let mut terms = vec![e.diff(base)];
    for (from, to) in jet_chain(var) {
        if from.is_empty() {
            continue;
        }
        if e.contains(from) {
            terms.push(Expr::sym(to) * e.diff(from));
        }
    }
    Expr::add_all(terms)
}

/// Total derivative `D_t` or `D_x` of a function of (t, x, u, u_t, u_x).
pub fn total_derivative(e: &Expr, var: Var) -> Result<Expr> {
    let e = e.simplify();
    for s in SECOND.iter().chain(THIRD.iter()) {
        if e.contains(s) {
            return Err(Error::Precondition(format!("total_derivative expects at most first-order jets, found {s}")));
        }
    }
    Ok(total_derivative_unchecked(&e, var))
}

/// Second prolongation coefficients of a point vector field.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub field: VectorField,
    pub eta_t: Expr,
    pub eta_x: Expr,
    pub eta_tt: Expr,
    pub eta_tx: Expr,
    pub eta_xx: Expr,
}

pub(crate) fn check_point_field(q: &VectorField) -> Result<()> {
    if q.coords != TXU {
        return Err(Error::Precondition("expected a vector field on (t, x, u)".into()));
    }
    for c in &q.comps {
        for s in c.free_symbols() {
            if s.starts_with("u_") || s == "f" || s == "g" {
                return Err(Error::Precondition(format!("field component depends on `{s}`; a point field on (t, x, u) is required")));
            }
        }
    }
    Ok(())
}

/// Computes `eta^t, eta^x, eta^tt, eta^tx, eta^xx` from the characteristic
/// `W = eta - tau u_t - xi u_x`. Third-order jets cancel identically; their
/// absence in the canonical result is asserted.
pub fn prolong2(q: &VectorField) -> Result<Prolongation> {
    check_point_field(q)?;
    let (tau, xi, eta) = (q.tau(), q.xi(), q.eta());
    let ut = Expr::sym("u_t");
    let ux = Expr::sym("u_x");
    let w = &eta - &tau * &ut - &xi * &ux;
    let dt = |e: &Expr| total_derivative_unchecked(e, Var::T);
    let dx = |e: &Expr| total_derivative_unchecked(e, Var::X);
    let s = Expr::sym;
    let wt = dt(&w);
    let wx = dx(&w);
    let eta_t = &wt + &tau * s("u_tt") + &xi * s("u_tx");
    let eta_x = &wx + &tau * s("u_tx") + &xi * s("u_xx");
    let eta_tt = dt(&wt) + &tau * s("u_ttt") + &xi * s("u_ttx");
    let eta_tx = dx(&wt) + &tau * s("u_ttx") + &xi * s("u_txx");
    let eta_xx = dx(&wx) + &tau * s("u_txx") + &xi * s("u_xxx");
    for (name, e) in [("eta_tt", &eta_tt), ("eta_tx", &eta_tx), ("eta_xx", &eta_xx)] {
        for j in THIRD {
            if e.contains(j) {
                return Err(Error::Invalid(format!("third-order jet {j} survived in {name}")));
            }
        }
    }
    Ok(Prolongation { field: q.clone(), eta_t, eta_x, eta_tt, eta_tx, eta_xx })
}
