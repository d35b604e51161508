//! Strategies and property bodies shared by the property suites and the
//! acceptance target.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use wavesym::expr::{eval, is_zero, parse, rat, Num, Point, ZeroConfig};
use wavesym::{commutator, prolong2, Expr, VectorField};

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::sample::select(vec!["t", "x", "u"]).prop_map(String::from),
        (1i64..6).prop_map(|n| n.to_string()),
        (1i64..6, 2i64..5).prop_map(|(n, d)| format!("({n}/{d})")),
    ]
}

/// Random expression source text over t, x, u. Logarithms and
/// fractional powers act on positive arguments.
pub fn expr_src() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}*{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}/(1 + ({b})^2))")),
            (inner.clone(), -2i64..4).prop_map(|(a, k)| format!("({a})^({k})")),
            inner.clone().prop_map(|a| format!("(({a})^2 + 1)^(1/2)")),
            (prop::sample::select(vec!["exp", "sin", "cos", "sinh", "cosh", "arctan"]), inner.clone())
                .prop_map(|(f, a)| format!("{f}({a})")),
            inner.prop_map(|a| format!("ln(abs({a}) + 1)")),
        ]
    })
}

pub fn point() -> impl Strategy<Value = Point> {
    (1i64..40, 1i64..40, 1i64..40).prop_map(|(t, x, u)| {
        [("t", rat(t, 13)), ("x", rat(x, 11)), ("u", rat(u, 17))].into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    })
}

fn value(e: &Expr, p: &Point) -> Option<Num> {
    eval(e, p, 40).ok().map(|r| r.value)
}

fn close(a: &Num, b: &Num) -> bool {
    match (a, b) {
        (Num::Q(x), Num::Q(y)) => x == y,
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
        }
    }
}

/// Evaluation of an expression and of its simplified form agree to a
/// relative 1e-9 wherever the former is defined.
pub fn eval_agrees_with_simplify(src: &str, p: &Point) -> Result<(), TestCaseError> {
    let raw = parse(src).unwrap();
    let simple = raw.simplify();
    if let Some(a) = value(&raw, p) {
        let b = value(&simple, p);
        prop_assert!(b.is_some(), "{src} evaluates but {simple} does not");
        let b = b.unwrap();
        // Magnitudes beyond the f64 range are compared by the zero tests instead.
        prop_assume!(a.to_f64().is_finite());
        prop_assert!(close(&a, &b), "{src}: {a:?} vs {simple}: {b:?}");
    }
    Ok(())
}

/// Polynomial of total degree at most 2 in t, x, u with small integer
/// coefficients.
pub fn poly() -> impl Strategy<Value = Expr> {
    let vars = ["t", "x", "u"];
    let mut monos = vec![Expr::one()];
    for (i, a) in vars.iter().enumerate() {
        monos.push(Expr::sym(a));
        for b in &vars[i..] {
            monos.push(Expr::sym(a) * Expr::sym(b));
        }
    }
    prop::collection::vec(-3i64..4, monos.len())
        .prop_map(move |cs| monos.iter().zip(cs).fold(Expr::zero(), |acc, (m, c)| acc + Expr::integer(c) * m).simplify())
}

pub fn field() -> impl Strategy<Value = VectorField> {
    (poly(), poly(), poly()).prop_map(|(a, b, c)| VectorField::txu(a, b, c))
}

pub fn vanishes(q: &VectorField) -> bool {
    q.comps.iter().all(|c| c.simplify().is_zero_const())
}

fn bracket(a: &VectorField, b: &VectorField) -> VectorField {
    commutator(a, b).unwrap()
}

pub fn jacobi_identity(a: &VectorField, b: &VectorField, c: &VectorField) -> Result<(), TestCaseError> {
    let j = bracket(a, &bracket(b, c)).add(&bracket(b, &bracket(c, a))).add(&bracket(c, &bracket(a, b)));
    prop_assert!(vanishes(&j), "{}", j);
    Ok(())
}

pub fn prolongation_is_linear(a: &VectorField, b: &VectorField, p: i64, q: i64) -> Result<(), TestCaseError> {
    let (cp, cq) = (Expr::integer(p), Expr::integer(q));
    let combo = prolong2(&a.scale(&cp).add(&b.scale(&cq))).unwrap();
    let (pa, pb) = (prolong2(a).unwrap(), prolong2(b).unwrap());
    let triples = [
        (&combo.eta_t, &pa.eta_t, &pb.eta_t),
        (&combo.eta_x, &pa.eta_x, &pb.eta_x),
        (&combo.eta_tt, &pa.eta_tt, &pb.eta_tt),
        (&combo.eta_tx, &pa.eta_tx, &pb.eta_tx),
        (&combo.eta_xx, &pa.eta_xx, &pb.eta_xx),
    ];
    for (c, x, y) in triples {
        let d = (c - (&cp * x + &cq * y)).simplify();
        prop_assert!(d.is_zero_const(), "{}", d);
    }
    Ok(())
}

/// Sampling settings for quick zero tests inside properties.
pub fn light() -> ZeroConfig {
    ZeroConfig { samples: 16, ..ZeroConfig::default() }
}

pub fn holds(e: &Expr, cfg: &ZeroConfig) -> bool {
    is_zero(e, cfg).map(|v| v.holds()).unwrap_or(false)
}
