//! Properties of vector fields and Lie algebras: the Jacobi identity,
//! linearity of prolongation, the commutation relations of the equivalence
//! algebra and invariance of structural invariants under basis changes.

use proptest::prelude::*;
use wavesym::equiv::Generator;
use wavesym::expr::rat;
use wavesym::liealg::{change_basis, LieAlgebraSpan};
use wavesym::{commutator, Expr, Rational, VectorField};

mod common;
use common::{field, vanishes};

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn jacobi_identity(a in field(), b in field(), c in field()) {
        common::jacobi_identity(&a, &b, &c)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn prolongation_is_linear(a in field(), b in field(), p in -3i64..4, q in -3i64..4) {
        common::prolongation_is_linear(&a, &b, p, q)?;
    }
}

fn low_poly() -> impl Strategy<Value = Expr> {
    prop::sample::select(vec!["1", "x", "x^2", "x^3", "2*x - 1", "x^3 + x"]).prop_map(|s| wavesym::parse(s).unwrap())
}

fn bracket(a: &VectorField, b: &VectorField) -> VectorField {
    commutator(a, b).unwrap()
}

fn gen_eq(a: &VectorField, b: &VectorField) -> bool {
    vanishes(&a.sub(b))
}

fn half() -> Expr {
    Expr::constant(rat(1, 2))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// The nonzero relations are [Pt,Dt] = Pt, [Z(chi),Du] = Z(chi),
    /// [D(z1),D(z2)] = D(z1 z2_x - z1_x z2) and
    /// [D(zeta),Z(chi)] = Z(zeta chi_x - zeta_x chi / 2); all other pairs
    /// commute.
    #[test]
    fn commutation_table(z1 in low_poly(), z2 in low_poly()) {
        use Generator::*;
        let f = |g: &Generator| g.field();
        let zero = VectorField::zero(&f(&TimeShift).coords.iter().map(String::as_str).collect::<Vec<_>>());
        let d = |a: &Expr| Change(a.clone());
        let z = |a: &Expr| Shift(a.clone());
        let cases: Vec<(Generator, Generator, VectorField)> = vec![
            (TimeShift, TimeScale, f(&TimeShift)),
            (z(&z1), Scale, f(&z(&z1))),
            (d(&z1), d(&z2), f(&d(&(&z1 * z2.diff("x") - z1.diff("x") * &z2)))),
            (d(&z1), z(&z2), f(&z(&(&z1 * z2.diff("x") - half() * z1.diff("x") * &z2)))),
            (TimeShift, Scale, zero.clone()),
            (TimeShift, d(&z1), zero.clone()),
            (TimeShift, z(&z1), zero.clone()),
            (TimeScale, Scale, zero.clone()),
            (TimeScale, d(&z1), zero.clone()),
            (TimeScale, z(&z1), zero.clone()),
            (Scale, d(&z1), zero.clone()),
            (z(&z1), z(&z2), zero),
        ];
        for (a, b, expected) in cases {
            let got = bracket(&f(&a), &f(&b));
            prop_assert!(gen_eq(&got, &expected), "[{}, {}] = {} expected {}", a.label(), b.label(), got, expected);
        }
    }
}

fn realization(name: &str) -> Vec<VectorField> {
    let specs: &[&str] = match name {
        "sl2" => &["t=1", "t=t, x=x, u=-2", "t=t^2 + x^2, x=2*t*x, u=-4*t"],
        "e2" => &["t=1", "x=1", "t=x, x=-t"],
        "p11" => &["t=1", "x=1", "t=x, x=t"],
        "so3" => &["t=-x, x=t", "x=-u, u=x", "t=u, u=-t"],
        _ => &["x=1", "x=2*x, u=u", "x=x^2, u=x*u", "t=1"],
    };
    specs.iter().map(|s| VectorField::parse(s).unwrap()).collect()
}

fn invertible(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(-3i64..4, n), n)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|v| rat(v, 1)).collect::<Vec<_>>()).collect::<Vec<_>>())
        .prop_filter("invertible", |m| wavesym::linalg::rank(m, m.len()) == m.len())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn invariants_survive_basis_change(name in prop::sample::select(vec!["sl2", "e2", "p11", "so3", "sl2+t"]), m3 in invertible(3), m4 in invertible(4)) {
        let basis = realization(name);
        let m = if basis.len() == 3 { m3 } else { m4 };
        let mut span = LieAlgebraSpan::new(basis).unwrap();
        let mut changed = change_basis(&span, &m).unwrap();
        prop_assert_eq!(span.invariants().unwrap(), changed.invariants().unwrap());
    }
}
