//! Properties of the expression engine: parse/render round trips,
//! agreement of evaluation before and after simplification, linearity of
//! differentiation and symmetry of mixed partials.

use proptest::prelude::*;
use wavesym::expr::{is_zero, parse};
use wavesym::Expr;

mod common;
use common::{expr_src, light as cfg, point};

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn eval_agrees_with_simplify(src in expr_src(), p in point()) {
        common::eval_agrees_with_simplify(&src, &p)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn render_parse_round_trip(src in expr_src()) {
        let e = parse(&src).unwrap().simplify();
        let again = parse(&e.to_string()).unwrap().simplify();
        prop_assert_eq!(&again, &e, "rendered as {}", e);
    }

    #[test]
    fn simplify_is_idempotent(src in expr_src()) {
        let e = parse(&src).unwrap().simplify();
        prop_assert_eq!(e.simplify(), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, ..ProptestConfig::default() })]

    #[test]
    fn derivative_is_linear(a in expr_src(), b in expr_src(), p in 1i64..5, q in -4i64..4, var in prop::sample::select(vec!["t", "x", "u"])) {
        let (ea, eb) = (parse(&a).unwrap(), parse(&b).unwrap());
        let (cp, cq) = (Expr::integer(p), Expr::integer(q));
        let lhs = (&cp * &ea + &cq * &eb).diff(var);
        let rhs = &cp * ea.diff(var) + &cq * eb.diff(var);
        prop_assert!(is_zero(&(lhs - rhs), &cfg()).unwrap().holds());
    }

    #[test]
    fn mixed_partials_commute(a in expr_src()) {
        let e = parse(&a).unwrap();
        for (v, w) in [("t", "x"), ("x", "u"), ("t", "u")] {
            let d = e.diff(v).diff(w) - e.diff(w).diff(v);
            prop_assert!(is_zero(&d, &cfg()).unwrap().holds(), "{} and {} for {}", v, w, a);
        }
    }
}
