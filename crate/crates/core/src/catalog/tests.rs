use super::*;

fn first(case: &str) -> (&'static CatalogCase, Binding) {
    let c = load_catalog().case(case).unwrap();
    (c, c.instances[0].clone())
}

#[test]
fn catalog_counts() {
    let cat = load_catalog();
    assert_eq!(cat.cases.len(), 39);
    assert_eq!(cat.family_instances(), 28);
    assert_eq!(cat.arrows.len(), 27);
}

#[test]
fn case_5a_basis() {
    let (c, b) = first("5a");
    let fields = c.basis_fields(&b).unwrap();
    assert_eq!(fields.len(), 2);
    assert_eq!(c.documented_dim(&b).unwrap(), 3);
}

#[test]
fn case_10_verifies() {
    let (c, b) = first("10");
    let r = verify_case(c, &b).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn constraint_violation_is_rejected() {
    let c = load_catalog().case("16").unwrap();
    let bad = Binding::new(&[("eps", "1"), ("p", "4")], &[]);
    assert!(verify_case(c, &bad).is_err());
}

#[test]
fn family_t5_verifies() {
    let f = load_catalog().family("T5").unwrap();
    for b in &f.instances {
        let r = verify_family(f, b);
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn arrow_19d_to_19a() {
    let cat = load_catalog();
    let a = cat.arrows.iter().find(|a| a.source.0 == "19d").unwrap();
    let r = verify_arrow(cat, a);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn negative_controls_are_not_appropriate() {
    let cat = load_catalog();
    for s in cat.subalgebras.iter().filter(|s| !s.appropriate) {
        let r = verify_subalgebra(cat, s);
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn combination_parsing() {
    let b = Binding::new(&[("p", "2")], &[]);
    let terms = parse_combination("(p - 4)*Du - 2*p*D(x)", &b).unwrap();
    assert_eq!(terms.len(), 2);
    assert!(parse_combination("Du + Q(x)", &b).is_err());
}
