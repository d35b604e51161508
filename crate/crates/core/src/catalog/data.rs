//! Built-in catalog entries.

use super::*;
use crate::liealg::Invariants;

fn b(params: &[(&str, &str)], slots: &[(&str, &str)]) -> Binding {
    Binding::new(params, slots)
}

fn p(params: &[(&str, &str)]) -> Binding {
    Binding::new(params, &[])
}

fn templates(specs: &[&str]) -> Vec<FieldTemplate> {
    specs.iter().map(|s| FieldTemplate::short(s)).collect()
}

fn slot(name: &str, arg: &str) -> Slot {
    Slot { name: name.into(), arg: Some(arg.into()) }
}

fn raw_slot(name: &str) -> Slot {
    Slot { name: name.into(), arg: None }
}

struct CaseBuilder(CatalogCase);

fn case(id: &str, f: &str, g: &str, basis: &[&str], instances: Vec<Binding>) -> CaseBuilder {
    CaseBuilder(CatalogCase {
        id: id.into(),
        citation: format!("classification table of Lie-symmetry extensions, case {id}"),
        f: f.into(),
        g: g.into(),
        slots: vec![],
        basis: Basis::Fields { fields: templates(basis) },
        constraints: vec![],
        instances,
        regularity: Regularity::Singular { witness: FieldTemplate::short("t=1") },
        probe: None,
        notes: vec![],
    })
}

impl CaseBuilder {
    fn slots(mut self, s: &[(&str, &str)]) -> Self {
        self.0.slots = s.iter().map(|(n, a)| slot(n, a)).collect();
        self
    }
    fn regular(mut self, gens: &[&str]) -> Self {
        self.0.regularity = Regularity::Regular { subalgebra: gens.iter().map(|s| s.to_string()).collect() };
        self
    }
    fn singular(mut self, witness: &str) -> Self {
        self.0.regularity = Regularity::Singular { witness: FieldTemplate::short(witness) };
        self
    }
    fn probe(mut self, degree: usize) -> Self {
        self.0.probe = Some(Probe { degree, extra_basis: vec![] });
        self
    }
    fn probe_with(mut self, degree: usize, extra: ExtraBasis) -> Self {
        self.0.probe = Some(Probe { degree, extra_basis: vec![extra] });
        self
    }
    fn nonzero(mut self, text: &str, exprs: &[&str]) -> Self {
        self.0.constraints.push(Constraint { text: text.into(), nonzero: exprs.iter().map(|s| s.to_string()).collect(), zero: vec![] });
        self
    }
    fn zero(mut self, text: &str, exprs: &[&str]) -> Self {
        self.0.constraints.push(Constraint { text: text.into(), nonzero: vec![], zero: exprs.iter().map(|s| s.to_string()).collect() });
        self
    }
    fn sign(self, name: &str) -> Self {
        let e = format!("{name}^2 - 1");
        self.zero(&format!("{name} = ±1"), &[&e])
    }
    fn note(mut self, n: &str) -> Self {
        self.0.notes.push(n.into());
        self
    }
    fn done(self) -> CatalogCase {
        self.0
    }
}

const EXP_PAIR: [&str; 2] = ["t=exp(2*t), u=exp(2*t)*u", "t=exp(-2*t), u=-exp(-2*t)*u"];
const TRIG_PAIR: [&str; 2] = ["t=cos(2*t), u=-sin(2*t)*u", "t=sin(2*t), u=cos(2*t)*u"];
const POW_PAIR: [&str; 2] = ["t=2*t, u=u", "t=t^2, u=t*u"];

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn case_v(id: &str, f: &str, g: &str, basis: Vec<String>, instances: Vec<Binding>) -> CaseBuilder {
    let refs: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    case(id, f, g, &refs, instances)
}

fn cases() -> Vec<CatalogCase> {
    let generic = ["s^3 + s", "s^4 + s"];
    let ghat_pair = |eps: bool| -> Vec<Binding> {
        if eps {
            vec![b(&[("eps", "1")], &[("ghat", generic[0])]), b(&[("eps", "-1")], &[("ghat", generic[1])])]
        } else {
            vec![b(&[], &[("ghat", generic[0])]), b(&[], &[("ghat", generic[1])])]
        }
    };
    let mu_pair = || vec![b(&[("eps", "1")], &[("mu", "s")]), b(&[("eps", "-1")], &[("mu", "s^3 + s")])];
    let signs = || vec![p(&[("eps", "1"), ("eps2", "1")]), p(&[("eps", "-1"), ("eps2", "-1")])];
    let eps_only = || vec![p(&[("eps", "1")]), p(&[("eps", "-1")])];
    let nu_pair = || vec![p(&[("eps", "1"), ("nu", "1")]), p(&[("eps", "-1"), ("nu", "2")])];

    vec![
        case(
            "1",
            "fhat*abs(u)^p",
            "ghat*abs(u)^p*u",
            &["t=-p*t, x=2*delta, u=2*u"],
            vec![
                b(&[("p", "1"), ("delta", "0")], &[("fhat", "s"), ("ghat", "s^2")]),
                b(&[("p", "2"), ("delta", "1")], &[("fhat", "s"), ("ghat", "s^2")]),
            ],
        )
        .slots(&[("fhat", "x - delta*ln(abs(u))"), ("ghat", "x - delta*ln(abs(u))")])
        .zero("delta ∈ {0, 1}", &["delta*(delta - 1)"])
        .regular(&["2*Du - p*Dt + 2*D(delta)"])
        .probe(1)
        .done(),
        case("2", "fhat*exp(x)", "ghat*exp(x)", &["t=t, x=-2"], vec![
            b(&[], &[("fhat", "s"), ("ghat", "s^3")]),
            b(&[], &[("fhat", "s^2"), ("ghat", "s^2 + 1")]),
        ])
        .slots(&[("fhat", "u"), ("ghat", "u")])
        .regular(&["Dt - D(2)"])
        .probe(1)
        .done(),
        case("3", "fhat*exp(u)", "ghat*exp(u)", &["t=t, u=-2"], vec![
            b(&[], &[("fhat", "s"), ("ghat", "s^2")]),
            b(&[], &[("fhat", "s^2 + 1"), ("ghat", "s")]),
        ])
        .slots(&[("fhat", "x"), ("ghat", "x")])
        .regular(&["Dt - Z(2)"])
        .probe(1)
        .done(),
        case("4", "fhat", "ghat", &["x=1"], vec![
            b(&[], &[("fhat", "s"), ("ghat", "s^3 + s")]),
            b(&[], &[("fhat", "s^2 + 1"), ("ghat", "s^2")]),
        ])
        .slots(&[("fhat", "u"), ("ghat", "u")])
        .regular(&["D(1)"])
        .probe(1)
        .done(),
        case("5a", "eps", "ghat", &["x=1", "t=x, x=eps*t"], ghat_pair(true))
            .slots(&[("ghat", "u")])
            .sign("eps")
            .singular("t=x, x=eps*t")
            .probe(1)
            .done(),
        case("5b", "1", "ghat*exp(-2*x)", &["R:exp(x + t)", "R:exp(x - t)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:exp(x + t)")
            .done(),
        case("5c", "-1", "ghat*exp(-2*x)", &["R:exp(x)*cos(t)", "R:exp(x)*sin(t)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:exp(x)*cos(t)")
            .done(),
        case("6a", "eps", "ghat*x^(-2)", &["t=t, x=x", "t=t^2 + eps*x^2, x=2*t*x"], ghat_pair(true))
            .slots(&[("ghat", "u")])
            .sign("eps")
            .singular("t=t^2 + eps*x^2, x=2*t*x")
            .probe(2)
            .done(),
        case("6b", "1", "ghat*cos(x)^(-2)", &["R:cos(t)*cos(x)", "R:sin(t)*cos(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:cos(t)*cos(x)")
            .done(),
        case("6c", "1", "-ghat*cosh(x)^(-2)", &["R:exp(t)*cosh(x)", "R:exp(-t)*cosh(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:exp(t)*cosh(x)")
            .done(),
        case("6d", "1", "ghat*sinh(x)^(-2)", &["R:exp(t)*sinh(x)", "R:exp(-t)*sinh(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:exp(t)*sinh(x)")
            .done(),
        case("6e", "-1", "ghat*cos(x)^(-2)", &["R:exp(t)*cos(x)", "R:exp(-t)*cos(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:exp(t)*cos(x)")
            .done(),
        case("6f", "-1", "ghat*sinh(x)^(-2)", &["R:cos(t)*sinh(x)", "R:sin(t)*sinh(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:cos(t)*sinh(x)")
            .done(),
        case("7", "-1", "ghat*cosh(x)^(-2)", &["R:cos(t)*cosh(x)", "R:sin(t)*cosh(x)"], ghat_pair(false))
            .slots(&[("ghat", "u")])
            .singular("R:cos(t)*cosh(x)")
            .done(),
        case("8a", "eps*u^(-4)", "mu*u^(-3)", &POW_PAIR, mu_pair())
            .slots(&[("mu", "x")])
            .sign("eps")
            .singular(POW_PAIR[1])
            .probe(2)
            .done(),
        case("8b", "eps*u^(-4)", "mu*u^(-3) + u", &EXP_PAIR, mu_pair())
            .slots(&[("mu", "x")])
            .sign("eps")
            .singular(EXP_PAIR[0])
            .probe_with(0, ExtraBasis::Exp2t)
            .done(),
        case("8c", "eps*u^(-4)", "mu*u^(-3) - u", &TRIG_PAIR, mu_pair())
            .slots(&[("mu", "x")])
            .sign("eps")
            .singular(TRIG_PAIR[0])
            .probe_with(0, ExtraBasis::Trig2t)
            .done(),
        case("9", "eps*exp(x)*abs(u)^p", "nu*exp(x)*abs(u)^p*u", &["x=p, u=-u", "t=t, x=-2"], vec![
            p(&[("eps", "1"), ("p", "1"), ("nu", "1")]),
            p(&[("eps", "-1"), ("p", "2"), ("nu", "2")]),
        ])
        .sign("eps")
        .nonzero("p ≠ 0", &["p"])
        .regular(&["Du - D(p)", "Dt - D(2)"])
        .probe(1)
        .done(),
        case("10", "eps*x^2*exp(u)", "nu*exp(u)", &["x=x", "t=t, u=-2"], nu_pair())
            .sign("eps")
            .regular(&["Du - 2*D(x)", "Dt - Z(2)"])
            .probe(1)
            .done(),
        case("11", "fhat", "0", &["x=1", "t=t, x=x"], vec![b(&[], &[("fhat", "s^2 + 1")]), b(&[], &[("fhat", "s^3 + s")])])
            .slots(&[("fhat", "u")])
            .regular(&["-Du + 2*Dt + 2*D(x)", "D(1)"])
            .probe(1)
            .note("power and exponential fhat belong to cases 16 and 17")
            .done(),
        case("12", "eps*exp(u)", "eps2*exp(q*u)", &["x=1", "t=q*t, x=(q - 1)*x, u=-2"], vec![
            p(&[("eps", "1"), ("eps2", "1"), ("q", "2")]),
            p(&[("eps", "-1"), ("eps2", "-1"), ("q", "-1")]),
        ])
        .sign("eps")
        .sign("eps2")
        .nonzero("q ≠ 0, 1", &["q", "q - 1"])
        .regular(&["(1 - q)*Du + 2*q*Dt - 2*(1 - q)*D(x) - Z(4)", "D(1)"])
        .probe(1)
        .note("representatives with q > 1/2 suffice for constant-coefficient equations; recorded, not checked")
        .done(),
        case("13", "eps*abs(u)^p", "eps2*abs(u)^q", &["x=1", "t=(1 - q)*t, x=(1 + p - q)*x, u=2*u"], vec![
            p(&[("eps", "1"), ("eps2", "1"), ("p", "2"), ("q", "3")]),
            p(&[("eps", "-1"), ("eps2", "-1"), ("p", "1"), ("q", "3")]),
        ])
        .sign("eps")
        .sign("eps2")
        .nonzero("p ≠ 0, q ≠ 0, 1", &["p", "q", "q - 1"])
        .regular(&["(3 - p + q)*Du + 2*(1 - q)*Dt + 2*(1 + p - q)*D(x)", "D(1)"])
        .probe(1)
        .done(),
        case_v("14a", "eps*u^(-4)", "eps2*u^(-3)", with(&POW_PAIR, &["x=1"]), signs())
            .sign("eps")
            .sign("eps2")
            .singular(POW_PAIR[1])
            .probe(2)
            .done(),
        case_v("14b", "eps*u^(-4)", "eps2*u^(-3) + u", with(&EXP_PAIR, &["x=1"]), signs())
            .sign("eps")
            .sign("eps2")
            .singular(EXP_PAIR[0])
            .probe_with(0, ExtraBasis::Exp2t)
            .done(),
        case_v("14c", "eps*u^(-4)", "eps2*u^(-3) - u", with(&TRIG_PAIR, &["x=1"]), signs())
            .sign("eps")
            .sign("eps2")
            .singular(TRIG_PAIR[0])
            .probe_with(0, ExtraBasis::Trig2t)
            .done(),
        case("14d", "eps*u^4", "eps2*u", &["x=1", "x=2*x, u=u", "x=x^2, u=x*u"], vec![
            p(&[("eps", "1"), ("eps2", "1")]),
            p(&[("eps", "-1"), ("eps2", "1")]),
        ])
        .sign("eps")
        .sign("eps2")
        .regular(&["D(1)", "D(x)", "D(x^2)"])
        .probe(2)
        .done(),
        case_v("15a", "eps*u^(-4)", "nu*x^(-2)*u^(-3)", with(&POW_PAIR, &["x=2*x, u=-u"]), nu_pair())
            .sign("eps")
            .nonzero("nu ≠ 0", &["nu"])
            .singular(POW_PAIR[1])
            .probe(2)
            .done(),
        case_v("15b", "eps*u^(-4)", "nu*x^(-2)*u^(-3) + u", with(&EXP_PAIR, &["x=2*x, u=-u"]), nu_pair())
            .sign("eps")
            .nonzero("nu ≠ 0", &["nu"])
            .singular(EXP_PAIR[0])
            .probe_with(1, ExtraBasis::Exp2t)
            .done(),
        case_v("15c", "eps*u^(-4)", "nu*x^(-2)*u^(-3) - u", with(&TRIG_PAIR, &["x=2*x, u=-u"]), nu_pair())
            .sign("eps")
            .nonzero("nu ≠ 0", &["nu"])
            .singular(TRIG_PAIR[0])
            .probe_with(1, ExtraBasis::Trig2t)
            .done(),
        case("16", "eps*abs(u)^p", "0", &["x=1", "t=t, x=x", "x=p*x, u=2*u"], vec![
            p(&[("eps", "1"), ("p", "1")]),
            p(&[("eps", "-1"), ("p", "2")]),
        ])
        .sign("eps")
        .nonzero("p ≠ 0, ±4", &["p", "p - 4", "p + 4"])
        .regular(&["(p - 4)*Du - 2*p*D(x)", "(p - 4)*Dt - 4*D(x)", "D(1)"])
        .probe(1)
        .done(),
        case("17", "eps*exp(u)", "0", &["x=1", "t=t, x=x", "x=x, u=2"], eps_only())
            .sign("eps")
            .regular(&["Du - 2*D(x) - Z(4)", "Dt - Z(2)", "D(1)"])
            .probe(1)
            .done(),
        case("18a", "eps", "eps2*abs(u)^q", &["x=1", "t=eps*x, x=t", "t=(q - 1)*t, x=(q - 1)*x, u=-2*u"], vec![
            p(&[("eps", "1"), ("eps2", "1"), ("q", "3")]),
            p(&[("eps", "-1"), ("eps2", "-1"), ("q", "2")]),
        ])
        .sign("eps")
        .sign("eps2")
        .nonzero("q ≠ 0, 1", &["q", "q - 1"])
        .singular("t=eps*x, x=t")
        .probe(1)
        .done(),
        case("18b", "1", "eps2*abs(u)^q*exp(-2*x)", &["R:exp(x + t)", "R:exp(x - t)", "x=q - 1, u=2*u"], vec![
            p(&[("eps2", "1"), ("q", "3")]),
            p(&[("eps2", "-1"), ("q", "2")]),
        ])
        .sign("eps2")
        .nonzero("q ≠ 0, 1", &["q", "q - 1"])
        .singular("R:exp(x + t)")
        .done(),
        case("18c", "-1", "eps2*abs(u)^q*exp(-2*x)", &["R:exp(x)*cos(t)", "R:exp(x)*sin(t)", "x=q - 1, u=2*u"], vec![
            p(&[("eps2", "1"), ("q", "3")]),
            p(&[("eps2", "-1"), ("q", "2")]),
        ])
        .sign("eps2")
        .nonzero("q ≠ 0, 1", &["q", "q - 1"])
        .singular("R:exp(x)*cos(t)")
        .done(),
        case_v("19a", "eps*u^(-4)", "0", with(&POW_PAIR, &["x=1", "x=2*x, u=-u"]), eps_only())
            .sign("eps")
            .singular(POW_PAIR[1])
            .probe(2)
            .done(),
        case_v("19b", "eps*u^(-4)", "u", with(&EXP_PAIR, &["x=1", "x=2*x, u=-u"]), eps_only())
            .sign("eps")
            .singular(EXP_PAIR[0])
            .probe_with(1, ExtraBasis::Exp2t)
            .done(),
        case_v("19c", "eps*u^(-4)", "-u", with(&TRIG_PAIR, &["x=1", "x=2*x, u=-u"]), eps_only())
            .sign("eps")
            .singular(TRIG_PAIR[0])
            .probe_with(1, ExtraBasis::Trig2t)
            .done(),
        case("19d", "eps*u^4", "0", &["x=1", "t=t, x=x", "x=2*x, u=u", "x=x^2, u=x*u"], eps_only())
            .sign("eps")
            .regular(&["D(1)", "D(x)", "D(x^2)", "Du - 2*Dt"])
            .probe(2)
            .done(),
        CaseBuilder(CatalogCase {
            basis: Basis::ConformalSlice { max_degree: 3, closure_degree: 2 },
            ..case("20", "eps", "eps2*exp(u)", &[], vec![p(&[("eps", "1"), ("eps2", "1")]), p(&[("eps", "-1"), ("eps2", "-1")])]).0
        })
        .sign("eps")
        .sign("eps2")
        .singular("t=x, x=eps*t")
        .note("infinite-dimensional; the polynomial slice of degree <= 3 is stored")
        .done(),
    ]
}

struct FamilyBuilder(TransformationFamily);

fn family(id: &str, source: (&str, &str), target: (&str, &str), map: [&str; 3], inverse: [&str; 3], instances: Vec<Binding>) -> FamilyBuilder {
    let s = |a: [&str; 3]| a.map(|c| c.to_string());
    FamilyBuilder(TransformationFamily {
        id: id.into(),
        citation: format!("generating set of admissible transformations, family {id}"),
        source: (source.0.into(), source.1.into()),
        target: (target.0.into(), target.1.into()),
        slots: vec![],
        map: s(map),
        inverse: s(inverse),
        domain: String::new(),
        instances,
        sample_scale: None,
        derived_u: false,
    })
}

impl FamilyBuilder {
    fn slots(mut self, s: &[(&str, &str)]) -> Self {
        self.0.slots = s.iter().map(|(n, a)| slot(n, a)).collect();
        self
    }
    fn domain(mut self, d: &str) -> Self {
        self.0.domain = d.into();
        self
    }
    /// Confines sampling to magnitudes at most one, where the arctan-based
    /// inverse is on its principal branch.
    fn unit_box(mut self) -> Self {
        self.0.sample_scale = Some("1/4".into());
        self
    }
    fn done(self) -> TransformationFamily {
        self.0
    }
}

fn families() -> Vec<TransformationFamily> {
    let g2 = |vals: &[&str]| vals.iter().map(|v| b(&[], &[("g2", v)])).collect::<Vec<_>>();
    let mu = || vec![b(&[("eps", "1")], &[("mu", "s")]), b(&[("eps", "-1")], &[("mu", "s^3 + s")])];
    let t2 = |id: &str, g: &str, map: [&str; 3], inv: [&str; 3]| {
        family(id, ("eps*u^(-4)", g), ("eps*u^(-4)", "mu*u^(-3)"), map, inv, mu()).slots(&[("mu", "x")]).domain("eps = ±1, mu_x ≠ 0")
    };
    let g_one = ("1", "x^(-2)*g2");
    let g_minus = ("-1", "x^(-2)*g2");
    let same_u = |a: &'static str, c: &'static str| [a, c, "u"];
    let mut t9 = family(
        "T9",
        ("eps", "eps2*exp(u)"),
        ("eps", "eps2*exp(u)"),
        ["T", "X", "u"],
        ["IT", "IX", "u"],
        vec![
            b(&[("eps", "1"), ("eps2", "1")], &[
                ("T", "((x + t)^2 - (x - t))/2"),
                ("X", "((x + t)^2 + (x - t))/2"),
                ("IT", "((x + t)^(1/2) - (x - t))/2"),
                ("IX", "((x + t)^(1/2) + (x - t))/2"),
            ]),
            b(&[("eps", "1"), ("eps2", "1")], &[
                ("T", "((x + t)^3 - (x - t))/2"),
                ("X", "((x + t)^3 + (x - t))/2"),
                ("IT", "((x + t)^(1/3) - (x - t))/2"),
                ("IX", "((x + t)^(1/3) + (x - t))/2"),
            ]),
            b(&[("eps", "-1"), ("eps2", "-1")], &[
                ("T", "x*t"),
                ("X", "(x^2 - t^2)/2"),
                ("IT", "((t^2 + x^2)^(1/2) - x)^(1/2)"),
                ("IX", "((t^2 + x^2)^(1/2) + x)^(1/2)"),
            ]),
        ],
    )
    .domain("T_t = X_x, X_t = eps T_x, (T_tt, T_x) ≠ (0, 0); eps2 = 1 if eps = 1")
    .done();
    t9.slots = ["T", "X", "IT", "IX"].iter().map(|n| raw_slot(n)).collect();
    t9.derived_u = true;

    vec![
        family("T1", ("fhat", "ghat"), ("1/fhat", "-ghat/fhat"), ["x", "t", "u"], ["x", "t", "u"], vec![
            b(&[], &[("fhat", "s"), ("ghat", "s^3 + s")]),
            b(&[], &[("fhat", "1"), ("ghat", "s^3")]),
        ])
        .slots(&[("fhat", "u"), ("ghat", "u")])
        .domain("f_x = g_x = 0, f_u ≠ 0 or f = 1")
        .done(),
        t2("T2a", "mu*u^(-3)", ["1/t", "x", "u/t"], ["1/t", "x", "u/t"]).done(),
        t2("T2b", "mu*u^(-3) + u", ["exp(2*t)/2", "x", "exp(t)*u"], ["ln(2*t)/2", "x", "u*(2*t)^(-1/2)"]).done(),
        t2("T2c", "mu*u^(-3) - u", ["tan(t)", "x", "u/cos(t)"], ["arctan(t)", "x", "u*(1 + t^2)^(-1/2)"]).unit_box().done(),
        family(
            "T3",
            ("1", "exp(-2*x)*g2"),
            ("1", "g2"),
            same_u("exp(-x)*sinh(t)", "exp(-x)*cosh(t)"),
            same_u("arctanh(t/x)", "-ln(x^2 - t^2)/2"),
            g2(&["s^3", "s^3 + s"]),
        )
        .slots(&[("g2", "u")])
        .done(),
        family("T4a", ("1", "x^(-2)*g2"), g_one, same_u("t/(x^2 - t^2)", "x/(x^2 - t^2)"), same_u("t/(x^2 - t^2)", "x/(x^2 - t^2)"), g2(&["s^3"]))
            .slots(&[("g2", "u")])
            .done(),
        family(
            "T4b",
            ("1", "cos(x)^(-2)*g2"),
            g_one,
            same_u("cos(t)/(sin(t) + sin(x))", "cos(x)/(sin(t) + sin(x))"),
            same_u("arctan(1/(t + x)) - arctan(t - x)", "arctan(1/(t + x)) + arctan(t - x)"),
            g2(&["s^3"]),
        )
        .slots(&[("g2", "u")])
        .unit_box()
        .done(),
        family("T4c", ("1", "-cosh(x)^(-2)*g2"), g_one, same_u("exp(t)*sinh(x)", "exp(t)*cosh(x)"), same_u("ln(x^2 - t^2)/2", "arctanh(t/x)"), g2(&["s^3"]))
            .slots(&[("g2", "u")])
            .done(),
        family("T4d", ("1", "sinh(x)^(-2)*g2"), g_one, same_u("exp(t)*cosh(x)", "exp(t)*sinh(x)"), same_u("ln(t^2 - x^2)/2", "arctanh(x/t)"), g2(&["s^3"]))
            .slots(&[("g2", "u")])
            .done(),
        family(
            "T5",
            ("-1", "exp(-2*x)*g2"),
            ("-1", "g2"),
            same_u("exp(-x)*sin(t)", "exp(-x)*cos(t)"),
            same_u("arctan(t/x)", "-ln(t^2 + x^2)/2"),
            g2(&["s^3", "s^3 + s"]),
        )
        .slots(&[("g2", "u")])
        .unit_box()
        .done(),
        family("T6a", ("-1", "x^(-2)*g2"), g_minus, same_u("t/(x^2 + t^2)", "x/(x^2 + t^2)"), same_u("t/(x^2 + t^2)", "x/(x^2 + t^2)"), g2(&["s^3"]))
            .slots(&[("g2", "u")])
            .done(),
        family("T6b", ("-1", "cos(x)^(-2)*g2"), g_minus, same_u("exp(t)*sin(x)", "exp(t)*cos(x)"), same_u("ln(t^2 + x^2)/2", "arctan(t/x)"), g2(&["s^3"]))
            .slots(&[("g2", "u")])
            .unit_box()
            .done(),
        family(
            "T6c",
            ("-1", "sinh(x)^(-2)*g2"),
            g_minus,
            same_u("sin(t)/(cos(t) + cosh(x))", "sinh(x)/(cos(t) + cosh(x))"),
            same_u("arctan(2*t/(1 - x^2 - t^2))", "ln(((1 + x)^2 + t^2)/((1 - x)^2 + t^2))/2"),
            g2(&["s^3"]),
        )
        .slots(&[("g2", "u")])
        .unit_box()
        .done(),
        family(
            "T7",
            ("-1", "g2*cosh(x)^(-2)"),
            ("-1", "g2*cosh(x)^(-2)"),
            same_u("arctan((sg*sinh(x) + cg*sin(t))/cos(t))", "arctanh((cg*sinh(x) - sg*sin(t))/cosh(x))"),
            same_u("arctan((cg*sin(t) - sg*sinh(x))/cos(t))", "arctanh((cg*sinh(x) + sg*sin(t))/cosh(x))"),
            vec![
                b(&[("sg", "3/5"), ("cg", "4/5")], &[("g2", "s^3")]),
                b(&[("sg", "5/13"), ("cg", "12/13")], &[("g2", "s^3")]),
                b(&[("sg", "1"), ("cg", "0")], &[("g2", "s^3 + s")]),
            ],
        )
        .slots(&[("g2", "u")])
        .domain("gamma in (0, 2 pi); sg = sin gamma, cg = cos gamma")
        .unit_box()
        .done(),
        family(
            "T8a",
            ("1", "g"),
            ("1", "g"),
            same_u("t*ch + x*sh", "t*sh + x*ch"),
            same_u("t*ch - x*sh", "x*ch - t*sh"),
            vec![b(&[("ch", "5/4"), ("sh", "3/4")], &[("g", "s^3")]), b(&[("ch", "13/12"), ("sh", "5/12")], &[("g", "s^3 + s")])],
        )
        .slots(&[("g", "u")])
        .domain("gamma ≠ 0; ch = cosh gamma, sh = sinh gamma")
        .done(),
        family(
            "T8b",
            ("-1", "g"),
            ("-1", "g"),
            same_u("t*cg - x*sg", "t*sg + x*cg"),
            same_u("t*cg + x*sg", "x*cg - t*sg"),
            vec![b(&[("cg", "cos(1)"), ("sg", "sin(1)")], &[("g", "s^3")])],
        )
        .slots(&[("g", "u")])
        .domain("gamma in (0, 2 pi); cg = cos gamma, sg = sin gamma")
        .done(),
        t9,
    ]
}

fn arrow(family: &str, src: (&str, Binding), tgt: (&str, Binding)) -> Arrow {
    let id = format!("{family}: {} -> {}", src.0, tgt.0);
    Arrow {
        citation: format!("additional equivalences between classification cases, {id}"),
        id,
        family: family.into(),
        map_override: None,
        source: (src.0.into(), src.1),
        target: (tgt.0.into(), tgt.1),
    }
}

fn arrows() -> Vec<Arrow> {
    let g = |v: &str| b(&[], &[("ghat", v)]);
    let ge = |e: &str, v: &str| b(&[("eps", e)], &[("ghat", v)]);
    let mu = |e: &str| b(&[("eps", e)], &[("mu", "s")]);
    let e = |v: &str| p(&[("eps", v)]);
    let ee = |a: &str, c: &str| p(&[("eps", a), ("eps2", c)]);
    let en = |a: &str, n: &str| p(&[("eps", a), ("nu", n)]);
    let gen = "s^3 + s";
    let mut twelve = arrow(
        "T1",
        ("12", p(&[("eps", "1"), ("eps2", "1"), ("q", "2")])),
        ("12", p(&[("eps", "1"), ("eps2", "1"), ("q", "-1")])),
    );
    twelve.id = "T1 with u -> -u: 12 -> 12".into();
    twelve.citation = format!("additional equivalences between classification cases, {}", twelve.id);
    let flip = ["x", "t", "-u"].map(String::from);
    twelve.map_override = Some((flip.clone(), flip));

    let mut out = vec![
        arrow("T1", ("4", b(&[], &[("fhat", "s"), ("ghat", gen)])), ("4", b(&[], &[("fhat", "1/s"), ("ghat", "-(s^3 + s)/s")]))),
        arrow("T1", ("5a", ge("1", gen)), ("5a", ge("1", "-(s^3 + s)"))),
        arrow("T1", ("11", b(&[], &[("fhat", "s^2 + 1")])), ("11", b(&[], &[("fhat", "1/(s^2 + 1)")]))),
        twelve,
        arrow(
            "T1",
            ("13", p(&[("eps", "-1"), ("eps2", "-1"), ("p", "1"), ("q", "3")])),
            ("13", p(&[("eps", "-1"), ("eps2", "-1"), ("p", "-1"), ("q", "2")])),
        ),
        arrow("T1", ("14d", ee("1", "1")), ("14a", ee("1", "-1"))),
        arrow("T1", ("16", p(&[("eps", "1"), ("p", "1")])), ("16", p(&[("eps", "1"), ("p", "-1")]))),
        arrow(
            "T1",
            ("18a", p(&[("eps", "1"), ("eps2", "1"), ("q", "3")])),
            ("18a", p(&[("eps", "1"), ("eps2", "-1"), ("q", "3")])),
        ),
        arrow("T1", ("19d", e("-1")), ("19a", e("-1"))),
        arrow("T1", ("20", ee("1", "1")), ("20", ee("1", "-1"))),
    ];
    for (fam, letter) in [("T2b", "b"), ("T2c", "c")] {
        out.push(arrow(fam, (&format!("8{letter}"), mu("1")), ("8a", mu("1"))));
        out.push(arrow(fam, (&format!("14{letter}"), ee("1", "-1")), ("14a", ee("1", "-1"))));
        out.push(arrow(fam, (&format!("15{letter}"), en("-1", "2")), ("15a", en("-1", "2"))));
        out.push(arrow(fam, (&format!("19{letter}"), e("1")), ("19a", e("1"))));
    }
    let q18 = |s: &str| p(&[("eps2", s), ("q", "3")]);
    let q18a = |e: &str, s: &str| p(&[("eps", e), ("eps2", s), ("q", "3")]);
    out.extend([
        arrow("T3", ("5b", g(gen)), ("5a", ge("1", gen))),
        arrow("T3", ("18b", q18("1")), ("18a", q18a("1", "1"))),
        arrow("T4b", ("6b", g(gen)), ("6a", ge("1", gen))),
        arrow("T4c", ("6c", g(gen)), ("6a", ge("1", gen))),
        arrow("T4d", ("6d", g(gen)), ("6a", ge("1", gen))),
        arrow("T5", ("5c", g(gen)), ("5a", ge("-1", gen))),
        arrow("T5", ("18c", q18("-1")), ("18a", q18a("-1", "-1"))),
        arrow("T6b", ("6e", g(gen)), ("6a", ge("-1", gen))),
        arrow("T6c", ("6f", g(gen)), ("6a", ge("-1", gen))),
    ]);
    out
}

fn subalgebras() -> Vec<SubalgebraEntry> {
    let entry = |id: &str, citation: &str, gens: &[&str], params: &[(&str, &str)], case: Option<(&str, Binding)>| SubalgebraEntry {
        id: id.into(),
        citation: citation.into(),
        generators: gens.iter().map(|s| s.to_string()).collect(),
        params: p(params),
        appropriate: true,
        case: case.map(|(c, b)| (c.to_string(), b)),
    };
    let one = "inequivalent appropriate one-dimensional subalgebras";
    let two = "inequivalent appropriate two-dimensional subalgebras";
    let three = "inequivalent appropriate three-dimensional subalgebras";
    let full = "appropriate subalgebras meeting the D(zeta) + Z(chi) part in dimension three";
    let test = "appropriate subalgebras avoid Du + Z(chi) and Dt";
    let third = "a1*Du + a2*Dt + a3*D(x) + Z(delta)";
    let mut out = vec![
        entry("1d-a", one, &["2*Du - q*Dt + 2*D(delta)"], &[("q", "1"), ("delta", "1")], Some(("1", p(&[("p", "1"), ("delta", "1")])))),
        entry("1d-b", one, &["2*Du - q*Dt + 2*D(delta)"], &[("q", "2"), ("delta", "0")], Some(("1", p(&[("p", "2"), ("delta", "0")])))),
        entry("1d-c", one, &["Dt - D(2)"], &[], Some(("2", p(&[])))),
        entry("1d-d", one, &["Dt - Z(2)"], &[], Some(("3", p(&[])))),
        entry("1d-e", one, &["D(1)"], &[], Some(("4", p(&[])))),
        entry("2d-a", two, &["Du - D(p)", "Dt - D(2)"], &[("p", "2")], Some(("9", p(&[("p", "2")])))),
        entry("2d-b", two, &["Du - 2*D(x)", "Dt - Z(2)"], &[], Some(("10", p(&[])))),
        entry("2d-c", two, &[third, "D(1)"], &[("a1", "-1"), ("a2", "2"), ("a3", "2"), ("delta", "0")], Some(("11", p(&[])))),
        entry("2d-d", two, &[third, "D(1)"], &[("a1", "-1"), ("a2", "4"), ("a3", "2"), ("delta", "-4")], Some(("12", p(&[("q", "2")])))),
        entry("2d-e", two, &[third, "D(1)"], &[("a1", "4"), ("a2", "-4"), ("a3", "0"), ("delta", "0")], Some(("13", p(&[("p", "2"), ("q", "3")])))),
        entry("3d-a", three, &["Du + p1*D(x)", "Dt + p2*D(x)", "D(1)"], &[("p1", "2"), ("p2", "2")], Some(("16", p(&[("p", "2")])))),
        entry("3d-b", three, &["Du + p1*D(x)", "Dt + p2*D(x)", "D(1)"], &[("p1", "2/3"), ("p2", "4/3")], Some(("16", p(&[("p", "1")])))),
        entry("3d-c", three, &["Du - 2*D(x) + Z(d)", "Dt - Z(2)", "D(1)"], &[("d", "-4")], Some(("17", p(&[])))),
        entry("3d-d", full, &["D(1)", "D(x)", "D(x^2)"], &[], Some(("14d", p(&[])))),
        entry("4d-a", full, &["D(1)", "D(x)", "D(x^2)", "Du - 2*Dt"], &[], Some(("19d", p(&[])))),
    ];
    for (id, gens) in [("neg-a", vec!["Dt"]), ("neg-b", vec!["Du + Z(x)"]), ("neg-c", vec!["Z(1)", "D(1)"])] {
        let mut e = entry(id, test, &gens, &[], None);
        e.appropriate = false;
        out.push(e);
    }
    out
}

fn kernels() -> Vec<KernelAlgebra> {
    let k = |sigma: i64, fields: &[&str], conj: Option<&str>| KernelAlgebra {
        sigma,
        citation: format!("kernel algebra of the subclass with f = eps u^-4, g = mu u^-3 + sigma u, sigma = {sigma}"),
        fields: templates(fields),
        conjugator: conj.map(String::from),
    };
    vec![
        k(0, &["t=1", POW_PAIR[0], POW_PAIR[1]], None),
        k(1, &["t=1", EXP_PAIR[0], EXP_PAIR[1]], Some("T2b")),
        k(-1, &["t=1", TRIG_PAIR[0], TRIG_PAIR[1]], Some("T2c")),
    ]
}

fn special_cases() -> Vec<SpecialCase> {
    let kinds: [(&str, [(&str, &str); 2], &[&str]); 4] = [
        ("general", [("1", "s"), ("-1", "s^3 + s")], &[]),
        ("constant", [("1", "1"), ("-1", "-1")], &["x=1"]),
        ("inverse-square", [("1", "2*s^(-2)"), ("-1", "-s^(-2)")], &["x=2*x, u=-u"]),
        ("zero", [("1", "0"), ("-1", "0")], &["x=1", "x=2*x, u=-u"]),
    ];
    let mut out = Vec::new();
    for sigma in [0i64, 1, -1] {
        for (kind, samples, ext) in kinds {
            out.push(SpecialCase {
                id: format!("sigma={sigma}/{kind}"),
                citation: format!("Lie-symmetry extensions of the subclass f = eps u^-4, g = mu u^-3 + sigma u, mu {kind}"),
                sigma,
                mu_kind: kind.into(),
                samples: samples.iter().map(|(e, m)| b(&[("eps", e)], &[("mu", m)])).collect(),
                extension: templates(ext),
            });
        }
    }
    out
}

fn normalizations() -> Vec<NormalizationSample> {
    let rows: [(&str, [&str; 6], &str, &str); 3] = [
        ("a", ["0", "1", "1", "1", "0", "1"], "1", "s"),
        ("b", ["1", "2", "3", "1", "1", "2"], "-1", "s^3 + s"),
        ("c", ["-1", "1", "2", "3", "-1", "1/2"], "1", "s^2 + s"),
    ];
    rows.iter()
        .map(|(id, a, eps, mu)| {
            let names = ["a0", "a1", "a2", "a3", "b0", "b1"];
            let mut params: Vec<(&str, &str)> = names.iter().copied().zip(a.iter().copied()).collect();
            params.push(("eps", eps));
            NormalizationSample {
                id: id.to_string(),
                citation: "normalization of mu within the sigma = 0 subclass by fractional-linear time changes".into(),
                params: b(&params, &[("mu", mu)]),
            }
        })
        .collect()
}

fn separating() -> Vec<SeparatingAlgebra> {
    let inv = |derived_dim, killing_signature| Invariants { dim: 3, derived_dim, center_dim: 0, killing_signature };
    let s = |id: &str, f: &str, g: &str, fields: &[&str], expected| SeparatingAlgebra {
        id: id.into(),
        citation: format!("symmetry algebras separating the source terms g1 of u_tt = eps u_xx + eps2 e^u + g1(x), {id}"),
        f: f.into(),
        g: g.into(),
        fields: templates(fields),
        expected,
    };
    vec![
        s("constant, eps = 1", "1", "exp(u) + 2", &["t=1", "x=1", "t=x, x=t"], inv(2, (1, 2, 0))),
        s("constant, eps = -1", "-1", "exp(u) + 2", &["t=1", "x=1", "t=x, x=-t"], inv(2, (0, 2, 1))),
        s("inverse square", "1", "exp(u) + 2*x^(-2)", &["t=1", "t=t, x=x, u=-2", "t=t^2 + x^2, x=2*t*x, u=-4*t"], inv(3, (2, 0, 1))),
        s("cosh", "-1", "-exp(u) + 2*cosh(x)^(-2)", &["t=1", "R':cos(t)*cosh(x)", "R':sin(t)*cosh(x)"], inv(3, (0, 0, 3))),
    ]
}

pub(super) fn build() -> Catalog {
    Catalog {
        cases: cases(),
        families: families(),
        arrows: arrows(),
        subalgebras: subalgebras(),
        kernels: kernels(),
        special_cases: special_cases(),
        normalizations: normalizations(),
        separating: separating(),
    }
}
