//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use num_traits::{One, Signed, Zero};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use wavesym::catalog::{
    load_catalog, verify_arrow, verify_case, verify_family, verify_subalgebra, Binding, Catalog, TransformationFamily,
};
use wavesym::deteq::is_symmetry_with;
use wavesym::equiv::{adjoint_on_generator, Elementary, EquivalenceElement, Generator};
use wavesym::expr::{is_zero, rat, ZeroConfig};
use wavesym::liealg::{subspace_equal, LieAlgebraSpan, SpanConfig};
use wavesym::ptrans::verify_admissible_with;
use wavesym::solver::{dimension_profile, solve_symmetries, ExtraBasis, Mode, SolverConfig};
use wavesym::{commutator, parse, ClassMember, Expr, PointTransformation, Rational, VectorField};

mod common;

/// Pinned zero-test settings: 64 samples at 50 digits, tolerance 1e-30.
const SAMPLES: usize = 64;
const DIGITS: u32 = 50;
const TOL_EXP10: i32 = 30;
const TABLE_BUDGET: Duration = Duration::from_secs(60);
const COMMUTATION_BUDGET: Duration = Duration::from_secs(5);
const SEED: u64 = 0x5eed;

/// Row and arrow counts of the source classification.
const TABLE_ROWS: usize = 39;
const LISTED_ARROWS: usize = 27;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn pinned() -> ZeroConfig {
    ZeroConfig { samples: SAMPLES, digits: DIGITS, tol_exp10: TOL_EXP10, seed: SEED, ..ZeroConfig::default() }
}

fn zero(e: &Expr, cfg: &ZeroConfig) -> bool {
    is_zero(e, cfg).map(|v| v.holds()).unwrap_or(false)
}

fn auto_solver() -> SolverConfig {
    SolverConfig::default()
}

fn with_float_fallback<T>(mut run: impl FnMut(&SolverConfig) -> wavesym::Result<T>, cfg: SolverConfig) -> wavesym::Result<T> {
    match run(&cfg) {
        Err(wavesym::Error::Precondition(_)) => run(&SolverConfig { mode: Mode::Float, ..cfg }),
        r => r,
    }
}

fn table_soundness(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let jobs: Vec<_> = cat.cases.iter().flat_map(|c| c.instances.iter().map(move |b| (c, b))).collect();
    let reports: Vec<_> = {
        use rayon::prelude::*;
        jobs.par_iter().map(|(c, b)| verify_case(c, b)).collect()
    };
    let elapsed = start.elapsed();
    let mut failures = vec![];
    for r in &reports {
        match r {
            Ok(r) if r.passed() => {}
            Ok(r) => failures.push(format!("{}: {}", r.id, r.witness.clone().unwrap_or_default())),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let thin: Vec<&str> = cat.cases.iter().filter(|c| c.instances.len() < 2).map(|c| c.id.as_str()).collect();
    let pass = failures.is_empty() && thin.is_empty() && cat.cases.len() == TABLE_ROWS && elapsed < TABLE_BUDGET;
    outcome(
        pass,
        format!(
            "{} sub-cases ({} expected), {} instantiations, {} failing, {} with fewer than 2 instances, {:.1}s (budget {}s){}",
            cat.cases.len(),
            TABLE_ROWS,
            jobs.len(),
            failures.len(),
            thin.len(),
            elapsed.as_secs_f64(),
            TABLE_BUDGET.as_secs(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn documented_span(cat: &Catalog, id: &str, b: &Binding) -> wavesym::Result<(ClassMember, LieAlgebraSpan)> {
    let case = cat.case(id)?;
    let theta = case.member(b)?;
    let span = LieAlgebraSpan::with_config(case.closure_basis(b)?, SpanConfig::with_chart(theta.chart.clone()))?;
    Ok((theta, span))
}

fn solver_dimensions(cat: &Catalog) -> Outcome {
    let signs = &[("eps", "1"), ("eps2", "1")];
    let runs: Vec<(&str, Binding, usize, Vec<ExtraBasis>, usize)> = vec![
        ("19a", Binding::new(&[("eps", "1")], &[]), 2, vec![], 5),
        ("19d", Binding::new(&[("eps", "1")], &[]), 2, vec![], 5),
        ("14a", Binding::new(signs, &[]), 2, vec![], 4),
        ("14b", Binding::new(signs, &[]), 2, vec![ExtraBasis::Exp2t], 4),
        // The extension of 14c is trigonometric in t; its counterpart of the
        // exponential basis is cos(2t), sin(2t).
        ("14c", Binding::new(signs, &[]), 2, vec![ExtraBasis::Trig2t], 4),
        ("16", Binding::new(&[("eps", "1"), ("p", "1")], &[]), 2, vec![], 4),
        ("18a", Binding::new(&[("eps", "1"), ("eps2", "1"), ("q", "3")], &[]), 1, vec![], 4),
        ("11", Binding::new(&[], &[("fhat", "s")]), 1, vec![], 3),
    ];
    let mut parts = vec![];
    let mut pass = true;
    for (id, b, degree, extra, want) in runs {
        let res = documented_span(cat, id, &b).and_then(|(theta, doc)| {
            let mode = if extra.is_empty() { Mode::Exact } else { Mode::Float };
            let cfg = SolverConfig { extra_basis: extra.clone(), mode, ..auto_solver() };
            let sol = with_float_fallback(|c| solve_symmetries(&theta, degree, c), cfg)?;
            let equal = sol.dim() == doc.dim() && subspace_equal(&sol.span, &doc)?;
            Ok((sol.dim(), doc.dim(), equal))
        });
        match res {
            Ok((got, doc, equal)) => {
                let ok = got == want && equal;
                pass &= ok;
                let note = if ok {
                    String::new()
                } else if got != doc {
                    format!(" (documented basis has {doc})")
                } else {
                    " (span differs)".into()
                };
                parts.push(format!("{id}={got}/{want}{note}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{id}: {e}"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

/// Nullity of the linear system `tau_t = xi_x`, `xi_t = sign tau_x` on
/// polynomial pairs of total degree at most `d`, by exact elimination.
fn conformal_oracle(sign: i64, d: usize) -> usize {
    let monos: Vec<(usize, usize)> = (0..=d).flat_map(|k| (0..=k).map(move |i| (i, k - i))).collect();
    let n = monos.len();
    let index = |i: usize, j: usize| monos.iter().position(|&m| m == (i, j));
    // Unknowns: tau coefficients then xi coefficients. Row per monomial of
    // degree < d for each equation.
    let mut rows: Vec<Vec<Rational>> = vec![];
    for &(i, j) in monos.iter().filter(|(i, j)| i + j < d) {
        let mut r1 = vec![Rational::zero(); 2 * n];
        let mut r2 = vec![Rational::zero(); 2 * n];
        // d/dt t^(i+1) x^j and d/dx t^i x^(j+1) both land on t^i x^j.
        if let Some(k) = index(i + 1, j) {
            r1[k] += rat(i as i64 + 1, 1);
            r2[n + k] += rat(i as i64 + 1, 1);
        }
        if let Some(k) = index(i, j + 1) {
            r1[n + k] -= rat(j as i64 + 1, 1);
            r2[k] -= rat(sign * (j as i64 + 1), 1);
        }
        rows.push(r1);
        rows.push(r2);
    }
    2 * n - rank(rows)
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot;
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= &f * b;
                }
            }
        }
        r += 1;
    }
    r
}

fn infinite_signature() -> Outcome {
    let mut parts = vec![];
    let mut pass = true;
    for sign in [1i64, -1] {
        let theta = ClassMember::parse(&sign.to_string(), "exp(u)").unwrap();
        let oracle: Vec<usize> = (0..=4).map(|d| conformal_oracle(sign, d)).collect();
        match with_float_fallback(|c| dimension_profile(&theta, 4, c), auto_solver()) {
            Ok(profile) => {
                let ok = profile == oracle && oracle == [2, 4, 6, 8, 10];
                pass &= ok;
                parts.push(format!("f={sign}: profile {profile:?}, oracle {oracle:?}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("f={sign}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn commutation_relations() -> Outcome {
    use Generator::*;
    let start = Instant::now();
    let polys: Vec<Expr> = ["1", "x", "x^2", "x^3"].iter().map(|s| parse(s).unwrap()).collect();
    let mut gens = vec![TimeShift, TimeScale, Scale];
    gens.extend(polys.iter().cloned().map(Change));
    gens.extend(polys.iter().cloned().map(Shift));
    let half = Expr::constant(rat(1, 2));
    let expected = |a: &Generator, b: &Generator| -> Option<VectorField> {
        match (a, b) {
            (TimeShift, TimeScale) => Some(TimeShift.field()),
            (TimeScale, TimeShift) => Some(TimeShift.field().scale(&Expr::integer(-1))),
            (Shift(c), Scale) => Some(Shift(c.clone()).field()),
            (Scale, Shift(c)) => Some(Shift(c.clone()).field().scale(&Expr::integer(-1))),
            (Change(z1), Change(z2)) => Some(Change(z1 * z2.diff("x") - z1.diff("x") * z2).field()),
            (Change(z), Shift(c)) => Some(Shift(z * c.diff("x") - &half * z.diff("x") * c).field()),
            (Shift(c), Change(z)) => Some(Shift(z * c.diff("x") - &half * z.diff("x") * c).field().scale(&Expr::integer(-1))),
            _ => None,
        }
    };
    let (mut printed, mut commuting, mut bad) = (0, 0, vec![]);
    for a in &gens {
        for b in &gens {
            let got = commutator(&a.field(), &b.field()).unwrap();
            let want = expected(a, b);
            let diff = match &want {
                Some(w) => got.sub(w),
                None => got.clone(),
            };
            if want.is_some() {
                printed += 1;
            } else {
                commuting += 1;
            }
            if !common::vanishes(&diff) {
                bad.push(format!("[{}, {}] = {}", a.label(), b.label(), got));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < COMMUTATION_BUDGET,
        format!(
            "{printed} ordered pairs with nonzero relations, {commuting} commuting, {} mismatches, {:.2}s (budget {}s){}",
            bad.len(),
            elapsed.as_secs_f64(),
            COMMUTATION_BUDGET.as_secs(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn family_cfg(fam: &TransformationFamily, theta: &ClassMember) -> wavesym::Result<ZeroConfig> {
    let base = fam.zero_config()?;
    Ok(ZeroConfig { samples: SAMPLES, digits: DIGITS, tol_exp10: TOL_EXP10, ..base }.with_chart(theta.chart.clone()))
}

fn is_identity(map: &PointTransformation, cfg: &ZeroConfig) -> bool {
    let id = ["t", "x", "u"].map(Expr::sym);
    map.components().iter().zip(&id).all(|(c, v)| zero(&(c - v), cfg))
}

struct FamilyInstance<'a> {
    fam: &'a TransformationFamily,
    b: &'a Binding,
    src: ClassMember,
    tgt: ClassMember,
    map: PointTransformation,
}

fn instances(cat: &Catalog) -> Vec<FamilyInstance<'_>> {
    cat.families
        .iter()
        .flat_map(|fam| fam.instances.iter().map(move |b| (fam, b)))
        .map(|(fam, b)| FamilyInstance {
            fam,
            b,
            src: fam.source_member(b).unwrap(),
            tgt: fam.target_member(b).unwrap(),
            map: fam.point_map(b).unwrap(),
        })
        .collect()
}

/// Orientation-preserving affine elements with small non-positive shifts and
/// equal scaling of t and x. Preimages of the positive sampling box then stay
/// inside it up to scale and keep the ordering of t and x.
fn affine_element(rng: &mut ChaCha8Rng) -> EquivalenceElement {
    let pos = |rng: &mut ChaCha8Rng| rat(rng.gen_range(1..4), rng.gen_range(1..4));
    let shift = |rng: &mut ChaCha8Rng| rat(-rng.gen_range(0..3), 8);
    let (a, b) = (pos(rng), shift(rng));
    let phi = Expr::constant(a.clone()) * Expr::sym("x") + Expr::constant(b.clone());
    let phi_inv = (Expr::sym("x") - Expr::constant(b)) / Expr::constant(a.clone());
    let psi = ["0", "1", "x", "x^2 - 2"][rng.gen_range(0..4)];
    let c0 = shift(rng);
    EquivalenceElement::new(c0, a.clone(), pos(rng), phi, phi_inv, parse(psi).unwrap()).unwrap()
}

fn generating_transformations(cat: &Catalog) -> Outcome {
    let insts = instances(cat);
    let mut fails = vec![];
    let mut float_families = vec![];
    for fi in &insts {
        let r = verify_family(fi.fam, fi.b);
        if !r.passed() {
            fails.push(format!("{}: {}", r.id, r.witness.unwrap_or_default()));
        } else if r.mode == Mode::Float && !float_families.contains(&fi.fam.id) {
            float_families.push(fi.fam.id.clone());
        }
    }
    let t9 = cat.family("T9").map(|f| f.instances.len()).unwrap_or(0);

    // Inverses, unit laws and self-compositions per instance.
    let mut law_fails = vec![];
    let mut self_compositions = 0;
    for fi in &insts {
        let label = format!("{}#{}", fi.fam.id, fi.b.label);
        let res = (|| -> wavesym::Result<Vec<&'static str>> {
            let (cs, ct) = (family_cfg(fi.fam, &fi.src)?, family_cfg(fi.fam, &fi.tgt)?);
            let inv = fi.map.invert()?;
            let mut bad = vec![];
            if !verify_admissible_with(&fi.tgt, &inv, &fi.src, &ct)?.holds {
                bad.push("inverse");
            }
            if !is_identity(&inv.after(&fi.map), &cs) {
                bad.push("inverse after map");
            }
            if !is_identity(&fi.map.after(&inv), &ct) {
                bad.push("map after inverse");
            }
            if !is_identity(&fi.map.after(&PointTransformation::identity()).after(&fi.map.invert()?), &ct) {
                bad.push("left unit");
            }
            if fi.src.same_as(&fi.tgt)? {
                self_compositions += 1;
                if !verify_admissible_with(&fi.src, &fi.map.after(&fi.map), &fi.tgt, &cs)?.holds {
                    bad.push("self-composition");
                }
            }
            Ok(bad)
        })();
        match res {
            Ok(bad) if bad.is_empty() => {}
            Ok(bad) => law_fails.push(format!("{label}: {}", bad.join(", "))),
            Err(e) => law_fails.push(format!("{label}: {e}")),
        }
    }

    // Randomized: compose each instance with an affine equivalence arrow on
    // its target and check the composite and its inverse.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random_fails = vec![];
    const RANDOM_CASES: usize = 200;
    for k in 0..RANDOM_CASES {
        let fi = &insts[k % insts.len()];
        let e = affine_element(&mut rng);
        let res = (|| -> wavesym::Result<bool> {
            let far = e.apply_formula(&fi.tgt)?;
            let composite = e.point_map()?.after(&fi.map);
            let cs = family_cfg(fi.fam, &fi.src)?;
            let cf = family_cfg(fi.fam, &far)?;
            let forward = verify_admissible_with(&fi.src, &composite, &far, &cs)?.holds;
            let inv = composite.invert()?;
            let backward = verify_admissible_with(&far, &inv, &fi.src, &cf)?.holds;
            Ok(forward && backward && is_identity(&inv.after(&composite), &cs))
        })();
        match res {
            Ok(true) => {}
            Ok(false) => random_fails.push(format!("case {k} on {}#{}", fi.fam.id, fi.b.label)),
            Err(e) => random_fails.push(format!("case {k} on {}#{}: {e}", fi.fam.id, fi.b.label)),
        }
    }

    // Only the arctan/arctanh family may fall back to sampling.
    let unexpected_float: Vec<_> = float_families.iter().filter(|id| id.as_str() != "T7").collect();
    let pass = fails.is_empty()
        && unexpected_float.is_empty()
        && law_fails.is_empty()
        && random_fails.is_empty()
        && t9 == 3;
    let mut detail = format!(
        "{} instances verified ({} failing; float mode: {}), {t9} stored T9 instances, inverse/unit laws on all instances ({} failing, {self_compositions} self-compositions), {RANDOM_CASES} randomized composites ({} failing)",
        insts.len(),
        fails.len(),
        if float_families.is_empty() { "none".to_string() } else { float_families.join(" ") },
        law_fails.len(),
        random_fails.len()
    );
    for f in fails.iter().chain(&law_fails).chain(&random_fails) {
        detail.push_str("; ");
        detail.push_str(f);
    }
    outcome(pass, detail)
}

fn additional_equivalences(cat: &Catalog) -> Outcome {
    let reports: Vec<_> = {
        use rayon::prelude::*;
        cat.arrows.par_iter().map(|a| verify_arrow(cat, a)).collect()
    };
    let fails: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("{}: {}", r.id, r.witness.clone().unwrap_or_default())).collect();
    let relabel = reports.iter().any(|r| r.id.contains(": 13 -> 13") && r.passed());
    outcome(
        fails.is_empty() && relabel && cat.arrows.len() == LISTED_ARROWS,
        format!(
            "{} arrows ({LISTED_ARROWS} expected), {} failing, parameter relabeling 13 -> 13 {}{}",
            cat.arrows.len(),
            fails.len(),
            if relabel { "verified" } else { "missing" },
            if fails.is_empty() { String::new() } else { format!("; {}", fails.join("; ")) }
        ),
    )
}

fn random_poly(rng: &mut ChaCha8Rng) -> Expr {
    loop {
        let mut e = Expr::zero();
        for k in 0..=3 {
            let c = rng.gen_range(-3i64..4);
            e = e + Expr::integer(c) * Expr::sym("x").powi(k);
        }
        let e = e.simplify();
        if !e.is_zero_const() {
            return e;
        }
    }
}

/// Invertible changes of x with closed-form inverses on the positive axis.
fn random_change(rng: &mut ChaCha8Rng) -> (Expr, Expr) {
    match rng.gen_range(0..3) {
        0 => {
            let a = rat([-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)], rng.gen_range(1..4));
            let b = rat(rng.gen_range(-3..4), 1);
            let x = Expr::sym("x");
            (Expr::constant(a.clone()) * &x + Expr::constant(b.clone()), (x - Expr::constant(b)) / Expr::constant(a))
        }
        1 => (parse("x^3").unwrap(), parse("x^(1/3)").unwrap()),
        _ => (parse("exp(x)").unwrap(), parse("ln(x)").unwrap()),
    }
}

fn at(e: &Expr, arg: &Expr) -> Expr {
    e.subst_pairs(&[("x", arg.clone())])
}

fn adjoint_action(cat: &Catalog) -> Outcome {
    use Generator::*;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = pinned();
    let mut bad = vec![];
    const INSTANCES: usize = 5;
    for _ in 0..INSTANCES {
        let (psi, zeta, chi) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        let c2 = rat([-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)], rng.gen_range(1..4));
        let (phi, phi_inv) = random_change(&mut rng);
        let hat_x = phi_inv.diff("x");
        let half = Expr::constant(rat(1, 2));
        let checks: Vec<(String, Elementary, Generator, VectorField)> = vec![
            (format!("Z({psi}) on D^u"), Elementary::Shift(psi.clone()), Scale, Scale.field().sub(&Shift(psi.clone()).field())),
            (
                format!("D^u({}) on Z({chi})", c2),
                Elementary::Scale(c2.clone()),
                Shift(chi.clone()),
                Shift(chi.clone()).field().scale(&Expr::constant(c2.clone())),
            ),
            (
                format!("Z({psi}) on D({zeta})"),
                Elementary::Shift(psi.clone()),
                Change(zeta.clone()),
                Change(zeta.clone()).field().add(&Shift(&zeta * psi.diff("x") - &half * zeta.diff("x") * &psi).field()),
            ),
            (
                format!("D({phi}) on Z({chi})"),
                Elementary::Change { phi: phi.clone(), phi_inv: phi_inv.clone() },
                Shift(chi.clone()),
                Shift(hat_x.abs().powq(-1, 2) * at(&chi, &phi_inv)).field(),
            ),
            (
                format!("D({phi}) on D({zeta})"),
                Elementary::Change { phi: phi.clone(), phi_inv: phi_inv.clone() },
                Change(zeta.clone()),
                Change(at(&zeta, &phi_inv) / &hat_x).field(),
            ),
        ];
        for (name, elem, gen, want) in checks {
            match adjoint_on_generator(&elem, &gen) {
                Ok(got) => {
                    if !got.sub(&want).comps.iter().all(|c| zero(c, &cfg)) {
                        bad.push(format!("{name}: got {got}"));
                    }
                }
                Err(e) => bad.push(format!("{name}: {e}")),
            }
        }
    }
    let controls: Vec<_> = cat.subalgebras.iter().filter(|s| !s.appropriate).map(|s| verify_subalgebra(cat, s)).collect();
    let rejected = controls.iter().filter(|r| r.passed()).count();
    outcome(
        bad.is_empty() && rejected == controls.len() && controls.len() >= 2,
        format!(
            "5 formulas x {INSTANCES} random instances, {} mismatches; {rejected}/{} negative controls rejected{}",
            bad.len(),
            controls.len(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn subalgebra_correspondence(cat: &Catalog) -> Outcome {
    let entries: Vec<_> = cat.subalgebras.iter().filter(|s| s.appropriate && s.case.is_some()).collect();
    let reports: Vec<_> = {
        use rayon::prelude::*;
        entries.par_iter().map(|s| verify_subalgebra(cat, s)).collect()
    };
    let fails: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("{}: {}", r.id, r.witness.clone().unwrap_or_default())).collect();
    outcome(
        fails.is_empty() && !entries.is_empty(),
        format!(
            "{} subalgebra instances projected and compared with their case bases, {} failing{}",
            entries.len(),
            fails.len(),
            if fails.is_empty() { String::new() } else { format!("; {}", fails.join("; ")) }
        ),
    )
}

fn non_isomorphic(cat: &Catalog) -> Outcome {
    let mut tuples = vec![];
    let mut errors = vec![];
    for s in &cat.separating {
        let res = (|| -> wavesym::Result<_> {
            let theta = ClassMember::parse(&s.f, &s.g)?;
            let fields = s.fields.iter().map(|f| f.instantiate(&Binding::default())).collect::<wavesym::Result<Vec<_>>>()?;
            for q in &fields {
                if !is_symmetry_with(q, &theta, &pinned().with_chart(theta.chart.clone()))?.holds {
                    return Err(wavesym::Error::Invalid(format!("{q} is not a symmetry")));
                }
            }
            LieAlgebraSpan::with_config(fields, SpanConfig::with_chart(theta.chart.clone()))?.invariants()
        })();
        match res {
            Ok(inv) => tuples.push((s.id.clone(), inv)),
            Err(e) => errors.push(format!("{}: {e}", s.id)),
        }
    }
    let distinct = tuples.iter().enumerate().all(|(i, a)| tuples[i + 1..].iter().all(|b| a.1 != b.1));
    let shown: Vec<String> = tuples
        .iter()
        .map(|(id, i)| format!("{id}: ({}, {}, {}, {:?})", i.dim, i.derived_dim, i.center_dim, i.killing_signature))
        .collect();
    outcome(
        errors.is_empty() && distinct && tuples.len() == 4 && tuples.iter().all(|t| t.1.dim == 3),
        format!("{}{}", shown.join("; "), if errors.is_empty() { String::new() } else { format!("; {}", errors.join("; ")) }),
    )
}

fn run_property<S: proptest::strategy::Strategy>(
    cases: u32,
    strategy: &S,
    test: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(strategy, test).map_err(|e| e.to_string())
}

fn conjugation(cat: &Catalog) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut bad = vec![];
    for fi in instances(cat) {
        let label = format!("{}#{}", fi.fam.id, fi.b.label);
        let res = (|| -> wavesym::Result<Vec<String>> {
            let basis = with_float_fallback(|c| solve_symmetries(&fi.src, 1, c), auto_solver())?.span.basis;
            let (cs, ct) = (family_cfg(fi.fam, &fi.src)?, family_cfg(fi.fam, &fi.tgt)?);
            let mut out = vec![];
            for q in &basis {
                checked += 1;
                if !is_symmetry_with(q, &fi.src, &cs)?.holds {
                    out.push(format!("{q} is not a symmetry of the source"));
                    continue;
                }
                let pushed = fi.map.pushforward_field(q)?;
                if !is_symmetry_with(&pushed, &fi.tgt, &ct)?.holds {
                    out.push(format!("image of {q} is not a symmetry of the target"));
                }
            }
            Ok(out)
        })();
        match res {
            Ok(out) => bad.extend(out.into_iter().map(|m| format!("{label}: {m}"))),
            Err(e) => bad.push(format!("{label}: {e}")),
        }
    }
    (checked, bad)
}

fn property_suites(cat: &Catalog) -> Outcome {
    let field = common::field;
    let results = [
        ("Jacobi identity (500)", run_property(500, &(field(), field(), field()), |(a, b, c)| common::jacobi_identity(&a, &b, &c))),
        (
            "prolongation linearity (200)",
            run_property(200, &(field(), field(), -3i64..4, -3i64..4), |(a, b, p, q)| common::prolongation_is_linear(&a, &b, p, q)),
        ),
        (
            "eval/simplify agreement (1000)",
            run_property(1000, &(common::expr_src(), common::point()), |(s, p)| common::eval_agrees_with_simplify(&s, &p)),
        ),
    ];
    let mut parts = vec![];
    let mut pass = true;
    for (name, r) in results {
        pass &= r.is_ok();
        parts.push(match r {
            Ok(()) => format!("{name} ok"),
            Err(e) => format!("{name} failed: {e}"),
        });
    }
    let (checked, bad) = conjugation(cat);
    pass &= bad.is_empty() && checked > 0;
    parts.push(format!("conjugation of {checked} source basis fields over all family instances, {} failing", bad.len()));
    parts.extend(bad);
    outcome(pass, parts.join("; "))
}

fn main() {
    let cfg = ZeroConfig::default();
    assert_eq!((cfg.samples, cfg.digits, cfg.tol_exp10), (SAMPLES, DIGITS, TOL_EXP10), "default zero-test settings drifted");
    assert!(Rational::one().is_positive());
    let cat = load_catalog();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("classification table soundness", Box::new(|| table_soundness(cat))),
        ("solver dimensions", Box::new(|| solver_dimensions(cat))),
        ("infinite-dimensional profile", Box::new(infinite_signature)),
        ("equivalence algebra commutators", Box::new(commutation_relations)),
        ("generating admissible transformations", Box::new(|| generating_transformations(cat))),
        ("additional equivalences", Box::new(|| additional_equivalences(cat))),
        ("adjoint action", Box::new(|| adjoint_action(cat))),
        ("subalgebra correspondence", Box::new(|| subalgebra_correspondence(cat))),
        ("non-isomorphic algebras", Box::new(|| non_isomorphic(cat))),
        ("property suites", Box::new(|| property_suites(cat))),
    ];
    println!("zero tests: {SAMPLES} samples, {DIGITS} digits, tolerance 1e-{TOL_EXP10}, seed {SEED:#x}");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} [{:.1}s] {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
