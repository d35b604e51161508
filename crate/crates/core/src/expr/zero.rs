//! Two-tier zero test: canonical forms first, then seeded random sampling at
//! high precision.

use super::eval::{digits_to_bits, eval_num, EvalError, Num, Point};
use super::{Expr, Func, Node, Rational};
use crate::Error;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartSign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

/// Sign assumptions on symbols. Symbols not listed are sampled positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chart {
    pub signs: BTreeMap<String, ChartSign>,
}

impl Default for Chart {
    fn default() -> Self {
        let mut signs = BTreeMap::new();
        signs.insert("u".to_string(), ChartSign::Pos);
        signs.insert("x".to_string(), ChartSign::Pos);
        Chart { signs }
    }
}

impl Chart {
    pub fn with(mut self, sym: &str, s: ChartSign) -> Chart {
        self.signs.insert(sym.to_string(), s);
        self
    }

    pub fn sign_of(&self, sym: &str) -> ChartSign {
        self.signs.get(sym).copied().unwrap_or(ChartSign::Pos)
    }

    /// Rational sample with numerator and denominator at most 1000, of
    /// magnitude in (0.001, 4].
    pub fn sample<R: Rng>(&self, sym: &str, rng: &mut R) -> Rational {
        let n: i64 = rng.gen_range(1..=1000);
        let d: i64 = rng.gen_range(250..=1000);
        let q = super::rat(n, d);
        match self.sign_of(sym) {
            ChartSign::Pos => q,
            ChartSign::Neg => -q,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZeroConfig {
    pub samples: usize,
    /// Tolerance exponent: residuals below `10^-tol_exp10` times the largest
    /// summand magnitude count as zero.
    pub tol_exp10: i32,
    pub digits: u32,
    pub seed: u64,
    pub chart: Chart,
    pub redraw_factor: usize,
    /// Largest expression (node count) on which the rational normal form is
    /// attempted before falling back to sampling.
    pub symbolic_budget: usize,
    /// Multiplies every sampled coordinate; values below 1 confine sampling
    /// to a smaller box, for identities that hold only on one branch.
    pub sample_scale: Rational,
}

pub fn default_digits() -> u32 {
    std::env::var("WAVESYM_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|d| *d >= 50)
        .unwrap_or(50)
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig {
            samples: 64,
            tol_exp10: 30,
            digits: default_digits(),
            seed: 0x5eed,
            chart: Chart::default(),
            redraw_factor: 10,
            symbolic_budget: 60_000,
            sample_scale: Rational::one(),
        }
    }
}

impl ZeroConfig {
    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn with_scale(mut self, scale: Rational) -> Self {
        self.sample_scale = scale;
        self
    }
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum ZeroVerdict {
    ProvenZero,
    LikelyZero { samples: usize, exact: bool },
    NonZero { point: BTreeMap<String, String>, value: String },
}

impl ZeroVerdict {
    /// Proven or likely zero.
    pub fn holds(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }
    pub fn is_proven(&self) -> bool {
        matches!(self, ZeroVerdict::ProvenZero)
    }
    /// True when the verdict came from canonical forms or exact rational
    /// sampling, with no floating-point evidence involved.
    pub fn is_exact(&self) -> bool {
        match self {
            ZeroVerdict::ProvenZero => true,
            ZeroVerdict::LikelyZero { exact, .. } => *exact,
            ZeroVerdict::NonZero { .. } => true,
        }
    }
    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ProvenZero => "ProvenZero",
            ZeroVerdict::LikelyZero { .. } => "LikelyZero",
            ZeroVerdict::NonZero { .. } => "NonZero",
        }
    }
}

fn witness(point: &Point, v: &Num) -> ZeroVerdict {
    ZeroVerdict::NonZero {
        point: point
            .iter()
            .map(|(k, q)| (k.clone(), if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) }))
            .collect(),
        value: v.to_decimal(),
    }
}

/// Replaces `abs(a)` by `a` or `-a` where the chart fixes the sign of `a`.
/// Symbols take their chart sign; composite arguments are classified from
/// samples on the chart and left alone when the sign varies.
pub fn resolve_chart(e: &Expr, chart: &Chart, seed: u64) -> Expr {
    let mut cache: HashMap<Expr, Expr> = HashMap::new();
    resolve_inner(&e.simplify(), chart, seed, &mut cache)
}

fn resolve_inner(e: &Expr, chart: &Chart, seed: u64, cache: &mut HashMap<Expr, Expr>) -> Expr {
    if !has_abs(e) {
        return e.clone();
    }
    if let Some(r) = cache.get(e) {
        return r.clone();
    }
    let out = e.rebuild(&mut |s| {
        if !has_abs(s) {
            return Some(s.clone());
        }
        if let Node::Fun(Func::Abs, a) = s.node() {
            let a = resolve_inner(a, chart, seed, &mut HashMap::new());
            return Some(match sign_on_chart(&a, chart, seed) {
                Some(true) => a,
                Some(false) => -a,
                None => a.abs(),
            });
        }
        None
    });
    cache.insert(e.clone(), out.clone());
    out
}

fn has_abs(e: &Expr) -> bool {
    match e.node() {
        Node::Const(_) | Node::Sym(_) => false,
        Node::Fun(Func::Abs, _) => true,
        Node::Fun(_, a) => has_abs(a),
        Node::Pow(b, x) => has_abs(b) || has_abs(x),
        Node::Add(ch) | Node::Mul(ch) => ch.iter().any(has_abs),
    }
}

fn sign_on_chart(a: &Expr, chart: &Chart, seed: u64) -> Option<bool> {
    if let Some(s) = a.as_sym() {
        return Some(chart.sign_of(s) == ChartSign::Pos);
    }
    if let Some(c) = a.as_const() {
        return Some(c.is_positive());
    }
    let syms = a.free_symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ a.structural_hash() ^ 0xab5);
    let (mut pos, mut neg) = (0, 0);
    for _ in 0..48 {
        let point: Point = syms.iter().map(|s| (s.clone(), chart.sample(s, &mut rng))).collect();
        if let Ok((v, _)) = eval_num(a, &point, 128) {
            if v.is_zero() {
                return None;
            }
            if v.is_negative() {
                neg += 1
            } else {
                pos += 1
            }
        }
        if pos > 0 && neg > 0 {
            return None;
        }
        if pos + neg >= 16 {
            break;
        }
    }
    match (pos, neg) {
        (p, 0) if p >= 8 => Some(true),
        (0, n) if n >= 8 => Some(false),
        _ => None,
    }
}

/// Numerator of `e` over a common denominator, with `cos(a)^n`, `n >= 2`,
/// eliminated in favour of `sin(a)`. The result is zero exactly when the
/// input is, on the locus where the cleared denominators are non-zero.
/// Falls back to clearing only top-level negative powers when the full
/// numerator would exceed `budget` nodes.
pub fn normal_form(e: &Expr, budget: usize) -> Expr {
    let e = e.simplify();
    let shallow = trig_reduce(&together(&e));
    if shallow.is_zero_const() {
        return shallow;
    }
    match split_fraction(&e, budget) {
        Some((num, _)) => trig_reduce(&num),
        None => shallow,
    }
}

/// Multiplies every summand by the largest negative powers present.
fn together(e: &Expr) -> Expr {
    let terms = e.terms();
    let mut need: BTreeMap<Expr, Rational> = BTreeMap::new();
    for t in &terms {
        for f in t.factors() {
            if let Node::Pow(b, x) = f.node() {
                if b.as_const().is_some() {
                    continue;
                }
                if let Some(k) = x.as_const() {
                    if k.is_negative() {
                        let k = -k;
                        let slot = need.entry(b.clone()).or_insert_with(Rational::zero);
                        if k > *slot {
                            *slot = k;
                        }
                    }
                }
            }
        }
    }
    if need.is_empty() {
        return e.clone();
    }
    let mult: Vec<Expr> = need
        .into_iter()
        .map(|(b, k)| Expr::raw(Node::Pow(b, Expr::constant(k))))
        .collect();
    Expr::add_all(
        terms
            .into_iter()
            .map(|t| {
                let mut v = vec![t];
                v.extend(mult.iter().cloned());
                Expr::mul_all(v)
            })
            .collect::<Vec<_>>(),
    )
}

/// Denominator as a product of bases raised to positive integer powers.
type Denominator = BTreeMap<Expr, i64>;

/// Recursive numerator/denominator split; `None` once a numerator would
/// grow past `budget` nodes.
fn split_fraction(e: &Expr, budget: usize) -> Option<(Expr, Denominator)> {
    let within = |n: Expr, d: Denominator| (n.size() <= budget).then_some((n, d));
    // Expanded term count of a product, checked before distributing.
    let max_terms = budget / 8;
    let fits = |factors: &mut dyn Iterator<Item = (usize, i64)>| {
        let mut acc = 1usize;
        for (terms, k) in factors {
            for _ in 0..k.max(0) {
                acc = acc.saturating_mul(terms.max(1));
                if acc > max_terms {
                    return false;
                }
            }
        }
        true
    };
    match e.node() {
        Node::Add(ch) => {
            let parts = ch.iter().map(|c| split_fraction(c, budget)).collect::<Option<Vec<_>>>()?;
            let mut common = Denominator::new();
            for (_, d) in &parts {
                for (b, k) in d {
                    let slot = common.entry(b.clone()).or_insert(0);
                    *slot = (*slot).max(*k);
                }
            }
            for (n, d) in &parts {
                let missing = common.iter().map(|(b, k)| (b.terms().len(), k - d.get(b).copied().unwrap_or(0)));
                if !fits(&mut std::iter::once((n.terms().len(), 1)).chain(missing)) {
                    return None;
                }
            }
            let num = Expr::add_all(parts.into_iter().map(|(n, d)| {
                let mut v = vec![n];
                for (b, k) in &common {
                    let missing = k - d.get(b).copied().unwrap_or(0);
                    if missing > 0 {
                        v.push(b.powi(missing));
                    }
                }
                Expr::mul_all(v)
            }));
            within(num, common)
        }
        Node::Mul(ch) => {
            let mut nums = Vec::with_capacity(ch.len());
            let mut den = Denominator::new();
            for c in ch {
                let (n, d) = split_fraction(c, budget)?;
                nums.push(n);
                if !fits(&mut nums.iter().map(|n| (n.terms().len(), 1))) {
                    return None;
                }
                for (b, k) in d {
                    *den.entry(b).or_insert(0) += k;
                }
            }
            within(Expr::mul_all(nums), den)
        }
        Node::Pow(b, x) => {
            let Some(k) = x.as_const() else {
                return Some((e.clone(), Denominator::new()));
            };
            if !k.is_negative() {
                if !k.is_integer() {
                    return Some((e.clone(), Denominator::new()));
                }
                let k = k.to_integer().to_i64()?;
                let (n, d) = split_fraction(b, budget)?;
                if !fits(&mut std::iter::once((n.terms().len(), k))) {
                    return None;
                }
                return within(n.powi(k), d.into_iter().map(|(b, j)| (b, j * k)).collect());
            }
            if !k.is_integer() {
                let mut den = Denominator::new();
                den.insert(b.pow(&Expr::constant(-k)), 1);
                return Some((Expr::one(), den));
            }
            let m = (-k).to_integer().to_i64()?;
            let (n, d) = split_fraction(b, budget)?;
            if !fits(&mut d.iter().map(|(b, j)| (b.terms().len(), j * m))) {
                return None;
            }
            let num = Expr::mul_all(d.into_iter().map(|(b, j)| b.powi(j * m)));
            let mut den = Denominator::new();
            let mut coeff = Rational::one();
            for f in n.factors() {
                match f.node() {
                    Node::Const(c) => coeff *= c,
                    Node::Pow(fb, fx) if fx.as_const().is_some_and(|c| c.is_integer() && c.is_positive()) => {
                        let j = fx.as_const()?.to_integer().to_i64()?;
                        let (c, key) = monic(fb);
                        coeff *= super::numeric::rpow(&c, j as i32);
                        *den.entry(key).or_insert(0) += j * m;
                    }
                    _ => {
                        let (c, key) = monic(&f);
                        coeff *= c;
                        *den.entry(key).or_insert(0) += m;
                    }
                }
            }
            let inv = super::numeric::rpow(&coeff, -(m as i32));
            within(num.scale(&inv), den)
        }
        _ => Some((e.clone(), Denominator::new())),
    }
}

/// Splits a sum into its leading coefficient and the sum scaled to lead 1.
fn monic(b: &Expr) -> (Rational, Expr) {
    if !matches!(b.node(), Node::Add(_)) {
        return (Rational::one(), b.clone());
    }
    let c = b.lead_coeff();
    (c.clone(), b.scale(&c.recip()))
}

fn trig_reduce(e: &Expr) -> Expr {
    let mut changed = false;
    let out: Vec<Expr> = e
        .terms()
        .into_iter()
        .map(|t| {
            let mut fs = Vec::new();
            let mut hit = false;
            for f in t.factors() {
                if let Node::Pow(b, x) = f.node() {
                    if let (Node::Fun(Func::Cos, a), Some(n)) = (b.node(), x.as_const().filter(|c| c.is_integer()).and_then(|c| c.to_integer().to_i64())) {
                        if n >= 2 {
                            hit = true;
                            let s2 = Expr::one() - a.sin().powi(2);
                            fs.push(s2.powi(n / 2));
                            if n % 2 == 1 {
                                fs.push(b.clone());
                            }
                            continue;
                        }
                    }
                }
                fs.push(f);
            }
            if hit {
                changed = true;
                Expr::mul_all(fs)
            } else {
                t
            }
        })
        .collect();
    if changed {
        Expr::add_all(out)
    } else {
        e.clone()
    }
}

/// Decides whether `e` vanishes identically on the chart.
pub fn is_zero(e: &Expr, cfg: &ZeroConfig) -> Result<ZeroVerdict, Error> {
    let e = e.simplify();
    if e.is_zero_const() {
        return Ok(ZeroVerdict::ProvenZero);
    }
    if e.as_const().is_some() {
        return Ok(witness(&Point::new(), &Num::Q(e.as_const().unwrap().clone())));
    }
    let e = resolve_chart(&e, &cfg.chart, cfg.seed);
    if e.is_zero_const() {
        return Ok(ZeroVerdict::ProvenZero);
    }
    if e.size() <= cfg.symbolic_budget && normal_form(&e, cfg.symbolic_budget).is_zero_const() {
        return Ok(ZeroVerdict::ProvenZero);
    }
    sample_zero(&e, cfg)
}

fn sample_zero(e: &Expr, cfg: &ZeroConfig) -> Result<ZeroVerdict, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ e.structural_hash());
    let syms = e.free_symbols();
    let bits = digits_to_bits(cfg.digits);
    let tol_log2 = -(cfg.tol_exp10 as f64) * std::f64::consts::LOG2_10;
    let (mut good, mut attempts, mut exact) = (0usize, 0usize, true);
    while good < cfg.samples {
        attempts += 1;
        if attempts > cfg.samples * cfg.redraw_factor {
            return Err(Error::SamplingExhausted { needed: cfg.samples, got: good });
        }
        let point: Point = syms.iter().map(|s| (s.clone(), cfg.chart.sample(s, &mut rng) * &cfg.sample_scale)).collect();
        let (v, scale) = match eval_num(e, &point, bits) {
            Ok(r) => r,
            Err(EvalError::Singular) => continue,
            Err(err) => return Err(err.into()),
        };
        good += 1;
        match &v {
            Num::Q(q) => {
                if !q.is_zero() {
                    return Ok(witness(&point, &v));
                }
            }
            Num::F(_) => {
                exact = false;
                if !within(&v, scale, tol_log2) {
                    // Confirm with doubled precision before reporting.
                    let (w, s2) = eval_num(e, &point, 2 * bits)?;
                    if !within(&w, s2, tol_log2) {
                        return Ok(witness(&point, &w));
                    }
                }
            }
        }
    }
    Ok(ZeroVerdict::LikelyZero { samples: good, exact })
}

fn within(v: &Num, scale: i64, tol_log2: f64) -> bool {
    if v.is_zero() {
        return true;
    }
    let mag = v.log2_abs() as f64;
    let allowance = if scale == i64::MIN { 0.0 } else { (scale as f64).max(0.0) };
    mag <= tol_log2 + allowance
}
