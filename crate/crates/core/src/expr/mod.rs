//! Symbolic expressions over rational constants, named symbols and a fixed
//! set of elementary functions.
//!
//! Every smart constructor (`add_all`, `mul_all`, `pow`, `func` and the
//! operator overloads) returns a canonical form, so structural equality of
//! canonical expressions is the first tier of the zero test. The parser builds
//! raw trees; [`Expr::simplify`] canonicalizes them.

mod calc;
mod eval;
mod numeric;
mod parse;
mod render;
mod zero;

pub use eval::{eval, eval_num, EvalError, Evaluation, Num, Point};
pub use numeric::rationalize;
pub use parse::parse;
pub use zero::{is_zero, normal_form, resolve_chart, Chart, ChartSign, ZeroConfig, ZeroVerdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub type Rational = BigRational;
pub type Symbol = Arc<str>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Abs,
    Sign,
    ArcTan,
    ArcTanh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Abs => "abs",
            Func::Sign => "sign",
            Func::ArcTan => "arctan",
            Func::ArcTanh => "arctanh",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "abs" => Func::Abs,
            "sign" => Func::Sign,
            "arctan" | "atan" => Func::ArcTan,
            "arctanh" | "atanh" => Func::ArcTanh,
            _ => return None,
        })
    }
}

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, Expr),
    Fun(Func, Expr),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
    mask: u64,
    size: u32,
    canonical: bool,
}

/// Immutable, cheaply clonable expression handle.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

fn mix(a: u64, b: u64) -> u64 {
    let mut h = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    mix(h, 17)
}

fn hash_bigint(n: &BigInt) -> u64 {
    let (sign, digits) = n.to_u64_digits();
    let mut h = match sign {
        num_bigint::Sign::Minus => 3,
        num_bigint::Sign::NoSign => 5,
        num_bigint::Sign::Plus => 7,
    };
    for d in digits {
        h = mix(h, d);
    }
    h
}

pub(crate) fn symbol_bit(s: &str) -> u64 {
    1u64 << (hash_str(s) % 64)
}

impl Expr {
    fn build(node: Node, canonical: bool) -> Expr {
        let (hash, mask, size) = match &node {
            Node::Const(c) => (mix(hash_bigint(c.numer()), hash_bigint(c.denom())), 0, 1),
            Node::Sym(s) => (mix(hash_str(s), 2), symbol_bit(s), 1),
            Node::Add(ch) | Node::Mul(ch) => {
                let mut h = if matches!(node, Node::Add(_)) { 11 } else { 13 };
                let mut m = 0;
                let mut sz = 1u32;
                for c in ch {
                    h = mix(h, c.0.hash);
                    m |= c.0.mask;
                    sz = sz.saturating_add(c.0.size);
                }
                (h, m, sz)
            }
            Node::Pow(b, e) => (
                mix(mix(19, b.0.hash), e.0.hash),
                b.0.mask | e.0.mask,
                1u32.saturating_add(b.0.size).saturating_add(e.0.size),
            ),
            Node::Fun(f, a) => (mix(mix(23, *f as u64 + 101), a.0.hash), a.0.mask, 1 + a.0.size),
        };
        Expr(Arc::new(Inner { node, hash, mask, size, canonical }))
    }

    /// Builds a node without any simplification.
    pub fn raw(node: Node) -> Expr {
        let canonical = matches!(node, Node::Const(_) | Node::Sym(_));
        Expr::build(node, canonical)
    }

    fn canon(node: Node) -> Expr {
        Expr::build(node, true)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn is_canonical(&self) -> bool {
        self.0.canonical
    }

    pub fn constant(c: Rational) -> Expr {
        Expr::canon(Node::Const(c))
    }

    pub fn integer(n: i64) -> Expr {
        Expr::constant(int(n))
    }

    pub fn zero() -> Expr {
        Expr::integer(0)
    }

    pub fn one() -> Expr {
        Expr::integer(1)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::canon(Node::Sym(Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    pub fn is_integer_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_integer())
    }

    /// Summands of a sum, or the expression itself.
    pub fn terms(&self) -> Vec<Expr> {
        match self.node() {
            Node::Add(ch) => ch.clone(),
            _ if self.is_zero_const() => vec![],
            _ => vec![self.clone()],
        }
    }

    /// Factors of a product, or the expression itself.
    pub fn factors(&self) -> Vec<Expr> {
        match self.node() {
            Node::Mul(ch) => ch.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn rank(&self) -> u8 {
        match self.node() {
            Node::Const(_) => 0,
            Node::Sym(_) => 1,
            Node::Fun(..) => 2,
            Node::Pow(..) => 3,
            Node::Mul(_) => 4,
            Node::Add(_) => 5,
        }
    }

    // ----- canonical constructors -------------------------------------

    pub fn add_all<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let mut konst = Rational::zero();
        let mut map: BTreeMap<Expr, Rational> = BTreeMap::new();
        fn push(t: Expr, konst: &mut Rational, map: &mut BTreeMap<Expr, Rational>) {
            match t.node() {
                Node::Const(c) => *konst += c,
                Node::Add(ch) => {
                    for c in ch {
                        push(c.clone(), konst, map);
                    }
                }
                _ => {
                    let (c, rest) = split_coeff(&t);
                    *map.entry(rest).or_insert_with(Rational::zero) += c;
                }
            }
        }
        for t in terms {
            push(t, &mut konst, &mut map);
        }
        let mut out = Vec::with_capacity(map.len() + 1);
        if !konst.is_zero() {
            out.push(Expr::constant(konst));
        }
        for (rest, c) in map {
            if !c.is_zero() {
                out.push(with_coeff(c, rest));
            }
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::canon(Node::Add(out)),
        }
    }

    pub fn mul_all<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut acc = MulAcc::default();
        for f in factors {
            acc.push(f);
            if acc.coeff.is_zero() {
                return Expr::zero();
            }
        }
        acc.finish()
    }

    pub fn pow(&self, e: &Expr) -> Expr {
        pow(self, e)
    }

    pub fn powi(&self, n: i64) -> Expr {
        pow(self, &Expr::integer(n))
    }

    pub fn powq(&self, n: i64, d: i64) -> Expr {
        pow(self, &Expr::constant(rat(n, d)))
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        func(f, a)
    }

    pub fn exp(&self) -> Expr {
        func(Func::Exp, self.clone())
    }
    pub fn ln(&self) -> Expr {
        func(Func::Ln, self.clone())
    }
    pub fn sin(&self) -> Expr {
        func(Func::Sin, self.clone())
    }
    pub fn cos(&self) -> Expr {
        func(Func::Cos, self.clone())
    }
    pub fn abs(&self) -> Expr {
        func(Func::Abs, self.clone())
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        Expr::mul_all([Expr::constant(c.clone()), self.clone()])
    }

    /// Leading coefficient used for sign normalization: the numeric factor of
    /// the first summand.
    pub fn lead_coeff(&self) -> Rational {
        match self.node() {
            Node::Add(ch) => split_coeff(&ch[0]).0,
            Node::Const(c) => c.clone(),
            _ => split_coeff(self).0,
        }
    }
}

/// Splits a canonical non-sum term into numeric coefficient and remainder.
pub fn split_coeff(t: &Expr) -> (Rational, Expr) {
    match t.node() {
        Node::Const(c) => (c.clone(), Expr::one()),
        Node::Mul(ch) => {
            if let Node::Const(c) = ch[0].node() {
                let rest = if ch.len() == 2 {
                    ch[1].clone()
                } else {
                    Expr::canon(Node::Mul(ch[1..].to_vec()))
                };
                (c.clone(), rest)
            } else {
                (Rational::one(), t.clone())
            }
        }
        _ => (Rational::one(), t.clone()),
    }
}

fn with_coeff(c: Rational, rest: Expr) -> Expr {
    if c.is_zero() {
        return Expr::zero();
    }
    if rest.is_one() {
        return Expr::constant(c);
    }
    if c.is_one() {
        return rest;
    }
    let mut v = vec![Expr::constant(c)];
    match rest.node() {
        Node::Mul(ch) => v.extend(ch.iter().cloned()),
        _ => v.push(rest),
    }
    Expr::canon(Node::Mul(v))
}

#[derive(Default)]
struct MulAcc {
    coeff: Rational,
    init: bool,
    bases: BTreeMap<Expr, Vec<Expr>>,
    exp_args: Vec<Expr>,
    numeric: BTreeMap<BigInt, Rational>,
    sums: Vec<Expr>,
}

const EXPAND_LIMIT: usize = 40_000;

impl MulAcc {
    fn push(&mut self, f: Expr) {
        if !self.init {
            self.coeff = Rational::one();
            self.init = true;
        }
        match f.node() {
            Node::Const(c) => self.coeff *= c,
            Node::Mul(ch) => {
                for c in ch {
                    self.push(c.clone());
                }
            }
            Node::Pow(b, e) => {
                if let (Some(bc), Some(ec)) = (b.as_const(), e.as_const()) {
                    if bc.is_integer() && bc.numer() > &BigInt::one() {
                        *self.numeric.entry(bc.numer().clone()).or_insert_with(Rational::zero) += ec;
                        return;
                    }
                }
                self.bases.entry(b.clone()).or_default().push(e.clone());
            }
            Node::Fun(Func::Exp, a) => self.exp_args.push(a.clone()),
            Node::Add(_) => self.sums.push(f),
            _ => self.bases.entry(f.clone()).or_default().push(Expr::one()),
        }
    }

    fn finish(mut self) -> Expr {
        if !self.init {
            return Expr::one();
        }
        let mut factors: Vec<Expr> = Vec::new();
        let mut pending: Vec<Expr> = Vec::new();
        for (b, es) in std::mem::take(&mut self.bases) {
            let e = Expr::add_all(es);
            let p = pow(&b, &e);
            match p.node() {
                Node::Const(c) => self.coeff *= c,
                Node::Add(_) => self.sums.push(p),
                Node::Pow(pb, _) if *pb == b => factors.push(p),
                _ if p == b => factors.push(p),
                _ => pending.push(p),
            }
        }
        if !self.exp_args.is_empty() {
            let a = Expr::add_all(std::mem::take(&mut self.exp_args));
            let p = func(Func::Exp, a);
            match p.node() {
                Node::Const(c) => self.coeff *= c,
                Node::Fun(Func::Exp, _) => factors.push(p),
                _ => pending.push(p),
            }
        }
        for (n, r) in std::mem::take(&mut self.numeric) {
            let fl = r.floor();
            let frac = &r - &fl;
            let k = fl.to_integer();
            if !k.is_zero() {
                let base = Rational::from_integer(n.clone());
                let kk = k.to_i32().expect("numeric exponent overflow");
                self.coeff *= numeric::rpow(&base, kk);
            }
            if !frac.is_zero() {
                factors.push(Expr::canon(Node::Pow(
                    Expr::constant(Rational::from_integer(n)),
                    Expr::constant(frac),
                )));
            }
        }
        if self.coeff.is_zero() {
            return Expr::zero();
        }
        if !pending.is_empty() {
            let mut all = pending;
            all.extend(factors);
            all.extend(self.sums);
            all.push(Expr::constant(self.coeff));
            return Expr::mul_all(all);
        }
        factors.sort();
        let product = {
            let rest = match factors.len() {
                0 => Expr::one(),
                1 => factors.pop().unwrap(),
                _ => Expr::canon(Node::Mul(factors)),
            };
            with_coeff(self.coeff, rest)
        };
        if self.sums.is_empty() {
            return product;
        }
        let est: usize = self
            .sums
            .iter()
            .map(|s| s.terms().len())
            .fold(1usize, |a, b| a.saturating_mul(b));
        if est > EXPAND_LIMIT {
            // Too large to distribute: keep the product unexpanded.
            let mut v = product.factors();
            v.extend(self.sums);
            v.sort();
            return Expr::canon(Node::Mul(v));
        }
        let mut acc = vec![product];
        for s in &self.sums {
            let ts = s.terms();
            let mut next = Vec::with_capacity(acc.len() * ts.len());
            for a in &acc {
                for t in &ts {
                    next.push(Expr::mul_all([a.clone(), t.clone()]));
                }
            }
            acc = next;
        }
        Expr::add_all(acc)
    }
}

fn is_positive_factor(f: &Expr) -> bool {
    match f.node() {
        Node::Const(c) => c.is_positive(),
        Node::Sym(_) => true,
        Node::Fun(Func::Exp, _) | Node::Fun(Func::Abs, _) => true,
        Node::Pow(b, _) => matches!(b.node(), Node::Sym(_)) || b.as_const().is_some_and(|c| c.is_positive()),
        _ => false,
    }
}

fn pow(b: &Expr, e: &Expr) -> Expr {
    if e.is_zero_const() {
        return Expr::one();
    }
    if e.is_one() {
        return b.clone();
    }
    let e_int = e.as_const().filter(|c| c.is_integer()).and_then(|c| c.to_integer().to_i64());
    match b.node() {
        Node::Const(c) => {
            if c.is_one() {
                return Expr::one();
            }
            if let Some(r) = e.as_const() {
                return numeric::const_pow(c, r);
            }
            if c.is_positive() {
                // c^e = exp(e ln c) keeps symbolic exponents mergeable.
                return func(Func::Exp, Expr::mul_all([e.clone(), func(Func::Ln, b.clone())]));
            }
            Expr::canon(Node::Pow(b.clone(), e.clone()))
        }
        Node::Pow(b0, e0) => {
            if e_int.is_some() || matches!(b0.node(), Node::Sym(_)) {
                pow(b0, &Expr::mul_all([e0.clone(), e.clone()]))
            } else {
                Expr::canon(Node::Pow(b.clone(), e.clone()))
            }
        }
        Node::Mul(ch) => {
            if e_int.is_some() {
                return Expr::mul_all(ch.iter().map(|f| pow(f, e)));
            }
            let (pos, rest): (Vec<Expr>, Vec<Expr>) = ch.iter().cloned().partition(is_positive_factor);
            if pos.is_empty() {
                return Expr::canon(Node::Pow(b.clone(), e.clone()));
            }
            let mut out: Vec<Expr> = pos.iter().map(|f| pow(f, e)).collect();
            if !rest.is_empty() {
                let r = if rest.len() == 1 {
                    rest[0].clone()
                } else {
                    Expr::mul_all(rest)
                };
                out.push(pow(&r, e));
            }
            Expr::mul_all(out)
        }
        Node::Fun(Func::Exp, a) => func(Func::Exp, Expr::mul_all([a.clone(), e.clone()])),
        Node::Fun(Func::Abs, a) if e_int.is_some_and(|n| n % 2 == 0) => pow(a, e),
        Node::Add(ch) => {
            if let Some(n) = e_int {
                if n > 0 {
                    let est = (ch.len() as f64).powi(n as i32);
                    if est <= EXPAND_LIMIT as f64 {
                        return Expr::mul_all(std::iter::repeat(b.clone()).take(n as usize));
                    }
                    return Expr::canon(Node::Pow(b.clone(), e.clone()));
                }
                let lead = b.lead_coeff();
                if !lead.is_one() {
                    let inv = lead.recip();
                    let nb = Expr::add_all(ch.iter().map(|t| t.scale(&inv)));
                    return Expr::mul_all([
                        numeric::const_pow(&lead, &int(n)),
                        Expr::canon(Node::Pow(nb, e.clone())),
                    ]);
                }
                return Expr::canon(Node::Pow(b.clone(), e.clone()));
            }
            let lead = b.lead_coeff().abs();
            if !lead.is_one() {
                let inv = lead.recip();
                let nb = Expr::add_all(ch.iter().map(|t| t.scale(&inv)));
                return Expr::mul_all([pow(&Expr::constant(lead), e), Expr::canon(Node::Pow(nb, e.clone()))]);
            }
            Expr::canon(Node::Pow(b.clone(), e.clone()))
        }
        _ => Expr::canon(Node::Pow(b.clone(), e.clone())),
    }
}

fn func(f: Func, a: Expr) -> Expr {
    let neg_lead = !a.is_zero_const() && a.lead_coeff().is_negative();
    match f {
        Func::Exp => {
            if a.is_zero_const() {
                return Expr::one();
            }
            let mut pulled = Vec::new();
            let mut rest = Vec::new();
            for t in a.terms() {
                let (c, r) = split_coeff(&t);
                if let Node::Fun(Func::Ln, y) = r.node() {
                    pulled.push(pow(y, &Expr::constant(c)));
                } else {
                    rest.push(t);
                }
            }
            if pulled.is_empty() {
                return Expr::canon(Node::Fun(Func::Exp, a));
            }
            let r = Expr::add_all(rest);
            if !r.is_zero_const() {
                pulled.push(Expr::canon(Node::Fun(Func::Exp, r)));
            }
            Expr::mul_all(pulled)
        }
        Func::Ln => {
            match a.node() {
                Node::Const(c) if c.is_one() => return Expr::zero(),
                Node::Const(c) if c.is_positive() => return numeric::ln_const(c),
                Node::Fun(Func::Exp, b) => return b.clone(),
                Node::Pow(b, e) if matches!(b.node(), Node::Sym(_)) || b.as_const().is_some_and(|c| c.is_positive()) => {
                    return Expr::mul_all([e.clone(), func(Func::Ln, b.clone())]);
                }
                Node::Mul(ch) => {
                    let (c, rest) = split_coeff(&a);
                    let mut out = Vec::new();
                    let mut keep = Vec::new();
                    if c.is_positive() && !c.is_one() {
                        out.push(numeric::ln_const(&c));
                    } else if !c.is_one() {
                        keep.push(Expr::constant(c));
                    }
                    let _ = ch;
                    for fct in rest.factors() {
                        match fct.node() {
                            Node::Fun(Func::Exp, b) => out.push(b.clone()),
                            _ => keep.push(fct),
                        }
                    }
                    if out.is_empty() {
                        return Expr::canon(Node::Fun(Func::Ln, a));
                    }
                    if !keep.is_empty() {
                        out.push(func(Func::Ln, Expr::mul_all(keep)));
                    }
                    return Expr::add_all(out);
                }
                _ => {}
            }
            Expr::canon(Node::Fun(Func::Ln, a))
        }
        Func::Sin | Func::ArcTan | Func::ArcTanh => {
            if a.is_zero_const() {
                return Expr::zero();
            }
            if neg_lead {
                return -func(f, -a);
            }
            Expr::canon(Node::Fun(f, a))
        }
        Func::Cos => {
            if a.is_zero_const() {
                return Expr::one();
            }
            if neg_lead {
                return func(f, -a);
            }
            Expr::canon(Node::Fun(f, a))
        }
        Func::Tan => func(Func::Sin, a.clone()) * func(Func::Cos, a).powi(-1),
        Func::Sinh => {
            let h = Expr::constant(rat(1, 2));
            h * (func(Func::Exp, a.clone()) - func(Func::Exp, -a))
        }
        Func::Cosh => {
            let h = Expr::constant(rat(1, 2));
            h * (func(Func::Exp, a.clone()) + func(Func::Exp, -a))
        }
        Func::Abs => match a.node() {
            Node::Const(c) => Expr::constant(c.abs()),
            Node::Fun(Func::Exp, _) | Node::Fun(Func::Abs, _) => a.clone(),
            Node::Pow(b, e) => {
                if let Some(n) = e.as_const().filter(|c| c.is_integer()) {
                    if n.to_integer().is_even() {
                        return a.clone();
                    }
                    return pow(&func(Func::Abs, b.clone()), e);
                }
                if matches!(b.node(), Node::Fun(Func::Exp, _) | Node::Fun(Func::Abs, _)) {
                    return a.clone();
                }
                Expr::canon(Node::Fun(Func::Abs, a))
            }
            Node::Mul(ch) => Expr::mul_all(ch.iter().map(|x| func(Func::Abs, x.clone()))),
            Node::Add(_) if neg_lead => func(Func::Abs, -a),
            _ => Expr::canon(Node::Fun(Func::Abs, a)),
        },
        Func::Sign => match a.node() {
            Node::Const(c) => Expr::constant(if c.is_zero() {
                int(0)
            } else if c.is_positive() {
                int(1)
            } else {
                int(-1)
            }),
            _ => Expr::mul_all([a.clone(), func(Func::Abs, a).powi(-1)]),
        },
    }
}

use num_integer::Integer;

// ----- ordering, equality, hashing --------------------------------------

fn cmp_slices(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x.cmp(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

impl Ord for Expr {
    fn cmp(&self, o: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &o.0) {
            return Ordering::Equal;
        }
        let (r1, r2) = (self.rank(), o.rank());
        if r1 != r2 {
            return r1.cmp(&r2);
        }
        match (self.node(), o.node()) {
            (Node::Const(a), Node::Const(b)) => a.cmp(b),
            (Node::Sym(a), Node::Sym(b)) => a.cmp(b),
            (Node::Fun(f, a), Node::Fun(g, b)) => f.cmp(g).then_with(|| a.cmp(b)),
            (Node::Pow(a, e), Node::Pow(b, f)) => a.cmp(b).then_with(|| e.cmp(f)),
            (Node::Add(a), Node::Add(b)) | (Node::Mul(a), Node::Mul(b)) => cmp_slices(a, b),
            _ => unreachable!("equal ranks imply equal node kinds"),
        }
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl PartialEq for Expr {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.hash == o.0.hash && self.cmp(o) == Ordering::Equal)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self)
    }
}

// ----- operators ---------------------------------------------------------

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, o)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), o.clone())
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, o.clone())
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), o)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add_all([a, b]));
binop!(Sub, sub, |a, b| Expr::add_all([a, -b]));
binop!(Mul, mul, |a, b| Expr::mul_all([a, b]));
binop!(Div, div, |a, b| Expr::mul_all([a, b.powi(-1)]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul_all([Expr::integer(-1), self])
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -(self.clone())
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::integer(n)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Expr {
        Expr::constant(c)
    }
}

impl std::str::FromStr for Expr {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Expr, crate::Error> {
        parse(s)
    }
}

/// Parses and canonicalizes; panics on malformed input. Intended for
/// literals embedded in code and tests.
pub fn ex(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("bad expression literal {s:?}: {e}")).simplify()
}

#[cfg(test)]
mod tests;

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map(|e| e.simplify()).map_err(serde::de::Error::custom)
    }
}
