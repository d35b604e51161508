//! Canonicalization, differentiation and substitution.

use super::{rat, symbol_bit, Expr, Func, Node, Symbol};
use std::collections::{BTreeMap, BTreeSet};

impl Expr {
    /// Canonical form. Idempotent; cheap on already-canonical input.
    pub fn simplify(&self) -> Expr {
        if self.is_canonical() {
            return self.clone();
        }
        self.rebuild(&mut |e| match e.node() {
            Node::Const(_) | Node::Sym(_) => Some(e.clone()),
            _ => None,
        })
    }

    /// Bottom-up rebuild through the canonical constructors. `leaf` may
    /// replace a subtree outright by returning `Some`.
    pub fn rebuild(&self, leaf: &mut dyn FnMut(&Expr) -> Option<Expr>) -> Expr {
        if let Some(r) = leaf(self) {
            return r;
        }
        match self.node() {
            Node::Const(_) | Node::Sym(_) => self.clone(),
            Node::Add(ch) => Expr::add_all(ch.iter().map(|c| c.rebuild(leaf)).collect::<Vec<_>>()),
            Node::Mul(ch) => Expr::mul_all(ch.iter().map(|c| c.rebuild(leaf)).collect::<Vec<_>>()),
            Node::Pow(b, e) => b.rebuild(leaf).pow(&e.rebuild(leaf)),
            Node::Fun(f, a) => Expr::func(*f, a.rebuild(leaf)),
        }
    }

    pub fn contains(&self, v: &str) -> bool {
        if self.0.mask & symbol_bit(v) == 0 {
            return false;
        }
        match self.node() {
            Node::Const(_) => false,
            Node::Sym(s) => &**s == v,
            Node::Add(ch) | Node::Mul(ch) => ch.iter().any(|c| c.contains(v)),
            Node::Pow(b, e) => b.contains(v) || e.contains(v),
            Node::Fun(_, a) => a.contains(v),
        }
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(e: &Expr, out: &mut BTreeSet<String>) {
            match e.node() {
                Node::Const(_) => {}
                Node::Sym(s) => {
                    out.insert(s.to_string());
                }
                Node::Add(ch) | Node::Mul(ch) => ch.iter().for_each(|c| go(c, out)),
                Node::Pow(b, x) => {
                    go(b, out);
                    go(x, out);
                }
                Node::Fun(_, a) => go(a, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Partial derivative with respect to the symbol `v`.
    pub fn diff(&self, v: &str) -> Expr {
        let e = self.simplify();
        e.diff_canon(v)
    }

    fn diff_canon(&self, v: &str) -> Expr {
        if !self.contains(v) {
            return Expr::zero();
        }
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Sym(s) => Expr::integer((&**s == v) as i64),
            Node::Add(ch) => Expr::add_all(ch.iter().map(|c| c.diff_canon(v)).collect::<Vec<_>>()),
            Node::Mul(ch) => {
                let mut terms = Vec::new();
                for i in 0..ch.len() {
                    let d = ch[i].diff_canon(v);
                    if d.is_zero_const() {
                        continue;
                    }
                    let mut fs: Vec<Expr> = Vec::with_capacity(ch.len());
                    for (j, c) in ch.iter().enumerate() {
                        fs.push(if i == j { d.clone() } else { c.clone() });
                    }
                    terms.push(Expr::mul_all(fs));
                }
                Expr::add_all(terms)
            }
            Node::Pow(b, e) => {
                let db = b.diff_canon(v);
                if !e.contains(v) {
                    let em1 = e - Expr::one();
                    Expr::mul_all([e.clone(), b.pow(&em1), db])
                } else {
                    let de = e.diff_canon(v);
                    let inner = de * Expr::func(Func::Ln, b.clone()) + e * db * b.powi(-1);
                    Expr::mul_all([self.clone(), inner])
                }
            }
            Node::Fun(f, a) => {
                let da = a.diff_canon(v);
                if da.is_zero_const() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Ln => a.powi(-1),
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Tan => Expr::one() + Expr::func(Func::Tan, a.clone()).powi(2),
                    Func::Sinh => Expr::func(Func::Cosh, a.clone()),
                    Func::Cosh => Expr::func(Func::Sinh, a.clone()),
                    Func::Abs => a * a.abs().powi(-1),
                    Func::Sign => Expr::zero(),
                    Func::ArcTan => (Expr::one() + a.powi(2)).powi(-1),
                    Func::ArcTanh => (Expr::one() - a.powi(2)).powi(-1),
                };
                outer * da
            }
        }
    }

    /// Repeated partial derivative, e.g. `diff_n(&["x", "x", "t"])`.
    pub fn diff_n(&self, vars: &[&str]) -> Expr {
        let mut e = self.simplify();
        for v in vars {
            e = e.diff_canon(v);
        }
        e
    }

    /// Simultaneous substitution of symbols.
    pub fn subst(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        if map.is_empty() {
            return self.simplify();
        }
        let mask = map.keys().fold(0u64, |m, k| m | symbol_bit(k));
        self.rebuild(&mut |e| {
            if e.0.mask & mask == 0 {
                return Some(e.simplify());
            }
            if let Node::Sym(s) = e.node() {
                return Some(map.get(s).cloned().unwrap_or_else(|| e.clone()));
            }
            None
        })
    }

    pub fn subst_pairs(&self, pairs: &[(&str, Expr)]) -> Expr {
        let map: BTreeMap<Symbol, Expr> = pairs.iter().map(|(k, v)| (Symbol::from(*k), v.clone())).collect();
        self.subst(&map)
    }

    pub fn half() -> Expr {
        Expr::constant(rat(1, 2))
    }
}
