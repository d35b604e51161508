//! Infix rendering that the parser reads back.

use super::{Expr, Node, Rational};
use num_traits::{One, Signed};
use std::fmt;

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Writes `e` assuming the surrounding context binds with strength `ctx`.
fn write(e: &Expr, ctx: u8, out: &mut String) {
    match e.node() {
        Node::Const(c) => {
            let s = fmt_rational(c);
            let own = if c.is_negative() {
                P_NEG
            } else if c.is_integer() {
                P_POW + 1
            } else {
                P_MUL
            };
            paren(own, ctx, &s, out);
        }
        Node::Sym(s) => out.push_str(s),
        Node::Fun(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, 0, out);
            out.push(')');
        }
        Node::Pow(b, x) => {
            let mut s = String::new();
            write(b, P_POW + 1, &mut s);
            s.push('^');
            write(x, P_POW + 1, &mut s);
            paren(P_POW, ctx, &s, out);
        }
        Node::Mul(ch) => {
            let mut s = String::new();
            let mut rest: &[Expr] = ch;
            let mut neg = false;
            if let Node::Const(c) = ch[0].node() {
                if ch.len() > 1 {
                    if c == &-Rational::one() {
                        neg = true;
                        rest = &ch[1..];
                    } else if c.is_negative() {
                        neg = true;
                        s.push_str(&fmt_rational(&-c));
                        s.push('*');
                        rest = &ch[1..];
                    }
                }
            }
            let mut first = true;
            for f in rest {
                if !first {
                    s.push('*');
                }
                first = false;
                write(f, P_MUL + 1, &mut s);
            }
            if s.ends_with('*') {
                s.pop();
            }
            if neg {
                paren(P_NEG, ctx, &format!("-{s}"), out);
            } else {
                paren(P_MUL, ctx, &s, out);
            }
        }
        Node::Add(ch) => {
            let mut s = String::new();
            for (i, t) in ch.iter().enumerate() {
                let mut ts = String::new();
                write(t, P_ADD + 1, &mut ts);
                if i == 0 {
                    s.push_str(&ts);
                } else if let Some(stripped) = ts.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(stripped);
                } else {
                    s.push_str(" + ");
                    s.push_str(&ts);
                }
            }
            paren(P_ADD, ctx, &s, out);
        }
    }
}

fn paren(own: u8, ctx: u8, s: &str, out: &mut String) {
    if own < ctx {
        out.push('(');
        out.push_str(s);
        out.push(')');
    } else {
        out.push_str(s);
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write(self, 0, &mut s);
        f.write_str(&s)
    }
}
