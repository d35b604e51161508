//! Recursive-descent parser producing raw (unsimplified) trees.
//!
//! Grammar: `+ - * / ^` with the usual precedence, `^` right-associative and
//! binding tighter than unary minus, integer literals, identifiers
//! `[A-Za-z][A-Za-z0-9_]*`, function calls, and `e` for Euler's number.

use super::{int, Expr, Func, Node};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize), Error> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
            return Ok((Tok::Num(s), start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
            return Ok((Tok::Ident(s), start));
        }
        if b"+-*/^(),".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c as char), start));
        }
        Err(Error::Parse {
            offset: start,
            expected: vec!["number".into(), "identifier".into(), "operator".into()],
            found: (c as char).to_string(),
        })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) | Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
        Tok::End => "end of input".into(),
    }
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), Error> {
        let (t, at) = self.lex.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, Error> {
        Err(Error::Parse {
            offset: self.at,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: describe(&self.tok),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.tok == Tok::Op(c) {
            self.bump()
        } else {
            self.fail(&[&c.to_string()])
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut terms = vec![self.term()?];
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump()?;
                    let t = self.term()?;
                    terms.push(Expr::raw(Node::Mul(vec![Expr::integer(-1), t])));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::raw(Node::Add(terms)) })
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.bump()?;
                    factors.push(self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump()?;
                    let d = self.unary()?;
                    // Division of integer literals is a rational literal.
                    let last = factors.last().unwrap();
                    if let (Some(a), Some(b)) = (last.as_const(), d.as_const()) {
                        if last.is_integer_const() && d.is_integer_const() && !num_traits::Zero::is_zero(b) {
                            let q = a / b;
                            *factors.last_mut().unwrap() = Expr::constant(q);
                            continue;
                        }
                    }
                    factors.push(Expr::raw(Node::Pow(d, Expr::integer(-1))));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::raw(Node::Mul(factors)) })
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            let a = self.unary()?;
            if let Some(c) = a.as_const() {
                return Ok(Expr::constant(-c));
            }
            return Ok(Expr::raw(Node::Mul(vec![Expr::integer(-1), a])));
        }
        if self.tok == Tok::Op('+') {
            self.bump()?;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let is_e = self.tok == Tok::Ident("e".into());
        let base = self.primary()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let ex = self.unary()?;
            if is_e {
                return Ok(Expr::raw(Node::Fun(Func::Exp, ex)));
            }
            return Ok(Expr::raw(Node::Pow(base, ex)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, Error> {
        match self.tok.clone() {
            Tok::Num(s) => {
                self.bump()?;
                let n: num_bigint::BigInt = s.parse().unwrap();
                Ok(Expr::constant(super::Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                if self.tok == Tok::Op('(') {
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    if name == "sqrt" {
                        return Ok(Expr::raw(Node::Pow(arg, Expr::constant(super::rat(1, 2)))));
                    }
                    return match Func::from_name(&name) {
                        Some(f) => Ok(Expr::raw(Node::Fun(f, arg))),
                        None => Err(Error::UnknownFunction { name, offset: at }),
                    };
                }
                if name == "e" {
                    return Ok(Expr::raw(Node::Fun(Func::Exp, Expr::constant(int(1)))));
                }
                Ok(Expr::sym(&name))
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.fail(&["number", "identifier", "("]),
        }
    }
}

/// Parses an expression into a raw tree. Call [`Expr::simplify`] for the
/// canonical form.
pub fn parse(s: &str) -> Result<Expr, Error> {
    let mut p = Parser { lex: Lexer { src: s.as_bytes(), pos: 0 }, tok: Tok::End, at: 0 };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(&["+", "-", "*", "/", "^", "end of input"]);
    }
    Ok(e)
}
