//! Exact helpers for rational constants: integer powers, prime splitting of
//! radicals and logarithms, and continued-fraction recovery of rationals.

use super::{int, Expr, Func, Node, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) fn rpow(b: &Rational, k: i32) -> Rational {
    if k >= 0 {
        num_traits::pow(b.clone(), k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization by trial division; `None` when a cofactor above the
/// trial bound remains composite-or-unknown.
fn factor(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut out = Vec::new();
    let mut m = n.clone();
    if m <= BigInt::one() {
        return Some(out);
    }
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut k = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let bp = BigInt::from(p);
        if &bp * &bp <= m {
            return None;
        }
        out.push((m, 1));
    }
    Some(out)
}

/// `c^r` for rational constants, with radicals split over primes so that the
/// fractional exponent of every prime lies in (0, 1).
pub(crate) fn const_pow(c: &Rational, r: &Rational) -> Expr {
    if r.is_integer() {
        let k = r.to_integer().to_i32();
        if c.is_zero() {
            return match k {
                Some(k) if k > 0 => Expr::zero(),
                _ => Expr::canon(Node::Pow(Expr::constant(c.clone()), Expr::constant(r.clone()))),
            };
        }
        if let Some(k) = k {
            return Expr::constant(rpow(c, k));
        }
    }
    if !c.is_positive() {
        return Expr::canon(Node::Pow(Expr::constant(c.clone()), Expr::constant(r.clone())));
    }
    let mut parts: Vec<(BigInt, Rational)> = Vec::new();
    for (n, sign) in [(c.numer(), 1i64), (c.denom(), -1i64)] {
        match factor(n) {
            Some(fs) => {
                for (p, k) in fs {
                    parts.push((p, r * int(sign * k as i64)));
                }
            }
            None => parts.push((n.clone(), r * int(sign))),
        }
    }
    let mut coeff = Rational::one();
    let mut factors = Vec::new();
    for (p, e) in parts {
        let fl = e.floor();
        let frac = &e - &fl;
        if let Some(k) = fl.to_integer().to_i32() {
            coeff *= rpow(&Rational::from_integer(p.clone()), k);
        }
        if !frac.is_zero() {
            factors.push(Expr::canon(Node::Pow(
                Expr::constant(Rational::from_integer(p)),
                Expr::constant(frac),
            )));
        }
    }
    factors.push(Expr::constant(coeff));
    Expr::mul_all(factors)
}

/// `ln c` for a positive rational, as an integer combination of prime logs.
pub(crate) fn ln_const(c: &Rational) -> Expr {
    let mut terms = Vec::new();
    for (n, sign) in [(c.numer(), 1i64), (c.denom(), -1i64)] {
        if n.is_one() {
            continue;
        }
        match factor(n) {
            Some(fs) => {
                for (p, k) in fs {
                    let l = Expr::canon(Node::Fun(Func::Ln, Expr::constant(Rational::from_integer(p))));
                    terms.push(l.scale(&int(sign * k as i64)));
                }
            }
            None => {
                let l = Expr::canon(Node::Fun(Func::Ln, Expr::constant(Rational::from_integer(n.clone()))));
                terms.push(l.scale(&int(sign)));
            }
        }
    }
    Expr::add_all(terms)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// from the continued-fraction convergents. Returns `None` when no
/// convergent is within `tol`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = y.floor();
        let ai = BigInt::from(a as u64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let approx = p1.to_f64().unwrap_or(f64::INFINITY) / q1.to_f64().unwrap_or(1.0);
        if (approx - x.abs()).abs() <= tol * x.abs().max(1.0) {
            let r = Rational::new(p1.clone(), q1.clone());
            return Some(if neg { -r } else { r });
        }
        let frac = y - a;
        if frac < 1e-300 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1.is_zero() {
        return None;
    }
    let approx = p1.to_f64().unwrap_or(f64::INFINITY) / q1.to_f64().unwrap_or(1.0);
    if (approx - x.abs()).abs() <= tol * x.abs().max(1.0) {
        let r = Rational::new(p1, q1);
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

/// Integer `k`-th root when `n` is a perfect power.
pub(crate) fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 1 {
            return exact_root(&-n, k).map(|r| -r);
        }
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}
