//! Point evaluation: exact over the rationals where possible, otherwise in
//! binary floating point of configurable precision.

use super::numeric::{exact_root, rpow};
use super::{Expr, Func, Node, Rational};
use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

pub type Point = BTreeMap<String, Rational>;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("float constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("expression is singular at the sample point")]
    Singular,
    #[error("symbol {0} has no value at the sample point")]
    Unbound(String),
}

/// A value: exact rational or a binary float.
#[derive(Clone, Debug)]
pub enum Num {
    Q(Rational),
    F(BigFloat),
}

pub(crate) fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let base = BigFloat::from_u128(1u128 << 64, p);
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg();
    }
    acc
}

pub(crate) fn rational_to_float(q: &Rational, p: usize) -> BigFloat {
    let n = bigint_to_float(q.numer(), p);
    if q.denom().is_one() {
        return n;
    }
    n.div(&bigint_to_float(q.denom(), p), p, RM)
}

fn check(f: BigFloat) -> Result<BigFloat, EvalError> {
    if f.is_nan() || f.is_inf() {
        Err(EvalError::Singular)
    } else {
        Ok(f)
    }
}

/// log2 magnitude, used for cancellation-aware tolerances.
fn magnitude(n: &Num) -> i64 {
    match n {
        Num::Q(q) => {
            if q.is_zero() {
                i64::MIN
            } else {
                q.numer().bits() as i64 - q.denom().bits() as i64
            }
        }
        Num::F(f) => {
            if f.is_zero() {
                i64::MIN
            } else {
                f.exponent().map(|e| e as i64).unwrap_or(i64::MIN)
            }
        }
    }
}

impl Num {
    pub fn to_float(&self, p: usize) -> BigFloat {
        match self {
            Num::Q(q) => rational_to_float(q, p),
            Num::F(f) => f.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Num::Q(q) => q.is_zero(),
            Num::F(f) => f.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Q(q) => q.is_negative(),
            Num::F(f) => f.is_negative() && !f.is_zero(),
        }
    }

    pub fn log2_abs(&self) -> i64 {
        magnitude(self)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Q(q) => q.to_f64().unwrap_or(f64::NAN),
            Num::F(f) => float_to_f64(f),
        }
    }

    pub fn to_decimal(&self) -> String {
        match self {
            Num::Q(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Num::F(f) => with_cc(|cc| f.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into()),
        }
    }
}

pub(crate) fn float_to_f64(f: &BigFloat) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    with_cc(|cc| f.format(Radix::Dec, RM, cc))
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(f64::NAN)
}

struct Ctx<'a> {
    point: &'a Point,
    p: usize,
    memo: HashMap<usize, Num>,
    scale: i64,
}

impl<'a> Ctx<'a> {
    fn f(&self, n: &Num) -> BigFloat {
        n.to_float(self.p)
    }

    fn add(&self, a: Num, b: &Num) -> Num {
        match (a, b) {
            (Num::Q(x), Num::Q(y)) => Num::Q(x + y),
            (a, b) => Num::F(self.f(&a).add(&self.f(b), self.p, RM)),
        }
    }

    fn mul(&self, a: Num, b: &Num) -> Num {
        match (a, b) {
            (Num::Q(x), Num::Q(y)) => Num::Q(x * y),
            (a, b) => Num::F(self.f(&a).mul(&self.f(b), self.p, RM)),
        }
    }

    fn ln_pos(&self, x: &BigFloat) -> Result<BigFloat, EvalError> {
        if x.is_zero() || x.is_negative() {
            return Err(EvalError::Singular);
        }
        check(with_cc(|cc| x.ln(self.p, RM, cc)))
    }

    fn exp_f(&self, x: &BigFloat) -> Result<BigFloat, EvalError> {
        check(with_cc(|cc| x.exp(self.p, RM, cc)))
    }

    fn pow(&self, b: Num, e: Num) -> Result<Num, EvalError> {
        let p = self.p;
        if let Num::Q(r) = &e {
            if r.is_integer() {
                let n = r.to_integer().to_i64().ok_or(EvalError::Singular)?;
                if b.is_zero() && n < 0 {
                    return Err(EvalError::Singular);
                }
                return Ok(match b {
                    Num::Q(q) => Num::Q(rpow(&q, n.try_into().map_err(|_| EvalError::Singular)?)),
                    Num::F(f) => {
                        let m = f.powi(n.unsigned_abs() as usize, p, RM);
                        Num::F(check(if n < 0 { m.reciprocal(p, RM) } else { m })?)
                    }
                });
            }
            let (num, den) = (r.numer().clone(), r.denom().clone());
            if b.is_zero() {
                return if r.is_positive() { Ok(Num::Q(Rational::zero())) } else { Err(EvalError::Singular) };
            }
            let odd_den = den.bits() <= 32 && (den.to_u32().unwrap() % 2 == 1);
            if let Num::Q(q) = &b {
                if let Some(k) = den.to_u32() {
                    if let (Some(a), Some(c)) = (exact_root(q.numer(), k), exact_root(q.denom(), k)) {
                        let root = Rational::new(a, c);
                        let n = num.to_i32().ok_or(EvalError::Singular)?;
                        return Ok(Num::Q(rpow(&root, n)));
                    }
                }
            }
            let bf = self.f(&b);
            let neg = bf.is_negative();
            if neg && !odd_den {
                return Err(EvalError::Singular);
            }
            let mag = self.exp_f(&self.ln_pos(&bf.abs())?.mul(&rational_to_float(r, p), p, RM))?;
            let odd_num = (&num % BigInt::from(2)) != BigInt::zero();
            return Ok(Num::F(if neg && odd_num { mag.neg() } else { mag }));
        }
        let bf = self.f(&b);
        if bf.is_zero() {
            return if !e.is_negative() && !e.is_zero() { Ok(Num::Q(Rational::zero())) } else { Err(EvalError::Singular) };
        }
        let l = self.ln_pos(&bf)?;
        Ok(Num::F(self.exp_f(&l.mul(&self.f(&e), p, RM))?))
    }

    fn func(&self, f: Func, a: Num) -> Result<Num, EvalError> {
        let p = self.p;
        if let Num::Q(q) = &a {
            match f {
                Func::Abs => return Ok(Num::Q(q.abs())),
                Func::Sign => return Ok(Num::Q(Rational::from_integer(BigInt::from(q.signum().to_integer())))),
                Func::Exp | Func::Sin | Func::Tan | Func::Sinh | Func::ArcTan | Func::ArcTanh if q.is_zero() => {
                    return Ok(Num::Q(if f == Func::Exp { Rational::one() } else { Rational::zero() }))
                }
                Func::Cos | Func::Cosh if q.is_zero() => return Ok(Num::Q(Rational::one())),
                Func::Ln if q.is_one() => return Ok(Num::Q(Rational::zero())),
                _ => {}
            }
        }
        let x = self.f(&a);
        let r = match f {
            Func::Exp => self.exp_f(&x)?,
            Func::Ln => self.ln_pos(&x)?,
            Func::Sin => with_cc(|cc| x.sin(p, RM, cc)),
            Func::Cos => with_cc(|cc| x.cos(p, RM, cc)),
            Func::Tan => with_cc(|cc| x.tan(p, RM, cc)),
            Func::Sinh => with_cc(|cc| x.sinh(p, RM, cc)),
            Func::Cosh => with_cc(|cc| x.cosh(p, RM, cc)),
            Func::Abs => x.abs(),
            Func::Sign => {
                if x.is_zero() {
                    return Ok(Num::Q(Rational::zero()));
                }
                return Ok(Num::Q(Rational::from_integer(BigInt::from(if x.is_negative() { -1 } else { 1 }))));
            }
            Func::ArcTan => with_cc(|cc| x.atan(p, RM, cc)),
            Func::ArcTanh => {
                let one = BigFloat::from_u64(1, p);
                if x.abs().cmp(&one).is_none_or(|c| c >= 0) {
                    return Err(EvalError::Singular);
                }
                with_cc(|cc| x.atanh(p, RM, cc))
            }
        };
        Ok(Num::F(check(r)?))
    }

    fn eval(&mut self, e: &Expr) -> Result<Num, EvalError> {
        let key = std::sync::Arc::as_ptr(&e.0) as usize;
        if e.size() > 2 {
            if let Some(v) = self.memo.get(&key) {
                return Ok(v.clone());
            }
        }
        let v = match e.node() {
            Node::Const(c) => Num::Q(c.clone()),
            Node::Sym(s) => Num::Q(self.point.get(&**s).cloned().ok_or_else(|| EvalError::Unbound(s.to_string()))?),
            Node::Add(ch) => {
                let mut acc = Num::Q(Rational::zero());
                for c in ch {
                    let v = self.eval(c)?;
                    self.scale = self.scale.max(magnitude(&v));
                    acc = self.add(acc, &v);
                }
                acc
            }
            Node::Mul(ch) => {
                let mut acc = Num::Q(Rational::one());
                for c in ch {
                    let v = self.eval(c)?;
                    acc = self.mul(acc, &v);
                }
                acc
            }
            Node::Pow(b, x) => {
                let bv = self.eval(b)?;
                let xv = self.eval(x)?;
                self.pow(bv, xv)?
            }
            Node::Fun(f, a) => {
                let av = self.eval(a)?;
                self.func(*f, av)?
            }
        };
        if let Num::F(f) = &v {
            check(f.clone())?;
        }
        if e.size() > 2 {
            self.memo.insert(key, v.clone());
        }
        Ok(v)
    }
}

/// Evaluates with `bits` of binary precision. Also returns the largest
/// log2-magnitude of any summand met, which bounds the cancellation error.
pub fn eval_num(e: &Expr, point: &Point, bits: usize) -> Result<(Num, i64), EvalError> {
    // Transcendental kernels misbehave below two words of mantissa.
    let mut ctx = Ctx { point, p: bits.max(128), memo: HashMap::new(), scale: i64::MIN };
    let v = ctx.eval(e)?;
    Ok((v, ctx.scale))
}

/// Result of a public evaluation: an exact rational, or a float with an
/// error estimate obtained by re-evaluating with 64 extra bits.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Num,
    pub digits: u32,
    pub error_bound: f64,
}

impl Evaluation {
    pub fn exact(&self) -> Option<&Rational> {
        match &self.value {
            Num::Q(q) => Some(q),
            Num::F(_) => None,
        }
    }
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

pub fn digits_to_bits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 64
}

/// Evaluates `e` at `point` with at least `digits` decimal digits.
pub fn eval(e: &Expr, point: &Point, digits: u32) -> Result<Evaluation, EvalError> {
    let bits = digits_to_bits(digits);
    let (v, _) = eval_num(e, point, bits)?;
    if let Num::Q(_) = v {
        return Ok(Evaluation { value: v, digits, error_bound: 0.0 });
    }
    let (w, _) = eval_num(e, point, bits + 64)?;
    let a = v.to_float(bits + 64);
    let b = w.to_float(bits + 64);
    let diff = float_to_f64(&a.sub(&b, bits + 64, RM).abs());
    let ulp = v.to_f64().abs() * 2f64.powi(-(bits as i32).min(1000));
    Ok(Evaluation { value: v, digits, error_bound: diff + ulp })
}
