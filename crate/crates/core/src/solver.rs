//! Lie symmetries of a concrete class member from a polynomial ansatz.
//!
//! The determining equations are linear in the unknown coefficients, so each
//! residual evaluated at a sample point gives one linear constraint. The
//! nullspace of the sampled system is reified as vector fields and every
//! field is confirmed symbolically before it is returned.

use crate::deteq::{is_symmetry, residuals_unchecked, ClassMember};
use crate::expr::{eval_num, rat, rationalize, Chart, EvalError, Expr, Num, Point, Rational};
use crate::jets::VectorField;
use crate::liealg::{Closure, LieAlgebraSpan, SpanConfig};
use crate::linalg;
use crate::{Error, Result};
use astro_float_num::BigFloat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const FLOAT_BITS: usize = 256;
/// Pivots below `2^-160` of the largest entry are treated as zero.
const FLOAT_TOL_LOG2: i64 = -160;
/// A second, looser threshold; a rank change between the two is reported.
const FLOAT_WARN_LOG2: i64 = -96;
const MAX_DEN: u64 = 1_000_000;
const RATIONAL_TOL: f64 = 1e-12;
const MAX_RESAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Extra factors multiplying the polynomial ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraBasis {
    #[serde(rename = "exp2t")]
    Exp2t,
    #[serde(rename = "trig2t")]
    Trig2t,
}

impl ExtraBasis {
    fn factors(self) -> [Expr; 2] {
        let two_t = Expr::integer(2) * Expr::sym("t");
        match self {
            ExtraBasis::Exp2t => [two_t.exp(), (-two_t).exp()],
            ExtraBasis::Trig2t => [two_t.sin(), two_t.cos()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub seed: u64,
    pub oversample: f64,
    pub mode: Mode,
    pub extra_basis: Vec<ExtraBasis>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { seed: 0x5eed, oversample: 3.0, mode: Mode::Exact, extra_basis: vec![] }
    }
}

/// Unknown coefficient layout: `tau`, `xi`, `eta1`, `eta0` each range over
/// the same list of basis functions of `(t, x)`, with `eta = eta1*u + eta0`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub degree: usize,
    pub functions: Vec<Expr>,
}

impl Ansatz {
    pub fn new(degree: usize, extra: &[ExtraBasis]) -> Ansatz {
        let (t, x) = (Expr::sym("t"), Expr::sym("x"));
        let mut monomials = Vec::new();
        for total in 0..=degree {
            for i in (0..=total).rev() {
                monomials.push(t.powi(i as i64) * x.powi((total - i) as i64));
            }
        }
        let mut functions = monomials.clone();
        for e in extra {
            for factor in e.factors() {
                functions.extend(monomials.iter().map(|m| &factor * m));
            }
        }
        Ansatz { degree, functions }
    }

    pub fn unknowns(&self) -> usize {
        4 * self.functions.len()
    }

    /// Field with a single unit coefficient at position `k`.
    pub fn unit_field(&self, k: usize) -> VectorField {
        let n = self.functions.len();
        let (slot, b) = (k / n, &self.functions[k % n]);
        let mut comps = [Expr::zero(), Expr::zero(), Expr::zero()];
        match slot {
            0 => comps[0] = b.clone(),
            1 => comps[1] = b.clone(),
            2 => comps[2] = b * &Expr::sym("u"),
            _ => comps[2] = b.clone(),
        }
        let [tau, xi, eta] = comps;
        VectorField::txu(tau, xi, eta)
    }

    pub fn field(&self, coeffs: &[Rational]) -> VectorField {
        let units: Vec<VectorField> = (0..self.unknowns()).map(|k| self.unit_field(k)).collect();
        let c: Vec<Expr> = coeffs.iter().map(|q| Expr::constant(q.clone())).collect();
        VectorField::linear_combination(&units, &c)
    }
}

/// Outcome of [`solve_symmetries`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub span: LieAlgebraSpan,
    pub closure: Closure,
    pub degree: usize,
    pub unknowns: usize,
    pub equations: usize,
    /// True when the nullspace came from floating-point elimination.
    pub numeric: bool,
    pub resamples: usize,
    pub warnings: Vec<String>,
}

impl Solution {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }
}

/// Point with `t, x, u` drawn from `{k/7 : 1 <= k <= 70}`, signs from the chart.
fn draw_point(rng: &mut ChaCha8Rng, chart: &Chart) -> Point {
    ["t", "x", "u"]
        .iter()
        .map(|s| {
            let v = rat(rng.gen_range(1..=70), 7);
            let v = match chart.sign_of(s) {
                crate::expr::ChartSign::Pos => v,
                crate::expr::ChartSign::Neg => -v,
            };
            (s.to_string(), v)
        })
        .collect()
}

fn regular_at(theta: &ClassMember, probes: &[Expr], p: &Point) -> bool {
    match eval_num(&theta.f, p, 128) {
        Ok((v, _)) if !v.is_zero() => {}
        _ => return false,
    }
    probes.iter().all(|e| !matches!(eval_num(e, p, 128), Err(EvalError::Singular)))
}

/// Residuals of each unit field, indexed `[unknown][equation]`.
fn unit_residuals(ansatz: &Ansatz, theta: &ClassMember) -> Vec<[Expr; 5]> {
    (0..ansatz.unknowns()).into_par_iter().map(|k| residuals_unchecked(&ansatz.unit_field(k), theta)).collect()
}

enum System {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<BigFloat>>),
}

fn assemble(residuals: &[[Expr; 5]], points: &[Point], mode: Mode) -> Result<System> {
    let n = residuals.len();
    // One block of five rows per point, computed independently.
    let blocks: Vec<Vec<Vec<Num>>> = points
        .par_iter()
        .map(|p| {
            (0..5)
                .map(|eq| {
                    (0..n)
                        .map(|k| {
                            let e = &residuals[k][eq];
                            if e.is_zero_const() {
                                Ok(Num::Q(rat(0, 1)))
                            } else {
                                Ok(eval_num(e, p, FLOAT_BITS)?.0)
                            }
                        })
                        .collect::<Result<Vec<Num>>>()
                })
                .collect::<Result<Vec<Vec<Num>>>>()
        })
        .collect::<Result<_>>()?;
    let rows = blocks.into_iter().flatten();
    match mode {
        Mode::Exact => rows
            .map(|r| {
                r.into_iter()
                    .map(|v| match v {
                        Num::Q(q) => Ok(q),
                        Num::F(_) => Err(Error::Precondition(
                            "the determining equations are not rational at rational points; use float mode".into(),
                        )),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()
            .map(System::Exact),
        Mode::Float => Ok(System::Float(rows.map(|r| r.into_iter().map(|v| v.to_float(FLOAT_BITS)).collect()).collect())),
    }
}

fn float_to_rational(v: &BigFloat) -> Option<Rational> {
    rationalize(Num::F(v.clone()).to_f64(), MAX_DEN, RATIONAL_TOL)
}

struct Attempt {
    fields: Vec<VectorField>,
    equations: usize,
    warnings: Vec<String>,
}

fn attempt(theta: &ClassMember, ansatz: &Ansatz, residuals: &[[Expr; 5]], cfg: &SolverConfig, seed: u64, oversample: f64) -> Result<Option<Attempt>> {
    let n = ansatz.unknowns();
    let npoints = ((oversample * n as f64).ceil() as usize).max(1);
    let probes: Vec<Expr> = [&theta.f, &theta.g]
        .iter()
        .flat_map(|e| [(*e).clone(), e.diff("x"), e.diff("u"), e.diff("x").diff("x")])
        .chain(ansatz.functions.iter().cloned())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(npoints);
    let mut draws = 0;
    while points.len() < npoints {
        draws += 1;
        if draws > 10 * npoints + 10 {
            return Err(Error::SamplingExhausted { needed: npoints, got: points.len() });
        }
        let p = draw_point(&mut rng, &theta.chart);
        if regular_at(theta, &probes, &p) {
            points.push(p);
        }
    }
    let system = assemble(residuals, &points, cfg.mode)?;
    let mut warnings = Vec::new();
    let equations = 5 * points.len();
    let vectors: Vec<Vec<Rational>> = match system {
        System::Exact(rows) => linalg::nullspace(&rows, n),
        System::Float(rows) => {
            let ns = linalg::bigfloat_nullspace(&rows, n, FLOAT_BITS, FLOAT_TOL_LOG2);
            let loose = linalg::bigfloat_rref(&rows, n, FLOAT_BITS, FLOAT_WARN_LOG2).1.len();
            if loose != n - ns.len() {
                warnings.push(format!("numeric rank ambiguous: {} at 2^{FLOAT_TOL_LOG2}, {loose} at 2^{FLOAT_WARN_LOG2}", n - ns.len()));
            }
            let mut out = Vec::with_capacity(ns.len());
            for v in &ns {
                match v.iter().map(float_to_rational).collect::<Option<Vec<_>>>() {
                    Some(q) => out.push(q),
                    None => return Ok(None),
                }
            }
            out
        }
    };
    let fields: Vec<VectorField> = vectors.iter().map(|v| ansatz.field(v)).collect();
    let confirmed = fields
        .par_iter()
        .map(|q| is_symmetry(q, theta).map(|r| r.holds))
        .collect::<Result<Vec<bool>>>()?;
    if confirmed.iter().all(|&b| b) {
        Ok(Some(Attempt { fields, equations, warnings }))
    } else {
        Ok(None)
    }
}

/// All Lie symmetries of `theta` whose coefficients lie in the degree-`d`
/// ansatz. Every returned field has been confirmed with [`is_symmetry`].
pub fn solve_symmetries(theta: &ClassMember, d: usize, cfg: &SolverConfig) -> Result<Solution> {
    if !(cfg.oversample >= 1.0) {
        return Err(Error::Invalid(format!("oversample must be at least 1, got {}", cfg.oversample)));
    }
    let ansatz = Ansatz::new(d, &cfg.extra_basis);
    let residuals = unit_residuals(&ansatz, theta);
    for r in 0..=MAX_RESAMPLES {
        let seed = cfg.seed.wrapping_add((r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let Some(a) = attempt(theta, &ansatz, &residuals, cfg, seed, cfg.oversample + r as f64)? else { continue };
        let mut span = LieAlgebraSpan::with_config(a.fields, SpanConfig::with_chart(theta.chart.clone()))?;
        let closure = span.closure_check()?;
        return Ok(Solution {
            span,
            closure,
            degree: d,
            unknowns: ansatz.unknowns(),
            equations: a.equations,
            numeric: cfg.mode == Mode::Float,
            resamples: r,
            warnings: a.warnings,
        });
    }
    Err(Error::Unconfirmed { attempts: MAX_RESAMPLES + 1 })
}

/// Symmetry dimension at each degree `0..=d_max`.
pub fn dimension_profile(theta: &ClassMember, d_max: usize, cfg: &SolverConfig) -> Result<Vec<usize>> {
    (0..=d_max).map(|d| solve_symmetries(theta, d, cfg).map(|s| s.dim())).collect()
}
