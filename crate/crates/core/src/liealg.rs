//! Finite-dimensional spans of vector fields: linear independence, closure
//! with rational structure constants, membership, and isomorphism
//! invariants.

use crate::expr::{eval_num, rationalize, Chart, EvalError, Num, Point, Rational, ZeroConfig};
use crate::jets::{bracket, VectorField};
use crate::linalg;
use crate::{Error, Result};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const FLOAT_TOL: f64 = 1e-9;
const MAX_DEN: u64 = 1_000_000;
const EVAL_BITS: usize = 256;

/// Component values of a list of fields at sampled points, one row per field.
enum Samples {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

fn sample_points(coords: &[String], n: usize, chart: &Chart, seed: u64, fields: &[&VectorField]) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 10 * n + 10 {
            return Err(Error::SamplingExhausted { needed: n, got: out.len() });
        }
        let p: Point = coords.iter().map(|c| (c.clone(), chart.sample(c, &mut rng))).collect();
        let regular = fields.iter().all(|f| f.comps.iter().all(|c| !matches!(eval_num(c, &p, 128), Err(EvalError::Singular))));
        if regular {
            out.push(p);
        }
    }
    Ok(out)
}

fn evaluate(fields: &[&VectorField], points: &[Point]) -> Result<Samples> {
    let mut exact: Vec<Vec<Rational>> = Vec::new();
    let mut float: Vec<Vec<f64>> = Vec::new();
    let mut all_exact = true;
    for f in fields {
        let (mut qr, mut fr) = (Vec::new(), Vec::new());
        for p in points {
            for c in &f.comps {
                let (v, _) = eval_num(c, p, EVAL_BITS)?;
                fr.push(v.to_f64());
                match v {
                    Num::Q(q) => qr.push(q),
                    Num::F(_) => all_exact = false,
                }
            }
        }
        exact.push(qr);
        float.push(fr);
    }
    Ok(if all_exact { Samples::Exact(exact) } else { Samples::Float(float) })
}

fn transpose<T: Clone>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return vec![];
    }
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Linear algebra context shared by the span operations.
#[derive(Clone, Debug)]
pub struct SpanConfig {
    pub zero: ZeroConfig,
}

impl Default for SpanConfig {
    fn default() -> Self {
        SpanConfig { zero: ZeroConfig::default() }
    }
}

impl SpanConfig {
    pub fn with_chart(chart: Chart) -> SpanConfig {
        SpanConfig { zero: ZeroConfig::default().with_chart(chart) }
    }

    fn points(&self, coords: &[String], dim: usize, fields: &[&VectorField]) -> Result<Vec<Point>> {
        sample_points(coords, 3 * dim.max(1) + 2, &self.zero.chart, self.zero.seed, fields)
    }
}

/// Rank of a list of fields over the rationals.
pub fn field_rank(fields: &[VectorField], cfg: &SpanConfig) -> Result<usize> {
    let Some(first) = fields.first() else { return Ok(0) };
    let refs: Vec<&VectorField> = fields.iter().collect();
    let pts = cfg.points(&first.coords, fields.len(), &refs)?;
    Ok(match evaluate(&refs, &pts)? {
        Samples::Exact(rows) => {
            let n = rows[0].len();
            linalg::rank(&rows, n)
        }
        Samples::Float(rows) => {
            let n = rows[0].len();
            linalg::float_rref(&rows, n, FLOAT_TOL).1.len()
        }
    })
}

/// Rational coefficients expressing `q` through `basis`, confirmed
/// symbolically; `None` when `q` lies outside the span.
pub fn coordinates(basis: &[VectorField], q: &VectorField, cfg: &SpanConfig) -> Result<Option<Vec<Rational>>> {
    if basis.is_empty() {
        return Ok(if q.vanishes(&cfg.zero)? { Some(vec![]) } else { None });
    }
    let mut refs: Vec<&VectorField> = basis.iter().collect();
    refs.push(q);
    let pts = cfg.points(&q.coords, basis.len() + 1, &refs)?;
    let n = basis.len();
    let candidate: Option<Vec<Rational>> = match evaluate(&refs, &pts)? {
        Samples::Exact(rows) => {
            let cols = transpose(&rows);
            linalg::nullspace(&cols, n + 1)
                .into_iter()
                .find(|v| !v[n].is_zero())
                .map(|v| v[..n].iter().map(|c| -c / &v[n]).collect())
        }
        Samples::Float(rows) => {
            let cols = transpose(&rows);
            let ns = linalg::float_nullspace(&cols, n + 1, FLOAT_TOL);
            match ns.into_iter().find(|v| v[n].abs() > FLOAT_TOL) {
                Some(v) => v[..n].iter().map(|c| rationalize(-c / v[n], MAX_DEN, 1e-8)).collect(),
                None => None,
            }
        }
    };
    let Some(c) = candidate else { return Ok(None) };
    let combo = VectorField::linear_combination(basis, &c.iter().map(|x| crate::expr::Expr::constant(x.clone())).collect::<Vec<_>>());
    if combo.sub(q).vanishes(&cfg.zero)? {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// Structure constants `c[i][j][k]` with `[b_i, b_j] = sum_k c[i][j][k] b_k`.
pub type Structure = Vec<Vec<Vec<Rational>>>;

#[derive(Clone, Debug)]
pub enum Closure {
    Closed(Structure),
    NotClosed { pair: (usize, usize), residual: VectorField },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: usize,
    pub derived_dim: usize,
    pub center_dim: usize,
    /// `(positive, zero, negative)` eigenvalue counts of the Killing form.
    pub killing_signature: (usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct LieAlgebraSpan {
    pub basis: Vec<VectorField>,
    pub structure: Option<Structure>,
    pub cfg: SpanConfig,
}

impl LieAlgebraSpan {
    pub fn new(basis: Vec<VectorField>) -> Result<LieAlgebraSpan> {
        LieAlgebraSpan::with_config(basis, SpanConfig::default())
    }

    /// Fails when the fields are linearly dependent or live on different
    /// coordinates.
    pub fn with_config(basis: Vec<VectorField>, cfg: SpanConfig) -> Result<LieAlgebraSpan> {
        if let Some(f) = basis.first() {
            if basis.iter().any(|b| b.coords != f.coords) {
                return Err(Error::Precondition("basis fields live on different coordinates".into()));
            }
        }
        let r = field_rank(&basis, &cfg)?;
        if r != basis.len() {
            return Err(Error::Invalid(format!("dependent basis: rank {r} for {} fields", basis.len())));
        }
        Ok(LieAlgebraSpan { basis, structure: None, cfg })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, q: &VectorField) -> Result<bool> {
        Ok(coordinates(&self.basis, q, &self.cfg)?.is_some())
    }

    pub fn coordinates(&self, q: &VectorField) -> Result<Option<Vec<Rational>>> {
        coordinates(&self.basis, q, &self.cfg)
    }

    /// Computes all pairwise commutators and their coordinates in the span.
    pub fn closure_check(&mut self) -> Result<Closure> {
        let n = self.dim();
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let br = bracket(&self.basis[i], &self.basis[j]);
                match self.coordinates(&br)? {
                    Some(v) => {
                        for k in 0..n {
                            c[j][i][k] = -&v[k];
                            c[i][j][k] = v[k].clone();
                        }
                    }
                    None => return Ok(Closure::NotClosed { pair: (i, j), residual: br }),
                }
            }
        }
        self.structure = Some(c.clone());
        Ok(Closure::Closed(c))
    }

    pub fn invariants(&mut self) -> Result<Invariants> {
        let c = match &self.structure {
            Some(c) => c.clone(),
            None => match self.closure_check()? {
                Closure::Closed(c) => c,
                Closure::NotClosed { pair, residual } => {
                    return Err(Error::Invalid(format!("span not closed: [b{}, b{}] = {} is outside", pair.0, pair.1, residual)))
                }
            },
        };
        Ok(invariants_from_structure(&c))
    }
}

/// Dimension, derived dimension, center dimension and Killing signature
/// from structure constants.
pub fn invariants_from_structure(c: &Structure) -> Invariants {
    let n = c.len();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            brackets.push(c[i][j].clone());
        }
    }
    let derived_dim = if brackets.is_empty() { 0 } else { linalg::rank(&brackets, n) };
    // Center: x with sum_i x_i c[i][j][k] = 0 for all j, k.
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| c[i][j][k].clone()).collect::<Vec<_>>());
        }
    }
    let center_dim = if n == 0 { 0 } else { n - linalg::rank(&rows, n) };
    // Killing form: K_ab = tr(ad_a ad_b), (ad_a)_{kj} = c[a][j][k].
    let mut kf = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut s = Rational::zero();
            for j in 0..n {
                for k in 0..n {
                    s += &c[a][j][k] * &c[b][k][j];
                }
            }
            kf[a][b] = s;
        }
    }
    Invariants { dim: n, derived_dim, center_dim, killing_signature: linalg::signature(&kf) }
}

/// Mutual containment of two spans.
pub fn subspace_equal(a: &LieAlgebraSpan, b: &LieAlgebraSpan) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    for q in &b.basis {
        if !a.contains(q)? {
            return Ok(false);
        }
    }
    for q in &a.basis {
        if !b.contains(q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational basis change `new_i = sum_j m[i][j] old_j`.
pub fn change_basis(span: &LieAlgebraSpan, m: &[Vec<Rational>]) -> Result<LieAlgebraSpan> {
    let basis = m
        .iter()
        .map(|row| VectorField::linear_combination(&span.basis, &row.iter().map(|q| crate::expr::Expr::constant(q.clone())).collect::<Vec<_>>()))
        .collect();
    LieAlgebraSpan::with_config(basis, span.cfg.clone())
}
