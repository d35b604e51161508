//! Exact and floating-point linear algebra on dense matrices: fraction-free
//! elimination over the integers, nullspaces, and congruence diagonalization
//! of symmetric rational matrices.

use crate::expr::Rational;
use astro_float_num::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Fraction-free (Bareiss) row echelon form. Returns the nonzero rows and
/// the pivot columns.
pub fn bareiss_echelon(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss_echelon(rows, ncols).1.len()
}

/// Basis of `{ v : A v = 0 }`, one vector per free column, each with a 1 in
/// its free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (ech, pivots) = bareiss_echelon(rows, ncols);
    let ech: Vec<Vec<Rational>> = ech.into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[fc] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in pc + 1..ncols {
                if !v[j].is_zero() && !ech[i][j].is_zero() {
                    s += &ech[i][j] * &v[j];
                }
            }
            v[pc] = -s / &ech[i][pc];
        }
        out.push(v);
    }
    out
}

/// Gaussian elimination with partial pivoting; entries below `tol` times the
/// largest absolute entry count as zero. Returns the reduced row echelon
/// rows and pivot columns.
pub fn float_rref(rows: &[Vec<f64>], ncols: usize, tol: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let eps = tol * scale;
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let (p, best) = (r..nrows).map(|i| (i, a[i][c].abs())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= eps {
            for row in a.iter_mut().skip(r) {
                row[c] = 0.0;
            }
            continue;
        }
        a.swap(r, p);
        let pv = a[r][c];
        for j in c..ncols {
            a[r][j] /= pv;
        }
        for i in 0..nrows {
            if i != r {
                let factor = a[i][c];
                if factor != 0.0 {
                    for j in c..ncols {
                        let d = factor * a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn float_nullspace(rows: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    let (a, pivots) = float_rref(rows, ncols, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0.0; ncols];
            v[fc] = 1.0;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][fc];
            }
            v
        })
        .collect()
}

const RM: RoundingMode = RoundingMode::ToEven;

fn log2_mag(v: &BigFloat) -> i64 {
    if v.is_zero() {
        i64::MIN
    } else {
        v.exponent().map(|e| e as i64).unwrap_or(i64::MIN)
    }
}

// `abs_cmp` misorders zero operands, so zeros are screened first.
fn abs_greater(a: &BigFloat, b: &BigFloat) -> bool {
    match (a.is_zero(), b.is_zero()) {
        (true, _) => false,
        (false, true) => true,
        _ => a.abs_cmp(b).is_some_and(|o| o > 0),
    }
}

/// Reduced row echelon form in `p`-bit binary floating point. Entries with
/// magnitude below `2^rel_tol_log2` times the largest entry count as zero.
pub fn bigfloat_rref(rows: &[Vec<BigFloat>], ncols: usize, p: usize, rel_tol_log2: i64) -> (Vec<Vec<BigFloat>>, Vec<usize>) {
    let mut a: Vec<Vec<BigFloat>> = rows.to_vec();
    let scale = a.iter().flatten().map(log2_mag).max().unwrap_or(i64::MIN);
    if scale == i64::MIN {
        return (vec![], vec![]);
    }
    let eps = scale + rel_tol_log2;
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut p_row = r;
        for i in r + 1..nrows {
            if abs_greater(&a[i][c], &a[p_row][c]) {
                p_row = i;
            }
        }
        if log2_mag(&a[p_row][c]) < eps {
            continue;
        }
        a.swap(r, p_row);
        let pv = a[r][c].clone();
        for j in c..ncols {
            a[r][j] = a[r][j].div(&pv, p, RM);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || log2_mag(&row[c]) == i64::MIN {
                continue;
            }
            let factor = row[c].clone();
            for j in c..ncols {
                row[j] = row[j].sub(&factor.mul(&pivot_row[j], p, RM), p, RM);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Nullspace basis from [`bigfloat_rref`], one vector per free column.
pub fn bigfloat_nullspace(rows: &[Vec<BigFloat>], ncols: usize, p: usize, rel_tol_log2: i64) -> Vec<Vec<BigFloat>> {
    let (a, pivots) = bigfloat_rref(rows, ncols, p, rel_tol_log2);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![BigFloat::from_u64(0, p); ncols];
            v[fc] = BigFloat::from_u64(1, p);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = a[i][fc].neg();
            }
            v
        })
        .collect()
}

/// Signature `(positive, zero, negative)` of a symmetric rational matrix,
/// by symmetric Gaussian elimination (congruence).
pub fn signature(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut k: Vec<Vec<Rational>> = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    for i in 0..n {
        if k[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !k[j][j].is_zero()) {
                k.swap(i, j);
                for row in k.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !k[i][j].is_zero()) {
                // Row/column i += row/column j makes the diagonal 2 k_ij.
                for c in 0..n {
                    let v = k[j][c].clone();
                    k[i][c] += v;
                }
                for r in 0..n {
                    let v = k[r][j].clone();
                    k[r][i] += v;
                }
            } else {
                continue;
            }
        }
        let d = k[i][i].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in i + 1..n {
            let factor = &k[r][i] / &d;
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &factor * &k[i][c];
                k[r][c] -= v;
            }
            for rr in 0..n {
                let v = &factor * &k[rr][i];
                k[rr][r] -= v;
            }
        }
    }
    (pos, n - pos - neg, neg)
}
