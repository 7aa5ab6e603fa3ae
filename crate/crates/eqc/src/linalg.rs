//! Exact dense linear algebra over the integers and rationals.
//!
//! Matrices here are desk-scale (tens of rows/columns), so everything is
//! plain Gauss-Jordan.  The integer path is fraction-free: rows are combined
//! with lcm multipliers and re-normalized by their gcd, so entries stay exact
//! integers throughout and kernel vectors come out primitive (content 1,
//! leading sign positive).  The rational path exists both for solving
//! inhomogeneous systems and as an independently-coded cross-check of the
//! integer kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn to_bigint_matrix(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_rational_matrix(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| row.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
        .collect()
}

/// Divides a row by the gcd of its entries (no-op for zero rows).
fn normalize_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free Gauss-Jordan over the integers.  Returns the reduced matrix
/// and the list of `(row, col)` pivot positions.
fn integer_echelon(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<(usize, usize)>) {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        normalize_row(&mut m[r]);
        let pivot = m[r][c].clone();
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let l = pivot.lcm(&m[i][c]);
            let fi = &l / &m[i][c];
            let fr = &l / &pivot;
            for j in 0..cols {
                m[i][j] = &m[i][j] * &fi - &m[r][j] * &fr;
            }
            normalize_row(&mut m[i]);
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, pivots)
}

/// Rank of an integer matrix.
pub fn integer_rank(a: &[Vec<BigInt>]) -> usize {
    integer_echelon(a).1.len()
}

/// Primitive integer basis of `{ v : a v = 0 }`, one vector per free column,
/// in free-column order.  Basis vectors have gcd 1 and positive entry at
/// their free column.
pub fn integer_kernel_basis(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (m, pivots) = integer_echelon(a);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        // v[f] = lcm of pivot values keeps the eliminated entries integral.
        let mut scale = BigInt::one();
        for &(r, c) in &pivots {
            if !m[r][f].is_zero() {
                scale = scale.lcm(&m[r][c]);
            }
        }
        let mut v = vec![BigInt::zero(); cols];
        v[f] = scale.clone();
        for &(r, c) in &pivots {
            if !m[r][f].is_zero() {
                // pivot * v[c] + m[r][f] * v[f] = 0
                v[c] = -(&m[r][f] * &scale) / &m[r][c];
            }
        }
        let mut g = BigInt::zero();
        for x in &v {
            g = g.gcd(x);
        }
        if g > BigInt::one() {
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form over the rationals; returns matrix and pivots.
fn rational_echelon(a: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<(usize, usize)>) {
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in 0..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                m[i][j] = &m[i][j] - &f * &m[r][j];
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, pivots)
}

/// Rational kernel basis (unit free-variable parametrization).  Independent
/// of [`integer_kernel_basis`] by construction; used to cross-check it.
pub fn rational_kernel_basis(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (m, pivots) = rational_echelon(a);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `a x = b` exactly.  Returns a particular solution (free variables
/// zero) or `None` when the system is inconsistent.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "dimension mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for j in 0..=cols {
            aug[r][j] = &aug[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            for j in 0..=cols {
                aug[i][j] = &aug[i][j] - &f * &aug[r][j];
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent when a zeroed-out row keeps a nonzero right-hand side.
    for i in pivots.len()..rows {
        if !aug[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Rank of a set of integer vectors (rows).
pub fn span_rank(vectors: &[Vec<i64>]) -> usize {
    integer_rank(&to_bigint_matrix(vectors))
}
