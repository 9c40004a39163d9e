//! Exact linear algebra on small integer symmetric matrices.
//!
//! Everything here works over `BigRational`; no floating point is used, so
//! definiteness verdicts and enumeration bounds are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

fn to_rational(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Classifies a symmetric integer matrix by an LDLᵀ decomposition with
/// symmetric (largest remaining diagonal) pivoting.
pub fn definiteness(a: &[Vec<i64>]) -> Definiteness {
    let n = a.len();
    let mut m = to_rational(a);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &k) = active
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| m[i][i].cmp(&m[j][j]))
            .unwrap();
        let pivot = m[k][k].clone();
        if pivot.is_negative() {
            return Definiteness::Indefinite;
        }
        if pivot.is_zero() {
            // a PSD matrix with zero diagonal is zero
            let all_zero = active
                .iter()
                .all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            return if all_zero {
                Definiteness::PositiveSemidefinite
            } else {
                Definiteness::Indefinite
            };
        }
        active.remove(pos);
        for &i in &active {
            let f = &m[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let delta = &f * &m[k][j];
                m[i][j] -= delta;
            }
        }
    }
    Definiteness::PositiveDefinite
}

pub fn is_positive_semidefinite(a: &[Vec<i64>]) -> bool {
    definiteness(a) != Definiteness::Indefinite
}

pub fn is_positive_definite(a: &[Vec<i64>]) -> bool {
    definiteness(a) == Definiteness::PositiveDefinite
}

/// Rank over Q.
pub fn rank(a: &[Vec<i64>]) -> usize {
    let mut m = to_rational(a);
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..cols {
                let delta = &f * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = ((k + 1)..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse over Q, `None` when singular.
pub fn inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m = to_rational(a);
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        inv.swap(c, piv);
        let p = m[c][c].clone();
        for j in 0..n {
            m[c][j] = &m[c][j] / &p;
            inv[c][j] = &inv[c][j] / &p;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..n {
                let d1 = &f * &m[c][j];
                m[i][j] -= d1;
                let d2 = &f * &inv[c][j];
                inv[i][j] -= d2;
            }
        }
    }
    Some(inv)
}

/// Decomposition `Q(x) = Σ_i d_i (x_i + Σ_{j>i} u_ij x_j)^2` of a positive
/// definite form, as used by Fincke–Pohst style enumeration.
#[derive(Debug, Clone)]
pub struct QuadraticDecomposition {
    pub diag: Vec<BigRational>,
    pub upper: Vec<Vec<BigRational>>,
}

pub fn quadratic_decomposition(a: &[Vec<i64>]) -> Option<QuadraticDecomposition> {
    let n = a.len();
    let mut m = to_rational(a);
    let mut diag = Vec::with_capacity(n);
    let mut upper = vec![vec![BigRational::zero(); n]; n];
    for k in 0..n {
        let d = m[k][k].clone();
        if !d.is_positive() {
            return None;
        }
        for j in (k + 1)..n {
            upper[k][j] = &m[k][j] / &d;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let delta = &upper[k][i] * &m[k][j];
                m[i][j] -= delta;
            }
        }
        diag.push(d);
    }
    Some(QuadraticDecomposition { diag, upper })
}
