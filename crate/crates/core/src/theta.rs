//! Theta series of even positive definite lattices, automorphism counts,
//! level and character, and genus-weighted sums.

use crate::arith;
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::linalg;
use crate::qexpansion::{FourierExpansion, HalfIntegralMatrix, MAX_DEGREE};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `S ∈ Λ_m^+`, stored as the even integral matrix `2S`. Odd `m` is
/// accepted for counting purposes; level and character need `m` even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    two_s: HalfIntegralMatrix,
}

#[derive(Serialize, Deserialize)]
struct GramFile {
    m: usize,
    #[serde(rename = "twoS")]
    two_s: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn new(two_s: Vec<Vec<i64>>) -> Result<Self> {
        let two_s = HalfIntegralMatrix::new(two_s)?;
        if two_s.degree() == 0 {
            return Err(Error::InvalidArgument("empty Gram matrix".into()));
        }
        if !two_s.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(GramMatrix { two_s })
    }

    /// `S = c·1_m`, i.e. `2S = 2c·1_m`.
    pub fn scaled_identity(c: i64, m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| (0..m).map(|j| if i == j { 2 * c } else { 0 }).collect()).collect())
    }

    /// `ᵗU S U`.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Self> {
        let m = self.m();
        let a = self.two_s_rows();
        let mut out = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..m {
                out[i][j] = (0..m).map(|k| (0..m).map(|l| u[k][i] * a[k][l] * u[l][j]).sum::<i64>()).sum();
            }
        }
        Self::new(out)
    }

    pub fn m(&self) -> usize {
        self.two_s.degree()
    }

    pub fn two_s(&self) -> &HalfIntegralMatrix {
        &self.two_s
    }

    pub fn two_s_rows(&self) -> Vec<Vec<i64>> {
        self.two_s.rows()
    }

    /// `ᵗx (2S) y`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        let m = self.m();
        (0..m).map(|i| (0..m).map(|j| x[i] * self.two_s.twice(i, j) * y[j]).sum::<i64>()).sum()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: GramFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let g = Self::new(raw.two_s)?;
        if g.m() != raw.m {
            return Err(Error::Format(format!("m = {} but twoS has size {}", raw.m, g.m())));
        }
        Ok(g)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GramFile { m: self.m(), two_s: self.two_s_rows() }).expect("plain data")
    }
}

/// All `x ∈ Z^m` with `ᵗx (2S) x ≤ limit`, in lexicographic order.
pub fn short_vectors(s: &GramMatrix, limit: i64) -> Vec<Vec<i64>> {
    let m = s.m();
    let qd = linalg::quadratic_decomposition(&s.two_s_rows()).expect("positive definite");
    let mut out = Vec::new();
    let mut x = vec![0i64; m];
    fn recurse(
        i: usize,
        budget: &BigRational,
        x: &mut Vec<i64>,
        qd: &linalg::QuadraticDecomposition,
        out: &mut Vec<Vec<i64>>,
    ) {
        let m = x.len();
        let mut c = BigRational::zero();
        for j in (i + 1)..m {
            c += &qd.upper[i][j] * BigRational::from_integer(x[j].into());
        }
        let cost = |xi: i64| {
            let v = BigRational::from_integer(xi.into()) + &c;
            &qd.diag[i] * &v * &v
        };
        let centre = (-c.clone()).round().to_integer().to_i64().expect("small coordinates");
        let mut candidates = Vec::new();
        let mut xi = centre;
        while cost(xi) <= *budget {
            candidates.push(xi);
            xi += 1;
        }
        let mut xi = centre - 1;
        while cost(xi) <= *budget {
            candidates.push(xi);
            xi -= 1;
        }
        for xi in candidates {
            x[i] = xi;
            let rest = budget - cost(xi);
            if i == 0 {
                out.push(x.clone());
            } else {
                recurse(i - 1, &rest, x, qd, out);
            }
        }
        x[i] = 0;
    }
    if limit >= 0 {
        recurse(m - 1, &BigRational::from_integer(limit.into()), &mut x, &qd, &mut out);
    }
    out.sort();
    out
}

/// `θ_S^n` truncated at `B`: the coefficient of `T` counts
/// `X ∈ Z^{m×n}` with `S[X] = T`. Coefficients are tagged into
/// `Q(μ_{p−1})`.
pub fn theta_series(s: &GramMatrix, n: usize, bound: i64, p: u64) -> Result<FourierExpansion> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("degree {n} outside 1..={MAX_DEGREE}")));
    }
    let field = CyclotomicField::for_prime(p)?;
    let vectors = short_vectors(s, 2 * bound);
    // Gram entries between short vectors, computed once
    let gram: Vec<Vec<i64>> = vectors.iter().map(|x| vectors.iter().map(|y| s.pairing(x, y)).collect()).collect();
    let partials: Vec<BTreeMap<HalfIntegralMatrix, u64>> = (0..vectors.len())
        .into_par_iter()
        .map(|first| {
            let mut counts = BTreeMap::new();
            let mut cols = vec![first];
            fn extend(
                n: usize,
                cols: &mut Vec<usize>,
                gram: &[Vec<i64>],
                total: usize,
                counts: &mut BTreeMap<HalfIntegralMatrix, u64>,
            ) {
                if cols.len() == n {
                    let rows: Vec<Vec<i64>> = cols.iter().map(|&a| cols.iter().map(|&b| gram[a][b]).collect()).collect();
                    let t = HalfIntegralMatrix::new(rows).expect("Gram matrix of an even lattice");
                    *counts.entry(t).or_insert(0) += 1;
                    return;
                }
                for next in 0..total {
                    cols.push(next);
                    extend(n, cols, gram, total, counts);
                    cols.pop();
                }
            }
            extend(n, &mut cols, &gram, vectors.len(), &mut counts);
            counts
        })
        .collect();
    let mut merged: BTreeMap<HalfIntegralMatrix, u64> = BTreeMap::new();
    for part in partials {
        for (t, c) in part {
            *merged.entry(t).or_insert(0) += c;
        }
    }
    let mut f = FourierExpansion::zero(p, n, bound)?;
    for (t, c) in merged {
        f.set(t, field.integer(c))?;
    }
    Ok(f)
}

/// `ε(S) = #{U ∈ GL_m(Z) : ᵗUSU = S}`.
pub fn aut_count(s: &GramMatrix) -> u64 {
    let m = s.m();
    let a = s.two_s_rows();
    let max_norm = (0..m).map(|i| a[i][i]).max().unwrap_or(0);
    let vectors = short_vectors(s, max_norm);
    // candidates[j]: vectors with the norm of e_j
    let candidates: Vec<Vec<usize>> = (0..m)
        .map(|j| (0..vectors.len()).filter(|&v| s.pairing(&vectors[v], &vectors[v]) == a[j][j]).collect())
        .collect();
    fn count(j: usize, chosen: &mut Vec<usize>, s: &GramMatrix, a: &[Vec<i64>], vectors: &[Vec<i64>], candidates: &[Vec<usize>]) -> u64 {
        if j == a.len() {
            return 1;
        }
        let mut total = 0;
        for &v in &candidates[j] {
            if chosen.iter().enumerate().all(|(i, &w)| s.pairing(&vectors[w], &vectors[v]) == a[i][j]) {
                chosen.push(v);
                total += count(j + 1, chosen, s, a, vectors, candidates);
                chosen.pop();
            }
        }
        total
    }
    count(0, &mut Vec::new(), s, &a, &vectors, &candidates)
}

/// Kronecker character `n ↦ (D/n)` of a discriminant `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticCharacter {
    pub discriminant: i64,
}

impl QuadraticCharacter {
    pub fn value(&self, n: u64) -> i32 {
        arith::kronecker(self.discriminant, n)
    }
}

/// Level `L` (least `L` with `L·(2S)^{−1}` even integral) and the character
/// of discriminant `(−1)^{m/2} det(2S)`.
pub fn level_and_char(s: &GramMatrix) -> Result<(u64, QuadraticCharacter)> {
    let a = s.two_s_rows();
    let m = a.len();
    if m % 2 != 0 {
        return Err(Error::InvalidArgument(format!("level and character need even m, got {m}")));
    }
    let inv = linalg::inverse(&a).expect("positive definite");
    let mut level = BigInt::one();
    for i in 0..m {
        for j in 0..m {
            let entry = if i == j { &inv[i][i] / BigRational::from_integer(2.into()) } else { inv[i][j].clone() };
            level = level.lcm(entry.denom());
        }
    }
    let det = linalg::determinant(&a);
    let sign = BigInt::from(if (m / 2) % 2 == 0 { 1 } else { -1 });
    let discriminant = (det * sign).to_i64().expect("small determinant");
    Ok((level.to_u64().expect("small level"), QuadraticCharacter { discriminant }))
}

/// `Σ_S (1/ε(S)) θ_S^n` over the supplied genus representatives.
pub fn genus_theta(reps: &[GramMatrix], n: usize, bound: i64, p: u64) -> Result<FourierExpansion> {
    let mut acc = FourierExpansion::zero(p, n, bound)?;
    if let Some(first) = reps.first() {
        if let Some(bad) = reps.iter().find(|s| s.m() != first.m()) {
            return Err(Error::InvalidArgument(format!("genus representatives of sizes {} and {}", first.m(), bad.m())));
        }
    }
    let field = CyclotomicField::for_prime(p)?;
    for s in reps {
        let weight = field.rational(&BigRational::new(BigInt::one(), BigInt::from(aut_count(s))));
        acc = acc.add(&theta_series(s, n, bound, p)?.scale(&weight))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_i2() -> GramMatrix {
        GramMatrix::scaled_identity(2, 2).unwrap()
    }

    #[test]
    fn degree_one_counts() {
        let th = theta_series(&two_i2(), 1, 8, 5).unwrap();
        let f = th.field();
        assert_eq!(th.coeff1(0), f.one());
        assert_eq!(th.coeff1(2), f.integer(4));
        assert_eq!(th.coeff1(4), f.integer(4));
        assert_eq!(th.coeff1(6), f.zero());
        assert_eq!(th.coeff1(8), f.integer(4));
    }

    #[test]
    fn automorphisms() {
        assert_eq!(aut_count(&GramMatrix::scaled_identity(2, 1).unwrap()), 2);
        assert_eq!(aut_count(&two_i2()), 8);
        assert_eq!(aut_count(&GramMatrix::scaled_identity(1, 4).unwrap()), 384);
        let a2 = GramMatrix::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(aut_count(&a2), 12);
    }

    #[test]
    fn levels() {
        let a2 = GramMatrix::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        let (l, chi) = level_and_char(&a2).unwrap();
        assert_eq!((l, chi.discriminant), (3, -3));
        let z2 = GramMatrix::scaled_identity(1, 2).unwrap();
        let (l, chi) = level_and_char(&z2).unwrap();
        assert_eq!((l, chi.discriminant), (4, -4));
        assert_eq!(chi.value(1), 1);
        assert_eq!(chi.value(3), -1);
    }

    #[test]
    fn rejects_bad_gram() {
        assert!(GramMatrix::new(vec![vec![0]]).is_err());
        assert!(level_and_char(&GramMatrix::new(vec![vec![2]]).unwrap()).is_err());
        assert_eq!(GramMatrix::new(vec![vec![2, 3], vec![3, 2]]), Err(Error::NotPositiveDefinite));
        assert!(GramMatrix::from_json_str(r#"{"m":2,"twoS":[[2,1],[1,2]]}"#).is_ok());
        assert!(GramMatrix::from_json_str(r#"{"m":4,"twoS":[[2,1],[1,2]]}"#).is_err());
    }

    #[test]
    fn genus_weights() {
        let g = genus_theta(&[two_i2()], 1, 4, 5).unwrap();
        assert_eq!(g.coeff1(0).to_rational().unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(genus_theta(&[], 1, 4, 5).unwrap().support_len(), 0);
        let mixed = [two_i2(), GramMatrix::scaled_identity(1, 4).unwrap()];
        assert!(genus_theta(&mixed, 1, 2, 5).is_err());
    }

    #[test]
    fn short_vectors_match_box_search() {
        let s = GramMatrix::new(vec![vec![4, 1], vec![1, 6]]).unwrap();
        let fast = short_vectors(&s, 30);
        let mut slow = Vec::new();
        for x in -10..=10i64 {
            for y in -10..=10i64 {
                if s.pairing(&[x, y], &[x, y]) <= 30 {
                    slow.push(vec![x, y]);
                }
            }
        }
        slow.sort();
        assert_eq!(fast, slow);
    }
}
