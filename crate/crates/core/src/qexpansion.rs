//! Truncated Fourier expansions `Σ a(T) q^T` of degree `n ≤ 3`, indexed by
//! positive semidefinite half-integral matrices `T` with every diagonal
//! entry at most the bound `B`.
//!
//! All valuations and congruences here are statements about the stored
//! coefficients only; nothing beyond the bound is known.

use crate::cyclotomic::{valuation, CyclotomicField, CyclotomicNumber, IdealBranch, Valuation};
use crate::error::{Error, Result};
use crate::linalg;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_DEGREE: usize = 3;

/// `T ∈ Λ_n`, stored as the integer matrix `2T` (even diagonal).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntegralMatrix {
    n: usize,
    twice: Vec<i64>,
}

impl HalfIntegralMatrix {
    pub fn new(twice: Vec<Vec<i64>>) -> Result<Self> {
        let n = twice.len();
        if twice.iter().any(|row| row.len() != n) {
            return Err(Error::Format("matrix is not square".into()));
        }
        for i in 0..n {
            if twice[i][i] % 2 != 0 {
                return Err(Error::Format(format!("diagonal entry {} of 2T is odd", twice[i][i])));
            }
            for j in 0..i {
                if twice[i][j] != twice[j][i] {
                    return Err(Error::Format("matrix is not symmetric".into()));
                }
            }
        }
        Ok(HalfIntegralMatrix { n, twice: twice.into_iter().flatten().collect() })
    }

    /// The `1×1` matrix `(t)`.
    pub fn scalar(t: i64) -> Self {
        HalfIntegralMatrix { n: 1, twice: vec![2 * t] }
    }

    pub fn zero(n: usize) -> Self {
        HalfIntegralMatrix { n, twice: vec![0; n * n] }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Entry `(2T)_{ij}`.
    pub fn twice(&self, i: usize, j: usize) -> i64 {
        self.twice[i * self.n + j]
    }

    /// Diagonal entry `t_ii`.
    pub fn diag(&self, i: usize) -> i64 {
        self.twice(i, i) / 2
    }

    pub fn max_diag(&self) -> i64 {
        (0..self.n).map(|i| self.diag(i)).max().unwrap_or(0)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.twice.chunks(self.n.max(1)).map(|c| c.to_vec()).take(self.n).collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        linalg::is_positive_semidefinite(&self.rows())
    }

    pub fn is_positive_definite(&self) -> bool {
        linalg::is_positive_definite(&self.rows())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        HalfIntegralMatrix {
            n: self.n,
            twice: self.twice.iter().zip(&other.twice).map(|(a, b)| a + b).collect(),
        }
    }

    /// `T ≡ T₀ mod R`: off-diagonal entries of `2T` agree mod `R` and
    /// diagonal entries of `T` agree mod `R`. This is exactly the condition
    /// `tr((T − T₀) J) ∈ R·Z` for every integral symmetric `J`.
    pub fn congruent_mod(&self, other: &Self, r: i64) -> bool {
        assert_eq!(self.n, other.n);
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let diff = if i == j {
                    self.diag(i) - other.diag(i)
                } else {
                    self.twice(i, j) - other.twice(i, j)
                };
                diff.rem_euclid(r) == 0
            })
        })
    }

    /// `tr(2T·S)` for `S` given as `2S`; always an integer.
    pub fn trace_pairing(&self, other: &Self) -> i64 {
        assert_eq!(self.n, other.n);
        let mut acc = 0i64;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.twice(i, j) * other.twice(j, i);
            }
        }
        debug_assert_eq!(acc % 2, 0);
        acc / 2
    }
}

impl fmt::Debug for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2T={:?}", self.rows())
    }
}

/// Non-negativity of every principal minor of a symmetric integer matrix.
fn principal_minors_nonnegative(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect();
        if linalg::determinant(&sub).is_negative() {
            return false;
        }
    }
    true
}

/// Every positive semidefinite `T ∈ Λ_n` with diagonal entries `≤ bound`,
/// in canonical (lexicographic on `2T`) order.
pub fn enumerate_psd(n: usize, bound: i64) -> Vec<HalfIntegralMatrix> {
    fn fill_offdiag(pos: usize, cells: &[(usize, usize)], m: &mut Vec<Vec<i64>>, out: &mut Vec<HalfIntegralMatrix>) {
        if pos == cells.len() {
            if principal_minors_nonnegative(m) {
                out.push(HalfIntegralMatrix::new(m.clone()).expect("symmetric with even diagonal"));
            }
            return;
        }
        let (i, j) = cells[pos];
        // 2x2 minor: (2t_ij)^2 <= (2t_ii)(2t_jj)
        let cap = m[i][i] * m[j][j];
        let mut lim = 0i64;
        while (lim + 1) * (lim + 1) <= cap {
            lim += 1;
        }
        for v in -lim..=lim {
            m[i][j] = v;
            m[j][i] = v;
            fill_offdiag(pos + 1, cells, m, out);
        }
        m[i][j] = 0;
        m[j][i] = 0;
    }

    let mut out = Vec::new();
    if n == 0 || bound < 0 {
        return out;
    }
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut m = vec![vec![0i64; n]; n];
    let mut diag = vec![0i64; n];
    loop {
        for i in 0..n {
            m[i][i] = 2 * diag[i];
        }
        fill_offdiag(0, &cells, &mut m, &mut out);
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            if diag[k] < bound {
                diag[k] += 1;
                for d in diag.iter_mut().skip(k + 1) {
                    *d = 0;
                }
                break;
            }
        }
    }
}

/// A truncated expansion with coefficients in `Q(μ_{p−1})`. Only nonzero
/// coefficients are stored; absent in-range indices are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct FourierExpansion {
    p: u64,
    degree: usize,
    bound: i64,
    coeffs: BTreeMap<HalfIntegralMatrix, CyclotomicNumber>,
    complete: bool,
}

impl fmt::Debug for FourierExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierExpansion")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("bound", &self.bound)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl FourierExpansion {
    pub fn zero(p: u64, degree: usize, bound: i64) -> Result<Self> {
        CyclotomicField::for_prime(p)?;
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("degree {degree} outside 1..={MAX_DEGREE}")));
        }
        if bound < 0 {
            return Err(Error::InvalidArgument("negative bound".into()));
        }
        Ok(FourierExpansion { p, degree, bound, coeffs: BTreeMap::new(), complete: true })
    }

    /// The constant `c` (coefficient at `T = 0`).
    pub fn constant(c: CyclotomicNumber, degree: usize, bound: i64) -> Result<Self> {
        let mut f = Self::zero(c.p(), degree, bound)?;
        f.set(HalfIntegralMatrix::zero(degree), c)?;
        Ok(f)
    }

    /// Degree-1 expansion `Σ c_t q^t`, bound `len − 1`.
    pub fn from_degree1(p: u64, coeffs: Vec<CyclotomicNumber>) -> Result<Self> {
        let bound = coeffs.len() as i64 - 1;
        let mut f = Self::zero(p, 1, bound.max(0))?;
        for (t, c) in coeffs.into_iter().enumerate() {
            f.set(HalfIntegralMatrix::scalar(t as i64), c)?;
        }
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &'static CyclotomicField {
        CyclotomicField::for_prime(self.p).expect("validated at construction")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn mark_incomplete(&mut self) {
        self.complete = false;
    }

    /// Nonzero coefficients in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&HalfIntegralMatrix, &CyclotomicNumber)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn in_range(&self, t: &HalfIntegralMatrix) -> bool {
        t.degree() == self.degree && t.max_diag() <= self.bound && t.is_positive_semidefinite()
    }

    pub fn coeff(&self, t: &HalfIntegralMatrix) -> CyclotomicNumber {
        self.coeffs.get(t).cloned().unwrap_or_else(|| self.field().zero())
    }

    /// Degree-1 coefficient `c_t`.
    pub fn coeff1(&self, t: i64) -> CyclotomicNumber {
        self.coeff(&HalfIntegralMatrix::scalar(t))
    }

    /// `c_0..c_B` of a degree-1 expansion.
    pub fn degree1_coeffs(&self) -> Vec<CyclotomicNumber> {
        assert_eq!(self.degree, 1);
        (0..=self.bound).map(|t| self.coeff1(t)).collect()
    }

    pub fn set(&mut self, t: HalfIntegralMatrix, c: CyclotomicNumber) -> Result<()> {
        if c.p() != self.p {
            return Err(Error::FieldMismatch { left: self.p, right: c.p() });
        }
        if t.degree() != self.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: t.degree() });
        }
        if !self.in_range(&t) {
            return Err(Error::InvalidArgument(format!("{t:?} is outside the truncation or not semidefinite")));
        }
        if c.is_zero() {
            self.coeffs.remove(&t);
        } else {
            self.coeffs.insert(t, c);
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, t: HalfIntegralMatrix, c: CyclotomicNumber) {
        if !c.is_zero() {
            self.coeffs.insert(t, c);
        }
    }

    fn accumulate(&mut self, t: HalfIntegralMatrix, c: &CyclotomicNumber) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&t) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.coeffs.remove(&t);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(t, c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch { left: self.p, right: other.p });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        Ok(())
    }

    /// Restriction to a smaller bound.
    pub fn truncate(&self, bound: i64) -> Self {
        let bound = bound.min(self.bound);
        FourierExpansion {
            p: self.p,
            degree: self.degree,
            bound,
            coeffs: self.coeffs.iter().filter(|(t, _)| t.max_diag() <= bound).map(|(t, c)| (t.clone(), c.clone())).collect(),
            complete: self.complete,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = self.truncate(bound);
        out.complete &= other.complete;
        for (t, c) in other.coeffs.iter().filter(|(t, _)| t.max_diag() <= bound) {
            out.accumulate(t.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn map(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        let mut out = FourierExpansion { coeffs: BTreeMap::new(), ..self.clone() };
        for (t, c) in &self.coeffs {
            out.insert_unchecked(t.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        self.map(|x| x * c)
    }

    /// Coefficientwise complex conjugation `F ↦ F^ρ`.
    pub fn conj(&self) -> Self {
        self.map(CyclotomicNumber::conj)
    }

    /// Cauchy product; every coefficient up to the smaller bound is exact.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = FourierExpansion::zero(self.p, self.degree, bound)?;
        out.complete = self.complete && other.complete;
        let left: Vec<_> = self.coeffs.iter().filter(|(t, _)| t.max_diag() <= bound).collect();
        let right: Vec<_> = other.coeffs.iter().filter(|(t, _)| t.max_diag() <= bound).collect();
        let mut acc: BTreeMap<HalfIntegralMatrix, CyclotomicNumber> = BTreeMap::new();
        for (t1, c1) in &left {
            for (t2, c2) in &right {
                let t = t1.add(t2);
                if t.max_diag() > bound {
                    continue;
                }
                let prod = *c1 * *c2;
                match acc.get_mut(&t) {
                    Some(v) => *v = &*v + &prod,
                    None => {
                        acc.insert(t, prod);
                    }
                }
            }
        }
        for (t, c) in acc {
            out.insert_unchecked(t, c);
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let one = self.field().one();
        let mut acc = FourierExpansion::constant(one, self.degree, self.bound)?;
        acc.complete = self.complete;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.values().all(CyclotomicNumber::is_rational)
    }

    /// Moves an expansion with rational coefficients into `Q(μ_{q−1})`.
    pub fn retag(&self, q: u64) -> Result<Self> {
        let field = CyclotomicField::for_prime(q)?;
        let mut out = FourierExpansion::zero(q, self.degree, self.bound)?;
        out.complete = self.complete;
        for (t, c) in &self.coeffs {
            let r = c.to_rational().ok_or_else(|| Error::InvalidArgument("coefficients are not rational".into()))?;
            out.insert_unchecked(t.clone(), field.rational(&r));
        }
        Ok(out)
    }

    pub fn rational_coeffs(&self) -> Option<BTreeMap<HalfIntegralMatrix, BigRational>> {
        self.coeffs.iter().map(|(t, c)| c.to_rational().map(|r| (t.clone(), r))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QexpFile::from(self)).expect("plain data")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&QexpFile::from(self)).expect("plain data")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: QexpFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        raw.try_into()
    }
}

/// `ν_𝔭(F)`: minimum valuation over the stored coefficients.
pub fn nu(f: &FourierExpansion, b: &IdealBranch) -> Result<Valuation> {
    if !f.complete {
        return Err(Error::IncompleteExpansion);
    }
    let mut best = Valuation::Infinite;
    for c in f.coeffs.values() {
        best = best.min(valuation(c, b)?);
    }
    Ok(best)
}

/// `F ≡ G mod 𝔭^r` on the common bound.
pub fn congruent(f: &FourierExpansion, g: &FourierExpansion, b: &IdealBranch, r: i64) -> Result<bool> {
    Ok(nu(&f.sub(g)?, b)? >= Valuation::Finite(r))
}

/// `F^{(R,T₀)}` on the Fourier side: keeps the coefficients with
/// `T ≡ T₀ mod R`.
pub fn sieve(f: &FourierExpansion, r: i64, t0: &HalfIntegralMatrix) -> Result<FourierExpansion> {
    if r < 1 {
        return Err(Error::InvalidArgument("R must be positive".into()));
    }
    if t0.degree() != f.degree {
        return Err(Error::DegreeMismatch { left: f.degree, right: t0.degree() });
    }
    let mut out = FourierExpansion { coeffs: BTreeMap::new(), ..f.clone() };
    for (t, c) in f.coeffs.iter().filter(|(t, _)| t.congruent_mod(t0, r)) {
        out.insert_unchecked(t.clone(), c.clone());
    }
    Ok(out)
}

/// Largest index `t` of the specialization that only involves stored `T`.
pub fn specialization_bound(bound: i64, s0: &HalfIntegralMatrix) -> Result<i64> {
    let inv = linalg::inverse(&s0.rows()).ok_or(Error::NotPositiveDefinite)?;
    // t_jj ≤ (t/2)(S₀^{−1})_jj = t·((2S₀)^{−1})_jj
    let mut best: Option<i64> = None;
    for (j, row) in inv.iter().enumerate() {
        let w = &row[j];
        let lim = (BigRational::from_integer(bound.into()) / w).floor().to_integer();
        let lim: i64 = (&lim).try_into().map_err(|_| Error::InvalidArgument("bound overflow".into()))?;
        best = Some(best.map_or(lim, |b: i64| b.min(lim)));
    }
    Ok(best.unwrap_or(0))
}

/// Degree-1 integral extract `b(t) = Σ_{tr(2T·S₀) = t} a(T)` along a
/// positive definite `S₀` (given as `2S₀`).
pub fn specialize(f: &FourierExpansion, s0: &HalfIntegralMatrix) -> Result<FourierExpansion> {
    if s0.degree() != f.degree {
        return Err(Error::DegreeMismatch { left: f.degree, right: s0.degree() });
    }
    if !s0.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let out_bound = specialization_bound(f.bound, s0)?;
    let mut out = FourierExpansion::zero(f.p, 1, out_bound)?;
    out.complete = f.complete;
    for (t, c) in &f.coeffs {
        let idx = t.trace_pairing(s0);
        if idx <= out_bound {
            out.accumulate(HalfIntegralMatrix::scalar(idx), c);
        }
    }
    Ok(out)
}

/// Minimum valuation of the coefficients of each rank `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularProfile {
    pub branch_d: u64,
    pub r: i64,
    pub by_rank: Vec<Valuation>,
}

impl SingularProfile {
    fn nonvanishing(&self, rank: usize) -> bool {
        self.by_rank[rank] < Valuation::Finite(self.r)
    }

    /// Rank `ρ` with every coefficient of rank `< ρ` vanishing mod `𝔭^r` and
    /// some coefficient of rank `ρ` not vanishing (literal reading).
    pub fn p_rank_below(&self) -> Option<usize> {
        (0..self.by_rank.len()).find(|&rho| self.nonvanishing(rho))
    }

    /// Rank `ρ` with every coefficient of rank `> ρ` vanishing mod `𝔭^r` and
    /// some coefficient of rank `ρ` not vanishing (standard reading).
    pub fn p_rank_above(&self) -> Option<usize> {
        (0..self.by_rank.len()).rev().find(|&rho| self.nonvanishing(rho))
    }
}

pub fn singular_profile(f: &FourierExpansion, b: &IdealBranch, r: i64) -> Result<SingularProfile> {
    if !f.complete {
        return Err(Error::IncompleteExpansion);
    }
    let mut by_rank = vec![Valuation::Infinite; f.degree + 1];
    for (t, c) in &f.coeffs {
        let rho = t.rank();
        by_rank[rho] = by_rank[rho].min(valuation(c, b)?);
    }
    Ok(SingularProfile { branch_d: b.d(), r, by_rank })
}

#[derive(Serialize, Deserialize)]
struct QexpCoeff {
    #[serde(rename = "twiceT")]
    twice_t: Vec<Vec<i64>>,
    #[serde(with = "crate::json::big_vec")]
    num: Vec<BigInt>,
    #[serde(with = "crate::json::big")]
    den: BigInt,
}

/// On-disk `qexp-v1` layout.
#[derive(Serialize, Deserialize)]
struct QexpFile {
    format: String,
    p: u64,
    degree: usize,
    bound: i64,
    coeffs: Vec<QexpCoeff>,
}

pub const QEXP_FORMAT: &str = "qexp-v1";

impl From<&FourierExpansion> for QexpFile {
    fn from(f: &FourierExpansion) -> Self {
        QexpFile {
            format: QEXP_FORMAT.into(),
            p: f.p,
            degree: f.degree,
            bound: f.bound,
            coeffs: f
                .coeffs
                .iter()
                .map(|(t, c)| QexpCoeff { twice_t: t.rows(), num: c.num().to_vec(), den: c.den().clone() })
                .collect(),
        }
    }
}

impl TryFrom<QexpFile> for FourierExpansion {
    type Error = Error;

    fn try_from(raw: QexpFile) -> Result<Self> {
        if raw.format != QEXP_FORMAT {
            return Err(Error::Format(format!("unknown format {:?}", raw.format)));
        }
        let mut f = FourierExpansion::zero(raw.p, raw.degree, raw.bound)?;
        for c in raw.coeffs {
            let t = HalfIntegralMatrix::new(c.twice_t)?;
            if t.degree() != raw.degree {
                return Err(Error::DegreeMismatch { left: raw.degree, right: t.degree() });
            }
            if f.coeffs.contains_key(&t) {
                return Err(Error::Format(format!("duplicate coefficient for {t:?}")));
            }
            if c.den.is_zero() || c.den.is_negative() {
                return Err(Error::Format("denominator must be positive".into()));
            }
            let value = CyclotomicNumber::from_parts(raw.p, c.num, c.den)?;
            f.set(t, value)?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: u64, v: &[i64]) -> FourierExpansion {
        let f = CyclotomicField::for_prime(p).unwrap();
        FourierExpansion::from_degree1(p, v.iter().map(|&c| f.integer(c)).collect()).unwrap()
    }

    #[test]
    fn psd_enumeration_counts() {
        // degree 1: 0..=B
        assert_eq!(enumerate_psd(1, 4).len(), 5);
        // degree 2, B = 1: diag (0,0):1, (0,1),(1,0): 1 each, (1,1): 2T off in -2..=2 → 5
        assert_eq!(enumerate_psd(2, 1).len(), 8);
        for t in enumerate_psd(3, 2) {
            assert!(t.is_positive_semidefinite());
        }
        let all = enumerate_psd(2, 2);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn psd_enumeration_matches_ldl() {
        // brute force over the box of 2T entries
        let b = 2i64;
        let mut count = 0;
        for a in 0..=b {
            for c in 0..=b {
                for o in -2 * b..=2 * b {
                    let m = vec![vec![2 * a, o], vec![o, 2 * c]];
                    if linalg::is_positive_semidefinite(&m) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(enumerate_psd(2, b).len(), count);
    }

    #[test]
    fn products() {
        let one_plus_q = ints(5, &[1, 1, 0, 0]);
        let sq = one_plus_q.mul(&one_plus_q).unwrap();
        assert_eq!(sq, ints(5, &[1, 2, 1, 0]));
        let one = ints(5, &[1, 0, 0, 0]);
        assert_eq!(sq.mul(&one).unwrap(), sq);
        assert_eq!(one_plus_q.pow(3).unwrap(), ints(5, &[1, 3, 3, 1]));
        let short = ints(5, &[1, 1]);
        assert_eq!(short.mul(&sq).unwrap().bound(), 1);
        let other = ints(7, &[1]);
        assert!(matches!(short.mul(&other), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn nu_and_congruence() {
        let b = IdealBranch::new(5, 2).unwrap();
        let f = ints(5, &[1, 3, 0, 10]);
        assert_eq!(nu(&f, &b).unwrap(), Valuation::Finite(0));
        let five = f.field().integer(5);
        assert_eq!(nu(&f.scale(&five), &b).unwrap(), Valuation::Finite(1));
        assert!(congruent(&f, &f, &b, 100).unwrap());
        let g = ints(5, &[1, 8, 25, 0]);
        assert!(congruent(&f, &g, &b, 1).unwrap());
        assert!(!congruent(&f, &g, &b, 2).unwrap());
        assert_eq!(nu(&ints(5, &[0, 0]), &b).unwrap(), Valuation::Infinite);
        let mut inc = f.clone();
        inc.mark_incomplete();
        assert_eq!(nu(&inc, &b), Err(Error::IncompleteExpansion));
    }

    #[test]
    fn sieve_degree_one() {
        let f = ints(5, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(sieve(&f, 1, &HalfIntegralMatrix::zero(1)).unwrap(), f);
        let odd = sieve(&f, 2, &HalfIntegralMatrix::scalar(1)).unwrap();
        assert_eq!(odd, ints(5, &[0, 2, 0, 4, 0, 6]));
    }

    #[test]
    fn specialize_degree_one_reindexes() {
        let f = ints(5, &[1, 2, 3]);
        let s0 = HalfIntegralMatrix::scalar(1);
        let g = specialize(&f, &s0).unwrap();
        assert_eq!(g.bound(), 4);
        assert_eq!(g, ints(5, &[1, 0, 2, 0, 3]));
        assert_eq!(specialize(&f, &HalfIntegralMatrix::zero(1)), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn profile_of_constant() {
        let b = IdealBranch::new(5, 2).unwrap();
        let one = CyclotomicField::for_prime(5).unwrap().one();
        let f = FourierExpansion::constant(one, 2, 2).unwrap();
        let prof = singular_profile(&f, &b, 1).unwrap();
        assert_eq!(prof.by_rank, vec![Valuation::Finite(0), Valuation::Infinite, Valuation::Infinite]);
        assert_eq!(prof.p_rank_above(), Some(0));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let f = ints(5, &[1, 0, -3, 7]);
        let s = f.to_json_string();
        assert_eq!(
            s,
            r#"{"format":"qexp-v1","p":5,"degree":1,"bound":3,"coeffs":[{"twiceT":[[0]],"num":[1,0],"den":1},{"twiceT":[[4]],"num":[-3,0],"den":1},{"twiceT":[[6]],"num":[7,0],"den":1}]}"#
        );
        assert_eq!(FourierExpansion::from_json_str(&s).unwrap(), f);
        let bad = s.replace("qexp-v1", "qexp-v0");
        assert!(matches!(FourierExpansion::from_json_str(&bad), Err(Error::Format(_))));
        let out_of_range = r#"{"format":"qexp-v1","p":5,"degree":1,"bound":1,"coeffs":[{"twiceT":[[4]],"num":[1],"den":1}]}"#;
        assert!(FourierExpansion::from_json_str(out_of_range).is_err());
        let odd = r#"{"format":"qexp-v1","p":5,"degree":1,"bound":1,"coeffs":[{"twiceT":[[1]],"num":[1],"den":1}]}"#;
        assert!(FourierExpansion::from_json_str(odd).is_err());
    }
}
