//! Degree-1 Eisenstein series: `E_{1,ψ}`, level-1 `E_k`, `E_{k,χ}` via the
//! local-factor product, and the p-adic limit experiment along
//! `l_m = l + a·p^m`.

use crate::arith;
use crate::characters::DirichletCharacter;
use crate::cyclotomic::{valuation, CyclotomicNumber, IdealBranch, Valuation};
use crate::error::{Error, Result};
use crate::lfunctions::{generalized_bernoulli, l_value_deprived, Character, LimitSequence};
use crate::qexpansion::{nu, FourierExpansion};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EisensteinKind {
    E1psi,
    Level1,
    Chi,
}

/// What to build. For `Chi` the character is `ω^α` realized on the branch;
/// `α = 0` gives the trivial character mod `p` (p-deprived series).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinSpec {
    pub kind: EisensteinKind,
    pub p: u64,
    pub branch_d: u64,
    pub k: u64,
    pub alpha: u64,
    pub bound: i64,
}

impl EisensteinSpec {
    pub fn build(&self) -> Result<FourierExpansion> {
        match self.kind {
            EisensteinKind::E1psi => e1_psi(&IdealBranch::new(self.p, self.branch_d)?, self.bound),
            EisensteinKind::Level1 => level1_eisenstein(self.k, self.p, self.bound),
            EisensteinKind::Chi => {
                let branch = IdealBranch::new(self.p, self.branch_d)?;
                let chi = Character::Dirichlet(DirichletCharacter::from_omega_exponent(branch, self.alpha as i64));
                let product = degree1_eisenstein_chi(self.k, &chi, self.bound)?;
                let oracle = degree1_eisenstein_divisor_sum(self.k, &chi, self.bound)?;
                if product != oracle {
                    return Err(Error::Invariant("product and divisor-sum coefficients disagree".into()));
                }
                Ok(product)
            }
        }
    }
}

fn check_parity(k: u64, chi: &Character) -> Result<()> {
    if chi.is_even() != (k % 2 == 0) {
        return Err(Error::Parity { k });
    }
    Ok(())
}

fn rational_pow(q: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        base
    } else {
        base.recip()
    }
}

/// Rank-1 local polynomial `F_q(t, X) = Σ_{i=0}^{ν_q(t)} (qX)^i`.
pub fn local_factor(q: u64, t: u64, x: &CyclotomicNumber) -> CyclotomicNumber {
    let field = x.field();
    let qx = x.scale_int(&BigInt::from(q));
    let mut term = field.one();
    let mut acc = field.one();
    let mut rest = t;
    while rest > 0 && rest % q == 0 {
        rest /= q;
        term = &term * &qx;
        acc = &acc + &term;
    }
    acc
}

/// `χ(q) q^{k−2}`, the argument of the rank-1 local factor at weight `k`.
pub fn local_argument(q: u64, k: i64, chi: &Character) -> CyclotomicNumber {
    chi.value(q as i64).scale(&rational_pow(q, k - 2))
}

/// `E_{k,χ}` at degree 1 from the local-factor product:
/// `a(t) = 2 L^{(p)}(1−k, χ)^{−1} Π_{q | t} F_q(t, χ(q) q^{k−2})`, `a(0) = 1`.
/// For `Character::One` the product includes `q = p` and the L-value is
/// not deprived, which is the level-1 series.
pub fn degree1_eisenstein_chi(k: u64, chi: &Character, bound: i64) -> Result<FourierExpansion> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    check_parity(k, chi)?;
    let field = chi.field();
    let l = match chi {
        Character::One { .. } => crate::lfunctions::l_value(k as usize, chi),
        Character::Dirichlet(_) => l_value_deprived(k as usize, chi),
    };
    let lead = l
        .inv()
        .ok_or_else(|| Error::InvalidArgument(format!("L(1-{k}, chi) vanishes")))?
        .scale_int(&BigInt::from(2));
    let coeffs: Vec<CyclotomicNumber> = (0..=bound.max(0) as u64)
        .into_par_iter()
        .map(|t| {
            if t == 0 {
                return field.one();
            }
            let mut acc = lead.clone();
            for (q, _) in arith::factorize(t) {
                acc = &acc * &local_factor(q, t, &local_argument(q, k as i64, chi));
            }
            acc
        })
        .collect();
    FourierExpansion::from_degree1(chi.p(), coeffs)
}

/// The same series from `a(t) = −(2k/B_{k,χ}) Σ_{d|t} χ(d) d^{k−1}`.
pub fn degree1_eisenstein_divisor_sum(k: u64, chi: &Character, bound: i64) -> Result<FourierExpansion> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    check_parity(k, chi)?;
    let field = chi.field();
    let b = generalized_bernoulli(k as usize, chi);
    let lead = b
        .inv()
        .ok_or_else(|| Error::InvalidArgument(format!("B_{{{k},chi}} vanishes")))?
        .scale_int(&BigInt::from(-2 * k as i64));
    let coeffs: Vec<CyclotomicNumber> = (0..=bound.max(0) as u64)
        .into_par_iter()
        .map(|t| {
            if t == 0 {
                return field.one();
            }
            let mut sum = field.zero();
            for d in arith::divisors(t) {
                let term = chi.value(d as i64).scale_int(&BigInt::from(d).pow(k as u32 - 1));
                sum = &sum + &term;
            }
            &lead * &sum
        })
        .collect();
    FourierExpansion::from_degree1(chi.p(), coeffs)
}

/// `E_{1,ψ} = 1 − (2/B_{1,ψ}) Σ_n (Σ_{d|n} ψ(d)) qⁿ` for the branch's `ψ`.
pub fn e1_psi(branch: &IdealBranch, bound: i64) -> Result<FourierExpansion> {
    let psi = Character::Dirichlet(DirichletCharacter::psi(*branch));
    degree1_eisenstein_divisor_sum(1, &psi, bound)
}

/// Level-1 `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ`, coefficients tagged into
/// `Q(μ_{p−1})`.
pub fn level1_eisenstein(k: u64, p: u64, bound: i64) -> Result<FourierExpansion> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("level-1 Eisenstein series need even k >= 4, got {k}")));
    }
    let field = crate::cyclotomic::CyclotomicField::for_prime(p)?;
    let bk = crate::lfunctions::bernoulli_number(k as usize);
    let lead = BigRational::from_integer(BigInt::from(-2 * k as i64)) / bk;
    let coeffs: Vec<CyclotomicNumber> = (0..=bound.max(0) as u64)
        .into_par_iter()
        .map(|t| {
            if t == 0 {
                return field.one();
            }
            let sigma: BigInt = arith::divisors(t).into_iter().map(|d| BigInt::from(d).pow(k as u32 - 1)).sum();
            field.rational(&(&lead * BigRational::from_integer(sigma)))
        })
        .collect();
    FourierExpansion::from_degree1(p, coeffs)
}

/// One step `m` of the limit experiment.
#[derive(Debug, Clone, Serialize)]
pub struct LimitSeriesRow {
    pub m: u32,
    pub weight: u64,
    pub companion_weight: u64,
    /// `ν(E_{l_m,χ} − E_{l_{m−1},χ})`; absent for the first step.
    pub consecutive: Option<Valuation>,
    /// `ν(E_{l_m,χ} − E_{k_m})` against the level-1 companion.
    pub companion: Valuation,
    /// Minimum over `q ≤ 20`, `ν_q(t) ≤ 3` of the valuation of the two
    /// sides of the rank-1 factor congruence.
    pub factor_congruence: Valuation,
    pub constant_term_one: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitSeriesReport {
    pub p: u64,
    pub l: u64,
    pub delta: u8,
    pub alpha: u64,
    pub a: u64,
    pub branch_d: u64,
    pub bound: i64,
    pub alpha_nonquadratic: bool,
    /// `χ(−1) = (−1)^{l_m}`; without it the series do not exist and no
    /// rows are produced.
    pub parity_ok: bool,
    pub rows: Vec<LimitSeriesRow>,
}

impl LimitSeriesReport {
    /// Consecutive-difference valuations grow by at least one per step.
    pub fn consecutive_increasing(&self) -> bool {
        let vals: Vec<Valuation> = self.rows.iter().filter_map(|r| r.consecutive).collect();
        vals.windows(2).all(|w| w[1] >= w[0].shift(1))
    }

    /// The character and companion sequences agree to at least the step
    /// index.
    pub fn companion_converges(&self) -> bool {
        self.rows.iter().all(|r| r.companion >= Valuation::Finite(r.m as i64))
    }

    /// The factor congruence holds mod `p^{m+1}` at every step.
    pub fn factor_congruence_holds(&self) -> bool {
        self.rows.iter().all(|r| r.factor_congruence >= Valuation::Finite(r.m as i64 + 1))
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "p={} l={} delta={} alpha={} a={} branch={} bound={}\n",
            self.p, self.l, self.delta, self.alpha, self.a, self.branch_d, self.bound
        );
        if !self.parity_ok {
            out.push_str("parity hypothesis fails: l + (p-1)/2^delta is odd, no series exist\n");
            return out;
        }
        out.push_str("m  weight  companion  nu(consecutive)  nu(companion)  nu(factor)\n");
        for r in &self.rows {
            let cons = r.consecutive.map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{}  {}  {}  {}  {}  {}\n",
                r.m, r.weight, r.companion_weight, cons, r.companion, r.factor_congruence
            ));
        }
        out
    }
}

fn factor_congruence_valuation(seq: &LimitSequence, branch: &IdealBranch, m: u32) -> Result<Valuation> {
    let chi = Character::Dirichlet(DirichletCharacter::from_omega_exponent(*branch, seq.alpha as i64));
    let target = Character::Dirichlet(DirichletCharacter::from_omega_exponent(*branch, seq.twist() as i64));
    let mut best = Valuation::Infinite;
    for q in (2..=20u64).filter(|&q| arith::is_prime(q) && q != seq.p) {
        for i in 1..=3u32 {
            let t = q.pow(i);
            let lhs = local_factor(q, t, &local_argument(q, seq.term(m) as i64, &chi));
            let rhs = local_factor(q, t, &local_argument(q, seq.l as i64, &target));
            best = best.min(valuation(&(&lhs - &rhs), branch)?);
        }
    }
    Ok(best)
}

/// Runs the degree-1 limit experiment for `E_{l_m, ω^α}` at `m = 1..steps`.
pub fn padic_limit_series(seq: &LimitSequence, branch: &IdealBranch, steps: u32, bound: i64) -> Result<LimitSeriesReport> {
    if branch.p() != seq.p {
        return Err(Error::FieldMismatch { left: seq.p, right: branch.p() });
    }
    let mut report = LimitSeriesReport {
        p: seq.p,
        l: seq.l,
        delta: seq.delta,
        alpha: seq.alpha,
        a: seq.a,
        branch_d: branch.d(),
        bound,
        alpha_nonquadratic: seq.alpha_nonquadratic(),
        parity_ok: seq.parity_ok(),
        rows: Vec::new(),
    };
    if !report.parity_ok {
        return Ok(report);
    }
    let chi = Character::Dirichlet(DirichletCharacter::from_omega_exponent(*branch, seq.alpha as i64));
    let mut previous: Option<FourierExpansion> = None;
    for m in 1..=steps {
        let weight = seq.term(m);
        let series = degree1_eisenstein_chi(weight, &chi, bound)?;
        let companion_weight = seq.companion_weight(m);
        let companion = level1_eisenstein(companion_weight, seq.p, bound)?;
        let consecutive = match &previous {
            Some(prev) => Some(nu(&series.sub(prev)?, branch)?),
            None => None,
        };
        let row = LimitSeriesRow {
            m,
            weight,
            companion_weight,
            consecutive,
            companion: nu(&series.sub(&companion)?, branch)?,
            factor_congruence: factor_congruence_valuation(seq, branch, m)?,
            constant_term_one: series.coeff1(0) == series.field().one(),
        };
        report.rows.push(row);
        previous = Some(series);
    }
    Ok(report)
}

/// `p·B_{1,ψ}`, whose vanishing at other branches obstructs `E_{1,ψ} ≡ 1`
/// there.
pub fn p_times_b1(branch: &IdealBranch) -> CyclotomicNumber {
    let psi = Character::Dirichlet(DirichletCharacter::psi(*branch));
    generalized_bernoulli(1, &psi).scale_int(&BigInt::from(branch.p()))
}
