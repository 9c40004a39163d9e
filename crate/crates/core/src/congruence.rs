//! Weight congruences forced by congruences of expansions, and the
//! orchestration that checks hypotheses, conclusion, and the twist
//! corollary on concrete data.

use crate::cyclotomic::{split_prime, IdealBranch, Valuation};
use crate::error::{Error, Result};
use crate::qexpansion::{congruent, nu, FourierExpansion};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `β(r) = max(⌈r/e⌉ − s − 1, 0)`.
pub fn beta(r: u32, e: u32, s: u32) -> u32 {
    assert!(r >= 1 && e >= 1, "r and e must be positive");
    (r.div_ceil(e) as i64 - s as i64 - 1).max(0) as u32
}

fn default_e() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCongruenceCase {
    pub p: u64,
    pub k1: i64,
    pub k2: i64,
    pub alpha1: u64,
    pub alpha2: u64,
    pub m: u32,
    pub r: u32,
    #[serde(default = "default_e")]
    pub e: u32,
    #[serde(default)]
    pub s: u32,
}

impl WeightCongruenceCase {
    pub fn new(p: u64, (k1, alpha1): (i64, u64), (k2, alpha2): (i64, u64), m: u32, r: u32) -> Result<Self> {
        let case = WeightCongruenceCase { p, k1, k2, alpha1, alpha2, m, r, e: 1, s: 0 };
        case.validate()?;
        Ok(case)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 || self.m < 1 || self.e < 1 {
            return Err(Error::InvalidArgument("m, r and e must be positive".into()));
        }
        if self.alpha1 > self.p - 2 || self.alpha2 > self.p - 2 {
            return Err(Error::InvalidArgument(format!("alpha must lie in [0, {}]", self.p - 2)));
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        WeightCongruenceCase { k1: self.k2, k2: self.k1, alpha1: self.alpha2, alpha2: self.alpha1, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightCongruenceCheck {
    pub holds: bool,
    #[serde(with = "crate::json::big")]
    pub modulus: BigInt,
    #[serde(with = "crate::json::big")]
    pub lhs: BigInt,
    #[serde(with = "crate::json::big")]
    pub rhs: BigInt,
}

/// `k₁p^{m−1} − α₁p^{r−1} ≡ k₂p^{m−1} − α₂p^{r−1} mod (p−1)p^{β(r)}`; the
/// residues are reported in `[0, modulus)`.
pub fn check_weight_congruence(c: &WeightCongruenceCase) -> WeightCongruenceCheck {
    let p = BigInt::from(c.p);
    let modulus = (&p - 1u32) * p.pow(beta(c.r, c.e, c.s));
    let side = |k: i64, alpha: u64| {
        let v = BigInt::from(k) * p.pow(c.m - 1) - BigInt::from(alpha) * p.pow(c.r - 1);
        v.mod_floor(&modulus)
    };
    let lhs = side(c.k1, c.alpha1);
    let rhs = side(c.k2, c.alpha2);
    WeightCongruenceCheck { holds: lhs == rhs, modulus, lhs, rhs }
}

/// `t ∈ {0, 1}` with `α₁ ≡ α₂ + t(p−1)/2 mod p−1`.
pub fn twist_exponent(alpha1: u64, alpha2: u64, p: u64) -> Result<u8> {
    let n = (p - 1) as i64;
    let half = (p - 1) / 2;
    let diff = (alpha1 as i64 - alpha2 as i64).rem_euclid(n);
    if diff == 0 {
        Ok(0)
    } else if diff as u64 == half {
        Ok(1)
    } else {
        Err(Error::NotQuadraticTwist { diff: alpha1 as i64 - alpha2 as i64, half })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HypothesisFailed,
    Violation,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::HypothesisFailed => 2,
            Verdict::Violation => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `ν(F₁), ν(F₂) ≥ 0`.
    pub integral: bool,
    /// `ν(F₁ − F₂) ≥ r`.
    pub congruent: bool,
    /// `ν(F₁) = 0`.
    pub nonvanishing: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.integral && self.congruent && self.nonvanishing
    }
}

/// The twist corollary: congruence at every prime above `p` forces
/// `χ₁ = χ₂ (·/p)^t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryCheck {
    pub congruent_at_all_branches: bool,
    /// `F₁F₁^ρ ≡ F₂F₂^ρ` at every branch.
    pub products_congruent: bool,
    pub twist: Option<u8>,
}

impl CorollaryCheck {
    pub fn violated(&self) -> bool {
        self.congruent_at_all_branches && (!self.products_congruent || self.twist.is_none())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub case: WeightCongruenceCase,
    pub branch_d: u64,
    pub bound: i64,
    pub nu_f1: Valuation,
    pub nu_f2: Valuation,
    pub nu_difference: Valuation,
    pub hypotheses: Hypotheses,
    pub conclusion: WeightCongruenceCheck,
    pub corollary: Option<CorollaryCheck>,
    pub verdict: Verdict,
}

/// Checks the hypotheses on `(F₁, F₂)` at the branch, evaluates the weight
/// congruence, and flags a violation when hypotheses hold but the
/// conclusion fails. With `corollary`, also runs the twist check.
pub fn run_congruence_experiment(
    f1: &FourierExpansion,
    f2: &FourierExpansion,
    branch: &IdealBranch,
    case: &WeightCongruenceCase,
    corollary: bool,
) -> Result<CongruenceReport> {
    case.validate()?;
    if f1.p() != case.p || f2.p() != case.p || branch.p() != case.p {
        return Err(Error::FieldMismatch { left: case.p, right: if f1.p() != case.p { f1.p() } else { f2.p() } });
    }
    let bound = f1.bound().min(f2.bound());
    let (g1, g2) = (f1.truncate(bound), f2.truncate(bound));
    let nu_f1 = nu(&g1, branch)?;
    let nu_f2 = nu(&g2, branch)?;
    let nu_difference = nu(&g1.sub(&g2)?, branch)?;
    let hypotheses = Hypotheses {
        integral: nu_f1 >= Valuation::Finite(0) && nu_f2 >= Valuation::Finite(0),
        congruent: nu_difference >= Valuation::Finite(case.r as i64),
        nonvanishing: nu_f1 == Valuation::Finite(0),
    };
    let conclusion = check_weight_congruence(case);
    let corollary = if corollary { Some(corollary_check(&g1, &g2, case)?) } else { None };
    let verdict = if corollary.as_ref().is_some_and(CorollaryCheck::violated) {
        Verdict::Violation
    } else if !hypotheses.all() {
        Verdict::HypothesisFailed
    } else if conclusion.holds {
        Verdict::Holds
    } else {
        Verdict::Violation
    };
    Ok(CongruenceReport {
        case: *case,
        branch_d: branch.d(),
        bound,
        nu_f1,
        nu_f2,
        nu_difference,
        hypotheses,
        conclusion,
        corollary,
        verdict,
    })
}

fn corollary_check(f1: &FourierExpansion, f2: &FourierExpansion, case: &WeightCongruenceCase) -> Result<CorollaryCheck> {
    let split = split_prime(case.p)?;
    let p1 = f1.mul(&f1.conj())?;
    let p2 = f2.mul(&f2.conj())?;
    let mut all = true;
    let mut products = true;
    for b in &split.branches {
        let integral = nu(f1, b)? >= Valuation::Finite(0) && nu(f2, b)? >= Valuation::Finite(0);
        all &= integral && congruent(f1, f2, b, 1)? && nu(f1, b)? == Valuation::Finite(0);
        products &= congruent(&p1, &p2, b, 1)?;
    }
    Ok(CorollaryCheck {
        congruent_at_all_branches: all,
        products_congruent: products,
        twist: twist_exponent(case.alpha1, case.alpha2, case.p).ok(),
    })
}
