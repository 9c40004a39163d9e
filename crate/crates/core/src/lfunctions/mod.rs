//! Generalized Bernoulli numbers, special values `L(1−s, χ)`, their
//! p-deprived versions, and Kubota–Leopoldt values at the integer
//! interpolation points.

mod bernoulli;

pub use bernoulli::{bernoulli_number, bernoulli_polynomial, tangent_numbers};

use crate::arith;
use crate::characters::DirichletCharacter;
use crate::cyclotomic::{embed_auto, valuation, CyclotomicField, CyclotomicNumber, IdealBranch, PadicValue, Valuation};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// A character for L-value purposes: either the trivial character mod 1
/// (values tagged into `Q(μ_{p−1})`) or a character mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Character {
    One { p: u64 },
    Dirichlet(DirichletCharacter),
}

impl Character {
    pub fn p(&self) -> u64 {
        match self {
            Character::One { p } => *p,
            Character::Dirichlet(chi) => chi.p(),
        }
    }

    pub fn field(&self) -> &'static CyclotomicField {
        CyclotomicField::for_prime(self.p()).expect("p validated when the character was built")
    }

    pub fn value(&self, m: i64) -> CyclotomicNumber {
        match self {
            Character::One { p } => CyclotomicField::for_prime(*p).unwrap().one(),
            Character::Dirichlet(chi) => chi.value(m),
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            Character::One { .. } => true,
            Character::Dirichlet(chi) => chi.is_even(),
        }
    }

    pub fn conj(&self) -> Character {
        match self {
            Character::One { p } => Character::One { p: *p },
            Character::Dirichlet(chi) => Character::Dirichlet(chi.conj()),
        }
    }
}

impl From<DirichletCharacter> for Character {
    fn from(chi: DirichletCharacter) -> Self {
        Character::Dirichlet(chi)
    }
}

/// `B_{n,χ}`. For a character mod `p` the sum runs over the modulus `p`,
/// so the trivial character mod `p` yields `(1 − p^{n−1}) B_n`. For the
/// trivial character mod 1, `B_{1,𝟏} = +1/2`.
pub fn generalized_bernoulli(n: usize, chi: &Character) -> CyclotomicNumber {
    assert!(n >= 1, "generalized Bernoulli numbers are indexed from 1");
    let field = chi.field();
    let dchi = match chi {
        Character::One { .. } => {
            let b = if n == 1 { BigRational::new(1.into(), 2.into()) } else { bernoulli_number(n) };
            return field.rational(&b);
        }
        Character::Dirichlet(dchi) => dchi,
    };
    let p = dchi.p();
    let order = field.order();
    let binom = arith::binomial_row(n);
    let f = BigInt::from(p);
    // exps[a] = k with χ(a) = ζ^k
    let exps: Vec<Option<u64>> = (1..p as i64).map(|a| dchi.value_exponent(a)).collect();
    // powers[a][j] = a^j is built incrementally as k decreases
    let mut a_pow: Vec<BigInt> = vec![BigInt::one(); (p - 1) as usize];
    let mut f_pow = BigRational::new(BigInt::one(), f.clone()); // f^{k−1} for k = 0
    let mut f_pows = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        f_pows.push(f_pow.clone());
        f_pow *= BigRational::from_integer(f.clone());
    }
    let mut counts = vec![BigRational::zero(); order];
    for k in (0..=n).rev() {
        // a_pow[a] = a^{n−k}
        let bk = bernoulli_number(k);
        if !bk.is_zero() {
            let coeff = bk * &f_pows[k] * BigRational::from_integer(binom[k].clone());
            let mut inner = vec![BigInt::zero(); order];
            for (i, e) in exps.iter().enumerate() {
                if let Some(e) = e {
                    inner[*e as usize] += &a_pow[i];
                }
            }
            for (c, s) in counts.iter_mut().zip(inner) {
                if !s.is_zero() {
                    *c += &coeff * BigRational::from_integer(s);
                }
            }
        }
        for (i, ap) in a_pow.iter_mut().enumerate() {
            *ap *= BigInt::from(i as u64 + 1);
        }
    }
    let den = counts.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = counts.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    field.from_exponent_counts(&ints, den)
}

/// `L(1−s, χ) = −B_{s,χ}/s`.
pub fn l_value(s: usize, chi: &Character) -> CyclotomicNumber {
    assert!(s >= 1);
    let b = generalized_bernoulli(s, chi);
    (-&b).scale(&BigRational::new(BigInt::one(), BigInt::from(s)))
}

/// `L^{(p)}(1−s, χ) = (1 − χ(p) p^{s−1}) L(1−s, χ)`.
pub fn l_value_deprived(s: usize, chi: &Character) -> CyclotomicNumber {
    let l = l_value(s, chi);
    match chi {
        Character::Dirichlet(_) => l,
        Character::One { p } => {
            let factor = BigRational::one() - BigRational::from_integer(BigInt::from(*p).pow(s as u32 - 1));
            l.scale(&factor)
        }
    }
}

/// `(1 − p^{s−1}) B_s / s`, the quantity in Kummer's congruences.
pub fn kummer_ratio(s: usize, p: u64) -> BigRational {
    let factor = BigRational::one() - BigRational::from_integer(BigInt::from(p).pow(s as u32 - 1));
    factor * bernoulli_number(s) / BigRational::from_integer(s.into())
}

/// Point `1 − s` and character `ω^β` at which to evaluate `L_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LValueRequest {
    pub s: usize,
    pub beta: i64,
    pub branch: IdealBranch,
    pub precision: u32,
}

impl LValueRequest {
    pub fn new(s: usize, beta: i64, branch: IdealBranch, precision: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be >= 1".into()));
        }
        let beta = beta.rem_euclid(branch.p() as i64 - 1);
        Ok(LValueRequest { s, beta, branch, precision })
    }

    /// `χ` is identified with `ω^α`, `α` its ω-exponent.
    pub fn for_character(s: usize, chi: &DirichletCharacter, precision: u32) -> Result<Self> {
        Self::new(s, chi.omega_exponent() as i64, chi.branch(), precision)
    }
}

/// The character `ω^γ` realized in `Q(μ_{p−1})` via `ψ^{−γ}`, or `𝟏` mod 1
/// when `γ ≡ 0`.
pub fn omega_power(gamma: i64, branch: IdealBranch) -> Character {
    let n = branch.p() as i64 - 1;
    if gamma.rem_euclid(n) == 0 {
        Character::One { p: branch.p() }
    } else {
        Character::Dirichlet(DirichletCharacter::from_omega_exponent(branch, gamma))
    }
}

/// Exact right-hand side `−(1 − ψω^{−s}(p) p^{s−1}) B_{s,ψω^{−s}} / s` for
/// `ψ = ω^β`.
///
/// `ψ = ω` at `s = 1` is reported as a pole: the interpolation formula
/// there degenerates to the trivial character at the point `s = 1`.
pub fn padic_l_exact(s: usize, beta: i64, branch: IdealBranch) -> Result<CyclotomicNumber> {
    let n = branch.p() as i64 - 1;
    let gamma = (beta - s as i64).rem_euclid(n);
    if gamma == 0 && s == 1 {
        return Err(Error::Pole(format!("L_p(0, omega^{beta}) with psi = omega")));
    }
    Ok(l_value_deprived(s, &omega_power(gamma, branch)))
}

/// `L_p(1−s, ω^β)` embedded at the request's branch.
pub fn padic_l(req: &LValueRequest) -> Result<PadicValue> {
    let exact = padic_l_exact(req.s, req.beta, req.branch)?;
    embed_auto(&exact, &req.branch, req.precision)
}

/// Parameters of the sequence `l_m = l + a·p^m` approaching
/// `(l, l + (p−1)/2^δ)` in weight space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LimitSequence {
    pub p: u64,
    pub l: u64,
    pub delta: u8,
    pub alpha: u64,
    pub a: u64,
}

impl LimitSequence {
    pub fn new(p: u64, l: u64, delta: u8, alpha: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidArgument("l must be >= 1".into()));
        }
        if delta > 1 {
            return Err(Error::InvalidArgument("delta must be 0 or 1".into()));
        }
        if alpha == 0 || alpha > p - 2 {
            return Err(Error::InvalidArgument(format!("alpha must lie in [1, {}]", p - 2)));
        }
        let n = p - 1;
        let target = n >> delta;
        let a = ((target as i64 - alpha as i64).rem_euclid(n as i64)) as u64;
        let a = if a == 0 { n } else { a };
        Ok(LimitSequence { p, l, delta, alpha, a })
    }

    /// `(p−1)/2^δ`.
    pub fn twist(&self) -> u64 {
        (self.p - 1) >> self.delta
    }

    pub fn term(&self, m: u32) -> u64 {
        self.l + self.a * self.p.pow(m)
    }

    /// `α ≢ 0 mod (p−1)/2`: the nonquadratic hypothesis.
    pub fn alpha_nonquadratic(&self) -> bool {
        self.alpha % ((self.p - 1) / 2) != 0
    }

    /// `l + (p−1)/2^δ` even, which the weights `l_m` need to carry a
    /// character of matching parity.
    pub fn parity_ok(&self) -> bool {
        (self.l + self.twist()) % 2 == 0
    }

    /// Even weights `k_m = l + c·p^m`, `c = (p−1)/2^δ`, converging to the
    /// same point.
    pub fn companion_weight(&self, m: u32) -> u64 {
        self.l + self.twist() * self.p.pow(m)
    }

    /// `(·/p)^δ` as a character on the branch.
    pub fn limit_character(&self, branch: IdealBranch) -> Character {
        if self.delta == 0 {
            Character::One { p: self.p }
        } else {
            Character::Dirichlet(DirichletCharacter::quadratic(branch))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub m: u32,
    pub l_m: u64,
    pub term: PadicValue,
    pub valuation_of_difference: Valuation,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub sequence: LimitSequence,
    pub branch_d: u64,
    pub alpha_nonquadratic: bool,
    pub limit: PadicValue,
    pub rows: Vec<LimitRow>,
    /// Difference valuations never decrease.
    pub nondecreasing: bool,
}

impl LimitReport {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "L^(p)(1-l_m, omega^{}) -> L^(p)(1-{}, (./{})^{})   a = {}, branch d = {}\nlimit: {}\n{:>3} {:>10} {:>8}\n",
            self.sequence.alpha,
            self.sequence.l,
            self.sequence.p,
            self.sequence.delta,
            self.sequence.a,
            self.branch_d,
            self.limit,
            "m",
            "l_m",
            "v(diff)"
        );
        for row in &self.rows {
            out.push_str(&format!("{:>3} {:>10} {:>8}\n", row.m, row.l_m, row.valuation_of_difference));
        }
        out
    }

    /// `[{m, valuation_of_difference}, ...]`
    pub fn to_json_rows(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| serde_json::json!({"m": r.m, "valuation_of_difference": r.valuation_of_difference.to_json()}))
                .collect(),
        )
    }
}

/// Tracks `L^{(p)}(1−l_m, ω^α)` against its expected limit
/// `L^{(p)}(1−l, (·/p)^δ)`. Non-convergence shows up in the rows rather
/// than as an error.
pub fn limit_report(seq: &LimitSequence, branch: IdealBranch, steps: u32, precision: u32) -> Result<LimitReport> {
    if branch.p() != seq.p {
        return Err(Error::FieldMismatch { left: seq.p, right: branch.p() });
    }
    let limit_exact = l_value_deprived(seq.l as usize, &seq.limit_character(branch));
    let limit = embed_auto(&limit_exact, &branch, precision)?;
    let chi = Character::Dirichlet(DirichletCharacter::from_omega_exponent(branch, seq.alpha as i64));
    let mut rows = Vec::new();
    for m in 1..=steps {
        let l_m = seq.term(m);
        let term_exact = l_value_deprived(l_m as usize, &chi);
        let diff = &term_exact - &limit_exact;
        rows.push(LimitRow {
            m,
            l_m,
            term: embed_auto(&term_exact, &branch, precision)?,
            valuation_of_difference: valuation(&diff, &branch)?,
        });
    }
    let nondecreasing = rows.windows(2).all(|w| w[0].valuation_of_difference <= w[1].valuation_of_difference);
    Ok(LimitReport {
        sequence: *seq,
        branch_d: branch.d(),
        alpha_nonquadratic: seq.alpha_nonquadratic(),
        limit,
        rows,
        nondecreasing,
    })
}

/// `v_p(L_p(1 + 2l − 2l_m, 𝟏)^{−1})` for `m = 1..=steps`: the reciprocal of
/// the factor that drives higher-rank coefficients to zero.
pub fn inverse_pole_valuations(seq: &LimitSequence, branch: IdealBranch, steps: u32) -> Result<Vec<(u32, u64, Valuation)>> {
    let mut out = Vec::new();
    for m in 1..=steps {
        let s = 2 * (seq.term(m) - seq.l);
        let value = padic_l_exact(s as usize, 0, branch)?;
        let v = valuation(&value, &branch)?;
        let inv = match v {
            Valuation::Finite(v) => Valuation::Finite(-v),
            Valuation::Infinite => return Err(Error::Pole(format!("L_p(1-{s}, 1) vanishes; its inverse is undefined"))),
        };
        out.push((m, s, inv));
    }
    Ok(out)
}
