//! Dirichlet characters mod `p`, written as powers of the character `ψ`
//! attached to a branch: `σ(ψ(m))·m ≡ 1 mod p` for every unit `m`.

use crate::arith;
use crate::cyclotomic::{CyclotomicNumber, IdealBranch};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Discrete logarithms to the smallest primitive root.
struct LogTable {
    generator: u64,
    log: Vec<u64>,
}

fn log_table(p: u64) -> &'static LogTable {
    static TABLES: OnceLock<Mutex<HashMap<u64, &'static LogTable>>> = OnceLock::new();
    let mut map = TABLES.get_or_init(Default::default).lock().unwrap();
    map.entry(p).or_insert_with(|| {
        let g = arith::primitive_root(p);
        let mut log = vec![0u64; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            log[x as usize] = k;
            x = x * g % p;
        }
        Box::leak(Box::new(LogTable { generator: g, log }))
    })
}

/// The character `ψ^exp` for the `ψ` of `branch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    branch: IdealBranch,
    exp: u64,
    /// `ψ(g) = ζ^psi_at_generator`
    psi_at_generator: u64,
}

impl DirichletCharacter {
    /// `ψ` itself. The value at the primitive root `g` is `ζ^j` with
    /// `d^j ≡ g^{−1} mod p`, found by brute force.
    pub fn psi(branch: IdealBranch) -> Self {
        let p = branch.p();
        let g = log_table(p).generator;
        let g_inv = arith::pow_mod(g, p - 2, p);
        let mut x = 1u64;
        let mut j = 0u64;
        while x != g_inv {
            x = x * branch.d() % p;
            j += 1;
        }
        DirichletCharacter { branch, exp: 1, psi_at_generator: j }
    }

    pub fn trivial(branch: IdealBranch) -> Self {
        Self::psi(branch).pow(0)
    }

    /// `(·/p) = ψ^{(p−1)/2}`.
    pub fn quadratic(branch: IdealBranch) -> Self {
        Self::psi(branch).pow(((branch.p() - 1) / 2) as i64)
    }

    /// The character `χ` with `χ^σ = ω^α`, i.e. `ψ^{−α}`.
    pub fn from_omega_exponent(branch: IdealBranch, alpha: i64) -> Self {
        Self::psi(branch).pow(-alpha)
    }

    pub fn p(&self) -> u64 {
        self.branch.p()
    }

    pub fn branch(&self) -> IdealBranch {
        self.branch
    }

    /// Exponent `a` with `χ = ψ^a`, in `[0, p−2]`.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    fn order(&self) -> u64 {
        self.p() - 1
    }

    /// `k` with `χ(m) = ζ^k`, or `None` when `p | m`.
    pub fn value_exponent(&self, m: i64) -> Option<u64> {
        let p = self.p();
        let r = arith::rem_u64(m, p);
        if r == 0 {
            return None;
        }
        let n = self.order() as u128;
        let l = log_table(p).log[r as usize] as u128;
        Some(((self.exp as u128 * self.psi_at_generator as u128 % n) * l % n) as u64)
    }

    pub fn value(&self, m: i64) -> CyclotomicNumber {
        let field = self.branch.field();
        match self.value_exponent(m) {
            Some(k) => field.zeta_pow(k as i64),
            None => field.zero(),
        }
    }

    pub fn pow(&self, t: i64) -> Self {
        let n = self.order() as i128;
        let exp = (self.exp as i128 * t as i128).rem_euclid(n) as u64;
        DirichletCharacter { exp, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::FieldMismatch { left: self.p(), right: other.p() });
        }
        if self.branch != other.branch {
            return Err(Error::BranchMismatch { left: self.branch.d(), right: other.branch.d() });
        }
        Ok(DirichletCharacter { exp: (self.exp + other.exp) % self.order(), ..*self })
    }

    /// Complex conjugate character `χ^ρ = χ^{−1}`.
    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_trivial(&self) -> bool {
        self.exp == 0
    }

    /// Trivial or the Legendre symbol.
    pub fn is_quadratic(&self) -> bool {
        self.exp == 0 || 2 * self.exp == self.order()
    }

    /// `χ(−1) = 1`; since `ψ(−1) = −1` this is `exp` even.
    pub fn is_even(&self) -> bool {
        self.exp % 2 == 0
    }

    /// `α ∈ [0, p−2]` with `χ^σ = ω^α`, i.e. `α ≡ −exp mod p−1`.
    pub fn omega_exponent(&self) -> u64 {
        (self.order() - self.exp) % self.order()
    }
}

pub fn psi_for_branch(branch: IdealBranch) -> DirichletCharacter {
    DirichletCharacter::psi(branch)
}

pub fn quadratic_char(branch: IdealBranch) -> DirichletCharacter {
    DirichletCharacter::quadratic(branch)
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    p: u64,
    branch_d: u64,
    exp: u64,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson { p: self.p(), branch_d: self.branch.d(), exp: self.exp }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        let branch = IdealBranch::new(raw.p, raw.branch_d).map_err(serde::de::Error::custom)?;
        Ok(DirichletCharacter::psi(branch).pow(raw.exp as i64))
    }
}
