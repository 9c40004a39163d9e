//! Exact arithmetic in `Q(μ_{p−1})`, the splitting of `p` into degree-one
//! primes, and the p-adic embeddings attached to each of them.
//!
//! Elements are stored in the power basis of a fixed primitive `(p−1)`-th
//! root of unity `ζ`, reduced modulo the cyclotomic polynomial `Φ`, with one
//! common positive denominator. The prime `p` splits completely in this
//! field, so every prime above `p` is `(ζ − d, p)` for a root `d` of `Φ`
//! mod `p`, and its valuation is the p-adic valuation of the image under
//! `ζ ↦ ω(d)`, where `ω` is the Teichmüller lift.

use crate::arith::{self, inv_mod, split_p};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Mutex, OnceLock, RwLock};

/// Default upper limit for the working precision used by [`valuation`].
pub const DEFAULT_PRECISION_CAP: u32 = 256;

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_CAP);

pub fn precision_cap() -> u32 {
    PRECISION_CAP.load(Ordering::Relaxed)
}

pub fn set_precision_cap(cap: u32) {
    PRECISION_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Cyclotomic polynomial of order `n`, coefficients in ascending degree.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // X^n - 1 divided by Φ_d for all proper divisors d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in arith::divisors(n) {
        if d == n {
            continue;
        }
        poly = div_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// The field `Q(μ_{p−1})` together with the data needed to reduce products.
#[derive(Debug)]
pub struct CyclotomicField {
    p: u64,
    order: usize,
    degree: usize,
    phi: Vec<i64>,
    /// `ζ^k` reduced to the power basis, for `0 <= k < order`.
    zeta_pows: Vec<Vec<i64>>,
    roots: Vec<u64>,
}

impl CyclotomicField {
    /// Field attached to the odd prime `p`. Instances are interned, so the
    /// returned reference lives for the whole program.
    pub fn for_prime(p: u64) -> Result<&'static CyclotomicField> {
        static FIELDS: OnceLock<Mutex<HashMap<u64, &'static CyclotomicField>>> = OnceLock::new();
        if p < 3 || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let mut map = FIELDS.get_or_init(Default::default).lock().unwrap();
        if let Some(f) = map.get(&p) {
            return Ok(f);
        }
        let field: &'static CyclotomicField = Box::leak(Box::new(Self::build(p)));
        map.insert(p, field);
        Ok(field)
    }

    fn build(p: u64) -> CyclotomicField {
        let order = (p - 1) as usize;
        let phi = cyclotomic_polynomial(p - 1);
        let degree = phi.len() - 1;
        let mut zeta_pows = Vec::with_capacity(order);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            zeta_pows.push(cur.clone());
            // multiply by ζ and reduce the top coefficient
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for (i, c) in cur.iter_mut().enumerate() {
                *c -= top * phi[i];
            }
        }
        let roots = (1..p)
            .filter(|&d| {
                let mut acc = 0i128;
                for &c in phi.iter().rev() {
                    acc = (acc * d as i128 + c as i128).rem_euclid(p as i128);
                }
                acc == 0
            })
            .collect();
        CyclotomicField { p, order, degree, phi, zeta_pows, roots }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p − 1`, the order of `ζ`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ(p − 1)`, the length of the power basis.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.phi
    }

    /// Roots of `Φ` mod `p`, ascending.
    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn zero(&'static self) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self,
            num: vec![BigInt::zero(); self.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(&'static self) -> CyclotomicNumber {
        self.integer(1)
    }

    pub fn integer(&'static self, n: impl Into<BigInt>) -> CyclotomicNumber {
        let mut x = self.zero();
        x.num[0] = n.into();
        x
    }

    pub fn rational(&'static self, q: &BigRational) -> CyclotomicNumber {
        let mut x = self.zero();
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x.normalize();
        x
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&'static self, k: i64) -> CyclotomicNumber {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CyclotomicNumber {
            field: self,
            num: self.zeta_pows[idx].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Reduces an integer polynomial in `ζ` (any length) to the power basis.
    fn reduce(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.degree {
                out[k] += c;
                continue;
            }
            for (o, &z) in out.iter_mut().zip(&self.zeta_pows[k % self.order]) {
                if z != 0 {
                    *o += c * z;
                }
            }
        }
        out
    }

    /// Builds `Σ_k counts[k] ζ^k / den` where `counts` is indexed by the
    /// exponent modulo `p − 1`.
    pub fn from_exponent_counts(&'static self, counts: &[BigInt], den: BigInt) -> CyclotomicNumber {
        let mut x = CyclotomicNumber { field: self, num: self.reduce(counts), den };
        x.normalize();
        x
    }
}

/// An element of `Q(μ_{p−1})`: `(Σ num_i ζ^i) / den`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: &'static CyclotomicField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.num == other.num && self.den == other.den
    }
}

impl Eq for CyclotomicNumber {}

impl std::hash::Hash for CyclotomicNumber {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl CyclotomicNumber {
    /// Builds and normalizes `(Σ num_i ζ^i) / den`; `num` may be longer than
    /// the power basis and is reduced modulo `Φ`.
    pub fn from_parts(p: u64, num: Vec<BigInt>, den: BigInt) -> Result<Self> {
        let field = CyclotomicField::for_prime(p)?;
        if den.is_zero() {
            return Err(Error::Format("zero denominator".into()));
        }
        let mut x = CyclotomicNumber { field, num: field.reduce(&num), den };
        x.normalize();
        Ok(x)
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// True when the denominator is 1.
    pub fn is_integral_vector(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(
            self.field.p, other.field.p,
            "arithmetic between Q(mu_{}) and Q(mu_{})",
            self.field.p - 1,
            other.field.p - 1
        );
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut x = CyclotomicNumber {
            field: self.field,
            num: self.num.iter().map(|c| c * q.numer()).collect(),
            den: &self.den * q.denom(),
        };
        x.normalize();
        x
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        let mut x = CyclotomicNumber {
            field: self.field,
            num: self.num.iter().map(|c| c * n).collect(),
            den: self.den.clone(),
        };
        x.normalize();
        x
    }

    /// Image under the automorphism `ζ ↦ ζ^j`, `gcd(j, p−1) = 1`.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.field.order as i64;
        assert_eq!(j.gcd(&n), 1, "exponent must be a unit mod p-1");
        let mut counts = vec![BigInt::zero(); self.field.order];
        for (i, c) in self.num.iter().enumerate() {
            let k = (i as i64 * j).rem_euclid(n) as usize;
            counts[k] += c;
        }
        self.field.from_exponent_counts(&counts, self.den.clone())
    }

    /// Complex conjugation, `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let n = self.field.order as i64;
        let mut acc = self.clone();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                acc = &acc * &self.galois(j);
            }
        }
        acc.to_rational().expect("norm is rational")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.order as i64;
        let mut others = self.field.one();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                others = &others * &self.galois(j);
            }
        }
        let norm = (&others * self).to_rational().expect("norm is rational");
        Some(others.scale(&norm.recip()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [p={}]", self, self.field.p)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}*z"),
                (_, true) => format!("z^{i}"),
                (_, false) => format!("{mag}*z^{i}"),
            };
            terms.push((c.is_negative(), body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(body);
        }
        if self.den.is_one() {
            f.write_str(&s)
        } else if terms.len() == 1 {
            write!(f, "{s}/{}", self.den)
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_field(rhs);
        let mut x = if self.den == rhs.den {
            CyclotomicNumber {
                field: self.field,
                num: self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect(),
                den: self.den.clone(),
            }
        } else {
            CyclotomicNumber {
                field: self.field,
                num: self
                    .num
                    .iter()
                    .zip(&rhs.num)
                    .map(|(a, b)| a * &rhs.den + b * &self.den)
                    .collect(),
                den: &self.den * &rhs.den,
            }
        };
        x.normalize();
        x
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut x = CyclotomicNumber {
            field: self.field,
            num: self.field.reduce(&prod),
            den: &self.den * &rhs.den,
        };
        x.normalize();
        x
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.field,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    p: u64,
    #[serde(with = "crate::json::big_vec")]
    num: Vec<BigInt>,
    #[serde(with = "crate::json::big")]
    den: BigInt,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicJson { p: self.p(), num: self.num.clone(), den: self.den.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CyclotomicJson::deserialize(d)?;
        if raw.den.is_negative() {
            return Err(serde::de::Error::custom("denominator must be positive"));
        }
        CyclotomicNumber::from_parts(raw.p, raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

/// One prime `𝔭 = (ζ − d, p)` above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdealBranch {
    p: u64,
    d: u64,
    index: usize,
}

impl IdealBranch {
    pub fn new(p: u64, d: u64) -> Result<Self> {
        let field = CyclotomicField::for_prime(p)?;
        let index = field
            .roots
            .iter()
            .position(|&r| r == d % p)
            .ok_or(Error::NotARoot { d, order: p - 1 })?;
        Ok(IdealBranch { p, d: d % p, index })
    }

    /// Branch with the smallest root.
    pub fn first(p: u64) -> Result<Self> {
        let field = CyclotomicField::for_prime(p)?;
        IdealBranch::new(p, field.roots[0])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Rank of `d` among all roots (canonical ideal label).
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn field(&self) -> &'static CyclotomicField {
        CyclotomicField::for_prime(self.p).expect("validated at construction")
    }

    /// `ω(d) mod p^precision`.
    pub fn teichmuller(&self, precision: u32) -> BigInt {
        teichmuller_lift(self.d as i64, self.p, precision).expect("roots are units")
    }

    /// The branch `d' = d^{−1} mod p`, image of this one under conjugation.
    pub fn conjugate(&self) -> Self {
        let inv = arith::pow_mod(self.d, self.p - 2, self.p);
        IdealBranch::new(self.p, inv).expect("inverse of a primitive root is primitive")
    }
}

/// All primes above `p`, labelled by ascending root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPrime {
    pub p: u64,
    pub branches: Vec<IdealBranch>,
}

impl SplitPrime {
    pub fn roots(&self) -> Vec<u64> {
        self.branches.iter().map(|b| b.d).collect()
    }

    pub fn branch(&self, d: u64) -> Option<IdealBranch> {
        self.branches.iter().copied().find(|b| b.d == d % self.p)
    }
}

pub fn split_prime(p: u64) -> Result<SplitPrime> {
    let field = CyclotomicField::for_prime(p)?;
    let branches = field
        .roots
        .iter()
        .enumerate()
        .map(|(index, &d)| IdealBranch { p, d, index })
        .collect();
    Ok(SplitPrime { p, branches })
}

fn teich_cache() -> &'static RwLock<HashMap<(u64, u64), (u32, BigInt)>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), (u32, BigInt)>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `ω(d) mod p^precision`, the unique `(p−1)`-th root of unity congruent
/// to `d` mod `p`, found by iterating `x ↦ x^p`.
pub fn teichmuller_lift(d: i64, p: u64, precision: u32) -> Result<BigInt> {
    if !arith::is_prime(p) || p < 3 {
        return Err(Error::NotOddPrime(p));
    }
    let r = arith::rem_u64(d, p);
    if r == 0 {
        return Err(Error::DivisibleByP { d, p });
    }
    let modulus = BigInt::from(p).pow(precision);
    if let Some((prec, val)) = teich_cache().read().unwrap().get(&(p, r)) {
        if *prec >= precision {
            return Ok(val.mod_floor(&modulus));
        }
    }
    let pb = BigInt::from(p);
    let mut x = BigInt::from(r);
    // each step gains one p-adic digit
    for _ in 0..precision {
        let next = x.modpow(&pb, &modulus);
        if next == x {
            break;
        }
        x = next;
    }
    let mut cache = teich_cache().write().unwrap();
    let entry = cache.entry((p, r)).or_insert((0, BigInt::zero()));
    if entry.0 < precision {
        *entry = (precision, x.clone());
    }
    Ok(x)
}

/// p-adic valuation: an integer or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            Valuation::Finite(v) => v.into(),
            Valuation::Infinite => "+inf".into(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `p^valuation · unit`, with the unit known modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicValue {
    pub p: u64,
    pub valuation: Valuation,
    #[serde(serialize_with = "ser_opt_big")]
    pub unit: Option<BigInt>,
    pub precision: u32,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => crate::json::bigint_to_value(n).serialize(s),
        None => s.serialize_none(),
    }
}

impl PadicValue {
    pub fn exact_zero(p: u64, precision: u32) -> Self {
        PadicValue { p, valuation: Valuation::Infinite, unit: None, precision }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    /// `valuation + precision`: digits known in absolute terms.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation.finite().map(|v| v + self.precision as i64)
    }

    /// Rational representative `p^v · unit`.
    pub fn representative(&self) -> BigRational {
        match (&self.valuation, &self.unit) {
            (Valuation::Finite(v), Some(u)) => {
                let pw = BigInt::from(self.p).pow(v.unsigned_abs() as u32);
                if *v >= 0 {
                    BigRational::from_integer(u * pw)
                } else {
                    BigRational::new(u.clone(), pw)
                }
            }
            _ => BigRational::zero(),
        }
    }

    /// Whether two values agree to the smaller of their absolute precisions.
    pub fn agrees_with(&self, other: &PadicValue) -> bool {
        assert_eq!(self.p, other.p);
        let bound = match (self.absolute_precision(), other.absolute_precision()) {
            (None, None) => return true,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        rational_valuation(&(self.representative() - other.representative()), self.p)
            >= Valuation::Finite(bound)
    }

    /// Unit part reduced to `digits` digits (`digits <= precision`).
    pub fn unit_mod(&self, digits: u32) -> Option<BigInt> {
        let m = BigInt::from(self.p).pow(digits.min(self.precision));
        self.unit.as_ref().map(|u| u.mod_floor(&m))
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.valuation, &self.unit) {
            (Valuation::Finite(v), Some(u)) => {
                write!(f, "{}^{} * {} (unit mod {}^{})", self.p, v, u, self.p, self.precision)
            }
            _ => f.write_str("0"),
        }
    }
}

/// p-adic valuation of a rational number.
pub fn rational_valuation(q: &BigRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let vn = split_p(q.numer(), p).0 as i64;
    let vd = split_p(q.denom(), p).0 as i64;
    Valuation::Finite(vn - vd)
}

/// `Σ num_i ω(d)^i mod p^precision`.
fn numerator_image(x: &CyclotomicNumber, b: &IdealBranch, precision: u32) -> BigInt {
    let modulus = BigInt::from(b.p).pow(precision);
    let w = b.teichmuller(precision);
    let mut acc = BigInt::zero();
    for c in x.num.iter().rev() {
        acc = (acc * &w + c).mod_floor(&modulus);
    }
    acc
}

fn check_branch(x: &CyclotomicNumber, b: &IdealBranch) {
    assert_eq!(x.p(), b.p, "branch of p = {} applied to Q(mu_{})", b.p, x.p() - 1);
}

/// Image of `x` under `ζ ↦ ω(d)`, with the unit part known mod `p^precision`.
///
/// Fails with [`Error::PrecisionExhausted`] when the numerator image vanishes
/// mod `p^precision`; [`embed_auto`] escalates instead.
pub fn embed(x: &CyclotomicNumber, b: &IdealBranch, precision: u32) -> Result<PadicValue> {
    check_branch(x, b);
    if x.is_zero() {
        return Ok(PadicValue::exact_zero(b.p, precision));
    }
    let img = numerator_image(x, b, precision);
    if img.is_zero() {
        return Err(Error::PrecisionExhausted(precision));
    }
    let (v, _) = split_p(&img, b.p);
    Ok(embed_known(x, b, precision, v))
}

/// [`embed`] preceded by an exact valuation, so only the global precision
/// cap can make it fail.
pub fn embed_auto(x: &CyclotomicNumber, b: &IdealBranch, precision: u32) -> Result<PadicValue> {
    check_branch(x, b);
    match valuation(x, b)? {
        Valuation::Infinite => Ok(PadicValue::exact_zero(b.p, precision)),
        Valuation::Finite(v) => {
            let e = split_p(&x.den, b.p).0 as i64;
            Ok(embed_known(x, b, precision, (v + e) as u32))
        }
    }
}

/// Embedding when the numerator image is known to have valuation `v_num`.
fn embed_known(x: &CyclotomicNumber, b: &IdealBranch, precision: u32, v_num: u32) -> PadicValue {
    let p = b.p;
    let img = numerator_image(x, b, precision + v_num);
    let modulus = BigInt::from(p).pow(precision);
    let unit_num = (img / BigInt::from(p).pow(v_num)).mod_floor(&modulus);
    let (e, u_den) = split_p(&x.den, p);
    let unit = unit_num * inv_mod(&u_den, &modulus).expect("unit part of the denominator");
    PadicValue {
        p,
        valuation: Valuation::Finite(v_num as i64 - e as i64),
        unit: Some(unit.mod_floor(&modulus)),
        precision,
    }
}

/// Exact `ν_𝔭(x)` using the global precision cap.
pub fn valuation(x: &CyclotomicNumber, b: &IdealBranch) -> Result<Valuation> {
    valuation_with_cap(x, b, precision_cap())
}

pub fn valuation_with_cap(x: &CyclotomicNumber, b: &IdealBranch, cap: u32) -> Result<Valuation> {
    check_branch(x, b);
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let e = split_p(&x.den, b.p).0 as i64;
    let mut n = 8u32.min(cap);
    loop {
        let img = numerator_image(x, b, n);
        if !img.is_zero() {
            return Ok(Valuation::Finite(split_p(&img, b.p).0 as i64 - e));
        }
        if n >= cap {
            return Err(Error::PrecisionCapExceeded(cap));
        }
        n = (n * 2).min(cap);
    }
}
