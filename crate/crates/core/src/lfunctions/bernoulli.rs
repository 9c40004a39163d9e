//! Bernoulli numbers with `B_1 = −1/2`.
//!
//! Even-index values come from tangent numbers (Brent–Harvey), which needs
//! only integer arithmetic; results are memoized process-wide.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::{Mutex, OnceLock};

fn cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Tangent numbers `T_1..T_count` (`T_1 = 1, T_2 = 2, T_3 = 16, ...`).
pub fn tangent_numbers(count: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); count + 1];
    if count == 0 {
        return Vec::new();
    }
    t[1] = BigInt::one();
    for k in 2..=count {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=count {
        for j in k..=count {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    t.remove(0);
    t
}

/// `B_{2k}` for `k = 0..count` from tangent numbers.
fn even_bernoulli(count: usize) -> Vec<BigRational> {
    let tangent = tangent_numbers(count.saturating_sub(1));
    let mut out = Vec::with_capacity(count);
    out.push(BigRational::one());
    for (i, tk) in tangent.iter().enumerate() {
        let k = i + 1;
        let four_k = BigInt::one() << (2 * k);
        let den = &four_k * (&four_k - BigInt::one());
        let mut val = BigRational::new(BigInt::from(2 * k) * tk, den);
        if k % 2 == 0 {
            val = -val;
        }
        out.push(val);
    }
    out
}

pub fn bernoulli_number(n: usize) -> BigRational {
    if n == 1 {
        return BigRational::new(BigInt::from(-1), BigInt::from(2));
    }
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let k = n / 2;
    {
        let table = cache().lock().unwrap();
        if let Some(v) = table.get(k) {
            return v.clone();
        }
    }
    let want = (k + 1).max(64).next_power_of_two();
    let fresh = even_bernoulli(want);
    let mut table = cache().lock().unwrap();
    if table.len() < fresh.len() {
        *table = fresh;
    }
    table[k].clone()
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_polynomial(n: usize, x: &BigRational) -> BigRational {
    let binom = crate::arith::binomial_row(n);
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // Σ_k C(n,k) B_k x^{n−k}, summed from k = n downwards
    for k in (0..=n).rev() {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            acc += b * &xp * BigRational::from_integer(binom[k].clone());
        }
        xp *= x;
    }
    acc
}
