use num_bigint::BigInt;
use num_rational::BigRational;
use scl_core::cyclotomic::{valuation, IdealBranch, Valuation};
use scl_core::eisenstein::{degree1_eisenstein_chi, e1_psi, level1_eisenstein};
use scl_core::lfunctions::{limit_report, padic_l_exact, Character, LimitSequence};
use scl_core::qexpansion::{congruent, nu, sieve, singular_profile, specialize, FourierExpansion, HalfIntegralMatrix};
use scl_core::theta::{theta_series, GramMatrix};
use scl_core::{split_prime, CyclotomicField, DirichletCharacter};

fn one(p: u64, bound: i64) -> FourierExpansion {
    FourierExpansion::constant(CyclotomicField::for_prime(p).unwrap().one(), 1, bound).unwrap()
}

fn sigma(t: u64, k: u32, skip: Option<u64>) -> BigInt {
    (1..=t)
        .filter(|d| t % d == 0 && skip.is_none_or(|p| d % p != 0))
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

#[test]
fn e_p_minus_one_is_one_mod_p() {
    for p in [5u64, 7, 11, 13] {
        let e = level1_eisenstein(p - 1, p, 50).unwrap();
        for b in split_prime(p).unwrap().branches {
            assert!(congruent(&e, &one(p, 50), &b, 1).unwrap(), "p={p}");
        }
    }
}

#[test]
fn e1_psi_times_conjugate_is_rational() {
    let e = e1_psi(&IdealBranch::new(5, 2).unwrap(), 10).unwrap();
    assert!(e.mul(&e.conj()).unwrap().is_rational());
    assert!(!e.is_rational());
}

#[test]
fn e1_psi_fails_at_the_other_prime() {
    let e = e1_psi(&IdealBranch::new(5, 2).unwrap(), 20).unwrap();
    let other = IdealBranch::new(5, 3).unwrap();
    assert_eq!(nu(&e.sub(&one(5, 20)).unwrap(), &other).unwrap(), Valuation::Finite(0));
}

#[test]
fn deprived_series_drop_multiples_of_p() {
    for (p, k) in [(5u64, 4u64), (7, 6), (5, 8), (7, 4)] {
        let b = IdealBranch::first(p).unwrap();
        let level1 = level1_eisenstein(k, p, 50).unwrap();
        let deprived = degree1_eisenstein_chi(k, &Character::Dirichlet(DirichletCharacter::trivial(b)), 50).unwrap();
        let (l1, d1) = (level1.coeff1(1), deprived.coeff1(1));
        for t in 1..=50u64 {
            let full = l1.scale(&BigRational::from_integer(sigma(t, k as u32 - 1, None)));
            let dep = d1.scale(&BigRational::from_integer(sigma(t, k as u32 - 1, Some(p))));
            assert_eq!(level1.coeff1(t as i64), full, "p={p} k={k} t={t}");
            assert_eq!(deprived.coeff1(t as i64), dep, "p={p} k={k} t={t}");
        }
    }
}

#[test]
fn kummer_continuity_of_padic_l() {
    let b = IdealBranch::new(5, 2).unwrap();
    for beta in [2i64] {
        for s in 2..=8usize {
            let x = padic_l_exact(s, beta, b).unwrap();
            let y = padic_l_exact(s + 20, beta, b).unwrap();
            assert!(valuation(&(&x - &y), &b).unwrap() >= Valuation::Finite(2), "s={s}");
        }
    }
}

#[test]
fn limit_report_without_steps_is_empty() {
    let seq = LimitSequence::new(5, 2, 0, 2).unwrap();
    let rep = limit_report(&seq, IdealBranch::new(5, 2).unwrap(), 0, 12).unwrap();
    assert!(rep.rows.is_empty());
    assert_eq!(rep.to_json_rows(), serde_json::json!([]));
}

#[test]
fn theta_specializes_to_square_of_degree_one() {
    let s = GramMatrix::scaled_identity(2, 2).unwrap();
    let bound = 6;
    let th2 = theta_series(&s, 2, bound, 5).unwrap();
    let s0 = HalfIntegralMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
    let spec = specialize(&th2, &s0).unwrap();
    assert_eq!(spec.bound(), 2 * bound);
    assert_eq!(spec.coeff1(0), spec.field().one());
    let th1 = theta_series(&s, 1, bound, 5).unwrap();
    let sq = th1.mul(&th1).unwrap();
    for t in 0..=2 * bound {
        let expected = if t % 2 == 0 { sq.coeff1(t / 2) } else { spec.field().zero() };
        assert_eq!(spec.coeff1(t), expected, "t={t}");
    }
}

#[test]
fn sieve_then_specialize_keeps_valuation() {
    let b = IdealBranch::new(5, 2).unwrap();
    // degree 1: E_{1,ψ} − 1 attains ν = 1 at t = 1
    let f = e1_psi(&b, 12).unwrap().sub(&one(5, 12)).unwrap();
    let v = nu(&f, &b).unwrap();
    let (t0, _) = f.iter().find(|(_, c)| valuation(c, &b).unwrap() == v).unwrap();
    let extract = specialize(&sieve(&f, 4 * 12 + 1, t0).unwrap(), &HalfIntegralMatrix::scalar(1)).unwrap();
    assert_eq!(nu(&extract, &b).unwrap(), v);

    // degree 2 theta series scaled by 5 at a rank-1 index
    let th = theta_series(&GramMatrix::scaled_identity(1, 2).unwrap(), 2, 3, 5).unwrap();
    let th = th.scale(&th.field().integer(5));
    let v = nu(&th, &b).unwrap();
    assert_eq!(v, Valuation::Finite(1));
    let t0 = HalfIntegralMatrix::new(vec![vec![2, 2], vec![2, 2]]).unwrap();
    assert_eq!(valuation(&th.coeff(&t0), &b).unwrap(), v);
    let extract = specialize(&sieve(&th, 4 * 3 + 1, &t0).unwrap(), &HalfIntegralMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap()).unwrap();
    assert_eq!(nu(&extract, &b).unwrap(), v);
}

#[test]
fn synthetic_singular_profile() {
    let b = IdealBranch::new(5, 2).unwrap();
    let field = CyclotomicField::for_prime(5).unwrap();
    let mut f = FourierExpansion::zero(5, 2, 2).unwrap();
    for t in scl_core::qexpansion::enumerate_psd(2, 2) {
        let c = if t.rank() >= 2 { 5 } else { 1 };
        f.set(t, field.integer(c)).unwrap();
    }
    let prof = singular_profile(&f, &b, 1).unwrap();
    assert_eq!(prof.by_rank, vec![Valuation::Finite(0), Valuation::Finite(0), Valuation::Finite(1)]);
    assert_eq!(prof.p_rank_above(), Some(1));
    assert_eq!(prof.p_rank_below(), Some(0));
}

#[test]
fn theta_degree_two_constant_term() {
    let th = theta_series(&GramMatrix::scaled_identity(2, 2).unwrap(), 2, 4, 5).unwrap();
    let s0 = HalfIntegralMatrix::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
    let spec = specialize(&th, &s0).unwrap();
    assert_eq!(spec.coeff1(0), spec.field().one());
    for (t, c) in th.iter() {
        assert!(c.is_rational() && c.to_rational().unwrap() > BigRational::from_integer(0.into()), "{t:?}");
    }
}
