use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use scl_core::congruence::{beta, check_weight_congruence, twist_exponent, WeightCongruenceCase};
use scl_core::cyclotomic::{embed_auto, rational_valuation, teichmuller_lift, valuation, CyclotomicNumber, IdealBranch, Valuation};
use scl_core::lfunctions::{generalized_bernoulli, Character};
use scl_core::qexpansion::{congruent, enumerate_psd, nu, sieve, FourierExpansion, HalfIntegralMatrix};
use scl_core::theta::{theta_series, GramMatrix};
use scl_core::{split_prime, CyclotomicField, DirichletCharacter};

const M: u32 = 10;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11, 13])
}

fn number(p: u64) -> impl Strategy<Value = CyclotomicNumber> {
    let deg = CyclotomicField::for_prime(p).unwrap().degree();
    (prop::collection::vec(-30i64..30, deg), prop::sample::select(vec![1i64, 2, 3, p as i64, 6 * p as i64]))
        .prop_map(move |(num, den)| CyclotomicNumber::from_parts(p, num.into_iter().map(BigInt::from).collect(), den.into()).unwrap())
}

fn field_and_pair() -> impl Strategy<Value = (IdealBranch, CyclotomicNumber, CyclotomicNumber)> {
    prime().prop_flat_map(|p| {
        let roots = split_prime(p).unwrap().roots();
        (prop::sample::select(roots), number(p), number(p))
            .prop_map(move |(d, x, y)| (IdealBranch::new(p, d).unwrap(), x, y))
    })
}

fn expansion(p: u64, bound: i64) -> impl Strategy<Value = FourierExpansion> {
    let deg = CyclotomicField::for_prime(p).unwrap().degree();
    prop::collection::vec(prop::collection::vec(-12i64..12, deg), bound as usize + 1).prop_map(move |cs| {
        FourierExpansion::from_degree1(
            p,
            cs.into_iter()
                .map(|c| CyclotomicNumber::from_parts(p, c.into_iter().map(BigInt::from).collect(), 1.into()).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_is_a_ring_homomorphism((b, x, y) in field_and_pair()) {
        let p = b.p();
        let ex = embed_auto(&x, &b, M).unwrap();
        let ey = embed_auto(&y, &b, M).unwrap();
        let exy = embed_auto(&(&x * &y), &b, M).unwrap();
        if !x.is_zero() && !y.is_zero() {
            prop_assert_eq!(exy.valuation.finite().unwrap(), ex.valuation.finite().unwrap() + ey.valuation.finite().unwrap());
            let modulus = BigInt::from(p).pow(M);
            let prod = (ex.unit.clone().unwrap() * ey.unit.clone().unwrap()).mod_floor(&modulus);
            prop_assert_eq!(exy.unit.clone().unwrap(), prod);
        }
        let es = embed_auto(&(&x + &y), &b, M).unwrap();
        let err = rational_valuation(&(ex.representative() + ey.representative() - es.representative()), p);
        let known = [ex.absolute_precision(), ey.absolute_precision(), es.absolute_precision()]
            .into_iter()
            .flatten()
            .min()
            .unwrap_or(i64::MAX);
        prop_assert!(err >= Valuation::Finite(known));
    }

    #[test]
    fn valuation_axioms((b, x, y) in field_and_pair()) {
        let vx = valuation(&x, &b).unwrap();
        let vy = valuation(&y, &b).unwrap();
        let vxy = valuation(&(&x * &y), &b).unwrap();
        match (vx, vy) {
            (Valuation::Finite(a), Valuation::Finite(c)) => prop_assert_eq!(vxy, Valuation::Finite(a + c)),
            _ => prop_assert_eq!(vxy, Valuation::Infinite),
        }
        prop_assert!(valuation(&(&x + &y), &b).unwrap() >= vx.min(vy));
        // complex conjugation swaps 𝔭_d and 𝔭_{d^{-1}}
        prop_assert_eq!(valuation(&x.conj(), &b.conjugate()).unwrap(), vx);
        let p = BigInt::from(b.p());
        prop_assert_eq!(valuation(&x.scale_int(&p), &b).unwrap(), vx.shift(1));
    }

    #[test]
    fn characters_are_multiplicative_and_teichmuller(p in prime(), e in 0i64..12, m in 1i64..200, n in 1i64..200, idx in 0usize..4) {
        let roots = split_prime(p as u64).unwrap().branches;
        let b = roots[idx % roots.len()];
        let chi = DirichletCharacter::psi(b).pow(e);
        prop_assert_eq!(chi.value(m * n), &chi.value(m) * &chi.value(n));
        if m % p as i64 != 0 {
            let img = embed_auto(&chi.value(m), &b, M).unwrap();
            let modulus = BigInt::from(p).pow(M);
            let expected = teichmuller_lift(m, p, M).unwrap().modpow(&BigInt::from(chi.omega_exponent()), &modulus);
            prop_assert_eq!(img.unit.unwrap(), expected);
        }
    }

    #[test]
    fn expansion_ring_laws(f in expansion(5, 8), g in expansion(5, 8), h in expansion(5, 8)) {
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        let b = IdealBranch::new(5, 2).unwrap();
        let lhs = nu(&f.mul(&g).unwrap(), &b).unwrap();
        let rhs = match (nu(&f, &b).unwrap(), nu(&g, &b).unwrap()) {
            (Valuation::Finite(a), Valuation::Finite(c)) => Valuation::Finite(a + c),
            _ => Valuation::Infinite,
        };
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn congruences_survive_multiplication(f in expansion(7, 6), g in expansion(7, 6), h in expansion(7, 6)) {
        let b = IdealBranch::new(7, 3).unwrap();
        let seven = f.field().integer(7);
        let g2 = f.add(&g.scale(&seven)).unwrap();
        prop_assert!(congruent(&f, &g2, &b, 1).unwrap());
        prop_assert!(congruent(&f.mul(&h).unwrap(), &g2.mul(&h).unwrap(), &b, 1).unwrap());
    }

    #[test]
    fn sieve_partitions(r in 1i64..4, vals in prop::collection::vec(-9i64..9, 200)) {
        let ts = enumerate_psd(2, 2);
        let field = CyclotomicField::for_prime(5).unwrap();
        let mut f = FourierExpansion::zero(5, 2, 2).unwrap();
        for (t, v) in ts.iter().zip(vals) {
            f.set(t.clone(), field.integer(v)).unwrap();
        }
        // one representative per residue class of (t11, t22, 2t12) mod R
        let mut total = FourierExpansion::zero(5, 2, 2).unwrap();
        for a in 0..r {
            for c in 0..r {
                for o in 0..r {
                    let t0 = HalfIntegralMatrix::new(vec![vec![2 * a, o], vec![o, 2 * c]]).unwrap();
                    total = total.add(&sieve(&f, r, &t0).unwrap()).unwrap();
                }
            }
        }
        prop_assert_eq!(total, f);
    }

    #[test]
    fn beta_monotone(r in 1u32..30, e in 1u32..5, s in 0u32..5) {
        prop_assert!(beta(r + 1, e, s) >= beta(r, e, s));
        prop_assert!(beta(r, e + 1, s) <= beta(r, e, s));
        prop_assert!(beta(r, e, s + 1) <= beta(r, e, s));
    }

    #[test]
    fn weight_congruence_symmetric(p in prime(), k1 in -40i64..40, k2 in -40i64..40, a1 in 0u64..4, a2 in 0u64..4, m in 1u32..3, r in 1u32..4) {
        let c = WeightCongruenceCase::new(p, (k1, a1), (k2, a2), m, r).unwrap();
        prop_assert_eq!(check_weight_congruence(&c).holds, check_weight_congruence(&c.swapped()).holds);
    }

    #[test]
    fn quadratic_nebentypus_twists(p in prime(), q1 in 0u64..2, q2 in 0u64..2) {
        let half = (p - 1) / 2;
        prop_assert!(twist_exponent(q1 * half, q2 * half, p).is_ok());
    }

    #[test]
    fn theta_is_unimodular_invariant(a in -2i64..3, c in -2i64..3) {
        // U = [[1, a], [0, 1]] · [[1, 0], [c, 1]]
        let u = vec![vec![1 + a * c, a], vec![c, 1]];
        let s = GramMatrix::new(vec![vec![4, 2], vec![2, 6]]).unwrap();
        let s2 = s.transform(&u).unwrap();
        prop_assert_eq!(theta_series(&s, 1, 12, 5).unwrap(), theta_series(&s2, 1, 12, 5).unwrap());
        prop_assert_eq!(theta_series(&s, 2, 3, 5).unwrap(), theta_series(&s2, 2, 3, 5).unwrap());
    }
}

#[test]
fn bernoulli_conjugation_and_parity() {
    for p in [5u64, 7] {
        for b in split_prime(p).unwrap().branches {
            for e in 0..p as i64 - 1 {
                let chi = DirichletCharacter::psi(b).pow(e);
                for n in 1..=6usize {
                    let bn = generalized_bernoulli(n, &Character::Dirichlet(chi));
                    assert_eq!(generalized_bernoulli(n, &Character::Dirichlet(chi.conj())), bn.conj());
                    let vanishes = if chi.is_even() { n % 2 == 1 && !(n == 1 && chi.is_trivial()) } else { n % 2 == 0 };
                    if vanishes {
                        assert!(bn.is_zero(), "p={p} e={e} n={n}");
                    }
                }
            }
        }
    }
}
