pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod json;
pub mod linalg;

pub use cyclotomic::{
    embed, embed_auto, split_prime, teichmuller_lift, valuation, CyclotomicField, CyclotomicNumber,
    IdealBranch, PadicValue, SplitPrime, Valuation,
};
pub use error::{Error, Result};
pub mod characters;
pub use characters::DirichletCharacter;
pub mod lfunctions;
pub use lfunctions::{Character, LValueRequest};
pub mod qexpansion;
pub use qexpansion::{FourierExpansion, HalfIntegralMatrix};
pub mod eisenstein;
pub use eisenstein::{e1_psi, level1_eisenstein, EisensteinKind, EisensteinSpec};
pub mod theta;
pub use theta::{aut_count, genus_theta, level_and_char, theta_series, GramMatrix};
pub mod congruence;
pub use congruence::{beta, check_weight_congruence, run_congruence_experiment, twist_exponent, Verdict, WeightCongruenceCase};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/lvalues.md")]
    mod lvalues {}
    #[doc = include_str!("../../../book/src/expansions.md")]
    mod expansions {}
    #[doc = include_str!("../../../book/src/eisenstein.md")]
    mod eisenstein {}
    #[doc = include_str!("../../../book/src/theta.md")]
    mod theta {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
