use proptest::prelude::*;

use phinlab::gen;
use phinlab::interpolation::{beta_value, xi_from_ht, HodgeTateWeights};
use phinlab::partitions::{conjugate, dominates, partitions_of};
use phinlab::{Rational, Subspace};

#[test]
fn conjugation_is_an_involution() {
    for n in 0..=12 {
        for p in partitions_of(n) {
            assert_eq!(conjugate(&conjugate(&p)), p);
        }
    }
}

#[test]
fn conjugation_reverses_dominance() {
    for n in 1..=10 {
        let parts = partitions_of(n);
        for a in &parts {
            for b in &parts {
                assert_eq!(
                    dominates(a, b).unwrap(),
                    dominates(&conjugate(b), &conjugate(a)).unwrap(),
                    "{a:?} {b:?}"
                );
            }
        }
    }
}

fn module(seed: u64, n: usize, p: u64) -> phinlab::FilteredPhiNModule {
    gen::admissibility_candidate(&mut gen::rng(seed), n, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn newton_number_is_additive(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2) {
        let a = module(seed, n, 3);
        let b = module(seed.wrapping_add(1), m, 3);
        let s = a.direct_sum(&b).unwrap();
        prop_assert_eq!(s.newton_number(), a.newton_number() + b.newton_number());
    }

    #[test]
    fn stable_subspaces_are_stable(seed in any::<u64>(), n in 1usize..=3) {
        let d = module(seed, n, 2);
        for v in d.enumerate_stable_subspaces().unwrap() {
            prop_assert!(v.image(d.phi()).unwrap().is_subspace_of(&v));
            prop_assert!(v.image(d.monodromy()).unwrap().is_subspace_of(&v));
        }
        let all = d.enumerate_stable_subspaces().unwrap();
        prop_assert!(all.contains(&Subspace::zero(n)));
        prop_assert!(all.contains(&Subspace::full(n)));
    }

    #[test]
    fn admissibility_ignores_basis(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = gen::rng(seed);
        let d = gen::admissibility_candidate(&mut g, n, 5);
        let e = d.change_basis(&gen::invertible(&mut g, n)).unwrap();
        prop_assert_eq!(
            d.is_weakly_admissible(None).unwrap().admissible,
            e.is_weakly_admissible(None).unwrap().admissible
        );
    }

    #[test]
    fn top_beta_is_the_twisted_determinant(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = gen::rng(seed);
        let d = gen::admissibility_candidate(&mut g, n, 2);
        let e = d.change_basis(&gen::invertible(&mut g, n)).unwrap();
        let xi = xi_from_ht(&HodgeTateWeights::from_module(&d).unwrap());
        let top = beta_value(&d, n, &xi).unwrap();
        let last = -xi.get("k0").unwrap()[n - 1];
        prop_assert_eq!(top.value.evaluate(d.field()), Some(d.phi().det().unwrap() * Rational::int_pow(2, last)));
        for k in 1..=n {
            prop_assert_eq!(beta_value(&d, k, &xi).unwrap(), beta_value(&e, k, &xi).unwrap());
        }
    }
}
