//! Property tests for the core invariants: canonicalization, poset
//! structure, verification counting, and lift exactness on random inputs.

use proptest::prelude::*;

use sdepth::constructions::{boolean_upper_discrete, lem_lift, upper_discrete_refine};
use sdepth::ideal::{minimalize, Exponent, MonomialIdeal};
use sdepth::poset::{CharacteristicPoset, Interval};
use sdepth::search::{brute_force_sdepth, sdepth_exact, SearchConfig, ORACLE_MAX_ELEMENTS};
use sdepth::IntervalPartition;

fn arb_exponent(n: usize, max: u32) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0..=max, n).prop_map(Exponent::new)
}

fn arb_gens(n: usize, max: u32) -> impl Strategy<Value = Vec<Exponent>> {
    prop::collection::vec(arb_exponent(n, max), 1..=5)
        .prop_filter("at least one nonzero generator", |gs| {
            gs.iter().any(|g| !g.is_zero())
        })
        .prop_map(|gs| gs.into_iter().filter(|g| !g.is_zero()).collect())
}

fn arb_squarefree_ideal(max_n: usize) -> impl Strategy<Value = MonomialIdeal> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(1..(1u64 << n), 1..=4).prop_map(move |masks| {
            let gens = masks.iter().map(|&m| Exponent::from_mask(m, n)).collect();
            MonomialIdeal::new(n, gens).expect("nonzero generators")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimalize_is_idempotent_and_order_free(gens in arb_gens(4, 3)) {
        let once = minimalize(gens.clone());
        prop_assert_eq!(&minimalize(once.clone()), &once);
        let mut reversed = gens;
        reversed.reverse();
        prop_assert_eq!(minimalize(reversed), once);
    }

    #[test]
    fn minimal_generators_are_an_antichain(gens in arb_gens(4, 3)) {
        let out = minimalize(gens);
        for a in &out {
            for b in &out {
                if a != b {
                    prop_assert!(!a.divides(b));
                }
            }
        }
    }

    #[test]
    fn radical_is_idempotent_and_keeps_ci(gens in arb_gens(4, 3)) {
        let ideal = MonomialIdeal::new(4, gens).unwrap();
        let rad = ideal.radical();
        prop_assert_eq!(rad.radical(), rad.clone());
        if ideal.is_complete_intersection() {
            prop_assert!(rad.is_complete_intersection());
        }
    }

    #[test]
    fn variable_types_partition_the_variables(ideal in arb_squarefree_ideal(6)) {
        let types = ideal.classify_variables().unwrap();
        prop_assert_eq!(types.len(), ideal.ambient());
        for t in &types {
            prop_assert!(t.count <= ideal.num_generators());
            prop_assert_eq!(t.owner.is_some(), t.count == 1);
        }
    }

    #[test]
    fn posets_are_up_sets_with_counted_partitions(ideal in arb_squarefree_ideal(6)) {
        let poset = CharacteristicPoset::build(&ideal, None).unwrap();
        prop_assert!(poset.check_up_set());
        // full decomposition into singletons always verifies, and the
        // interval cardinalities add up to the element count
        let singles: Vec<Interval> = (0..poset.len())
            .map(|i| Interval::new(poset.element(i), poset.element(i)))
            .collect();
        let part = IntervalPartition::new(poset.clone(), singles);
        prop_assert!(part.verify().is_ok());
        let total: u64 = part.intervals().iter().map(Interval::card).sum();
        prop_assert_eq!(total, poset.len() as u64);
    }

    #[test]
    fn general_bound_posets_are_up_sets(gens in arb_gens(3, 3)) {
        let ideal = MonomialIdeal::new(3, gens).unwrap();
        let poset = CharacteristicPoset::build(&ideal, None).unwrap();
        prop_assert!(poset.check_up_set());
    }

    #[test]
    fn solver_matches_oracle(ideal in arb_squarefree_ideal(5)) {
        let poset = CharacteristicPoset::build(&ideal, None).unwrap();
        prop_assume!(poset.len() <= ORACLE_MAX_ELEMENTS);
        let exact = sdepth_exact(&ideal, &SearchConfig::default()).unwrap().value;
        let oracle = brute_force_sdepth(&ideal).unwrap();
        prop_assert_eq!(exact, oracle);
    }

    #[test]
    fn lift_raises_depth_by_one(ideal in arb_squarefree_ideal(5), target in 0usize..4) {
        let n = ideal.ambient();
        let target = target % ideal.num_generators();
        let gens: Vec<Exponent> = ideal
            .generators()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let mut coords = g.coords().to_vec();
                coords.push(u32::from(gi == target));
                Exponent::new(coords)
            })
            .collect();
        let shaped = MonomialIdeal::new(n + 1, gens).unwrap();
        let res = sdepth_exact(&shaped, &SearchConfig::default()).unwrap();
        let lifted = lem_lift(&shaped, &res.witness, n + 1, n + 2).unwrap();
        prop_assert_eq!(lifted.sdepth().unwrap(), res.value + 1);
    }

    #[test]
    fn boolean_lattice_partitions_hit_their_degree(n in 0usize..=7, pick in 0usize..8) {
        let k = if n == 0 { 0 } else { pick % (n + 1) };
        let part = boolean_upper_discrete(n, k).unwrap();
        prop_assert!(part.is_upper_discrete(k).unwrap());
    }

    #[test]
    fn refinement_preserves_coverage(ideal in arb_squarefree_ideal(5)) {
        let res = sdepth_exact(&ideal, &SearchConfig::default()).unwrap();
        let k = res.value.min(2);
        let refined = upper_discrete_refine(&ideal, &res.witness, k).unwrap();
        prop_assert!(refined.is_upper_discrete(k).unwrap());
        // same covered set: both verify over the same poset
        prop_assert_eq!(
            refined.intervals().iter().map(Interval::card).sum::<u64>(),
            res.witness.intervals().iter().map(Interval::card).sum::<u64>()
        );
    }
}
