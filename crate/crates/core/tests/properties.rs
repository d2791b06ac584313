//! Randomized invariants checked against brute-force oracles.

mod common;

use common::*;
use fuzzdyn::analysis::{
    is_transitive, is_weakly_mixing, omega_limit, recurrent_points, return_time_set, OpenBasis, WeakMixingMethod,
};
use fuzzdyn::families::{dual_contains, FamilyClassifier, IndexSet};
use fuzzdyn::fuzzy::{g_fuzzify_apply, levelwise_distance, zadeh_apply, FuzzySet, GFunction, LevelGrid};
use fuzzdyn::hyperspace::{hausdorff_distance, in_vietoris, CompactSet, VietorisBasisElement};
use fuzzdyn::spaces::{eventual_period, iterate, product_system, SystemMap};
use fuzzdyn::Bounds;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64, n: usize) -> SystemMap {
    random_map(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn power(t: &[usize], k: usize) -> Vec<usize> {
    (0..t.len()).map(|x| (0..k).fold(x, |y, _| t[y])).collect()
}

fn grades(seed: u64, n: usize, m: u8) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..=m)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn hausdorff_matches_sup_inf(seed in any::<u64>(), n in 1usize..=5, a in 0u64..32, b in 0u64..32) {
        let s = map_from(seed, n);
        let space = s.space();
        let (a, b) = (a & ((1 << n) - 1), b & ((1 << n) - 1));
        let (ma, mb) = (members(a, n), members(b, n));
        let ca = CompactSet::new(space, set_of(n, &ma)).unwrap();
        let cb = CompactSet::new(space, set_of(n, &mb)).unwrap();
        prop_assert_eq!(hausdorff_distance(&ca, &cb).unwrap(), hausdorff(space, &ma, &mb));
    }

    #[test]
    fn levelwise_matches_cuts(seed in any::<u64>(), n in 1usize..=5, m in 1u8..=3) {
        let s = map_from(seed, n);
        let (ga, gb) = (grades(seed ^ 1, n, m), grades(seed ^ 2, n, m));
        let grid = LevelGrid::new(m).unwrap();
        let a = FuzzySet::from_indices(s.space(), grid, ga.clone()).unwrap();
        let b = FuzzySet::from_indices(s.space(), grid, gb.clone()).unwrap();
        prop_assert_eq!(levelwise_distance(&a, &b).unwrap(), levelwise(s.space(), &ga, &gb, m));
    }

    #[test]
    fn zadeh_matches_oracle_and_keeps_height(seed in any::<u64>(), n in 1usize..=6, m in 1u8..=4) {
        let s = map_from(seed, n);
        let g = grades(seed ^ 3, n, m);
        let a = FuzzySet::from_indices(s.space(), LevelGrid::new(m).unwrap(), g.clone()).unwrap();
        let img = zadeh_apply(&s, &a).unwrap();
        prop_assert_eq!(img.grade_indices(), &zadeh(&table_of(&s), &g)[..]);
        prop_assert_eq!(img.height_index(), a.height_index());
    }

    #[test]
    fn identity_g_is_zadeh(seed in any::<u64>(), n in 1usize..=6, m in 1u8..=4) {
        let s = map_from(seed, n);
        let grid = LevelGrid::new(m).unwrap();
        let a = FuzzySet::from_indices(s.space(), grid, grades(seed, n, m)).unwrap();
        prop_assert_eq!(
            g_fuzzify_apply(&s, &GFunction::identity(grid), &a).unwrap(),
            zadeh_apply(&s, &a).unwrap()
        );
    }

    #[test]
    fn iterate_composes(seed in any::<u64>(), n in 1usize..=8, a in 0usize..=8, b in 0usize..=8) {
        let s = map_from(seed, n);
        let (ta, tb) = (table_of(&iterate(&s, a).unwrap()), table_of(&iterate(&s, b).unwrap()));
        let composed: Vec<usize> = tb.iter().map(|&y| ta[y]).collect();
        prop_assert_eq!(table_of(&iterate(&s, a + b).unwrap()), composed);
        prop_assert_eq!(table_of(&iterate(&s, a + b).unwrap()), power(&table_of(&s), a + b));
        let nested = iterate(&iterate(&s, a).unwrap(), b).unwrap();
        prop_assert_eq!(table_of(&nested), table_of(&iterate(&s, a * b).unwrap()));
    }

    #[test]
    fn eventual_period_is_minimal(seed in any::<u64>(), n in 1usize..=8) {
        let s = map_from(seed, n);
        let t = table_of(&s);
        let (pre, per) = eventual_period(&s).unwrap();
        prop_assert_eq!(power(&t, pre + per), power(&t, pre));
        for q in 1..per {
            prop_assert_ne!(power(&t, pre + q), power(&t, pre));
        }
        if pre > 0 {
            prop_assert_ne!(power(&t, pre - 1 + per), power(&t, pre - 1));
        }
    }

    #[test]
    fn birkhoff_recurrence(seed in any::<u64>(), n in 1usize..=8) {
        let s = map_from(seed, n);
        let rec = recurrent_points(&s).unwrap();
        prop_assert!(!rec.is_empty());
        for x in rec {
            prop_assert!(omega_limit(&s, x).unwrap().contains(x));
        }
    }

    #[test]
    fn single_factor_product_is_the_system(seed in any::<u64>(), n in 1usize..=6) {
        let s = map_from(seed, n);
        let p = product_system(&[(s.clone(), 1)], &Bounds::default()).unwrap();
        prop_assert_eq!(p.table(), s.table());
    }

    #[test]
    fn return_times_match_orbit(seed in any::<u64>(), n in 1usize..=6, u in 1u64..64, v in 1u64..64) {
        let s = map_from(seed, n);
        let t = table_of(&s);
        let (u, v) = (members(u & ((1 << n) - 1), n), members(v & ((1 << n) - 1), n));
        prop_assume!(!u.is_empty() && !v.is_empty());
        let h = 30;
        let got = return_time_set(&s, &set_of(n, &u), &set_of(n, &v), h).unwrap();
        let mut img = u.clone();
        for k in 0..h {
            prop_assert_eq!(got.contains(k), img.iter().any(|x| v.contains(x)), "n = {}", k);
            img = image(&t, &img);
        }
    }

    #[test]
    fn transitivity_matches_orbits(seed in any::<u64>(), n in 1usize..=6) {
        let s = map_from(seed, n);
        let t = table_of(&s);
        // With singleton opens: every y is T^k x for some k >= 1.
        let oracle = (0..n).all(|x| (0..n).all(|y| (1..=n).any(|k| power(&t, k)[x] == y)));
        let v = is_transitive(&s, &OpenBasis::singletons(s.space())).unwrap();
        prop_assert_eq!(v.value(), Some(oracle));
    }

    #[test]
    fn weak_mixing_methods_agree(seed in any::<u64>(), n in 1usize..=5) {
        let s = map_from(seed, n);
        let basis = OpenBasis::singletons(s.space());
        let b = Bounds::default();
        let p = is_weakly_mixing(&s, &basis, WeakMixingMethod::Product, &b).unwrap();
        let l = is_weakly_mixing(&s, &basis, WeakMixingMethod::ReturnIntersection, &b).unwrap();
        prop_assert_eq!(p.value(), l.value());
    }

    #[test]
    fn vietoris_membership(seed in any::<u64>(), n in 1usize..=6, a in 1u64..64, opens in prop::collection::vec(1u64..64, 1..4)) {
        let s = map_from(seed, n);
        let mask = (1u64 << n) - 1;
        let a = members(a & mask, n);
        let opens: Vec<Vec<usize>> = opens.iter().map(|o| members(o & mask, n)).collect();
        prop_assume!(!a.is_empty() && opens.iter().all(|o| !o.is_empty()));
        let ca = CompactSet::new(s.space(), set_of(n, &a)).unwrap();
        let v = VietorisBasisElement::new(opens.iter().map(|o| set_of(n, o)).collect()).unwrap();
        let oracle = a.iter().all(|x| opens.iter().any(|o| o.contains(x)))
            && opens.iter().all(|o| o.iter().any(|x| a.contains(x)));
        prop_assert_eq!(in_vietoris(&ca, &v), oracle);
    }

    #[test]
    fn thick_syndetic_duality(bits in prop::collection::vec(any::<bool>(), 1..120), w in 1usize..40) {
        let h = bits.len();
        let s = IndexSet::new(h, (0..h).filter(|&i| bits[i])).unwrap();
        let thick = FamilyClassifier::Thick { min_run: Some(w) };
        let synd = FamilyClassifier::Syndetic { max_gap: Some(w) };
        prop_assert_eq!(dual_contains(&s, &thick).unwrap(), synd.contains(&s));
        prop_assert_eq!(dual_contains(&s, &synd).unwrap(), thick.contains(&s));
    }
}
