use proptest::prelude::*;

use semimatch::band::{random_band, ZeroRectBand};
use semimatch::colour::{instance_from_matching, involution_from_plan, solve, verify_plan, ExchangePlan};
use semimatch::corpus::corpus_entry;
use semimatch::matching::{
    find_involution_matching, find_permutation_matching, hall_violator, involution_from_cycles, is_h_preserving,
    verify_involution_matching, verify_permutation_matching, InverseGraph,
};
use semimatch::oracle::{hall_subset_scan, involution_backtracking, permutation_backtracking, row_column_subset_scan};

fn band_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = ZeroRectBand> {
    (1..=max_rows, 1..=max_cols, 0.2f64..1.0, any::<u64>())
        .prop_map(|(m, n, density, seed)| random_band(m, n, density, seed).unwrap())
}

fn divisible_band_strategy() -> impl Strategy<Value = ZeroRectBand> {
    (1usize..=3, 1usize..=3, 0.3f64..1.0, any::<u64>())
        .prop_map(|(m, a, density, seed)| random_band(m, m * a, density, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_relation_is_symmetric(seed in any::<u64>()) {
        let s = corpus_entry(seed, 12).semigroup;
        let g = InverseGraph::build(&s).unwrap();
        prop_assert!(g.is_symmetric());
        for a in s.elements() {
            prop_assert_eq!(g.inverses(a).to_vec(), s.inverses_of(a));
        }
    }

    #[test]
    fn matching_and_hall_violator_are_dual(seed in any::<u64>()) {
        let s = corpus_entry(seed, 12).semigroup;
        let m = find_permutation_matching(&s).unwrap();
        let v = hall_violator(&s).unwrap();
        prop_assert_eq!(m.is_some(), v.is_none());
        prop_assert_eq!(m.is_some(), hall_subset_scan(&s).is_ok());
        if let Some(p) = m {
            prop_assert!(verify_permutation_matching(&s, p.images()).unwrap());
        }
        if let Some(v) = v {
            prop_assert!(v.verify(&s));
        }
    }

    #[test]
    fn engine_agrees_with_backtracking(seed in any::<u64>()) {
        let s = corpus_entry(seed, 10).semigroup;
        prop_assert_eq!(find_permutation_matching(&s).unwrap().is_some(), permutation_backtracking(&s).is_some());
        let inv = find_involution_matching(&s).unwrap();
        prop_assert_eq!(inv.is_some(), involution_backtracking(&s).is_some());
        if let Some(i) = inv {
            prop_assert!(verify_involution_matching(&s, i.images()).unwrap());
        }
    }

    #[test]
    fn cycle_splitting_implies_involution(seed in any::<u64>()) {
        let s = corpus_entry(seed, 12).semigroup;
        if let Some(p) = find_permutation_matching(&s).unwrap() {
            if let Some(i) = involution_from_cycles(&s, &p) {
                prop_assert!(verify_involution_matching(&s, i.images()).unwrap());
                prop_assert!(find_involution_matching(&s).unwrap().is_some());
            }
        }
    }

    #[test]
    fn band_inverses_match_table(b in band_strategy(3, 4)) {
        let s = b.to_semigroup();
        for x in 1..b.order() {
            for y in 1..b.order() {
                let (cx, cy) = (b.coords(x).unwrap(), b.coords(y).unwrap());
                prop_assert_eq!(b.mutual_inverses(cx, cy), s.are_mutual_inverses(x, y));
            }
        }
    }

    #[test]
    fn row_column_flow_matches_subset_scan(b in divisible_band_strategy()) {
        let outcome = b.row_column_condition().unwrap();
        prop_assert_eq!(Some(outcome.holds), row_column_subset_scan(&b));
        if find_permutation_matching(&b.to_semigroup()).unwrap().is_some() {
            prop_assert!(outcome.holds);
        }
    }

    #[test]
    fn harem_involution_verifies(b in divisible_band_strategy()) {
        let holds = b.row_column_condition().unwrap().holds;
        let harem = b.harem_functions().unwrap();
        prop_assert_eq!(harem.is_some(), holds);
        if let Some(h) = harem {
            prop_assert!(h.is_valid_for(&b));
            let inv = b.harem_involution().unwrap().unwrap();
            prop_assert_eq!(inv.matching.images()[0], 0);
            prop_assert!(verify_involution_matching(&b.to_semigroup(), inv.matching.images()).unwrap());
        }
    }

    #[test]
    fn lifted_matchings_preserve_h(seed in any::<u64>()) {
        let s = corpus_entry(seed, 12).semigroup;
        let r = semimatch::matching::equivalence_report(&s).unwrap();
        if let Some(p) = r.h_preserving_matching {
            prop_assert!(is_h_preserving(&s.green_relations(), p.images()));
            prop_assert!(verify_permutation_matching(&s, p.images()).unwrap());
        }
    }

    #[test]
    fn colour_pipeline_is_sound(b in band_strategy(3, 3)) {
        if let Some(phi) = find_permutation_matching(&b.to_semigroup()).unwrap() {
            let inst = instance_from_matching(&b, &phi).unwrap();
            let counts = inst.counts();
            for c in 0..b.cols() {
                prop_assert_eq!((0..b.rows()).map(|g| counts[g][c]).sum::<usize>(), b.rows());
            }
            if let Some(plan) = solve(&inst, Some(1_000_000)).plan() {
                prop_assert!(verify_plan(&inst, plan).unwrap());
                let inv = involution_from_plan(&b, &phi, &inst, plan).unwrap();
                prop_assert!(verify_involution_matching(&b.to_semigroup(), inv.images()).unwrap());
            }
        }
    }

    #[test]
    fn perturbed_plans_are_checked_exactly(b in band_strategy(2, 3), i in 0usize..6, j in 0usize..6) {
        if let Some(phi) = find_permutation_matching(&b.to_semigroup()).unwrap() {
            let inst = instance_from_matching(&b, &phi).unwrap();
            if let Some(plan) = solve(&inst, None).plan() {
                let balls = inst.balls().len();
                let (i, j) = (i % balls, j % balls);
                let mut exchanges = plan.exchanges();
                exchanges.retain(|&(x, y)| ![x, y].contains(&i) && ![x, y].contains(&j));
                if i != j {
                    exchanges.push((i.min(j), i.max(j)));
                }
                let mutated = ExchangePlan::from_exchanges(balls, &exchanges).unwrap();
                // direct recount of the final holdings
                let mut held = vec![vec![0usize; inst.colours()]; inst.girls()];
                for (x, &y) in mutated.pairing().iter().enumerate() {
                    held[inst.balls()[y].girl][inst.balls()[x].colour] += 1;
                }
                let aligned = held.iter().flatten().all(|&k| k == 1);
                prop_assert_eq!(verify_plan(&inst, &mutated).unwrap(), aligned);
            }
        }
    }
}
