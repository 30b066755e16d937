use proptest::prelude::*;

use quiver_horn::cone::{cone_inequalities, sigma_inequalities, DominantWeight, SigmaVector};
use quiver_horn::euler::{self, Weight};
use quiver_horn::horn::HornEngine;
use quiver_horn::lp::DEFAULT_LP_CAP;
use quiver_horn::oracle::{ext_min, OracleConfig};
use quiver_horn::{subquotient, LabeledFamily, Quiver, Subfamily};

fn arb_quiver() -> impl Strategy<Value = Quiver> {
    proptest::collection::vec((0usize..3, 0usize..3), 0..4).prop_map(|pairs| {
        // orient every arrow from the lower to the higher index
        let arrows = pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        Quiver::new(vec!["a", "b", "c"], arrows).unwrap()
    })
}

fn arb_family(max: usize) -> impl Strategy<Value = LabeledFamily> {
    proptest::collection::vec(proptest::collection::btree_set(1u64..12, 0..=max), 3)
        .prop_map(|v| LabeledFamily::new(v.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap())
}

fn arb_instance() -> impl Strategy<Value = (Quiver, LabeledFamily, Subfamily)> {
    (arb_quiver(), arb_family(4), proptest::collection::vec(any::<u64>(), 3)).prop_map(|(q, j, bits)| {
        let masks = bits.iter().enumerate().map(|(x, b)| b & ((1u64 << j.labels(x).len()) - 1)).collect();
        (q, j, Subfamily::from_masks(masks))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // labels are drawn from a sparse axis, so families are rarely canonical
    #[test]
    fn recursion_matches_rank_oracle((q, j, k) in arb_instance(), seed in any::<u64>()) {
        let engine = HornEngine::new(&q);
        let (s, t) = subquotient(&q, &j, &k).unwrap();
        let report = ext_min(&q, &s, &t, &OracleConfig::new(seed)).unwrap();
        prop_assert_eq!(engine.is_q_intersecting(&j, &k).unwrap(), report.ext_min == 0);
        prop_assert_eq!(report.hom_min as i64 - report.ext_min as i64, euler::eul_sub(&q, &j, &k).unwrap());
    }

    #[test]
    fn sigma_members_are_cone_members(q in arb_quiver(), j in arb_family(3), sigma in proptest::collection::vec(-3i64..=3, 3)) {
        let engine = HornEngine::new(&q);
        let sig = sigma_inequalities(&engine, &j).unwrap();
        let cone = cone_inequalities(&engine, &j, true).unwrap();
        let values: Vec<Vec<i64>> = (0..3).map(|x| vec![sigma[x]; j.labels(x).len()]).collect();
        let w = DominantWeight::new(&q, &j, Weight::from_integers(&values)).unwrap();
        let in_sigma = sig.contains(&SigmaVector::from_integers(&sigma)).unwrap();
        prop_assert_eq!(in_sigma, cone.contains(&w).unwrap());
    }

    #[test]
    fn pruning_keeps_the_cone(q in arb_quiver(), j in arb_family(2), raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 3)) {
        let engine = HornEngine::new(&q);
        let full = cone_inequalities(&engine, &j, false).unwrap();
        let pruned = full.prune(DEFAULT_LP_CAP).unwrap();
        prop_assert!(pruned.inequalities.len() <= full.inequalities.len());
        let mut values: Vec<Vec<i64>> = (0..3).map(|x| {
            let mut v: Vec<i64> = raw[x][..j.labels(x).len()].to_vec();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        }).collect();
        // shift one coordinate so the trace vanishes when possible
        let trace: i64 = values.iter().flatten().sum();
        if let Some(x) = (0..3).find(|&x| !values[x].is_empty()) {
            let last = values[x].len() - 1;
            values[x][last] -= trace;
            if values[x].windows(2).any(|w| w[0] < w[1]) {
                values[x][last] += trace;
            }
        }
        let w = DominantWeight::new(&q, &j, Weight::from_integers(&values)).unwrap();
        prop_assert_eq!(full.contains(&w).unwrap(), pruned.contains(&w).unwrap());
    }
}
