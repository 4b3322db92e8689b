mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spatial_control::election::{distance, score_partition, tally_and_decide, verify_witness};
use spatial_control::{Electorate, Instance, IssueSpace, Norm, Objective, ScoringRule};

use common::*;

fn norms() -> impl Strategy<Value = Norm> {
    prop_oneof![Just(Norm::L(1)), Just(Norm::L(2)), Just(Norm::L(3)), Just(Norm::Inf)]
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, d)
}

proptest! {
    #[test]
    fn distance_is_a_metric(norm in norms(), (x, y, z) in (1usize..6).prop_flat_map(|d| (point(d), point(d), point(d)))) {
        let dist = |a: &[f64], b: &[f64]| distance(a, b, norm).unwrap();
        prop_assert!(dist(&x, &y) >= 0.0);
        prop_assert_eq!(dist(&x, &x), 0.0);
        prop_assert!((dist(&x, &y) - dist(&y, &x)).abs() <= 1e-12 * (1.0 + dist(&x, &y)));
        prop_assert!(dist(&x, &z) <= dist(&x, &y) + dist(&y, &z) + 1e-9);
        if x != y {
            prop_assert!(dist(&x, &y) > 0.0);
        }
    }

    #[test]
    fn scores_sum_to_voters_times_rule_total(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_bvpm(&mut rng);
        let report = tally_and_decide(&inst, inst.target()).unwrap();
        let total: f64 = report.scores.iter().sum();
        let expected = inst.num_voters() as f64 * inst.scoring().total();
        prop_assert!((total - expected).abs() <= 1e-9 * expected.max(1.0));
    }

    #[test]
    fn partition_blocks_are_constant(values in prop::collection::vec(0u8..5, 1..8), destructive in any::<bool>()) {
        let mut v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let rule = ScoringRule::from_table(v.clone()).unwrap();
        let objective = if destructive { Objective::Destructive } else { Objective::Constructive };
        let part = score_partition(&rule, objective);
        prop_assert!(part.breakpoints().windows(2).all(|w| w[0] < w[1]));
        let mut covered = 0;
        for b in 0..part.unique_count() {
            let (lo, hi) = part.block(b);
            prop_assert!((lo..=hi).all(|t| v[t - 1] == v[lo - 1]));
            if lo > 1 {
                prop_assert!(v[lo - 2] != v[lo - 1]);
            }
            covered += hi - lo + 1;
        }
        prop_assert_eq!(covered, v.len());
    }

    /// Among all binary positions, a componentwise better rank vector never
    /// turns a win into a loss (and dually for destructive control).
    #[test]
    fn better_ranks_preserve_the_outcome(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 4;
        let n = 3;
        let inst = Instance::new(
            IssueSpace::Binary,
            (0..n).map(|_| bits(&mut rng, d)).collect(),
            Electorate::Voters((0..3).map(|_| bits(&mut rng, d)).collect()),
            Norm::L(1),
            scoring(&mut rng, n),
            objective(&mut rng),
            d as f64,
        )
        .unwrap();
        let reports: Vec<_> = (0..1u32 << d)
            .map(|mask| {
                let x: Vec<f64> = (0..d).map(|k| (mask >> k & 1) as f64).collect();
                tally_and_decide(&inst, &x).unwrap()
            })
            .collect();
        let constructive = inst.objective() == Objective::Constructive;
        for a in &reports {
            for b in &reports {
                let dominated = a.target_ranks.iter().zip(&b.target_ranks).all(|(x, y)| {
                    if constructive { x <= y } else { x >= y }
                });
                if dominated && b.success {
                    prop_assert!(a.success);
                }
            }
        }
    }

    #[test]
    fn unmoved_target_certifies_iff_already_successful(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_bvpm(&mut rng);
        let cert = verify_witness(&inst, inst.target()).unwrap();
        prop_assert_eq!(cert.passed(), tally_and_decide(&inst, inst.target()).unwrap().success);
    }
}
