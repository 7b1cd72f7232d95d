use pi_core::generate::{generate_random_mdp, random_policy};
use pi_core::iteration::{check_trace, run_policy_iteration};
use pi_core::linalg;
use pi_core::mdp::{
    brute_force_optimal, compare, evaluate_policy, improvement_set_fast, improvement_set_oracle, lookahead, switch,
};
use pi_core::rational::from_ints;
use pi_core::{Comparison, Mdp, Policy, Rational, SwitchSet, DEFAULT_ENUMERATION_LIMIT};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Mdp, Policy)> {
    (1usize..=4, 2usize..=3, any::<u64>())
        .prop_flat_map(|(n, k, seed)| (Just((n, k, seed)), 1..=n))
        .prop_map(|((n, k, seed), support)| {
            let mdp = generate_random_mdp(n, k, seed, support).unwrap();
            (mdp, random_policy(n, k, seed ^ 0x5a5a))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn value_is_a_bellman_fixed_point((mdp, policy) in instance()) {
        let v = evaluate_policy(&mdp, &policy).unwrap();
        for s in 0..mdp.states() {
            prop_assert_eq!(&lookahead(&mdp, s, policy.action(s), &v), &v.values()[s]);
        }
    }

    #[test]
    fn lookahead_rule_matches_neighbour_definition((mdp, policy) in instance()) {
        prop_assert_eq!(
            improvement_set_fast(&mdp, &policy).unwrap(),
            improvement_set_oracle(&mdp, &policy).unwrap()
        );
    }

    #[test]
    fn every_well_defined_subset_improves((mdp, policy) in instance(), mask in any::<u32>()) {
        let t = improvement_set_fast(&mdp, &policy).unwrap();
        let pairs: Vec<_> = t.pairs().collect();
        let mut used = std::collections::BTreeSet::new();
        let subset: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 32) & 1 == 1)
            .map(|(_, &p)| p)
            .filter(|&(s, _)| used.insert(s))
            .collect();
        prop_assume!(!subset.is_empty());
        let next = switch(&policy, &SwitchSet::new(subset)).unwrap();
        let before = evaluate_policy(&mdp, &policy).unwrap();
        let after = evaluate_policy(&mdp, &next).unwrap();
        prop_assert_eq!(compare(&after, &before).unwrap(), Comparison::StrictlyGreater);
    }

    #[test]
    fn neighbours_are_never_incomparable((mdp, policy) in instance(), state in 0usize..4, action in 0usize..3) {
        let s = state % mdp.states();
        let a = action % mdp.actions();
        let mut actions = policy.actions().to_vec();
        actions[s] = a;
        let other = Policy::new(actions);
        let c = compare(&evaluate_policy(&mdp, &other).unwrap(), &evaluate_policy(&mdp, &policy).unwrap()).unwrap();
        prop_assert_ne!(c, Comparison::Incomparable);
    }

    #[test]
    fn iteration_reaches_the_optimum((mdp, policy) in instance()) {
        let trace = run_policy_iteration(&mdp, &policy).unwrap();
        prop_assert!(check_trace(&trace).ok());
        let best = brute_force_optimal(&mdp, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let last = trace.final_policy().unwrap();
        prop_assert_eq!(
            compare(&evaluate_policy(&mdp, last).unwrap(), &evaluate_policy(&mdp, &best).unwrap()).unwrap(),
            Comparison::Equal
        );
        for w in trace.steps.windows(2) {
            prop_assert_eq!(compare(&w[1].value, &w[0].value).unwrap(), Comparison::StrictlyGreater);
        }
    }

    #[test]
    fn solve_inverts_diagonally_dominant_systems(
        entries in proptest::collection::vec((-9i64..=9, 1i64..=7), 16),
        rhs in proptest::collection::vec(-20i64..=20, 4),
    ) {
        let n = 4;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| from_ints(entries[i * n + j].0, entries[i * n + j].1)).collect())
            .collect();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += from_ints(100, 1);
        }
        let b: Vec<Rational> = rhs.iter().map(|&v| from_ints(v, 3)).collect();
        let x = linalg::solve(&a, &b).unwrap();
        for i in 0..n {
            let lhs: Rational = (0..n).map(|j| &a[i][j] * &x[j]).sum();
            prop_assert_eq!(&lhs, &b[i]);
        }
    }
}

#[test]
fn discount_change_is_reflected_in_values() {
    let mdp = generate_random_mdp(3, 2, 7, 2).unwrap();
    let policy = Policy::zeros(3);
    let low = mdp.clone().with_discount(from_ints(1, 2)).unwrap();
    let v = evaluate_policy(&low, &policy).unwrap();
    for s in 0..3 {
        assert_eq!(lookahead(&low, s, 0, &v), v.values()[s]);
    }
    assert_ne!(v, evaluate_policy(&mdp, &policy).unwrap());
}
