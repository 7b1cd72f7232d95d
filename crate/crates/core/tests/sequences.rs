use pi_core::analysis::{check_acyclicity, check_non_inclusion, check_tensor_ranks, count_repeated_state_sets, AnnotatedSequence};
use pi_core::bounds::{improved_bound, mansour_singh_bound, validate_trace_bounds};
use pi_core::generate::generate_random_mdp;
use pi_core::iteration::run_policy_iteration;
use pi_core::order_regular::{check_order_regular, conjecture_check, fibonacci, search_max_rows, OrderRegularMatrix};
use pi_core::pseudo::{build_supersequence, closed_form_floor, greedy_subsequence, verify_pseudo};
use pi_core::{Policy, DEFAULT_ENUMERATION_LIMIT};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_traces_satisfy_the_sequence_properties(n in 1usize..=5, k in 2usize..=3, seed in any::<u64>()) {
        let mdp = generate_random_mdp(n, k, seed, n.min(3)).unwrap();
        let trace = run_policy_iteration(&mdp, &Policy::zeros(n)).unwrap();
        let seq = AnnotatedSequence::from_trace(&trace);
        prop_assert!(check_non_inclusion(&seq).ok());
        prop_assert!(check_acyclicity(&seq).ok());
        prop_assert!(count_repeated_state_sets(&seq).1.ok());
        prop_assert!(check_tensor_ranks(&seq).ok());
        prop_assert!(validate_trace_bounds(&trace).ok());
    }

    #[test]
    fn checker_agrees_with_the_literal_condition(n in 1usize..=4, rows in proptest::collection::vec(0u64..16, 1..8)) {
        let rows: Vec<u64> = rows.into_iter().map(|r| r & ((1 << n) - 1)).collect();
        let m = OrderRegularMatrix::new(n, rows.clone()).unwrap();
        let bit = |r: u64, c: usize| (r >> (n - 1 - c)) & 1;
        let mut literal = true;
        for i in 0..rows.len().saturating_sub(1) {
            for j in i + 1..rows.len() - 1 {
                let witness = (0..n).any(|c| {
                    bit(rows[i], c) != bit(rows[i + 1], c)
                        && bit(rows[i + 1], c) == bit(rows[j], c)
                        && bit(rows[j], c) == bit(rows[j + 1], c)
                });
                literal &= witness;
            }
        }
        if rows.len() >= 2 {
            literal &= rows[rows.len() - 1] != rows[rows.len() - 2];
        }
        prop_assert_eq!(check_order_regular(&m).ok(), literal);
    }
}

#[test]
fn pseudo_sequences_meet_the_closed_form() {
    for (n, k) in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2), (2, 4)] {
        let p = greedy_subsequence(build_supersequence(n, k, DEFAULT_ENUMERATION_LIMIT).unwrap()).unwrap();
        assert!(verify_pseudo(&p).ok(), "n={n} k={k}");
        assert!(num_bigint::BigInt::from(p.len()) >= closed_form_floor(n, k).unwrap(), "n={n} k={k}");
    }
}

#[test]
fn bounds_order() {
    for n in [20usize, 40, 80] {
        let ms = pi_core::rational::to_f64(&mansour_singh_bound(n, 2).unwrap());
        let b = improved_bound(n, 2).unwrap();
        assert!(b.total_bound < ms);
        assert!(b.total_bound <= 2f64.powi(n as i32));
    }
}

#[test]
fn search_matches_fibonacci_for_small_widths() {
    for n in 1..=4 {
        let r = search_max_rows(n, 1 << 30).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.max_rows as u64, fibonacci(n + 2).unwrap());
        assert!(conjecture_check(n, &r).unwrap());
        assert!(check_order_regular(&r.witness).ok());
    }
}

#[test]
#[ignore = "long-running exhaustive search"]
fn width_six_search() {
    let r = search_max_rows(6, u64::MAX).unwrap();
    assert!(r.exhausted);
    assert_eq!(r.max_rows, 21);
}
