//! Multi-threaded order-regular search.
//!
//! The tree is cut at a fixed depth; workers pull subtrees from a shared
//! counter and the results are merged in subtree order, so the answer does
//! not depend on the number of workers or their scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use pi_core::order_regular::{finish, search_from_prefix, split_prefixes, Best, Budget, SearchResult};

/// Depth of the prefixes handed to workers.
pub const SPLIT_DEPTH: usize = 4;

pub fn search_max_rows(n: usize, node_budget: u64, workers: usize) -> pi_core::Result<SearchResult> {
    let budget = Budget::new(node_budget);
    let (shallow, prefixes) = split_prefixes(n, SPLIT_DEPTH, &budget)?;
    let next = AtomicUsize::new(0);
    let mut parts: Vec<(usize, Best)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.max(1))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(prefix) = prefixes.get(i) else { break };
                        done.push((i, search_from_prefix(n, prefix, &budget)));
                    }
                    done
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    });
    parts.sort_by_key(|(i, _)| *i);
    finish(n, std::iter::once(shallow).chain(parts.into_iter().map(|(_, b)| b)), &budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_answer_for_any_worker_count() {
        for n in 1..=4 {
            let one = pi_core::order_regular::search_max_rows(n, u64::MAX).unwrap();
            for workers in [1, 2, 4, 8] {
                assert_eq!(search_max_rows(n, u64::MAX, workers).unwrap(), one, "n={n} workers={workers}");
            }
        }
    }

    #[test]
    fn budget_stops_workers() {
        let r = search_max_rows(5, 1000, 4).unwrap();
        assert!(!r.exhausted);
        assert_eq!(r.nodes_explored, 1000);
    }
}
