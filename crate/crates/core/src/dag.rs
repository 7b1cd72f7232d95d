//! Orientation of the policy grid by domination.
//!
//! Vertices are all `k^n` policies (by [`Policy::index`]); every pair of
//! neighbouring policies contributes one edge. Neighbours are always
//! comparable, so an edge is either strict (dominated → dominating) or flat
//! (equal values).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mdp::{Comparison, Mdp, Policy, ValueTable};

#[derive(Clone, Debug)]
pub struct DominationGraph {
    table: ValueTable,
    strict: Vec<(usize, usize)>,
    flat: Vec<(usize, usize)>,
}

impl DominationGraph {
    pub fn build(mdp: &Mdp, limit: u64) -> Result<Self> {
        Self::from_table(ValueTable::build(mdp, limit)?)
    }

    pub fn from_table(table: ValueTable) -> Result<Self> {
        let (n, k) = (table.states(), table.actions());
        let mut strict = Vec::new();
        let mut flat = Vec::new();
        for i in 0..table.len() {
            let p = Policy::from_index(i, n, k);
            for s in 0..n {
                for a in p.action(s) + 1..k {
                    let mut q = p.actions().to_vec();
                    q[s] = a;
                    let j = Policy::new(q).index(k);
                    match table.compare(&p, &Policy::from_index(j, n, k)) {
                        Comparison::StrictlyLess => strict.push((i, j)),
                        Comparison::StrictlyGreater => strict.push((j, i)),
                        Comparison::Equal => flat.push((i, j)),
                        Comparison::Incomparable => {
                            return Err(Error::TheoremViolation(format!(
                                "neighbours {p} and {} are incomparable",
                                Policy::from_index(j, n, k)
                            )))
                        }
                    }
                }
            }
        }
        Ok(DominationGraph { table, strict, flat })
    }

    pub fn table(&self) -> &ValueTable {
        &self.table
    }

    pub fn vertex_count(&self) -> usize {
        self.table.len()
    }

    /// Strict edges `(from, to)` with `to` strictly dominating `from`.
    pub fn strict_edges(&self) -> &[(usize, usize)] {
        &self.strict
    }

    /// Neighbour pairs with equal value vectors.
    pub fn flat_edges(&self) -> &[(usize, usize)] {
        &self.flat
    }

    pub fn compare(&self, left: &Policy, right: &Policy) -> Comparison {
        self.table.compare(left, right)
    }

    /// Kahn's algorithm over the strict edges.
    pub fn is_acyclic(&self) -> bool {
        let v = self.vertex_count();
        let mut indegree = alloc::vec![0usize; v];
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); v];
        for &(a, b) in &self.strict {
            indegree[b] += 1;
            out[a].push(b);
        }
        let mut queue: VecDeque<usize> = (0..v).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(x) = queue.pop_front() {
            seen += 1;
            for &y in &out[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        seen == v
    }

    /// Vertices without outgoing strict edges.
    pub fn sinks(&self) -> Vec<Policy> {
        let mut has_out = alloc::vec![false; self.vertex_count()];
        for &(a, _) in &self.strict {
            has_out[a] = true;
        }
        has_out
            .iter()
            .enumerate()
            .filter(|(_, &o)| !o)
            .map(|(i, _)| Policy::from_index(i, self.table.states(), self.table.actions()))
            .collect()
    }
}
