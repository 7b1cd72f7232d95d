//! Verifiers for the combinatorial properties of (pseudo-)PI-sequences.
//!
//! An [`AnnotatedSequence`] is an ordered list of policies, each with an
//! improvement set that may or may not come from an MDP. Position in the
//! list is the order: item `i` precedes item `j` iff `i < j`.
//!
//! The pairwise checks run in `O(m² n / 64)` word operations: for a fixed
//! later item `j`, the set of earlier items `i` that violate a rule is an
//! intersection over states of unions of per-`(state, action)` bitsets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::bitset::{conjunction_of_unions, Bits};
use crate::dag::DominationGraph;
use crate::error::{Error, Result};
use crate::iteration::PiTrace;
use crate::linalg;
use crate::mdp::{switch_one, Comparison, ImprovementSet, Policy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    NonInclusion,
    NonInclusionK2,
    Acyclicity,
    RepeatedStateSet,
    TensorRank,
    TraceShape,
    StrictIncrease,
    SwitchSubset,
    GreedyCoverage,
    FinalNotOptimal,
    NeighborChain,
    Jumping,
    CardinalityOrder,
    DistinctPolicies,
    PseudoLength,
    IterationBound,
    OrderRegular,
    LastRowsDistinct,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::NonInclusion => "non-inclusion",
            Rule::NonInclusionK2 => "non-inclusion-k2",
            Rule::Acyclicity => "acyclicity",
            Rule::RepeatedStateSet => "repeated-state-set",
            Rule::TensorRank => "tensor-rank",
            Rule::TraceShape => "trace-shape",
            Rule::StrictIncrease => "strict-increase",
            Rule::SwitchSubset => "switch-subset",
            Rule::GreedyCoverage => "greedy-coverage",
            Rule::FinalNotOptimal => "final-not-optimal",
            Rule::NeighborChain => "neighbor-chain",
            Rule::Jumping => "jumping",
            Rule::CardinalityOrder => "cardinality-order",
            Rule::DistinctPolicies => "distinct-policies",
            Rule::PseudoLength => "pseudo-length",
            Rule::IterationBound => "iteration-bound",
            Rule::OrderRegular => "order-regular",
            Rule::LastRowsDistinct => "last-rows-distinct",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub rule: Rule,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:?}: {}", self.rule, self.indices, self.witness)
    }
}

/// `ok()` holds iff there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, indices: impl IntoIterator<Item = usize>, rule: Rule, witness: String) {
        self.violations.push(Violation {
            indices: indices.into_iter().collect(),
            rule,
            witness,
        });
    }

    pub fn merge(&mut self, other: ViolationReport) {
        self.violations.extend(other.violations);
    }

    /// Orders violations by their indices, then rule.
    pub fn sort(&mut self) {
        self.violations.sort();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSequence {
    n: usize,
    k: usize,
    items: Vec<(Policy, ImprovementSet)>,
}

impl AnnotatedSequence {
    pub fn new(n: usize, k: usize, items: Vec<(Policy, ImprovementSet)>) -> Result<Self> {
        for (i, (p, t)) in items.iter().enumerate() {
            p.validate(n, k)
                .map_err(|e| Error::InvalidPolicy(format!("item {i}: {e}")))?;
            if let Some((s, a)) = t.pairs().find(|&(s, a)| s >= n || a >= k) {
                return Err(Error::InvalidPolicy(format!(
                    "item {i}: improvement pair ({s},{a}) outside n = {n}, k = {k}"
                )));
            }
        }
        Ok(AnnotatedSequence { n, k, items })
    }

    pub fn from_trace(trace: &PiTrace) -> Self {
        AnnotatedSequence {
            n: trace.n,
            k: trace.k,
            items: trace
                .steps
                .iter()
                .map(|s| (s.policy.clone(), s.improvement_set.clone()))
                .collect(),
        }
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn actions(&self) -> usize {
        self.k
    }

    pub fn items(&self) -> &[(Policy, ImprovementSet)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The sub-sequence at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        AnnotatedSequence {
            n: self.n,
            k: self.k,
            items: indices.iter().map(|&i| self.items[i].clone()).collect(),
        }
    }
}

/// Per-state and per-(state, action) membership bitsets over the items.
struct ItemIndex {
    k: usize,
    /// `(s, a)` → items with `π(s) = a`.
    by_action: Vec<Bits>,
    /// `(s, a)` → items with `s ∈ S^π` and `π(s) = a`.
    improving_by_action: Vec<Bits>,
    /// `s` → items with `s ∉ S^π`.
    not_improving: Vec<Bits>,
}

impl ItemIndex {
    fn build(seq: &AnnotatedSequence) -> Self {
        let (n, k, m) = (seq.n, seq.k, seq.items.len());
        let mut by_action = alloc::vec![Bits::new(m); n * k];
        let mut improving_by_action = alloc::vec![Bits::new(m); n * k];
        let mut not_improving = alloc::vec![Bits::new(m); n];
        for (i, (p, t)) in seq.items.iter().enumerate() {
            let states = t.states();
            for s in 0..n {
                let a = p.action(s);
                by_action[s * k + a].insert(i);
                if states.contains(&s) {
                    improving_by_action[s * k + a].insert(i);
                } else {
                    not_improving[s].insert(i);
                }
            }
        }
        ItemIndex {
            k,
            by_action,
            improving_by_action,
            not_improving,
        }
    }

    /// Actions `a` with `a = π_j(s)` or `(s, a) ∈ T_j`.
    fn allowed(&self, p: &Policy, t: &ImprovementSet, s: usize) -> Vec<usize> {
        let mut actions: Vec<usize> = t.actions_at(s).collect();
        if !actions.contains(&p.action(s)) {
            actions.push(p.action(s));
        }
        actions
    }
}

fn describe_non_inclusion(pi: &Policy, ti: &ImprovementSet, pj: &Policy, tj: &ImprovementSet) -> String {
    let mut parts = Vec::new();
    for s in ti.states() {
        let a = pi.action(s);
        if a == pj.action(s) {
            parts.push(format!("s{s}: same action {a}"));
        } else {
            parts.push(format!("s{s}: ({s},{a}) ∈ T'"));
        }
    }
    format!(
        "π = {pi}, π' = {pj}, T' = {tj}: no improvement state of π is a witness [{}]",
        parts.join("; ")
    )
}

/// For every `i < j`: some `s ∈ S^{π_i}` has `π_i(s) ≠ π_j(s)` and
/// `(s, π_i(s)) ∉ T^{π_j}`.
pub fn check_non_inclusion(seq: &AnnotatedSequence) -> ViolationReport {
    let index = ItemIndex::build(seq);
    let mut report = ViolationReport::default();
    for (j, (pj, tj)) in seq.items.iter().enumerate() {
        // i violates iff for every s: s ∉ S_i, or π_i(s) ∈ {π_j(s)} ∪ T_j(s).
        let clauses: Vec<Vec<&Bits>> = (0..seq.n)
            .map(|s| {
                let mut c = alloc::vec![&index.not_improving[s]];
                c.extend(
                    index
                        .allowed(pj, tj, s)
                        .into_iter()
                        .map(|a| &index.improving_by_action[s * index.k + a]),
                );
                c
            })
            .collect();
        let refs: Vec<&[&Bits]> = clauses.iter().map(Vec::as_slice).collect();
        for i in conjunction_of_unions(j, &refs) {
            let (pi, ti) = &seq.items[i];
            report.push([i, j], Rule::NonInclusion, describe_non_inclusion(pi, ti, pj, tj));
        }
    }
    report.sort();
    report
}

/// Two-action form: for every `i < j`, `S^{π_i} ⊄ S^{π_j}`.
///
/// Implied by [`check_non_inclusion`] for every `k = 2` sequence.
pub fn check_non_inclusion_k2(seq: &AnnotatedSequence) -> Result<ViolationReport> {
    if seq.k != 2 {
        return Err(Error::Precondition(format!(
            "the subset form of non-inclusion needs k = 2, got {}",
            seq.k
        )));
    }
    let index = ItemIndex::build(seq);
    let mut report = ViolationReport::default();
    for (j, (_, tj)) in seq.items.iter().enumerate() {
        let sj = tj.states();
        let clauses: Vec<[&Bits; 1]> = (0..seq.n)
            .filter(|s| !sj.contains(s))
            .map(|s| [&index.not_improving[s]])
            .collect();
        let refs: Vec<&[&Bits]> = clauses.iter().map(|c| c.as_slice()).collect();
        for i in conjunction_of_unions(j, &refs) {
            let si = seq.items[i].1.states();
            report.push(
                [i, j],
                Rule::NonInclusionK2,
                format!("S = {si:?} ⊆ S' = {sj:?}"),
            );
        }
    }
    report.sort();
    Ok(report)
}

/// For every `i < j` and every `U ⊆ T^{π_j}`: `π_i ≠ π_j ⊕ U`.
///
/// Some `U ⊆ T^{π_j}` maps `π_j` onto `π_i` exactly when every state where
/// the two differ has `(s, π_i(s)) ∈ T^{π_j}` (take `U` to be those pairs;
/// conversely any such `U` must contain them). That membership test
/// replaces the scan over `2^{|T|}` subsets.
pub fn check_acyclicity(seq: &AnnotatedSequence) -> ViolationReport {
    let index = ItemIndex::build(seq);
    let mut report = ViolationReport::default();
    for (j, (pj, tj)) in seq.items.iter().enumerate() {
        let clauses: Vec<Vec<&Bits>> = (0..seq.n)
            .map(|s| {
                index
                    .allowed(pj, tj, s)
                    .into_iter()
                    .map(|a| &index.by_action[s * index.k + a])
                    .collect()
            })
            .collect();
        let refs: Vec<&[&Bits]> = clauses.iter().map(Vec::as_slice).collect();
        for i in conjunction_of_unions(j, &refs) {
            let pi = &seq.items[i].0;
            let u: Vec<(usize, usize)> = pj.differing_states(pi).map(|s| (s, pi.action(s))).collect();
            report.push(
                [i, j],
                Rule::Acyclicity,
                format!("π = {pi} equals π' ⊕ {u:?} with π' = {pj}, T' = {tj}"),
            );
        }
    }
    report.sort();
    report
}

/// `(k-1)^d`, saturating.
pub fn repetition_bound(k: usize, d: usize) -> u128 {
    let mut bound: u128 = 1;
    for _ in 0..d {
        bound = bound.saturating_mul((k - 1) as u128);
    }
    bound
}

/// Groups items by improvement-state set and flags every group of size-`d`
/// sets with more than `(k-1)^d` members.
pub fn count_repeated_state_sets(seq: &AnnotatedSequence) -> (BTreeMap<BTreeSet<usize>, usize>, ViolationReport) {
    let mut groups: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (i, (_, t)) in seq.items.iter().enumerate() {
        groups.entry(t.states()).or_default().push(i);
    }
    let mut report = ViolationReport::default();
    for (states, members) in &groups {
        let bound = repetition_bound(seq.k, states.len());
        if members.len() as u128 > bound {
            report.push(
                members.iter().copied(),
                Rule::RepeatedStateSet,
                format!("S = {states:?} occurs {} times, bound (k-1)^d = {bound}", members.len()),
            );
        }
    }
    report.sort();
    let counts = groups.into_iter().map(|(s, m)| (s, m.len())).collect();
    (counts, report)
}

/// Items of `seq` grouped by improvement-state set, in sequence order.
pub fn state_set_groups(seq: &AnnotatedSequence) -> BTreeMap<BTreeSet<usize>, Vec<(Policy, ImprovementSet)>> {
    let mut groups: BTreeMap<BTreeSet<usize>, Vec<(Policy, ImprovementSet)>> = BTreeMap::new();
    for item in &seq.items {
        groups.entry(item.1.states()).or_default().push(item.clone());
    }
    groups
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorRank {
    pub rank: usize,
    pub count: usize,
    pub ok: bool,
}

/// `⊗_i (e_{π(s_i)} - e_{T(s_i)})` over the shared improvement states
/// `s_1 < … < s_d`, with `T` reduced to its lowest action per state.
pub fn tensor_vector(policy: &Policy, improvement: &ImprovementSet, k: usize) -> Vec<i64> {
    let simplified = improvement.simplified();
    let mut vector = alloc::vec![1i64];
    for (s, t) in simplified.pairs() {
        let mut factor = alloc::vec![0i64; k];
        factor[policy.action(s)] += 1;
        factor[t] -= 1;
        vector = vector
            .iter()
            .flat_map(|&x| factor.iter().map(move |&y| x * y))
            .collect();
    }
    vector
}

/// Rank of the tensor vectors of a group sharing one improvement-state
/// set. `ok` iff the vectors are independent and there are at most
/// `(k-1)^d` of them.
pub fn tensor_rank_check(group: &[(Policy, ImprovementSet)], k: usize) -> Result<TensorRank> {
    let Some((_, first)) = group.first() else {
        return Ok(TensorRank { rank: 0, count: 0, ok: true });
    };
    let states = first.states();
    for (p, t) in group {
        if t.states() != states {
            return Err(Error::InconsistentStateSet);
        }
        p.validate(p.len(), k)?;
        if let Some((s, a)) = t.pairs().find(|&(s, a)| s >= p.len() || a >= k) {
            return Err(Error::InvalidPolicy(format!("improvement pair ({s},{a}) outside the instance")));
        }
    }
    let rows: Vec<Vec<BigInt>> = group
        .iter()
        .map(|(p, t)| tensor_vector(p, t, k).into_iter().map(BigInt::from).collect())
        .collect();
    let rank = linalg::rank(&rows);
    let count = group.len();
    Ok(TensorRank {
        rank,
        count,
        ok: rank == count && count as u128 <= repetition_bound(k, states.len()),
    })
}

/// Runs [`tensor_rank_check`] on every improvement-state group of `seq`.
pub fn check_tensor_ranks(seq: &AnnotatedSequence) -> ViolationReport {
    let mut report = ViolationReport::default();
    let mut members: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (i, (_, t)) in seq.items.iter().enumerate() {
        members.entry(t.states()).or_default().push(i);
    }
    for (states, group) in state_set_groups(seq) {
        let indices = members[&states].iter().copied();
        match tensor_rank_check(&group, seq.k) {
            Ok(r) if r.ok => {}
            Ok(r) => report.push(
                indices,
                Rule::TensorRank,
                format!("S = {states:?}: rank {} of {} vectors, bound {}", r.rank, r.count, repetition_bound(seq.k, states.len())),
            ),
            Err(e) => report.push(indices, Rule::TensorRank, format!("S = {states:?}: {e}")),
        }
    }
    report.sort();
    report
}

/// Finds a neighbour chain for every switching step of `trace`.
pub fn check_neighbor_chains(dag: &DominationGraph, trace: &PiTrace) -> ViolationReport {
    let mut report = ViolationReport::default();
    for (i, w) in trace.steps.windows(2).enumerate() {
        let d = w[0].chosen_switch.len();
        match find_neighbor_chain(dag, &w[0].policy, &w[1].policy, d) {
            Ok(chain) if chain.len() >= d => {}
            Ok(chain) => report.push([i, i + 1], Rule::NeighborChain, format!("chain of {} policies, expected {d}", chain.len())),
            Err(e) => report.push([i, i + 1], Rule::NeighborChain, format!("{e}")),
        }
    }
    report
}

/// Builds the neighbour chain `lo ≺ π¹ ⪯ … ⪯ π^d = hi` where
/// `hi = lo ⊕ U` for a well-defined `U ⊆ T^lo` of size `d`.
///
/// Works backwards from `hi`: at each step some remaining state `s` has
/// `(s, lo(s))` outside the improvement set of the current policy, so
/// switching it back to `lo(s)` does not improve, and the switched policy
/// precedes the current one. The lowest such state is taken.
pub fn find_neighbor_chain(dag: &DominationGraph, lo: &Policy, hi: &Policy, d: usize) -> Result<Vec<Policy>> {
    let table = dag.table();
    let (n, k) = (table.states(), table.actions());
    lo.validate(n, k)?;
    hi.validate(n, k)?;
    let mut remaining: Vec<usize> = lo.differing_states(hi).collect();
    if remaining.len() != d || d == 0 {
        return Err(Error::Precondition(format!(
            "{hi} differs from {lo} in {} states, expected d = {d} ≥ 1",
            remaining.len()
        )));
    }
    let t_lo = table.improvement_set(lo);
    if let Some(&s) = remaining.iter().find(|&&s| !t_lo.contains(s, hi.action(s))) {
        return Err(Error::Precondition(format!(
            "({s},{}) is not in the improvement set {t_lo} of {lo}",
            hi.action(s)
        )));
    }

    let mut chain = alloc::vec![hi.clone()];
    let mut current = hi.clone();
    while remaining.len() > 1 {
        let found = remaining.iter().position(|&s| {
            let back = switch_one(&current, s, lo.action(s));
            table.compare(&back, &current) != Comparison::StrictlyGreater
        });
        let Some(pos) = found else {
            return Err(Error::TheoremViolation(format!(
                "no state of {remaining:?} can be switched back from {current} towards {lo} without improving"
            )));
        };
        let s = remaining.remove(pos);
        current = switch_one(&current, s, lo.action(s));
        chain.push(current.clone());
    }
    chain.reverse();

    if table.compare(&chain[0], lo) != Comparison::StrictlyGreater {
        return Err(Error::TheoremViolation(format!("{} does not strictly dominate {lo}", chain[0])));
    }
    for w in chain.windows(2) {
        if !w[0].is_neighbor(&w[1]) || !table.compare(&w[0], &w[1]).is_le() {
            return Err(Error::TheoremViolation(format!("chain step {} → {} is not a dominated neighbour step", w[0], w[1])));
        }
    }
    Ok(chain)
}
