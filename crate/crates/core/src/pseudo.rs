//! The canonical pseudo-PI-sequence.
//!
//! Action `k - 1` is the special action: a policy's canonical improvement
//! set switches every state not yet on it to `k - 1`. All `k^n` policies are
//! ordered by decreasing improvement-set size (lexicographically inside a
//! size class), and the subsequence starts at the first policy and then
//! skips `|T^π|` elements at every step. The subsequence length is at least
//! `Σ_d C(n,d) (k-1)^d / (d+1) = (k^(n+1) - 1) / ((n+1)(k-1))`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;

use crate::analysis::{check_non_inclusion, AnnotatedSequence, Rule, ViolationReport};
use crate::error::{Error, Result};
use crate::mdp::{all_policies, check_budget, policy_count, ImprovementSet, Policy};
use crate::rational::Rational;

/// `{(s, k-1) : π(s) ≠ k-1}`.
pub fn canonical_improvement_set(policy: &Policy, k: usize) -> ImprovementSet {
    let special = k - 1;
    ImprovementSet::from_pairs(
        policy
            .actions()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != special)
            .map(|(s, _)| (s, special)),
    )
}

/// All `k^n` policies with canonical improvement sets, by decreasing
/// improvement-set size, lexicographic within a size.
pub fn build_supersequence(n: usize, k: usize, limit: u64) -> Result<AnnotatedSequence> {
    if n < 1 || k < 2 {
        return Err(Error::OutOfRange(format!("need n ≥ 1 and k ≥ 2, got n = {n}, k = {k}")));
    }
    check_budget(n, k, limit)?;
    let mut items: Vec<(Policy, ImprovementSet)> = all_policies(n, k)
        .map(|p| {
            let t = canonical_improvement_set(&p, k);
            (p, t)
        })
        .collect();
    // Stable sort keeps the lexicographic enumeration order inside a class.
    items.sort_by_key(|item| core::cmp::Reverse(item.1.len()));
    AnnotatedSequence::new(n, k, items)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoPiSequence {
    pub supersequence: AnnotatedSequence,
    /// Positions in the supersequence of the selected policies, increasing.
    pub subsequence_indices: Vec<usize>,
}

impl PseudoPiSequence {
    pub fn len(&self) -> usize {
        self.subsequence_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsequence_indices.is_empty()
    }

    pub fn subsequence(&self) -> AnnotatedSequence {
        self.supersequence.select(&self.subsequence_indices)
    }
}

/// Starts at index 0 and advances by `|T^{π_i}| + 1` until past the end.
pub fn greedy_subsequence(o: AnnotatedSequence) -> Result<PseudoPiSequence> {
    if o.is_empty() {
        return Err(Error::Precondition("the supersequence is empty".into()));
    }
    let mut indices = Vec::new();
    let mut i = 0;
    while i < o.len() {
        indices.push(i);
        i += o.items()[i].1.len() + 1;
    }
    Ok(PseudoPiSequence {
        supersequence: o,
        subsequence_indices: indices,
    })
}

/// `(k^(n+1) - 1) / ((n + 1)(k - 1))`, exactly.
pub fn closed_form_length(n: usize, k: usize) -> Result<Rational> {
    if n < 1 || k < 2 {
        return Err(Error::OutOfRange(format!("need n ≥ 1 and k ≥ 2, got n = {n}, k = {k}")));
    }
    let kb = BigInt::from(k);
    let numer = Pow::pow(&kb, (n + 1) as u32) - 1;
    let denom = BigInt::from(n + 1) * BigInt::from(k - 1);
    Ok(Rational::new(numer, denom))
}

/// `⌊closed_form_length(n, k)⌋`.
pub fn closed_form_floor(n: usize, k: usize) -> Result<BigInt> {
    let q = closed_form_length(n, k)?;
    Ok(q.numer().div_floor(q.denom()))
}

fn is_canonical(seq: &AnnotatedSequence) -> bool {
    let k = seq.actions();
    policy_count(seq.states(), k) == seq.len() as u128
        && seq.items().iter().all(|(p, t)| *t == canonical_improvement_set(p, k))
}

/// Checks non-inclusion on the supersequence, its shape (distinct policies,
/// all `k^n` of them, non-increasing improvement-set sizes), the jumping
/// arithmetic of the subsequence, and for the canonical supersequence the
/// length lower bound.
pub fn verify_pseudo(p: &PseudoPiSequence) -> ViolationReport {
    let o = &p.supersequence;
    let mut report = check_non_inclusion(o);

    let mut seen: BTreeMap<&Policy, usize> = BTreeMap::new();
    for (i, (policy, _)) in o.items().iter().enumerate() {
        if let Some(&first) = seen.get(policy) {
            report.push([first, i], Rule::DistinctPolicies, format!("{policy} appears twice"));
        } else {
            seen.insert(policy, i);
        }
    }
    let expected = policy_count(o.states(), o.actions());
    if o.len() as u128 != expected {
        report.push([], Rule::DistinctPolicies, format!("supersequence has {} policies, k^n = {expected}", o.len()));
    }

    for (i, w) in o.items().windows(2).enumerate() {
        if w[1].1.len() > w[0].1.len() {
            report.push(
                [i, i + 1],
                Rule::CardinalityOrder,
                format!("|T| increases from {} to {}", w[0].1.len(), w[1].1.len()),
            );
        }
    }

    let idx = &p.subsequence_indices;
    if let Some(&first) = idx.first() {
        if first != 0 {
            report.push([0], Rule::Jumping, format!("subsequence starts at {first}, not 0"));
        }
    }
    for (i, w) in idx.windows(2).enumerate() {
        let jump = o.items().get(w[0]).map_or(0, |(_, t)| t.len());
        if w[1] != w[0] + jump + 1 {
            report.push(
                [i, i + 1],
                Rule::Jumping,
                format!("index {} follows {} but |T| = {jump} requires {}", w[1], w[0], w[0] + jump + 1),
            );
        }
    }
    if let Some(&last) = idx.last() {
        if last >= o.len() {
            report.push([idx.len() - 1], Rule::Jumping, format!("index {last} is past the end"));
        }
    }

    if is_canonical(o) {
        if let Ok(floor) = closed_form_floor(o.states(), o.actions()) {
            if BigInt::from(idx.len()) < floor {
                report.push([], Rule::PseudoLength, format!("subsequence length {} < ⌊closed form⌋ = {floor}", idx.len()));
            }
        }
    }
    report.sort();
    report
}

/// Neighbour pairs `i < j` of the sequence where `π_j = π_i ⊕ {(s, a)}` but
/// `(s, a) ∉ T^{π_i}`. In an MDP a later neighbour must be an improving
/// switch, so each pair is an obstruction to realising the sequence.
pub fn improvement_conflicts(seq: &AnnotatedSequence) -> Vec<(usize, usize)> {
    let k = seq.actions();
    let position: BTreeMap<usize, usize> = seq
        .items()
        .iter()
        .enumerate()
        .map(|(i, (p, _))| (p.index(k), i))
        .collect();
    let mut conflicts = Vec::new();
    for (i, (p, t)) in seq.items().iter().enumerate() {
        for s in 0..seq.states() {
            for a in 0..k {
                if a == p.action(s) || t.contains(s, a) {
                    continue;
                }
                let mut q = p.actions().to_vec();
                q[s] = a;
                if let Some(&j) = position.get(&Policy::new(q).index(k)) {
                    if j > i {
                        conflicts.push((i, j));
                    }
                }
            }
        }
    }
    conflicts.sort_unstable();
    conflicts
}
