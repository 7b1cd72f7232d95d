//! MDP representation, exact policy evaluation and the domination order.
//!
//! Values use the discounted criterion: `v` is the unique solution of
//! `(I - γ P^π) v = r^π`, solved exactly. Actions are numbered `0..k` at
//! every state.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    n: usize,
    k: usize,
    /// Row `s * k + a` is the successor distribution of `(s, a)`.
    transitions: Vec<Vec<Rational>>,
    rewards: Vec<Rational>,
    discount: Rational,
    /// Row `s * k + a` of `(I - γP | r)` scaled by a positive integer.
    scaled: Vec<Vec<BigInt>>,
}

impl Mdp {
    /// Builds an instance from `transitions[s][a][t]` and `rewards[s][a]`,
    /// checking every invariant exactly.
    pub fn new(
        transitions: Vec<Vec<Vec<Rational>>>,
        rewards: Vec<Vec<Rational>>,
        discount: Rational,
    ) -> Result<Self> {
        let n = transitions.len();
        if n == 0 {
            return Err(Error::InvalidMdp("at least one state is required".into()));
        }
        let k = transitions[0].len();
        if k < 2 {
            return Err(Error::InvalidMdp(format!(
                "at least two actions per state are required, got {k}"
            )));
        }
        if rewards.len() != n {
            return Err(Error::InvalidMdp(format!(
                "rewards list {} states, transitions list {n}",
                rewards.len()
            )));
        }
        if discount <= Rational::zero() || discount >= Rational::one() {
            return Err(Error::InvalidMdp(format!(
                "discount {} is outside (0, 1)",
                format_rational(&discount)
            )));
        }
        let mut rows = Vec::with_capacity(n * k);
        let mut flat_rewards = Vec::with_capacity(n * k);
        for (s, (per_action, state_rewards)) in transitions.into_iter().zip(rewards).enumerate() {
            if per_action.len() != k || state_rewards.len() != k {
                return Err(Error::InvalidMdp(format!(
                    "ragged action counts: state {s} has {} transition rows and {} rewards, expected {k}",
                    per_action.len(),
                    state_rewards.len()
                )));
            }
            for (a, row) in per_action.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidMdp(format!(
                        "transition row ({s}, {a}) has length {}, expected {n}",
                        row.len()
                    )));
                }
                if let Some(p) = row.iter().find(|p| **p < Rational::zero() || **p > Rational::one()) {
                    return Err(Error::InvalidMdp(format!(
                        "transition row ({s}, {a}) has entry {} outside [0, 1]",
                        format_rational(p)
                    )));
                }
                let sum: Rational = row.iter().sum();
                if !sum.is_one() {
                    return Err(Error::InvalidMdp(format!(
                        "row sum ≠ 1: transition row ({s}, {a}) sums to {}",
                        format_rational(&sum)
                    )));
                }
                rows.push(row);
            }
            flat_rewards.extend(state_rewards);
        }
        let mut mdp = Mdp {
            n,
            k,
            transitions: rows,
            rewards: flat_rewards,
            discount,
            scaled: Vec::new(),
        };
        mdp.rescale();
        Ok(mdp)
    }

    fn rescale(&mut self) {
        let n = self.n;
        self.scaled = self
            .transitions
            .iter()
            .zip(&self.rewards)
            .enumerate()
            .map(|(i, (row, reward))| {
                let s = i / self.k;
                let mut aug: Vec<Rational> = row
                    .iter()
                    .enumerate()
                    .map(|(t, p)| {
                        let entry = -(p * &self.discount);
                        if t == s {
                            entry + Rational::one()
                        } else {
                            entry
                        }
                    })
                    .collect();
                aug.push(reward.clone());
                debug_assert_eq!(aug.len(), n + 1);
                linalg::integer_row(&aug)
            })
            .collect();
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn actions(&self) -> usize {
        self.k
    }

    pub fn transition(&self, state: usize, action: usize) -> &[Rational] {
        &self.transitions[state * self.k + action]
    }

    pub fn reward(&self, state: usize, action: usize) -> &Rational {
        &self.rewards[state * self.k + action]
    }

    pub fn discount(&self) -> &Rational {
        &self.discount
    }

    /// Returns the same instance with a different discount factor.
    pub fn with_discount(mut self, discount: Rational) -> Result<Self> {
        if discount <= Rational::zero() || discount >= Rational::one() {
            return Err(Error::InvalidMdp(format!(
                "discount {} is outside (0, 1)",
                format_rational(&discount)
            )));
        }
        self.discount = discount;
        self.rescale();
        Ok(self)
    }

    /// `k^n`, the size of the policy space.
    pub fn policy_count(&self) -> u128 {
        policy_count(self.n, self.k)
    }

    /// SHA-256 over a canonical text encoding of the instance:
    /// `n=<n>;k=<k>;gamma=<γ>;` followed by `t=<p_0>,…,<p_{n-1}>;r=<r>;` for
    /// every `(s, a)` in row-major order, all rationals in reduced form.
    pub fn digest(&self) -> [u8; 32] {
        let mut hasher = Sha256::new();
        hasher.update(format!("n={};k={};gamma={};", self.n, self.k, format_rational(&self.discount)).as_bytes());
        for (row, reward) in self.transitions.iter().zip(&self.rewards) {
            hasher.update(b"t=");
            for (i, p) in row.iter().enumerate() {
                if i > 0 {
                    hasher.update(b",");
                }
                hasher.update(format_rational(p).as_bytes());
            }
            hasher.update(format!(";r={};", format_rational(reward)).as_bytes());
        }
        hasher.finalize().into()
    }

    pub fn digest_hex(&self) -> String {
        self.digest().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `k^n`, saturating at `u128::MAX`.
pub fn policy_count(n: usize, k: usize) -> u128 {
    let mut count: u128 = 1;
    for _ in 0..n {
        count = count.saturating_mul(k as u128);
    }
    count
}

pub(crate) fn check_budget(n: usize, k: usize, limit: u64) -> Result<usize> {
    let count = policy_count(n, k);
    if count > limit as u128 {
        return Err(Error::BudgetExceeded { count, limit });
    }
    Ok(count as usize)
}

/// A stationary deterministic policy: one action index per state.
///
/// Ordering is lexicographic on the action vector, which is also the order
/// of [`Policy::index`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Policy(Vec<usize>);

impl Policy {
    pub fn new(actions: Vec<usize>) -> Self {
        Policy(actions)
    }

    pub fn zeros(n: usize) -> Self {
        Policy(alloc::vec![0; n])
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, state: usize) -> usize {
        self.0[state]
    }

    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidPolicy(format!(
                "policy has {} entries, instance has {n} states",
                self.0.len()
            )));
        }
        if let Some((s, a)) = self.0.iter().enumerate().find(|(_, &a)| a >= k) {
            return Err(Error::InvalidPolicy(format!(
                "action {a} at state {s} is not below k = {k}"
            )));
        }
        Ok(())
    }

    /// Mixed-radix index with state 0 as the most significant digit.
    pub fn index(&self, k: usize) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * k + a)
    }

    pub fn from_index(mut index: usize, n: usize, k: usize) -> Self {
        let mut actions = alloc::vec![0; n];
        for slot in actions.iter_mut().rev() {
            *slot = index % k;
            index /= k;
        }
        Policy(actions)
    }

    /// States where the two policies choose different actions.
    pub fn differing_states<'a>(&'a self, other: &'a Policy) -> impl Iterator<Item = usize> + 'a {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(s, _)| s)
    }

    pub fn is_neighbor(&self, other: &Policy) -> bool {
        self.differing_states(other).count() == 1
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// All `k^n` policies in lexicographic order.
pub fn all_policies(n: usize, k: usize) -> impl Iterator<Item = Policy> {
    let count = policy_count(n, k).min(usize::MAX as u128) as usize;
    (0..count).map(move |i| Policy::from_index(i, n, k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueVector(pub Vec<Rational>);

impl ValueVector {
    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Outcome of comparing two value vectors componentwise.
///
/// The non-strict relations are queries on this enum: "greater or equal"
/// is [`Comparison::is_ge`], i.e. `StrictlyGreater` or `Equal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    StrictlyLess,
    Equal,
    StrictlyGreater,
    Incomparable,
}

impl Comparison {
    pub fn is_ge(self) -> bool {
        matches!(self, Comparison::StrictlyGreater | Comparison::Equal)
    }

    pub fn is_le(self) -> bool {
        matches!(self, Comparison::StrictlyLess | Comparison::Equal)
    }

    pub fn reverse(self) -> Self {
        match self {
            Comparison::StrictlyLess => Comparison::StrictlyGreater,
            Comparison::StrictlyGreater => Comparison::StrictlyLess,
            other => other,
        }
    }
}

/// Compares `v` against `w`: `StrictlyGreater` means `v ≥ w` everywhere and
/// `v > w` somewhere.
pub fn compare(v: &ValueVector, w: &ValueVector) -> Result<Comparison> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    Ok(compare_slices(&v.0, &w.0))
}

pub(crate) fn compare_slices(v: &[Rational], w: &[Rational]) -> Comparison {
    let mut greater = false;
    let mut less = false;
    for (a, b) in v.iter().zip(w) {
        match a.cmp(b) {
            core::cmp::Ordering::Greater => greater = true,
            core::cmp::Ordering::Less => less = true,
            core::cmp::Ordering::Equal => {}
        }
        if greater && less {
            return Comparison::Incomparable;
        }
    }
    match (greater, less) {
        (false, false) => Comparison::Equal,
        (true, false) => Comparison::StrictlyGreater,
        (false, true) => Comparison::StrictlyLess,
        (true, true) => Comparison::Incomparable,
    }
}

/// A list of `(state, action)` switches. Well-defined iff no state repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SwitchSet(Vec<(usize, usize)>);

impl SwitchSet {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        SwitchSet(pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn repeated_state(&self) -> Option<usize> {
        let mut seen = BTreeSet::new();
        self.0.iter().map(|&(s, _)| s).find(|&s| !seen.insert(s))
    }

    pub fn is_well_defined(&self) -> bool {
        self.repeated_state().is_none()
    }

    pub fn states(&self) -> BTreeSet<usize> {
        self.0.iter().map(|&(s, _)| s).collect()
    }
}

/// Returns `policy ⊕ u`.
pub fn switch(policy: &Policy, u: &SwitchSet) -> Result<Policy> {
    if let Some(s) = u.repeated_state() {
        return Err(Error::StateRepeated(s));
    }
    let mut actions = policy.0.clone();
    for &(s, a) in u.pairs() {
        let slot = actions.get_mut(s).ok_or_else(|| {
            Error::InvalidPolicy(format!("switch names state {s}, policy has {} states", policy.len()))
        })?;
        *slot = a;
    }
    Ok(Policy(actions))
}

pub(crate) fn switch_one(policy: &Policy, state: usize, action: usize) -> Policy {
    let mut actions = policy.0.clone();
    actions[state] = action;
    Policy(actions)
}

/// A set of `(state, action)` pairs together with its projection onto
/// states. Sets may come from an MDP or be abstract.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImprovementSet(BTreeSet<(usize, usize)>);

impl ImprovementSet {
    pub fn new() -> Self {
        ImprovementSet(BTreeSet::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        ImprovementSet(pairs.into_iter().collect())
    }

    pub fn insert(&mut self, state: usize, action: usize) {
        self.0.insert((state, action));
    }

    pub fn contains(&self, state: usize, action: usize) -> bool {
        self.0.contains(&(state, action))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The improvement states: the projection of the pairs onto states.
    pub fn states(&self) -> BTreeSet<usize> {
        self.0.iter().map(|&(s, _)| s).collect()
    }

    pub fn state_count(&self) -> usize {
        self.states().len()
    }

    /// Actions listed for `state`, ascending.
    pub fn actions_at(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.range((state, 0)..=(state, usize::MAX)).map(|&(_, a)| a)
    }

    /// Keeps a single pair per state: the one with the lowest action index.
    pub fn simplified(&self) -> Self {
        let mut seen = BTreeSet::new();
        ImprovementSet(self.0.iter().copied().filter(|&(s, _)| seen.insert(s)).collect())
    }

    pub fn to_switch_set(&self) -> SwitchSet {
        SwitchSet(self.0.iter().copied().collect())
    }
}

impl fmt::Display for ImprovementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({s},{a})")?;
        }
        f.write_str("}")
    }
}

/// Exact value vector of `policy`.
pub fn evaluate_policy(mdp: &Mdp, policy: &Policy) -> Result<ValueVector> {
    policy.validate(mdp.n, mdp.k)?;
    Ok(evaluate_unchecked(mdp, policy))
}

pub(crate) fn evaluate_unchecked(mdp: &Mdp, policy: &Policy) -> ValueVector {
    let rows = (0..mdp.n)
        .map(|s| mdp.scaled[s * mdp.k + policy.action(s)].clone())
        .collect();
    // I - γP is strictly diagonally dominant for γ < 1, hence nonsingular.
    let (numers, denom) = linalg::solve_integer(rows).expect("I - γP is nonsingular for γ < 1");
    ValueVector(numers.into_iter().map(|x| Rational::new(x, denom.clone())).collect())
}

/// One-step lookahead `r(s, a) + γ · P(s, a) · v`.
pub fn lookahead(mdp: &Mdp, state: usize, action: usize, value: &ValueVector) -> Rational {
    let expected: Rational = mdp
        .transition(state, action)
        .iter()
        .zip(value.values())
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, v)| p * v)
        .sum();
    mdp.reward(state, action) + &mdp.discount * expected
}

/// The improvement set by definition: evaluates every single-switch
/// neighbour and keeps those that strictly dominate `policy`.
pub fn improvement_set_oracle(mdp: &Mdp, policy: &Policy) -> Result<ImprovementSet> {
    let base = evaluate_policy(mdp, policy)?;
    let mut set = ImprovementSet::new();
    for s in 0..mdp.n {
        for a in 0..mdp.k {
            if a == policy.action(s) {
                continue;
            }
            let neighbour = evaluate_unchecked(mdp, &switch_one(policy, s, a));
            if compare_slices(&neighbour.0, &base.0) == Comparison::StrictlyGreater {
                set.insert(s, a);
            }
        }
    }
    Ok(set)
}

/// The improvement set by one-step lookahead: `(s, a)` improves iff
/// `r(s, a) + γ P(s, a) v^π > v^π(s)`.
pub fn improvement_set_fast(mdp: &Mdp, policy: &Policy) -> Result<ImprovementSet> {
    let value = evaluate_policy(mdp, policy)?;
    Ok(improvement_set_from_value(mdp, policy, &value))
}

/// Lookahead improvement set for a policy whose value is already known.
pub fn improvement_set_from_value(mdp: &Mdp, policy: &Policy, value: &ValueVector) -> ImprovementSet {
    // With v = y / d over a common denominator, `lookahead > v(s)` has the
    // sign of `c·r - Σ_t c(δ_st - γp_t) y_t` for the row's positive scale c.
    let d = value.0.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let y: Vec<BigInt> = value.0.iter().map(|v| v.numer() * (&d / v.denom())).collect();
    let mut set = ImprovementSet::new();
    for s in 0..mdp.n {
        for a in 0..mdp.k {
            if a == policy.action(s) {
                continue;
            }
            let row = &mdp.scaled[s * mdp.k + a];
            let mut acc = &row[mdp.n] * &d;
            for (c, yt) in row[..mdp.n].iter().zip(&y) {
                if !c.is_zero() {
                    acc -= c * yt;
                }
            }
            if acc.is_positive() {
                set.insert(s, a);
            }
        }
    }
    set
}

/// Value vectors of all `k^n` policies, indexed by [`Policy::index`].
#[derive(Clone, Debug)]
pub struct ValueTable {
    n: usize,
    k: usize,
    values: Vec<ValueVector>,
}

impl ValueTable {
    pub fn build(mdp: &Mdp, limit: u64) -> Result<Self> {
        let count = check_budget(mdp.n, mdp.k, limit)?;
        let values = (0..count)
            .map(|i| evaluate_unchecked(mdp, &Policy::from_index(i, mdp.n, mdp.k)))
            .collect();
        Ok(ValueTable {
            n: mdp.n,
            k: mdp.k,
            values,
        })
    }

    /// Assembles a table from values computed elsewhere (for example in
    /// parallel). `values[i]` must belong to `Policy::from_index(i, n, k)`.
    pub fn from_values(n: usize, k: usize, values: Vec<ValueVector>) -> Result<Self> {
        if policy_count(n, k) != values.len() as u128 {
            return Err(Error::Precondition(format!(
                "value table for n = {n}, k = {k} needs {} entries, got {}",
                policy_count(n, k),
                values.len()
            )));
        }
        Ok(ValueTable { n, k, values })
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn actions(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, policy: &Policy) -> &ValueVector {
        &self.values[policy.index(self.k)]
    }

    pub fn value_at(&self, index: usize) -> &ValueVector {
        &self.values[index]
    }

    pub fn compare(&self, left: &Policy, right: &Policy) -> Comparison {
        compare_slices(&self.value(left).0, &self.value(right).0)
    }

    /// Same definition as [`improvement_set_oracle`], reading neighbour
    /// values from the table.
    pub fn improvement_set(&self, policy: &Policy) -> ImprovementSet {
        let base = self.value(policy);
        let mut set = ImprovementSet::new();
        for s in 0..self.n {
            for a in 0..self.k {
                if a == policy.action(s) {
                    continue;
                }
                let neighbour = self.value(&switch_one(policy, s, a));
                if compare_slices(&neighbour.0, &base.0) == Comparison::StrictlyGreater {
                    set.insert(s, a);
                }
            }
        }
        set
    }

    /// Lexicographically smallest policy whose value is componentwise
    /// maximal over the whole table.
    pub fn optimal(&self) -> Result<Policy> {
        let mut best = self.values[0].0.clone();
        for v in &self.values[1..] {
            for (b, x) in best.iter_mut().zip(&v.0) {
                if x > b {
                    *b = x.clone();
                }
            }
        }
        self.values
            .iter()
            .position(|v| v.0 == best)
            .map(|i| Policy::from_index(i, self.n, self.k))
            .ok_or_else(|| Error::TheoremViolation("no policy attains the componentwise maximum".into()))
    }
}

/// Optimal policy by exhaustive enumeration; ties go to the
/// lexicographically smallest action vector.
pub fn brute_force_optimal(mdp: &Mdp, limit: u64) -> Result<Policy> {
    ValueTable::build(mdp, limit)?.optimal()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{from_int, from_ints};
    use alloc::string::ToString;
    use alloc::vec;

    fn vv(xs: &[i64]) -> ValueVector {
        ValueVector(xs.iter().map(|&x| from_int(x)).collect())
    }

    #[test]
    fn rejects_bad_instances() {
        let one = || vec![from_int(1)];
        // k = 1
        let err = Mdp::new(vec![vec![one()]], vec![vec![from_int(1)]], from_ints(1, 2)).unwrap_err();
        assert!(matches!(err, Error::InvalidMdp(_)));
        // duplicate action with k = 2 is fine
        Mdp::new(vec![vec![one(), one()]], vec![vec![from_int(1), from_int(1)]], from_ints(1, 2)).unwrap();
        // row sum 9/10
        let err = Mdp::new(
            vec![vec![vec![from_ints(9, 10)], one()]],
            vec![vec![from_int(0), from_int(0)]],
            from_ints(1, 2),
        )
        .unwrap_err();
        assert!(err.to_string().contains("row sum ≠ 1"), "{err}");
        // discount
        for g in [from_int(0), from_int(1), from_ints(3, 2)] {
            assert!(Mdp::new(vec![vec![one(), one()]], vec![vec![from_int(0), from_int(0)]], g).is_err());
        }
        // negative probability compensated elsewhere
        let err = Mdp::new(
            vec![vec![vec![from_int(2), from_int(-1)], vec![from_int(1), from_int(0)]], vec![vec![from_int(1), from_int(0)], vec![from_int(1), from_int(0)]]],
            vec![vec![from_int(0), from_int(0)], vec![from_int(0), from_int(0)]],
            from_ints(1, 2),
        )
        .unwrap_err();
        assert!(err.to_string().contains("outside [0, 1]"));
        // ragged
        let err = Mdp::new(
            vec![vec![vec![from_int(1), from_int(0)]; 2], vec![vec![from_int(1), from_int(0)]]],
            vec![vec![from_int(0), from_int(0)], vec![from_int(0)]],
            from_ints(1, 2),
        )
        .unwrap_err();
        assert!(err.to_string().contains("ragged"));
    }

    #[test]
    fn evaluation_examples() {
        let one = one_state();
        assert_eq!(evaluate_policy(&one, &Policy::new(vec![1])).unwrap(), vv(&[2]));
        let two = two_state();
        assert_eq!(evaluate_policy(&two, &Policy::new(vec![1, 1])).unwrap(), vv(&[2, 2]));
        assert_eq!(evaluate_policy(&two, &Policy::new(vec![0, 0])).unwrap(), vv(&[0, 0]));
        assert_eq!(evaluate_policy(&two, &Policy::new(vec![1, 0])).unwrap(), vv(&[2, 0]));
        assert!(evaluate_policy(&two, &Policy::new(vec![2, 0])).is_err());
        assert!(evaluate_policy(&two, &Policy::new(vec![0])).is_err());
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(compare(&vv(&[1, 0]), &vv(&[0, 1])).unwrap(), Comparison::Incomparable);
        assert_eq!(compare(&vv(&[2, 2]), &vv(&[0, 0])).unwrap(), Comparison::StrictlyGreater);
        assert_eq!(compare(&vv(&[1, 1]), &vv(&[1, 1])).unwrap(), Comparison::Equal);
        assert_eq!(compare(&vv(&[1, 1]), &vv(&[1, 2])).unwrap(), Comparison::StrictlyLess);
        assert!(compare(&vv(&[1]), &vv(&[1, 2])).is_err());
    }

    #[test]
    fn switch_examples() {
        let p = Policy::new(vec![0, 0]);
        assert_eq!(switch(&p, &SwitchSet::new(vec![(0, 1)])).unwrap(), Policy::new(vec![1, 0]));
        assert_eq!(switch(&p, &SwitchSet::default()).unwrap(), p);
        assert_eq!(
            switch(&p, &SwitchSet::new(vec![(0, 1), (0, 2)])).unwrap_err(),
            Error::StateRepeated(0)
        );
    }

    #[test]
    fn improvement_set_examples() {
        let one = one_state();
        let expect = ImprovementSet::from_pairs([(0, 1)]);
        assert_eq!(improvement_set_oracle(&one, &Policy::new(vec![0])).unwrap(), expect);
        assert_eq!(improvement_set_fast(&one, &Policy::new(vec![0])).unwrap(), expect);

        let two = two_state();
        let expect = ImprovementSet::from_pairs([(0, 1), (1, 1)]);
        assert_eq!(improvement_set_oracle(&two, &Policy::new(vec![0, 0])).unwrap(), expect);
        assert_eq!(improvement_set_fast(&two, &Policy::new(vec![0, 0])).unwrap(), expect);
        let opt = Policy::new(vec![1, 1]);
        assert!(improvement_set_oracle(&two, &opt).unwrap().is_empty());
        assert!(improvement_set_fast(&two, &opt).unwrap().is_empty());
    }

    #[test]
    fn equal_rewards_have_no_improvement() {
        let row = |s: usize| {
            let mut r = vec![from_ints(1, 3); 3];
            r[s] = from_ints(1, 3);
            r
        };
        let mdp = Mdp::new(
            (0..3).map(|s| vec![row(s), vec![from_int(1), from_int(0), from_int(0)]]).collect(),
            vec![vec![from_int(5), from_int(5)]; 3],
            from_ints(9, 10),
        )
        .unwrap();
        for p in all_policies(3, 2) {
            assert!(improvement_set_fast(&mdp, &p).unwrap().is_empty());
            assert!(improvement_set_oracle(&mdp, &p).unwrap().is_empty());
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_optimal(&two_state(), 1 << 24).unwrap(), Policy::new(vec![1, 1]));
        assert_eq!(brute_force_optimal(&one_state(), 1 << 24).unwrap(), Policy::new(vec![1]));
        let zero = Mdp::new(
            vec![vec![vec![from_int(1), from_int(0)], vec![from_int(0), from_int(1)]]; 2],
            vec![vec![from_int(0), from_int(0)]; 2],
            from_ints(9, 10),
        )
        .unwrap();
        assert_eq!(brute_force_optimal(&zero, 1 << 24).unwrap(), Policy::zeros(2));
        assert!(matches!(
            brute_force_optimal(&two_state(), 3),
            Err(Error::BudgetExceeded { count: 4, limit: 3 })
        ));
    }

    #[test]
    fn policy_index_roundtrip() {
        let ps: Vec<Policy> = all_policies(3, 3).collect();
        assert_eq!(ps.len(), 27);
        for (i, p) in ps.iter().enumerate() {
            assert_eq!(p.index(3), i);
        }
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Policy::new(vec![0, 1, 2]).to_string(), "(0,1,2)");
    }

    #[test]
    fn simplified_keeps_lowest_action() {
        let t = ImprovementSet::from_pairs([(0, 2), (0, 1), (3, 0)]);
        assert_eq!(t.simplified(), ImprovementSet::from_pairs([(0, 1), (3, 0)]));
        assert_eq!(t.actions_at(0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(t.state_count(), 2);
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = two_state();
        assert_eq!(a.digest(), two_state().digest());
        let b = two_state().with_discount(from_ints(1, 3)).unwrap();
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest_hex().len(), 64);
    }
}
