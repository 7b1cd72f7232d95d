//! Greedy Policy Iteration.
//!
//! Each iteration switches every improvement state at once. Within a state
//! the action with the largest one-step lookahead wins; ties go to the
//! lowest action index.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::{Rule, ViolationReport};
use crate::error::{Error, Result};
use crate::mdp::{
    compare_slices, evaluate_policy, improvement_set_from_value, lookahead, policy_count, switch,
    Comparison, ImprovementSet, Mdp, Policy, SwitchSet, ValueVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateRule {
    /// One switch per improvement state, best lookahead, lowest index on ties.
    Greedy,
}

impl UpdateRule {
    pub fn id(self) -> &'static str {
        match self {
            UpdateRule::Greedy => "greedy",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        match id {
            "greedy" => Some(UpdateRule::Greedy),
            _ => None,
        }
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiStep {
    pub policy: Policy,
    pub value: ValueVector,
    pub improvement_set: ImprovementSet,
    /// Empty on the final step.
    pub chosen_switch: SwitchSet,
}

/// The policies visited by one run together with their evaluations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTrace {
    pub n: usize,
    pub k: usize,
    pub mdp_digest: String,
    pub update_rule: UpdateRule,
    pub steps: Vec<PiStep>,
}

impl PiTrace {
    /// Number of policies visited, the final one included.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_policy(&self) -> Option<&Policy> {
        self.steps.last().map(|s| &s.policy)
    }
}

fn greedy_switch(mdp: &Mdp, policy: &Policy, value: &ValueVector, improvement: &ImprovementSet) -> SwitchSet {
    let pairs = improvement
        .states()
        .into_iter()
        .map(|s| {
            let mut best = policy.action(s);
            let mut best_q = value.values()[s].clone();
            for a in 0..mdp.actions() {
                if a == policy.action(s) {
                    continue;
                }
                let q = lookahead(mdp, s, a, value);
                if q > best_q {
                    best = a;
                    best_q = q;
                }
            }
            (s, best)
        })
        .collect();
    SwitchSet::new(pairs)
}

/// One greedy iteration: returns `π ⊕ U` and `U`.
pub fn greedy_step(mdp: &Mdp, policy: &Policy) -> Result<(Policy, SwitchSet)> {
    let value = evaluate_policy(mdp, policy)?;
    let improvement = improvement_set_from_value(mdp, policy, &value);
    if improvement.is_empty() {
        return Err(Error::EmptyImprovementSet);
    }
    let u = greedy_switch(mdp, policy, &value, &improvement);
    Ok((switch(policy, &u)?, u))
}

/// Runs greedy PI from `start` with the trivial cap of `k^n` iterations.
pub fn run_policy_iteration(mdp: &Mdp, start: &Policy) -> Result<PiTrace> {
    let cap = policy_count(mdp.states(), mdp.actions()).min(u64::MAX as u128) as u64;
    run_policy_iteration_capped(mdp, start, cap)
}

pub fn run_policy_iteration_capped(mdp: &Mdp, start: &Policy, cap: u64) -> Result<PiTrace> {
    let mut steps = Vec::new();
    let mut policy = start.clone();
    loop {
        let value = evaluate_policy(mdp, &policy)?;
        let improvement_set = improvement_set_from_value(mdp, &policy, &value);
        if improvement_set.is_empty() {
            steps.push(PiStep {
                policy,
                value,
                improvement_set,
                chosen_switch: SwitchSet::default(),
            });
            break;
        }
        if steps.len() as u64 >= cap {
            return Err(Error::IterationCapExceeded(cap));
        }
        let chosen_switch = greedy_switch(mdp, &policy, &value, &improvement_set);
        let next = switch(&policy, &chosen_switch)?;
        steps.push(PiStep {
            policy,
            value,
            improvement_set,
            chosen_switch,
        });
        policy = next;
    }
    Ok(PiTrace {
        n: mdp.states(),
        k: mdp.actions(),
        mdp_digest: mdp.digest_hex(),
        update_rule: UpdateRule::Greedy,
        steps,
    })
}

/// Structural checks that need only the trace itself: strictly increasing
/// values, empty final improvement set, and each chosen switch being a
/// well-defined subset of the improvement set that covers every improvement
/// state and produces the next policy.
pub fn check_trace(trace: &PiTrace) -> ViolationReport {
    let mut report = ViolationReport::default();
    for (i, step) in trace.steps.iter().enumerate() {
        if let Err(e) = step.policy.validate(trace.n, trace.k) {
            report.push([i], Rule::TraceShape, format!("{e}"));
        }
        if step.value.len() != trace.n {
            report.push([i], Rule::TraceShape, format!("value has {} entries, n = {}", step.value.len(), trace.n));
        }
        if let Some(s) = step.chosen_switch.repeated_state() {
            report.push([i], Rule::SwitchSubset, format!("chosen switch repeats state {s}"));
        }
        if let Some(&(s, a)) = step
            .chosen_switch
            .pairs()
            .iter()
            .find(|&&(s, a)| !step.improvement_set.contains(s, a))
        {
            report.push([i], Rule::SwitchSubset, format!("chosen pair ({s},{a}) is not in {}", step.improvement_set));
        }
        let is_last = i + 1 == trace.steps.len();
        if is_last {
            if !step.improvement_set.is_empty() {
                report.push([i], Rule::FinalNotOptimal, format!("final improvement set {} is not empty", step.improvement_set));
            }
            continue;
        }
        if trace.update_rule == UpdateRule::Greedy && step.chosen_switch.states() != step.improvement_set.states() {
            report.push(
                [i],
                Rule::GreedyCoverage,
                format!(
                    "chosen switch covers {} states, improvement states number {}",
                    step.chosen_switch.states().len(),
                    step.improvement_set.state_count()
                ),
            );
        }
        let next = &trace.steps[i + 1];
        match switch(&step.policy, &step.chosen_switch) {
            Ok(p) if p == next.policy => {}
            _ => report.push([i, i + 1], Rule::SwitchSubset, format!("{} ⊕ switch does not give {}", step.policy, next.policy)),
        }
        if next.value.len() == step.value.len()
            && compare_slices(next.value.values(), step.value.values()) != Comparison::StrictlyGreater
        {
            report.push([i, i + 1], Rule::StrictIncrease, format!("value of {} does not strictly dominate {}", next.policy, step.policy));
        }
    }
    report.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_random_mdp;
    use crate::mdp::fixtures::two_state;
    use crate::mdp::{all_policies, brute_force_optimal, evaluate_policy};
    use crate::rational::{from_int, from_ints};
    use alloc::vec;

    #[test]
    fn greedy_step_two_state() {
        let (next, u) = greedy_step(&two_state(), &Policy::zeros(2)).unwrap();
        assert_eq!(next, Policy::new(vec![1, 1]));
        assert_eq!(u, SwitchSet::new(vec![(0, 1), (1, 1)]));
        assert_eq!(greedy_step(&two_state(), &next).unwrap_err(), Error::EmptyImprovementSet);
    }

    #[test]
    fn greedy_ties_take_lowest_index() {
        // Actions 1 and 2 are identical and better than action 0.
        let stay = vec![from_int(1)];
        let mdp = Mdp::new(
            vec![vec![stay.clone(), stay.clone(), stay]],
            vec![vec![from_int(0), from_int(3), from_int(3)]],
            from_ints(1, 2),
        )
        .unwrap();
        let (next, u) = greedy_step(&mdp, &Policy::zeros(1)).unwrap();
        assert_eq!(next, Policy::new(vec![1]));
        assert_eq!(u.pairs(), &[(0, 1)]);
    }

    #[test]
    fn two_state_run() {
        let trace = run_policy_iteration(&two_state(), &Policy::zeros(2)).unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace.final_policy(), Some(&Policy::new(vec![1, 1])));
        assert!(check_trace(&trace).ok());
        let trace = run_policy_iteration(&two_state(), &Policy::new(vec![1, 1])).unwrap();
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn random_runs_reach_optimum() {
        for seed in 0..40u64 {
            let n = 2 + (seed as usize % 4);
            let k = 2 + (seed as usize % 2);
            let mdp = generate_random_mdp(n, k, seed, n.min(3)).unwrap();
            let opt = brute_force_optimal(&mdp, 1 << 24).unwrap();
            let best = evaluate_policy(&mdp, &opt).unwrap();
            for start in all_policies(n, k).step_by(3) {
                let trace = run_policy_iteration(&mdp, &start).unwrap();
                assert!(check_trace(&trace).ok());
                assert_eq!(trace.steps.last().unwrap().value, best);
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let err = run_policy_iteration_capped(&two_state(), &Policy::zeros(2), 0).unwrap_err();
        assert_eq!(err, Error::IterationCapExceeded(0));
    }

    #[test]
    fn tampered_trace_is_flagged() {
        let mut trace = run_policy_iteration(&two_state(), &Policy::zeros(2)).unwrap();
        trace.steps[0].chosen_switch = SwitchSet::new(vec![(0, 1)]);
        let report = check_trace(&trace);
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| v.rule == Rule::GreedyCoverage));
    }
}
