//! The full property suite for a trace file.

use pi_core::analysis::{
    check_acyclicity, check_neighbor_chains, check_non_inclusion, check_non_inclusion_k2, check_tensor_ranks,
    count_repeated_state_sets, Rule, ViolationReport,
};
use pi_core::bounds::validate_trace_bounds;
use pi_core::dag::DominationGraph;
use pi_core::iteration::check_trace;
use pi_core::mdp::{evaluate_policy, improvement_set_from_value};
use pi_core::pseudo::verify_pseudo;
use pi_core::Mdp;

use crate::error::Result;
use crate::trace_file::{TraceFile, TraceKind};

/// Named reports, in a fixed order.
pub type Suite = Vec<(&'static str, ViolationReport)>;

pub fn verify(file: &TraceFile, mdp: Option<&Mdp>, enumeration_limit: u64) -> Result<Suite> {
    let seq = file.to_sequence()?;
    let mut suite: Suite = Vec::new();
    suite.push(("non-inclusion", check_non_inclusion(&seq)));
    if seq.actions() == 2 {
        suite.push(("non-inclusion-k2", check_non_inclusion_k2(&seq)?));
    }
    suite.push(("acyclicity", check_acyclicity(&seq)));
    suite.push(("repeated-state-sets", count_repeated_state_sets(&seq).1));
    suite.push(("tensor-rank", check_tensor_ranks(&seq)));
    match file.header.kind {
        TraceKind::Abstract => {}
        TraceKind::Pseudo => suite.push(("pseudo", verify_pseudo(&file.to_pseudo()?))),
        TraceKind::Run => {
            let trace = file.to_trace()?;
            suite.push(("trace", check_trace(&trace)));
            suite.push(("bounds", validate_trace_bounds(&trace)));
            if let Some(mdp) = mdp {
                let mut report = ViolationReport::default();
                if mdp.digest_hex() != trace.mdp_digest {
                    report.push([], Rule::TraceShape, format!("trace digest {} does not match the MDP", trace.mdp_digest));
                    suite.push(("mdp", report));
                    return Ok(suite);
                }
                for (i, step) in trace.steps.iter().enumerate() {
                    let value = evaluate_policy(mdp, &step.policy)?;
                    if value != step.value {
                        report.push([i], Rule::TraceShape, format!("recorded value of {} is not its exact value", step.policy));
                    }
                    if improvement_set_from_value(mdp, &step.policy, &value) != step.improvement_set {
                        report.push([i], Rule::TraceShape, format!("recorded improvement set of {} is wrong", step.policy));
                    }
                }
                suite.push(("mdp", report));
                let dag = DominationGraph::build(mdp, enumeration_limit)?;
                suite.push(("neighbor-chains", check_neighbor_chains(&dag, &trace)));
            }
        }
    }
    Ok(suite)
}
