//! Traces as JSON lines.
//!
//! The first line is a header, every further line one policy:
//!
//! ```text
//! {"format":"pi-trace","version":1,"kind":"run","n":2,"k":2,"mdp_digest":"…","update_rule":"greedy"}
//! {"iteration":0,"policy":[0,0],"value":["0","0"],"improvement_set":[[0,1],[1,1]],"chosen_switch":[[0,1],[1,1]]}
//! {"iteration":1,"policy":[1,1],"value":["2","2"],"improvement_set":[],"chosen_switch":[]}
//! ```
//!
//! `kind` is `run` (a PI trace, values present), `abstract` (policies with
//! explicit improvement sets only) or `pseudo` (a pseudo-PI supersequence
//! whose records carry `in_subsequence`).

use pi_core::analysis::AnnotatedSequence;
use pi_core::iteration::{PiStep, PiTrace, UpdateRule};
use pi_core::pseudo::PseudoPiSequence;
use pi_core::rational::{format_rational, parse_rational};
use pi_core::{ImprovementSet, Policy, SwitchSet, ValueVector};
use serde::{Deserialize, Serialize};

use crate::error::{FormatError, Result};

pub const FORMAT: &str = "pi-trace";
pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Run,
    Abstract,
    Pseudo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub kind: TraceKind,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mdp_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update_rule: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub iteration: usize,
    pub policy: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Vec<String>>,
    pub improvement_set: Vec<(usize, usize)>,
    #[serde(default)]
    pub chosen_switch: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_subsequence: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub header: Header,
    pub records: Vec<Record>,
}

fn header(kind: TraceKind, n: usize, k: usize) -> Header {
    Header {
        format: FORMAT.into(),
        version: VERSION,
        kind,
        n,
        k,
        mdp_digest: None,
        update_rule: None,
    }
}

impl TraceFile {
    pub fn from_trace(trace: &PiTrace) -> Self {
        let mut h = header(TraceKind::Run, trace.n, trace.k);
        h.mdp_digest = Some(trace.mdp_digest.clone());
        h.update_rule = Some(trace.update_rule.id().into());
        let records = trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, step)| Record {
                iteration: i,
                policy: step.policy.actions().to_vec(),
                value: Some(step.value.values().iter().map(format_rational).collect()),
                improvement_set: step.improvement_set.pairs().collect(),
                chosen_switch: step.chosen_switch.pairs().to_vec(),
                in_subsequence: None,
            })
            .collect();
        TraceFile { header: h, records }
    }

    pub fn from_sequence(seq: &AnnotatedSequence) -> Self {
        let records = seq
            .items()
            .iter()
            .enumerate()
            .map(|(i, (p, t))| Record {
                iteration: i,
                policy: p.actions().to_vec(),
                value: None,
                improvement_set: t.pairs().collect(),
                chosen_switch: Vec::new(),
                in_subsequence: None,
            })
            .collect();
        TraceFile { header: header(TraceKind::Abstract, seq.states(), seq.actions()), records }
    }

    pub fn from_pseudo(p: &PseudoPiSequence) -> Self {
        let mut file = Self::from_sequence(&p.supersequence);
        file.header.kind = TraceKind::Pseudo;
        for (i, r) in file.records.iter_mut().enumerate() {
            r.in_subsequence = Some(p.subsequence_indices.binary_search(&i).is_ok());
        }
        file
    }

    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((hl, first)) = lines.next() else {
            return Err(FormatError::Content { line: 1, message: "missing header line".into() });
        };
        let header: Header = serde_json::from_str(first).map_err(|e| FormatError::from_json(e, hl))?;
        if header.format != FORMAT || header.version != VERSION {
            return Err(FormatError::Content {
                line: hl + 1,
                message: format!("unsupported format {:?} version {}", header.format, header.version),
            });
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            let r: Record = serde_json::from_str(line).map_err(|e| FormatError::from_json(e, i))?;
            if r.iteration != records.len() {
                return Err(FormatError::Content {
                    line: i + 1,
                    message: format!("iteration {} out of order, expected {}", r.iteration, records.len()),
                });
            }
            records.push(r);
        }
        Ok(TraceFile { header, records })
    }

    /// Line number of record `i` in the text written by [`Self::to_text`].
    fn line_of(i: usize) -> usize {
        i + 2
    }

    pub fn to_sequence(&self) -> Result<AnnotatedSequence> {
        let items = self
            .records
            .iter()
            .map(|r| (Policy::new(r.policy.clone()), ImprovementSet::from_pairs(r.improvement_set.iter().copied())))
            .collect();
        Ok(AnnotatedSequence::new(self.header.n, self.header.k, items)?)
    }

    pub fn to_trace(&self) -> Result<PiTrace> {
        if self.header.kind != TraceKind::Run {
            return Err(FormatError::Content { line: 1, message: format!("a {:?} trace has no values", self.header.kind) });
        }
        let rule_id = self.header.update_rule.as_deref().unwrap_or("greedy");
        let update_rule = UpdateRule::from_id(rule_id)
            .ok_or_else(|| FormatError::Content { line: 1, message: format!("unknown update rule {rule_id:?}") })?;
        let steps = self
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let content = |message: String| FormatError::Content { line: Self::line_of(i), message };
                let value = r
                    .value
                    .as_ref()
                    .ok_or_else(|| content("missing value".into()))?
                    .iter()
                    .map(|v| parse_rational(v).map_err(|e| content(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PiStep {
                    policy: Policy::new(r.policy.clone()),
                    value: ValueVector(value),
                    improvement_set: ImprovementSet::from_pairs(r.improvement_set.iter().copied()),
                    chosen_switch: SwitchSet::new(r.chosen_switch.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PiTrace {
            n: self.header.n,
            k: self.header.k,
            mdp_digest: self.header.mdp_digest.clone().unwrap_or_default(),
            update_rule,
            steps,
        })
    }

    pub fn to_pseudo(&self) -> Result<PseudoPiSequence> {
        let supersequence = self.to_sequence()?;
        let subsequence_indices = self
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.in_subsequence == Some(true))
            .map(|(i, _)| i)
            .collect();
        Ok(PseudoPiSequence { supersequence, subsequence_indices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pi_core::generate::generate_random_mdp;
    use pi_core::iteration::run_policy_iteration;
    use pi_core::pseudo::{build_supersequence, greedy_subsequence};

    #[test]
    fn run_round_trip() {
        let mdp = generate_random_mdp(4, 3, 7, 3).unwrap();
        let trace = run_policy_iteration(&mdp, &Policy::zeros(4)).unwrap();
        let text = TraceFile::from_trace(&trace).to_text();
        let back = TraceFile::parse(&text).unwrap();
        assert_eq!(back.to_trace().unwrap(), trace);
        assert_eq!(back.to_text(), text);
        assert!(text.starts_with(r#"{"format":"pi-trace","version":1,"kind":"run""#));
    }

    #[test]
    fn pseudo_round_trip() {
        let p = greedy_subsequence(build_supersequence(3, 3, 1 << 20).unwrap()).unwrap();
        let file = TraceFile::from_pseudo(&p);
        let back = TraceFile::parse(&file.to_text()).unwrap();
        assert_eq!(back.to_pseudo().unwrap(), p);
        assert!(back.to_trace().is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let text = "{\"format\":\"pi-trace\",\"version\":1,\"kind\":\"abstract\",\"n\":1,\"k\":2}\n{\"iteration\":0,\"policy\":[0],\"improvement_set\":[[0,1]]}\n{\"iteration\":1,\"policy\":[1],\"improvement_set\":[[0,]]}\n";
        match TraceFile::parse(text) {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "{\"format\":\"pi-trace\",\"version\":1,\"kind\":\"abstract\",\"n\":1,\"k\":2}\n{\"iteration\":3,\"policy\":[0],\"improvement_set\":[]}\n";
        assert!(matches!(TraceFile::parse(text), Err(FormatError::Content { line: 2, .. })));
        assert!(TraceFile::parse("").is_err());
    }
}
