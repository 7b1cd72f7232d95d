//! MDP documents.
//!
//! A document is one JSON object:
//!
//! ```json
//! {
//!   "n": 2,
//!   "k": 2,
//!   "gamma": "9/10",
//!   "transitions": [
//!     [["1", "0"], ["0", "1"]],
//!     [["1/2", "1/2"], ["0", "1"]]
//!   ],
//!   "rewards": [
//!     ["0", "1"],
//!     ["1/3", "0"]
//!   ]
//! }
//! ```
//!
//! `transitions[s][a][t]` is the probability of moving from `s` to `t` under
//! action `a`. Numbers are rational strings (`-?digits(/digits)?`) or JSON
//! integers; actions and states are 0-based.

use pi_core::rational::{format_rational, parse_rational};
use pi_core::{Mdp, Rational};
use serde::Deserialize;

use crate::error::{FormatError, Result};

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self, path: &str) -> Result<Rational> {
        match self {
            Number::Int(i) => Ok(Rational::from_integer((*i).into())),
            Number::Text(t) => parse_rational(t).map_err(|e| FormatError::Content { line: 0, message: format!("{path}: {e}") }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    n: usize,
    k: usize,
    gamma: Number,
    transitions: Vec<Vec<Vec<Number>>>,
    rewards: Vec<Vec<Number>>,
}

pub fn parse_mdp(text: &str) -> Result<Mdp> {
    let doc: Document = serde_json::from_str(text).map_err(|e| FormatError::from_json(e, 0))?;
    let content = |message: String| FormatError::Content { line: 0, message };
    if doc.transitions.len() != doc.n || doc.rewards.len() != doc.n {
        return Err(content(format!(
            "n = {} but transitions list {} states and rewards {}",
            doc.n,
            doc.transitions.len(),
            doc.rewards.len()
        )));
    }
    if let Some(s) = doc.transitions.iter().position(|rows| rows.len() != doc.k) {
        return Err(content(format!(
            "ragged action counts: state {s} lists {} actions, k = {}",
            doc.transitions[s].len(),
            doc.k
        )));
    }
    let gamma = doc.gamma.to_rational("gamma")?;
    let transitions = doc
        .transitions
        .iter()
        .enumerate()
        .map(|(s, rows)| {
            rows.iter()
                .enumerate()
                .map(|(a, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(t, p)| p.to_rational(&format!("transitions[{s}][{a}][{t}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rewards = doc
        .rewards
        .iter()
        .enumerate()
        .map(|(s, row)| {
            row.iter()
                .enumerate()
                .map(|(a, r)| r.to_rational(&format!("rewards[{s}][{a}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mdp::new(transitions, rewards, gamma)?)
}

fn string_array(values: impl IntoIterator<Item = String>) -> String {
    serde_json::to_string(&values.into_iter().collect::<Vec<_>>()).expect("strings serialize")
}

/// Canonical document: reduced fractions, one state per line.
pub fn write_mdp(mdp: &Mdp) -> String {
    let (n, k) = (mdp.states(), mdp.actions());
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"n\": {n},\n  \"k\": {k},\n"));
    out.push_str(&format!("  \"gamma\": \"{}\",\n", format_rational(mdp.discount())));
    out.push_str("  \"transitions\": [\n");
    for s in 0..n {
        let rows: Vec<String> = (0..k)
            .map(|a| string_array(mdp.transition(s, a).iter().map(format_rational)))
            .collect();
        let sep = if s + 1 < n { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", rows.join(", ")));
    }
    out.push_str("  ],\n  \"rewards\": [\n");
    for s in 0..n {
        let sep = if s + 1 < n { "," } else { "" };
        let row = string_array((0..k).map(|a| format_rational(mdp.reward(s, a))));
        out.push_str(&format!("    {row}{sep}\n"));
    }
    out.push_str("  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"n": 1, "k": 2, "gamma": "1/2",
        "transitions": [[["1"], [1]]], "rewards": [["1", "1"]]}"#;

    #[test]
    fn minimal_document() {
        let mdp = parse_mdp(MINIMAL).unwrap();
        assert_eq!((mdp.states(), mdp.actions()), (1, 2));
        assert_eq!(parse_mdp(&write_mdp(&mdp)).unwrap(), mdp);
    }

    #[test]
    fn single_action_rejected() {
        let text = r#"{"n": 1, "k": 1, "gamma": "1/2", "transitions": [[["1"]]], "rewards": [["1"]]}"#;
        assert!(parse_mdp(text).is_err());
    }

    #[test]
    fn row_sum_reported() {
        let text = MINIMAL.replace(r#"[["1"], [1]]"#, r#"[["9/10"], [1]]"#);
        let err = parse_mdp(&text).unwrap_err();
        assert!(err.to_string().contains("row sum ≠ 1"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_mdp("{\n  \"n\": 1,\n  \"k\": ]").unwrap_err();
        match err {
            FormatError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 8)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn bad_rational_names_its_place() {
        let text = MINIMAL.replace(r#""1/2""#, r#""1/0""#);
        assert!(parse_mdp(&text).unwrap_err().to_string().contains("gamma"));
        let text = MINIMAL.replace(r#"["1", "1"]"#, r#"["1", "x"]"#);
        assert!(parse_mdp(&text).unwrap_err().to_string().contains("rewards[0][1]"));
    }

    #[test]
    fn ragged_and_mismatched_shapes() {
        let text = r#"{"n": 2, "k": 2, "gamma": "1/2",
            "transitions": [[["1","0"],["1","0"]], [["1","0"]]], "rewards": [["0","0"],["0","0"]]}"#;
        assert!(parse_mdp(text).unwrap_err().to_string().contains("ragged"));
        let text = MINIMAL.replace(r#""n": 1"#, r#""n": 2"#);
        assert!(parse_mdp(&text).is_err());
        let text = MINIMAL.replace(r#""n": 1"#, r#""n": 1, "extra": 0"#);
        assert!(parse_mdp(&text).is_err());
    }
}
