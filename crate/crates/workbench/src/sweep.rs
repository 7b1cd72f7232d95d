//! Batch experiments with CSV output.

use std::io::Write;

use pi_core::bounds::{improved_bound, mansour_singh_bound};
use pi_core::generate::{generate_random_mdp, random_policy};
use pi_core::iteration::run_policy_iteration;
use pi_core::rational::format_rational;
use pi_core::Policy;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartRule {
    Zeros,
    /// Drawn from the instance seed.
    Random,
}

impl StartRule {
    pub fn id(self) -> &'static str {
        match self {
            StartRule::Zeros => "zeros",
            StartRule::Random => "random",
        }
    }

    pub fn policy(self, n: usize, k: usize, seed: u64) -> Policy {
        match self {
            StartRule::Zeros => Policy::zeros(n),
            StartRule::Random => random_policy(n, k, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub seeds: u64,
    pub seed_base: u64,
    pub start: StartRule,
    /// Successors per state-action pair; `None` means `min(n, 3)`.
    pub support: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub start: String,
    /// Policies visited, the optimal one included.
    pub iterations: usize,
    pub ms_bound: String,
    pub improved_bound: f64,
}

/// One greedy PI run per `(n, k, seed)`, rows in that order.
pub fn run_sweep(config: &SweepConfig) -> pi_core::Result<Vec<SweepRow>> {
    let mut jobs = Vec::new();
    for n in config.n_min..=config.n_max {
        for k in config.k_min..=config.k_max {
            for i in 0..config.seeds {
                jobs.push((n, k, config.seed_base.wrapping_add(i)));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(n, k, seed)| {
            let mdp = generate_random_mdp(n, k, seed, config.support.unwrap_or(n.min(3)))?;
            let trace = run_policy_iteration(&mdp, &config.start.policy(n, k, seed))?;
            Ok(SweepRow {
                n,
                k,
                seed,
                start: config.start.id().into(),
                iterations: trace.len(),
                ms_bound: format_rational(&mansour_singh_bound(n, k)?),
                improved_bound: improved_bound(n, k)?.total_bound,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub k: usize,
    pub ms_bound: String,
    pub improved_bound: f64,
    pub fallback: bool,
}

pub fn bound_rows(n_max: usize, k_max: usize) -> pi_core::Result<Vec<BoundRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for k in 2..=k_max {
            let b = improved_bound(n, k)?;
            rows.push(BoundRow {
                n,
                k,
                ms_bound: format_rational(&mansour_singh_bound(n, k)?),
                improved_bound: b.total_bound,
                fallback: b.fallback_used,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> SweepConfig {
        SweepConfig { n_min: 2, n_max: 3, k_min: 2, k_max: 3, seeds: 3, seed_base: 10, start: StartRule::Zeros, support: None }
    }

    #[test]
    fn rows_are_ordered_and_bounded() {
        let rows = run_sweep(&config()).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!((rows[0].n, rows[0].k, rows[0].seed), (2, 2, 10));
        assert_eq!((rows[11].n, rows[11].k, rows[11].seed), (3, 3, 12));
        for r in &rows {
            assert!(r.iterations >= 1 && (r.iterations as f64) <= r.improved_bound);
        }
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        write_csv(&run_sweep(&config()).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,k,seed,start,iterations,ms_bound,improved_bound\n2,2,10,zeros,"));
        let mut buf = Vec::new();
        write_csv(&bound_rows(3, 3).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,k,ms_bound,improved_bound,fallback\n1,2,26,2.0,true\n"));
    }
}
