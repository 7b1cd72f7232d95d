//! Iteration bounds for greedy Policy Iteration.
//!
//! Two bounds are exposed: the classic `13 k^n / n` (exact rational) and the
//! finite-n form of the sharper bound
//!
//! ```text
//! k^n / n^2 + k^n / ((k-1)/k * n - sqrt(n ln n))
//! ```
//!
//! capped at the trivial `k^n`. The first term counts improvement sets of
//! small size via a Hoeffding tail, the second counts those of large size.

use alloc::format;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::analysis::{Rule, ViolationReport};
use crate::error::{Error, Result};
use crate::iteration::PiTrace;
use crate::rational::Rational;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 1 || k < 2 {
        return Err(Error::Precondition(format!("bounds need n ≥ 1 and k ≥ 2, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// `13 k^n / n`, exactly.
pub fn mansour_singh_bound(n: usize, k: usize) -> Result<Rational> {
    check_nk(n, k)?;
    let kn: BigInt = Pow::pow(BigInt::from(k), n);
    Ok(Rational::new(kn * 13, BigInt::from(n)))
}

/// Probability bound on an improvement set having few states: exactly `1/n^2`.
pub fn hoeffding_tail(n: usize, k: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Precondition(format!("the tail bound needs n ≥ 2, got {n}")));
    }
    check_nk(n, k)?;
    let n = BigInt::from(n);
    Ok(Rational::new(BigInt::one(), &n * &n))
}

/// `sqrt(n ln n)`, the deviation below the mean improvement-set size.
pub fn deviation(n: usize) -> f64 {
    let n = n as f64;
    libm::sqrt(n * libm::log(n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundBreakdown {
    pub n: usize,
    pub k: usize,
    pub f_n: f64,
    /// `k^n / n^2`. Infinite for `n = 1`.
    pub small_set_count_bound: f64,
    /// `k^n / ((k-1)/k n - f(n))`, or infinity when the denominator is not positive.
    pub large_set_count_bound: f64,
    pub total_bound: f64,
    pub fallback_used: bool,
    /// `total_bound * n / k^n`, computed without forming `k^n`.
    pub normalized: f64,
}

impl BoundBreakdown {
    /// `total_bound / (k/(k-1) k^n/n)`.
    pub fn ratio_to_leading_term(&self) -> f64 {
        let k = self.k as f64;
        self.normalized * (k - 1.0) / k
    }

    /// Smallest integer that is certainly not below the bound.
    pub fn ceiling(&self) -> f64 {
        libm::ceil(libm::nextafter(self.total_bound, f64::INFINITY))
    }
}

pub fn improved_bound(n: usize, k: usize) -> Result<BoundBreakdown> {
    check_nk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let f_n = deviation(n);
    let kn = libm::pow(kf, nf);
    let denominator = (kf - 1.0) / kf * nf - f_n;
    // Per unit of k^n.
    let small = if n >= 2 { 1.0 / (nf * nf) } else { f64::INFINITY };
    let large = if denominator > 0.0 { 1.0 / denominator } else { f64::INFINITY };
    let formula = small + large;
    let fallback_used = formula.is_nan() || formula >= 1.0;
    let scaled = if fallback_used { 1.0 } else { formula };
    Ok(BoundBreakdown {
        n,
        k,
        f_n,
        small_set_count_bound: kn * small,
        large_set_count_bound: kn * large,
        total_bound: kn * scaled,
        fallback_used,
        normalized: scaled * nf,
    })
}

/// Checks the number of policies in `trace` against `k^n`, `13 k^n / n` and
/// the improved bound (rounded up).
pub fn validate_trace_bounds(trace: &PiTrace) -> ViolationReport {
    let mut report = ViolationReport::default();
    let (n, k) = (trace.n, trace.k);
    let len = trace.len();
    let last = len.saturating_sub(1);
    let Ok(ms) = mansour_singh_bound(n, k) else {
        report.push([], Rule::IterationBound, format!("no bound for n = {n}, k = {k}"));
        return report;
    };
    let kn: BigInt = Pow::pow(BigInt::from(k), n);
    if BigInt::from(len) > kn {
        report.push([last], Rule::IterationBound, format!("{len} policies exceed k^n = {kn}"));
    }
    if Rational::from_integer(BigInt::from(len)) > ms {
        report.push([last], Rule::IterationBound, format!("{len} policies exceed 13·k^n/n = {ms}"));
    }
    let improved = improved_bound(n, k).expect("n and k already checked");
    if (len as f64) > improved.ceiling() {
        report.push(
            [last],
            Rule::IterationBound,
            format!("{len} policies exceed the improved bound {}", improved.total_bound),
        );
    }
    report
}
