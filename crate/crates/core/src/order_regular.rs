//! Order-regular binary matrices.
//!
//! An `m × n` binary matrix with rows `R_1..R_m` is order-regular when for
//! every `i < j ≤ m` some column `c` has
//! `R_i[c] ≠ R_{i+1}[c] = R_j[c] = R_{j+1}[c]`, reading `R_{m+1}` as `R_m`,
//! and its last two rows differ.
//!
//! Rows are stored as bit masks with column 0 in the most significant of
//! the `n` used bits, so numeric order of rows is lexicographic order of
//! their `0`/`1` strings.
//!
//! The search fixes the first row to zeros (complementing a column keeps
//! the condition) and the second row to `0…01…1` (so does permuting
//! columns), then extends row by row in lexicographic order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::analysis::{Rule, ViolationReport};
use crate::error::{Error, Result};

pub const MAX_COLUMNS: usize = 64;
/// Widest matrices the search accepts.
pub const MAX_SEARCH_COLUMNS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderRegularMatrix {
    n: usize,
    rows: Vec<u64>,
}

fn column_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl OrderRegularMatrix {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_COLUMNS {
            return Err(Error::InvalidMatrix(format!("column count {n} outside 1..={MAX_COLUMNS}")));
        }
        if let Some(r) = rows.iter().find(|&&r| r & !column_mask(n) != 0) {
            return Err(Error::InvalidMatrix(format!("row {r:#x} has bits beyond column {n}")));
        }
        Ok(OrderRegularMatrix { n, rows })
    }

    /// Builds a matrix from rows of bits; every row must have the same length.
    pub fn from_bit_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "ragged matrix: row {r} has {} columns, row 0 has {n}",
                rows[r].len()
            )));
        }
        let masks = rows
            .iter()
            .map(|r| r.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
            .collect();
        Self::new(n, masks)
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn bit(&self, row: usize, column: usize) -> bool {
        self.rows[row] >> (self.n - 1 - column) & 1 == 1
    }

    /// Rows as `0`/`1` strings.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows.len())
            .map(|r| (0..self.n).map(|c| if self.bit(r, c) { '1' } else { '0' }).collect())
            .collect()
    }

    /// Rows joined with `;`.
    pub fn compact(&self) -> String {
        self.row_strings().join(";")
    }
}

impl fmt::Display for OrderRegularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_strings() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Columns witnessing pair `(i, j)` given the row that follows `j`.
#[inline]
fn witnesses(ri: u64, ri1: u64, rj: u64, rj1: u64, mask: u64) -> u64 {
    (ri ^ ri1) & !(ri1 ^ rj) & !(rj ^ rj1) & mask
}

/// Reports every failing pair `(i, j)` (0-based) and equal last rows.
pub fn check_order_regular(m: &OrderRegularMatrix) -> ViolationReport {
    let mut report = ViolationReport::default();
    let rows = &m.rows;
    let mask = column_mask(m.n);
    let len = rows.len();
    let next = |j: usize| rows[(j + 1).min(len - 1)];
    for j in 1..len {
        for i in 0..j {
            if witnesses(rows[i], rows[i + 1], rows[j], next(j), mask) == 0 {
                report.push([i, j], Rule::OrderRegular, format!("no column separates rows {i} and {j}"));
            }
        }
    }
    if len >= 2 && rows[len - 1] == rows[len - 2] {
        report.push([len - 2, len - 1], Rule::LastRowsDistinct, String::from("last two rows are equal"));
    }
    report
}

pub fn fibonacci(i: usize) -> Result<u64> {
    if i < 1 {
        return Err(Error::Precondition(String::from("Fibonacci numbers are indexed from 1")));
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..i {
        let c = a.checked_add(b).ok_or_else(|| Error::OutOfRange(format!("F_{i} exceeds 64 bits")))?;
        a = b;
        b = c;
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub max_rows: usize,
    pub witness: OrderRegularMatrix,
    pub nodes_explored: u64,
    pub exhausted: bool,
}

/// Whether an exhausted search found `F_{n+2}` rows.
pub fn conjecture_check(n: usize, result: &SearchResult) -> Result<bool> {
    if !result.exhausted {
        return Err(Error::Precondition(String::from("search did not finish within its budget")));
    }
    Ok(result.max_rows as u64 == fibonacci(n + 2)?)
}

/// Node counter shared by every part of one search.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    hit: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0), hit: AtomicBool::new(false) }
    }

    fn take(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) < self.limit {
            true
        } else {
            self.hit.store(true, Ordering::Relaxed);
            false
        }
    }

    pub fn was_hit(&self) -> bool {
        self.hit.load(Ordering::Relaxed)
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }
}

/// Longest valid matrix found in one part of the search tree. Equal
/// lengths keep the lexicographically first matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Best {
    pub rows: Vec<u64>,
}

impl Best {
    pub fn offer(&mut self, other: Best) {
        if other.rows.len() > self.rows.len() {
            *self = other;
        }
    }
}

/// Whether `x` may follow `rows`: differs from the last row and closes every
/// pair `(i, len - 1)`.
fn extends(rows: &[u64], x: u64, mask: u64) -> bool {
    let t = rows.len();
    let last = rows[t - 1];
    if x == last {
        return false;
    }
    (0..t.saturating_sub(1)).all(|i| witnesses(rows[i], rows[i + 1], last, x, mask) != 0)
}

/// Whether `rows`, already extendable, is valid as a complete matrix.
fn closes(rows: &[u64], mask: u64) -> bool {
    let last = rows[rows.len() - 1];
    (0..rows.len() - 1).all(|i| witnesses(rows[i], rows[i + 1], last, last, mask) != 0)
}

/// Rows that may be appended at position `depth`. The second row is
/// restricted to `0…01…1`.
fn candidates(n: usize, depth: usize) -> impl Iterator<Item = u64> {
    (0..1u64 << n).filter(move |&x| depth != 1 || (x != 0 && x & (x + 1) == 0))
}

fn dfs(n: usize, rows: &mut Vec<u64>, budget: &Budget, best: &mut Best) -> bool {
    if !budget.take() {
        return false;
    }
    let mask = column_mask(n);
    if closes(rows, mask) && rows.len() > best.rows.len() {
        best.rows = rows.clone();
    }
    for x in candidates(n, rows.len()) {
        if extends(rows, x, mask) {
            rows.push(x);
            let finished = dfs(n, rows, budget, best);
            rows.pop();
            if !finished {
                return false;
            }
        }
    }
    true
}

/// Searches every matrix that starts with `prefix`. The prefix itself must
/// be extendable (as produced by [`split_prefixes`]).
pub fn search_from_prefix(n: usize, prefix: &[u64], budget: &Budget) -> Best {
    let mut best = Best { rows: Vec::new() };
    let mut rows = prefix.to_vec();
    dfs(n, &mut rows, budget, &mut best);
    best
}

/// Enumerates the extendable prefixes of `depth` rows in lexicographic
/// order, together with the best matrix shorter than `depth`.
pub fn split_prefixes(n: usize, depth: usize, budget: &Budget) -> Result<(Best, Vec<Vec<u64>>)> {
    if n == 0 || n > MAX_SEARCH_COLUMNS {
        return Err(Error::OutOfRange(format!("search needs 1 ≤ n ≤ {MAX_SEARCH_COLUMNS}, got {n}")));
    }
    let mask = column_mask(n);
    let mut best = Best { rows: Vec::new() };
    let mut layer = alloc::vec![alloc::vec![0u64]];
    for _ in 1..depth.max(1) {
        let mut next = Vec::new();
        for rows in &layer {
            if !budget.take() {
                return Ok((best, Vec::new()));
            }
            if closes(rows, mask) && rows.len() > best.rows.len() {
                best.rows = rows.clone();
            }
            for x in candidates(n, rows.len()) {
                if extends(rows, x, mask) {
                    let mut r = rows.clone();
                    r.push(x);
                    next.push(r);
                }
            }
        }
        layer = next;
    }
    Ok((best, layer))
}

/// Assembles the final result from per-part bests taken in prefix order.
pub fn finish(n: usize, parts: impl IntoIterator<Item = Best>, budget: &Budget) -> Result<SearchResult> {
    let mut best = Best { rows: Vec::new() };
    for part in parts {
        best.offer(part);
    }
    let witness = OrderRegularMatrix::new(n, best.rows)?;
    Ok(SearchResult {
        n,
        max_rows: witness.row_count(),
        witness,
        nodes_explored: budget.used(),
        exhausted: !budget.was_hit(),
    })
}

/// Single-threaded depth-first search for the longest order-regular matrix
/// with `n` columns, visiting at most `node_budget` partial matrices.
pub fn search_max_rows(n: usize, node_budget: u64) -> Result<SearchResult> {
    let budget = Budget::new(node_budget);
    let (shallow, prefixes) = split_prefixes(n, 1, &budget)?;
    let parts = prefixes.iter().map(|p| search_from_prefix(n, p, &budget));
    let parts: Vec<Best> = core::iter::once(shallow).chain(parts).collect();
    finish(n, parts, &budget)
}
