//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Rational systems are scaled row by row to integer systems first, so every
//! intermediate entry is a minor of the scaled matrix and every division in
//! the elimination is exact.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Brings `rows` to echelon form in place and returns the pivot positions
/// `(row, column)`. Only the first `cols` columns are eligible as pivots;
/// any further columns (an augmented right-hand side) are carried along.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Pivot choice by nonzero structure: first row with a nonzero entry.
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let width = rows[r].len();
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = core::mem::take(&mut row[c]);
            if factor.is_zero() {
                for entry in row[c + 1..width].iter_mut() {
                    *entry = &*entry * &pivot_row[c] / &prev;
                }
                continue;
            }
            for j in c + 1..width {
                let value = &row[j] * &pivot_row[c] - &factor * &pivot_row[j];
                row[j] = value / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

pub(crate) fn integer_row(coeffs: &[Rational]) -> Vec<BigInt> {
    let scale = coeffs
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    coeffs
        .iter()
        .map(|q| q.numer() * (&scale / q.denom()))
        .collect()
}

/// Solves the square system `matrix · x = rhs` exactly. Returns `None` when
/// the matrix is singular.
pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    assert_eq!(rhs.len(), n, "right-hand side length");
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut aug: Vec<Rational> = row.clone();
            aug.push(b.clone());
            integer_row(&aug)
        })
        .collect();
    let (numers, denom) = solve_integer(rows)?;
    Some(numers.into_iter().map(|x| Rational::new(x, denom.clone())).collect())
}

/// Solves an augmented integer system (`n` rows of length `n + 1`).
/// Returns numerators over one common nonzero denominator.
pub fn solve_integer(mut rows: Vec<Vec<BigInt>>) -> Option<(Vec<BigInt>, BigInt)> {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n + 1), "augmented rows must have length n + 1");
    if n == 0 {
        return Some((Vec::new(), BigInt::one()));
    }
    let pivots = bareiss(&mut rows, n);
    if pivots.len() < n {
        return None;
    }
    // The last pivot is the determinant up to sign, so `d · x` is integral
    // and every division below is exact.
    let d = rows[n - 1][n - 1].clone();
    let mut x: Vec<BigInt> = alloc::vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &d * &rows[i][n];
        for j in i + 1..n {
            if !rows[i][j].is_zero() {
                acc -= &rows[i][j] * &x[j];
            }
        }
        x[i] = acc / &rows[i][i];
    }
    Some((x, d))
}

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut work = rows.to_vec();
    bareiss(&mut work, cols).len()
}
