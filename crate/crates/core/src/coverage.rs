//! Strength-`t` coverage checks.
//!
//! Binary arrays use a bit-parallel kernel: column subsets are walked
//! depth-first and, at depth `k`, the `2^k` row sets realizing each prefix
//! pattern are kept as bit vectors. Extending by a column splits every row
//! set in two with one AND each. Other alphabets fall back to marking seen
//! patterns row by row.

use serde::Serialize;

use crate::array::CoveringArray;
use crate::bounds;
use crate::error::{Error, Result};

/// One uncovered `(columns, pattern)` pair. Columns are 1-based and strictly
/// increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MissingPattern {
    pub columns: Vec<usize>,
    pub pattern: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub strength: usize,
    pub is_covering: bool,
    /// Every uncovered pair, in lexicographic order of columns then pattern.
    pub missing: Vec<MissingPattern>,
}

/// Lists every `t`-column pattern that no row realizes.
pub fn verify_coverage(array: &CoveringArray, t: usize) -> Result<CoverageReport> {
    check_strength(array, t)?;
    let mut missing = Vec::new();
    walk(array, t, &mut |cols, pattern| {
        missing.push(MissingPattern {
            columns: cols.iter().map(|c| c + 1).collect(),
            pattern: pattern.to_vec(),
        });
        true
    });
    Ok(CoverageReport {
        strength: t,
        is_covering: missing.is_empty(),
        missing,
    })
}

/// Early-exit form of [`verify_coverage`].
pub fn is_covering(array: &CoveringArray, t: usize) -> Result<bool> {
    Ok(first_missing(array, t)?.is_none())
}

pub fn first_missing(array: &CoveringArray, t: usize) -> Result<Option<MissingPattern>> {
    check_strength(array, t)?;
    let mut found = None;
    walk(array, t, &mut |cols, pattern| {
        found = Some(MissingPattern {
            columns: cols.iter().map(|c| c + 1).collect(),
            pattern: pattern.to_vec(),
        });
        false
    });
    Ok(found)
}

fn check_strength(array: &CoveringArray, t: usize) -> Result<()> {
    if t == 0 || t > array.n() {
        return Err(Error::StrengthOutOfRange { t, n: array.n() });
    }
    Ok(())
}

/// Calls `on_missing(columns, pattern)` for every uncovered pair in
/// lexicographic order; stops when it returns `false`.
fn walk(array: &CoveringArray, t: usize, on_missing: &mut dyn FnMut(&[usize], &[u8]) -> bool) {
    if array.is_binary() {
        BinaryWalker::new(array, t).run(on_missing);
    } else {
        walk_symbols(array, t, on_missing);
    }
}

struct BinaryWalker<'a> {
    array: &'a CoveringArray,
    t: usize,
    words: usize,
    /// `levels[k]` holds `2^k` row sets of `words` words each.
    levels: Vec<Vec<u64>>,
    cols: Vec<usize>,
}

impl<'a> BinaryWalker<'a> {
    fn new(array: &'a CoveringArray, t: usize) -> Self {
        let words = array.m().div_ceil(64);
        let mut levels = Vec::with_capacity(t + 1);
        let mut root = vec![u64::MAX; words];
        let rem = array.m() % 64;
        if rem != 0 {
            root[words - 1] = (1u64 << rem) - 1;
        }
        levels.push(root);
        for k in 1..=t {
            levels.push(vec![0; words << k]);
        }
        BinaryWalker {
            array,
            t,
            words,
            levels,
            cols: Vec::with_capacity(t),
        }
    }

    fn run(&mut self, on_missing: &mut dyn FnMut(&[usize], &[u8]) -> bool) {
        self.descend(0, on_missing);
    }

    fn descend(&mut self, start: usize, on_missing: &mut dyn FnMut(&[usize], &[u8]) -> bool) -> bool {
        let depth = self.cols.len();
        let n = self.array.n();
        let w = self.words;
        // Leave room for the remaining t - depth - 1 columns.
        for c in start..=n - (self.t - depth) {
            let col = self.array.bit_column(c).expect("binary array").words();
            let (lower, upper) = self.levels.split_at_mut(depth + 1);
            let prev = &lower[depth];
            let next = &mut upper[0];
            for p in 0..(1usize << depth) {
                for i in 0..w {
                    let rows = prev[p * w + i];
                    next[(2 * p) * w + i] = rows & !col[i];
                    next[(2 * p + 1) * w + i] = rows & col[i];
                }
            }
            self.cols.push(c);
            let keep_going = if depth + 1 == self.t {
                self.report(on_missing)
            } else {
                self.descend(c + 1, on_missing)
            };
            self.cols.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn report(&self, on_missing: &mut dyn FnMut(&[usize], &[u8]) -> bool) -> bool {
        let w = self.words;
        let level = &self.levels[self.t];
        let mut pattern = vec![0u8; self.t];
        for p in 0..(1usize << self.t) {
            if level[p * w..(p + 1) * w].iter().all(|&x| x == 0) {
                for (k, bit) in pattern.iter_mut().enumerate() {
                    *bit = (p >> (self.t - 1 - k) & 1) as u8;
                }
                if !on_missing(&self.cols, &pattern) {
                    return false;
                }
            }
        }
        true
    }
}

fn walk_symbols(array: &CoveringArray, t: usize, on_missing: &mut dyn FnMut(&[usize], &[u8]) -> bool) {
    let q = array.q() as usize;
    let total = q.pow(t as u32);
    let mut seen = vec![false; total];
    let mut cols: Vec<usize> = (0..t).collect();
    let n = array.n();
    loop {
        seen.iter_mut().for_each(|s| *s = false);
        for row in array.rows() {
            let idx = cols.iter().fold(0usize, |acc, &c| acc * q + row[c] as usize);
            seen[idx] = true;
        }
        for (idx, _) in seen.iter().enumerate().filter(|(_, s)| !**s) {
            let mut pattern = vec![0u8; t];
            let mut rest = idx;
            for k in (0..t).rev() {
                pattern[k] = (rest % q) as u8;
                rest /= q;
            }
            if !on_missing(&cols, &pattern) {
                return;
            }
        }
        // Next combination in lexicographic order.
        let mut k = t;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cols[k] < n - t + k {
                break;
            }
            if k == 0 {
                return;
            }
        }
        cols[k] += 1;
        for j in k + 1..t {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

/// Column-weight window forced on any `m x n` strength-`t` array:
/// `((q-1) CAN(t-1, n-1, q), m - CAN(t-1, n-1, q))`.
pub fn weight_bounds(m: u64, n: u64, q: u32, t: u32) -> Result<(u64, u64)> {
    if t == 0 || n == 0 {
        return Err(Error::ParamOutOfRange(format!("t = {t}, n = {n}")));
    }
    let can = bounds::exact_can(t - 1, n - 1, q)?;
    Ok(((q as u64 - 1) * can, m.saturating_sub(can)))
}
