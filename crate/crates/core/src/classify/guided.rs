//! Proof-shaped searches: the top blocks of the array are fixed by earlier
//! structure results, and only a small bottom block is searched.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{key_to_array, ClassificationResult, SearchStats};
use crate::array::CoveringArray;
use crate::bounds::{forced_column_profile, known_can_table, roux_lower};
use crate::constructions::{fixed_matrix, standard_maximal_2ca, witness_24x12, FixedMatrix};
use crate::coverage::is_covering;
use crate::equivalence::{are_equivalent, canonize_binary, row_masks, DEFAULT_BUDGET};
use crate::error::{Error, Result};

/// One explored alternative of a guided proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub label: String,
    pub nodes: u64,
    pub completions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuidedUniqueness {
    pub result: ClassificationResult,
    pub branches: Vec<Branch>,
    /// In the dead branch, with the first four bottom columns fixed to `E`:
    /// the number of bottom columns for `c^7` keeping weight 12 and
    /// 4-coverage of the first seven columns.
    pub forced_candidates: usize,
    /// The bottom column usually named for `c^7` in that branch.
    pub rejected_column: Vec<u8>,
    /// `d(c^3, c^7)` with that column in place.
    pub rejected_distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonexistenceReport {
    pub exists: bool,
    pub nodes: u64,
    pub branches: Vec<Branch>,
    /// Lower bound on the covering array number implied by nonexistence.
    pub implied_lower: u64,
    pub roux_lower: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceSumReport {
    pub weight: u64,
    pub distances: Vec<u64>,
    pub ones_per_row: usize,
    pub zeros_per_row: usize,
    /// Sum of pairwise distances over columns 2..=16 of the forced array.
    pub sum: usize,
    /// Smallest admissible distance times the number of column pairs.
    pub required: usize,
    pub exists: bool,
}

/// Completes the bottom rows of an array whose top rows are fixed. Bottom
/// rows take `prefix` in the leading columns; the remaining columns are
/// chosen one at a time subject to column weight, pairwise distance and
/// `t`-coverage. Bottom rows are kept in nondecreasing order.
struct BlockSearch {
    t: usize,
    n: usize,
    top_len: usize,
    bottom: usize,
    weight: usize,
    distance: Option<usize>,
    top_cols: Vec<u64>,
    full: u64,
    cols: Vec<u64>,
    nodes: u64,
    solutions: Vec<Vec<u64>>,
}

impl BlockSearch {
    fn new(top: &CoveringArray, prefix: &[u8], bottom: usize, t: usize, weight: usize, distance: Option<usize>) -> Self {
        let (top_len, n) = (top.m(), top.n());
        let m = top_len + bottom;
        let top_cols = top.column_masks().expect("binary");
        let cols = prefix
            .iter()
            .enumerate()
            .map(|(j, &b)| top_cols[j] | if b == 1 { ((1u64 << bottom) - 1) << top_len } else { 0 })
            .collect();
        BlockSearch {
            t,
            n,
            top_len,
            bottom,
            weight,
            distance,
            top_cols,
            full: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
            cols,
            nodes: 0,
            solutions: Vec::new(),
        }
    }

    fn run(mut self) -> (Vec<Vec<u64>>, u64) {
        let ties = (1u64 << (self.bottom - 1)) - 1;
        self.rec(ties);
        (self.solutions, self.nodes)
    }

    fn rec(&mut self, ties: u64) {
        self.nodes += 1;
        let j = self.cols.len();
        if j == self.n {
            self.solutions.push(self.cols.clone());
            return;
        }
        let have = self.top_cols[j].count_ones() as usize;
        let Some(need) = self.weight.checked_sub(have).filter(|&k| k <= self.bottom) else {
            return;
        };
        for b in 0u64..1 << self.bottom {
            if b.count_ones() as usize != need {
                continue;
            }
            // Bit i is bottom row i; tied neighbours must not go 1 then 0.
            if ties & b & !(b >> 1) != 0 {
                continue;
            }
            let col = self.top_cols[j] | b << self.top_len;
            if self.fits(col) {
                self.cols.push(col);
                self.rec(ties & !(b ^ (b >> 1)));
                self.cols.pop();
            }
        }
    }

    fn fits(&self, col: u64) -> bool {
        if let Some(d) = self.distance {
            if self.cols.iter().any(|&c| (c ^ col).count_ones() as usize != d) {
                return false;
            }
        }
        covers_with(&self.cols, col, self.t, self.full)
    }
}

/// Whether every `t`-subset made of `new` and `t-1` columns of `prev` shows
/// all `2^t` patterns.
fn covers_with(prev: &[u64], new: u64, t: usize, full: u64) -> bool {
    fn rec(prev: &[u64], new: u64, left: usize, start: usize, sets: &[u64], full: u64) -> bool {
        if left == 0 {
            return sets.iter().all(|&s| s & new != 0 && s & !new & full != 0);
        }
        (start..prev.len()).all(|i| {
            let c = prev[i];
            let next: Vec<u64> = sets.iter().flat_map(|&s| [s & !c, s & c]).collect();
            next.iter().all(|&s| s != 0) && rec(prev, new, left - 1, i + 1, &next, full)
        })
    }
    t >= 1 && rec(prev, new, t - 1, 0, &[full], full)
}

fn prefixed(blocks: &[(&str, CoveringArray)]) -> Result<CoveringArray> {
    let mut rows = Vec::new();
    for (prefix, block) in blocks {
        for r in block.rows() {
            let mut s = prefix.to_string();
            s.extend(r.iter().map(|&b| char::from(b'0' + b)));
            rows.push(s);
        }
    }
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    CoveringArray::from_binary_rows(&refs)
}

fn columns_to_array(m: usize, cols: &[u64]) -> Result<CoveringArray> {
    CoveringArray::from_column_masks(m, cols)
}

fn canonical_key(a: &CoveringArray) -> Result<Vec<u64>> {
    Ok(canonize_binary(&row_masks(a), a.n(), DEFAULT_BUDGET)?.rows)
}

fn mismatch(what: &str) -> Error {
    Error::InternalInconsistency(what.to_string())
}

/// Every `24 x 12` binary strength-4 array is equivalent to one array.
///
/// With the first two columns and the blocks `A` (rows `11`) and `B1` (rows
/// `10`) fixed, the block on rows `01` is `B1` or `B2`; the bottom block on
/// rows `00` is searched under weight 12 and pairwise distance 12.
pub fn guided_uniqueness_24x12() -> Result<GuidedUniqueness> {
    let a = fixed_matrix(FixedMatrix::A);
    let b1 = fixed_matrix(FixedMatrix::B1);
    let b2 = fixed_matrix(FixedMatrix::B2);
    let mut branches = Vec::new();
    let mut keys = BTreeSet::new();
    let mut stats = SearchStats::default();
    for (label, third) in [("01-block = B1", &b1), ("01-block = B2", &b2)] {
        let top = prefixed(&[("11", a.clone()), ("10", b1.clone()), ("01", third.clone())])?;
        let (sols, nodes) = BlockSearch::new(&top, &[0, 0], 6, 4, 12, Some(12)).run();
        stats.nodes += nodes;
        for cols in &sols {
            let arr = columns_to_array(24, cols)?;
            if !is_covering(&arr, 4)? {
                return Err(mismatch("completion is not 4-covering"));
            }
            keys.insert(canonical_key(&arr)?);
        }
        branches.push(Branch {
            label: label.to_string(),
            nodes,
            completions: sols.len(),
        });
    }
    if branches[0].completions != 0 || branches[1].completions != 1 || keys.len() != 1 {
        return Err(mismatch("branch counts deviate from (0, 1)"));
    }

    // The dead branch in detail: pin E under columns 3..=6.
    let e = fixed_matrix(FixedMatrix::E);
    let top = prefixed(&[("11", a.clone()), ("10", b1.clone()), ("01", b1.clone())])?.select_columns(&[0, 1, 2, 3, 4, 5, 6])?;
    let bottom_of = |bits: &[u8]| -> Result<CoveringArray> {
        let rows: Vec<String> = (0..6)
            .map(|i| {
                let mut s = "00".to_string();
                s.extend(e.row(i).iter().chain(std::iter::once(&bits[i])).map(|&b| char::from(b'0' + b)));
                s
            })
            .collect();
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        top.vstack(&CoveringArray::from_binary_rows(&refs)?)
    };
    let mut forced_candidates = 0;
    for b in 0u32..64 {
        let bits: Vec<u8> = (0..6).map(|i| (b >> (5 - i) & 1) as u8).collect();
        let arr = bottom_of(&bits)?;
        if arr.column_weight(6) == 12 && is_covering(&arr, 4)? {
            forced_candidates += 1;
        }
    }
    let rejected_column = vec![1, 0, 1, 0, 0, 1];
    let rejected_distance = bottom_of(&rejected_column)?.column_distance(2, 6);

    let key = keys.into_iter().next().expect("one class");
    let rep = key_to_array(&key, 12);
    if !are_equivalent(&rep, &witness_24x12())? {
        return Err(mismatch("surviving class differs from the stored witness"));
    }
    stats.units = branches.len();
    Ok(GuidedUniqueness {
        result: ClassificationResult {
            m: 24,
            t: 4,
            n: 12,
            q: 2,
            representatives: vec![rep],
            count: 1,
            stats,
        },
        branches,
        forced_candidates,
        rejected_column,
        rejected_distance,
    })
}

/// No `48 x 13` binary strength-5 array exists.
///
/// With six of the eight blocks forced, the rows with `c^3 = 1` would form a
/// `24 x 12` strength-4 array with blocks `A`, `B2`, `B2` over prefixes `11`,
/// `10`, `01`; the search shows no bottom block completes it.
pub fn nonexistence_48x13() -> Result<NonexistenceReport> {
    let a = fixed_matrix(FixedMatrix::A);
    let b2 = fixed_matrix(FixedMatrix::B2);
    let top = prefixed(&[("11", a), ("10", b2.clone()), ("01", b2)])?;
    let (sols, nodes) = BlockSearch::new(&top, &[0, 0], 6, 4, 12, Some(12)).run();
    let branches = vec![Branch {
        label: "Res(c3=1), block 001".to_string(),
        nodes,
        completions: sols.len(),
    }];
    if !sols.is_empty() {
        return Err(mismatch("the forced residual admits a completion"));
    }
    let base = known_can_table()
        .exact(4, 12, 2)
        .ok_or_else(|| mismatch("CAN(4,12,2) missing from the table"))?;
    let roux = roux_lower(5, 13, 2)?.value_u64();
    if roux != 2 * base {
        return Err(mismatch("doubling bound disagrees with CAN(4,12,2)"));
    }
    Ok(NonexistenceReport {
        exists: false,
        nodes,
        branches,
        implied_lower: roux + 1,
        roux_lower: roux,
    })
}

/// No `14 x 16` binary strength-3 array exists: the forced structure has
/// too small a total column distance.
pub fn nonexistence_14x16() -> Result<DistanceSumReport> {
    let profile = forced_column_profile(7, 16)?;
    // Both residuals of c^1 are the standard maximal 7 x 15 array, the second
    // one complemented.
    let s = standard_maximal_2ca(7)?;
    let ones = CoveringArray::from_binary_rows(&["1"; 7])?;
    let zeros = CoveringArray::from_binary_rows(&["0"; 7])?;
    let c = ones.hstack(&s)?.vstack(&zeros.hstack(&s.complement()?)?)?;
    if c.column_weights().iter().any(|&w| w as u64 != profile.weight) {
        return Err(mismatch("forced columns do not have the forced weight"));
    }
    let sum: usize = (1..16)
        .flat_map(|i| (i + 1..16).map(move |j| (i, j)))
        .map(|(i, j)| c.column_distance(i, j))
        .sum();
    let dmin = *profile.distances.iter().min().expect("nonempty") as usize;
    let required = dmin * 15 * 14 / 2;
    let counts: BTreeSet<usize> = (1..7)
        .map(|r| s.row(r).iter().filter(|&&b| b == 1).count())
        .collect();
    let ones_per_row = match counts.len() {
        1 => *counts.iter().next().expect("one"),
        _ => return Err(mismatch("rows of the standard array have unequal weight")),
    };
    Ok(DistanceSumReport {
        weight: profile.weight,
        distances: profile.distances,
        ones_per_row,
        zeros_per_row: 15 - ones_per_row,
        sum,
        required,
        exists: sum >= required,
    })
}
