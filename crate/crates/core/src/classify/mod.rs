//! Isomorph-free enumeration of binary covering arrays.
//!
//! Columns are taken modulo complement, so an array is a set of column
//! classes and equivalence reduces to row permutation. Sets are grown one
//! column at a time by canonical deletion: a child `X = P + c` is kept only
//! if deleting the last column of `X`'s canonical form gives back `P`'s class,
//! and isomorphic siblings are merged. Each class at each level is then
//! reached exactly once.

mod checkpoint;
mod guided;
mod search;

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::array::CoveringArray;
use crate::bits::BitColumn;
use crate::bounds::{forced_column_profile, known_can_table};
use crate::equivalence::{canonize_binary, row_masks};
use crate::error::{Error, Result};

pub use guided::{
    guided_uniqueness_24x12, nonexistence_14x16, nonexistence_48x13, Branch, DistanceSumReport,
    GuidedUniqueness, NonexistenceReport,
};
pub use search::SearchStats;

/// Universe size above which enumeration is refused.
const MAX_UNIVERSE: usize = 4_000_000;

/// Restrictions on the arrays being enumerated. Weights and distances are
/// taken up to complement: a column of weight `w` counts as `min(w, m - w)`,
/// and a distance `d` is admissible if `d` or `m - d` is listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConstraints {
    pub weight_range: (usize, usize),
    pub distances: Option<Vec<usize>>,
    /// Columns that must occur together in every result, up to
    /// equivalence. Used as a filter on the finished classes.
    pub pinned: Vec<BitColumn>,
}

impl SearchConstraints {
    /// The strongest constraints derivable for `m x n` strength-`t` arrays:
    /// the weight window from exact values of `CAN(t-1, n-1, 2)` (or the
    /// generic `2^(t-1)` floor), and forced distances when `m` is even and the
    /// strength-3 window applies.
    pub fn for_params(m: usize, t: usize, n: usize) -> Self {
        let floor = 1usize << (t - 1).min(20);
        let lo = known_can_table()
            .exact(t as u32 - 1, n as u64 - 1, 2)
            .map_or(floor, |v| v as usize)
            .max(floor);
        let distances = (t == 3 && m.is_multiple_of(2))
            .then(|| forced_column_profile(m as u64 / 2, n as u64).ok())
            .flatten()
            .map(|p| p.distances.into_iter().map(|d| d as usize).collect());
        SearchConstraints {
            weight_range: (lo, m / 2),
            distances,
            pinned: Vec::new(),
        }
    }

    /// Only the generic weight floor; valid for every degree.
    pub fn unconstrained(m: usize, t: usize) -> Self {
        SearchConstraints {
            weight_range: (1usize << (t - 1).min(20), m / 2),
            distances: None,
            pinned: Vec::new(),
        }
    }

    fn fingerprint(&self) -> String {
        let d = self
            .distances
            .as_ref()
            .map_or("-".to_string(), |d| d.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
        let p: Vec<String> = self.pinned.iter().map(|c| c.to_string()).collect();
        format!(
            "w={}..{} d={} pin={}",
            self.weight_range.0,
            self.weight_range.1,
            d,
            if p.is_empty() { "-".into() } else { p.join(",") }
        )
    }
}

/// Options controlling a run; none of them changes the result.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub jobs: usize,
    pub budget: Option<u64>,
    pub checkpoint: Option<PathBuf>,
    pub count_only: bool,
    /// Depth at which the tree is cut into independent work units.
    pub split_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub m: usize,
    pub t: usize,
    pub n: usize,
    pub q: u8,
    /// Canonical forms, sorted. Empty when only counting.
    #[serde(skip)]
    pub representatives: Vec<CoveringArray>,
    pub count: usize,
    pub stats: SearchStats,
}

impl ClassificationResult {
    /// One-line summary; identical across runs and worker counts.
    pub fn summary_line(&self) -> String {
        format!(
            "m={} t={} n={} q={} count={} nodes={} canon={} rejected={} duplicates={} pruned={} units={}",
            self.m,
            self.t,
            self.n,
            self.q,
            self.count,
            self.stats.nodes,
            self.stats.canon_calls,
            self.stats.rejected,
            self.stats.duplicates,
            self.stats.pruned,
            self.stats.units
        )
    }
}

/// Every column class admitted by the constraints: one representative per
/// complementary pair (the lighter one; at weight `m/2` the one starting with
/// 0), in lexicographic order of the column read top to bottom. Bit `r` of a
/// mask is row `r`.
pub fn column_universe(m: usize, cons: &SearchConstraints) -> Result<Vec<u64>> {
    if m == 0 || m > 64 {
        return Err(Error::ParamOutOfRange(format!("size {m} outside 1..=64")));
    }
    let (lo, hi) = (cons.weight_range.0, cons.weight_range.1.min(m / 2));
    if lo > hi {
        return Err(Error::EmptyUniverse(m));
    }
    let total: u128 = (lo..=hi).map(|w| crate::bounds::binom(m as u64, w as u64)).map(|b| {
        u128::try_from(b).unwrap_or(u128::MAX)
    }).fold(0u128, |a, b| a.saturating_add(b));
    if total > 2 * MAX_UNIVERSE as u128 {
        return Err(Error::ParamOutOfRange(format!("column universe of {total} vectors is too large")));
    }
    let mut out = Vec::new();
    for w in lo..=hi {
        if w == 0 {
            out.push(0);
            continue;
        }
        each_subset(m, w, &mut |mask| {
            if 2 * w < m || mask & 1 == 0 {
                out.push(mask);
            }
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyUniverse(m));
    }
    out.sort_by_key(|&c| lex_key(c, m));
    Ok(out)
}

/// Sort key making row 0 the most significant position.
pub(crate) fn lex_key(mask: u64, m: usize) -> u64 {
    mask.reverse_bits() >> (64 - m)
}

fn each_subset(m: usize, k: usize, f: &mut dyn FnMut(u64)) {
    // Gosper's hack over m-bit words.
    let mut x: u64 = (1u64 << k) - 1;
    let limit = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    loop {
        f(x);
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
        if x > limit {
            break;
        }
    }
}

fn check_params(m: usize, t: usize, n: usize) -> Result<()> {
    if t < 2 || n < t {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    if m == 0 || m > 64 {
        return Err(Error::ParamOutOfRange(format!("size {m} outside 1..=64")));
    }
    Ok(())
}

/// One representative per equivalence class of `m x n` binary strength-`t`
/// arrays meeting the constraints.
pub fn classify(m: usize, t: usize, n: usize, cons: &SearchConstraints) -> Result<ClassificationResult> {
    classify_with(m, t, n, cons, &RunOptions::default())
}

pub fn classify_with(
    m: usize,
    t: usize,
    n: usize,
    cons: &SearchConstraints,
    opts: &RunOptions,
) -> Result<ClassificationResult> {
    check_params(m, t, n)?;
    let start = Instant::now();
    let universe = match column_universe(m, cons) {
        Ok(u) => u,
        Err(Error::EmptyUniverse(_)) => {
            return Ok(ClassificationResult {
                m,
                t,
                n,
                q: 2,
                representatives: Vec::new(),
                count: 0,
                stats: SearchStats::default(),
            })
        }
        Err(e) => return Err(e),
    };
    let engine = search::Engine::new(m, t, Some(n), &universe, cons.distances.clone());
    let (keys, mut stats) = engine.run(opts, &cons.fingerprint())?;
    let mut representatives: Vec<CoveringArray> = keys.iter().map(|k| key_to_array(k, n)).collect();
    if !cons.pinned.is_empty() {
        let pin = pinned_key(&cons.pinned)?;
        representatives.retain(|a| contains_pinned(a, &pin, cons.pinned.len()));
    }
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    let count = representatives.len();
    if opts.count_only {
        representatives.clear();
    }
    Ok(ClassificationResult {
        m,
        t,
        n,
        q: 2,
        representatives,
        count,
        stats,
    })
}

/// The number of classes, using the constraints of
/// [`SearchConstraints::for_params`].
pub fn count_classes(m: usize, t: usize, n: usize) -> Result<usize> {
    let opts = RunOptions {
        count_only: true,
        ..RunOptions::default()
    };
    Ok(classify_with(m, t, n, &SearchConstraints::for_params(m, t, n), &opts)?.count)
}

/// The largest degree of an `m`-row strength-`t` binary array, with a
/// witness of that degree.
pub fn max_degree_search(m: usize, t: usize) -> Result<(usize, CoveringArray)> {
    check_params(m, t, t)?;
    let cons = SearchConstraints::unconstrained(m, t);
    let universe = column_universe(m, &cons)?;
    let engine = search::Engine::new(m, t, None, &universe, None);
    let (depth, key) = engine.deepest(None)?;
    if depth < t {
        return Err(Error::NotApplicable(format!("no {m}-row array of strength {t}")));
    }
    Ok((depth, key_to_array(&key, depth)))
}

pub(crate) fn key_to_array(rows: &[u64], k: usize) -> CoveringArray {
    let m = rows.len();
    let mut entries = Vec::with_capacity(m * k);
    for &w in rows {
        entries.extend((0..k).map(|j| (w >> (k - 1 - j) & 1) as u8));
    }
    CoveringArray::from_flat(m, k, 2, entries).expect("nonempty")
}

fn pinned_key(pinned: &[BitColumn]) -> Result<Vec<u64>> {
    let a = CoveringArray::from_columns(pinned)?;
    Ok(canonize_binary(&row_masks(&a), a.n(), crate::equivalence::DEFAULT_BUDGET)?.rows)
}

fn contains_pinned(a: &CoveringArray, pin: &[u64], k: usize) -> bool {
    let n = a.n();
    let mut chosen = Vec::with_capacity(k);
    fn rec(a: &CoveringArray, pin: &[u64], k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            let sub = a.select_columns(chosen).expect("in range");
            return canonize_binary(&row_masks(&sub), k, crate::equivalence::DEFAULT_BUDGET)
                .map(|c| c.rows == pin)
                .unwrap_or(false);
        }
        for c in start..a.n() {
            chosen.push(c);
            if rec(a, pin, k, c + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    k <= n && rec(a, pin, k, 0, &mut chosen)
}
