//! Weight lifting for binary strength-2 arrays.
//!
//! Every minimum-weight column `c` (weight `s`) is replaced by a weight-`s+1`
//! superset, the replacements forming a complete matching in the bipartite
//! graph "column ⊆ vector". Distinct images keep equal-weight columns apart;
//! heavier columns are untouched. Repeating the step pushes all weights up
//! to `floor(m/2)` without breaking 2-coverage.

use std::collections::BTreeMap;

use crate::array::CoveringArray;
use crate::bits::BitColumn;
use crate::coverage::is_covering;
use crate::error::{Error, Result};

/// Bipartite graph between the weight-`s` columns and the weight-`s+1`
/// vectors containing them. Only right vertices with a neighbour are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftProblem {
    pub m: usize,
    pub s: usize,
    /// Column index (0-based) and contents of each left vertex.
    pub left: Vec<(usize, BitColumn)>,
    pub right: Vec<BitColumn>,
    /// `adj[i]`: right vertices of left vertex `i`, in the order rows are
    /// added (row 0 first).
    pub adj: Vec<Vec<usize>>,
}

impl LiftProblem {
    /// Builds the graph for the given left columns, all of weight `s`.
    /// Supersets of `exclude_superset_of`, when given, are left out.
    pub fn new(
        m: usize,
        s: usize,
        left: Vec<(usize, BitColumn)>,
        exclude_superset_of: Option<&BitColumn>,
    ) -> Result<Self> {
        if let Some((i, _)) = left.iter().find(|(_, c)| c.len() != m || c.weight() != s) {
            return Err(Error::PreconditionViolated(format!(
                "left column {} is not a weight-{s} vector of length {m}",
                i + 1
            )));
        }
        let mut index: BTreeMap<BitColumn, usize> = BTreeMap::new();
        let mut right = Vec::new();
        let mut adj = Vec::with_capacity(left.len());
        for (_, c) in &left {
            let mut nbrs = Vec::with_capacity(m - s);
            for r in 0..m {
                if c.get(r) {
                    continue;
                }
                let mut w = c.clone();
                w.set(r, true);
                if exclude_superset_of.is_some_and(|x| x.is_subset_of(&w)) {
                    continue;
                }
                let id = *index.entry(w.clone()).or_insert_with(|| {
                    right.push(w);
                    right.len() - 1
                });
                nbrs.push(id);
            }
            adj.push(nbrs);
        }
        Ok(LiftProblem {
            m,
            s,
            left,
            right,
            adj,
        })
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn right_degree(&self, j: usize) -> usize {
        self.adj.iter().filter(|a| a.contains(&j)).count()
    }
}

/// Left vertex `i` is matched to right vertex `pairs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<usize>,
}

/// A matching saturating the left side, by augmenting paths with left
/// vertices in order. On failure returns a set `S` of left vertices (as
/// 0-based column indices) with fewer than `|S|` neighbours.
pub fn complete_matching(p: &LiftProblem) -> Result<Matching> {
    let n_left = p.left.len();
    let mut match_right: Vec<Option<usize>> = vec![None; p.right.len()];
    let mut match_left: Vec<Option<usize>> = vec![None; n_left];
    for u in 0..n_left {
        let mut visited = vec![false; p.right.len()];
        if !augment(u, &p.adj, &mut visited, &mut match_right, &mut match_left) {
            // Everything reachable from u by alternating paths: u, the
            // visited right vertices, and their partners.
            let mut violator: Vec<usize> = vec![p.left[u].0];
            violator.extend(
                visited
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v)
                    .map(|(j, _)| p.left[match_right[j].expect("visited rights are matched")].0),
            );
            violator.sort_unstable();
            let neighbourhood = visited.iter().filter(|&&v| v).count();
            return Err(Error::HallViolation {
                violator,
                neighbourhood,
            });
        }
    }
    Ok(Matching {
        pairs: match_left.into_iter().map(|m| m.expect("complete")).collect(),
    })
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
    match_left: &mut [Option<usize>],
) -> bool {
    for &w in &adj[u] {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        let free = match match_right[w] {
            None => true,
            Some(v) => augment(v, adj, visited, match_right, match_left),
        };
        if free {
            match_right[w] = Some(u);
            match_left[u] = Some(w);
            return true;
        }
    }
    false
}

fn check_lift_input(array: &CoveringArray) -> Result<usize> {
    if !array.is_binary() {
        return Err(Error::NotBinary(array.q()));
    }
    let half = array.m() / 2;
    if let Some((i, w)) = array.column_weights().into_iter().enumerate().find(|&(_, w)| w > half) {
        return Err(Error::PreconditionViolated(format!(
            "column {} has weight {w} > {half}",
            i + 1
        )));
    }
    if array.n() < 2 || !is_covering(array, 2)? {
        return Err(Error::PreconditionViolated("input is not 2-covering".into()));
    }
    Ok(half)
}

/// Lifts `cols` (all of weight `s`) by one, replacing each by its matched
/// superset.
fn lift_step(columns: &mut [BitColumn], cols: Vec<usize>, s: usize, exclude: Option<&BitColumn>) -> Result<()> {
    let m = columns[0].len();
    let left = cols.iter().map(|&i| (i, columns[i].clone())).collect();
    let p = LiftProblem::new(m, s, left, exclude)?;
    let matching = complete_matching(&p)?;
    for (k, &i) in cols.iter().enumerate() {
        columns[i] = p.right[matching.pairs[k]].clone();
    }
    Ok(())
}

/// One lifting step: every minimum-weight column gains one row.
pub fn lift_min_weight(array: &CoveringArray) -> Result<CoveringArray> {
    let half = check_lift_input(array)?;
    let weights = array.column_weights();
    let s = *weights.iter().min().expect("n >= 1");
    if s >= half {
        return Err(Error::PreconditionViolated(format!(
            "minimum weight {s} already equals floor(m/2) = {half}"
        )));
    }
    let mut columns = array.bit_columns().to_vec();
    let cols = (0..array.n()).filter(|&i| weights[i] == s).collect();
    lift_step(&mut columns, cols, s, None)?;
    CoveringArray::from_columns(&columns)
}

/// Lifts until every column has weight at least `s_prime`.
pub fn lift_to_target(array: &CoveringArray, s_prime: usize) -> Result<CoveringArray> {
    let half = check_lift_input(array)?;
    let s = array.column_weights().into_iter().min().expect("n >= 1");
    if s_prime <= s || s_prime > half {
        return Err(Error::PreconditionViolated(format!(
            "target {s_prime} must satisfy {s} < target <= {half}"
        )));
    }
    let mut cur = array.clone();
    while cur.column_weights().into_iter().min().expect("n >= 1") < s_prime {
        cur = lift_min_weight(&cur)?;
    }
    Ok(cur)
}

/// Lifts every column except `j` (1-based) to `floor(m/2)`, and `j` to
/// `floor(m/2) - 1`.
pub fn lift_except(array: &CoveringArray, j: usize) -> Result<CoveringArray> {
    let half = check_lift_input(array)?;
    if j == 0 || j > array.n() {
        return Err(Error::PreconditionViolated(format!("column {j} out of range")));
    }
    let j = j - 1;
    if array.column_weight(j) >= half {
        return Err(Error::PreconditionViolated(format!(
            "column {} already has weight {half}",
            j + 1
        )));
    }
    let target = |i: usize| if i == j { half - 1 } else { half };
    let mut columns = array.bit_columns().to_vec();
    loop {
        let below: Vec<usize> = (0..columns.len())
            .filter(|&i| columns[i].weight() < target(i))
            .collect();
        let Some(s) = below.iter().map(|&i| columns[i].weight()).min() else {
            break;
        };
        let cols: Vec<usize> = below.into_iter().filter(|&i| columns[i].weight() == s).collect();
        // A column parked at weight s must not end up inside a lifted one.
        let parked = (columns[j].weight() == s && !cols.contains(&j)).then(|| columns[j].clone());
        lift_step(&mut columns, cols, s, parked.as_ref())?;
    }
    CoveringArray::from_columns(&columns)
}
