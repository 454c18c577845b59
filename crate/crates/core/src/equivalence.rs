//! Equivalence under row permutation, column permutation and per-column
//! symbol permutation, and an exact canonical form for it.
//!
//! The canonical form is the lexicographically least array (row-major) in the
//! orbit. It is found row by row: once a prefix of rows is fixed, every
//! column's symbols are relabelled in order of first appearance and the
//! columns fall into an ordered partition by their relabelled prefixes. The
//! next row must be one whose image — labels sorted within each cell — is
//! least; ties branch. Leaves that reproduce the best form found so far yield
//! automorphisms, which prune tied siblings lying in one orbit.

use std::fmt;

use serde::Serialize;

use crate::array::{CoveringArray, RowDistanceStructure};
use crate::error::{Error, Result};

/// Node budget used when the caller does not pass one.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

const MAX_GENERATORS: usize = 256;

/// A bijection of `0..len`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::DomainMismatch(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(len: usize) -> Self {
        Permutation((0..len).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// Transpositions `(a, b)` whose left-to-right application as position
    /// swaps turns the identity arrangement into this one.
    pub fn as_swaps(&self) -> Vec<(usize, usize)> {
        let mut cur: Vec<usize> = (0..self.0.len()).collect();
        let mut pos: Vec<usize> = (0..self.0.len()).collect();
        let mut swaps = Vec::new();
        for i in 0..self.0.len() {
            let want = self.0[i];
            if cur[i] != want {
                let j = pos[want];
                swaps.push((i, j));
                cur.swap(i, j);
                pos[cur[i]] = i;
                pos[cur[j]] = j;
            }
        }
        swaps
    }
}

/// One generator of the equivalence group. Permutations give, for each new
/// position, the old position it is taken from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EquivalenceOp {
    RowPerm(Permutation),
    ColPerm(Permutation),
    /// Column (0-based) and the new symbol for each old symbol.
    SymbolPerm { col: usize, perm: Permutation },
}

pub fn apply_op(array: &CoveringArray, op: &EquivalenceOp) -> Result<CoveringArray> {
    let (m, n, q) = (array.m(), array.n(), array.q());
    let src = array.entries();
    let entries = match op {
        EquivalenceOp::RowPerm(p) => {
            check_len("row permutation", p.len(), m)?;
            p.images().iter().flat_map(|&r| array.row(r).iter().copied()).collect()
        }
        EquivalenceOp::ColPerm(p) => {
            check_len("column permutation", p.len(), n)?;
            let mut e = Vec::with_capacity(m * n);
            for r in 0..m {
                e.extend(p.images().iter().map(|&c| src[r * n + c]));
            }
            e
        }
        EquivalenceOp::SymbolPerm { col, perm } => {
            if *col >= n {
                return Err(Error::DomainMismatch(format!("column {} of {n}", col + 1)));
            }
            check_len("symbol permutation", perm.len(), q as usize)?;
            let mut e = src.to_vec();
            for r in 0..m {
                e[r * n + col] = perm.images()[e[r * n + col] as usize] as u8;
            }
            e
        }
    };
    CoveringArray::from_flat(m, n, q, entries)
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::DomainMismatch(format!("{what} on {got} points, array needs {want}")));
    }
    Ok(())
}

pub fn apply_ops(array: &CoveringArray, ops: &[EquivalenceOp]) -> Result<CoveringArray> {
    ops.iter().try_fold(array.clone(), |a, op| apply_op(&a, op))
}

/// The canonical array and the operations taking the input to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCertificate {
    pub canonical: CoveringArray,
    /// Symbol permutations, then one column permutation, then one row
    /// permutation.
    pub ops: Vec<EquivalenceOp>,
}

/// Search statistics, useful when tuning budgets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CanonStats {
    pub nodes: u64,
    pub automorphisms: usize,
}

pub fn canonical_form(array: &CoveringArray) -> Result<CanonicalCertificate> {
    canonical_form_with_budget(array, DEFAULT_BUDGET)
}

pub fn canonical_form_with_budget(array: &CoveringArray, budget: u64) -> Result<CanonicalCertificate> {
    if array.is_binary() && array.n() <= 64 {
        let rows = row_masks(array);
        let c = canonize_binary(&rows, array.n(), budget)?;
        return Ok(c.certificate(array));
    }
    canonize_general(array, budget)
}

/// Row `r` as a mask over columns (bit `j` = column `j`); binary, `n <= 64`.
pub fn row_masks(array: &CoveringArray) -> Vec<u64> {
    array
        .rows()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (b as u64) << j))
        .collect()
}

/// Whether the two arrays are equivalent.
pub fn are_equivalent(a: &CoveringArray, b: &CoveringArray) -> Result<bool> {
    if (a.m(), a.n(), a.q()) != (b.m(), b.n(), b.q()) {
        return Ok(false);
    }
    if invariant_signature(a) != invariant_signature(b) {
        return Ok(false);
    }
    Ok(canonical_form(a)?.canonical == canonical_form(b)?.canonical)
}

/// A cheap invariant of the equivalence class (necessary, not sufficient).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub m: usize,
    pub n: usize,
    pub q: u8,
    pub distances: RowDistanceStructure,
    /// Per column, its symbol counts sorted; the list sorted. For binary
    /// arrays this is the weight reduced to `min(w, m - w)`.
    pub columns: Vec<Vec<usize>>,
}

pub fn invariant_signature(array: &CoveringArray) -> Signature {
    let q = array.q() as usize;
    let mut columns: Vec<Vec<usize>> = (0..array.n())
        .map(|c| {
            let mut counts = vec![0usize; q];
            for r in 0..array.m() {
                counts[array.get(r, c) as usize] += 1;
            }
            counts.sort_unstable();
            counts
        })
        .collect();
    columns.sort();
    Signature {
        m: array.m(),
        n: array.n(),
        q: array.q(),
        distances: array.row_distance_structure(),
        columns,
    }
}

/// Result of the bit-parallel canonizer. Canonical row `i` has bit
/// `k - 1 - j` equal to canonical entry `(i, j)`, so numeric order of rows is
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCanon {
    pub k: usize,
    pub rows: Vec<u64>,
    /// Original row at each canonical position.
    pub row_order: Vec<usize>,
    /// Original column at each canonical position.
    pub col_order: Vec<usize>,
    /// Original columns that are complemented.
    pub flips: u64,
    pub stats: CanonStats,
}

impl BinaryCanon {
    pub fn to_array(&self) -> CoveringArray {
        let (m, k) = (self.rows.len(), self.k);
        let mut entries = Vec::with_capacity(m * k);
        for &w in &self.rows {
            entries.extend((0..k).map(|j| (w >> (k - 1 - j) & 1) as u8));
        }
        CoveringArray::from_flat(m, k, 2, entries).expect("nonempty")
    }

    fn certificate(&self, _input: &CoveringArray) -> CanonicalCertificate {
        let mut ops: Vec<EquivalenceOp> = (0..self.k)
            .filter(|&c| self.flips >> c & 1 == 1)
            .map(|col| EquivalenceOp::SymbolPerm {
                col,
                perm: Permutation(vec![1, 0]),
            })
            .collect();
        ops.push(EquivalenceOp::ColPerm(Permutation(self.col_order.clone())));
        ops.push(EquivalenceOp::RowPerm(Permutation(self.row_order.clone())));
        CanonicalCertificate {
            canonical: self.to_array(),
            ops,
        }
    }
}

/// Canonizes a binary array given as row masks over `k <= 64` columns.
pub fn canonize_binary(rows: &[u64], k: usize, budget: u64) -> Result<BinaryCanon> {
    assert!((1..=64).contains(&k), "binary canonizer needs 1..=64 columns");
    let mut s = BinarySearch {
        rows,
        m: rows.len(),
        k,
        budget,
        nodes: 0,
        best: None,
        gens: Vec::new(),
    };
    let mut chosen = Vec::with_capacity(s.m);
    let mut used = vec![false; s.m];
    let mut form = Vec::with_capacity(s.m);
    s.root(&mut chosen, &mut used, &mut form)?;
    let best = s.best.expect("at least one leaf");
    Ok(BinaryCanon {
        k,
        rows: best.form,
        row_order: best.row_order,
        col_order: best.col_order,
        flips: best.flips,
        stats: CanonStats {
            nodes: s.nodes,
            automorphisms: s.gens.len(),
        },
    })
}

struct BinaryLeaf {
    form: Vec<u64>,
    row_order: Vec<usize>,
    col_order: Vec<usize>,
    flips: u64,
}

struct BinarySearch<'a> {
    rows: &'a [u64],
    m: usize,
    k: usize,
    budget: u64,
    nodes: u64,
    best: Option<BinaryLeaf>,
    /// Row permutations of automorphisms found so far.
    gens: Vec<Vec<usize>>,
}

#[inline]
fn low_ones(p: u32) -> u64 {
    if p >= 64 {
        u64::MAX
    } else {
        (1u64 << p) - 1
    }
}

/// Image of a labelled row: per cell, zeros then ones.
#[inline]
fn image(labelled: u64, cells: &[u64]) -> u64 {
    let mut img = 0u64;
    for &cell in cells {
        let size = cell.count_ones();
        let pop = (labelled & cell).count_ones();
        img = img.checked_shl(size).unwrap_or(0) | low_ones(pop);
    }
    img
}

fn refine(cells: &[u64], labelled: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for &cell in cells {
        let z = cell & !labelled;
        let o = cell & labelled;
        if z != 0 {
            out.push(z);
        }
        if o != 0 {
            out.push(o);
        }
    }
    out
}

impl BinarySearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                checkpoint: None,
            });
        }
        Ok(())
    }

    fn root(&mut self, chosen: &mut Vec<usize>, used: &mut [bool], form: &mut Vec<u64>) -> Result<()> {
        self.tick()?;
        let all = low_ones(self.k as u32);
        form.push(0);
        let candidates: Vec<usize> = (0..self.m).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &c in &candidates {
            if self.skip(c, &explored, chosen) {
                continue;
            }
            explored.push(c);
            chosen.push(c);
            used[c] = true;
            let flips = self.rows[c];
            self.descend(chosen, used, form, &[all], flips)?;
            used[c] = false;
            chosen.pop();
        }
        form.pop();
        Ok(())
    }

    /// Whether candidate `c` repeats an explored row or lies in the orbit of
    /// one under the automorphisms fixing `chosen` pointwise.
    fn skip(&self, c: usize, explored: &[usize], chosen: &[usize]) -> bool {
        if explored.iter().any(|&e| self.rows[e] == self.rows[c]) {
            return true;
        }
        if explored.is_empty() || self.gens.is_empty() {
            return false;
        }
        orbit_meets(&self.gens, chosen, c, explored, self.m)
    }

    fn descend(
        &mut self,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        form: &mut Vec<u64>,
        cells: &[u64],
        flips: u64,
    ) -> Result<()> {
        self.tick()?;
        let depth = chosen.len();
        if depth == self.m {
            self.leaf(chosen, form, cells, flips);
            return Ok(());
        }
        if cells.len() == self.k {
            // Column order and labels are fixed; the rest is a sort.
            let mut rest: Vec<(u64, usize)> = (0..self.m)
                .filter(|&r| !used[r])
                .map(|r| (image(self.rows[r] ^ flips, cells), r))
                .collect();
            rest.sort_unstable();
            let before = form.len();
            let mut order = chosen.clone();
            for &(img, r) in &rest {
                form.push(img);
                order.push(r);
            }
            self.leaf(&order, form, cells, flips);
            form.truncate(before);
            return Ok(());
        }
        let mut min = u64::MAX;
        let mut candidates = Vec::new();
        for r in (0..self.m).filter(|&r| !used[r]) {
            let img = image(self.rows[r] ^ flips, cells);
            if img < min {
                min = img;
                candidates.clear();
            }
            if img == min {
                candidates.push(r);
            }
        }
        if let Some(best) = &self.best {
            if form[..] == best.form[..depth] && min > best.form[depth] {
                return Ok(());
            }
        }
        form.push(min);
        let mut explored = Vec::new();
        for &c in &candidates {
            if let Some(best) = &self.best {
                // A sibling may have found a strictly better form.
                if form[..] > best.form[..=depth] {
                    break;
                }
            }
            if self.skip(c, &explored, chosen) {
                continue;
            }
            explored.push(c);
            let next = refine(cells, self.rows[c] ^ flips);
            chosen.push(c);
            used[c] = true;
            self.descend(chosen, used, form, &next, flips)?;
            used[c] = false;
            chosen.pop();
        }
        form.pop();
        Ok(())
    }

    fn leaf(&mut self, order: &[usize], form: &[u64], cells: &[u64], flips: u64) {
        match &self.best {
            Some(best) if best.form[..] < form[..] => {}
            Some(best) if best.form[..] == form[..] => {
                if self.gens.len() < MAX_GENERATORS {
                    let mut g = vec![0; self.m];
                    for (i, &r) in order.iter().enumerate() {
                        g[r] = best.row_order[i];
                    }
                    if g.iter().enumerate().any(|(i, &p)| i != p) && !self.gens.contains(&g) {
                        self.gens.push(g);
                    }
                }
            }
            _ => {
                let col_order = cells
                    .iter()
                    .flat_map(|&cell| (0..self.k).filter(move |&j| cell >> j & 1 == 1))
                    .collect();
                self.best = Some(BinaryLeaf {
                    form: form.to_vec(),
                    row_order: order.to_vec(),
                    col_order,
                    flips,
                });
            }
        }
    }
}

/// Whether the orbit of `c`, under the generators fixing every row of
/// `fixed`, contains a row of `targets`.
fn orbit_meets(gens: &[Vec<usize>], fixed: &[usize], c: usize, targets: &[usize], m: usize) -> bool {
    let usable: Vec<&Vec<usize>> = gens
        .iter()
        .filter(|g| fixed.iter().all(|&f| g[f] == f))
        .collect();
    if usable.is_empty() {
        return false;
    }
    let mut seen = vec![false; m];
    let mut stack = vec![c];
    seen[c] = true;
    while let Some(x) = stack.pop() {
        if targets.contains(&x) {
            return true;
        }
        for g in &usable {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

const UNSET: u8 = u8::MAX;

#[derive(Clone)]
struct Labels {
    /// `map[c][s]`: label of symbol `s` in column `c`.
    map: Vec<Vec<u8>>,
    next: Vec<u8>,
}

struct GeneralLeaf {
    form: Vec<Vec<u8>>,
    row_order: Vec<usize>,
    col_order: Vec<usize>,
    labels: Labels,
}

struct GeneralSearch<'a> {
    a: &'a CoveringArray,
    budget: u64,
    nodes: u64,
    best: Option<GeneralLeaf>,
    gens: Vec<Vec<usize>>,
}

/// The symbol-grid engine used for `q > 2` (and wide binary arrays).
fn canonize_general(array: &CoveringArray, budget: u64) -> Result<CanonicalCertificate> {
    let (m, n, q) = (array.m(), array.n(), array.q() as usize);
    let mut s = GeneralSearch {
        a: array,
        budget,
        nodes: 0,
        best: None,
        gens: Vec::new(),
    };
    let labels = Labels {
        map: vec![vec![UNSET; q]; n],
        next: vec![0; n],
    };
    let mut chosen = Vec::with_capacity(m);
    let mut used = vec![false; m];
    let mut form = Vec::with_capacity(m);
    s.descend(&mut chosen, &mut used, &mut form, &[(0..n).collect()], &labels)?;
    let best = s.best.expect("at least one leaf");
    let mut ops = Vec::new();
    for c in 0..n {
        let mut perm = best.labels.map[c].clone();
        let unset = perm.iter_mut().filter(|p| **p == UNSET);
        for (p, label) in unset.zip(best.labels.next[c]..) {
            *p = label;
        }
        let perm = Permutation(perm.into_iter().map(usize::from).collect());
        if !perm.is_identity() {
            ops.push(EquivalenceOp::SymbolPerm { col: c, perm });
        }
    }
    ops.push(EquivalenceOp::ColPerm(Permutation(best.col_order.clone())));
    ops.push(EquivalenceOp::RowPerm(Permutation(best.row_order.clone())));
    let entries = best.form.concat();
    Ok(CanonicalCertificate {
        canonical: CoveringArray::from_flat(m, n, array.q(), entries)?,
        ops,
    })
}

impl GeneralSearch<'_> {
    fn label_of(&self, labels: &Labels, r: usize, c: usize) -> u8 {
        let s = self.a.get(r, c) as usize;
        match labels.map[c][s] {
            UNSET => labels.next[c],
            l => l,
        }
    }

    fn image(&self, labels: &Labels, r: usize, cells: &[Vec<usize>]) -> Vec<u8> {
        let mut img = Vec::with_capacity(self.a.n());
        for cell in cells {
            let start = img.len();
            img.extend(cell.iter().map(|&c| self.label_of(labels, r, c)));
            img[start..].sort_unstable();
        }
        img
    }

    fn descend(
        &mut self,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        form: &mut Vec<Vec<u8>>,
        cells: &[Vec<usize>],
        labels: &Labels,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                checkpoint: None,
            });
        }
        let m = self.a.m();
        let depth = chosen.len();
        if depth == m {
            self.leaf(chosen, form, cells, labels);
            return Ok(());
        }
        let mut min: Option<Vec<u8>> = None;
        let mut candidates = Vec::new();
        for r in (0..m).filter(|&r| !used[r]) {
            let img = self.image(labels, r, cells);
            match &min {
                Some(cur) if img > *cur => continue,
                Some(cur) if img == *cur => candidates.push(r),
                _ => {
                    min = Some(img);
                    candidates = vec![r];
                }
            }
        }
        let min = min.expect("rows remain");
        if let Some(best) = &self.best {
            if form[..] == best.form[..depth] && min > best.form[depth] {
                return Ok(());
            }
        }
        form.push(min);
        let mut explored: Vec<usize> = Vec::new();
        for &c in &candidates {
            if let Some(best) = &self.best {
                if form[..] > best.form[..=depth] {
                    break;
                }
            }
            if explored.iter().any(|&e| self.a.row(e) == self.a.row(c))
                || (!explored.is_empty() && orbit_meets(&self.gens, chosen, c, &explored, m))
            {
                continue;
            }
            explored.push(c);
            let mut next_labels = labels.clone();
            for col in 0..self.a.n() {
                let s = self.a.get(c, col) as usize;
                if next_labels.map[col][s] == UNSET {
                    next_labels.map[col][s] = next_labels.next[col];
                    next_labels.next[col] += 1;
                }
            }
            let mut next_cells = Vec::with_capacity(cells.len());
            for cell in cells {
                let mut by_label: Vec<(u8, usize)> = cell
                    .iter()
                    .map(|&col| (next_labels.map[col][self.a.get(c, col) as usize], col))
                    .collect();
                by_label.sort_unstable();
                for group in by_label.chunk_by(|x, y| x.0 == y.0) {
                    next_cells.push(group.iter().map(|&(_, col)| col).collect());
                }
            }
            chosen.push(c);
            used[c] = true;
            self.descend(chosen, used, form, &next_cells, &next_labels)?;
            used[c] = false;
            chosen.pop();
        }
        form.pop();
        Ok(())
    }

    fn leaf(&mut self, order: &[usize], form: &[Vec<u8>], cells: &[Vec<usize>], labels: &Labels) {
        match &self.best {
            Some(best) if best.form[..] < form[..] => {}
            Some(best) if best.form[..] == form[..] => {
                if self.gens.len() < MAX_GENERATORS {
                    let mut g = vec![0; order.len()];
                    for (i, &r) in order.iter().enumerate() {
                        g[r] = best.row_order[i];
                    }
                    if g.iter().enumerate().any(|(i, &p)| i != p) && !self.gens.contains(&g) {
                        self.gens.push(g);
                    }
                }
            }
            _ => {
                self.best = Some(GeneralLeaf {
                    form: form.to_vec(),
                    row_order: order.to_vec(),
                    col_order: cells.concat(),
                    labels: labels.clone(),
                });
            }
        }
    }
}

/// Serializes operations as lines `row i j`, `col i j` (1-based swaps) and
/// `sym c p0 p1 ..` (1-based column, images of each symbol).
pub fn ops_to_text(ops: &[EquivalenceOp]) -> String {
    let mut out = String::new();
    for op in ops {
        match op {
            EquivalenceOp::RowPerm(p) => {
                for (a, b) in p.as_swaps() {
                    out.push_str(&format!("row {} {}\n", a + 1, b + 1));
                }
            }
            EquivalenceOp::ColPerm(p) => {
                for (a, b) in p.as_swaps() {
                    out.push_str(&format!("col {} {}\n", a + 1, b + 1));
                }
            }
            EquivalenceOp::SymbolPerm { col, perm } => {
                let imgs: Vec<String> = perm.images().iter().map(usize::to_string).collect();
                out.push_str(&format!("sym {} {}\n", col + 1, imgs.join(" ")));
            }
        }
    }
    out
}

/// Parses the line format of [`ops_to_text`] against an array's dimensions.
pub fn ops_from_text(text: &str, m: usize, n: usize, q: u8) -> Result<Vec<EquivalenceOp>> {
    let mut ops = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap_or_default();
        let nums: Vec<usize> = parts
            .map(|t| t.parse().map_err(|_| bad(&format!("bad number `{t}`"))))
            .collect::<Result<_>>()?;
        let swap = |len: usize| -> Result<Permutation> {
            let [a, b] = nums[..] else {
                return Err(bad("swap needs two indices"));
            };
            if a == 0 || b == 0 || a > len || b > len {
                return Err(bad("index out of range"));
            }
            let mut p: Vec<usize> = (0..len).collect();
            p.swap(a - 1, b - 1);
            Ok(Permutation(p))
        };
        match kind {
            "row" => ops.push(EquivalenceOp::RowPerm(swap(m)?)),
            "col" => ops.push(EquivalenceOp::ColPerm(swap(n)?)),
            "sym" => {
                let (&c, images) = nums.split_first().ok_or_else(|| bad("missing column"))?;
                if c == 0 || c > n || images.len() != q as usize {
                    return Err(bad("bad symbol permutation"));
                }
                let perm = Permutation::new(images.to_vec()).map_err(|e| bad(&e.to_string()))?;
                ops.push(EquivalenceOp::SymbolPerm { col: c - 1, perm });
            }
            other => return Err(bad(&format!("unknown op `{other}`"))),
        }
    }
    Ok(ops)
}

impl fmt::Display for EquivalenceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(ops_to_text(std::slice::from_ref(self)).trim_end())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{fixed_matrix, FixedMatrix};

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![3, 0, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let mut cur: Vec<usize> = (0..4).collect();
        for (a, b) in p.as_swaps() {
            cur.swap(a, b);
        }
        assert_eq!(cur, p.images());
    }

    #[test]
    fn flipping_every_column_complements() {
        let a = fixed_matrix(FixedMatrix::A);
        let ops: Vec<EquivalenceOp> = (0..a.n())
            .map(|col| EquivalenceOp::SymbolPerm {
                col,
                perm: Permutation::new(vec![1, 0]).unwrap(),
            })
            .collect();
        assert_eq!(apply_ops(&a, &ops).unwrap(), a.complement().unwrap());
    }

    #[test]
    fn domain_mismatch() {
        let a = fixed_matrix(FixedMatrix::D);
        let op = EquivalenceOp::RowPerm(Permutation::identity(5));
        assert!(matches!(apply_op(&a, &op), Err(Error::DomainMismatch(_))));
        let op = EquivalenceOp::SymbolPerm {
            col: 4,
            perm: Permutation::identity(2),
        };
        assert!(matches!(apply_op(&a, &op), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn certificate_replays() {
        for f in FixedMatrix::ALL {
            let a = fixed_matrix(f);
            let cert = canonical_form(&a).unwrap();
            assert_eq!(apply_ops(&a, &cert.ops).unwrap(), cert.canonical, "{f}");
            let text = ops_to_text(&cert.ops);
            let parsed = ops_from_text(&text, a.m(), a.n(), a.q()).unwrap();
            assert_eq!(apply_ops(&a, &parsed).unwrap(), cert.canonical);
        }
    }

    #[test]
    fn binary_and_general_engines_agree() {
        for f in FixedMatrix::ALL {
            let a = fixed_matrix(f);
            let fast = canonical_form(&a).unwrap().canonical;
            let slow = canonize_general(&a, DEFAULT_BUDGET).unwrap().canonical;
            assert_eq!(fast, slow, "{f}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = fixed_matrix(FixedMatrix::A);
        assert!(matches!(
            canonical_form_with_budget(&a, 2),
            Err(Error::BudgetExceeded { budget: 2, .. })
        ));
    }

    #[test]
    fn first_canonical_row_is_zero() {
        let c = canonical_form(&fixed_matrix(FixedMatrix::Ca10x5)).unwrap().canonical;
        assert!(c.row(0).iter().all(|&b| b == 0));
    }
}
