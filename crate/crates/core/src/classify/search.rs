use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use super::checkpoint::Checkpoint;
use crate::equivalence::{canonize_binary, DEFAULT_BUDGET};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Partial arrays accepted (tree nodes below the root).
    pub nodes: u64,
    /// Canonical forms computed.
    pub canon_calls: u64,
    /// Children refused by the canonical-deletion test.
    pub rejected: u64,
    /// Children isomorphic to an earlier sibling.
    pub duplicates: u64,
    /// Nodes cut because too few compatible columns remained.
    pub pruned: u64,
    pub units: usize,
    #[serde(skip)]
    pub elapsed_ms: u64,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.canon_calls += o.canon_calls;
        self.rejected += o.rejected;
        self.duplicates += o.duplicates;
        self.pruned += o.pruned;
    }
}

/// A partial array: columns in insertion order, its canonical key, and the
/// universe indices still compatible with it.
#[derive(Clone)]
pub(crate) struct Node {
    cols: Vec<u64>,
    key: Vec<u64>,
    compat: Vec<u32>,
}

pub(crate) struct Engine<'a> {
    m: usize,
    t: usize,
    target: Option<usize>,
    universe: &'a [u64],
    distances: Option<Vec<usize>>,
    full: u64,
}

const DEFAULT_SPLIT: usize = 2;

/// A finished work unit: its index, canonical keys and statistics.
type UnitResult = (usize, Vec<Vec<u64>>, SearchStats);

struct Shared {
    budget: u64,
    spent: AtomicU64,
    stop: AtomicBool,
}

impl Shared {
    fn charge(&self) -> Result<()> {
        let used = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget || self.stop.load(Ordering::Relaxed) {
            self.stop.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                checkpoint: None,
            });
        }
        Ok(())
    }
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        m: usize,
        t: usize,
        target: Option<usize>,
        universe: &'a [u64],
        distances: Option<Vec<usize>>,
    ) -> Self {
        Engine {
            m,
            t,
            target,
            universe,
            distances,
            full: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
        }
    }

    fn root(&self) -> Node {
        Node {
            cols: Vec::new(),
            key: vec![0; self.m],
            compat: (0..self.universe.len() as u32).collect(),
        }
    }

    /// Row masks of the array with the given columns (bit `j` = column `j`).
    fn rows_of(&self, cols: &[u64]) -> Vec<u64> {
        (0..self.m)
            .map(|r| {
                cols.iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &c)| acc | (c >> r & 1) << j)
            })
            .collect()
    }

    fn canon_key(&self, cols: &[u64], stats: &mut SearchStats) -> Result<(Vec<u64>, usize)> {
        stats.canon_calls += 1;
        let c = canonize_binary(&self.rows_of(cols), cols.len(), DEFAULT_BUDGET)?;
        let last = *c.col_order.last().expect("nonempty");
        Ok((c.rows, last))
    }

    /// Row sets realizing each pattern on `(S, newest)` for every
    /// `(t-2)`-subset `S` of the earlier columns. A candidate is compatible
    /// with the child iff it splits every one of these sets.
    fn pattern_sets(&self, earlier: &[u64], newest: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let k = self.t - 2;
        let mut idx: Vec<usize> = Vec::with_capacity(k);
        fn rec(
            e: &Engine,
            earlier: &[u64],
            newest: u64,
            k: usize,
            start: usize,
            idx: &mut Vec<usize>,
            out: &mut Vec<u64>,
        ) {
            if idx.len() == k {
                let mut sets = vec![e.full];
                for &i in idx.iter() {
                    let c = earlier[i];
                    sets = sets.iter().flat_map(|&s| [s & !c, s & c]).collect();
                }
                out.extend(sets.iter().flat_map(|&s| [s & !newest, s & newest]));
                return;
            }
            for i in start..earlier.len() {
                idx.push(i);
                rec(e, earlier, newest, k, i + 1, idx, out);
                idx.pop();
            }
        }
        rec(self, earlier, newest, k, 0, &mut idx, &mut out);
        out
    }

    fn compatible(&self, sets: &[u64], newest: u64, cand: u64) -> bool {
        if let Some(ds) = &self.distances {
            let d = (newest ^ cand).count_ones() as usize;
            if !ds.iter().any(|&a| a == d || a + d == self.m) {
                return false;
            }
        }
        sets.iter().all(|&s| s & cand != 0 && s & !cand & self.full != 0)
    }

    /// Accepted, pairwise non-isomorphic children of `node`.
    fn children(&self, node: &Node, shared: &Shared, stats: &mut SearchStats) -> Result<Vec<Node>> {
        let k = node.cols.len();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut out = Vec::new();
        for (pos, &ci) in node.compat.iter().enumerate() {
            shared.charge()?;
            let c = self.universe[ci as usize];
            let mut cols = node.cols.clone();
            cols.push(c);
            let (key, last) = self.canon_key(&cols, stats)?;
            if last != k {
                let mut rest = cols.clone();
                rest.remove(last);
                let parent_key = if rest.is_empty() {
                    vec![0; self.m]
                } else {
                    self.canon_key(&rest, stats)?.0
                };
                if parent_key != node.key {
                    stats.rejected += 1;
                    continue;
                }
            }
            if !seen.insert(key.clone()) {
                stats.duplicates += 1;
                continue;
            }
            // Every compatible column stays a candidate: the deletion test,
            // not the insertion order, decides which parent owns a class.
            let sets = self.pattern_sets(&node.cols, c);
            let compat: Vec<u32> = node
                .compat
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &u)| u)
                .filter(|&u| self.compatible(&sets, c, self.universe[u as usize]))
                .collect();
            let depth = k + 1;
            if let Some(n) = self.target {
                if depth < n && compat.len() < n - depth {
                    stats.pruned += 1;
                    continue;
                }
            }
            stats.nodes += 1;
            out.push(Node { cols, key, compat });
        }
        Ok(out)
    }

    /// Canonical keys of all classes at the target depth below `node`.
    fn collect(&self, node: &Node, shared: &Shared, stats: &mut SearchStats, out: &mut Vec<Vec<u64>>) -> Result<()> {
        let n = self.target.expect("target depth");
        if node.cols.len() == n {
            out.push(node.key.clone());
            return Ok(());
        }
        for child in self.children(node, shared, stats)? {
            self.collect(&child, shared, stats, out)?;
        }
        Ok(())
    }

    /// Nodes at `depth` (or shallower leaves of the target), in a fixed order.
    fn frontier(&self, depth: usize, shared: &Shared, stats: &mut SearchStats) -> Result<Vec<Node>> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for node in &level {
                next.extend(self.children(node, shared, stats)?);
            }
            level = next;
        }
        Ok(level)
    }

    /// Classifies at the target depth; returns sorted canonical keys.
    pub(crate) fn run(&self, opts: &super::RunOptions, fingerprint: &str) -> Result<(Vec<Vec<u64>>, SearchStats)> {
        let n = self.target.expect("target depth");
        let shared = Shared {
            budget: opts.budget.unwrap_or(u64::MAX),
            spent: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        };
        let split = opts.split_depth.unwrap_or(DEFAULT_SPLIT).min(n);
        let mut stats = SearchStats::default();
        let with_path = |e: Error| match e {
            Error::BudgetExceeded { budget, .. } => Error::BudgetExceeded {
                budget,
                checkpoint: opts.checkpoint.clone(),
            },
            other => other,
        };
        // Nothing is on disk before the units exist.
        let units = self.frontier(split, &shared, &mut stats)?;
        stats.units = units.len();

        let header = format!(
            "m={} t={} n={} split={} units={} {}",
            self.m,
            self.t,
            n,
            split,
            units.len(),
            fingerprint
        );
        let mut ckpt = match &opts.checkpoint {
            Some(path) => Some(Checkpoint::open(path, &header)?),
            None => None,
        };
        let mut results: Vec<Option<(Vec<Vec<u64>>, SearchStats)>> = vec![None; units.len()];
        if let Some(c) = &ckpt {
            for (idx, (keys, st)) in c.completed() {
                if idx < results.len() {
                    results[idx] = Some((keys.clone(), *st));
                }
            }
        }
        let pending: Vec<usize> = (0..units.len()).filter(|&i| results[i].is_none()).collect();
        let next = AtomicUsize::new(0);
        let done: Mutex<Vec<UnitResult>> = Mutex::new(Vec::new());
        let writer = Mutex::new(ckpt.as_mut());
        let first_error: Mutex<Option<Error>> = Mutex::new(None);
        let jobs = opts.jobs.max(1).min(pending.len().max(1));
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    if shared.stop.load(Ordering::Relaxed) {
                        return;
                    }
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&u) = pending.get(i) else {
                        return;
                    };
                    let mut st = SearchStats::default();
                    let mut keys = Vec::new();
                    match self.collect(&units[u], &shared, &mut st, &mut keys) {
                        Ok(()) => {
                            if let Some(w) = writer.lock().expect("poisoned").as_mut() {
                                if let Err(e) = w.record(u, &keys, &st) {
                                    first_error.lock().expect("poisoned").get_or_insert(e);
                                    shared.stop.store(true, Ordering::Relaxed);
                                    return;
                                }
                            }
                            done.lock().expect("poisoned").push((u, keys, st));
                        }
                        Err(e) => {
                            shared.stop.store(true, Ordering::Relaxed);
                            first_error.lock().expect("poisoned").get_or_insert(e);
                            return;
                        }
                    }
                });
            }
        });
        if let Some(e) = first_error.into_inner().expect("poisoned") {
            return Err(with_path(e));
        }
        for (u, keys, st) in done.into_inner().expect("poisoned") {
            results[u] = Some((keys, st));
        }
        let mut all = Vec::new();
        for r in results {
            let (keys, st) = r.ok_or_else(|| Error::InternalInconsistency("unit left unfinished".into()))?;
            stats.add(&st);
            all.extend(keys);
        }
        all.sort();
        let before = all.len();
        all.dedup();
        if all.len() != before {
            return Err(Error::InternalInconsistency(
                "the same class was generated twice".into(),
            ));
        }
        Ok((all, stats))
    }

    /// The deepest level reachable, with the first class found there.
    pub(crate) fn deepest(&self, budget: Option<u64>) -> Result<(usize, Vec<u64>)> {
        let shared = Shared {
            budget: budget.unwrap_or(u64::MAX),
            spent: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        };
        let mut stats = SearchStats::default();
        let mut best = (0usize, Vec::new());
        let mut stack = vec![self.root()];
        while let Some(node) = stack.pop() {
            let d = node.cols.len();
            if d > best.0 {
                best = (d, node.key.clone());
            }
            // Only classes that can still beat the record are worth growing.
            if d + node.compat.len() <= best.0 {
                continue;
            }
            let mut kids = self.children(&node, &shared, &mut stats)?;
            kids.reverse();
            stack.extend(kids);
        }
        Ok(best)
    }
}
