//! Naive reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use covarray::constructions::{
    fixed_matrix, hadamard_3ca_12x11, johnson_entringer, standard_maximal_2ca, witness_24x12, FixedMatrix,
};
use covarray::equivalence::{EquivalenceOp, Permutation};
use covarray::normalization::{lift_except, lift_min_weight, lift_to_target};
use covarray::equivalence::apply_op;
use covarray::{is_covering, BitColumn, CoveringArray, ResidualSelector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every `k`-subset of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every word of length `t` over `q` symbols, in lexicographic order.
pub fn words(q: u8, t: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..q).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Uncovered `(1-based columns, pattern)` pairs, by direct row scanning.
pub fn naive_missing(a: &CoveringArray, t: usize) -> Vec<(Vec<usize>, Vec<u8>)> {
    let mut out = Vec::new();
    for cols in subsets(a.n(), t) {
        let seen: BTreeSet<Vec<u8>> = a.rows().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        for w in words(a.q(), t) {
            if !seen.contains(&w) {
                out.push((cols.iter().map(|c| c + 1).collect(), w));
            }
        }
    }
    out
}

pub fn naive_covers(a: &CoveringArray, t: usize) -> bool {
    naive_missing(a, t).is_empty()
}

/// Every array the library constructs, with its strength.
pub fn constructed() -> Vec<(String, CoveringArray, usize)> {
    let mut v = Vec::new();
    for m in 4..=12 {
        v.push((format!("standard-maximal-{m}"), standard_maximal_2ca(m).unwrap(), 2));
    }
    for n in 4..=10 {
        v.push((format!("johnson-entringer-{n}"), johnson_entringer(n).unwrap(), n - 2));
    }
    v.push(("hadamard-12x11".into(), hadamard_3ca_12x11(), 3));
    v.push(("witness-24x12".into(), witness_24x12(), 4));
    for f in FixedMatrix::ALL {
        let a = fixed_matrix(f);
        let t = (1..=a.n()).rev().find(|&t| naive_covers(&a, t)).unwrap_or(0);
        v.push((f.name().to_string(), a, t));
    }
    v
}

pub fn random_perm<R: Rng>(rng: &mut R, len: usize) -> Permutation {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    Permutation::new(p).unwrap()
}

/// One uniformly chosen generator of the equivalence group.
pub fn random_op<R: Rng>(rng: &mut R, a: &CoveringArray) -> EquivalenceOp {
    match rng.gen_range(0..3) {
        0 => EquivalenceOp::RowPerm(random_perm(rng, a.m())),
        1 => EquivalenceOp::ColPerm(random_perm(rng, a.n())),
        _ => EquivalenceOp::SymbolPerm {
            col: rng.gen_range(0..a.n()),
            perm: random_perm(rng, a.q() as usize),
        },
    }
}

/// Class invariant independent of the library's canonizer: the least
/// sorted list of complement-normalized columns over all row orders.
/// Only for small binary arrays.
pub fn brute_class_key(a: &CoveringArray) -> Vec<u64> {
    let m = a.m();
    let cols: Vec<Vec<u8>> = (0..a.n()).map(|c| a.column(c)).collect();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        let mut key: Vec<u64> = cols
            .iter()
            .map(|c| {
                let w = perm.iter().enumerate().fold(0u64, |acc, (i, &r)| acc | (c[r] as u64) << i);
                let full = (1u64 << m) - 1;
                w.min(!w & full)
            })
            .collect();
        key.sort_unstable();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All 2-covering column sets of the given degree whose columns are
/// distinct, nonconstant and of weight at most `m/2`.
fn two_covering_instances(m: usize, n: usize, limit: usize) -> Vec<CoveringArray> {
    let full = (1u64 << m) - 1;
    let cols: Vec<u64> = (1..full).filter(|c| c.count_ones() as usize <= m / 2).collect();
    let mut out = Vec::new();
    for pick in subsets(cols.len(), n) {
        let masks: Vec<u64> = pick.iter().map(|&i| cols[i]).collect();
        let ok = (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let (a, b) = (masks[i], masks[j]);
                a & b != 0 && a & !b & full != 0 && !a & b & full != 0 && !a & !b & full != 0
            })
        });
        if ok {
            out.push(CoveringArray::from_column_masks(m, &masks).unwrap());
            if out.len() == limit {
                break;
            }
        }
    }
    out
}

fn column_sets(a: &CoveringArray) -> Vec<BitColumn> {
    a.bit_columns().to_vec()
}

fn check_lift(before: &CoveringArray, after: &CoveringArray, targets: &[usize]) {
    assert_eq!((after.m(), after.n()), (before.m(), before.n()));
    assert!(naive_covers(after, 2), "lift broke 2-coverage");
    for (i, (b, a)) in column_sets(before).iter().zip(column_sets(after)).enumerate() {
        assert!(b.is_subset_of(&a), "column {i} lost support");
        assert_eq!(a.weight(), targets[i].max(b.weight()), "column {i} weight");
    }
}

/// Checks every lifting routine on all small 2-covering instances with
/// 6 or 7 rows; returns how many instances were lifted.
pub fn hall_lift_instances() -> usize {
    let mut checked = 0;
    for (m, n) in [(6, 3), (6, 4), (6, 5), (7, 3), (7, 4), (7, 5)] {
        let half = m / 2;
        for a in two_covering_instances(m, n, 400) {
            let w = a.column_weights();
            let s = *w.iter().min().unwrap();
            if s >= half {
                continue;
            }
            let lifted = lift_min_weight(&a).unwrap();
            let targets: Vec<usize> = w.iter().map(|&x| if x == s { s + 1 } else { x }).collect();
            check_lift(&a, &lifted, &targets);

            let full = lift_to_target(&a, half).unwrap();
            check_lift(&a, &full, &vec![half; n]);

            let j = w.iter().position(|&x| x < half).unwrap();
            let except = lift_except(&a, j + 1).unwrap();
            let mut t = vec![half; n];
            t[j] = half - 1;
            check_lift(&a, &except, &t);
            checked += 1;
        }
    }
    checked
}

/// Single and double residuals of every constructed array keep the
/// expected strength.
pub fn check_residuals() {
    for (name, a, t) in constructed() {
        // Large arrays use the bit-parallel checker, itself tested against
        // the naive one below.
        let covers = |r: &CoveringArray, t: usize| {
            if a.m() * a.n() > 400 {
                is_covering(r, t).unwrap()
            } else {
                naive_covers(r, t)
            }
        };
        let q = a.q();
        for c1 in 1..=a.n() {
            for v1 in 0..q {
                let r = a.residual(&ResidualSelector::new(&[(c1, v1)])).unwrap();
                if t >= 2 {
                    let r = r.to_array().unwrap();
                    assert!(covers(&r, t - 1), "{name}: Res(c{c1}={v1}) below strength {}", t - 1);
                }
                if t >= 3 {
                    for c2 in c1 + 1..=a.n() {
                        for v2 in 0..q {
                            let sel = ResidualSelector::new(&[(c1, v1), (c2, v2)]);
                            let r = a.residual(&sel).unwrap().to_array().unwrap();
                            assert!(covers(&r, t - 2), "{name}: double residual");
                        }
                    }
                }
            }
        }
    }
}

/// `R(C)` of every constructed array after each of `steps` random operations.
pub fn check_rds_invariance(steps: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, a, _) in constructed() {
        let want = a.row_distance_structure();
        let mut cur = a.clone();
        for step in 0..steps {
            cur = apply_op(&cur, &random_op(&mut rng, &cur)).unwrap();
            assert_eq!(cur.row_distance_structure(), want, "{name} after {step} ops");
        }
    }
}

