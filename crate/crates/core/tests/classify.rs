mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use covarray::bounds::max_degree_strength2;
use covarray::classify::{
    classify, classify_with, column_universe, max_degree_search, RunOptions, SearchConstraints,
};
use covarray::constructions::{fixed_matrix, hadamard_3ca_12x11, standard_maximal_2ca, FixedMatrix};
use covarray::equivalence::{are_equivalent, canonical_form};
use covarray::{is_covering, CoveringArray, Error};

/// Equivalence classes found by trying every column subset of the universe;
/// each new class is swept out whole by permuting rows.
fn naive_classes(m: usize, t: usize, n: usize, cons: &SearchConstraints) -> BTreeSet<Vec<u64>> {
    let universe = column_universe(m, cons).unwrap();
    let full = (1u64 << m) - 1;
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut keys = BTreeSet::new();
    for pick in subsets(universe.len(), n) {
        let masks: Vec<u64> = pick.iter().map(|&i| universe[i]).collect();
        let mut norm: Vec<u64> = masks.iter().map(|&w| w.min(!w & full)).collect();
        norm.sort_unstable();
        if seen.contains(&norm) {
            continue;
        }
        let a = CoveringArray::from_column_masks(m, &masks).unwrap();
        if !naive_covers(&a, t) {
            continue;
        }
        let mut least = masks.clone();
        for p in &perms {
            let mut img: Vec<u64> = masks
                .iter()
                .map(|&c| {
                    let w = p.iter().enumerate().fold(0u64, |acc, (i, &r)| acc | (c >> r & 1) << i);
                    w.min(!w & full)
                })
                .collect();
            img.sort_unstable();
            least = least.min(img.clone());
            seen.insert(img);
        }
        keys.insert(least);
    }
    keys
}

fn constraints(m: usize, t: usize, w: (usize, usize)) -> SearchConstraints {
    SearchConstraints {
        weight_range: w,
        ..SearchConstraints::unconstrained(m, t)
    }
}

#[test]
fn complete_and_isomorph_free_on_micro_instances() {
    let cases = [
        (4, 2, (1, 2)),
        (5, 2, (1, 2)),
        (6, 2, (2, 3)),
        (7, 2, (2, 3)),
        (8, 3, (4, 4)),
        (8, 3, (3, 4)),
    ];
    for (m, t, w) in cases {
        let cons = constraints(m, t, w);
        let universe = column_universe(m, &cons).unwrap();
        let choose = |a: usize, b: usize| (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i as u128 + 1));
        // Degrees up to the first empty one, while brute force stays cheap.
        for n in (t..=universe.len()).take_while(|&n| choose(universe.len(), n) <= 400_000) {
            let want = naive_classes(m, t, n, &cons);
            let got = classify(m, t, n, &cons).unwrap();
            let keys: BTreeSet<Vec<u64>> = got.representatives.iter().map(brute_class_key).collect();
            assert_eq!(keys.len(), got.count, "({m},{t},{n}): two representatives share a class");
            assert_eq!(keys, want, "({m},{t},{n}) with weights {w:?}");
            if want.is_empty() {
                break;
            }
        }
    }
}

#[test]
fn representatives_are_sound_and_pairwise_inequivalent() {
    for (m, t, n) in [(6, 2, 6), (6, 2, 7), (12, 3, 6), (12, 3, 7)] {
        let cons = SearchConstraints::for_params(m, t, n);
        let res = classify(m, t, n, &cons).unwrap();
        assert_eq!(res.representatives.len(), res.count);
        for a in &res.representatives {
            assert_eq!((a.m(), a.n(), a.q()), (m, n, 2));
            assert!(is_covering(a, t).unwrap());
            assert_eq!(&canonical_form(a).unwrap().canonical, a, "representatives are canonical");
            for w in a.column_weights() {
                let r = w.min(m - w);
                assert!((cons.weight_range.0..=cons.weight_range.1).contains(&r));
            }
        }
        for (i, a) in res.representatives.iter().enumerate() {
            for b in &res.representatives[i + 1..] {
                assert!(!are_equivalent(a, b).unwrap());
            }
        }
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let cons = SearchConstraints::for_params(12, 3, 6);
    let run = |jobs| {
        classify_with(
            12,
            3,
            6,
            &cons,
            &RunOptions {
                jobs,
                ..RunOptions::default()
            },
        )
        .unwrap()
    };
    let one = run(1);
    for jobs in [2, 4, 8] {
        let other = run(jobs);
        assert_eq!(other.representatives, one.representatives);
        assert_eq!(other.summary_line(), one.summary_line());
    }
    assert_eq!(one.count, 9);
}

#[test]
fn split_depth_changes_work_units_not_results() {
    let cons = SearchConstraints::for_params(6, 2, 6);
    let base = classify(6, 2, 6, &cons).unwrap();
    for split in [0, 1, 3, 6] {
        let r = classify_with(
            6,
            2,
            6,
            &cons,
            &RunOptions {
                jobs: 3,
                split_depth: Some(split),
                ..RunOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.representatives, base.representatives, "split {split}");
    }
}

#[test]
fn deleting_columns_of_the_standard_array_gives_every_class_in_the_window() {
    for (m, ns) in [(4usize, 2..=3usize), (5, 4..=4), (6, 8..=10)] {
        let l = m / 2;
        let s = standard_maximal_2ca(m).unwrap();
        let big = s.n();
        for n in ns {
            let low = big as i64 + m as i64 - 3 * l as i64;
            assert!(n as i64 > low && n <= big);
            let from_s: BTreeSet<Vec<u64>> = subsets(big, n)
                .iter()
                .map(|cols| brute_class_key(&s.select_columns(cols).unwrap()))
                .collect();
            let res = classify(m, 2, n, &SearchConstraints::unconstrained(m, 2)).unwrap();
            assert!(res.count > 0);
            for a in &res.representatives {
                assert!(from_s.contains(&brute_class_key(a)), "({m},2,{n}) class outside the standard array");
            }
        }
    }
}

#[test]
fn maximal_degree_matches_the_closed_form() {
    for m in 4..=6 {
        let (n, witness) = max_degree_search(m, 2).unwrap();
        let choose = |a: usize, b: usize| (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1));
        assert_eq!(n, choose(m - 1, m / 2 - 1));
        assert_eq!(max_degree_strength2(m as u64).unwrap().to_string(), n.to_string());
        assert_eq!(witness.n(), n);
        assert!(naive_covers(&witness, 2));
    }
}

#[test]
fn strength_three_uniqueness() {
    let r = classify(10, 3, 5, &SearchConstraints::for_params(10, 3, 5)).unwrap();
    assert_eq!(r.count, 1);
    assert!(are_equivalent(&r.representatives[0], &fixed_matrix(FixedMatrix::Ca10x5)).unwrap());
    let r = classify(12, 3, 11, &SearchConstraints::for_params(12, 3, 11)).unwrap();
    assert_eq!(r.count, 1);
    assert!(are_equivalent(&r.representatives[0], &hadamard_3ca_12x11()).unwrap());
}

#[test]
fn pinned_columns_filter_classes() {
    let mut cons = SearchConstraints::for_params(6, 2, 6);
    let all = classify(6, 2, 6, &cons).unwrap();
    let first = &all.representatives[0];
    cons.pinned = first.bit_columns()[..2].to_vec();
    let some = classify(6, 2, 6, &cons).unwrap();
    assert!(some.count >= 1 && some.count <= all.count);
    assert!(some.representatives.contains(first));
}

#[test]
fn interrupted_run_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.ckpt");
    let cons = SearchConstraints::for_params(12, 3, 6);
    let opts = |budget| RunOptions {
        jobs: 2,
        budget,
        checkpoint: Some(path.clone()),
        ..RunOptions::default()
    };
    let err = classify_with(12, 3, 6, &cons, &opts(Some(1500))).unwrap_err();
    match err {
        Error::BudgetExceeded { checkpoint, .. } => assert_eq!(checkpoint.as_deref(), Some(path.as_path())),
        other => panic!("unexpected {other}"),
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("covarray-checkpoint 1\nparams "));
    let resumed = classify_with(12, 3, 6, &cons, &opts(None)).unwrap();
    let fresh = classify(12, 3, 6, &cons).unwrap();
    assert_eq!(resumed.representatives, fresh.representatives);
    assert_eq!(resumed.count, 9);

    // A checkpoint from different parameters is refused.
    let other = SearchConstraints::for_params(12, 3, 7);
    assert!(matches!(
        classify_with(12, 3, 7, &other, &opts(None)),
        Err(Error::Checkpoint(_))
    ));
}

#[test]
fn budget_exhaustion_is_reported() {
    let cons = SearchConstraints::for_params(6, 2, 6);
    let r = classify_with(
        6,
        2,
        6,
        &cons,
        &RunOptions {
            budget: Some(3),
            ..RunOptions::default()
        },
    );
    assert!(matches!(r, Err(Error::BudgetExceeded { budget: 3, checkpoint: None })));
}
