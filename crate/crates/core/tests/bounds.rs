mod common;

use common::naive_covers;
use covarray::bounds::*;
use covarray::classify::nonexistence_48x13;
use covarray::constructions::{hadamard_3ca_12x11, johnson_entringer, standard_maximal_2ca, witness_24x12};
use covarray::is_covering;
use num_bigint::BigUint;

/// Pascal's triangle up to row 130 in `u128`.
fn pascal() -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..=130usize {
        let prev = &rows[n - 1];
        let mut row = vec![1u128; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

fn c(p: &[Vec<u128>], n: u64, k: u64) -> u128 {
    if k > n {
        0
    } else {
        p[n as usize][k as usize]
    }
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

#[test]
fn binomials_agree_with_pascal() {
    let p = pascal();
    for n in 0..=130 {
        for k in 0..=n {
            assert_eq!(binom(n, k), big(c(&p, n, k)), "C({n},{k})");
        }
    }
    assert_eq!(binom(3, 5), big(0));
}

#[test]
fn strength_two_degree_and_size() {
    let p = pascal();
    for m in 4..=120u64 {
        assert_eq!(max_degree_strength2(m).unwrap(), big(c(&p, m - 1, m / 2 - 1)));
    }
    for n in 2..=2000u64 {
        let want = (4..).find(|&m| c(&p, m - 1, m / 2 - 1) >= n as u128).unwrap();
        assert_eq!(can2(n).unwrap(), want, "CAN(2,{n},2)");
    }
    assert!(max_degree_strength2(3).is_err());
    assert!(can2(1).is_err());
}

/// Largest family of pairwise intersecting `k`-subsets of `{0..m}` with no
/// point common to all, by enumerating every intersecting family.
fn largest_nontrivial_intersecting(m: usize, k: usize) -> usize {
    let sets: Vec<u32> = (0u32..1 << m).filter(|s| s.count_ones() as usize == k).collect();
    let adj: Vec<u64> = sets
        .iter()
        .map(|&a| sets.iter().enumerate().filter(|&(_, &b)| a & b != 0 && a != b).fold(0u64, |acc, (j, _)| acc | 1 << j))
        .collect();
    fn rec(sets: &[u32], adj: &[u64], cand: u64, common: u32, size: usize, best: &mut usize) {
        if common == 0 && size > *best {
            *best = size;
        }
        let mut rest = cand;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            rec(sets, adj, rest & adj[j], common & sets[j], size + 1, best);
        }
    }
    let mut best = 0;
    rec(&sets, &adj, (1u64 << sets.len()) - 1, (1u32 << m) - 1, 0, &mut best);
    best
}

#[test]
fn hilton_milner_matches_exhaustive_search() {
    for (m, k) in [(4, 2), (5, 2), (6, 2), (7, 2), (6, 3), (7, 3)] {
        let want = largest_nontrivial_intersecting(m, k);
        assert_eq!(hilton_milner_bound(m as u64, k as u64).unwrap(), BigUint::from(want), "({m},{k})");
    }
    assert!(hilton_milner_bound(6, 4).is_err());
}

#[test]
fn degree_windows() {
    let p = pascal();
    for m in 4..=60u64 {
        let l = m / 2;
        let high = c(&p, m - 1, l - 1) as i128;
        let low = high + m as i128 - 3 * l as i128;
        let edges = [low.max(4) - 3, high - 3];
        for n in edges.iter().flat_map(|&e| e..=e + 6).map(|n| n as u64) {
            assert_eq!(in_window(m, n), (n as i128) > low && (n as i128) <= high, "m={m} n={n}");
        }
    }
}

#[test]
fn auxiliary_inequalities_hold_on_their_ranges() {
    let p = pascal();
    for l in 4..=64u64 {
        assert!(c(&p, 2 * l - 1, l - 1) > 5 * l as u128);
        assert!(binom_exceeds_5l(l), "5l at {l}");
    }
    for l in 5..=64u64 {
        assert!(c(&p, 2 * l, l - 1) >= 4 * (l * l) as u128);
        assert!(binom_at_least_4l2(l), "4l^2 at {l}");
    }
    // Both ranges are tight.
    assert!(!binom_exceeds_5l(3));
    assert!(!binom_at_least_4l2(4));
    for l in 4..=32u64 {
        let top = c(&p, 2 * l, l - 1);
        let b = c(&p, 2 * l - 1, l - 2);
        let (lo, hi) = root_window(l);
        assert_eq!((lo.clone(), hi.clone()), (big(top + 2 - l as u128), big(top)));
        for n in top + 2 - l as u128..=top {
            // n/2 - sqrt(n)/2 > b  <=>  n - 2b > sqrt(n)  <=>  (n - 2b)^2 > n.
            let holds = n > 2 * b && {
                let d = n - 2 * b;
                d.checked_mul(d).is_none_or(|sq| sq > n)
            };
            assert!(holds, "l={l} n={n}");
            assert!(half_minus_root_exceeds(&big(n), l));
        }
        assert!(half_minus_root_holds_on_window(l));
    }
}

#[test]
fn bound_regressions() {
    assert_eq!(improved_lower_3(15).unwrap().value_u64(), 15);
    assert_eq!(improved_lower_3(16).unwrap().value_u64(), 15);
    assert_eq!(roux_lower(4, 12, 2).unwrap().value_u64(), 24);
    assert_eq!(roux_lower(5, 13, 2).unwrap().value_u64(), 48);
    assert_eq!(exact_can(4, 12, 2).unwrap(), 24);
    assert_eq!(exact_can(3, 11, 2).unwrap(), 12);
    assert_eq!(exact_can(3, 12, 2).unwrap(), 15);
    let w = witness_24x12();
    assert_eq!((w.m(), w.n()), (24, 12));
    assert!(naive_covers(&w, 4));
    let r = nonexistence_48x13().unwrap();
    assert!(!r.exists);
    assert_eq!((r.roux_lower, r.implied_lower), (48, 49));
    let table = known_can_table();
    assert_eq!(table.lookup(5, 13, 2).unwrap().value, 49);
    assert_eq!(table.lookup(5, 13, 2).unwrap().kind, BoundKind::Lower);
    assert!(matches!(exact_can(3, 40, 2), Err(covarray::Error::UnknownCan { .. })));
}

#[test]
fn improved_lower_bound_shape() {
    let p = pascal();
    for t in 3..=6u32 {
        for n in (t as u64 + 2)..=300 {
            let big_n = n - (t as u64 - 2);
            let m = (7..40u64).find(|&m| {
                let l = m / 2;
                let high = c(&p, m - 1, l - 1) as i128;
                big_n as i128 > high + m as i128 - 3 * l as i128 && big_n as i128 <= high
            });
            match (improved_lower_t(t, n), m) {
                (Ok(b), Some(m)) => {
                    let want = if m % 2 == 1 { (2 * m + 1) << (t - 3) } else { (m + 1) << (t - 2) };
                    assert_eq!(b.value_u64(), want, "t={t} n={n}");
                }
                (Err(_), None) => {}
                (got, m) => panic!("t={t} n={n}: {got:?} vs window {m:?}"),
            }
        }
    }
}

#[test]
fn table_entries_have_working_witnesses() {
    for e in known_can_table().entries {
        if e.kind != BoundKind::Exact || e.q != 2 {
            continue;
        }
        let a = match e.witness {
            Some("standard-maximal") if e.n <= 70 => {
                let s = standard_maximal_2ca(e.value as usize).unwrap();
                s.select_columns(&(0..e.n as usize).collect::<Vec<_>>()).unwrap()
            }
            Some("johnson-entringer") if e.n <= 12 => johnson_entringer(e.n as usize).unwrap(),
            Some("hadamard-12x11") => hadamard_3ca_12x11(),
            Some("witness-24x12") => witness_24x12(),
            _ => continue,
        };
        assert_eq!((a.m() as u64, a.n() as u64), (e.value, e.n), "{e:?}");
        assert!(is_covering(&a, e.t as usize).unwrap(), "{e:?}");
    }
}

#[test]
fn certificates_replay_with_exact_numbers() {
    let p = pascal();
    for m in [7u64, 9, 11, 13] {
        let l = m / 2;
        let high = c(&p, m - 1, l - 1) as u64;
        let low = high + m - 3 * l;
        for n in low + 1..=high {
            let cert = replay_odd_certificate(m, n).unwrap();
            let b = c(&p, m - 2, l - 2);
            assert_eq!(cert.upper, big(2 * (m as u128 - 1) * b * (n as u128 - b)));
            assert_eq!(cert.lower, big((m as u128 - 1) * (n as u128 * (n as u128 - 1) / 2)));
            assert!(cert.certified);
        }
    }
    let seven = replay_odd_certificate(7, 15).unwrap();
    assert_eq!((seven.upper.clone(), seven.lower.clone()), (big(600), big(630)));
    for m in [8u64, 10, 12] {
        let l = m / 2;
        let high = c(&p, m - 1, l - 1) as u64;
        for n in high + m - 3 * l + 1..=high {
            let cert = replay_even_certificate(m, n).unwrap();
            assert_eq!(cert.computed_rank, (n < 400).then_some(n + 1));
            assert!(cert.certified);
        }
    }
    assert!(replay_odd_certificate(8, 33).is_err());
    assert!(replay_even_certificate(8, 20).is_err());
}

#[test]
fn applicable_bounds_lead_with_the_best_lower_bound() {
    let all = applicable_bounds(3, 15, 2);
    assert!(!all.is_empty());
    let lowers: Vec<u64> = all.iter().filter(|b| b.kind != BoundKind::Upper).map(|b| b.value_u64()).collect();
    assert_eq!(lowers.first().copied(), lowers.iter().max().copied());
    assert_eq!(lowers[0], 15);
}
