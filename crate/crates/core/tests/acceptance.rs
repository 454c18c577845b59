//! Acceptance run: one PASS/FAIL line per criterion, each within its time
//! limit. Exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use covarray::bounds::{
    exact_can, half_minus_root_holds_on_window, improved_lower_3, known_can_table, binom_at_least_4l2,
    binom_exceeds_5l, roux_lower,
};
use covarray::classify::{
    classify, count_classes, guided_uniqueness_24x12, max_degree_search, nonexistence_14x16, nonexistence_48x13,
    SearchConstraints,
};
use covarray::constructions::{
    fixed_matrix, hadamard_3ca_12x11, johnson_entringer, standard_maximal_2ca, witness_24x12, FixedMatrix,
};
use covarray::equivalence::{apply_ops, are_equivalent, canonical_form};
use covarray::{is_covering, verify_coverage, CoveringArray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn lib<T>(r: covarray::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn constructions_verify() -> Result<String, String> {
    for m in 4..=12 {
        ensure(lib(is_covering(&lib(standard_maximal_2ca(m))?, 2))?, format!("standard maximal m={m}"))?;
    }
    for n in 4..=10 {
        let a = lib(johnson_entringer(n))?;
        ensure(a.m() == (1 << n) / 3, format!("johnson-entringer n={n} has {} rows", a.m()))?;
        ensure(lib(is_covering(&a, n - 2))?, format!("johnson-entringer n={n}"))?;
    }
    ensure(lib(is_covering(&hadamard_3ca_12x11(), 3))?, "hadamard 12x11")?;
    Ok("standard maximal m=4..12, johnson-entringer n=4..10, hadamard 12x11".into())
}

fn maximal_degree() -> Result<String, String> {
    let got: Vec<usize> = (4..=6).map(|m| max_degree_search(m, 2).map(|r| r.0)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(got == [3, 4, 10], format!("{got:?}"))?;
    Ok(format!("max degree m=4,5,6: {got:?}"))
}

fn table_one() -> Result<String, String> {
    let got: Vec<usize> = (6..=10).map(|n| count_classes(6, 2, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(got == [4, 3, 1, 1, 1], format!("{got:?}"))?;
    Ok(format!("classes (6,2,n) n=6..10: {got:?}"))
}

fn strength_three_uniqueness() -> Result<String, String> {
    let r = lib(classify(10, 3, 5, &SearchConstraints::for_params(10, 3, 5)))?;
    ensure(r.count == 1, format!("(10,3,5) has {} classes", r.count))?;
    ensure(lib(are_equivalent(&r.representatives[0], &fixed_matrix(FixedMatrix::Ca10x5)))?, "10x5 class differs")?;
    let r = lib(classify(12, 3, 11, &SearchConstraints::for_params(12, 3, 11)))?;
    ensure(r.count == 1, format!("(12,3,11) has {} classes", r.count))?;
    ensure(lib(are_equivalent(&r.representatives[0], &hadamard_3ca_12x11()))?, "12x11 class differs")?;
    Ok("(10,3,5) and (12,3,11) unique".into())
}

fn table_three() -> Result<String, String> {
    let got: Vec<usize> = (6..=11).map(|n| count_classes(12, 3, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(got == [9, 2, 2, 1, 1, 1], format!("{got:?}"))?;
    Ok(format!("classes (12,3,n) n=6..11 (extended range included): {got:?}"))
}

fn guided_proofs() -> Result<String, String> {
    let g = lib(guided_uniqueness_24x12())?;
    ensure(g.result.count == 1, "24x12 not unique")?;
    let dead = g.branches.iter().find(|b| b.label.contains("B1")).ok_or("no B1 branch")?;
    ensure(dead.completions == 0, "B1 branch survived")?;
    ensure(g.rejected_distance == 14, format!("d = {}", g.rejected_distance))?;
    let r = lib(nonexistence_48x13())?;
    ensure(!r.exists && r.implied_lower == 49, "48x13 not refuted")?;
    let s = lib(nonexistence_14x16())?;
    ensure(!s.exists && s.sum == 600 && s.required == 630, format!("sum {} vs {}", s.sum, s.required))?;
    Ok("24x12 unique (B1 dead at d=14); 48x13 UNSAT; 14x16 sum 600 < 630".into())
}

fn bounds_regression() -> Result<String, String> {
    let v = |r: covarray::Result<covarray::bounds::BoundResult>| r.map(|b| b.value_u64()).map_err(|e| e.to_string());
    ensure(v(improved_lower_3(15))? == 15 && v(improved_lower_3(16))? == 15, "improved lower bound")?;
    ensure(v(roux_lower(4, 12, 2))? == 24, "roux (4,12)")?;
    ensure(lib(exact_can(4, 12, 2))? == 24, "CAN(4,12,2)")?;
    let w = witness_24x12();
    ensure(w.m() == 24 && w.n() == 12 && lib(is_covering(&w, 4))?, "24x12 witness")?;
    ensure(v(roux_lower(5, 13, 2))? == 48, "roux (5,13)")?;
    let upgraded = known_can_table().lookup(5, 13, 2).map(|e| e.value);
    ensure(upgraded == Some(49) && lib(nonexistence_48x13())?.implied_lower == 49, "CAN(5,13,2) >= 49")?;
    Ok("15, 15, 24 (witnessed), 48 -> 49".into())
}

fn property_suites() -> Result<String, String> {
    check_residuals();
    check_rds_invariance(1000);
    let lifted = hall_lift_instances();

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut canon_checked = 0;
    for (name, a, _) in constructed() {
        let c = lib(canonical_form(&a))?;
        ensure(lib(canonical_form(&c.canonical))?.canonical == c.canonical, format!("{name}: not idempotent"))?;
        let mut ops = Vec::new();
        let mut cur = a.clone();
        for _ in 0..30 {
            let op = random_op(&mut rng, &cur);
            cur = lib(covarray::equivalence::apply_op(&cur, &op))?;
            ops.push(op);
        }
        let b = lib(apply_ops(&a, &ops))?;
        ensure(lib(canonical_form(&b))?.canonical == c.canonical, format!("{name}: not invariant"))?;
        canon_checked += 1;
    }

    let mut small: Vec<CoveringArray> = constructed().into_iter().map(|(_, a, _)| a).filter(|a| a.m() * a.n() <= 64).collect();
    for _ in 0..2000 {
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=64 / m).min(8);
        let q = if rng.gen_bool(0.8) { 2 } else { 3 };
        let e = (0..m * n).map(|_| rng.gen_range(0..q)).collect();
        small.push(lib(CoveringArray::from_flat(m, n, q, e))?);
    }
    for a in &small {
        for t in 1..=a.n().min(4) {
            let got: Vec<_> = lib(verify_coverage(a, t))?.missing.into_iter().map(|p| (p.columns, p.pattern)).collect();
            ensure(got == naive_missing(a, t), format!("coverage mismatch on {}x{} t={t}", a.m(), a.n()))?;
        }
    }
    Ok(format!(
        "residuals, R(C) x1000 ops, {lifted} Hall lifts, {canon_checked} canonical forms, {} coverage oracles",
        small.len()
    ))
}

fn auxiliary_inequalities() -> Result<String, String> {
    ensure((4..=64).all(binom_exceeds_5l), "C(2l-1,l-1) > 5l")?;
    ensure((5..=64).all(binom_at_least_4l2), "C(2l,l-1) >= 4l^2")?;
    ensure((4..=32).all(half_minus_root_holds_on_window), "square-root inequality")?;
    Ok("l=4..64, l=5..64, l=4..32 over each window".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, Check); 9] = [
        (1, "constructions verify", Duration::from_secs(5), constructions_verify),
        (2, "maximal degree, exact", Duration::from_secs(60), maximal_degree),
        (3, "strength-2 class counts, 6 rows", Duration::from_secs(300), table_one),
        (4, "uniqueness, strength 3", Duration::from_secs(600), strength_three_uniqueness),
        (5, "strength-3 class counts, 12 rows", Duration::from_secs(1800), table_three),
        (6, "guided proofs", Duration::from_secs(300), guided_proofs),
        (7, "bounds regression", Duration::from_secs(1), bounds_regression),
        (8, "property suites", Duration::from_secs(600), property_suites),
        (9, "auxiliary inequalities", Duration::from_secs(1), auxiliary_inequalities),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if took <= limit {
                Ok(detail)
            } else {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {id}: PASS  {title} [{took:.2?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id}: FAIL  {title} [{took:.2?}] {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
