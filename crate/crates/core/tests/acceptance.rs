//! Acceptance run: one pass/fail line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use arrhom::arrangement::ArrangementLattice;
use arrhom::charpoly::CharPoly;
use arrhom::exactlin::q;
use arrhom::homology::{cellular_complex, deletion_restriction_triple, decompose_step, les_exactness, sub_boolean_ses, BettiTable, SignAssignment};
use arrhom::sheaf::{binomial, is_decomposable, is_double};
use arrhom::theorems::{
    cellular_tables, expected_cellular_graded_euler, expected_sheaf_graded_euler, graded_euler_of, predict_cellular,
    predict_cellular_essential, predict_sheaf, predict_sheaf_essential, sheaf_tables, Prediction,
};
use common::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const MAX_CHAINS: u128 = arrhom::homology::DEFAULT_MAX_CHAINS;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

/// Compares a prediction with brute-force tables over the whole grid.
fn compare(pred: &Prediction, tables: &[BettiTable], what: &str) -> Result<usize, String> {
    let imax = tables.iter().map(|t| t.betti.len()).max().unwrap_or(0).max(pred.rank + 1);
    let mut cells = 0;
    for (j, t) in tables.iter().enumerate() {
        for i in 0..imax {
            ensure(pred.get(i, j) == t.get(i), || {
                format!("{what}: (i={i}, j={j}) predicted {} computed {}", pred.get(i, j), t.get(i))
            })?;
            cells += 1;
        }
    }
    ensure(pred.cells.iter().all(|c| c.j < tables.len()), || format!("{what}: prediction outside computed range"))?;
    Ok(cells)
}

fn grid(tables: &[BettiTable]) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for (j, t) in tables.iter().enumerate() {
        for (i, &b) in t.betti.iter().enumerate() {
            if b > 0 {
                v.push((i, j, b));
            }
        }
    }
    v.sort_unstable();
    v
}

fn full_tables(l: &ArrangementLattice) -> (Vec<BettiTable>, Vec<BettiTable>) {
    let d = l.ambient_dim();
    (cellular_tables(l, d).unwrap(), sheaf_tables(l, d, MAX_CHAINS).unwrap())
}

fn c1_boolean() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        let l = lattice(&format!("boolean-{n}"));
        let tables = cellular_tables(&l, n).unwrap();
        ensure(grid(&tables) == vec![(0, n, 1)], || format!("boolean-{n}: grid {:?}", grid(&tables)))?;
    }
    within(start, Duration::from_secs(10), "boolean suite")?;
    Ok(format!("support {{(0,n)}} for n = 1..4 in {:?}", start.elapsed()))
}

fn c2_pi3() -> Outcome {
    let start = Instant::now();
    let l = lattice("pi3");
    let (cell, sheaf) = full_tables(&l);
    ensure(grid(&cell) == vec![(0, 2, 1), (1, 1, 1)], || format!("cellular {:?}", grid(&cell)))?;
    ensure(grid(&sheaf) == vec![(0, 0, 1), (0, 1, 3)], || format!("sheaf {:?}", grid(&sheaf)))?;
    within(start, Duration::from_secs(5), "Π(3)")?;
    Ok(format!("cellular {:?}, sheaf {:?}", grid(&cell), grid(&sheaf)))
}

fn c3_three_routes() -> Outcome {
    let mut slowest = Duration::ZERO;
    for name in FIXTURES {
        let start = Instant::now();
        let l = lattice(name);
        for j in 0..=l.ambient_dim() {
            let (direct, cover, shifted) = three_routes(&l, j);
            ensure(direct == cover && cover == shifted, || {
                format!("{name} j={j}: L∖0 {:?}, L̃∖0 {:?}, shifted cellular {:?}", direct.betti, cover.betti, shifted.betti)
            })?;
        }
        within(start, Duration::from_secs(60), name)?;
        slowest = slowest.max(start.elapsed());
    }
    Ok(format!("{} arrangements, all weights; slowest {slowest:?}", FIXTURES.len()))
}

fn c4_euler() -> Outcome {
    let mut count = 0;
    for name in FIXTURES {
        let l = lattice(name);
        let (cell, sheaf) = full_tables(&l);
        for j in 0..=l.ambient_dim() {
            let g = exterior(&l, j);
            let slope = g.char_poly(l.lattice()).derivative_at_one(1);
            let dim0 = q(binomial(l.ambient_dim(), j) as i64);
            ensure(q(sheaf[j].euler) == &dim0 - &slope, || {
                format!("{name} j={j}: χ HS = {}, dim F(0) - χ'(1) = {}", sheaf[j].euler, &dim0 - &slope)
            })?;
            ensure(q(cell[j].euler) == slope, || format!("{name} j={j}: χ HC = {}, χ'(1) = {slope}", cell[j].euler))?;
            count += 2;
        }
    }
    Ok(format!("{count} identities"))
}

fn c5_graded_euler() -> Outcome {
    let l = lattice("pi3");
    let (cell, sheaf) = full_tables(&l);
    ensure(graded_euler_of(&cell) == CharPoly::from_i64(&[0, -1, 1]), || format!("Π(3) cellular {}", graded_euler_of(&cell)))?;
    ensure(graded_euler_of(&sheaf) == CharPoly::from_i64(&[1, 3]), || format!("Π(3) sheaf {}", graded_euler_of(&sheaf)))?;
    for name in FIXTURES {
        let l = lattice(name);
        let (cell, sheaf) = full_tables(&l);
        ensure(graded_euler_of(&cell) == expected_cellular_graded_euler(&l), || {
            format!("{name}: cellular {} vs {}", graded_euler_of(&cell), expected_cellular_graded_euler(&l))
        })?;
        ensure(graded_euler_of(&sheaf) == expected_sheaf_graded_euler(&l), || {
            format!("{name}: sheaf {} vs {}", graded_euler_of(&sheaf), expected_sheaf_graded_euler(&l))
        })?;
    }
    Ok(format!("Π(3): {} and {}; {} arrangements", graded_euler_of(&cell).render("q"), graded_euler_of(&sheaf).render("q"), FIXTURES.len()))
}

fn c6_essential() -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    let presets = ["boolean-2", "boolean-3", "boolean-4", "pi3", "braid-4-ess", "generic-4-2", "generic-5-2", "generic-4-3"];
    for name in presets {
        let l = lattice(name);
        ensure(l.is_essential(), || format!("{name} is not essential"))?;
        let (cell, sheaf) = full_tables(&l);
        cells += compare(&predict_cellular_essential(&l).map_err(|e| e.to_string())?, &cell, name)?;
        cells += compare(&predict_sheaf_essential(&l).map_err(|e| e.to_string())?, &sheaf, name)?;
    }
    within(start, Duration::from_secs(600), "essential suite")?;
    Ok(format!("{} presets, {cells} cells in {:?}", presets.len(), start.elapsed()))
}

fn c7_nonessential() -> Outcome {
    let mut cells = 0;
    for name in ["braid-3", "pi3-q4"] {
        let l = lattice(name);
        ensure(!l.is_essential(), || format!("{name} is essential"))?;
        let (cell, sheaf) = full_tables(&l);
        let r = l.rank();
        ensure(grid(&cell).iter().all(|&(i, j, _)| i < r && r <= i + j && i + j <= l.ambient_dim()), || {
            format!("{name}: cellular support {:?} leaves the band", grid(&cell))
        })?;
        cells += compare(&predict_cellular(&l).map_err(|e| e.to_string())?, &cell, name)?;
        cells += compare(&predict_sheaf(&l).map_err(|e| e.to_string())?, &sheaf, name)?;
        if name == "braid-3" {
            let want = vec![(0, 2, 1), (0, 3, 1), (1, 1, 1), (1, 2, 1)];
            ensure(grid(&cell) == want, || format!("braid-3 cellular {:?}", grid(&cell)))?;
        }
    }
    Ok(format!("braid in Q^3 and Π(3) in Q^4, {cells} cells"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_prop<S: proptest::strategy::Strategy>(
    cases: u32,
    strategy: &S,
    test: impl Fn(S::Value) -> Result<(), String>,
) -> Result<usize, String> {
    let count = AtomicUsize::new(0);
    runner(cases)
        .run(strategy, |v| {
            count.fetch_add(1, Ordering::Relaxed);
            test(v).map_err(proptest::test_runner::TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.into_inner())
}

fn c8_structure() -> Outcome {
    use proptest::prelude::*;
    let random = (arrangement_strategy(4, 2..=3), 0usize..=3, 0usize..=4);

    // doubles: pull a random cover sheaf back along a forgetful map
    let doubles = run_prop(24, &random, |(arr, j, a)| {
        let l = arr.build_lattice().map_err(|e| e.to_string())?;
        let g = cover_sheaf(&l, j.min(l.ambient_dim()));
        let a = a.min(atoms(&g));
        let f = Arc::new(double_along(&g, a));
        ensure(is_double(&f, a).unwrap(), || "fixture is not a double".into())?;
        let b = cellular(&f, true);
        ensure(b.is_zero(), || format!("double has homology {:?}", b.betti))
    })?;
    ensure(doubles >= 20, || format!("only {doubles} double fixtures"))?;

    let decomposable = run_prop(24, &random, |(arr, j, a)| {
        let l = arr.build_lattice().map_err(|e| e.to_string())?;
        let f = cover_sheaf(&l, j.min(l.ambient_dim()));
        let a = a % atoms(&f);
        ensure(is_decomposable(&f, a).unwrap(), || "cover sheaf not decomposable".into())?;
        let (_, g) = decompose_step(&f, a).map_err(|e| e.to_string())?;
        let (before, after) = (cellular(&f, true), cellular(&g, true));
        ensure(before == after, || format!("decompose step changed {:?} to {:?}", before.betti, after.betti))
    })?;

    let sums = run_prop(16, &(arrangement_strategy(4, 2..=3), 0usize..=3, 0usize..=3), |(arr, j, k)| {
        let l = arr.build_lattice().map_err(|e| e.to_string())?;
        let d = l.ambient_dim();
        let (f, g) = (exterior(&l, j.min(d)), exterior(&l, k.min(d)));
        let sum = Arc::new(f.direct_sum(&g).map_err(|e| e.to_string())?);
        let lhs = order_minus_bottom(&sum);
        let rhs = order_minus_bottom(&f).add(&order_minus_bottom(&g));
        ensure(lhs == rhs, || format!("order complex of sum {:?}, sum {:?}", lhs.betti, rhs.betti))?;
        let (fc, gc) = (cover_sheaf(&l, j.min(d)), cover_sheaf(&l, k.min(d)));
        let sc = fc.direct_sum(&gc).map_err(|e| e.to_string())?;
        ensure(cellular(&sc, true) == cellular(&fc, true).add(&cellular(&gc, true)), || "cellular sum".into())
    })?;

    let signs = run_prop(16, &(arrangement_strategy(5, 2..=3), 0usize..=3, any::<u64>()), |(arr, j, seed)| {
        let l = arr.build_lattice().map_err(|e| e.to_string())?;
        let f = cover_sheaf(&l, j.min(l.ambient_dim()));
        let n = atoms(&f);
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = cellular_complex(&f, true, &SignAssignment::from_order(&order).unwrap()).unwrap().betti();
        ensure(b == cellular(&f, true), || format!("order {order:?} changed homology"))
    })?;

    let mut atoms_checked = 0;
    for name in FIXTURES {
        let l = lattice(name);
        for j in 0..=l.ambient_dim() {
            let g = exterior(&l, j);
            for &a in l.lattice().atoms() {
                let t = deletion_restriction_triple(&l, &g, a).map_err(|e| e.to_string())?;
                ensure(t.euler_holds, || format!("{name} j={j} atom {a}: {:?} {:?} {:?}", t.full, t.deletion, t.restriction))?;
                atoms_checked += 1;
            }
        }
    }

    let l = lattice("pi3");
    let mut les = 0;
    for j in 0..=2 {
        let f = cover_sheaf(&l, j);
        for x in 0..8 {
            let ses = sub_boolean_ses(&f, x).map_err(|e| e.to_string())?;
            let check = les_exactness(&ses);
            ensure(check.exact && check.composites_vanish, || format!("Π(3) j={j} x={x}: {:?}", check.groups))?;
            les += 1;
        }
    }
    Ok(format!(
        "{doubles} doubles, {decomposable} decomposable, {sums} sums, {signs} sign orders, {atoms_checked} deletion-restriction atoms, {les} exact sequences"
    ))
}

fn c9_aux() -> Outcome {
    let mut count = 0;
    for name in ["pi3", "braid-3"] {
        let l = lattice(name);
        for j in 0..=l.ambient_dim() {
            let g = exterior(&l, j);
            for &a in l.lattice().atoms() {
                let t = deletion_restriction_triple(&l, &g, a).map_err(|e| e.to_string())?;
                ensure(t.restriction == t.restriction_sub_boolean, || {
                    format!("{name} j={j} atom {a}: B^a {:?}, L̃^a {:?}", t.restriction_sub_boolean.betti, t.restriction.betti)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (atom, weight) pairs"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 boolean cellular support", c1_boolean),
        ("2 Π(3) cellular and sheaf tables", c2_pi3),
        ("3 three routes to sheaf homology agree", c3_three_routes),
        ("4 Euler identities", c4_euler),
        ("5 graded Euler polynomials", c5_graded_euler),
        ("6 essential predictions", c6_essential),
        ("7 non-essential predictions", c7_nonessential),
        ("8 structural properties", c8_structure),
        ("9 sub-Boolean restriction", c9_aux),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({:.2?})", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({:.2?})", start.elapsed());
            }
        }
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
