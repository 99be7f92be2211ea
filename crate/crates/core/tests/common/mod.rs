#![allow(dead_code)]

use std::sync::Arc;

use arrhom::arrangement::{Arrangement, ArrangementLattice};
use arrhom::homology::{cellular_complex, order_complex, sheaf_from_cellular, BettiTable, OrderComplexOptions, SignAssignment};
use arrhom::poset::Poset;
use arrhom::sheaf::Sheaf;
use proptest::prelude::*;

/// Arrangements with at most six hyperplanes used across the suites.
pub const FIXTURES: &[&str] = &[
    "boolean-1",
    "boolean-2",
    "boolean-3",
    "boolean-4",
    "pi3",
    "braid-3",
    "braid-4",
    "braid-4-ess",
    "generic-4-2",
    "generic-5-2",
    "generic-4-3",
    "generic-5-3",
    "pi3-q4",
];

pub fn lattice(name: &str) -> ArrangementLattice {
    Arrangement::preset(name).unwrap().build_lattice().unwrap()
}

/// `Λ^j` of the natural sheaf on `L`.
pub fn exterior(l: &ArrangementLattice, j: usize) -> Arc<Sheaf> {
    Arc::new(Arc::new(Sheaf::natural(l).unwrap()).exterior_power(j))
}

/// `Λ^j` of the natural sheaf, induced on the Boolean cover.
pub fn cover_sheaf(l: &ArrangementLattice, j: usize) -> Arc<Sheaf> {
    Arc::new(exterior(l, j).induced_on_cover(l.lattice()).unwrap().0)
}

pub fn atoms(f: &Sheaf) -> usize {
    f.base().boolean_atoms().unwrap()
}

pub fn cellular(f: &Sheaf, with_minimum: bool) -> BettiTable {
    cellular_complex(f, with_minimum, &SignAssignment::standard(atoms(f))).unwrap().betti()
}

/// Order-complex homology of `F` restricted to `P ∖ 0`.
pub fn order_minus_bottom(f: &Arc<Sheaf>) -> BettiTable {
    let (minus, emb) = f.base().remove_minimum().unwrap();
    let g = f.restrict(Arc::new(minus), &emb).unwrap();
    order_complex(&g, OrderComplexOptions::default()).unwrap().betti()
}

/// The three routes to `HS_*(L ∖ 0; Λ^j F)`.
pub fn three_routes(l: &ArrangementLattice, j: usize) -> (BettiTable, BettiTable, BettiTable) {
    let f = exterior(l, j);
    let direct = order_minus_bottom(&f);
    let fc = cover_sheaf(l, j);
    let cover = order_minus_bottom(&fc);
    let shifted = sheaf_from_cellular(&cellular(&fc, true), f.dim(l.lattice().bottom())).unwrap();
    (direct, cover, shifted)
}

/// Pulls `g` on `B(m)` back to `B(m + 1)` along the map forgetting atom `a`.
pub fn double_along(g: &Arc<Sheaf>, a: usize) -> Sheaf {
    let m = atoms(g);
    let base = Arc::new(Poset::boolean(m + 1).unwrap());
    let low = (1usize << a) - 1;
    let f = (0..base.len()).map(|s| (s & low) | ((s >> (a + 1)) << a)).collect();
    g.pull_back(base, f).unwrap()
}

/// Random arrangements with small integer normals.
pub fn arrangement_strategy(max_hyperplanes: usize, dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Arrangement> {
    dims.prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(-2i64..=2, d), 1..=max_hyperplanes).prop_map(move |v| (d, v)))
        .prop_filter_map("degenerate normals", |(d, normals)| {
            let rows: Vec<&[i64]> = normals.iter().map(Vec::as_slice).collect();
            Arrangement::from_i64(d, &rows).ok()
        })
}
