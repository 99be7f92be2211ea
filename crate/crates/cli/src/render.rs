//! Plain-text tables. Homology grids put the degree `i` along the columns
//! and the weight `j` down the rows.

use std::fmt::Write;

use arrhom::arrangement::ArrangementLattice;
use arrhom::homology::BettiTable;
use arrhom::theorems::{GridReport, VerificationReport};

pub fn lattice(l: &ArrangementLattice, ranks: &[usize], edges: &[(usize, usize)]) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "ambient dimension {}, {} hyperplanes", l.ambient_dim(), l.arrangement().len());
    let _ = writeln!(t, "{} elements, rank {}", l.len(), l.rank());
    let _ = writeln!(t, "elements per rank: {}", ranks.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    let _ = writeln!(t, "geometric: {}", l.lattice().is_geometric());
    let _ = writeln!(t, "essential: {}", l.is_essential());
    let _ = writeln!(t, "center dimension: {}", l.center().dim());
    let _ = writeln!(t, "atoms:");
    for &a in l.lattice().atoms() {
        let h = l.hyperplane_of_atom(a).expect("atom");
        let normal: Vec<String> = l.arrangement().normals()[h].iter().map(arrhom::exactlin::format_rational).collect();
        let _ = writeln!(t, "  {a}: hyperplane {h}, normal ({})", normal.join(", "));
    }
    let _ = writeln!(t, "elements (id: rank, dim, hyperplanes):");
    for x in 0..l.len() {
        let _ = writeln!(t, "  {x}: {}, {}, {:?}", l.poset().rank(x), l.label(x).dim(), l.hyperplanes_containing(x));
    }
    let _ = writeln!(t, "Hasse edges (lower < upper):");
    for chunk in edges.chunks(8) {
        let s: Vec<String> = chunk.iter().map(|(a, b)| format!("{a}<{b}")).collect();
        let _ = writeln!(t, "  {}", s.join(" "));
    }
    t
}

fn width<'a>(cells: impl Iterator<Item = &'a String>) -> usize {
    cells.map(|s| s.chars().count()).max().unwrap_or(1).max(1)
}

/// Grid with one row per label; `cell(row, i)` gives the text.
fn grid(labels: &[String], columns: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let cells: Vec<Vec<String>> = (0..labels.len()).map(|r| (0..columns).map(|i| cell(r, i)).collect()).collect();
    let heads: Vec<String> = (0..columns).map(|i| i.to_string()).collect();
    let w = width(cells.iter().flatten().chain(heads.iter()));
    let lw = width(labels.iter()).max(3);
    let mut t = String::new();
    let _ = write!(t, "{:>lw$} |", "j\\i");
    for h in &heads {
        let _ = write!(t, " {h:>w$}");
    }
    t.push('\n');
    let _ = writeln!(t, "{}-+{}", "-".repeat(lw), "-".repeat((w + 1) * columns));
    for (label, row) in labels.iter().zip(&cells) {
        let _ = write!(t, "{label:>lw$} |");
        for c in row {
            let _ = write!(t, " {c:>w$}");
        }
        t.push('\n');
    }
    t
}

fn show(v: usize) -> String {
    if v == 0 {
        ".".into()
    } else {
        v.to_string()
    }
}

pub fn betti_grid(labels: &[String], tables: &[BettiTable], min_columns: Option<usize>) -> String {
    let columns = tables.iter().map(|t| t.betti.len()).max().unwrap_or(0).max(min_columns.unwrap_or(1)).max(1);
    grid(labels, columns, |r, i| show(tables[r].get(i)))
}

/// ASCII support diagram with `j` increasing upwards.
fn support(g: &GridReport) -> String {
    let columns = g.cells.iter().map(|c| c.i + 1).max().unwrap_or(1);
    let rows = g.tables.len();
    let mut t = String::new();
    for j in (0..rows).rev() {
        let _ = write!(t, "  {j:>2} |");
        for i in 0..columns {
            let c = g.cells.iter().find(|c| c.i == i && c.j == j);
            let mark = match c {
                Some(c) if !c.ok => '!',
                Some(c) if c.computed > 0 => '#',
                _ => '.',
            };
            let _ = write!(t, " {mark}");
        }
        t.push('\n');
    }
    let _ = writeln!(t, "     +{}", "-".repeat(2 * columns));
    let _ = write!(t, "      ");
    for i in 0..columns {
        let _ = write!(t, "{} ", i % 10);
    }
    let _ = writeln!(t, " i");
    t
}

fn grid_report(title: &str, g: &GridReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{title}");
    let labels: Vec<String> = (0..g.tables.len()).map(|j| format!("j={j}")).collect();
    let columns = g.cells.iter().map(|c| c.i + 1).max().unwrap_or(1);
    t += &grid(&labels, columns, |j, i| {
        let c = g.cells.iter().find(|c| c.i == i && c.j == j).expect("cell");
        match c.predicted {
            _ if c.note.is_some() => format!("{}?", c.computed),
            Some(p) if p != c.computed => format!("{}≠{}", c.computed, p),
            _ => show(c.computed),
        }
    });
    let _ = writeln!(t, "support (# nonzero, ! mismatch):");
    t += &support(g);
    match &g.prediction {
        Some(_) if g.mismatches == 0 => {
            let _ = writeln!(t, "prediction: all {} cells agree", g.cells.len());
        }
        Some(_) => {
            let _ = writeln!(t, "prediction: {} failed cells (shown computed≠predicted, or ? for an invalid complex)", g.mismatches);
            for c in g.cells.iter().filter(|c| !c.ok) {
                let note = c.note.as_ref().map_or(String::new(), |n| format!(" ({n})"));
                let _ = writeln!(t, "  (i={}, j={}): computed {}, predicted {}{note}", c.i, c.j, c.computed, c.predicted.unwrap_or(0));
            }
        }
        None => {
            let _ = writeln!(t, "prediction: none available");
        }
    }
    t
}

pub fn report(r: &VerificationReport) -> String {
    let s = &r.summary;
    let mut t = String::new();
    let _ = writeln!(
        t,
        "arrangement: dim V = {}, {} hyperplanes, {} elements, rank {}, {}, dim U = {}",
        s.ambient_dim,
        s.hyperplanes,
        s.elements,
        s.rank,
        if s.essential { "essential" } else { "not essential" },
        s.center_dim
    );
    let _ = writeln!(t, "χ_L(t) = {}", s.char_poly);
    let _ = writeln!(t, "χ_(L,F⊥)(t) = {}", s.char_poly_perp);
    if let Some(g) = &r.cellular {
        t.push('\n');
        t += &grid_report("cellular homology HC_i(L̃; Λ^j F)", g);
    }
    if let Some(g) = &r.sheaf {
        t.push('\n');
        t += &grid_report("sheaf homology HS_i(L∖0; Λ^j F)", g);
    }
    let failed: Vec<_> = r.failed_checks().collect();
    let _ = writeln!(t, "\nchecks: {} passed, {} failed", r.checks.len() - failed.len(), failed.len());
    for c in failed {
        let j = c.j.map_or(String::new(), |j| format!(" j={j}"));
        let _ = writeln!(t, "  FAIL {}{j}: {}", c.name, c.detail);
    }
    if !r.skips.is_empty() {
        let _ = writeln!(t, "skipped:");
        for s in &r.skips {
            let _ = writeln!(t, "  {s}");
        }
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(t, "elapsed: {ms} ms");
    }
    let _ = writeln!(t, "result: {}", if r.passed { "PASS" } else { "FAIL" });
    t
}
