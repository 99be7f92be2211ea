mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use arrhom::arrangement::{Arrangement, ArrangementLattice};
use arrhom::homology::{cellular_complex, order_complex, BettiTable, ChainComplex, OrderComplexOptions, SignAssignment, DEFAULT_MAX_CHAINS};
use arrhom::sheaf::Sheaf;
use arrhom::theorems::{self, Mode, VerifyOptions};
use arrhom::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arrhom", version, about = "Sheaf and cellular homology of hyperplane arrangement lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection lattice: ranks, atoms, Hasse diagram, flags.
    Lattice(Common),
    /// Characteristic polynomials and their derivatives at 1.
    Charpoly(Common),
    /// Bigraded Betti tables of a sheaf on the lattice.
    Homology(Common),
    /// Compare closed-form predictions with direct computation.
    Verify(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Arrangement file (JSON).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    input: Option<PathBuf>,
    /// Built-in arrangement: boolean-N, braid-N, braid-N-ess, generic-N-D, pi3, pi3-qD.
    #[arg(long)]
    preset: Option<String>,
    /// natural | constant:D | exterior:J | exterior:all
    #[arg(long, default_value = "exterior:all")]
    sheaf: SheafSelector,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Include the minimum in the cellular complex (`--with-minimum=false` drops it).
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    with_minimum: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest number of chains any order complex may use.
    #[arg(long, default_value_t = DEFAULT_MAX_CHAINS, value_parser = positive)]
    max_chains: u128,
    /// Write the chain complexes as JSON.
    #[arg(long)]
    dump_complex: Option<PathBuf>,
    /// Write the sheaves as JSON.
    #[arg(long)]
    dump_sheaf: Option<PathBuf>,
    /// Include wall-clock timings in verify output.
    #[arg(long)]
    timings: bool,
    /// Test hook: negate the sign of the cover `Y,X` (bitmasks of the Boolean cover).
    #[arg(long, hide = true, value_parser = parse_pair)]
    corrupt_sign: Option<(usize, usize)>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Sheaf,
    Cellular,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sheaf => Mode::Sheaf,
            ModeArg::Cellular => Mode::Cellular,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SheafSelector {
    Natural,
    Constant(usize),
    Exterior(usize),
    ExteriorAll,
}

impl std::str::FromStr for SheafSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |v: &str| v.parse::<usize>().map_err(|_| format!("expected a count in {s:?}"));
        match s.split_once(':') {
            None if s == "natural" => Ok(SheafSelector::Natural),
            Some(("constant", d)) => Ok(SheafSelector::Constant(num(d)?)),
            Some(("exterior", "all")) => Ok(SheafSelector::ExteriorAll),
            Some(("exterior", j)) => Ok(SheafSelector::Exterior(num(j)?)),
            _ => Err(format!("unknown sheaf {s:?}; use natural, constant:D, exterior:J or exterior:all")),
        }
    }
}

fn positive(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected Y,X")?;
    Ok((a.trim().parse().map_err(|_| "bad Y")?, b.trim().parse().map_err(|_| "bad X")?))
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Guard { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, message: format!("{}: {e}", path.display()) }
}

fn load(c: &Common) -> Result<Arrangement, Failure> {
    match (&c.input, &c.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            Arrangement::from_json(&text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
        }
        (None, Some(p)) => Ok(Arrangement::preset(p)?),
        (None, None) => Err(Failure { code: 2, message: "one of --input or --preset is required".into() }),
    }
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("json");
    std::fs::write(path, text + "\n").map_err(|e| io_failure(path, e))
}

fn emit(format: Format, table: String, v: Value) {
    match format {
        Format::Table => print!("{table}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("json")),
    }
}

fn cmd_lattice(c: &Common) -> Result<u8, Failure> {
    let arr = load(c)?;
    let l = arr.build_lattice()?;
    let p = l.poset();
    let ranks: Vec<usize> = (0..=l.rank()).map(|r| p.elements_of_rank(r).len()).collect();
    let atoms: Vec<Value> = l
        .lattice()
        .atoms()
        .iter()
        .map(|&a| {
            let h = l.hyperplane_of_atom(a).expect("atom");
            json!({"element": a, "hyperplane": h, "normal": arr.normals()[h].iter().map(arrhom::exactlin::format_rational).collect::<Vec<_>>()})
        })
        .collect();
    let edges = p.cover_pairs();
    let elements: Vec<Value> = (0..l.len())
        .map(|x| json!({"id": x, "rank": p.rank(x), "dim": l.label(x).dim(), "hyperplanes": l.hyperplanes_containing(x)}))
        .collect();
    let v = json!({
        "ambient_dim": l.ambient_dim(),
        "elements": l.len(),
        "rank": l.rank(),
        "elements_per_rank": ranks,
        "atoms": atoms,
        "hasse_edges": edges,
        "element_details": elements,
        "geometric": l.lattice().is_geometric(),
        "essential": l.is_essential(),
        "center_dim": l.center().dim(),
    });
    emit(c.format, render::lattice(&l, &ranks, &edges), v);
    Ok(0)
}

fn cmd_charpoly(c: &Common) -> Result<u8, Failure> {
    let l = load(c)?.build_lattice()?;
    let chi = l.char_poly();
    let perp = l.char_poly_perp();
    let derivs = |p: &arrhom::charpoly::CharPoly| -> Vec<String> {
        (0..=p.degree().unwrap_or(0)).map(|k| arrhom::exactlin::format_rational(&p.derivative_at_one(k))).collect()
    };
    let v = json!({
        "char_poly": chi.to_string(),
        "char_poly_coefficients": chi,
        "char_poly_perp": perp.to_string(),
        "char_poly_perp_coefficients": perp,
        "center_dim": l.center().dim(),
        "derivatives_at_one": derivs(&chi),
        "perp_derivatives_at_one": derivs(&perp),
    });
    let mut t = String::new();
    t += &format!("χ_L(t)        = {chi}\n");
    t += &format!("χ_(L,F⊥)(t)   = {perp}\n");
    t += &format!("dim U         = {}\n", l.center().dim());
    t += &format!("χ_L^(k)(1)      k=0..: {}\n", derivs(&chi).join(", "));
    t += &format!("χ_(L,F⊥)^(k)(1) k=0..: {}\n", derivs(&perp).join(", "));
    emit(c.format, t, v);
    Ok(0)
}

/// The sheaves selected on the command line, with their labels and weights.
fn selected_sheaves(c: &Common, l: &ArrangementLattice) -> Result<Vec<(String, Option<usize>, Arc<Sheaf>)>, Failure> {
    let natural = Arc::new(Sheaf::natural(l)?);
    let ext = |j: usize| (format!("Λ^{j} F"), Some(j), Arc::new(natural.exterior_power(j)));
    Ok(match c.sheaf {
        SheafSelector::Natural => vec![("F".into(), Some(1), natural.clone())],
        SheafSelector::Constant(d) => vec![(format!("Δ Q^{d}"), None, Arc::new(Sheaf::constant(l.poset().clone(), d)))],
        SheafSelector::Exterior(j) => vec![ext(j)],
        SheafSelector::ExteriorAll => (0..=l.ambient_dim()).map(ext).collect(),
    })
}

struct Computed {
    label: String,
    weight: Option<usize>,
    sheaf: Option<BettiTable>,
    cellular: Option<BettiTable>,
}

fn cmd_homology(c: &Common) -> Result<u8, Failure> {
    let l = load(c)?.build_lattice()?;
    let sheaves = selected_sheaves(c, &l)?;
    let n = l.lattice().atoms().len();
    let signs = match c.corrupt_sign {
        Some(pair) => SignAssignment::corrupted(n, pair),
        None => SignAssignment::standard(n),
    };
    let mode: Mode = c.mode.into();
    let (minus, emb) = l.poset().remove_minimum()?;
    let minus = Arc::new(minus);
    let mut rows = Vec::new();
    let mut complexes = Vec::new();
    let mut sheaf_dumps = Vec::new();
    for (label, weight, f) in &sheaves {
        let mut row = Computed { label: label.clone(), weight: *weight, sheaf: None, cellular: None };
        if c.dump_sheaf.is_some() {
            sheaf_dumps.push(json!({"sheaf": label, "on": "L", "data": f.to_json()}));
        }
        if mode.sheaf() {
            let g = f.restrict(minus.clone(), &emb)?;
            let cx = order_complex(&g, OrderComplexOptions { max_chains: c.max_chains, ..Default::default() })?;
            row.sheaf = Some(cx.betti());
            push_complex(&mut complexes, c, label, "order complex of L∖0", &cx);
        }
        if mode.cellular() {
            let (fc, _) = f.induced_on_cover(l.lattice())?;
            let cx = cellular_complex(&fc, c.with_minimum, &signs)?;
            if !cx.is_valid() {
                eprintln!("warning: cellular boundary for {label} does not square to zero");
            }
            row.cellular = Some(cx.betti());
            push_complex(&mut complexes, c, label, "cellular complex of the Boolean cover", &cx);
            if c.dump_sheaf.is_some() {
                sheaf_dumps.push(json!({"sheaf": label, "on": "Boolean cover", "data": fc.to_json()}));
            }
        }
        rows.push(row);
    }
    if let Some(path) = &c.dump_complex {
        write_json(path, &Value::Array(complexes))?;
    }
    if let Some(path) = &c.dump_sheaf {
        write_json(path, &Value::Array(sheaf_dumps))?;
    }
    let graded = |pick: fn(&Computed) -> Option<&BettiTable>| -> Option<arrhom::charpoly::CharPoly> {
        if !rows.iter().all(|r| r.weight.is_some()) || rows.len() < 2 {
            return None;
        }
        let mut p = arrhom::charpoly::CharPoly::zero();
        for r in &rows {
            p.add_term(r.weight?, &arrhom::exactlin::q(pick(r)?.euler));
        }
        Some(p)
    };
    let graded_sheaf = graded(|r| r.sheaf.as_ref());
    let graded_cell = graded(|r| r.cellular.as_ref());
    let v = json!({
        "summary": theorems::Summary::of(&l),
        "with_minimum": c.with_minimum,
        "rows": rows.iter().map(|r| json!({"sheaf": r.label, "j": r.weight, "sheaf_homology": r.sheaf, "cellular_homology": r.cellular})).collect::<Vec<_>>(),
        "graded_euler": {
            "sheaf": graded_sheaf.as_ref().map(|p| p.render("q")),
            "cellular": graded_cell.as_ref().map(|p| p.render("q")),
        },
    });
    let mut t = String::new();
    let labels: Vec<String> = rows.iter().map(|r| r.weight.map_or(r.label.clone(), |j| format!("j={j}"))).collect();
    if mode.sheaf() {
        let tables: Vec<BettiTable> = rows.iter().map(|r| r.sheaf.clone().unwrap_or_default()).collect();
        t += "sheaf homology HS_i(L∖0; G)\n";
        t += &render::betti_grid(&labels, &tables, None);
        if let Some(p) = &graded_sheaf {
            t += &format!("graded Euler: {}\n", p.render("q"));
        }
    }
    if mode.cellular() {
        if mode.sheaf() {
            t += "\n";
        }
        let which = if c.with_minimum { "HC_i(L̃; G)" } else { "HC_i(L̃∖0; G)" };
        let tables: Vec<BettiTable> = rows.iter().map(|r| r.cellular.clone().unwrap_or_default()).collect();
        t += &format!("cellular homology {which}\n");
        t += &render::betti_grid(&labels, &tables, None);
        if let Some(p) = &graded_cell {
            t += &format!("graded Euler: {}\n", p.render("q"));
        }
    }
    emit(c.format, t, v);
    Ok(0)
}

fn push_complex(out: &mut Vec<Value>, c: &Common, label: &str, kind: &str, cx: &ChainComplex) {
    if c.dump_complex.is_some() {
        out.push(json!({"sheaf": label, "complex": kind, "data": cx.to_json()}));
    }
}

fn cmd_verify(c: &Common) -> Result<u8, Failure> {
    let arr = load(c)?;
    let max_j = match c.sheaf {
        SheafSelector::ExteriorAll => None,
        SheafSelector::Exterior(j) => Some(j),
        SheafSelector::Natural => Some(1),
        SheafSelector::Constant(_) => {
            return Err(Failure { code: 2, message: "verify works with exterior powers of the natural sheaf".into() })
        }
    };
    let opts = VerifyOptions {
        mode: c.mode.into(),
        max_j,
        max_chains: c.max_chains,
        sign_fault: c.corrupt_sign,
        deletion_restriction: true,
    };
    let mut report = theorems::verify(&arr, &opts)?;
    if !c.timings {
        report.elapsed_ms = None;
    }
    if c.dump_complex.is_some() || c.dump_sheaf.is_some() {
        let l = arr.build_lattice()?;
        let sheaves = selected_sheaves(c, &l)?;
        if let Some(path) = &c.dump_sheaf {
            let v: Vec<Value> = sheaves.iter().map(|(label, _, f)| json!({"sheaf": label, "on": "L", "data": f.to_json()})).collect();
            write_json(path, &Value::Array(v))?;
        }
        if let Some(path) = &c.dump_complex {
            let n = l.lattice().atoms().len();
            let signs = c.corrupt_sign.map_or_else(|| SignAssignment::standard(n), |p| SignAssignment::corrupted(n, p));
            let mut v = Vec::new();
            for (label, _, f) in &sheaves {
                let (fc, _) = f.induced_on_cover(l.lattice())?;
                let cx = cellular_complex(&fc, true, &signs)?;
                push_complex(&mut v, c, label, "cellular complex of the Boolean cover", &cx);
            }
            write_json(path, &Value::Array(v))?;
        }
    }
    let code = if report.passed { 0 } else { 1 };
    emit(c.format, render::report(&report), serde_json::to_value(&report).expect("json"));
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lattice(c) => cmd_lattice(c),
        Command::Charpoly(c) => cmd_charpoly(c),
        Command::Homology(c) => cmd_homology(c),
        Command::Verify(c) => cmd_verify(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
