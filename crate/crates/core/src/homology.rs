//! Chain complexes of sheaves and their rational homology.
//!
//! Two constructions are provided: the order complex of a poset with
//! coefficients in a sheaf (chains `x_n < ... < x_0`, generators in the
//! stalk of the top element `x_0`), and the cellular complex of a sheaf on a
//! Boolean lattice (`C_k = ⊕_{|x|=k} F(x)` with signed structure maps).

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrangement::ArrangementLattice;
use crate::error::{Error, Result};
use crate::exactlin::{q, Matrix, Rational, SparseMatrix, SparseVec, Subspace};
use crate::poset::Poset;
use crate::sheaf::{decomposition_quotient, Sheaf, SheafMorphism};

/// Default cap on the number of chains in one order complex.
pub const DEFAULT_MAX_CHAINS: u128 = 10_000_000;

/// Basis element of a chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    /// A chain listed bottom-up together with a basis vector of the stalk
    /// at its top element.
    Chain { chain: Vec<usize>, vector: usize },
    /// A Boolean element (bitmask) together with a stalk basis vector.
    Cell { element: usize, vector: usize },
}

/// A bounded chain complex `C_top -> ... -> C_0` of rational vector spaces.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[k] = d_k : C_k -> C_{k-1}`; `boundaries[0]` is the zero
    /// map to the zero space.
    boundaries: Vec<SparseMatrix>,
    generators: Vec<Vec<Generator>>,
}

impl ChainComplex {
    /// Builds a complex and checks shapes and `d ∘ d = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>, generators: Vec<Vec<Generator>>) -> Result<Self> {
        let c = Self::new_unchecked(dims, boundaries, generators)?;
        for k in 1..c.boundaries.len() {
            if !c.boundaries[k - 1].mul(&c.boundaries[k]).is_zero() {
                return Err(Error::InvalidComplex(format!("d_{} ∘ d_{} is not zero", k - 1, k)));
            }
        }
        Ok(c)
    }

    /// Checks shapes only. Used to report homology of deliberately broken
    /// differentials.
    pub fn new_unchecked(
        dims: Vec<usize>,
        mut boundaries: Vec<SparseMatrix>,
        generators: Vec<Vec<Generator>>,
    ) -> Result<Self> {
        if !dims.is_empty() && boundaries.len() == dims.len() - 1 {
            boundaries.insert(0, SparseMatrix::zeros(0, dims[0]));
        }
        if boundaries.len() != dims.len() {
            return Err(Error::InvalidComplex("one boundary map per degree is required".into()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let rows = if k == 0 { 0 } else { dims[k - 1] };
            if (d.nrows(), d.ncols()) != (rows, dims[k]) {
                return Err(Error::InvalidComplex(format!(
                    "d_{k} has shape {:?}, expected {:?}",
                    (d.nrows(), d.ncols()),
                    (rows, dims[k])
                )));
            }
        }
        if !generators.is_empty() && generators.iter().map(Vec::len).ne(dims.iter().copied()) {
            return Err(Error::InvalidComplex("generator lists disagree with dimensions".into()));
        }
        Ok(ChainComplex { dims, boundaries, generators })
    }

    pub fn zero() -> Self {
        ChainComplex { dims: Vec::new(), boundaries: Vec::new(), generators: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `d_k`, or `None` outside the complex.
    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(k)
    }

    pub fn generators(&self, k: usize) -> &[Generator] {
        self.generators.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    /// `d ∘ d = 0` in every degree.
    pub fn is_valid(&self) -> bool {
        (1..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    /// Rank of every boundary map.
    pub fn ranks(&self) -> Vec<usize> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.boundaries.par_iter().map(SparseMatrix::rank).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.boundaries.iter().map(SparseMatrix::rank).collect()
        }
    }

    /// Betti numbers over Q: `b_k = dim C_k - rank d_k - rank d_{k+1}`.
    pub fn betti(&self) -> BettiTable {
        let ranks = self.ranks();
        let betti = (0..self.dims.len())
            .map(|k| {
                let out = ranks[k];
                let inc = ranks.get(k + 1).copied().unwrap_or(0);
                self.dims[k].saturating_sub(out + inc)
            })
            .collect();
        BettiTable::new(betti)
    }

    /// `Σ (-1)^k dim C_k`.
    pub fn euler(&self) -> i64 {
        alternating(&self.dims)
    }

    /// JSON dump: dimensions and boundary matrices as sparse triplets.
    pub fn to_json(&self) -> serde_json::Value {
        let bounds: Vec<serde_json::Value> = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let entries: Vec<(usize, usize, String)> =
                    d.triplets().map(|(r, c, v)| (r, c, crate::exactlin::format_rational(v))).collect();
                serde_json::json!({ "degree": k, "rows": d.nrows(), "cols": d.ncols(), "entries": entries })
            })
            .collect();
        serde_json::json!({ "dims": self.dims, "boundaries": bounds })
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

/// Betti numbers by degree plus the Euler characteristic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub betti: Vec<usize>,
    pub euler: i64,
}

impl BettiTable {
    pub fn new(mut betti: Vec<usize>) -> Self {
        while betti.last() == Some(&0) {
            betti.pop();
        }
        let euler = alternating(&betti);
        BettiTable { betti, euler }
    }

    pub fn get(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.is_empty()
    }

    pub fn add(&self, other: &BettiTable) -> BettiTable {
        let n = self.betti.len().max(other.betti.len());
        BettiTable::new((0..n).map(|k| self.get(k) + other.get(k)).collect())
    }
}

/// Options for [`order_complex`].
#[derive(Clone, Copy, Debug)]
pub struct OrderComplexOptions {
    /// Use all chains `x_n <= ... <= x_0` (the complex `S_*`) instead of the
    /// strict ones. The degenerate complex is infinite and is truncated at
    /// `max_degree`, so only degrees below it are meaningful.
    pub degenerate: bool,
    pub max_degree: Option<usize>,
    pub max_chains: u128,
}

impl Default for OrderComplexOptions {
    fn default() -> Self {
        OrderComplexOptions { degenerate: false, max_degree: None, max_chains: DEFAULT_MAX_CHAINS }
    }
}

/// The chain complex computing `HS_*(P; F)`.
///
/// Degree `n` is spanned by pairs (chain `x_n < ... < x_0`, basis vector of
/// `F(x_0)`), and `d s_σ = F^{x_0}_{x_1}(s)_{d_0 σ} + Σ_{i>=1} (-1)^i s_{d_i σ}`.
pub fn order_complex(f: &Sheaf, opts: OrderComplexOptions) -> Result<ChainComplex> {
    let p = f.base().clone();
    if p.is_empty() {
        return Ok(ChainComplex::zero());
    }
    let top = match (opts.degenerate, opts.max_degree) {
        (false, m) => {
            let h = p.height().unwrap_or(0);
            m.map_or(h, |m| m.min(h))
        }
        (true, Some(m)) => m,
        (true, None) => return Err(Error::InvalidComplex("the degenerate complex needs a maximum degree".into())),
    };
    if !opts.degenerate {
        let count = (0..=top).map(|n| p.count_chains(n)).fold(0u128, u128::saturating_add);
        if count > opts.max_chains {
            return Err(Error::Guard { what: "chains", count, limit: opts.max_chains });
        }
    }
    let mut total: u128 = 0;
    let mut chains_by_degree = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let remaining = opts.max_chains.saturating_sub(total);
        let chains = if opts.degenerate { weak_chains(&p, n, remaining) } else { p.strict_chains(n, remaining) };
        let chains = chains.map_err(|e| match e {
            Error::Guard { what, count, .. } => Error::Guard { what, count: total + count, limit: opts.max_chains },
            e => e,
        })?;
        total += chains.len() as u128;
        chains_by_degree.push(chains);
    }
    let mut dims = Vec::with_capacity(top + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    let mut generators = Vec::with_capacity(top + 1);
    for chains in &chains_by_degree {
        let mut off = Vec::with_capacity(chains.len());
        let mut acc = 0;
        let mut gens = Vec::new();
        for c in chains {
            off.push(acc);
            let d = f.dim(*c.last().unwrap());
            gens.extend((0..d).map(|v| Generator::Chain { chain: c.clone(), vector: v }));
            acc += d;
        }
        dims.push(acc);
        offsets.push(off);
        generators.push(gens);
    }
    let mut boundaries = vec![SparseMatrix::zeros(0, dims[0])];
    for n in 1..=top {
        let index: HashMap<&[usize], usize> =
            chains_by_degree[n - 1].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[n]);
        for chain in &chains_by_degree[n] {
            let x0 = chain[n];
            let x1 = chain[n - 1];
            let face0 = index[&chain[..n]];
            let m = f.map(x1, x0);
            let mut others = Vec::with_capacity(n);
            for i in 1..=n {
                // x_i sits at position n - i of the bottom-up list
                let mut face = chain.clone();
                face.remove(n - i);
                let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                others.push((offsets[n - 1][index[face.as_slice()]], sign));
            }
            for v in 0..f.dim(x0) {
                let mut col: SparseVec = (0..m.rows())
                    .filter(|&r| !num_traits::Zero::is_zero(m.get(r, v)))
                    .map(|r| (offsets[n - 1][face0] + r, m.get(r, v).clone()))
                    .collect();
                col.extend(others.iter().map(|(off, s)| (off + v, s.clone())));
                cols.push(col);
            }
        }
        boundaries.push(SparseMatrix::from_columns(dims[n - 1], cols));
    }
    ChainComplex::new(dims, boundaries, generators)
}

/// Weakly increasing chains with `n + 1` entries, bottom-up, lex order.
fn weak_chains(p: &Poset, n: usize, limit: u128) -> Result<Vec<Vec<usize>>> {
    let len = p.len();
    let mut counts = vec![1u128; len];
    for _ in 0..n {
        counts = (0..len).map(|x| (0..len).filter(|&y| p.leq(x, y)).map(|y| counts[y]).sum()).collect();
    }
    let count: u128 = counts.iter().sum();
    if count > limit {
        return Err(Error::Guard { what: "chains", count, limit });
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(p: &Poset, n: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n + 1 {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().unwrap();
        for y in 0..p.len() {
            if p.leq(last, y) {
                stack.push(y);
                rec(p, n, stack, out);
                stack.pop();
            }
        }
    }
    for x in 0..len {
        stack.push(x);
        rec(p, n, &mut stack, &mut out);
        stack.pop();
    }
    Ok(out)
}

/// Signs `ε^x_y` for the covers `y ⋖ x` of a Boolean lattice.
///
/// The sign is `(-1)^m` where `m` counts the atoms of `x` that precede the
/// removed atom in a chosen total order on the atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    /// `position[i]` is the place of atom `i` in the order.
    position: Vec<usize>,
    /// Deliberate fault for testing: the sign of this cover `(y, x)` is
    /// negated.
    corrupted: Option<(usize, usize)>,
}

impl SignAssignment {
    pub fn standard(atoms: usize) -> Self {
        SignAssignment { position: (0..atoms).collect(), corrupted: None }
    }

    /// Signs from the atom order `order` (a permutation listing atoms).
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut position = vec![usize::MAX; order.len()];
        for (k, &a) in order.iter().enumerate() {
            if a >= order.len() || position[a] != usize::MAX {
                return Err(Error::Input("atom order is not a permutation".into()));
            }
            position[a] = k;
        }
        Ok(SignAssignment { position, corrupted: None })
    }

    /// The standard signs with one cover negated.
    pub fn corrupted(atoms: usize, cover: (usize, usize)) -> Self {
        SignAssignment { position: (0..atoms).collect(), corrupted: Some(cover) }
    }

    pub fn atoms(&self) -> usize {
        self.position.len()
    }

    pub fn sign(&self, y: usize, x: usize) -> i64 {
        let removed = (x ^ y).trailing_zeros() as usize;
        let before = (0..self.position.len())
            .filter(|&i| x & (1 << i) != 0 && self.position[i] < self.position[removed])
            .count();
        let s = if before % 2 == 0 { 1 } else { -1 };
        if self.corrupted == Some((y, x)) {
            -s
        } else {
            s
        }
    }

    /// `ε^{y1}_z ε^x_{y1} + ε^{y2}_z ε^x_{y2} = 0` on every diamond.
    pub fn satisfies_diamonds(&self) -> bool {
        let n = self.position.len();
        (0..1usize << n).all(|x| {
            (0..n).filter(|&i| x & (1 << i) != 0).all(|i| {
                (i + 1..n).filter(|&k| x & (1 << k) != 0).all(|k| {
                    let (y1, y2) = (x & !(1 << i), x & !(1 << k));
                    let z = y1 & y2;
                    self.sign(z, y1) * self.sign(y1, x) + self.sign(z, y2) * self.sign(y2, x) == 0
                })
            })
        })
    }
}

/// The cellular complex `C_*(B; F)` of a sheaf on a Boolean lattice. With
/// `include_minimum = false` it is `C_*(B ∖ 0; F)`, whose degree `k` is
/// spanned by the subsets of size `k + 1`.
pub fn cellular_complex(f: &Sheaf, include_minimum: bool, signs: &SignAssignment) -> Result<ChainComplex> {
    let shift = usize::from(!include_minimum);
    cellular_on(f, |x| include_minimum || x != 0, shift, signs)
}

/// Cellular complex on the elements selected by `keep`, in degree
/// `|x| - shift`. `keep` must select an upward-closed set or a downward
/// closed one for the result to be a complex.
fn cellular_on(f: &Sheaf, keep: impl Fn(usize) -> bool, shift: usize, signs: &SignAssignment) -> Result<ChainComplex> {
    let n = f.base().boolean_atoms().ok_or_else(|| Error::InvalidComplex("cellular complex needs a Boolean base".into()))?;
    if signs.atoms() != n {
        return Err(Error::InvalidComplex("sign assignment has the wrong number of atoms".into()));
    }
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for x in 0..1usize << n {
        if keep(x) && x.count_ones() as usize >= shift {
            by_degree[x.count_ones() as usize - shift].push(x);
        }
    }
    while by_degree.last().is_some_and(Vec::is_empty) {
        by_degree.pop();
    }
    let mut dims = Vec::new();
    let mut offset: HashMap<usize, usize> = HashMap::new();
    let mut generators = Vec::new();
    for elems in &by_degree {
        let mut acc = 0;
        let mut gens = Vec::new();
        for &x in elems {
            offset.insert(x, acc);
            gens.extend((0..f.dim(x)).map(|v| Generator::Cell { element: x, vector: v }));
            acc += f.dim(x);
        }
        dims.push(acc);
        generators.push(gens);
    }
    if dims.is_empty() {
        return Ok(ChainComplex::zero());
    }
    let mut boundaries = vec![SparseMatrix::zeros(0, dims[0])];
    for k in 1..by_degree.len() {
        let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[k]);
        for &x in &by_degree[k] {
            let faces: Vec<(usize, Rational, Arc<Matrix>)> = (0..n)
                .filter(|&i| x & (1 << i) != 0)
                .map(|i| x & !(1 << i))
                .filter(|&y| keep(y))
                .map(|y| (offset[&y], q(signs.sign(y, x)), f.map(y, x)))
                .collect();
            for v in 0..f.dim(x) {
                let mut col = SparseVec::new();
                for (off, s, m) in &faces {
                    for r in 0..m.rows() {
                        let e = m.get(r, v);
                        if !num_traits::Zero::is_zero(e) {
                            col.push((off + r, s * e));
                        }
                    }
                }
                cols.push(col);
            }
        }
        boundaries.push(SparseMatrix::from_columns(dims[k - 1], cols));
    }
    if signs.corrupted.is_some() {
        ChainComplex::new_unchecked(dims, boundaries, generators)
    } else {
        ChainComplex::new(dims, boundaries, generators)
    }
}

/// A chain map between two complexes, one matrix per degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    /// `maps[k] : source_k -> target_{k + shift}`.
    pub maps: Vec<SparseMatrix>,
    pub shift: isize,
}

impl ChainMap {
    /// `d ∘ φ = φ ∘ d` in every degree where both sides are defined.
    pub fn commutes(&self, source: &ChainComplex, target: &ChainComplex) -> bool {
        for k in 1..self.maps.len() {
            let tk = k as isize + self.shift;
            let (Some(d_t), Some(phi_low)) = (
                usize::try_from(tk).ok().and_then(|t| target.boundary(t)),
                self.maps.get(k - 1),
            ) else {
                continue;
            };
            let lhs = d_t.mul(&self.maps[k]);
            let rhs = phi_low.mul(source.boundary(k).unwrap());
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

/// The chain map `κ_* : C_*(B; F) -> C_*(B; G)` of a sheaf morphism on a
/// Boolean lattice, validated against both differentials.
pub fn morphism_chain_map(kappa: &SheafMorphism, include_minimum: bool) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
    let n = kappa.source().base().boolean_atoms().ok_or_else(|| Error::InvalidComplex("Boolean base required".into()))?;
    let signs = SignAssignment::standard(n);
    let src = cellular_complex(kappa.source(), include_minimum, &signs)?;
    let tgt = cellular_complex(kappa.target(), include_minimum, &signs)?;
    let maps = (0..src.dims().len())
        .map(|k| block_map(src.generators(k), tgt.generators(k), tgt.dim(k), |x| kappa.component(x).clone()))
        .collect();
    let phi = ChainMap { maps, shift: 0 };
    if !phi.commutes(&src, &tgt) {
        return Err(Error::InvalidComplex("induced map does not commute with the differentials".into()));
    }
    Ok((src, tgt, phi))
}

/// Block-diagonal map between cellular generator lists, element by element.
fn block_map(
    src: &[Generator],
    tgt: &[Generator],
    tgt_dim: usize,
    component: impl Fn(usize) -> Matrix,
) -> SparseMatrix {
    let mut start: HashMap<usize, usize> = HashMap::new();
    for (i, g) in tgt.iter().enumerate() {
        if let Generator::Cell { element, vector: 0 } = g {
            start.insert(*element, i);
        }
    }
    let mut cache: HashMap<usize, Matrix> = HashMap::new();
    let cols = src
        .iter()
        .map(|g| {
            let Generator::Cell { element, vector } = g else { unreachable!("cellular generator") };
            let m = cache.entry(*element).or_insert_with(|| component(*element));
            let off = start.get(element).copied().unwrap_or(0);
            (0..m.rows())
                .filter(|&r| !num_traits::Zero::is_zero(m.get(r, *vector)))
                .map(|r| (off + r, m.get(r, *vector).clone()))
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(tgt_dim, cols)
}

/// The sequence `0 -> C_*(B(x)) -> C_*(B) -> C_{*-1}(B ∖ B(x)) -> 0`.
pub struct SubBooleanSes {
    pub sub: ChainComplex,
    pub total: ChainComplex,
    /// Degree `k` is spanned by the elements `y ⊄ x` with `|y| = k + 1`.
    pub quotient: ChainComplex,
    pub inclusion: ChainMap,
    /// `total_k -> quotient_{k-1}`.
    pub projection: ChainMap,
}

/// Builds the sub-Boolean sequence for the element `x` of the Boolean base
/// of `f` and validates chain maps and degreewise exactness.
pub fn sub_boolean_ses(f: &Arc<Sheaf>, x: usize) -> Result<SubBooleanSes> {
    let n = f.base().boolean_atoms().ok_or_else(|| Error::InvalidComplex("Boolean base required".into()))?;
    let signs = SignAssignment::standard(n);
    let sub = cellular_on(f, |y| y & !x == 0, 0, &signs)?;
    let total = cellular_on(f, |_| true, 0, &signs)?;
    let quotient = cellular_on(f, |y| y & !x != 0, 1, &signs)?;
    let coord = |from: &ChainComplex, to: &ChainComplex, k: usize, to_k: Option<usize>| {
        let index: HashMap<&Generator, usize> =
            to_k.map(|t| to.generators(t)).unwrap_or(&[]).iter().enumerate().map(|(i, g)| (g, i)).collect();
        let cols = from
            .generators(k)
            .iter()
            .map(|g| index.get(g).map(|&i| vec![(i, q(1))]).unwrap_or_default())
            .collect();
        SparseMatrix::from_columns(to_k.map_or(0, |t| to.dim(t)), cols)
    };
    let inclusion =
        ChainMap { maps: (0..sub.dims().len()).map(|k| coord(&sub, &total, k, Some(k))).collect(), shift: 0 };
    let projection = ChainMap {
        maps: (0..total.dims().len()).map(|k| coord(&total, &quotient, k, k.checked_sub(1))).collect(),
        shift: -1,
    };
    if !inclusion.commutes(&sub, &total) || !projection.commutes(&total, &quotient) {
        return Err(Error::InvalidComplex("sub-Boolean sequence maps are not chain maps".into()));
    }
    for k in 0..total.dims().len() {
        let a = inclusion.maps.get(k).map_or(0, SparseMatrix::rank);
        let c = projection.maps[k].rank();
        let qk = k.checked_sub(1).map_or(0, |t| quotient.dim(t));
        if a != sub.dim(k) || c != qk || sub.dim(k) + qk != total.dim(k) {
            return Err(Error::InvalidComplex(format!("sequence is not exact in degree {k}")));
        }
        if k < sub.dims().len() && !projection.maps[k].mul(&inclusion.maps[k]).is_zero() {
            return Err(Error::InvalidComplex(format!("projection ∘ inclusion is not zero in degree {k}")));
        }
    }
    Ok(SubBooleanSes { sub, total, quotient, inclusion, projection })
}

/// One step of the decomposition recursion: `(B_a, F_a / F^a)`.
pub fn decompose_step(f: &Arc<Sheaf>, a: usize) -> Result<(Arc<Poset>, Sheaf)> {
    decomposition_quotient(f, a)
}

/// Both sides of the low-degree comparison between `HC_*(B; F)` and
/// `HC_*(B ∖ 0; F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimumShift {
    pub with_minimum: BettiTable,
    pub without_minimum: BettiTable,
    pub dim_bottom: usize,
    pub holds: bool,
}

/// Checks `b_i(B∖0) = b_{i+1}(B)` for `i > 0` and
/// `b_0(B∖0) = b_1(B) - b_0(B) + dim F(0)`.
pub fn minimum_shift(f: &Sheaf) -> Result<MinimumShift> {
    let n = f.base().boolean_atoms().ok_or_else(|| Error::InvalidComplex("Boolean base required".into()))?;
    let signs = SignAssignment::standard(n);
    let with_minimum = cellular_complex(f, true, &signs)?.betti();
    let without_minimum = cellular_complex(f, false, &signs)?.betti();
    let dim_bottom = f.dim(0);
    let predicted = sheaf_from_cellular(&with_minimum, dim_bottom);
    let holds = predicted.map(|p| p == without_minimum).unwrap_or(false);
    Ok(MinimumShift { with_minimum, without_minimum, dim_bottom, holds })
}

/// Translates cellular Betti numbers of `L̃` (minimum included) to sheaf
/// Betti numbers of `L ∖ 0`: shift down by one, with
/// `HS_0 = HC_1 - HC_0 + dim F(0)`.
pub fn sheaf_from_cellular(cellular: &BettiTable, dim_bottom: usize) -> Option<BettiTable> {
    let h0 = (cellular.get(1) + dim_bottom).checked_sub(cellular.get(0))?;
    let mut v = vec![h0];
    v.extend((2..cellular.betti.len()).map(|k| cellular.get(k)));
    Some(BettiTable::new(v))
}

/// Homology of the three lattices in the deletion-restriction sequence for
/// one atom, plus the sub-Boolean `B^a` of the cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionRestriction {
    pub atom: usize,
    pub full: BettiTable,
    pub deletion: BettiTable,
    pub restriction: BettiTable,
    pub restriction_sub_boolean: BettiTable,
    /// `Σ (-1)^i [b_i(L̃) - b_i(L̃_a) + b_i(L̃^a)] = 0`.
    pub euler_holds: bool,
}

/// Computes `HC_*` of the covers of `L`, `L_a` and `L^a` with the given
/// sheaf (restricted along the lattice embeddings) and of the sub-Boolean
/// `B^a = {S ∋ a}` of the cover of `L`.
pub fn deletion_restriction_triple(
    l: &ArrangementLattice,
    f: &Arc<Sheaf>,
    atom: usize,
) -> Result<DeletionRestriction> {
    if !l.lattice().is_geometric() {
        return Err(Error::NotLattice("deletion-restriction needs a geometric lattice".into()));
    }
    let h = l.hyperplane_of_atom(atom)?;
    let cover_betti = |sub: &ArrangementLattice, emb: &[usize]| -> Result<BettiTable> {
        let g = Arc::new(f.restrict(sub.poset().clone(), emb)?);
        let (gc, _) = g.induced_on_cover(sub.lattice())?;
        Ok(cellular_complex(&gc, true, &SignAssignment::standard(sub.lattice().atoms().len()))?.betti())
    };
    let (del, del_emb) = l.deletion(atom)?;
    let (res, res_emb) = l.restriction(atom)?;
    let full = cover_betti(l, &(0..l.len()).collect::<Vec<_>>())?;
    let deletion = cover_betti(&del, &del_emb)?;
    let restriction = cover_betti(&res, &res_emb)?;
    let (fc, _) = f.induced_on_cover(l.lattice())?;
    let n = l.lattice().atoms().len();
    let base = Arc::new(Poset::boolean(n - 1)?);
    let low = (1usize << h) - 1;
    let up: Vec<usize> = (0..base.len()).map(|x| (x & low) | ((x & !low) << 1) | (1 << h)).collect();
    let ba = Arc::new(fc).pull_back(base, up)?;
    let restriction_sub_boolean = cellular_complex(&ba, true, &SignAssignment::standard(n - 1))?.betti();
    let euler_holds = full.euler - deletion.euler + restriction.euler == 0;
    Ok(DeletionRestriction { atom, full, deletion, restriction, restriction_sub_boolean, euler_holds })
}

/// Dimensions and ranks in the long exact homology sequence of
/// `0 -> A -> B -> C' -> 0`, where `C'_k` is the quotient complex in degree
/// `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesCheck {
    /// `(group, dim, rank of incoming map, rank of outgoing map)`.
    pub groups: Vec<(String, usize, usize, usize)>,
    pub composites_vanish: bool,
    pub exact: bool,
}

/// Cycle and boundary spaces of one degree.
struct Homology {
    cycles: Subspace,
    boundaries: Subspace,
}

impl Homology {
    fn of(c: &ChainComplex, k: Option<usize>) -> Homology {
        let Some(k) = k.filter(|&k| k < c.dims().len()) else {
            return Homology { cycles: Subspace::zero(0), boundaries: Subspace::zero(0) };
        };
        let cycles = crate::exactlin::kernel_basis(&c.boundary(k).unwrap().to_dense());
        let boundaries = match c.boundary(k + 1) {
            Some(up) => up.to_dense().column_space(),
            None => Subspace::zero(c.dim(k)),
        };
        Homology { cycles, boundaries }
    }

    fn dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }
}

fn images(m: &Matrix, s: &Subspace) -> Vec<Vec<Rational>> {
    (0..s.dim()).map(|r| m.apply(s.basis().row(r))).collect()
}

/// Rank of the map induced by `m` from `from` to `to` on homology.
fn induced_rank(m: &Matrix, from: &Homology, to: &Homology) -> usize {
    let span = Subspace::span(to.boundaries.ambient_dim(), &images(m, &from.cycles));
    span.sum(&to.boundaries).expect("same ambient").dim() - to.boundaries.dim()
}

/// `m` sends the cycles of `from` into the boundaries of `to`.
fn kills_homology(m: &Matrix, from: &Homology, to: &Homology) -> bool {
    images(m, &from.cycles).iter().all(|v| to.boundaries.contains_vector(v))
}

/// Builds the maps of the long exact sequence of a sub-Boolean sequence,
/// including the connecting homomorphisms, and checks exactness degree by
/// degree. Dense, so only meant for small fixtures.
pub fn les_exactness(ses: &SubBooleanSes) -> LesCheck {
    let degrees = ses.total.dims().len();
    let qdim = |k: usize| k.checked_sub(1).map_or(0, |t| ses.quotient.dim(t));
    let iota = |k: usize| {
        ses.inclusion.maps.get(k).map(SparseMatrix::to_dense).unwrap_or_else(|| Matrix::zeros(ses.total.dim(k), ses.sub.dim(k)))
    };
    let pi = |k: usize| ses.projection.maps[k].to_dense();
    // δ_k : C'_k -> A_{k-1}: lift along the coordinate section of π, apply
    // d, and read off coordinates along the coordinate inclusion ι
    let delta = |k: usize| &(&iota(k - 1).transpose() * &ses.total.boundary(k).unwrap().to_dense()) * &pi(k).transpose();
    let ha: Vec<Homology> = (0..degrees).map(|k| Homology::of(&ses.sub, Some(k))).collect();
    let hb: Vec<Homology> = (0..degrees).map(|k| Homology::of(&ses.total, Some(k))).collect();
    let hc: Vec<Homology> = (0..degrees).map(|k| Homology::of(&ses.quotient, k.checked_sub(1))).collect();
    let mut r_iota = vec![0; degrees];
    let mut r_pi = vec![0; degrees];
    let mut r_delta = vec![0; degrees + 1];
    let mut composites = true;
    for k in 0..degrees {
        let (i, p) = (iota(k), pi(k));
        r_iota[k] = induced_rank(&i, &ha[k], &hb[k]);
        if qdim(k) > 0 {
            r_pi[k] = induced_rank(&p, &hb[k], &hc[k]);
            composites &= (&p * &i).is_zero();
        }
        if k >= 1 && qdim(k) > 0 {
            let d = delta(k);
            r_delta[k] = induced_rank(&d, &hc[k], &ha[k - 1]);
            composites &= kills_homology(&(&d * &p), &hb[k], &ha[k - 1]);
            composites &= kills_homology(&(&iota(k - 1) * &d), &hc[k], &hb[k - 1]);
        }
    }
    let mut groups = Vec::new();
    for k in 0..degrees {
        groups.push((format!("H_{k}(A)"), ha[k].dim(), r_delta[k + 1], r_iota[k]));
        groups.push((format!("H_{k}(B)"), hb[k].dim(), r_iota[k], r_pi[k]));
        groups.push((format!("H_{k}(C')"), hc[k].dim(), r_pi[k], r_delta[k]));
    }
    let exact = groups.iter().all(|(_, dim, rin, rout)| rin + rout == *dim);
    LesCheck { groups, composites_vanish: composites, exact }
}
