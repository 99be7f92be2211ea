//! Sheaves on finite posets: a vector space `F(x)` per element and a
//! structure map `F(y) -> F(x)` for every cover `x ⋖ y`.
//!
//! A sheaf is either explicit (dimensions plus cover matrices) or the
//! pull-back of another sheaf along a monotone map of posets. Pull-backs
//! keep Boolean covers and restrictions to subposets cheap.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::Serialize;

use crate::arrangement::ArrangementLattice;
use crate::charpoly::{char_poly_of_dims, CharPoly};
use crate::error::{Error, Result};
use crate::exactlin::{exterior_power_matrix, rref_with_pivots, Matrix, Rational, Subspace};
use crate::poset::{Lattice, Poset};

#[derive(Debug)]
enum Repr {
    Explicit { dims: Vec<usize>, maps: HashMap<(usize, usize), Matrix> },
    Pulled { source: Arc<Sheaf>, projection: Arc<Vec<usize>> },
}

/// A sheaf of finite-dimensional rational vector spaces on a poset.
#[derive(Debug)]
pub struct Sheaf {
    base: Arc<Poset>,
    repr: Repr,
    composed: Mutex<HashMap<(usize, usize), Arc<Matrix>>>,
}

impl Clone for Sheaf {
    fn clone(&self) -> Self {
        let repr = match &self.repr {
            Repr::Explicit { dims, maps } => Repr::Explicit { dims: dims.clone(), maps: maps.clone() },
            Repr::Pulled { source, projection } => {
                Repr::Pulled { source: source.clone(), projection: projection.clone() }
            }
        };
        Sheaf { base: self.base.clone(), repr, composed: Mutex::new(HashMap::new()) }
    }
}

impl Sheaf {
    fn from_repr(base: Arc<Poset>, repr: Repr) -> Sheaf {
        Sheaf { base, repr, composed: Mutex::new(HashMap::new()) }
    }

    /// Builds an explicit sheaf and validates shapes and commutativity of
    /// every diamond `x ⋖ y1, y2 ⋖ z`.
    pub fn from_maps(base: Arc<Poset>, dims: Vec<usize>, maps: HashMap<(usize, usize), Matrix>) -> Result<Sheaf> {
        if dims.len() != base.len() {
            return Err(Error::InvalidSheaf(format!("{} stalks for {} elements", dims.len(), base.len())));
        }
        for (x, y) in base.cover_pairs() {
            let m = maps.get(&(x, y)).ok_or_else(|| Error::InvalidSheaf(format!("missing map for cover {x} < {y}")))?;
            if m.shape() != (dims[x], dims[y]) {
                return Err(Error::InvalidSheaf(format!(
                    "map for cover {x} < {y} has shape {:?}, expected {:?}",
                    m.shape(),
                    (dims[x], dims[y])
                )));
            }
        }
        if maps.len() != base.cover_pairs().len() {
            return Err(Error::InvalidSheaf("maps given for pairs that are not covers".into()));
        }
        let sheaf = Sheaf::from_repr(base, Repr::Explicit { dims, maps });
        sheaf.check_diamonds()?;
        Ok(sheaf)
    }

    fn check_diamonds(&self) -> Result<()> {
        let p = &self.base;
        for x in 0..p.len() {
            let ups = p.covers_up(x);
            for (i, &y1) in ups.iter().enumerate() {
                for &y2 in &ups[i + 1..] {
                    let tops2 = p.covers_up(y2);
                    for z in p.covers_up(y1).into_iter().filter(|z| tops2.contains(z)) {
                        let a = &self.cover_map(x, y1) * &self.cover_map(y1, z);
                        let b = &self.cover_map(x, y2) * &self.cover_map(y2, z);
                        if a != b {
                            return Err(Error::InvalidSheaf(format!(
                                "diamond {x} < {y1}, {y2} < {z} does not commute"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `ΔQ^dim`: every stalk `Q^dim`, every map the identity.
    pub fn constant(base: Arc<Poset>, dim: usize) -> Sheaf {
        let dims = vec![dim; base.len()];
        let maps = base.cover_pairs().into_iter().map(|c| (c, Matrix::identity(dim))).collect();
        Sheaf::from_repr(base, Repr::Explicit { dims, maps })
    }

    /// The sheaf `x ↦ labels[x]` with inclusion maps in canonical bases.
    /// Requires `labels[y] ⊆ labels[x]` whenever `x ⋖ y`.
    pub fn from_subspaces(base: Arc<Poset>, labels: &[Subspace]) -> Result<Sheaf> {
        let dims = labels.iter().map(Subspace::dim).collect();
        let maps = base
            .cover_pairs()
            .into_iter()
            .map(|(x, y)| Ok(((x, y), labels[y].inclusion_matrix(&labels[x])?)))
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(Sheaf::from_repr(base, Repr::Explicit { dims, maps }))
    }

    /// The natural sheaf: `F(x) = x` with inclusion maps.
    pub fn natural(l: &ArrangementLattice) -> Result<Sheaf> {
        Sheaf::from_subspaces(l.poset().clone(), l.labels())
    }

    /// `F⊥(x) = U^{⊥x}` for the center `U`, with inclusion maps.
    pub fn perp(l: &ArrangementLattice) -> Result<Sheaf> {
        Sheaf::from_subspaces(l.poset().clone(), &l.perp_labels()?)
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn dim(&self, x: usize) -> usize {
        match &self.repr {
            Repr::Explicit { dims, .. } => dims[x],
            Repr::Pulled { source, projection } => source.dim(projection[x]),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.base.len()).map(|x| self.dim(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.base.len()).all(|x| self.dim(x) == 0)
    }

    /// Structure map `F(y) -> F(x)` for a cover `x ⋖ y`.
    pub fn cover_map(&self, x: usize, y: usize) -> Matrix {
        match &self.repr {
            Repr::Explicit { maps, .. } => maps[&(x, y)].clone(),
            Repr::Pulled { source, projection } => (*source.map(projection[x], projection[y])).clone(),
        }
    }

    /// Structure map `F^y_x : F(y) -> F(x)` for `x <= y`, composed along
    /// the lexicographically least maximal chain from `x` up to `y`.
    pub fn map(&self, x: usize, y: usize) -> Arc<Matrix> {
        debug_assert!(self.base.leq(x, y), "map requested for {x} not below {y}");
        if x == y {
            return Arc::new(Matrix::identity(self.dim(x)));
        }
        if let Some(m) = self.composed.lock().expect("cache lock").get(&(x, y)) {
            return m.clone();
        }
        let m = match &self.repr {
            Repr::Pulled { source, projection } => source.map(projection[x], projection[y]),
            Repr::Explicit { .. } => {
                let z = self
                    .base
                    .covers_up(x)
                    .into_iter()
                    .find(|&z| self.base.leq(z, y))
                    .expect("graded poset has a cover towards y");
                Arc::new(&self.cover_map(x, z) * &self.map(z, y))
            }
        };
        self.composed.lock().expect("cache lock").insert((x, y), m.clone());
        m
    }

    /// Pulls the sheaf back along a monotone map `f : base -> self.base`:
    /// `(f*F)(x) = F(f x)`.
    pub fn pull_back(self: &Arc<Self>, base: Arc<Poset>, f: Vec<usize>) -> Result<Sheaf> {
        if f.len() != base.len() {
            return Err(Error::InvalidSheaf(format!("projection has {} entries for {} elements", f.len(), base.len())));
        }
        if let Some(&bad) = f.iter().find(|&&v| v >= self.base.len()) {
            return Err(Error::InvalidSheaf(format!("projection value {bad} out of range")));
        }
        for (x, y) in base.cover_pairs() {
            if !self.base.leq(f[x], f[y]) {
                return Err(Error::InvalidSheaf(format!("projection is not monotone on cover {x} < {y}")));
            }
        }
        let repr = match &self.repr {
            Repr::Pulled { source, projection } => Repr::Pulled {
                source: source.clone(),
                projection: Arc::new(f.iter().map(|&v| projection[v]).collect()),
            },
            Repr::Explicit { .. } => Repr::Pulled { source: self.clone(), projection: Arc::new(f) },
        };
        Ok(Sheaf::from_repr(base, repr))
    }

    /// Restriction to an induced subposet given by its embedding.
    pub fn restrict(self: &Arc<Self>, sub: Arc<Poset>, embedding: &[usize]) -> Result<Sheaf> {
        self.pull_back(sub, embedding.to_vec())
    }

    /// The induced sheaf `F̃(x) = F(⋁x)` on the Boolean cover of `l`, whose
    /// atoms are the atoms of `l` in order. Returns the sheaf and the
    /// projection.
    pub fn induced_on_cover(self: &Arc<Self>, l: &Lattice) -> Result<(Sheaf, Arc<Vec<usize>>)> {
        if !Arc::ptr_eq(&self.base, l.poset()) && **l.poset() != *self.base {
            return Err(Error::InvalidSheaf("sheaf and lattice have different bases".into()));
        }
        let f = boolean_cover_projection(l)?;
        let cover = Arc::new(Poset::boolean(l.atoms().len())?);
        let sheaf = self.pull_back(cover, f.clone())?;
        Ok((sheaf, Arc::new(f)))
    }

    /// Replaces a pull-back by an explicit sheaf on the same base.
    pub fn materialize(&self) -> Sheaf {
        let dims = self.dims();
        let maps = self.base.cover_pairs().into_iter().map(|(x, y)| ((x, y), self.cover_map(x, y))).collect();
        Sheaf::from_repr(self.base.clone(), Repr::Explicit { dims, maps })
    }

    /// `Λ^j F`, with compound matrices as structure maps.
    pub fn exterior_power(&self, j: usize) -> Sheaf {
        match &self.repr {
            Repr::Pulled { source, projection } => Sheaf::from_repr(
                self.base.clone(),
                Repr::Pulled { source: Arc::new(source.exterior_power(j)), projection: projection.clone() },
            ),
            Repr::Explicit { dims, maps } => {
                let dims = dims.iter().map(|&d| binomial(d, j)).collect();
                let maps = maps.iter().map(|(k, m)| (*k, exterior_power_matrix(m, j))).collect();
                Sheaf::from_repr(self.base.clone(), Repr::Explicit { dims, maps })
            }
        }
    }

    /// `F ⊕ G` with block-diagonal maps.
    pub fn direct_sum(&self, other: &Sheaf) -> Result<Sheaf> {
        self.same_base(other)?;
        if let (Repr::Pulled { source: s1, projection: p1 }, Repr::Pulled { source: s2, projection: p2 }) =
            (&self.repr, &other.repr)
        {
            if p1 == p2 && Arc::ptr_eq(&s1.base, &s2.base) {
                let source = Arc::new(s1.direct_sum(s2)?);
                return Ok(Sheaf::from_repr(self.base.clone(), Repr::Pulled { source, projection: p1.clone() }));
            }
        }
        let dims = (0..self.base.len()).map(|x| self.dim(x) + other.dim(x)).collect();
        let maps = self
            .base
            .cover_pairs()
            .into_iter()
            .map(|(x, y)| ((x, y), Matrix::block_diag(&self.cover_map(x, y), &other.cover_map(x, y))))
            .collect();
        Ok(Sheaf::from_repr(self.base.clone(), Repr::Explicit { dims, maps }))
    }

    /// `ΔQ^m ⊗ F`: stalks `Q^m ⊗ F(x)`, maps `I_m ⊗ F^y_x`.
    pub fn tensor_constant(&self, m: usize) -> Sheaf {
        let dims = (0..self.base.len()).map(|x| m * self.dim(x)).collect();
        let id = Matrix::identity(m);
        let maps =
            self.base.cover_pairs().into_iter().map(|(x, y)| ((x, y), Matrix::kron(&id, &self.cover_map(x, y)))).collect();
        Sheaf::from_repr(self.base.clone(), Repr::Explicit { dims, maps })
    }

    fn same_base(&self, other: &Sheaf) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base {
            Ok(())
        } else {
            Err(Error::InvalidSheaf("sheaves live on different posets".into()))
        }
    }

    /// `χ_{(L,F)}(t) = Σ μ(0,x) t^{dim F(x)}`.
    pub fn char_poly(&self, l: &Lattice) -> CharPoly {
        char_poly_of_dims(l, |x| self.dim(x))
    }

    /// JSON dump: stalk dimensions and one matrix per cover edge.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Edge {
            lower: usize,
            upper: usize,
            matrix: Vec<Vec<String>>,
        }
        let edges: Vec<Edge> = self
            .base
            .cover_pairs()
            .into_iter()
            .map(|(x, y)| Edge { lower: x, upper: y, matrix: self.cover_map(x, y).to_strings() })
            .collect();
        serde_json::json!({ "elements": self.base.len(), "dims": self.dims(), "maps": edges })
    }
}

/// `f(S) = ⋁S` from the Boolean lattice on the atoms of `l` onto `l`.
pub fn boolean_cover_projection(l: &Lattice) -> Result<Vec<usize>> {
    let atoms = l.atoms();
    let n = atoms.len();
    let size = 1usize
        .checked_shl(n as u32)
        .filter(|_| n <= crate::poset::MAX_BOOLEAN_ATOMS)
        .ok_or(Error::Guard { what: "Boolean cover atoms", count: n as u128, limit: crate::poset::MAX_BOOLEAN_ATOMS as u128 })?;
    let mut f = vec![l.bottom(); size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        f[mask] = l.join(f[mask & (mask - 1)], atoms[low]);
    }
    Ok(f)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// A natural transformation `κ : F -> G` of sheaves on one poset.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    source: Arc<Sheaf>,
    target: Arc<Sheaf>,
    components: Vec<Matrix>,
}

impl SheafMorphism {
    /// Validates shapes and every naturality square on cover edges.
    pub fn new(source: Arc<Sheaf>, target: Arc<Sheaf>, components: Vec<Matrix>) -> Result<Self> {
        source.same_base(&target)?;
        let base = source.base.clone();
        if components.len() != base.len() {
            return Err(Error::InvalidSheaf("one component per element is required".into()));
        }
        for (x, c) in components.iter().enumerate() {
            if c.shape() != (target.dim(x), source.dim(x)) {
                return Err(Error::InvalidSheaf(format!("component at {x} has shape {:?}", c.shape())));
            }
        }
        for (x, y) in base.cover_pairs() {
            let lhs = &target.cover_map(x, y) * &components[y];
            let rhs = &components[x] * &source.cover_map(x, y);
            if lhs != rhs {
                return Err(Error::InvalidSheaf(format!("naturality fails on cover {x} < {y}")));
            }
        }
        Ok(SheafMorphism { source, target, components })
    }

    pub fn identity(f: Arc<Sheaf>) -> Self {
        let components = (0..f.base.len()).map(|x| Matrix::identity(f.dim(x))).collect();
        SheafMorphism { source: f.clone(), target: f, components }
    }

    pub fn zero(source: Arc<Sheaf>, target: Arc<Sheaf>) -> Result<Self> {
        let components = (0..source.base.len()).map(|x| Matrix::zeros(target.dim(x), source.dim(x))).collect();
        Self::new(source, target, components)
    }

    pub fn source(&self) -> &Arc<Sheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Sheaf> {
        &self.target
    }

    pub fn component(&self, x: usize) -> &Matrix {
        &self.components[x]
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.rows() == c.cols() && c.rank() == c.rows())
    }

    /// Cokernel sheaf `G / κ(F)`. Every component must be injective.
    ///
    /// The quotient basis at `x` is the set of standard vectors at the
    /// non-pivot positions of the image's reduced echelon basis.
    pub fn quotient(&self) -> Result<Sheaf> {
        let base = self.target.base.clone();
        let mut proj = Vec::with_capacity(base.len());
        let mut sect = Vec::with_capacity(base.len());
        for (x, c) in self.components.iter().enumerate() {
            if c.rank() != c.cols() {
                return Err(Error::NotInjective(x));
            }
            let (p, s) = cokernel_maps(c);
            proj.push(p);
            sect.push(s);
        }
        let dims = proj.iter().map(Matrix::rows).collect();
        let maps = base
            .cover_pairs()
            .into_iter()
            .map(|(x, y)| ((x, y), &(&proj[x] * &self.target.cover_map(x, y)) * &sect[y]))
            .collect();
        Ok(Sheaf::from_repr(base, Repr::Explicit { dims, maps }))
    }
}

/// For an injective `c : Q^k -> Q^n`, the projection `P : Q^n -> Q^{n-k}`
/// onto the cokernel and the section `S` of standard vectors with
/// `P S = I` and `P c = 0`.
fn cokernel_maps(c: &Matrix) -> (Matrix, Matrix) {
    let n = c.rows();
    let (r, pivots) = rref_with_pivots(&c.transpose());
    let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let mut p = Matrix::zeros(free.len(), n);
    let mut s = Matrix::zeros(n, free.len());
    for (j, &qj) in free.iter().enumerate() {
        p.set(j, qj, Rational::from_integer(1.into()));
        s.set(qj, j, Rational::from_integer(1.into()));
        for (i, &pi) in pivots.iter().enumerate() {
            let v = r.get(i, qj);
            if !v.is_zero() {
                p.set(j, pi, -v.clone());
            }
        }
    }
    (p, s)
}

/// Pieces of a sheaf `F` on the Boolean lattice `B(n)` relative to atom
/// `a`: the sub-Boolean `B_a` (subsets avoiding `a`), the sheaves
/// `F_a(x) = F(x)` and `F^a(x) = F(x ∨ a)` on it, and the morphism
/// `F^a -> F_a` given by the structure maps `F^{x∨a}_x`.
pub struct AtomSplit {
    pub base: Arc<Poset>,
    /// `embed[x]` is the element of `B(n)` for the element `x` of `B_a`.
    pub embed: Vec<usize>,
    pub lower: Arc<Sheaf>,
    pub upper: Arc<Sheaf>,
    pub inclusion: SheafMorphism,
}

pub fn split_at_atom(f: &Arc<Sheaf>, a: usize) -> Result<AtomSplit> {
    let n = f.base.boolean_atoms().ok_or_else(|| Error::InvalidSheaf("sheaf is not on a Boolean lattice".into()))?;
    if a >= n {
        return Err(Error::NotAtom(1 << a));
    }
    let base = Arc::new(Poset::boolean(n - 1)?);
    let low_mask = (1usize << a) - 1;
    let embed: Vec<usize> = (0..base.len()).map(|x| (x & low_mask) | ((x & !low_mask) << 1)).collect();
    let lower = Arc::new(f.pull_back(base.clone(), embed.clone())?);
    let upper = Arc::new(f.pull_back(base.clone(), embed.iter().map(|&x| x | (1 << a)).collect())?);
    let components = embed.iter().map(|&x| (*f.map(x, x | (1 << a))).clone()).collect();
    let inclusion = SheafMorphism::new(upper.clone(), lower.clone(), components)?;
    Ok(AtomSplit { base, embed, lower, upper, inclusion })
}

/// Every map `F(x ∨ a) -> F(x)` is an identity matrix.
pub fn is_double(f: &Arc<Sheaf>, a: usize) -> Result<bool> {
    let s = split_at_atom(f, a)?;
    Ok((0..s.base.len()).all(|x| s.inclusion.component(x).is_identity()))
}

/// Every map `F(x ∨ a) -> F(x)` is injective.
pub fn is_decomposable(f: &Arc<Sheaf>, a: usize) -> Result<bool> {
    let s = split_at_atom(f, a)?;
    Ok((0..s.base.len()).all(|x| {
        let c = s.inclusion.component(x);
        c.rank() == c.cols()
    }))
}

/// `F_a / F^a` on `B_a` for a decomposable sheaf.
pub fn decomposition_quotient(f: &Arc<Sheaf>, a: usize) -> Result<(Arc<Poset>, Sheaf)> {
    let s = split_at_atom(f, a)?;
    match s.inclusion.quotient() {
        Ok(q) => Ok((s.base, q)),
        Err(Error::NotInjective(x)) => Err(Error::NotDecomposable { atom: a, element: s.embed[x] }),
        Err(e) => Err(e),
    }
}

/// The splitting `ΔU ⊕ F⊥ ≅ F` of the natural sheaf, returned as the two
/// summands and the isomorphism from their sum onto `F`.
pub fn center_decomposition(l: &ArrangementLattice) -> Result<(Sheaf, Sheaf, SheafMorphism)> {
    let base = l.poset().clone();
    let u = l.center();
    let delta = Sheaf::constant(base.clone(), u.dim());
    let perp_labels = l.perp_labels()?;
    let perp = Sheaf::from_subspaces(base.clone(), &perp_labels)?;
    let natural = Arc::new(Sheaf::natural(l)?);
    let components = (0..base.len())
        .map(|x| {
            let a = u.inclusion_matrix(l.label(x))?;
            let b = perp_labels[x].inclusion_matrix(l.label(x))?;
            let cols: Vec<Vec<Rational>> =
                (0..a.cols()).map(|c| a.column(c)).chain((0..b.cols()).map(|c| b.column(c))).collect();
            Ok(Matrix::from_columns(l.label(x).dim(), cols))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = Arc::new(delta.direct_sum(&perp)?);
    let iso = SheafMorphism::new(sum, natural, components)?;
    Ok((delta, perp, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;
    use crate::exactlin::q;
    use itertools::Itertools;

    fn pi3() -> ArrangementLattice {
        Arrangement::pi3_in(2).unwrap().build_lattice().unwrap()
    }

    #[test]
    fn constant_and_natural() {
        let l = pi3();
        assert!(Sheaf::constant(l.poset().clone(), 0).is_zero());
        let c = Sheaf::constant(l.poset().clone(), 1);
        assert!(l.poset().cover_pairs().iter().all(|&(x, y)| c.cover_map(x, y) == Matrix::identity(1)));
        let f = Sheaf::natural(&l).unwrap();
        assert_eq!(f.dims(), vec![2, 1, 1, 1, 0]);
        f.check_diamonds().unwrap();
        let b2 = Arrangement::boolean(2).build_lattice().unwrap();
        let g = Sheaf::natural(&b2).unwrap();
        assert_eq!(g.cover_map(1, 3).shape(), (1, 0));
    }

    #[test]
    fn exterior_powers() {
        let l = pi3();
        let f = Sheaf::natural(&l).unwrap();
        let e0 = f.exterior_power(0);
        assert_eq!(e0.dims(), vec![1; 5]);
        assert_eq!(f.exterior_power(2).dims(), vec![1, 0, 0, 0, 0]);
        assert!(f.exterior_power(3).is_zero());
        let c = Sheaf::constant(l.poset().clone(), 3);
        let e2 = c.exterior_power(2);
        assert_eq!(e2.dims(), vec![3; 5]);
        assert!(l.poset().cover_pairs().iter().all(|&(x, y)| e2.cover_map(x, y).is_identity()));
        let b3 = Arrangement::boolean(3).build_lattice().unwrap();
        let g = Sheaf::natural(&b3).unwrap();
        for j in 0..4 {
            g.exterior_power(j).check_diamonds().unwrap();
        }
    }

    #[test]
    fn composed_maps_are_path_independent() {
        let l = Arrangement::braid(4).build_lattice().unwrap();
        let f = Sheaf::natural(&l).unwrap();
        let top = l.lattice().top();
        for x in 0..l.len() {
            let m = f.map(x, top);
            assert_eq!(*m, l.label(top).inclusion_matrix(l.label(x)).unwrap());
        }
    }

    #[test]
    fn rejects_non_commuting_diamond() {
        let p = Arc::new(Poset::boolean(2).unwrap());
        let mut maps = HashMap::new();
        for (x, y) in p.cover_pairs() {
            maps.insert((x, y), Matrix::identity(1));
        }
        maps.insert((0, 1), Matrix::from_i64(1, &[&[-1]]));
        assert!(Sheaf::from_maps(p.clone(), vec![1; 4], maps.clone()).is_err());
        maps.insert((0, 1), Matrix::identity(1));
        assert!(Sheaf::from_maps(p, vec![1; 4], maps).is_ok());
    }

    #[test]
    fn direct_sums() {
        let l = pi3();
        let f = Sheaf::natural(&l).unwrap();
        let z = Sheaf::constant(l.poset().clone(), 0);
        let s = f.direct_sum(&z).unwrap();
        assert!(l.poset().cover_pairs().iter().all(|&(x, y)| s.cover_map(x, y) == f.cover_map(x, y)));
        let one = Sheaf::constant(l.poset().clone(), 1);
        let two = one.direct_sum(&one).unwrap();
        assert!(l.poset().cover_pairs().iter().all(|&(x, y)| two.cover_map(x, y) == Matrix::identity(2)));
    }

    #[test]
    fn exterior_of_direct_sum() {
        let l = Arrangement::braid(3).build_lattice().unwrap();
        let f = Sheaf::natural(&l).unwrap();
        let g = Sheaf::perp(&l).unwrap();
        let sum = f.direct_sum(&g).unwrap();
        let base = l.poset().clone();
        for j in 0..=4 {
            let lhs = Arc::new(sum.exterior_power(j));
            // ⊕_{s+t=j} Λ^s F ⊗ Λ^t G with Kronecker maps, built by hand
            let parts: Vec<(Sheaf, Sheaf)> = (0..=j).map(|s| (f.exterior_power(s), g.exterior_power(j - s))).collect();
            let dims: Vec<usize> =
                (0..base.len()).map(|x| parts.iter().map(|(a, b)| a.dim(x) * b.dim(x)).sum()).collect();
            assert_eq!(dims, lhs.dims());
            let maps = base
                .cover_pairs()
                .into_iter()
                .map(|(x, y)| {
                    let blocks = parts.iter().map(|(a, b)| Matrix::kron(&a.cover_map(x, y), &b.cover_map(x, y)));
                    ((x, y), blocks.reduce(|m, b| Matrix::block_diag(&m, &b)).unwrap())
                })
                .collect();
            let rhs = Arc::new(Sheaf::from_maps(base.clone(), dims, maps).unwrap());
            // wedge e_S of the sum splits as e_{S∩F} ⊗ e_{S∩G} with no sign
            let components = (0..base.len())
                .map(|x| {
                    let (m, n) = (f.dim(x), g.dim(x));
                    let mut index = HashMap::new();
                    let mut k = 0;
                    for s in 0..=j {
                        for a in (0..m).combinations(s) {
                            for b in (0..n).combinations(j - s) {
                                index.insert((a.clone(), b), k);
                                k += 1;
                            }
                        }
                    }
                    let subsets: Vec<Vec<usize>> = (0..m + n).combinations(j).collect();
                    let mut c = Matrix::zeros(k, subsets.len());
                    for (col, set) in subsets.iter().enumerate() {
                        let a: Vec<usize> = set.iter().copied().filter(|&i| i < m).collect();
                        let b: Vec<usize> = set.iter().filter(|&&i| i >= m).map(|&i| i - m).collect();
                        c.set(index[&(a, b)], col, q(1));
                    }
                    c
                })
                .collect();
            let iso = SheafMorphism::new(lhs, rhs, components).unwrap();
            assert!(iso.is_isomorphism());
        }
    }

    #[test]
    fn induced_sheaf_on_cover() {
        let l = pi3();
        let f = Arc::new(Sheaf::natural(&l).unwrap());
        let (g, proj) = f.induced_on_cover(l.lattice()).unwrap();
        assert_eq!(proj.len(), 8);
        let top_dim = f.dim(l.lattice().top());
        for x in 0..8usize {
            if x.count_ones() >= 2 {
                assert_eq!(proj[x], l.lattice().top());
                assert_eq!(g.dim(x), top_dim);
            }
        }
        assert_eq!(g.char_poly(&Lattice::new(Poset::boolean(3).unwrap()).unwrap()), f.char_poly(l.lattice()));
        let b2 = Arrangement::boolean(2).build_lattice().unwrap();
        let nb = Arc::new(Sheaf::natural(&b2).unwrap());
        let (pulled, proj) = nb.induced_on_cover(b2.lattice()).unwrap();
        assert_eq!(*proj, vec![0, 1, 2, 3]);
        assert_eq!(pulled.dims(), nb.dims());
        let c = Arc::new(Sheaf::constant(l.poset().clone(), 2));
        let (cp, _) = c.induced_on_cover(l.lattice()).unwrap();
        assert!(cp.base().cover_pairs().iter().all(|&(x, y)| cp.cover_map(x, y).is_identity()));
    }

    #[test]
    fn pull_back_rejects_non_monotone() {
        let l = pi3();
        let f = Arc::new(Sheaf::natural(&l).unwrap());
        let b = Arc::new(Poset::boolean(1).unwrap());
        assert!(f.pull_back(b.clone(), vec![4, 0]).is_err());
        assert!(f.pull_back(b, vec![0, 4]).is_ok());
    }

    #[test]
    fn quotients() {
        let l = pi3();
        let f = Arc::new(Sheaf::natural(&l).unwrap());
        assert!(SheafMorphism::identity(f.clone()).quotient().unwrap().is_zero());
        let z = Arc::new(Sheaf::constant(l.poset().clone(), 0));
        let q0 = SheafMorphism::zero(z, f.clone()).unwrap().quotient().unwrap();
        assert_eq!(q0.dims(), f.dims());
        assert!(l.poset().cover_pairs().iter().all(|&(x, y)| q0.cover_map(x, y) == f.cover_map(x, y)));
        let c = Arc::new(Sheaf::constant(l.poset().clone(), 1));
        let c2 = Arc::new(Sheaf::constant(l.poset().clone(), 2));
        let non_inj = SheafMorphism::zero(c, c2).unwrap();
        assert!(matches!(non_inj.quotient(), Err(Error::NotInjective(0))));
    }

    #[test]
    fn boolean_quotient_is_lower_exterior_power() {
        for n in 2..=4 {
            let b = Arrangement::boolean(n).build_lattice().unwrap();
            let g = Arc::new(Sheaf::natural(&b).unwrap());
            let (gc, _) = g.induced_on_cover(b.lattice()).unwrap();
            let gc = Arc::new(gc);
            for j in 1..=n {
                let gj = Arc::new(gc.exterior_power(j));
                for a in 0..n {
                    assert!(is_decomposable(&gj, a).unwrap());
                    let split = split_at_atom(&gj, a).unwrap();
                    let quot = Arc::new(split.inclusion.quotient().unwrap());
                    let fa = split_at_atom(&gc, a).unwrap().upper;
                    let target = Arc::new(fa.exterior_power(j - 1));
                    assert_eq!(quot.dims(), target.dims());
                    // quotient basis: wedges e_S containing the coordinate a;
                    // send e_S to ± e_{S∖a} in the stalk of F^a
                    let components = (0..split.base.len())
                        .map(|x| boolean_quotient_iso(n, split.embed[x], a, j))
                        .collect();
                    let iso = SheafMorphism::new(quot, target, components).unwrap();
                    assert!(iso.is_isomorphism());
                }
            }
        }
    }

    /// At the element `x` of `B(n)` (with `a ∉ x`), the stalk of `Λ^j G` is
    /// `Λ^j span{e_i : i ∉ x}`; the quotient keeps the wedges containing
    /// `e_a`, which map to wedges of `span{e_i : i ∉ x ∪ a}`.
    fn boolean_quotient_iso(n: usize, x: usize, a: usize, j: usize) -> Matrix {
        let free: Vec<usize> = (0..n).filter(|i| x & (1 << i) == 0).collect();
        let pos_a = free.iter().position(|&i| i == a).unwrap();
        let with_a: Vec<Vec<usize>> =
            (0..free.len()).combinations(j).filter(|s| s.contains(&pos_a)).collect();
        let rest: Vec<usize> = (0..free.len()).filter(|&p| p != pos_a).collect();
        let targets: Vec<Vec<usize>> = (0..rest.len()).combinations(j - 1).collect();
        let mut m = Matrix::zeros(targets.len(), with_a.len());
        for (c, s) in with_a.iter().enumerate() {
            let k = s.iter().position(|&p| p == pos_a).unwrap();
            let reduced: Vec<usize> =
                s.iter().filter(|&&p| p != pos_a).map(|&p| rest.iter().position(|&r| r == p).unwrap()).collect();
            let r = targets.iter().position(|t| *t == reduced).unwrap();
            m.set(r, c, q(if k % 2 == 0 { 1 } else { -1 }));
        }
        m
    }

    #[test]
    fn doubles_and_decomposability() {
        let b = Arc::new(Poset::boolean(3).unwrap());
        let c = Arc::new(Sheaf::constant(b.clone(), 2));
        for a in 0..3 {
            assert!(is_double(&c, a).unwrap());
            assert!(is_decomposable(&c, a).unwrap());
        }
        let b2 = Arrangement::boolean(2).build_lattice().unwrap();
        let nat = Arc::new(Sheaf::natural(&b2).unwrap());
        let (nat, _) = nat.induced_on_cover(b2.lattice()).unwrap();
        let nat = Arc::new(nat);
        assert!(!is_double(&nat, 0).unwrap());
        assert!(is_decomposable(&nat, 0).unwrap());
        // a rank-dropping map Q^2 -> Q^1 across atom 0
        let p = Arc::new(Poset::boolean(1).unwrap());
        let maps = HashMap::from([((0, 1), Matrix::from_i64(2, &[&[1, 1]]))]);
        let bad = Arc::new(Sheaf::from_maps(p, vec![1, 2], maps).unwrap());
        assert!(!is_decomposable(&bad, 0).unwrap());
        assert!(matches!(decomposition_quotient(&bad, 0), Err(Error::NotDecomposable { atom: 0, element: 0 })));
    }

    #[test]
    fn center_splitting() {
        for arr in [Arrangement::braid(3), Arrangement::braid(4), Arrangement::pi3_in(4).unwrap()] {
            let l = arr.build_lattice().unwrap();
            let (delta, perp, iso) = center_decomposition(&l).unwrap();
            assert!(iso.is_isomorphism());
            for x in 0..l.len() {
                assert_eq!(delta.dim(x) + perp.dim(x), l.label(x).dim());
            }
        }
        let br3 = Arrangement::braid(3).build_lattice().unwrap();
        assert_eq!(Sheaf::perp(&br3).unwrap().dims(), vec![2, 1, 1, 1, 0]);
        let ess = pi3();
        let (delta, perp, _) = center_decomposition(&ess).unwrap();
        assert!(delta.is_zero());
        assert_eq!(perp.dims(), Sheaf::natural(&ess).unwrap().dims());
        let empty = Arrangement::new(2, vec![]).unwrap().build_lattice().unwrap();
        let (delta, perp, _) = center_decomposition(&empty).unwrap();
        assert_eq!((delta.dims(), perp.dims()), (vec![2], vec![0]));
    }

    #[test]
    fn char_poly_of_pair_matches_natural() {
        let l = Arrangement::braid(4).build_lattice().unwrap();
        let f = Sheaf::natural(&l).unwrap();
        assert_eq!(f.char_poly(l.lattice()), l.char_poly());
        let fp = Sheaf::perp(&l).unwrap();
        assert_eq!(fp.char_poly(l.lattice()), l.char_poly_perp());
    }

    #[test]
    fn json_dump_shape() {
        let l = pi3();
        let v = Sheaf::natural(&l).unwrap().to_json();
        assert_eq!(v["dims"], serde_json::json!([2, 1, 1, 1, 0]));
        assert_eq!(v["maps"].as_array().unwrap().len(), 6);
    }
}
