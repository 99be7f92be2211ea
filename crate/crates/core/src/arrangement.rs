//! Central hyperplane arrangements over Q and their intersection lattices.
//!
//! Element ids of an [`ArrangementLattice`] are assigned breadth first: id 0
//! is the ambient space, ids `1..=n` are the hyperplanes in input order, and
//! ids are sorted by rank.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::charpoly::{char_poly_of_dims, CharPoly};
use crate::error::{Error, Result};
use crate::exactlin::unit;
use crate::exactlin::{format_rational, parse_rational, q, Matrix, Rational, Subspace};
use crate::poset::{Lattice, Poset};

/// Refuse to build intersection lattices with more elements than this.
pub const MAX_LATTICE_ELEMENTS: usize = 1 << 16;

/// A finite set of linear hyperplanes in `Q^d`, each given by a normal
/// vector. The hyperplane order is the atom order everywhere downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    normals: Vec<Vec<Rational>>,
    hyperplanes: Vec<Subspace>,
}

impl Arrangement {
    /// Validates the normals: correct length, nonzero, pairwise distinct
    /// kernels. All offending indices are reported together.
    pub fn new(ambient_dim: usize, normals: Vec<Vec<Rational>>) -> Result<Self> {
        let mut problems = Vec::new();
        let mut hyperplanes = Vec::with_capacity(normals.len());
        for (i, n) in normals.iter().enumerate() {
            if n.len() != ambient_dim {
                problems.push(format!("hyperplane {i} has {} entries, expected {ambient_dim}", n.len()));
                continue;
            }
            match Subspace::hyperplane(n) {
                Ok(h) => hyperplanes.push((i, h)),
                Err(_) => problems.push(format!("hyperplane {i} has a zero normal")),
            }
        }
        let mut seen: HashMap<&Subspace, usize> = HashMap::new();
        for (i, h) in &hyperplanes {
            if let Some(j) = seen.insert(h, *i) {
                problems.push(format!("hyperplanes {j} and {i} coincide"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidArrangement(problems.join("; ")));
        }
        let hyperplanes = hyperplanes.into_iter().map(|(_, h)| h).collect();
        Ok(Arrangement { ambient_dim, normals, hyperplanes })
    }

    pub fn from_i64(ambient_dim: usize, normals: &[&[i64]]) -> Result<Self> {
        Self::new(ambient_dim, normals.iter().map(|n| n.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Coordinate hyperplanes `x_i = 0` in `Q^n`.
    pub fn boolean(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| unit(n, i)).collect()).expect("coordinate hyperplanes are valid")
    }

    /// All `x_i = x_j` (`i < j`) in `Q^n`.
    pub fn braid(n: usize) -> Self {
        let mut normals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit(n, i);
                v[j] = q(-1);
                normals.push(v);
            }
        }
        Self::new(n, normals).expect("braid hyperplanes are valid")
    }

    /// `n` hyperplanes in general position in `Q^d`, with normals
    /// `(1, t, ..., t^{d-1})` for `t = 1..=n`.
    pub fn generic(n: usize, d: usize) -> Result<Self> {
        if d == 0 && n > 0 {
            return Err(Error::InvalidArrangement("no hyperplanes exist in Q^0".into()));
        }
        let normals = (1..=n as i64).map(|t| (0..d as u32).map(|k| q(t.pow(k))).collect()).collect();
        Self::new(d, normals)
    }

    /// The three lines `x_1 = 0`, `x_2 = 0`, `x_1 + x_2 = 0` placed in `Q^d`
    /// (`d >= 2`), giving a lattice of shape Π(3) with a center of
    /// dimension `d - 2`.
    pub fn pi3_in(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArrangement("pi3 needs ambient dimension at least 2".into()));
        }
        let mut sum = unit(d, 0);
        sum[1] = q(1);
        Self::new(d, vec![unit(d, 0), unit(d, 1), sum])
    }

    /// Resolves a preset name. Accepted forms: `boolean-N`, `braid-N`,
    /// `braid-N-ess`, `generic-N-D`, `pi3`, `pi3-qD`.
    pub fn preset(name: &str) -> Result<Self> {
        let bad = || Error::Input(format!("unknown preset {name:?}"));
        let parts: Vec<&str> = name.split('-').collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["boolean", n] => Ok(Self::boolean(num(n)?)),
            ["braid", n] => Ok(Self::braid(num(n)?)),
            ["braid", n, "ess"] => Self::braid(num(n)?).essentialise(),
            ["generic", n, d] => Self::generic(num(n)?, num(d)?),
            ["pi3"] => Self::pi3_in(2),
            ["pi3", d] => Self::pi3_in(num(d.strip_prefix('q').ok_or_else(bad)?)?),
            _ => Err(bad()),
        }
    }

    /// Parses the JSON arrangement format: either explicit normals
    /// `{"ambient_dim": d, "hyperplanes": [[...], ...]}` with rational
    /// strings (or integers), or a generator `{"preset": "braid", "n": k}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ArrangementFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if let Some(p) = file.preset {
            let n = file.n.ok_or_else(|| Error::Input("preset needs \"n\"".into()))?;
            return match p.as_str() {
                "boolean" => Ok(Self::boolean(n)),
                "braid" => Ok(Self::braid(n)),
                "generic" => Self::generic(n, file.d.unwrap_or(2)),
                other => Err(Error::Input(format!("unknown preset {other:?}"))),
            };
        }
        let d = file.ambient_dim.ok_or_else(|| Error::Input("missing \"ambient_dim\"".into()))?;
        let rows = file.hyperplanes.ok_or_else(|| Error::Input("missing \"hyperplanes\"".into()))?;
        let mut normals = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        Value::Number(n) if n.is_i64() => n.to_string(),
                        other => return Err(Error::Input(format!("hyperplane {i}, entry {k}: expected a rational string, got {other}"))),
                    };
                    parse_rational(&s).map_err(|e| Error::Input(format!("hyperplane {i}, entry {k}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            normals.push(parsed);
        }
        Self::new(d, normals)
    }

    pub fn to_json(&self) -> String {
        let file = ArrangementFile {
            ambient_dim: Some(self.ambient_dim),
            hyperplanes: Some(
                self.normals.iter().map(|n| n.iter().map(|x| Value::String(format_rational(x))).collect()).collect(),
            ),
            preset: None,
            n: None,
            d: None,
        };
        serde_json::to_string(&file).expect("arrangement serializes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn hyperplanes(&self) -> &[Subspace] {
        &self.hyperplanes
    }

    /// `U`, the intersection of all hyperplanes.
    pub fn center(&self) -> Subspace {
        let m = Matrix::from_rows(self.ambient_dim, self.normals.clone());
        crate::exactlin::kernel_basis(&m)
    }

    pub fn is_essential(&self) -> bool {
        self.center().dim() == 0
    }

    /// The arrangement `{H ∩ U^⊥}` inside `U^⊥`, written in the canonical
    /// coordinates of `U^⊥`.
    pub fn essentialise(&self) -> Result<Arrangement> {
        let u = self.center();
        let w = u.orthogonal_complement_in(&Subspace::full(self.ambient_dim))?;
        let normals = self
            .hyperplanes
            .iter()
            .map(|h| hyperplane_normal(&h.intersect(&w)?.in_coordinates_of(&w)?))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(w.dim(), normals)
    }

    pub fn build_lattice(&self) -> Result<ArrangementLattice> {
        ArrangementLattice::new(self.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct ArrangementFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    ambient_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hyperplanes: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
}

/// Normal vector of a codimension-one subspace.
fn hyperplane_normal(h: &Subspace) -> Result<Vec<Rational>> {
    let ann = h.annihilator();
    if ann.rows() != 1 {
        return Err(Error::InvalidArrangement(format!("expected a hyperplane, got codimension {}", ann.rows())));
    }
    Ok(ann.row(0).to_vec())
}

/// The intersection lattice of an arrangement, ordered by reverse inclusion.
#[derive(Clone, Debug)]
pub struct ArrangementLattice {
    arrangement: Arrangement,
    lattice: Lattice,
    labels: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    center: Subspace,
}

impl ArrangementLattice {
    pub fn new(arrangement: Arrangement) -> Result<Self> {
        let d = arrangement.ambient_dim;
        let mut labels = vec![Subspace::full(d)];
        let mut index: HashMap<Subspace, usize> = HashMap::from([(Subspace::full(d), 0)]);
        let mut rank = vec![0];
        let mut covers = Vec::new();
        let mut x = 0;
        while x < labels.len() {
            for h in &arrangement.hyperplanes {
                if h.contains(&labels[x]) {
                    continue;
                }
                let y = labels[x].intersect(h)?;
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if labels.len() >= MAX_LATTICE_ELEMENTS {
                            return Err(Error::Guard {
                                what: "intersection lattice elements",
                                count: labels.len() as u128 + 1,
                                limit: MAX_LATTICE_ELEMENTS as u128,
                            });
                        }
                        index.insert(y.clone(), labels.len());
                        rank.push(d - y.dim());
                        labels.push(y);
                        labels.len() - 1
                    }
                };
                covers.push((x, id));
            }
            x += 1;
        }
        let poset = Poset::from_covers(labels.len(), &covers, Some(rank))?;
        let lattice = Lattice::new(poset)?;
        let center = labels[lattice.top()].clone();
        Ok(ArrangementLattice { arrangement, lattice, labels, index, center })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn poset(&self) -> &std::sync::Arc<Poset> {
        self.lattice.poset()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.arrangement.ambient_dim
    }

    pub fn label(&self, x: usize) -> &Subspace {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[Subspace] {
        &self.labels
    }

    pub fn element_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// `U = ⋂ A`, the label of the maximum.
    pub fn center(&self) -> &Subspace {
        &self.center
    }

    pub fn is_essential(&self) -> bool {
        self.center.dim() == 0
    }

    /// Lattice element of the `i`-th hyperplane.
    pub fn atom_of_hyperplane(&self, i: usize) -> usize {
        i + 1
    }

    pub fn hyperplane_of_atom(&self, a: usize) -> Result<usize> {
        if a == 0 || a > self.arrangement.len() {
            return Err(Error::NotAtom(a));
        }
        Ok(a - 1)
    }

    /// Indices of the hyperplanes containing `label(x)`.
    pub fn hyperplanes_containing(&self, x: usize) -> Vec<usize> {
        (0..self.arrangement.len()).filter(|&i| self.arrangement.hyperplanes[i].contains(&self.labels[x])).collect()
    }

    /// `χ_L(t) = Σ μ(0,x) t^{dim x}`.
    pub fn char_poly(&self) -> CharPoly {
        char_poly_of_dims(&self.lattice, |x| self.labels[x].dim())
    }

    /// `χ_{(L,F⊥)}(t)` for the orthogonal part of the natural sheaf.
    pub fn char_poly_perp(&self) -> CharPoly {
        let u = self.center.dim();
        char_poly_of_dims(&self.lattice, |x| self.labels[x].dim() - u)
    }

    /// `U^{⊥ x}` for every element `x`.
    pub fn perp_labels(&self) -> Result<Vec<Subspace>> {
        self.labels.iter().map(|l| self.center.orthogonal_complement_in(l)).collect()
    }

    /// Lattice of `A ∖ {a}` and its embedding into this lattice.
    pub fn deletion(&self, a: usize) -> Result<(ArrangementLattice, Vec<usize>)> {
        let h = self.hyperplane_of_atom(a)?;
        let normals =
            self.arrangement.normals.iter().enumerate().filter(|(i, _)| *i != h).map(|(_, n)| n.clone()).collect();
        let sub = Arrangement::new(self.arrangement.ambient_dim, normals)?.build_lattice()?;
        let embedding = sub
            .labels
            .iter()
            .map(|l| self.element_of(l).ok_or_else(|| Error::InvalidArrangement("deletion label missing".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok((sub, embedding))
    }

    /// The restricted arrangement `{a ∩ b}` inside `a` (in the canonical
    /// coordinates of `a`), with coincident intersections merged, and the
    /// embedding of its lattice onto the interval `L_{>=a}`.
    pub fn restriction(&self, a: usize) -> Result<(ArrangementLattice, Vec<usize>)> {
        let h = self.hyperplane_of_atom(a)?;
        let frame = &self.arrangement.hyperplanes[h];
        let mut seen = std::collections::HashSet::new();
        let mut normals = Vec::new();
        for (i, b) in self.arrangement.hyperplanes.iter().enumerate() {
            if i == h {
                continue;
            }
            let local = frame.intersect(b)?.in_coordinates_of(frame)?;
            if seen.insert(local.clone()) {
                normals.push(hyperplane_normal(&local)?);
            }
        }
        let sub = Arrangement::new(frame.dim(), normals)?.build_lattice()?;
        let embedding = sub
            .labels
            .iter()
            .map(|l| {
                let global = Subspace::from_coordinates_of(l, frame)?;
                self.element_of(&global).ok_or_else(|| Error::InvalidArrangement("restriction label missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((sub, embedding))
    }

    /// Lattice of the essentialised arrangement and the rank-preserving
    /// isomorphism `iso[x]` from this lattice onto it.
    pub fn essentialise(&self) -> Result<(ArrangementLattice, Vec<usize>)> {
        let ess = self.arrangement.essentialise()?.build_lattice()?;
        let w = self.center.orthogonal_complement_in(&Subspace::full(self.ambient_dim()))?;
        let iso = self
            .labels
            .iter()
            .map(|l| {
                let local = l.intersect(&w)?.in_coordinates_of(&w)?;
                ess.element_of(&local).ok_or_else(|| Error::InvalidArrangement("essentialised label missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ess, iso))
    }
}
