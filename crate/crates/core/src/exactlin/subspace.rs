use std::fmt;

use num_traits::{One, Zero};

use super::matrix::{kernel_basis, rref_with_pivots, Matrix};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A linear subspace of `Q^d` stored as the reduced row echelon form of a
/// basis. The representation is canonical, so equal subspaces compare (and
/// hash) equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(ambient_dim) }
    }

    /// Row space of `m`.
    pub fn from_rows(m: Matrix) -> Self {
        let ambient_dim = m.cols();
        let (basis, _) = rref_with_pivots(&m);
        Subspace { ambient_dim, basis }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        Self::from_rows(Matrix::from_rows(ambient_dim, vectors.to_vec()))
    }

    /// The hyperplane `{v : <normal, v> = 0}`.
    pub fn hyperplane(normal: &[Rational]) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArrangement("zero normal vector".into()));
        }
        Ok(kernel_basis(&Matrix::from_rows(normal.len(), vec![normal.to_vec()])))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    /// Basis rows in reduced row echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| (0..self.ambient_dim).find(|&c| !self.basis.get(r, c).is_zero()).unwrap())
            .collect()
    }

    /// Rows spanning the annihilator `{w : <w, v> = 0 for all v in self}`.
    pub fn annihilator(&self) -> Matrix {
        kernel_basis(&self.basis).basis.clone()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace. For an RREF basis the coordinates are the entries of `v`
    /// at the pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vec<Rational> = self.pivots().iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![Rational::zero(); self.ambient_dim];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, b) in rebuilt.iter_mut().zip(self.basis.row(i)) {
                *x += c * b;
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.dim() <= self.dim()
            && (0..other.dim()).all(|r| self.contains_vector(other.basis.row(r)))
    }

    fn check_dims(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dims(other)?;
        let normals = Matrix::vstack(&self.annihilator(), &other.annihilator());
        Ok(kernel_basis(&normals))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dims(other)?;
        Ok(Subspace::from_rows(Matrix::vstack(&self.basis, &other.basis)))
    }

    /// `{v in b : <v, u> = 0 for all u in self}` under the standard dot
    /// product. Requires `self ⊆ b`.
    pub fn orthogonal_complement_in(&self, b: &Subspace) -> Result<Subspace> {
        self.check_dims(b)?;
        if !b.contains(self) {
            return Err(Error::NotContained);
        }
        b.intersect(&kernel_basis(&self.basis))
    }

    /// Matrix of the inclusion `self ⊆ target` in the canonical bases:
    /// shape `target.dim() x self.dim()`.
    pub fn inclusion_matrix(&self, target: &Subspace) -> Result<Matrix> {
        self.check_dims(target)?;
        let cols: Option<Vec<Vec<Rational>>> =
            (0..self.dim()).map(|r| target.coordinates(self.basis.row(r))).collect();
        let cols = cols.ok_or(Error::NotContained)?;
        Ok(Matrix::from_columns(target.dim(), cols))
    }

    /// Expresses `self ⊆ frame` in the coordinates of `frame`'s canonical
    /// basis, as a subspace of `Q^{frame.dim()}`.
    pub fn in_coordinates_of(&self, frame: &Subspace) -> Result<Subspace> {
        let inc = self.inclusion_matrix(frame)?;
        Ok(inc.column_space())
    }

    /// Inverse of [`Subspace::in_coordinates_of`]: maps a subspace of
    /// `Q^{frame.dim()}` back into the ambient space of `frame`.
    pub fn from_coordinates_of(coords: &Subspace, frame: &Subspace) -> Result<Subspace> {
        if coords.ambient_dim != frame.dim() {
            return Err(Error::DimensionMismatch(coords.ambient_dim, frame.dim()));
        }
        Ok(Subspace::from_rows(&coords.basis * &frame.basis))
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(d={}, basis={:?})", self.ambient_dim, self.basis.to_strings())
    }
}

/// Convenience for tests and presets: the standard basis vector `e_i`.
pub(crate) fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    v[i] = Rational::one();
    v
}
