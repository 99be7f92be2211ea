//! Sparse column-major rational matrices and an exact rank routine.
//!
//! Boundary matrices of order complexes have a handful of nonzeros per
//! column but can have tens of thousands of columns, so rank is computed by
//! sparse elimination with a Markowitz-style pivot choice (fewest entries in
//! the pivot row, then the shortest column, preferring unit pivots).

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::Rational;

/// Sorted `(index, value)` pairs with no explicit zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    /// Builds a matrix from columns. Entries are sorted, duplicates summed
    /// and zeros dropped.
    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        let ncols = cols.len();
        let cols = cols.into_iter().map(normalize).collect::<Vec<_>>();
        debug_assert!(cols.iter().flatten().all(|(r, _)| *r < nrows));
        SparseMatrix { nrows, ncols, cols }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let cols = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter(|&r| !m.get(r, c).is_zero())
                    .map(|r| (r, m.get(r, c).clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows: m.rows(), ncols: m.cols(), cols }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.nrows, self.ncols);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self * v` for a sparse column vector `v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rational)> = Vec::new();
        for (c, x) in v {
            for (r, y) in &self.cols[*c] {
                acc.push((*r, x * y));
            }
        }
        normalize(acc)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "sparse product shape mismatch");
        let cols = rhs.cols.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { nrows: self.nrows, ncols: rhs.ncols, cols }
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        sparse_rank(self.cols.clone(), self.nrows)
    }

    /// Triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }
}

fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a - f * b` for sorted sparse vectors.
fn axpy(a: &SparseVec, f: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(v: &SparseVec, row: usize) -> Option<&Rational> {
    v.binary_search_by_key(&row, |(r, _)| *r).ok().map(|k| &v[k].1)
}

fn pivot_cost(v: &SparseVec, row: usize) -> (usize, bool) {
    let unit = entry(v, row).is_some_and(|x| x.abs().is_one());
    (v.len(), !unit)
}

fn sparse_rank(mut cols: Vec<SparseVec>, nrows: usize) -> usize {
    let mut alive: Vec<bool> = cols.iter().map(|c| !c.is_empty()).collect();
    let mut row_occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nrows];
    for (c, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_occ[*r].insert(c);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..nrows).filter(|&r| !row_occ[r].is_empty()).map(|r| Reverse((row_occ[r].len(), r))).collect();
    let mut rank = 0;
    while let Some(Reverse((count, row))) = heap.pop() {
        if count == 0 || row_occ[row].len() != count {
            continue;
        }
        let pivot_col = *row_occ[row]
            .iter()
            .min_by_key(|&&c| (pivot_cost(&cols[c], row), c))
            .expect("occupied row");
        let pivot = std::mem::take(&mut cols[pivot_col]);
        alive[pivot_col] = false;
        for (r, _) in &pivot {
            row_occ[*r].remove(&pivot_col);
        }
        let pv = entry(&pivot, row).expect("pivot entry").clone();
        let others: Vec<usize> = row_occ[row].iter().copied().collect();
        for c in others {
            let f = entry(&cols[c], row).expect("occupancy in sync") / &pv;
            let old = std::mem::take(&mut cols[c]);
            let new = axpy(&old, &f, &pivot);
            for (r, _) in &old {
                if entry(&new, *r).is_none() {
                    row_occ[*r].remove(&c);
                }
            }
            for (r, _) in &new {
                row_occ[*r].insert(c);
            }
            if new.is_empty() {
                alive[c] = false;
            }
            cols[c] = new;
        }
        rank += 1;
        // only rows of the pivot column can have changed occupancy
        for (r, _) in &pivot {
            if !row_occ[*r].is_empty() {
                heap.push(Reverse((row_occ[*r].len(), *r)));
            }
        }
    }
    debug_assert!(alive.iter().zip(&cols).all(|(a, c)| *a || c.is_empty()));
    rank
}
