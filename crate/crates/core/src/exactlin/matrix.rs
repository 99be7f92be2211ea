use std::fmt;
use std::ops::Mul;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use super::subspace::Subspace;

/// Dense row-major matrix of rationals.
///
/// Zero-sized shapes (`0 x n`, `n x 0`) are valid and compose as expected,
/// which matters for stalks of dimension zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed when `rows` is empty.
    ///
    /// Panics if a row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<Rational>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column");
            for (r, v) in col.into_iter().enumerate() {
                m.data[r * cols + c] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Selects a submatrix by row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.data[i * cols.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(a.rows + b.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                m.set(r, c, a.get(r, c).clone());
            }
        }
        for r in 0..b.rows {
            for c in 0..b.cols {
                m.set(a.rows + r, a.cols + c, b.get(r, c).clone());
            }
        }
        m
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(a.rows * b.rows, a.cols * b.cols);
        for ar in 0..a.rows {
            for ac in 0..a.cols {
                let x = a.get(ar, ac);
                if x.is_zero() {
                    continue;
                }
                for br in 0..b.rows {
                    for bc in 0..b.cols {
                        m.set(ar * b.rows + br, ac * b.cols + bc, x * b.get(br, bc));
                    }
                }
            }
        }
        m
    }

    pub fn vstack(a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols, b.cols, "vstack column mismatch");
        let mut data = a.data.clone();
        data.extend(b.data.iter().cloned());
        Matrix { rows: a.rows + b.rows, cols: a.cols, data }
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        bareiss(self).0
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        bareiss(self).1
    }

    /// Column space as a subspace of `Q^rows`.
    pub fn column_space(&self) -> Subspace {
        Subspace::from_rows(self.transpose())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(format_rational).collect()).collect()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Clears denominators row by row. Returns the integer rows and the product
/// of the scale factors used.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows)
        .map(|r| {
            let l = m.row(r).iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            m.row(r).iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    (rows, scale)
}

/// Fraction-free Gaussian elimination. Returns `(rank, determinant)`; the
/// determinant is only meaningful for square input.
fn bareiss(m: &Matrix) -> (usize, Rational) {
    let (mut a, scale) = integer_rows(m);
    let (nr, nc) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0;
    let mut col = 0;
    while rank < nr && col < nc {
        let Some(p) = (rank..nr).find(|&r| !a[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..nr {
            for c in col + 1..nc {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        col += 1;
    }
    let det = if nr == nc && rank == nr {
        let d = if nr == 0 { BigInt::one() } else { a[nr - 1][nc - 1].clone() };
        Rational::new(d * sign, scale)
    } else {
        Rational::zero()
    };
    (rank, det)
}

/// Reduced row echelon form with zero rows dropped, plus the rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let (r, piv) = rref_with_pivots(m);
    (r, piv.len())
}

/// Reduced row echelon form with zero rows dropped, plus its pivot columns.
pub fn rref_with_pivots(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows = m.row_vecs();
    let nc = m.cols;
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..nc {
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(p, lead);
        let inv = rows[lead][col].recip();
        for v in rows[lead].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(lead);
    (Matrix::from_rows(nc, rows), pivots)
}

/// Kernel of `m` as a subspace of `Q^cols`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (r, pivots) = rref_with_pivots(m);
    let nc = m.cols;
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    let vecs: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); nc];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect();
    Subspace::from_rows(Matrix::from_rows(nc, vecs))
}

/// The `j`-th compound matrix: all `j x j` minors, with rows and columns
/// indexed by lexicographically ordered `j`-subsets.
pub fn exterior_power_matrix(m: &Matrix, j: usize) -> Matrix {
    if j == 0 {
        return Matrix::identity(1);
    }
    let row_sets: Vec<Vec<usize>> = (0..m.rows).combinations(j).collect();
    let col_sets: Vec<Vec<usize>> = (0..m.cols).combinations(j).collect();
    let mut out = Matrix::zeros(row_sets.len(), col_sets.len());
    for (i, rs) in row_sets.iter().enumerate() {
        for (k, cs) in col_sets.iter().enumerate() {
            let minor = m.select(rs, cs);
            if !minor.is_zero() {
                out.set(i, k, minor.determinant());
            }
        }
    }
    out
}
