use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Index, IndexMut, Mul};

use num_traits::Zero;

use super::LinalgError;
use crate::scalar::{Cplx, Real};

/// Column-major complex matrix. Decompositions go through [`Real`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Cplx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Cplx::new(T::one(), T::zero())
            } else {
                Cplx::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from its columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Cplx<T>>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(LinalgError::ShapeMismatch {
                    expected: (rows, 1),
                    actual: (c.len(), 1),
                });
            }
            data.extend_from_slice(c);
        }
        Ok(DenseMatrix {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> &[Cplx<T>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| *z * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "sub shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "add shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect(),
        }
    }

    /// `self* self`.
    pub fn gram(&self) -> Self {
        T::matmul(&self.adjoint(), self)
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for j in 0..self.cols.min(self.rows) {
            for i in j..self.rows.min(self.cols) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `M v`.
    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.cols, "apply shape mismatch");
        let mut out = vec![Cplx::zero(); self.rows];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.column(j)) {
                *o = *o + *m * *vj;
            }
        }
        out
    }

    /// `M* v`.
    pub fn apply_adjoint(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.rows, "apply_adjoint shape mismatch");
        (0..self.cols)
            .map(|j| {
                self.column(j)
                    .iter()
                    .zip(v)
                    .fold(Cplx::zero(), |acc, (m, x)| acc + m.conj() * *x)
            })
            .collect()
    }
}

impl<T: Real> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = Cplx<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<T: Real> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        T::matmul(self, rhs)
    }
}

/// A dense matrix whose rows and columns carry labels (basis elements).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOnBasis<T: Real, L> {
    pub rows: Vec<L>,
    pub cols: Vec<L>,
    pub matrix: DenseMatrix<T>,
}

fn index_of<L: Clone + Eq + Hash + Debug>(labels: &[L]) -> Result<HashMap<L, usize>, LinalgError> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(LinalgError::DuplicateLabel(format!("{l:?}")));
        }
    }
    Ok(map)
}

impl<T: Real, L: Clone + Eq + Hash + Debug> MatrixOnBasis<T, L> {
    pub fn new(rows: Vec<L>, cols: Vec<L>, matrix: DenseMatrix<T>) -> Result<Self, LinalgError> {
        if matrix.shape() != (rows.len(), cols.len()) {
            return Err(LinalgError::ShapeMismatch {
                expected: (rows.len(), cols.len()),
                actual: matrix.shape(),
            });
        }
        index_of(&rows)?;
        index_of(&cols)?;
        Ok(MatrixOnBasis { rows, cols, matrix })
    }

    pub fn row_index(&self, l: &L) -> Option<usize> {
        self.rows.iter().position(|r| r == l)
    }

    pub fn col_index(&self, l: &L) -> Option<usize> {
        self.cols.iter().position(|c| c == l)
    }

    /// Entry by labels; `None` if either label is absent.
    pub fn entry(&self, row: &L, col: &L) -> Option<Cplx<T>> {
        Some(self.matrix[(self.row_index(row)?, self.col_index(col)?)])
    }

    /// Restriction to the given column labels.
    pub fn restrict_columns(&self, keep: &[L]) -> Result<Self, LinalgError> {
        let idx = index_of(&self.cols)?;
        let cols = keep
            .iter()
            .map(|l| {
                idx.get(l)
                    .copied()
                    .ok_or_else(|| LinalgError::WindowViolation { word: format!("{l:?}") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatrixOnBasis {
            rows: self.rows.clone(),
            cols: keep.to_vec(),
            matrix: self.matrix.select_columns(&cols),
        })
    }
}
