use std::collections::HashMap;

use num_traits::Zero;

use super::{largest_eigenvalue, DenseMatrix, FinVector, LinalgError, MatrixOnBasis};
use crate::scalar::{Cplx, Real};
use crate::words::ReducedWord;

/// A bounded operator on `ℓ²(F_d)` known through its action on `δ_x`.
pub trait WordOperator<T: Real> {
    fn apply_delta(&self, x: &ReducedWord) -> FinVector<T>;

    fn apply(&self, v: &FinVector<T>) -> FinVector<T> {
        let mut out = FinVector::zero();
        for (x, c) in v.iter() {
            out += &self.apply_delta(x).scale(*c);
        }
        out
    }
}

/// `λ_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftTranslation {
    pub g: ReducedWord,
}

impl LeftTranslation {
    pub fn new(g: ReducedWord) -> Self {
        LeftTranslation { g }
    }
}

impl<T: Real> WordOperator<T> for LeftTranslation {
    fn apply_delta(&self, x: &ReducedWord) -> FinVector<T> {
        FinVector::delta(&self.g * x)
    }

    fn apply(&self, v: &FinVector<T>) -> FinVector<T> {
        v.translate(&self.g)
    }
}

/// `v ↦ Σ_i ⟨v, y_i⟩ x_i`, a finite sum of dyads `x_i y_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRankOperator<T: Real> {
    left: Vec<FinVector<T>>,
    right: Vec<FinVector<T>>,
}

/// `G[i][j] = ⟨v_j, v_i⟩`, computed through an inverted word index so that
/// only vectors with overlapping support are paired.
fn gram<T: Real>(vs: &[FinVector<T>]) -> DenseMatrix<T> {
    let mut by_word: HashMap<&ReducedWord, Vec<(usize, Cplx<T>)>> = HashMap::new();
    for (i, v) in vs.iter().enumerate() {
        for (x, c) in v.iter() {
            by_word.entry(x).or_default().push((i, *c));
        }
    }
    let n = vs.len();
    let mut g = DenseMatrix::zeros(n, n);
    // Accumulate in a deterministic order.
    let mut words: Vec<&&ReducedWord> = by_word.keys().collect();
    words.sort();
    for x in words {
        let entries = &by_word[*x];
        for &(i, ci) in entries {
            for &(j, cj) in entries {
                g[(i, j)] = g[(i, j)] + cj * ci.conj();
            }
        }
    }
    g
}

impl<T: Real> FiniteRankOperator<T> {
    pub fn new(left: Vec<FinVector<T>>, right: Vec<FinVector<T>>) -> Result<Self, LinalgError> {
        if left.len() != right.len() {
            return Err(LinalgError::ShapeMismatch {
                expected: (left.len(), 1),
                actual: (right.len(), 1),
            });
        }
        Ok(FiniteRankOperator { left, right })
    }

    /// The orthogonal projection onto the span of an orthonormal family.
    pub fn projection(basis: Vec<FinVector<T>>) -> Self {
        FiniteRankOperator {
            left: basis.clone(),
            right: basis,
        }
    }

    pub fn rank_bound(&self) -> usize {
        self.left.len()
    }

    /// `‖Σ x_i y_i*‖ = ‖X Y*‖`, using `‖XY*‖² = λ_max(G_X^{1/2} G_Y G_X^{1/2})`
    /// with `G_X = X*X`, `G_Y = Y*Y`. The square root is taken on the
    /// numerically nonzero part of the spectrum of `G_X`.
    pub fn norm(&self) -> Result<T, LinalgError> {
        if self.left.is_empty() {
            return Ok(T::zero());
        }
        let gx = gram(&self.left);
        let gy = gram(&self.right);
        let (lam, w) = T::hermitian_eigen(&gx)?;
        let top = lam.last().copied().unwrap_or_else(T::zero);
        let cutoff = top * T::epsilon() * T::of_usize(lam.len()) * T::of(10.0);
        let keep: Vec<usize> = (0..lam.len()).filter(|&k| lam[k] > cutoff).collect();
        if keep.is_empty() {
            return Ok(T::zero());
        }
        let s = DenseMatrix::from_fn(w.nrows(), keep.len(), |i, j| {
            w[(i, keep[j])] * lam[keep[j]].sqrt()
        });
        let inner = &(&s.adjoint() * &gy) * &s;
        // Symmetrise away round-off before the Hermitian solver.
        let inner = DenseMatrix::from_fn(inner.nrows(), inner.ncols(), |i, j| {
            (inner[(i, j)] + inner[(j, i)].conj()) * T::of(0.5)
        });
        Ok(largest_eigenvalue(&inner)?.max(T::zero()).sqrt())
    }
}

impl<T: Real> WordOperator<T> for FiniteRankOperator<T> {
    fn apply_delta(&self, x: &ReducedWord) -> FinVector<T> {
        let mut out = FinVector::zero();
        for (l, r) in self.left.iter().zip(&self.right) {
            let c = r.get(x).conj();
            if !c.is_zero() {
                out += &l.scale(c);
            }
        }
        out
    }
}

/// The compression `P_rows A P_cols` as a matrix, entry `(i, j)` being
/// `⟨A δ_{cols[j]}, δ_{rows[i]}⟩`.
///
/// Fails with [`LinalgError::WindowViolation`] if some `A δ_{cols[j]}` has
/// support outside `rows`: the matrix would then not represent `A` on the
/// column span.
pub fn compress<T: Real, A: WordOperator<T> + ?Sized>(
    op: &A,
    rows: &[ReducedWord],
    cols: &[ReducedWord],
) -> Result<MatrixOnBasis<T, ReducedWord>, LinalgError> {
    let mut index = HashMap::with_capacity(rows.len());
    for (i, x) in rows.iter().enumerate() {
        if index.insert(x, i).is_some() {
            return Err(LinalgError::DuplicateLabel(x.to_string()));
        }
    }
    let mut m = DenseMatrix::zeros(rows.len(), cols.len());
    for (j, y) in cols.iter().enumerate() {
        for (x, c) in op.apply_delta(y).iter() {
            let i = index
                .get(x)
                .ok_or_else(|| LinalgError::WindowViolation { word: x.to_string() })?;
            m[(*i, j)] = *c;
        }
    }
    MatrixOnBasis::new(rows.to_vec(), cols.to_vec(), m)
}

/// [`compress`] with the same basis on both sides.
pub fn compress_square<T: Real, A: WordOperator<T> + ?Sized>(
    op: &A,
    basis: &[ReducedWord],
) -> Result<MatrixOnBasis<T, ReducedWord>, LinalgError> {
    compress(op, basis, basis)
}
