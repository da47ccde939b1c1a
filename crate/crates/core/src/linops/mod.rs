//! Finitely supported vectors on `ℓ²(F_d)`, dense compressions over word
//! bases, and extremal singular-value / eigenvalue routines.

mod dense;
mod operators;
mod spectral;
mod vector;

use thiserror::Error;

pub use dense::{DenseMatrix, MatrixOnBasis};
pub use operators::{compress, compress_square, FiniteRankOperator, LeftTranslation, WordOperator};
pub use spectral::{
    largest_eigenvalue, min_eig_psd, operator_norm, operator_norm_dense, operator_norm_power,
    PowerIterationConfig, DENSE_LIMIT, HERMITIAN_TOL,
};
pub use vector::{inner, lambda_apply, FinVector, PRUNE_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dense decomposition failed: {0}")]
    Decomposition(String),
    #[error("power iteration did not converge after {iterations} iterations (estimate {estimate}, last change {change})")]
    NonConvergence {
        iterations: usize,
        estimate: f64,
        change: f64,
    },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("validity window violated: word {word} is needed but missing from the basis")]
    WindowViolation { word: String },
    #[error("basis labels are not pairwise distinct (duplicate {0})")]
    DuplicateLabel(String),
    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
}
