//! Scalar abstraction.
//!
//! All numerics are written against [`Real`]; matrix entries are
//! [`Cplx<T>`]. Dense decompositions are delegated to `faer` through the
//! backend methods, implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use faer::{Mat, Side};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::linops::{DenseMatrix, LinalgError};

pub type Cplx<T> = num_complex::Complex<T>;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + 'static
{
    /// Converts an `f64` literal or parameter.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
    fn hermitian_eigenvalues(m: &DenseMatrix<Self>) -> Result<Vec<Self>, LinalgError>;

    /// Eigenvalues (ascending) and unit eigenvectors as columns.
    fn hermitian_eigen(m: &DenseMatrix<Self>)
        -> Result<(Vec<Self>, DenseMatrix<Self>), LinalgError>;

    /// Singular values, descending.
    fn singular_values(m: &DenseMatrix<Self>) -> Result<Vec<Self>, LinalgError>;

    fn matmul(a: &DenseMatrix<Self>, b: &DenseMatrix<Self>) -> DenseMatrix<Self>;

    /// `Q` factor of a thin QR decomposition, with the phases fixed so that
    /// the diagonal of `R` is real and nonnegative.
    fn thin_q(m: &DenseMatrix<Self>) -> DenseMatrix<Self>;
}

fn to_faer<T: Real>(m: &DenseMatrix<T>) -> Mat<Cplx<T>> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: Real>(m: faer::MatRef<'_, Cplx<T>>) -> DenseMatrix<T> {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn hermitian_eigenvalues(m: &DenseMatrix<Self>) -> Result<Vec<Self>, LinalgError> {
                if m.nrows() == 0 {
                    return Ok(Vec::new());
                }
                to_faer(m)
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|e| LinalgError::Decomposition(format!("{e:?}")))
            }

            fn hermitian_eigen(
                m: &DenseMatrix<Self>,
            ) -> Result<(Vec<Self>, DenseMatrix<Self>), LinalgError> {
                if m.nrows() == 0 {
                    return Ok((Vec::new(), DenseMatrix::zeros(0, 0)));
                }
                let evd = to_faer(m)
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|e| LinalgError::Decomposition(format!("{e:?}")))?;
                let values = evd.S().column_vector().iter().map(|z| z.re).collect();
                Ok((values, from_faer(evd.U())))
            }

            fn singular_values(m: &DenseMatrix<Self>) -> Result<Vec<Self>, LinalgError> {
                if m.nrows() == 0 || m.ncols() == 0 {
                    return Ok(Vec::new());
                }
                to_faer(m)
                    .singular_values()
                    .map_err(|e| LinalgError::Decomposition(format!("{e:?}")))
            }

            fn matmul(a: &DenseMatrix<Self>, b: &DenseMatrix<Self>) -> DenseMatrix<Self> {
                assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
                if a.nrows() == 0 || b.ncols() == 0 || a.ncols() == 0 {
                    return DenseMatrix::zeros(a.nrows(), b.ncols());
                }
                let p = to_faer(a) * to_faer(b);
                from_faer(p.as_ref())
            }

            fn thin_q(m: &DenseMatrix<Self>) -> DenseMatrix<Self> {
                let qr = to_faer(m).qr();
                let mut q = from_faer(qr.compute_thin_Q().as_ref());
                let r = qr.thin_R();
                for j in 0..q.ncols() {
                    let d = r[(j, j)];
                    let n = d.norm();
                    if n > 0.0 {
                        let phase = d / n;
                        for i in 0..q.nrows() {
                            q[(i, j)] = q[(i, j)] * phase;
                        }
                    }
                }
                q
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);
