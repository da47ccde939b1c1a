use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DenseMatrix, LinalgError};
use crate::scalar::{Cplx, Real};

/// Largest dimension handled by a dense decomposition in [`operator_norm`].
pub const DENSE_LIMIT: usize = 1500;

/// Tolerated asymmetry, relative to the largest entry, of a Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIterationConfig {
    /// Relative change in the estimate below which iteration stops.
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        PowerIterationConfig {
            tol: 1e-12,
            max_iterations: 100_000,
            seed: 0x5eed,
        }
    }
}

fn check_hermitian<T: Real>(m: &DenseMatrix<T>) -> Result<(), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let scale = m.max_abs().max(T::one());
    let asym = m.max_asymmetry();
    if asym > T::of(HERMITIAN_TOL) * scale {
        return Err(LinalgError::NotHermitian {
            asymmetry: asym.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Smallest eigenvalue of a positive semidefinite Hermitian matrix.
///
/// Always uses a full decomposition: the extremal end that matters here is
/// the bottom of the spectrum, where iterative methods converge slowly.
/// Tiny negative round-off is clamped to zero.
pub fn min_eig_psd<T: Real>(m: &DenseMatrix<T>) -> Result<T, LinalgError> {
    check_hermitian(m)?;
    let ev = T::hermitian_eigenvalues(m)?;
    Ok(ev.first().copied().unwrap_or_else(T::zero).max(T::zero()))
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn largest_eigenvalue<T: Real>(m: &DenseMatrix<T>) -> Result<T, LinalgError> {
    check_hermitian(m)?;
    let ev = T::hermitian_eigenvalues(m)?;
    Ok(ev.last().copied().unwrap_or_else(T::zero))
}

/// `‖M‖` from a full singular value decomposition.
pub fn operator_norm_dense<T: Real>(m: &DenseMatrix<T>) -> Result<T, LinalgError> {
    Ok(T::singular_values(m)?.first().copied().unwrap_or_else(T::zero))
}

fn vnorm<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `‖M‖` by power iteration on `M*M`, given `M` and `M*` as closures on
/// vectors of length `dim` (the domain dimension).
pub fn operator_norm_power<T: Real>(
    dim: usize,
    apply: impl Fn(&[Cplx<T>]) -> Vec<Cplx<T>>,
    apply_adjoint: impl Fn(&[Cplx<T>]) -> Vec<Cplx<T>>,
    config: &PowerIterationConfig,
) -> Result<T, LinalgError> {
    if dim == 0 {
        return Ok(T::zero());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut v: Vec<Cplx<T>> = (0..dim)
        .map(|_| Cplx::new(T::of(rng.random::<f64>() - 0.5), T::of(rng.random::<f64>() - 0.5)))
        .collect();
    let n0 = vnorm(&v);
    v.iter_mut().for_each(|z| *z = *z / n0);

    let tol = T::of(config.tol);
    let mut estimate = T::zero();
    let mut change = T::infinity();
    for _ in 0..config.max_iterations {
        let w = apply_adjoint(&apply(&v));
        let nw = vnorm(&w);
        if nw.is_zero() {
            return Ok(T::zero());
        }
        // Rayleigh quotient of M*M at the unit vector v.
        let next = nw.sqrt();
        change = (next - estimate).abs();
        estimate = next;
        v = w.into_iter().map(|z| z / nw).collect();
        if change <= tol * estimate {
            let mv = apply(&v);
            return Ok(vnorm(&mv).max(estimate));
        }
    }
    Err(LinalgError::NonConvergence {
        iterations: config.max_iterations,
        estimate: estimate.to_f64().unwrap_or(f64::NAN),
        change: change.to_f64().unwrap_or(f64::NAN),
    })
}

/// `‖M‖`: dense SVD up to [`DENSE_LIMIT`], power iteration beyond.
pub fn operator_norm<T: Real>(m: &DenseMatrix<T>) -> Result<T, LinalgError> {
    if m.nrows().min(m.ncols()) <= DENSE_LIMIT {
        operator_norm_dense(m)
    } else {
        operator_norm_power(
            m.ncols(),
            |v| m.apply(v),
            |v| m.apply_adjoint(v),
            &PowerIterationConfig::default(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    fn diag(d: &[f64]) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = diag(&[3.0, 0.25, 1.0]);
        assert!((min_eig_psd(&m).unwrap() - 0.25).abs() < 1e-14);
        assert!((largest_eigenvalue(&m).unwrap() - 3.0).abs() < 1e-14);
        assert!((operator_norm(&m).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = diag(&[1.0, 1.0]);
        m[(0, 1)] = c(0.0, 1.0);
        assert!(matches!(min_eig_psd(&m), Err(LinalgError::NotHermitian { .. })));
        let r = DenseMatrix::<f64>::zeros(2, 3);
        assert!(matches!(largest_eigenvalue(&r), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn power_iteration_agrees_with_svd() {
        let m = DenseMatrix::from_fn(7, 5, |i, j| {
            c(((i * 3 + j * 7) % 11) as f64 / 11.0 - 0.4, ((i + 2 * j) % 5) as f64 / 5.0)
        });
        let dense = operator_norm_dense(&m).unwrap();
        let power = operator_norm_power(
            5,
            |v| m.apply(v),
            |v| m.apply_adjoint(v),
            &PowerIterationConfig::default(),
        )
        .unwrap();
        assert!((dense - power).abs() < 1e-9, "{dense} vs {power}");
    }

    #[test]
    fn singular_values_of_rotation_block() {
        // [[0, 2], [1, 0]] has singular values 2 and 1.
        let m = DenseMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(2.0, 0.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        });
        assert!((operator_norm_dense(&m).unwrap() - 2.0).abs() < 1e-14);
        assert!((min_eig_psd(&m.gram()).unwrap() - 1.0).abs() < 1e-13);
    }
}
