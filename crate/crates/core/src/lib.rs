//! Numerical witnesses for quasidiagonality of the reduced free group
//! C*-algebra: free-group words, operators on `ℓ²(F_d)`, twisted window
//! projections and their commutator norms, radial representations and
//! audits of the symbolic inner-product tables.
//!
//! Core routines are generic over [`scalar::Real`]; the aliases below fix
//! the scalar to `f64`.

pub mod linops;
pub mod output;
pub mod lp_reps;
pub mod pvv;
pub mod qdmod;
pub mod scalar;
pub mod tables;
pub mod words;

pub use scalar::{Cplx, Real};
pub use words::{FreeGroup, ReducedWord, WordError};

pub type C64 = Cplx<f64>;
pub type Matrix = linops::DenseMatrix<f64>;
pub type Vector = linops::FinVector<f64>;
