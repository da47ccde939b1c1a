//! Symbolic encoding of the appendix inner-product tables and a brute-force
//! audit of their soundness, completeness and partition structure.
//!
//! Tables 1–2 list the nonzero products `⟨η(k,x), λ_a η(j,y)⟩`; Tables 3–4
//! the products `⟨λ_a η(k,x), η(j,y)⟩` (the `λ_{a⁻¹}` T-matrix). Each table
//! splits `F` into two header rows and twenty boxes.

pub mod audit;
pub mod cases;
pub mod errata;
pub mod layout;
pub mod symbolic;

use thiserror::Error;

use crate::pvv::PvvError;

pub use audit::{audit, conjugation_identity, predicted_products, AuditReport};
pub use layout::{boxes, enumerate_box, BoxId, BoxSpec, Color, TablePair};
pub use symbolic::{s_kn, Factor, Sym, SymParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TablesError {
    #[error("audits need N ≥ 2R+4 (got N={n}, R={r})")]
    WindowTooShort { n: usize, r: usize },
    #[error(transparent)]
    Pvv(#[from] PvvError),
}
