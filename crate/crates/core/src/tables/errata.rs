//! Printed table entries that disagree with brute force, with the value the
//! brute-force T-matrix supports. Each correction is checked across the
//! audit grid in the tests; the audit reports printed and corrected
//! discrepancies separately.

use super::layout::{BoxId, TablePair};
use super::symbolic::sym::*;
use super::symbolic::{Factor, Sym};

#[derive(Debug, Clone, PartialEq)]
pub struct Erratum {
    pub pair: TablePair,
    pub box_id: BoxId,
    /// Index into the box's partner list.
    pub partner: usize,
    /// The partner's printed label, guarding the index.
    pub label: &'static str,
    pub corrected: Sym,
    pub note: &'static str,
}

fn entry(
    pair: TablePair,
    id: u8,
    partner: usize,
    label: &'static str,
    corrected: &[Factor],
    note: &'static str,
) -> Erratum {
    Erratum {
        pair,
        box_id: BoxId::Box(id),
        partner,
        label,
        corrected: of(corrected),
        note,
    }
}

/// Corrections shared by both table pairs, keyed by the Tables 1–2 and
/// Tables 3–4 labels of the same partner.
fn shared(pair: TablePair) -> Vec<Erratum> {
    use Factor::{AbsB2, ConjA, Int, B, S};
    let lam = pair == TablePair::Lambda;
    let pick = |a: &'static str, b: &'static str| if lam { a } else { b };
    let mut out = Vec::new();
    for (id, partner) in [(3, 3), (4, 2)] {
        out.push(entry(
            pair,
            id,
            partner,
            pick("λ_aη(ℓ,y)", "η(N-ℓ,y)"),
            &[SQRT_L, AbsB2],
            "root is √(ℓ/N), not √((N−ℓ)/N)",
        ));
    }
    for (id, partner) in [(5, 3), (6, 2)] {
        out.push(entry(
            pair,
            id,
            partner,
            pick("λ_aη(ℓ-1,α(y))", "η(N-ℓ+1,α(y))"),
            &[SQRT_NL_PLUS1, ConjA, B],
            "root is √((N−ℓ+1)/N), not √((N−ℓ−1)/N)",
        ));
    }
    for id in [9, 10, 12, 13] {
        out.push(entry(
            pair,
            id,
            2,
            pick("λ_aη(N-1,bα(x))", "η(1,b⁻¹α(x))"),
            &[SQRT_N1, SQRT_N1, ConjA, B],
            "factor is (N−1)/N, not √((N−1)/N); box 10 also has the conjugate phase",
        ));
    }
    for id in 15..=20 {
        out.push(entry(
            pair,
            id,
            0,
            pick("λ_aη(k-1,x)", "η(N-k+1,x)"),
            &[Int(2), S],
            "the neighbouring-k product is 2·s(k,N)",
        ));
    }
    out
}

pub fn registry() -> Vec<Erratum> {
    let mut out = shared(TablePair::Lambda);
    out.extend(shared(TablePair::LambdaInverse));
    out.push(Erratum {
        pair: TablePair::LambdaInverse,
        box_id: BoxId::Header(2),
        partner: 2,
        label: "η(0,ba⁻¹)",
        corrected: of(&[Factor::A, Factor::ConjB]),
        note: "phase is A·conj(B) = i/2, as in Table 1",
    });
    out
}

pub fn lookup(errata: &[Erratum], pair: TablePair, box_id: BoxId, partner: usize) -> Option<&Sym> {
    errata
        .iter()
        .find(|e| e.pair == pair && e.box_id == box_id && e.partner == partner)
        .map(|e| &e.corrected)
}
