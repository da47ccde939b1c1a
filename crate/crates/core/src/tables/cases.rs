//! Structural claims around the tables: the red/blue/black colour tags, the
//! eight case families covering `F∖S`, and the printed box cross-references.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::audit::{in_s, resolve_target, RowAssignment, COMPLETENESS_THRESHOLD};
use super::layout::{boxes, conjugate_pair, BoxId, BoxSpec, Color, TablePair};
use crate::linops::{min_eig_psd, DenseMatrix};
use crate::pvv::{build_f, t_matrix, window_words, EtaBasis, IndexPair, PvvError, PvvParams};
use crate::words::{swap_ab, Letter, ReducedWord};

// ---------------------------------------------------------------------------
// colours

/// A tagged partner whose `S`-membership contradicts its colour.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorViolation {
    pub box_id: BoxId,
    pub partner: &'static str,
    pub color: Color,
    pub row: IndexPair,
    pub col: IndexPair,
    pub col_in_s: bool,
}

/// Red partners lie in `S`, black ones outside; blue ones lie in `S`
/// exactly when the row is not at the box's extremal length.
pub fn color_check(params: &PvvParams, specs: &[BoxSpec], rows: &RowAssignment) -> Vec<ColorViolation> {
    let mut out = Vec::new();
    for (row, matched) in rows.pairs.iter().zip(&rows.matches) {
        let Some((b, ctx)) = matched.first() else { continue };
        let spec = &specs[*b];
        for partner in &spec.partners {
            let Some(color) = partner.color else { continue };
            let (k, x) = (partner.target)(ctx);
            let Some(col) = resolve_target(params, k, &x) else { continue };
            let col_in_s = in_s(params, &col);
            let expected = match color {
                Color::Red => true,
                Color::Black => false,
                Color::Blue => !spec.extremal.is_some_and(|f| f(ctx)),
            };
            if col_in_s != expected {
                out.push(ColorViolation {
                    box_id: spec.id,
                    partner: partner.label,
                    color,
                    row: row.clone(),
                    col,
                    col_in_s,
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// case families

fn letter(generator: u16, inverse: bool) -> Letter {
    Letter::new(generator, inverse).expect("valid letter")
}

fn starts_with_letter(x: &ReducedWord, l: Letter) -> bool {
    x.first() == Some(l)
}

/// `W_{a,a⁻¹,e}`.
fn in_w_a(y: &ReducedWord) -> bool {
    y.is_identity() || y.first().is_some_and(|l| l.generator() == 1)
}

/// `W_{b,b⁻¹,e}`.
fn in_w_b(y: &ReducedWord) -> bool {
    y.is_identity() || y.first().is_some_and(|l| l.generator() == 2)
}

/// Sub-shapes of `x ∈ W_{b⁻¹}` with `|x| = R`, the rows of box 14 singled
/// out by the case analysis. Returns the case label.
pub fn box14_subcase(x: &ReducedWord, r: usize) -> Option<&'static str> {
    let (a, a_inv, b_inv) = (letter(1, false), letter(1, true), letter(2, true));
    if x.len() != r || !starts_with_letter(x, b_inv) {
        return None;
    }
    let rest = x.tail();
    if starts_with_letter(&rest, a) {
        let y = rest.tail();
        if starts_with_letter(&y, letter(2, false)) {
            return Some("1: x=b⁻¹ay, y∈W_b");
        }
        if starts_with_letter(&y, b_inv) {
            return Some("2: x=b⁻¹ay, y∈W_{b⁻¹}");
        }
        if starts_with_letter(&y, a) {
            return Some("3: x=b⁻¹y, y∈W_{aa}");
        }
        return None;
    }
    // x = b⁻¹ a⁻ᵏ y with y ∈ W_{b,b⁻¹,e}, or x = b^{-(k+1)} y with y ∈ W_{a,a⁻¹,e}.
    let (m, y) = rest.split_run(a_inv);
    if m >= 1 && in_w_b(&y) {
        return Some("4a: x=b⁻¹a⁻ᵏy, y∈W_{b,b⁻¹,e}");
    }
    let (m, y) = rest.split_run(b_inv);
    if m >= 1 && in_w_a(&y) {
        return Some("4b: x=b^{-(k+1)}y, y∈W_{a,a⁻¹,e}");
    }
    None
}

/// One case family: the columns `λ_aη(j,y)` the case groups together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseFamily {
    pub case: u8,
    pub columns: Vec<IndexPair>,
}

fn pw(g: u16, e: i64) -> ReducedWord {
    ReducedWord::power(g, e)
}

fn cat(parts: &[&ReducedWord]) -> ReducedWord {
    parts.iter().fold(ReducedWord::identity(), |acc, w| &acc * *w)
}

fn dedup(v: Vec<(i64, ReducedWord)>, params: &PvvParams) -> Vec<IndexPair> {
    let set: BTreeSet<IndexPair> = v
        .into_iter()
        .filter_map(|(k, x)| resolve_target(params, k, &x).or(Some(IndexPair::new(usize::MAX, x))))
        .collect();
    set.into_iter().collect()
}

/// The eight case families for `λ_a`, as column sets.
pub fn case_families(params: &PvvParams) -> Vec<CaseFamily> {
    let (n, r) = (params.n as i64, params.r);
    let words = window_words(r);
    let specs = boxes(TablePair::Lambda);
    let rows_of = |id: u8| -> Vec<crate::tables::layout::Ctx> {
        let spec = specs.iter().find(|s| s.id == BoxId::Box(id)).expect("box exists");
        build_f(params)
            .iter()
            .filter_map(|p| spec.matches(params, p))
            .collect()
    };
    let mut out = Vec::new();

    // Cases 1–3: extremal rows of boxes 1, 3 and 5.
    for (case, id) in [(1u8, 1u8), (2, 3), (3, 5)] {
        let mut cols = Vec::new();
        for c in rows_of(id) {
            if c.x.len() + 1 == r {
                cols.push((0, cat(&[&pw(2, -1), &swap_ab(&c.x)])));
                cols.push((n - 1, c.x.clone()));
            }
        }
        out.push(CaseFamily {
            case,
            columns: dedup(cols, params),
        });
    }

    let with_len = |len: usize| -> Vec<ReducedWord> {
        crate::words::FreeGroup::new(2)
            .expect("rank 2")
            .sphere(len)
            .into_iter()
            .filter(in_w_a)
            .collect()
    };

    // Case 4: x = b^{ℓ−N} y with |x| = R−1.
    let mut cols = Vec::new();
    for m in 1..r as i64 {
        for y in with_len(r - 1 - m as usize) {
            cols.push((0, cat(&[&pw(2, -1), &pw(1, -m), &swap_ab(&y)])));
            cols.push((n - 1, cat(&[&pw(2, -m), &y])));
            cols.push((0, cat(&[&pw(2, -m - 1), &y])));
            cols.push((n - m - 1, swap_ab(&y)));
        }
    }
    out.push(CaseFamily {
        case: 4,
        columns: dedup(cols, params),
    });

    // Case 5: x = b^{ℓ−N} y with |x| = R.
    let mut cols = Vec::new();
    for m in 1..=r as i64 {
        for y in with_len(r - m as usize) {
            cols.push((n - 1, cat(&[&pw(2, -m), &y])));
            cols.push((n - m - 1, swap_ab(&y)));
        }
    }
    out.push(CaseFamily {
        case: 5,
        columns: dedup(cols, params),
    });

    // Case 6: k = 1, x = b^ℓ y with |x| = R.
    let mut cols = Vec::new();
    for l in 1..=r as i64 {
        for y in with_len(r - l as usize) {
            cols.push((0, cat(&[&pw(2, l), &y])));
            cols.push((l, swap_ab(&y)));
        }
    }
    out.push(CaseFamily {
        case: 6,
        columns: dedup(cols, params),
    });

    // Case 7: λ_aη(N−1, x), x ∈ W_b, |x| = R.
    let b = letter(2, false);
    let cols = words
        .iter()
        .filter(|x| x.len() == r && starts_with_letter(x, b))
        .map(|x| (n - 1, x.clone()))
        .collect();
    out.push(CaseFamily {
        case: 7,
        columns: dedup(cols, params),
    });

    // Case 8: λ_aη(k−1, x) for the rows of box 20.
    let cols = rows_of(20)
        .into_iter()
        .map(|c| (c.k as i64 - 1, c.x))
        .collect();
    out.push(CaseFamily {
        case: 8,
        columns: dedup(cols, params),
    });
    out
}

/// `λ_min(T_a* T_a)` restricted to each case family's columns: the
/// `Q_{F_i}` sub-projections as column views of the T-matrix.
pub fn case_lambda_mins(basis: &EtaBasis<f64>) -> Result<Vec<(u8, f64)>, PvvError> {
    let t = t_matrix(basis, &ReducedWord::generator(1))?;
    case_families(&basis.params)
        .into_iter()
        .map(|f| {
            let keep: Vec<IndexPair> = f.columns.into_iter().filter(|p| p.k != usize::MAX).collect();
            if keep.is_empty() {
                return Ok((f.case, 1.0));
            }
            let sub = t.restrict_columns(&keep).map_err(PvvError::from)?;
            Ok((f.case, min_eig_psd(&sub.matrix.gram())?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseCover {
    /// Pairs of `F∖S` in no case.
    pub missing: Vec<IndexPair>,
    /// Pairs of `F∖S` in more than one case, with the cases.
    pub repeated: Vec<(IndexPair, Vec<u8>)>,
    /// Case columns in `S` or outside `F` (`k = usize::MAX` marks the latter).
    pub stray: Vec<(u8, IndexPair)>,
    pub sizes: Vec<(u8, usize)>,
}

impl CaseCover {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.repeated.is_empty() && self.stray.is_empty()
    }
}

/// Whether the case families cover `F∖S` exactly once. For Tables 3–4 the
/// families are carried over by `W`.
pub fn case_cover(params: &PvvParams, pair: TablePair) -> CaseCover {
    let mut families = case_families(params);
    if pair == TablePair::LambdaInverse {
        for f in &mut families {
            f.columns = f
                .columns
                .iter()
                .map(|p| if p.k == usize::MAX { p.clone() } else { conjugate_pair(params.n, p) })
                .collect();
        }
    }
    let mut hits: BTreeMap<IndexPair, Vec<u8>> = BTreeMap::new();
    let mut stray = Vec::new();
    for f in &families {
        for p in &f.columns {
            if p.k == usize::MAX || in_s(params, p) {
                stray.push((f.case, p.clone()));
            } else {
                hits.entry(p.clone()).or_default().push(f.case);
            }
        }
    }
    let missing = build_f(params)
        .into_iter()
        .filter(|p| !in_s(params, p) && !hits.contains_key(p))
        .collect();
    let repeated = hits.into_iter().filter(|(_, c)| c.len() > 1).collect();
    CaseCover {
        missing,
        repeated,
        stray,
        sizes: families.iter().map(|f| (f.case, f.columns.len())).collect(),
    }
}

// ---------------------------------------------------------------------------
// cross-references

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjacencyCheck {
    /// Symmetric closure of the printed numbers, box 14 and boxes without
    /// rows excluded.
    pub printed: Vec<(u8, u8)>,
    /// Box pairs sharing a column with nonzero entries from both, over
    /// columns outside `S`, box 14 excluded.
    pub observed: Vec<(u8, u8)>,
    pub printed_not_observed: Vec<(u8, u8)>,
    pub observed_not_printed: Vec<(u8, u8)>,
}

impl AdjacencyCheck {
    pub fn ok(&self) -> bool {
        self.printed_not_observed.is_empty() && self.observed_not_printed.is_empty()
    }
}

/// The box printed as "every box".
const WILDCARD: u8 = 14;

fn ordered(i: u8, j: u8) -> (u8, u8) {
    (i.min(j), i.max(j))
}

/// Printed cross-references (from Tables 1–2; boxes of Tables 3–4 are
/// their `W`-images) against the column-sharing relation of the T-matrix.
pub fn adjacency_check(
    specs: &[BoxSpec],
    row_box: &[Option<usize>],
    brute: &DenseMatrix<f64>,
    params: &PvvParams,
) -> AdjacencyCheck {
    let mut printed = BTreeSet::new();
    for spec in boxes(TablePair::Lambda) {
        let (BoxId::Box(i), Some(adj)) = (spec.id, &spec.adjacent) else { continue };
        for &j in adj {
            if i != WILDCARD && j != WILDCARD {
                printed.insert(ordered(i, j));
            }
        }
    }

    // Printed pairs involving a box with no rows at these parameters are
    // not observable.
    let populated: BTreeSet<u8> = row_box
        .iter()
        .flatten()
        .filter_map(|&b| match specs[b].id {
            BoxId::Box(n) => Some(n),
            BoxId::Header(_) => None,
        })
        .collect();
    printed.retain(|(i, j)| populated.contains(i) && populated.contains(j));

    let f = build_f(params);
    let mut observed = BTreeSet::new();
    for (j, col) in f.iter().enumerate() {
        if in_s(params, col) {
            continue;
        }
        let touching: BTreeSet<u8> = (0..f.len())
            .filter(|&i| brute[(i, j)].norm() > COMPLETENESS_THRESHOLD)
            .filter_map(|i| row_box[i])
            .filter_map(|b| match specs[b].id {
                BoxId::Box(n) if n != WILDCARD => Some(n),
                _ => None,
            })
            .collect();
        let t: Vec<u8> = touching.into_iter().collect();
        for (a, &x) in t.iter().enumerate() {
            for &y in &t[a + 1..] {
                observed.insert(ordered(x, y));
            }
        }
    }
    AdjacencyCheck {
        printed_not_observed: printed.difference(&observed).copied().collect(),
        observed_not_printed: observed.difference(&printed).copied().collect(),
        printed: printed.into_iter().collect(),
        observed: observed.into_iter().collect(),
    }
}
