//! Brute-force audit of the tables against the T-matrix.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::cases::{self, AdjacencyCheck, CaseCover, ColorViolation};
use super::errata::{self, Erratum};
use super::layout::{boxes, conjugate_pair, BoxId, BoxSpec, Ctx, TablePair};
use super::TablesError;
use crate::linops::DenseMatrix;
use crate::pvv::{build_eta_basis, s_membership, t_matrix, EtaBasis, IndexPair, PvvParams};
use crate::words::{prefix_member, ReducedWord};
use crate::C64;

/// Agreement required between a prediction and the brute-force entry.
pub const SOUNDNESS_TOL: f64 = 1e-10;
/// Entries above this magnitude must be predicted.
pub const COMPLETENESS_THRESHOLD: f64 = 1e-12;

/// `(re, im)`, for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// Which brute-force matrix the predictions are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `T_g` built directly for `g = a` or `a⁻¹`.
    Direct,
    /// Tables 3–4 read off `T_a` through [`conjugation_identity`].
    Conjugation,
}

/// Which values the predictions carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Values {
    /// As transcribed from the printed tables.
    Printed,
    /// With the registered errata applied.
    Corrected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingEntry {
    pub row: IndexPair,
    pub col: IndexPair,
    pub value: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlap {
    pub row: IndexPair,
    pub boxes: Vec<BoxId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartnerOutsideF {
    pub box_id: BoxId,
    pub partner: &'static str,
    pub row: IndexPair,
    pub target_k: i64,
    pub target_x: ReducedWord,
}

/// All entries of one printed partner value that disagree with brute force.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedDiscrepancy {
    pub table: u8,
    pub box_id: BoxId,
    pub partner: &'static str,
    pub printed: String,
    pub corrected: Option<String>,
    pub occurrences: usize,
    pub max_abs_error: f64,
    pub example_row: IndexPair,
    pub example_col: IndexPair,
    /// Summed prediction and brute-force entry at the example.
    pub example_predicted: ComplexValue,
    pub example_brute: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub table: TablePair,
    /// Largest `|predicted − brute|` with errata applied.
    pub max_abs_discrepancy: f64,
    pub missing_nonzero: Vec<MissingEntry>,
    pub coverage_gaps: Vec<IndexPair>,
    pub case_cover_ok: bool,
    pub adjacency_ok: bool,
    pub route: Route,
    /// Largest `|predicted − brute|` with the values as printed.
    pub max_abs_discrepancy_printed: f64,
    pub printed_discrepancies: Vec<PrintedDiscrepancy>,
    pub overlaps: Vec<Overlap>,
    pub partners_outside_f: Vec<PartnerOutsideF>,
    pub color_violations: Vec<ColorViolation>,
    pub case_cover: CaseCover,
    pub adjacency: AdjacencyCheck,
}

impl AuditReport {
    /// Sound, complete and a partition of `F`.
    pub fn passes(&self) -> bool {
        self.max_abs_discrepancy <= SOUNDNESS_TOL
            && self.missing_nonzero.is_empty()
            && self.coverage_gaps.is_empty()
            && self.overlaps.is_empty()
    }
}

/// The relabeling `W` on both indices: `⟨η(k,x), λ_{a⁻¹}η(j,y)⟩ =
/// ⟨η(N−k, β(x)), λ_a η(N−j, β(y))⟩`, with `N−0` read as `0`.
pub fn conjugation_identity(
    p: &IndexPair,
    q: &IndexPair,
    params: &PvvParams,
) -> (IndexPair, IndexPair) {
    (conjugate_pair(params.n, p), conjugate_pair(params.n, q))
}

fn in_window(x: &ReducedWord, r: usize) -> bool {
    let prefixes = [
        ReducedWord::generator(2),
        ReducedWord::generator(2).inverse(),
        ReducedWord::identity(),
    ];
    x.len() <= r && prefix_member(x, prefixes.iter())
}

/// A partner formula's pair, with `η(N,x) = η(0,x)`; `None` outside `F`.
pub fn resolve_target(params: &PvvParams, k: i64, x: &ReducedWord) -> Option<IndexPair> {
    let n = params.n as i64;
    if !(0..=n).contains(&k) || !in_window(x, params.r) {
        return None;
    }
    Some(IndexPair::new((k % n) as usize, x.clone()))
}

/// One evaluated partner of a row.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedEntry {
    pub col: IndexPair,
    pub partner: usize,
    pub value: C64,
}

fn partner_value(spec: &BoxSpec, index: usize, ctx: &Ctx, values: Values, errata: &[Erratum]) -> C64 {
    let printed = &spec.partners[index].printed;
    let sym = match values {
        Values::Printed => printed,
        Values::Corrected => errata::lookup(errata, spec.pair, spec.id, index).unwrap_or(printed),
    };
    sym.eval(&ctx.sym_params())
}

fn predict(
    spec: &BoxSpec,
    ctx: &Ctx,
    params: &PvvParams,
    values: Values,
    errata: &[Erratum],
) -> (Vec<PredictedEntry>, Vec<(usize, i64, ReducedWord)>) {
    let mut hits = Vec::new();
    let mut outside = Vec::new();
    for (i, partner) in spec.partners.iter().enumerate() {
        let (k, x) = (partner.target)(ctx);
        match resolve_target(params, k, &x) {
            Some(col) => hits.push(PredictedEntry {
                col,
                partner: i,
                value: partner_value(spec, i, ctx, values, errata),
            }),
            None => outside.push((i, k, x)),
        }
    }
    (hits, outside)
}

/// The printed partners of `pair` in `spec`, evaluated; partners falling
/// outside `F` are dropped. Empty when `pair` is not in the box.
pub fn predicted_products(spec: &BoxSpec, pair: &IndexPair, params: &PvvParams) -> Vec<(IndexPair, C64)> {
    spec.matches(params, pair)
        .map(|ctx| {
            predict(spec, &ctx, params, Values::Printed, &[])
                .0
                .into_iter()
                .map(|e| (e.col, e.value))
                .collect()
        })
        .unwrap_or_default()
}

/// Box membership of every row of `F`.
#[derive(Debug, Clone)]
pub struct RowAssignment {
    pub pairs: Vec<IndexPair>,
    /// Matching boxes and their contexts, per row.
    pub matches: Vec<Vec<(usize, Ctx)>>,
}

pub fn assign_rows(specs: &[BoxSpec], params: &PvvParams, pairs: &[IndexPair]) -> RowAssignment {
    let matches = pairs
        .iter()
        .map(|p| {
            specs
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.matches(params, p).map(|c| (i, c)))
                .collect()
        })
        .collect();
    RowAssignment {
        pairs: pairs.to_vec(),
        matches,
    }
}

/// The brute-force T-matrix of a table pair, on `F × F`, by `route`.
pub fn brute_matrix(
    basis: &EtaBasis<f64>,
    pair: TablePair,
    route: Route,
) -> Result<DenseMatrix<f64>, TablesError> {
    match (pair, route) {
        (TablePair::Lambda, _) | (TablePair::LambdaInverse, Route::Direct) => {
            Ok(t_matrix(basis, &pair.generator())?.matrix)
        }
        (TablePair::LambdaInverse, Route::Conjugation) => {
            let ta = t_matrix(basis, &TablePair::Lambda.generator())?;
            let n = basis.params.n;
            let image: Vec<usize> = basis
                .pairs
                .iter()
                .map(|p| {
                    basis
                        .position(&conjugate_pair(n, p))
                        .expect("W maps F onto F")
                })
                .collect();
            let m = basis.len();
            Ok(DenseMatrix::from_fn(m, m, |i, j| ta.matrix[(image[i], image[j])]))
        }
    }
}

/// Audits need the window long enough for every box to be populated.
pub fn check_params(params: &PvvParams) -> Result<(), TablesError> {
    if params.n < 2 * params.r + 4 {
        return Err(TablesError::WindowTooShort {
            n: params.n,
            r: params.r,
        });
    }
    Ok(())
}

/// Audit of one table pair by the direct route.
pub fn audit(params: &PvvParams, pair: TablePair) -> Result<AuditReport, TablesError> {
    audit_via(params, pair, Route::Direct)
}

pub fn audit_via(params: &PvvParams, pair: TablePair, route: Route) -> Result<AuditReport, TablesError> {
    check_params(params)?;
    let basis = build_eta_basis::<f64>(params);
    let brute = brute_matrix(&basis, pair, route)?;
    Ok(audit_against(params, pair, route, &basis, &brute))
}

pub(crate) fn audit_against(
    params: &PvvParams,
    pair: TablePair,
    route: Route,
    basis: &EtaBasis<f64>,
    brute: &DenseMatrix<f64>,
) -> AuditReport {
    let specs = boxes(pair);
    let registry = errata::registry();
    let rows = assign_rows(&specs, params, &basis.pairs);

    let mut coverage_gaps = Vec::new();
    let mut overlaps = Vec::new();
    let mut partners_outside_f = Vec::new();
    let mut missing_nonzero = Vec::new();
    let mut max_corrected = 0.0f64;
    let mut max_printed = 0.0f64;
    let mut findings: BTreeMap<(BoxId, usize), PrintedDiscrepancy> = BTreeMap::new();
    let mut row_box: Vec<Option<usize>> = Vec::with_capacity(basis.len());

    for (i, (row, matched)) in rows.pairs.iter().zip(&rows.matches).enumerate() {
        match matched.len() {
            0 => coverage_gaps.push(row.clone()),
            1 => {}
            _ => overlaps.push(Overlap {
                row: row.clone(),
                boxes: matched.iter().map(|(b, _)| specs[*b].id).collect(),
            }),
        }
        row_box.push(matched.first().map(|(b, _)| *b));
        let Some((b, ctx)) = matched.first() else {
            // Unassigned rows still count toward completeness.
            for j in 0..basis.len() {
                let v = brute[(i, j)];
                if v.norm() > COMPLETENESS_THRESHOLD {
                    missing_nonzero.push(MissingEntry {
                        row: row.clone(),
                        col: basis.pairs[j].clone(),
                        value: v.into(),
                    });
                }
            }
            continue;
        };
        let spec = &specs[*b];
        let (printed, outside) = predict(spec, ctx, params, Values::Printed, &registry);
        let (corrected, _) = predict(spec, ctx, params, Values::Corrected, &registry);
        for (p, k, x) in outside {
            partners_outside_f.push(PartnerOutsideF {
                box_id: spec.id,
                partner: spec.partners[p].label,
                row: row.clone(),
                target_k: k,
                target_x: x,
            });
        }

        let sum_by_col = |entries: &[PredictedEntry]| {
            let mut by: HashMap<IndexPair, (C64, Vec<usize>)> = HashMap::new();
            for e in entries {
                let slot = by.entry(e.col.clone()).or_insert((C64::new(0.0, 0.0), Vec::new()));
                slot.0 += e.value;
                slot.1.push(e.partner);
            }
            by
        };
        let printed_by = sum_by_col(&printed);
        let corrected_by = sum_by_col(&corrected);

        for (col, (value, _)) in &corrected_by {
            let j = basis.position(col).expect("resolved targets lie in F");
            max_corrected = max_corrected.max((value - brute[(i, j)]).norm());
        }
        for (col, (value, partners)) in &printed_by {
            let j = basis.position(col).expect("resolved targets lie in F");
            let err = (value - brute[(i, j)]).norm();
            max_printed = max_printed.max(err);
            if err <= SOUNDNESS_TOL {
                continue;
            }
            for &p in partners {
                let entry = findings.entry((spec.id, p)).or_insert_with(|| PrintedDiscrepancy {
                    table: spec.table_number(),
                    box_id: spec.id,
                    partner: spec.partners[p].label,
                    printed: spec.partners[p].printed.to_string(),
                    corrected: errata::lookup(&registry, pair, spec.id, p).map(|s| s.to_string()),
                    occurrences: 0,
                    max_abs_error: 0.0,
                    example_row: row.clone(),
                    example_col: col.clone(),
                    example_predicted: (*value).into(),
                    example_brute: brute[(i, j)].into(),
                });
                entry.occurrences += 1;
                entry.max_abs_error = entry.max_abs_error.max(err);
            }
        }
        for j in 0..basis.len() {
            let v = brute[(i, j)];
            if v.norm() > COMPLETENESS_THRESHOLD && !corrected_by.contains_key(&basis.pairs[j]) {
                missing_nonzero.push(MissingEntry {
                    row: row.clone(),
                    col: basis.pairs[j].clone(),
                    value: v.into(),
                });
            }
        }
    }

    let color_violations = cases::color_check(params, &specs, &rows);
    let case_cover = cases::case_cover(params, pair);
    let adjacency = cases::adjacency_check(&specs, &row_box, brute, params);
    AuditReport {
        n: params.n,
        r: params.r,
        table: pair,
        max_abs_discrepancy: max_corrected,
        missing_nonzero,
        coverage_gaps,
        case_cover_ok: case_cover.ok(),
        adjacency_ok: adjacency.ok(),
        route,
        max_abs_discrepancy_printed: max_printed,
        printed_discrepancies: findings.into_values().collect(),
        overlaps,
        partners_outside_f,
        color_violations,
        case_cover,
        adjacency,
    }
}

/// Entrywise comparison of the printed Tables 3–4 with Tables 1–2 composed
/// with `W`: for each row, the predictions of `λ_a η(N−k,·)`-rows against the
/// relabeled Tables 1–2 predictions. Returns the largest difference.
pub fn conjugation_consistency(params: &PvvParams, values: Values) -> f64 {
    let registry = errata::registry();
    let f = crate::pvv::build_f(params);
    let t12 = boxes(TablePair::Lambda);
    let t34 = boxes(TablePair::LambdaInverse);
    let rows12 = assign_rows(&t12, params, &f);
    let rows34 = assign_rows(&t34, params, &f);
    let index: HashMap<&IndexPair, usize> = f.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let collect = |specs: &[BoxSpec], matched: &[(usize, Ctx)]| -> HashMap<IndexPair, C64> {
        let mut out: HashMap<IndexPair, C64> = HashMap::new();
        if let Some((b, ctx)) = matched.first() {
            for e in predict(&specs[*b], ctx, params, values, &registry).0 {
                *out.entry(e.col).or_insert(C64::new(0.0, 0.0)) += e.value;
            }
        }
        out
    };

    let mut worst = 0.0f64;
    for (i, row) in f.iter().enumerate() {
        let lhs = collect(&t34, &rows34.matches[i]);
        let image = conjugate_pair(params.n, row);
        let rhs: HashMap<IndexPair, C64> = collect(&t12, &rows12.matches[index[&image]])
            .into_iter()
            .map(|(col, v)| (conjugate_pair(params.n, &col), v))
            .collect();
        for (col, v) in &lhs {
            let w = rhs.get(col).copied().unwrap_or(C64::new(0.0, 0.0));
            worst = worst.max((v - w).norm());
        }
        for (col, w) in &rhs {
            if !lhs.contains_key(col) {
                worst = worst.max(w.norm());
            }
        }
    }
    worst
}

/// `S`-membership of a resolved partner; exposed for the color check.
pub(crate) fn in_s(params: &PvvParams, p: &IndexPair) -> bool {
    s_membership(params, p)
}
