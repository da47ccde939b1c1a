//! The twisted window construction on `F_2`.
//!
//! For a window length `N` and radius `R`, the index set is
//! `F = {0..N-1} × (B_R ∩ W_{b,b⁻¹,e})`. Each pair `(k, x)` carries the
//! window vector
//!
//! ```text
//! η′(k,x) = √(k/N) δ_{a^{k-N} x} + √((N-k)/N) δ_{a^k x}
//! ```
//!
//! and its twist `η(k,x) = V η′(k,x)` with `V δ_x = A δ_x + B δ_{α(x)}`,
//! `A = (1+i)/2`, `B = (1-i)/2`. The `η(k,x)` are orthonormal; `Q` is the
//! projection onto their span and `P` the projection onto the span of the
//! untwisted `η′`.
//!
//! Commutator norms are computed two ways: exactly, from the commutator as a
//! finite-rank operator, and through the T-matrix
//! `T_g[(k,x),(j,y)] = ⟨η(k,x), λ_g η(j,y)⟩` via
//! `‖[λ_g, Q]‖² = max_{h ∈ {g, g⁻¹}} (1 − λ_min(T_h* T_h))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linops::{
    compress_square, min_eig_psd, operator_norm_dense, DenseMatrix, FinVector, FiniteRankOperator,
    LinalgError, MatrixOnBasis, DENSE_LIMIT,
};
use crate::scalar::{Cplx, Real};
use crate::words::{prefix_member, swap_ab, ReducedWord};

/// Additive slack on every inequality checked against floating point.
pub const INEQUALITY_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PvvError {
    #[error("window length N must be at least 2 (got {0})")]
    WindowTooShort(usize),
    #[error("radius R must be at least 1 (got {0})")]
    RadiusTooSmall(usize),
    #[error("{0} is not a generator or inverse generator of F_2")]
    NotAGenerator(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PvvParams {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R")]
    pub r: usize,
}

impl PvvParams {
    pub fn new(n: usize, r: usize) -> Result<Self, PvvError> {
        if n < 2 {
            return Err(PvvError::WindowTooShort(n));
        }
        if r < 1 {
            return Err(PvvError::RadiusTooSmall(r));
        }
        Ok(PvvParams { n, r })
    }

    /// Whether `R·4^R ≤ N^{1/4}`, decided exactly as `(R·4^R)^4 ≤ N`.
    pub fn regime_ok(&self) -> bool {
        let lhs = u32::try_from(self.r)
            .ok()
            .and_then(|r| 4u128.checked_pow(r))
            .and_then(|p| p.checked_mul(self.r as u128))
            .and_then(|v| v.checked_pow(4));
        lhs.is_some_and(|v| v <= self.n as u128)
    }
}

/// An element `(k, x)` of `F`. Ordered by `k`, then by word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPair {
    pub k: usize,
    pub x: ReducedWord,
}

impl IndexPair {
    pub fn new(k: usize, x: ReducedWord) -> Self {
        IndexPair { k, x }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.x)
    }
}

fn b_prefixes() -> [ReducedWord; 3] {
    [
        ReducedWord::generator(2),
        ReducedWord::generator(2).inverse(),
        ReducedWord::identity(),
    ]
}

/// `B_R ∩ W_{b,b⁻¹,e}` in word order.
pub fn window_words(r: usize) -> Vec<ReducedWord> {
    let prefixes = b_prefixes();
    crate::words::FreeGroup::new(2)
        .expect("rank 2 is valid")
        .ball(r)
        .into_iter()
        .filter(|x| prefix_member(x, prefixes.iter()))
        .collect()
}

/// `F`, ordered by `k` then word.
pub fn build_f(params: &PvvParams) -> Vec<IndexPair> {
    let words = window_words(params.r);
    (0..params.n)
        .flat_map(|k| words.iter().map(move |x| IndexPair::new(k, x.clone())))
        .collect()
}

fn real<T: Real>(x: T) -> Cplx<T> {
    Cplx::new(x, T::zero())
}

/// `A = (1+i)/2`.
pub fn coef_a<T: Real>() -> Cplx<T> {
    Cplx::new(T::of(0.5), T::of(0.5))
}

/// `B = (1-i)/2`.
pub fn coef_b<T: Real>() -> Cplx<T> {
    Cplx::new(T::of(0.5), T::of(-0.5))
}

/// `η′(k,x)`.
pub fn eta_prime<T: Real>(k: usize, x: &ReducedWord, n: usize) -> FinVector<T> {
    let nn = T::of_usize(n);
    let shifted = &ReducedWord::power(1, k as i64 - n as i64) * x;
    let direct = &ReducedWord::power(1, k as i64) * x;
    FinVector::from_entries([
        (shifted, real((T::of_usize(k) / nn).sqrt())),
        (direct, real((T::of_usize(n - k) / nn).sqrt())),
    ])
}

/// `V`, extended linearly from `δ_x ↦ A δ_x + B δ_{α(x)}`.
pub fn apply_v<T: Real>(v: &FinVector<T>) -> FinVector<T> {
    let (a, b) = (coef_a::<T>(), coef_b::<T>());
    let mut out = FinVector::zero();
    for (x, c) in v.iter() {
        out.add_at(x.clone(), *c * a);
        out.add_at(swap_ab(x), *c * b);
    }
    out
}

/// `η(k,x) = V η′(k,x)`.
pub fn eta<T: Real>(k: usize, x: &ReducedWord, n: usize) -> FinVector<T> {
    apply_v(&eta_prime(k, x, n))
}

/// The orthonormal family `{η(k,x) : (k,x) ∈ F}` spanning the range of `Q`.
#[derive(Debug, Clone)]
pub struct EtaBasis<T: Real> {
    pub params: PvvParams,
    pub pairs: Vec<IndexPair>,
    pub vectors: Vec<FinVector<T>>,
    index: HashMap<IndexPair, usize>,
}

impl<T: Real> EtaBasis<T> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn position(&self, p: &IndexPair) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vector(&self, p: &IndexPair) -> Option<&FinVector<T>> {
        self.position(p).map(|i| &self.vectors[i])
    }

    /// `⟨η_i, η_j⟩` over the whole family.
    pub fn gram(&self) -> DenseMatrix<T> {
        coefficient_matrix(&self.vectors, &self.vectors)
    }

    /// The projection `Q` as a sum of dyads.
    pub fn projection(&self) -> FiniteRankOperator<T> {
        FiniteRankOperator::projection(self.vectors.clone())
    }
}

pub fn build_eta_basis<T: Real>(params: &PvvParams) -> EtaBasis<T> {
    let pairs = build_f(params);
    let vectors = pairs.iter().map(|p| eta(p.k, &p.x, params.n)).collect();
    let index = pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    EtaBasis {
        params: *params,
        pairs,
        vectors,
        index,
    }
}

/// The family `{η′(k,x) : (k,x) ∈ F}` spanning the range of `P`.
pub fn eta_prime_family<T: Real>(params: &PvvParams) -> Vec<FinVector<T>> {
    build_f(params)
        .iter()
        .map(|p| eta_prime(p.k, &p.x, params.n))
        .collect()
}

/// `M[i][j] = ⟨rows_i, cols_j⟩`, paired through a word index.
fn coefficient_matrix<T: Real>(rows: &[FinVector<T>], cols: &[FinVector<T>]) -> DenseMatrix<T> {
    let mut by_word: HashMap<&ReducedWord, Vec<(usize, Cplx<T>)>> = HashMap::new();
    for (i, v) in rows.iter().enumerate() {
        for (x, c) in v.iter() {
            by_word.entry(x).or_default().push((i, *c));
        }
    }
    let mut m = DenseMatrix::zeros(rows.len(), cols.len());
    for (j, v) in cols.iter().enumerate() {
        for (x, c) in v.iter() {
            if let Some(hits) = by_word.get(x) {
                for &(i, d) in hits {
                    m[(i, j)] = m[(i, j)] + d * c.conj();
                }
            }
        }
    }
    m
}

fn check_generator(g: &ReducedWord) -> Result<(), PvvError> {
    if g.len() == 1 && g.max_generator() <= 2 {
        Ok(())
    } else {
        Err(PvvError::NotAGenerator(g.to_string()))
    }
}

/// `T_g[(k,x),(j,y)] = ⟨η(k,x), λ_g η(j,y)⟩`, by brute force over supports.
pub fn t_matrix<T: Real>(
    basis: &EtaBasis<T>,
    g: &ReducedWord,
) -> Result<MatrixOnBasis<T, IndexPair>, PvvError> {
    check_generator(g)?;
    let moved: Vec<FinVector<T>> = basis.vectors.iter().map(|v| v.translate(g)).collect();
    let m = coefficient_matrix(&basis.vectors, &moved);
    Ok(MatrixOnBasis::new(basis.pairs.clone(), basis.pairs.clone(), m)?)
}

/// `λ_min(T* T)` over the columns selected by `keep`.
fn restricted_lambda_min<T: Real>(t: &DenseMatrix<T>, keep: &[usize]) -> Result<T, PvvError> {
    if keep.is_empty() {
        return Ok(T::one());
    }
    let sub = t.select_columns(keep);
    Ok(min_eig_psd(&sub.gram())?)
}

/// `[λ_g, E]` for the projection `E` onto an orthonormal family, as dyads:
/// `Σ (λ_g v_i) v_i* − Σ v_i (λ_{g⁻¹} v_i)*`.
pub fn commutator_operator<T: Real>(
    family: &[FinVector<T>],
    g: &ReducedWord,
) -> FiniteRankOperator<T> {
    let ginv = g.inverse();
    let mut left = Vec::with_capacity(2 * family.len());
    let mut right = Vec::with_capacity(2 * family.len());
    for v in family {
        left.push(v.translate(g));
        right.push(v.clone());
    }
    for v in family {
        left.push(v.clone());
        right.push(-&v.translate(&ginv));
    }
    FiniteRankOperator::new(left, right).expect("equal lengths")
}

/// Words touched by `[λ_g, E]`: the family's supports and their images under
/// `λ_g` and `λ_{g⁻¹}`. The commutator vanishes on the complement.
pub fn commutator_window<T: Real>(family: &[FinVector<T>], g: &ReducedWord) -> Vec<ReducedWord> {
    let ginv = g.inverse();
    let mut words = BTreeSet::new();
    for v in family {
        for x in v.support() {
            words.insert(g * x);
            words.insert(&ginv * x);
            words.insert(x.clone());
        }
    }
    words.into_iter().collect()
}

/// How the exact commutator norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactMethod {
    /// Dense SVD of the compression to the full support window.
    DenseWindow,
    /// Eigenvalues of the dyad Gram product; exact for any window size.
    DyadGram,
}

/// `‖[λ_g, E]‖` exactly. Dense on windows up to [`DENSE_LIMIT`] words, dyad
/// Gram algebra beyond.
pub fn exact_commutator_norm<T: Real>(
    family: &[FinVector<T>],
    g: &ReducedWord,
) -> Result<(T, ExactMethod), PvvError> {
    let op = commutator_operator(family, g);
    let window = commutator_window(family, g);
    if window.len() <= DENSE_LIMIT {
        let m = compress_square(&op, &window)?;
        Ok((operator_norm_dense(&m.matrix)?, ExactMethod::DenseWindow))
    } else {
        Ok((op.norm()?, ExactMethod::DyadGram))
    }
}

/// `‖[P, λ_a]‖` for the untwisted window projection.
pub fn commutator_norm_p<T: Real>(params: &PvvParams) -> Result<T, PvvError> {
    let family = eta_prime_family::<T>(params);
    Ok(exact_commutator_norm(&family, &ReducedWord::generator(1))?.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorNorm<T: Real> {
    /// Exact norm of the commutator operator.
    pub exact: T,
    pub exact_method: ExactMethod,
    /// `max_{h ∈ {g,g⁻¹}} √(1 − λ_min(T_h* T_h))`.
    pub via_t_matrix: T,
    /// `λ_min(T_h* T_h)` for `h = g` and `h = g⁻¹`.
    pub lambda_min: [T; 2],
}

impl<T: Real> CommutatorNorm<T> {
    pub fn discrepancy(&self) -> T {
        (self.exact - self.via_t_matrix).abs()
    }
}

/// `√(1 − λ_min(T_h* T_h))` for a single `h`, with the `λ_min` used.
pub fn commutator_norm_from_t<T: Real>(
    basis: &EtaBasis<T>,
    h: &ReducedWord,
) -> Result<(T, T), PvvError> {
    let t = t_matrix(basis, h)?;
    let lam = min_eig_psd(&t.matrix.gram())?;
    Ok(((T::one() - lam).max(T::zero()).sqrt(), lam))
}

/// `‖[λ_g, Q]‖` for `g ∈ {a, b}` along both computation paths.
pub fn commutator_norm_q<T: Real>(
    basis: &EtaBasis<T>,
    g: &ReducedWord,
) -> Result<CommutatorNorm<T>, PvvError> {
    check_generator(g)?;
    let (exact, (forward, backward)) = rayon::join(
        || exact_commutator_norm(&basis.vectors, g),
        || {
            rayon::join(
                || commutator_norm_from_t(basis, g),
                || commutator_norm_from_t(basis, &g.inverse()),
            )
        },
    );
    let (exact, exact_method) = exact?;
    let ((n1, l1), (n2, l2)) = (forward?, backward?);
    Ok(CommutatorNorm {
        exact,
        exact_method,
        via_t_matrix: n1.max(n2),
        lambda_min: [l1, l2],
    })
}

/// `S = {(k,x) ∈ F : k+|x| ≤ R−1 or N−k+|x| ≤ R−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSet {
    pub members: BTreeSet<IndexPair>,
}

impl SSet {
    pub fn new(params: &PvvParams) -> Self {
        let members = build_f(params)
            .into_iter()
            .filter(|p| s_membership(params, p))
            .collect();
        SSet { members }
    }

    pub fn contains(&self, p: &IndexPair) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn s_membership(params: &PvvParams, p: &IndexPair) -> bool {
    let lim = params.r - 1;
    p.k + p.x.len() <= lim || params.n - p.k + p.x.len() <= lim
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoredTableCheck<T: Real> {
    /// `⟨Qλ_a η(k,x), λ_a η(k,x)⟩` for each `(k,x) ∈ S`.
    pub per_pair: Vec<(IndexPair, T)>,
    pub min_per_pair: T,
    /// `(N−R)/N`.
    pub per_pair_bound: T,
    /// `λ_min(T_a* T_a)` over the columns in `S`.
    pub lambda_min_s: T,
    /// `1 − N^{−1/4}`.
    pub restricted_bound: T,
}

impl<T: Real> ColoredTableCheck<T> {
    pub fn per_pair_ok(&self) -> bool {
        self.min_per_pair >= self.per_pair_bound - T::of(INEQUALITY_SLACK)
    }

    pub fn restricted_ok(&self) -> bool {
        self.lambda_min_s >= self.restricted_bound - T::of(INEQUALITY_SLACK)
    }
}

fn columns_where<T: Real>(basis: &EtaBasis<T>, pred: impl Fn(&IndexPair) -> bool) -> Vec<usize> {
    (0..basis.len()).filter(|&i| pred(&basis.pairs[i])).collect()
}

/// Near-invariance of `Q` on `λ_a η(k,x)` for `(k,x) ∈ S`.
pub fn coloredtable_check<T: Real>(
    basis: &EtaBasis<T>,
    s: &SSet,
) -> Result<ColoredTableCheck<T>, PvvError> {
    let t = t_matrix(basis, &ReducedWord::generator(1))?.matrix;
    let cols = columns_where(basis, |p| s.contains(p));
    let per_pair: Vec<(IndexPair, T)> = cols
        .iter()
        .map(|&j| {
            let v: T = t.column(j).iter().map(|z| z.norm_sqr()).sum();
            (basis.pairs[j].clone(), v)
        })
        .collect();
    let min_per_pair = per_pair
        .iter()
        .map(|(_, v)| *v)
        .fold(T::infinity(), |a, b| a.min(b));
    let n = T::of_usize(basis.params.n);
    Ok(ColoredTableCheck {
        per_pair,
        min_per_pair,
        per_pair_bound: (n - T::of_usize(basis.params.r)) / n,
        lambda_min_s: restricted_lambda_min(&t, &cols)?,
        restricted_bound: T::one() - n.powf(T::of(-0.25)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimCheck<T: Real> {
    /// `λ_min(T_a* T_a)` over the columns in `F∖S`.
    pub lambda_min: T,
    /// `(1 − N^{−1/9})/4`.
    pub bound: T,
}

impl<T: Real> ClaimCheck<T> {
    pub fn holds(&self) -> bool {
        self.lambda_min > self.bound
    }
}

/// Lower bound for `⟨Qξ, ξ⟩` on the span of `λ_a η(k,x)`, `(k,x) ∉ S`.
pub fn claim_check<T: Real>(basis: &EtaBasis<T>, s: &SSet) -> Result<ClaimCheck<T>, PvvError> {
    let t = t_matrix(basis, &ReducedWord::generator(1))?.matrix;
    let cols = columns_where(basis, |p| !s.contains(p));
    Ok(ClaimCheck {
        lambda_min: restricted_lambda_min(&t, &cols)?,
        bound: claim_bound(basis.params.n),
    })
}

/// `(1 − N^{−1/9})/4`.
pub fn claim_bound<T: Real>(n: usize) -> T {
    (T::one() - T::of_usize(n).powf(T::of(-1.0 / 9.0))) / T::of(4.0)
}

/// Machine-readable summary of one `(N, R)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvvRecord {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub regime_ok: bool,
    pub norm_comm_a: f64,
    pub norm_comm_b: f64,
    pub lambda_min_full: f64,
    #[serde(rename = "lambda_min_S")]
    pub lambda_min_s: f64,
    #[serde(rename = "lambda_min_F_minus_S")]
    pub lambda_min_f_minus_s: f64,
    pub paper_bound_sqrt3_2: f64,
    pub paper_claim_bound: f64,
    /// Largest disagreement between the exact and T-matrix paths.
    pub path_discrepancy: f64,
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Builds the basis and runs every norm and eigenvalue check for `(N, R)`.
pub fn pvv_record<T: Real>(params: &PvvParams) -> Result<PvvRecord, PvvError> {
    let basis = build_eta_basis::<T>(params);
    let s = SSet::new(params);
    let (ca, cb) = rayon::join(
        || commutator_norm_q(&basis, &ReducedWord::generator(1)),
        || commutator_norm_q(&basis, &ReducedWord::generator(2)),
    );
    let (ca, cb) = (ca?, cb?);
    let colored = coloredtable_check(&basis, &s)?;
    let claim = claim_check(&basis, &s)?;
    Ok(PvvRecord {
        n: params.n,
        r: params.r,
        regime_ok: params.regime_ok(),
        norm_comm_a: f64_of(ca.exact),
        norm_comm_b: f64_of(cb.exact),
        lambda_min_full: f64_of(ca.lambda_min[0]),
        lambda_min_s: f64_of(colored.lambda_min_s),
        lambda_min_f_minus_s: f64_of(claim.lambda_min),
        paper_bound_sqrt3_2: 3f64.sqrt() / 2.0,
        paper_claim_bound: claim_bound(params.n),
        path_discrepancy: f64_of(ca.discrepancy().max(cb.discrepancy())),
    })
}

/// [`pvv_record`] over a parameter grid; independent runs execute in
/// parallel and results follow the grid order.
pub fn pvv_sweep<T: Real>(grid: &[PvvParams]) -> Result<Vec<PvvRecord>, PvvError> {
    grid.par_iter().map(pvv_record::<T>).collect()
}
