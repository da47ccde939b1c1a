//! Radial representations of `F_d`: the family `π_z` acting on finitely
//! supported vectors, Haagerup's functions `r^{|t|}`, their `ℓ^p` norms, and
//! the closed-form bounds on the modulus of quasidiagonality and on
//! completely bounded distances.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linops::{
    compress, operator_norm_dense, DenseMatrix, FinVector, LinalgError, MatrixOnBasis,
    WordOperator,
};
use crate::scalar::{Cplx, Real};
use crate::words::{FreeGroup, Letter, ReducedWord, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("z must lie in [0, 1] (got {0})")]
    ZOutOfRange(f64),
    #[error("radial base r must lie in (0, 1) (got {0})")]
    BaseOutOfRange(f64),
    #[error("exponent must satisfy {constraint} (got {value})")]
    Exponent { constraint: &'static str, value: String },
    #[error("need p < q (got p = {p}, q = {q})")]
    NotIncreasing { p: String, q: String },
    #[error("word {word} has length {len}, beyond the window radius {window}")]
    WindowExceeded { word: String, len: usize, window: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

// ---------------------------------------------------------------------------
// π_z

/// Parameters of `π_z` on `ℓ²(F_d)`, with the radius up to which words may
/// be fed to [`matrix_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsParams<T: Real> {
    pub z: T,
    pub group: FreeGroup,
    pub window: usize,
}

impl<T: Real> PsParams<T> {
    pub fn new(z: T, d: u16, window: usize) -> Result<Self, LpError> {
        if !(z >= T::zero() && z <= T::one()) {
            return Err(LpError::ZOutOfRange(z.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(PsParams {
            z,
            group: FreeGroup::new(d)?,
            window,
        })
    }

    fn c(&self) -> T {
        (T::one() - self.z * self.z).max(T::zero()).sqrt()
    }
}

fn re<T: Real>(x: T) -> Cplx<T> {
    Cplx::new(x, T::zero())
}

/// `π_z(ℓ)δ_x` for a single letter; inverse letters act by the adjoint.
///
/// For a generator `a` the action differs from `λ_a` only on
/// `span{δ_e, δ_{a⁻¹}}`, which is rotated onto `span{δ_a, δ_e}`.
pub fn pi_z_delta<T: Real>(params: &PsParams<T>, letter: Letter, x: &ReducedWord) -> FinVector<T> {
    let (z, c) = (params.z, params.c());
    let g = ReducedWord::from_letters([letter]);
    let e = ReducedWord::identity();
    let special = if x.is_identity() {
        Some(true)
    } else if *x == g.inverse() {
        Some(false)
    } else {
        None
    };
    match (letter.is_inverse(), special) {
        (false, Some(true)) => FinVector::from_entries([(g, re(c)), (e, re(z))]),
        (false, Some(false)) => FinVector::from_entries([(g, re(-z)), (e, re(c))]),
        (true, Some(true)) => FinVector::from_entries([(e, re(z)), (g, re(c))]),
        (true, Some(false)) => FinVector::from_entries([(e, re(c)), (g, re(-z))]),
        (_, None) => FinVector::delta(&g * x),
    }
}

/// `π_z(ℓ)` for one letter, as an operator on finitely supported vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiZ<T: Real> {
    pub params: PsParams<T>,
    pub letter: Letter,
}

impl<T: Real> WordOperator<T> for PiZ<T> {
    fn apply_delta(&self, x: &ReducedWord) -> FinVector<T> {
        pi_z_delta(&self.params, self.letter, x)
    }
}

/// `π_z(a_i^{±1}) v`.
pub fn pi_z_apply<T: Real>(params: &PsParams<T>, letter: Letter, v: &FinVector<T>) -> FinVector<T> {
    PiZ {
        params: *params,
        letter,
    }
    .apply(v)
}

/// `π_z(t) v`, composing letter actions right to left.
pub fn pi_z_word<T: Real>(params: &PsParams<T>, t: &ReducedWord, v: &FinVector<T>) -> FinVector<T> {
    t.letters()
        .iter()
        .rev()
        .fold(v.clone(), |acc, l| pi_z_apply(params, *l, &acc))
}

/// `⟨π_z(t)δ_e, δ_e⟩`, which equals `z^{|t|}`.
pub fn matrix_coefficient<T: Real>(params: &PsParams<T>, t: &ReducedWord) -> Result<Cplx<T>, LpError> {
    if t.len() > params.window {
        return Err(LpError::WindowExceeded {
            word: t.to_string(),
            len: t.len(),
            window: params.window,
        });
    }
    if !params.group.contains(t) {
        return Err(WordError::NotInRank(params.group.rank()).into());
    }
    let v = pi_z_word(params, t, &FinVector::delta(ReducedWord::identity()));
    Ok(v.get(&ReducedWord::identity()))
}

/// `‖π_z(a_i) − π_1(a_i)‖`, from the 2×2 block on `span{δ_e, δ_{a_i}}`
/// where the difference lives.
pub fn generator_gap<T: Real>(z: T) -> T {
    let c = (T::one() - z * z).max(T::zero()).sqrt();
    let block = DenseMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => re(z - T::one()),
        (1, 1) => re(T::one() - z),
        _ => re(c),
    });
    operator_norm_dense(&block).expect("2x2 SVD")
}

/// The closed form `√(2−2z)`.
pub fn generator_gap_closed<T: Real>(z: T) -> T {
    (T::of(2.0) - T::of(2.0) * z).max(T::zero()).sqrt()
}

/// `Σ_i c_i π_z(a_i)` compressed from `ℓ²(B_R)` into `ℓ²(B_{R+1})`, which
/// contains every image.
pub fn generator_combination<T: Real>(
    params: &PsParams<T>,
    coefficients: &[Cplx<T>],
    radius: usize,
) -> Result<MatrixOnBasis<T, ReducedWord>, LpError> {
    let rows = params.group.ball(radius + 1);
    let cols = params.group.ball(radius);
    let mut total: Option<MatrixOnBasis<T, ReducedWord>> = None;
    for (i, c) in coefficients.iter().enumerate() {
        let letter = Letter::new(i as u16 + 1, false)?;
        let m = compress(&PiZ { params: *params, letter }, &rows, &cols)?;
        let scaled = m.matrix.scale(*c);
        total = Some(match total {
            None => MatrixOnBasis::new(rows.clone(), cols.clone(), scaled)?,
            Some(t) => MatrixOnBasis::new(rows.clone(), cols.clone(), t.matrix.add(&scaled))?,
        });
    }
    Ok(total.unwrap_or(MatrixOnBasis::new(
        rows.clone(),
        cols.clone(),
        DenseMatrix::zeros(rows.len(), cols.len()),
    )?))
}

/// One sample of the level-one inequality `‖π_1(x)‖ ≤ (1 + d√(2−2z))‖π_z(x)‖`
/// for `x = Σ c_i π_z(a_i)`, both sides compressed to `ℓ²(B_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelOneSample {
    pub norm_pi_1: f64,
    pub norm_pi_z: f64,
    pub bound: f64,
}

impl LevelOneSample {
    pub fn holds(&self) -> bool {
        self.norm_pi_1 <= self.bound * self.norm_pi_z + 1e-10
    }
}

/// Random level-one samples. With `R ≥ 2` the compressed inequality is a
/// genuine consequence of the operator one: the differences `π_1(a_i) −
/// π_z(a_i)` live on `B_1`, and each `|c_i|` is a matrix entry of
/// `π_z(x)` far from the identity.
pub fn level_one_samples(
    z: f64,
    d: u16,
    radius: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<LevelOneSample>, LpError> {
    let pz = PsParams::new(z, d, radius)?;
    let p1 = PsParams::new(1.0, d, radius)?;
    let bound = 1.0 + d as f64 * generator_gap_closed(z);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let c: Vec<Cplx<f64>> = (0..d)
                .map(|_| Cplx::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let nz = operator_norm_dense(&generator_combination(&pz, &c, radius)?.matrix)?;
            let n1 = operator_norm_dense(&generator_combination(&p1, &c, radius)?.matrix)?;
            Ok(LevelOneSample {
                norm_pi_1: n1,
                norm_pi_z: nz,
                bound,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// radial functions

/// `t ↦ r^{|t|}` on `F_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFunction<T: Real> {
    pub base: T,
    pub group: FreeGroup,
}

impl<T: Real> RadialFunction<T> {
    pub fn new(base: T, d: u16) -> Result<Self, LpError> {
        if !(base > T::zero() && base < T::one()) {
            return Err(LpError::BaseOutOfRange(base.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(RadialFunction {
            base,
            group: FreeGroup::new(d)?,
        })
    }

    pub fn value(&self, t: &ReducedWord) -> T {
        self.base.powi(t.len() as i32)
    }
}

/// `[r^{|s⁻¹t|}]_{s,t ∈ B_R}`.
pub fn haagerup_gram<T: Real>(r: T, radius: usize, d: u16) -> Result<MatrixOnBasis<T, ReducedWord>, LpError> {
    let phi = RadialFunction::new(r, d)?;
    let ball = phi.group.ball(radius);
    let m = DenseMatrix::from_fn(ball.len(), ball.len(), |i, j| {
        re(phi.value(&(&ball[i].inverse() * &ball[j])))
    });
    Ok(MatrixOnBasis::new(ball.clone(), ball, m)?)
}

/// Smallest eigenvalue of [`haagerup_gram`], without clamping at zero.
pub fn haagerup_min_eigenvalue<T: Real>(r: T, radius: usize, d: u16) -> Result<T, LpError> {
    let g = haagerup_gram(r, radius, d)?;
    let ev = T::hermitian_eigenvalues(&g.matrix)?;
    Ok(ev.first().copied().unwrap_or_else(T::one))
}

/// Smallest Gram eigenvalues may dip below zero by this much.
pub const PSD_TOL: f64 = 1e-10;

/// Positive-definiteness evidence for one `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaagerupCheck {
    pub d: u16,
    #[serde(rename = "R")]
    pub radius: usize,
    pub r: f64,
    pub size: usize,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

/// [`haagerup_min_eigenvalue`] over a grid of bases, in grid order.
pub fn haagerup_check(rs: &[f64], radius: usize, d: u16) -> Result<Vec<HaagerupCheck>, LpError> {
    let size = FreeGroup::new(d)?.ball(radius).len();
    rs.par_iter()
        .map(|&r| {
            let min_eigenvalue = haagerup_min_eigenvalue(r, radius, d)?;
            Ok(HaagerupCheck {
                d,
                radius,
                r,
                size,
                min_eigenvalue,
                psd: min_eigenvalue >= -PSD_TOL,
            })
        })
        .collect()
}

/// `‖z^{|·|}‖_p`, or divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum LpNorm {
    Finite(f64),
    Divergent,
}

impl LpNorm {
    pub fn is_finite(&self) -> bool {
        matches!(self, LpNorm::Finite(_))
    }
}

/// `(1 + 2d z^p / (1 − (2d−1) z^p))^{1/p}` when `(2d−1) z^p < 1`.
pub fn lp_radial_norm(z: f64, p: f64, d: u16) -> LpNorm {
    let (d, zp) = (d as f64, z.powf(p));
    let ratio = (2.0 * d - 1.0) * zp;
    if ratio >= 1.0 {
        return LpNorm::Divergent;
    }
    LpNorm::Finite((1.0 + 2.0 * d * zp / (1.0 - ratio)).powf(1.0 / p))
}

/// `(Σ_{|x| ≤ R} z^{p|x|})^{1/p}` using sphere sizes `2d(2d−1)^{n−1}`.
pub fn lp_radial_partial_norm(z: f64, p: f64, d: u16, radius: usize) -> f64 {
    let (d, zp) = (d as f64, z.powf(p));
    let mut total = 1.0;
    let mut sphere = 2.0 * d;
    let mut term = zp;
    for _ in 0..radius {
        total += sphere * term;
        sphere *= 2.0 * d - 1.0;
        term *= zp;
    }
    total.powf(1.0 / p)
}

/// The same partial sum over an enumerated ball.
pub fn lp_radial_ball_sum(z: f64, p: f64, d: u16, radius: usize) -> Result<f64, LpError> {
    let ball = FreeGroup::new(d)?.ball(radius);
    Ok(ball
        .iter()
        .map(|x| z.powf(p * x.len() as f64))
        .sum::<f64>()
        .powf(1.0 / p))
}

// ---------------------------------------------------------------------------
// bound functions

/// An exponent in `[1, ∞]`, with `∞` explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // Larger exponent ⇔ smaller reciprocal.
        other.reciprocal().partial_cmp(&self.reciprocal())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = LpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|p| p.is_finite())
                .map(Exponent::Finite)
                .ok_or(LpError::Exponent {
                    constraint: "a number or inf",
                    value: s.to_string(),
                }),
        }
    }
}

fn check_p(p: Exponent) -> Result<(), LpError> {
    match p {
        Exponent::Finite(v) if !(v >= 2.0) => Err(LpError::Exponent {
            constraint: "p ≥ 2",
            value: p.to_string(),
        }),
        _ => Ok(()),
    }
}

/// `2 ≤ p < q ≤ ∞` and the rank `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub p: Exponent,
    pub q: Exponent,
    pub d: u16,
}

impl BoundParams {
    pub fn new(p: Exponent, q: Exponent, d: u16) -> Result<Self, LpError> {
        check_p(p)?;
        FreeGroup::new(d)?;
        if !(p < q) {
            return Err(LpError::NotIncreasing {
                p: p.to_string(),
                q: q.to_string(),
            });
        }
        Ok(BoundParams { p, q, d })
    }

    /// `r = pq/(q−p)`, with `r = p` at `q = ∞`.
    pub fn conjugate_exponent(&self) -> Exponent {
        let inv = self.p.reciprocal() - self.q.reciprocal();
        Exponent::Finite(1.0 / inv)
    }
}

/// `√(2 − 2(2d−1)^{−1/p})`; zero at `p = ∞`.
pub fn qd_upper_bound(p: Exponent, d: u16) -> Result<f64, LpError> {
    check_p(p)?;
    FreeGroup::new(d)?;
    let z = (2.0 * d as f64 - 1.0).powf(-p.reciprocal());
    Ok(generator_gap_closed(z))
}

/// `1 + d√(2(1 − (2d−1)^{(p−q)/(pq)}))`; at `q = ∞` the exponent is `−1/p`.
pub fn cb_upper_bound(params: &BoundParams) -> f64 {
    let exponent = params.q.reciprocal() - params.p.reciprocal();
    let z = (2.0 * params.d as f64 - 1.0).powf(exponent);
    1.0 + params.d as f64 * generator_gap_closed(z)
}

/// One line of a bound table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub d: u16,
    pub p: Exponent,
    pub q: Exponent,
    pub qd_upper: f64,
    pub cb_upper: f64,
}

/// Rows for every `(p, q)` with `p < q`, ordered by `p` then `q`.
pub fn bound_table(d: u16, ps: &[Exponent], qs: &[Exponent]) -> Result<Vec<BoundRow>, LpError> {
    let mut rows = Vec::new();
    for &p in ps {
        let qd = qd_upper_bound(p, d)?;
        for &q in qs {
            if p < q {
                let params = BoundParams::new(p, q, d)?;
                rows.push(BoundRow {
                    d,
                    p,
                    q,
                    qd_upper: qd,
                    cb_upper: cb_upper_bound(&params),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn identity_image_follows_the_rule() {
        let p = PsParams::new(0.6f64, 2, 3).unwrap();
        let a = Letter::new(1, false).unwrap();
        let v = pi_z_delta(&p, a, &ReducedWord::identity());
        assert!((v.get(&w("a")).re - 0.8).abs() < 1e-15);
        assert!((v.get(&ReducedWord::identity()).re - 0.6).abs() < 1e-15);
        let u = pi_z_delta(&p, a, &w("A"));
        assert!((u.get(&w("a")).re + 0.6).abs() < 1e-15);
        assert!((u.get(&ReducedWord::identity()).re - 0.8).abs() < 1e-15);
        assert_eq!(pi_z_delta(&p, a, &w("b")), FinVector::delta(w("ab")));
    }

    #[test]
    fn inverse_letter_is_adjoint() {
        let p = PsParams::new(0.3f64, 2, 3).unwrap();
        let ball = FreeGroup::new(2).unwrap().ball(2);
        for l in FreeGroup::new(2).unwrap().letters() {
            for x in &ball {
                for y in &ball {
                    let lhs = pi_z_delta(&p, l, x).inner(&FinVector::delta(y.clone()));
                    let rhs = FinVector::delta(x.clone()).inner(&pi_z_delta(&p, l.inv(), y));
                    assert!((lhs - rhs).norm() < 1e-15, "{l:?} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn bound_values() {
        let qd = qd_upper_bound(Exponent::Finite(2.0), 2).unwrap();
        assert!((qd - 0.9194016867619662).abs() < 1e-12, "{qd}");
        let cb = cb_upper_bound(&BoundParams::new(Exponent::Finite(2.0), Exponent::Infinity, 2).unwrap());
        assert!((cb - 2.838803373523932).abs() < 1e-12, "{cb}");
        assert_eq!(qd_upper_bound(Exponent::Infinity, 2).unwrap(), 0.0);
        assert!(BoundParams::new(Exponent::Finite(3.0), Exponent::Finite(3.0), 2).is_err());
        assert!(qd_upper_bound(Exponent::Finite(1.5), 2).is_err());
    }

    #[test]
    fn exponent_parsing_and_order() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("4".parse::<Exponent>().unwrap(), Exponent::Finite(4.0));
        assert!("x".parse::<Exponent>().is_err());
        assert!(Exponent::Finite(100.0) < Exponent::Infinity);
        assert!(Exponent::Finite(2.0) < Exponent::Finite(3.0));
    }
}
