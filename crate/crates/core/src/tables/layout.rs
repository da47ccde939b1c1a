//! The four tables as data: membership shape of every box and, for each
//! row, the list of partner pairs together with the printed inner product.
//!
//! Tables 1–2 list `⟨η(k,x), λ_a η(j,y)⟩`; Tables 3–4 list
//! `⟨λ_a η(k,x), η(j,y)⟩`, which is the entry of the `λ_{a⁻¹}` T-matrix.
//! Partner formulas and values are transcribed as printed, including
//! entries the audit later shows to be wrong (see [`super::errata`]).

use std::fmt;

use serde::Serialize;

use super::symbolic::sym::*;
use super::symbolic::{Factor, Sym, SymParams};
use crate::pvv::{IndexPair, PvvParams};
use crate::words::{swap_ab, Letter, ReducedWord};

/// Which pair of tables: `λ_a` (Tables 1–2) or `λ_{a⁻¹}` (Tables 3–4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TablePair {
    #[serde(rename = "12")]
    Lambda,
    #[serde(rename = "34")]
    LambdaInverse,
}

impl TablePair {
    /// Printed table number holding `id`.
    pub fn table_number(self, id: BoxId) -> u8 {
        let second = matches!(id, BoxId::Box(n) if n >= 11);
        match (self, second) {
            (TablePair::Lambda, false) => 1,
            (TablePair::Lambda, true) => 2,
            (TablePair::LambdaInverse, false) => 3,
            (TablePair::LambdaInverse, true) => 4,
        }
    }

    pub fn generator(self) -> ReducedWord {
        match self {
            TablePair::Lambda => ReducedWord::generator(1),
            TablePair::LambdaInverse => ReducedWord::generator(1).inverse(),
        }
    }
}

impl fmt::Display for TablePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TablePair::Lambda => write!(f, "12"),
            TablePair::LambdaInverse => write!(f, "34"),
        }
    }
}

/// A bold box `1..=20`, or one of the two unlabeled header rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxId {
    Header(u8),
    Box(u8),
}

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxId::Header(i) => write!(f, "header{i}"),
            BoxId::Box(i) => write!(f, "box{i}"),
        }
    }
}

impl Serialize for BoxId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Black,
}

/// A row matched against a box: the row itself and the box's word-shape
/// parameters. `k` is the printed `k` (for rows `λ_aη(N−k,x)` of Tables 3–4
/// it is `N` minus the row index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ctx {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub x: ReducedWord,
    pub l: i64,
    pub y: ReducedWord,
}

impl Ctx {
    pub fn sym_params(&self) -> SymParams {
        SymParams {
            n: self.n as i64,
            k: self.k as i64,
            l: self.l,
        }
    }

    fn ni(&self) -> i64 {
        self.n as i64
    }

    fn ki(&self) -> i64 {
        self.k as i64
    }
}

pub type Target = fn(&Ctx) -> (i64, ReducedWord);
pub type Membership = fn(&PvvParams, &IndexPair) -> Option<Ctx>;

#[derive(Debug, Clone)]
pub struct PartnerSpec {
    /// Printed partner vector, e.g. `λ_aη(0,b⁻¹α(x))`.
    pub label: &'static str,
    pub color: Option<Color>,
    pub target: Target,
    pub printed: Sym,
}

#[derive(Debug, Clone)]
pub struct BoxSpec {
    pub pair: TablePair,
    pub id: BoxId,
    /// Printed membership conditions.
    pub condition: &'static str,
    pub membership: Membership,
    pub partners: Vec<PartnerSpec>,
    /// Printed cross-reference numbers beneath the box (`None` = every box).
    pub adjacent: Option<Vec<u8>>,
    /// For boxes with blue partners: whether a row sits at the extremal
    /// length, where blue partners leave `S`.
    pub extremal: Option<fn(&Ctx) -> bool>,
}

impl BoxSpec {
    pub fn matches(&self, params: &PvvParams, p: &IndexPair) -> Option<Ctx> {
        (self.membership)(params, p)
    }

    pub fn table_number(&self) -> u8 {
        self.pair.table_number(self.id)
    }
}

// ---------------------------------------------------------------------------
// word helpers

fn a(n: i64) -> ReducedWord {
    ReducedWord::power(1, n)
}

fn b(n: i64) -> ReducedWord {
    ReducedWord::power(2, n)
}

fn cat(parts: &[&ReducedWord]) -> ReducedWord {
    parts
        .iter()
        .fold(ReducedWord::identity(), |acc, w| &acc * *w)
}

fn al(x: &ReducedWord) -> ReducedWord {
    swap_ab(x)
}

fn letter(generator: u16, inverse: bool) -> Letter {
    Letter::new(generator, inverse).expect("valid letter")
}

/// Letters of the row shapes; Tables 3–4 use the images under `β`.
#[derive(Clone, Copy)]
struct Alphabet {
    a: Letter,
    a_inv: Letter,
    b: Letter,
    b_inv: Letter,
}

const fn mirror_of(pair: TablePair) -> bool {
    matches!(pair, TablePair::LambdaInverse)
}

fn alphabet(mirror: bool) -> Alphabet {
    Alphabet {
        a: letter(1, mirror),
        a_inv: letter(1, !mirror),
        b: letter(2, mirror),
        b_inv: letter(2, !mirror),
    }
}

/// `x = first · run^m · y` with a maximal run; `None` if `x` does not start
/// with `first`.
fn led_run(x: &ReducedWord, first: Letter, run: Letter) -> Option<(usize, ReducedWord)> {
    (x.first() == Some(first)).then(|| x.tail().split_run(run))
}

// Row index of the printed `k = 0`, `k = 1` rows and of `k ≥ 2` rows.
fn row_k(pair: TablePair, n: usize, printed: usize) -> usize {
    match (pair, printed) {
        (_, 0) | (TablePair::Lambda, _) => printed,
        (TablePair::LambdaInverse, k) => n - k,
    }
}

fn printed_k(pair: TablePair, n: usize, row: usize) -> usize {
    match (pair, row) {
        (_, 0) | (TablePair::Lambda, _) => row,
        (TablePair::LambdaInverse, k) => n - k,
    }
}

#[derive(Clone, Copy)]
enum LenCond {
    AtMost(i64),
    Exactly(i64),
}

impl LenCond {
    fn holds(self, len: usize, r: usize) -> bool {
        let len = len as i64;
        match self {
            LenCond::AtMost(off) => len <= r as i64 + off,
            LenCond::Exactly(off) => len == r as i64 + off,
        }
    }
}

#[derive(Clone, Copy)]
enum Shape {
    /// `x = b a^ℓ y`, `ℓ ≥ 1`.
    BThenA,
    /// `x = b a^{ℓ−N} y`, `ℓ ≤ N−1`.
    BThenAInv,
    /// `x = b^ℓ y`, `ℓ ≥ min`.
    BRun(usize),
    /// `x = b^{ℓ−N} y`, `N−ℓ ≥ min` (with `x ∈ W_{b,b⁻¹,e}`).
    BInvRun(usize),
}

fn shape_match(
    shape: Shape,
    mirror: bool,
    n: usize,
    x: &ReducedWord,
) -> Option<(i64, ReducedWord)> {
    let al = alphabet(mirror);
    let ni = n as i64;
    match shape {
        Shape::BThenA => {
            let (l, y) = led_run(x, al.b, al.a)?;
            (l >= 1).then_some((l as i64, y))
        }
        Shape::BThenAInv => {
            let (m, y) = led_run(x, al.b, al.a_inv)?;
            (m >= 1).then_some((ni - m as i64, y))
        }
        Shape::BRun(min) => {
            let (l, y) = x.split_run(al.b);
            (l >= min).then_some((l as i64, y))
        }
        Shape::BInvRun(min) => {
            let (m, y) = x.split_run(al.b_inv);
            let in_window = m >= 1 || x.is_identity();
            (m >= min && in_window).then_some((ni - m as i64, y))
        }
    }
}

fn ctx(params: &PvvParams, k: usize, x: &ReducedWord, l: i64, y: ReducedWord) -> Ctx {
    Ctx {
        n: params.n,
        r: params.r,
        k,
        x: x.clone(),
        l,
        y,
    }
}

/// Membership for boxes 1–14: fixed printed `k` (0 or 1), a word shape and a
/// length condition.
macro_rules! shaped {
    ($pair:expr, $k:expr, $shape:expr, $len:expr) => {{
        fn member(params: &PvvParams, p: &IndexPair) -> Option<Ctx> {
            let pair: TablePair = $pair;
            if p.k != row_k(pair, params.n, $k) || !$len.holds(p.x.len(), params.r) {
                return None;
            }
            let (l, y) = shape_match($shape, mirror_of(pair), params.n, &p.x)?;
            Some(ctx(params, $k, &p.x, l, y))
        }
        member as Membership
    }};
}

/// Membership for boxes 15–20: `2 ≤ k ≤ N−1` plus a condition on `(k, |x|)`.
macro_rules! ranged {
    ($pair:expr, |$n:ident, $r:ident, $k:ident, $len:ident| $cond:expr) => {{
        fn member(params: &PvvParams, p: &IndexPair) -> Option<Ctx> {
            let pair: TablePair = $pair;
            if p.k == 0 {
                return None;
            }
            let k = printed_k(pair, params.n, p.k);
            let ($n, $r, $k, $len) = (
                params.n as i64,
                params.r as i64,
                k as i64,
                p.x.len() as i64,
            );
            (2 <= $k && $k <= $n - 1 && $cond)
                .then(|| ctx(params, k, &p.x, 0, ReducedWord::identity()))
        }
        member as Membership
    }};
}

macro_rules! header {
    ($pair:expr, $word:expr) => {{
        fn member(params: &PvvParams, p: &IndexPair) -> Option<Ctx> {
            let _: TablePair = $pair;
            (p.k == 0 && p.x == $word).then(|| ctx(params, 0, &p.x, 0, ReducedWord::identity()))
        }
        member as Membership
    }};
}

fn partner(label: &'static str, color: Option<Color>, target: Target, printed: &[Factor]) -> PartnerSpec {
    PartnerSpec {
        label,
        color,
        target,
        printed: of(printed),
    }
}

use Color::{Black, Blue, Red};
use Factor::{AbsA2, AbsB2, ConjA, ConjB, A, B, S};

const R: Option<Color> = Some(Red);
const BL: Option<Color> = Some(Blue);
const K: Option<Color> = Some(Black);
const NONE: Option<Color> = None;

fn spec(
    pair: TablePair,
    id: BoxId,
    condition: &'static str,
    membership: Membership,
    partners: Vec<PartnerSpec>,
    adjacent: Option<Vec<u8>>,
    extremal: Option<fn(&Ctx) -> bool>,
) -> BoxSpec {
    BoxSpec {
        pair,
        id,
        condition,
        membership,
        partners,
        adjacent,
        extremal,
    }
}

fn len_is(off: i64) -> fn(&Ctx) -> bool {
    match off {
        -1 => |c| c.x.len() as i64 == c.r as i64 - 1,
        -2 => |c| c.x.len() as i64 == c.r as i64 - 2,
        _ => unreachable!("only the offsets used by the tables"),
    }
}

// ---------------------------------------------------------------------------
// Tables 1–2

const L: TablePair = TablePair::Lambda;

fn t1_box1_partners(colored_blue: bool) -> Vec<PartnerSpec> {
    let mut v = Vec::new();
    if colored_blue {
        v.push(partner("λ_aη(0,b⁻¹α(x))", BL, |c| (0, cat(&[&b(-1), &al(&c.x)])), &[A, ConjB]));
        v.push(partner("λ_aη(N-1,x)", BL, |c| (c.ni() - 1, c.x.clone()), &[AbsA2, SQRT_N1]));
    } else {
        v.push(partner("λ_aη(N-1,x)", K, |c| (c.ni() - 1, c.x.clone()), &[AbsA2, SQRT_N1]));
    }
    v.push(partner("λ_aη(0,a⁻¹α(x))", R, |c| (0, cat(&[&a(-1), &al(&c.x)])), &[ConjA, B]));
    v.push(partner("λ_aη(ℓ,y)", R, |c| (c.l, c.y.clone()), &[SQRT_NL, AbsB2]));
    v
}

fn t1_box5_partners(full: bool) -> Vec<PartnerSpec> {
    let mut v = Vec::new();
    if full {
        v.push(partner(
            "λ_aη(0,b⁻¹a^ℓα(y))",
            BL,
            |c| (0, cat(&[&b(-1), &a(c.l), &al(&c.y)])),
            &[A, ConjB],
        ));
        v.push(partner("λ_aη(N-1,x)", BL, |c| (c.ni() - 1, c.x.clone()), &[SQRT_N1, AbsA2]));
    } else {
        v.push(partner("λ_aη(N-1,x)", K, |c| (c.ni() - 1, c.x.clone()), &[SQRT_N1, AbsA2]));
    }
    v.push(partner("λ_aη(0,b^{ℓ-1}y)", R, |c| (0, cat(&[&b(c.l - 1), &c.y])), &[AbsB2]));
    v.push(partner("λ_aη(ℓ-1,α(y))", R, |c| (c.l - 1, al(&c.y)), &[SQRT_NL1, ConjA, B]));
    v
}

fn t1_box9_partners(tail: u8, first_color: Option<Color>) -> Vec<PartnerSpec> {
    let mut v = vec![
        partner("λ_aη(0,b^ℓy)", first_color, |c| (0, cat(&[&b(c.l), &c.y])), &[SQRT_N1, AbsA2]),
        partner("λ_aη(ℓ,α(y))", first_color, |c| (c.l, al(&c.y)), &[SQRT_N1, SQRT_NL, A, ConjB]),
    ];
    match tail {
        2 => {
            v.push(partner("λ_aη(N-1,bα(x))", BL, |c| (c.ni() - 1, cat(&[&b(1), &al(&c.x)])), &[SQRT_N1, ConjA, B]));
            v.push(partner("λ_aη(0,b⁻¹ax)", BL, |c| (0, cat(&[&b(-1), &a(1), &c.x])), &[SQRT_N1, AbsB2]));
        }
        1 => v.push(partner("λ_aη(N-1,bα(x))", K, |c| (c.ni() - 1, cat(&[&b(1), &al(&c.x)])), &[SQRT_N1, A, ConjB])),
        _ => {}
    }
    v
}

fn t1_box12_partners(tail: u8, first_color: Option<Color>) -> Vec<PartnerSpec> {
    let mut v = vec![
        partner("λ_aη(0,b^{ℓ-N}y)", first_color, |c| (0, cat(&[&b(c.l - c.ni()), &c.y])), &[SQRT_N1, AbsA2]),
        partner("λ_aη(ℓ,α(y))", first_color, |c| (c.l, al(&c.y)), &[SQRT_N1, SQRT_L, A, ConjB]),
    ];
    match tail {
        2 => {
            v.push(partner("λ_aη(N-1,bα(x))", BL, |c| (c.ni() - 1, cat(&[&b(1), &al(&c.x)])), &[SQRT_N1, ConjA, B]));
            v.push(partner("λ_aη(0,b⁻¹ax)", BL, |c| (0, cat(&[&b(-1), &a(1), &c.x])), &[SQRT_N1, AbsB2]));
        }
        1 => v.push(partner("λ_aη(N-1,bα(x))", K, |c| (c.ni() - 1, cat(&[&b(1), &al(&c.x)])), &[SQRT_N1, ConjA, B])),
        _ => {}
    }
    v
}

fn prev_k(c: &Ctx) -> (i64, ReducedWord) {
    (c.ki() - 1, c.x.clone())
}

fn tables_12() -> Vec<BoxSpec> {
    use BoxId::{Box as Bx, Header};
    use LenCond::{AtMost, Exactly};
    use Shape::*;
    vec![
        spec(L, Header(1), "η(0,e)", header!(L, ReducedWord::identity()), vec![
            partner("λ_aη(N-1,e)", R, |c| (c.ni() - 1, ReducedWord::identity()), &[SQRT_N1, ConjA]),
            partner("λ_aη(0,b⁻¹)", R, |_| (0, b(-1)), &[ConjB]),
        ], Some(vec![]), None),
        spec(L, Header(2), "η(0,b)", header!(L, ReducedWord::generator(2)), vec![
            partner("λ_aη(N-1,b)", R, |c| (c.ni() - 1, b(1)), &[SQRT_N1, AbsA2]),
            partner("λ_aη(0,e)", R, |_| (0, ReducedWord::identity()), &[B]),
            partner("λ_aη(0,b⁻¹a)", R, |_| (0, cat(&[&b(-1), &a(1)])), &[A, ConjB]),
        ], Some(vec![]), None),
        spec(L, Bx(1), "η(0,x), x=ba^ℓy, y∈W_{b,b⁻¹,e}, |x|≤R-1, ℓ≥1",
            shaped!(L, 0, Shape::BThenA, LenCond::AtMost(-1)), t1_box1_partners(true), Some(vec![9, 14]), Some(len_is(-1))),
        spec(L, Bx(2), "η(0,x), x=ba^ℓy, y∈W_{b,b⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(L, 0, Shape::BThenA, LenCond::Exactly(0)), t1_box1_partners(false), Some(vec![10]), None),
        spec(L, Bx(3), "η(0,x), x=ba^{ℓ-N}y, y∈W_{b,b⁻¹,e}, |x|≤R-1, ℓ≥1",
            shaped!(L, 0, Shape::BThenAInv, LenCond::AtMost(-1)), t1_box1_partners(true), Some(vec![12, 14]), Some(len_is(-1))),
        spec(L, Bx(4), "η(0,x), x=ba^{ℓ-N}y, y∈W_{b,b⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(L, 0, Shape::BThenAInv, LenCond::Exactly(0)), t1_box1_partners(false), Some(vec![13]), None),
        spec(L, Bx(5), "η(0,x), x=b^ℓy, y∈W_{a,a⁻¹,e}, |x|≤R-1, ℓ≥2",
            shaped!(L, 0, Shape::BRun(2), LenCond::AtMost(-1)), t1_box5_partners(true), Some(vec![14, 15]), Some(len_is(-1))),
        spec(L, Bx(6), "η(0,x), x=b^ℓy, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥2",
            shaped!(L, 0, Shape::BRun(2), LenCond::Exactly(0)), t1_box5_partners(false), Some(vec![]), None),
        spec(L, Bx(7), "η(0,x), x=b^{ℓ-N}y, y∈W_{a,a⁻¹,e}, |x|≤R-1, ℓ≥2",
            shaped!(L, 0, Shape::BInvRun(1), LenCond::AtMost(-1)), vec![
                partner("λ_aη(0,b⁻¹a^{ℓ-N}α(y))", BL, |c| (0, cat(&[&b(-1), &a(c.l - c.ni()), &al(&c.y)])), &[A, ConjB]),
                partner("λ_aη(N-1,x)", BL, |c| (c.ni() - 1, c.x.clone()), &[SQRT_N1, AbsA2]),
                partner("λ_aη(0,b^{ℓ-N-1}y)", BL, |c| (0, cat(&[&b(c.l - c.ni() - 1), &c.y])), &[AbsB2]),
                partner("λ_aη(ℓ-1,α(y))", BL, |c| (c.l - 1, al(&c.y)), &[SQRT_L1, ConjA, B]),
            ], Some(vec![14, 18]), Some(len_is(-1))),
        spec(L, Bx(8), "η(0,x), x=b^{ℓ-N}y, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥2",
            shaped!(L, 0, Shape::BInvRun(1), LenCond::Exactly(0)), vec![
                partner("λ_aη(N-1,x)", K, |c| (c.ni() - 1, c.x.clone()), &[SQRT_N1, AbsA2]),
                partner("λ_aη(ℓ-1,α(y))", K, |c| (c.l - 1, al(&c.y)), &[SQRT_L1, ConjA, B]),
            ], Some(vec![19]), None),
        spec(L, Bx(9), "η(1,x), x=b^ℓy, y∈W_{a,a⁻¹,e}, |x|≤R-2, ℓ≥1",
            shaped!(L, 1, BRun(1), AtMost(-2)), t1_box9_partners(2, R), Some(vec![1, 14]), Some(len_is(-2))),
        spec(L, Bx(10), "η(1,x), x=b^ℓy, y∈W_{a,a⁻¹,e}, |x|=R-1, ℓ≥1",
            shaped!(L, 1, BRun(1), Exactly(-1)), t1_box9_partners(1, R), Some(vec![]), None),
        spec(L, Bx(11), "η(1,x), x=b^ℓy, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(L, 1, BRun(1), Exactly(0)), t1_box9_partners(0, K), Some(vec![17]), None),
        spec(L, Bx(12), "η(1,x), x=b^{ℓ-N}y, y∈W_{a,a⁻¹,e}, |x|≤R-2, ℓ≥1",
            shaped!(L, 1, BInvRun(0), AtMost(-2)), t1_box12_partners(2, R), Some(vec![3, 14]), Some(len_is(-2))),
        spec(L, Bx(13), "η(1,x), x=b^{ℓ-N}y, y∈W_{a,a⁻¹,e}, |x|=R-1, ℓ≥1",
            shaped!(L, 1, BInvRun(0), Exactly(-1)), t1_box12_partners(1, R), Some(vec![]), None),
        spec(L, Bx(14), "η(1,x), x=b^{ℓ-N}y, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(L, 1, BInvRun(0), Exactly(0)), t1_box12_partners(0, K), None, None),
        spec(L, Bx(15), "η(k,x), 2≤k≤N-1, k+|x|≤R-1",
            ranged!(L, |n, r, k, len| k + len <= r - 1), vec![
                partner("λ_aη(k-1,x)", R, prev_k, &[S]),
                partner("λ_aη(0,b^{k-1}α(x))", R, |c| (0, cat(&[&b(c.ki() - 1), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
                partner("λ_aη(0,b⁻¹a^kx)", BL, |c| (0, cat(&[&b(-1), &a(c.ki()), &c.x])), &[SQRT_NK, AbsB2]),
                partner("λ_aη(N-1,b^kα(x))", BL, |c| (c.ni() - 1, cat(&[&b(c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_NK, ConjA, B]),
            ], Some(vec![5, 14]), Some(|c| (c.k + c.x.len()) as i64 == c.r as i64 - 1)),
        spec(L, Bx(16), "η(k,x), 2≤k≤N-1, k+|x|=R",
            ranged!(L, |n, r, k, len| k + len == r), vec![
                partner("λ_aη(k-1,x)", R, prev_k, &[S]),
                partner("λ_aη(0,b^{k-1}α(x))", R, |c| (0, cat(&[&b(c.ki() - 1), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
                partner("λ_aη(N-1,b^kα(x))", K, |c| (c.ni() - 1, cat(&[&b(c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_NK, ConjA, B]),
            ], Some(vec![]), None),
        spec(L, Bx(17), "η(k,x), 2≤k≤N-1, k+|x|=R+1",
            ranged!(L, |n, r, k, len| k + len == r + 1), vec![
                partner("λ_aη(k-1,x)", K, prev_k, &[S]),
                partner("λ_aη(0,b^{k-1}α(x))", K, |c| (0, cat(&[&b(c.ki() - 1), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
            ], Some(vec![11]), None),
        spec(L, Bx(18), "η(k,x), 2≤k≤N-1, N-k+|x|≤R-1",
            ranged!(L, |n, r, k, len| n - k + len <= r - 1), vec![
                partner("λ_aη(k-1,x)", BL, prev_k, &[S]),
                partner("λ_aη(0,b^{k-N-1}α(x))", BL, |c| (0, cat(&[&b(c.ki() - c.ni() - 1), &al(&c.x)])), &[SQRT_K, A, ConjB]),
                partner("λ_aη(0,b⁻¹a^{k-N}x)", BL, |c| (0, cat(&[&b(-1), &a(c.ki() - c.ni()), &c.x])), &[SQRT_K, AbsB2]),
                partner("λ_aη(N-1,b^{k-N}α(x))", BL, |c| (c.ni() - 1, cat(&[&b(c.ki() - c.ni()), &al(&c.x)])), &[SQRT_N1, SQRT_K, ConjA, B]),
            ], Some(vec![7, 14]), Some(|c| (c.n - c.k + c.x.len()) as i64 == c.r as i64 - 1)),
        spec(L, Bx(19), "η(k,x), 2≤k≤N-1, N-k+|x|=R",
            ranged!(L, |n, r, k, len| n - k + len == r), vec![
                partner("λ_aη(k-1,x)", K, prev_k, &[S]),
                partner("λ_aη(N-1,b^{k-N}α(x))", K, |c| (c.ni() - 1, cat(&[&b(c.ki() - c.ni()), &al(&c.x)])), &[SQRT_N1, SQRT_K, ConjA, B]),
            ], Some(vec![8]), None),
        spec(L, Bx(20), "η(k,x), 2≤k, R+1-|x|<k<N-R+|x|",
            ranged!(L, |n, r, k, len| r + 1 - len < k && k < n - r + len), vec![
                partner("λ_aη(k-1,x)", K, prev_k, &[S]),
            ], Some(vec![]), None),
    ]
}

// ---------------------------------------------------------------------------
// Tables 3–4

const M: TablePair = TablePair::LambdaInverse;

fn t3_box1_partners(full: bool) -> Vec<PartnerSpec> {
    let mut v = Vec::new();
    if full {
        v.push(partner("η(0,bα(x))", NONE, |c| (0, cat(&[&b(1), &al(&c.x)])), &[A, ConjB]));
    }
    v.push(partner("η(1,x)", NONE, |c| (1, c.x.clone()), &[AbsA2, SQRT_N1]));
    v.push(partner("η(0,aα(x))", NONE, |c| (0, cat(&[&a(1), &al(&c.x)])), &[ConjA, B]));
    v.push(partner("η(N-ℓ,y)", NONE, |c| (c.ni() - c.l, c.y.clone()), &[SQRT_NL, AbsB2]));
    v
}

fn t3_box5_partners(full: bool, root: Factor) -> Vec<PartnerSpec> {
    let mut v = Vec::new();
    if full {
        v.push(partner("η(0,bα(x))", NONE, |c| (0, cat(&[&b(1), &al(&c.x)])), &[A, ConjB]));
    }
    v.push(partner("η(1,x)", NONE, |c| (1, c.x.clone()), &[SQRT_N1, AbsA2]));
    if full || matches!(root, SQRT_NL1) {
        v.push(partner("η(0,bx)", NONE, |c| (0, cat(&[&b(1), &c.x])), &[AbsB2]));
    }
    v.push(partner("η(N-ℓ+1,α(y))", NONE, |c| (c.ni() - c.l + 1, al(&c.y)), &[root, ConjA, B]));
    v
}

fn t3_box9_partners(tail: u8, root: Factor) -> Vec<PartnerSpec> {
    let mut v = vec![
        partner("η(0,x)", NONE, |c| (0, c.x.clone()), &[SQRT_N1, AbsA2]),
        partner("η(N-ℓ,α(y))", NONE, |c| (c.ni() - c.l, al(&c.y)), &[SQRT_N1, root, A, ConjB]),
    ];
    match (tail, root) {
        (2, _) => {
            v.push(partner("η(1,b⁻¹α(x))", NONE, |c| (1, cat(&[&b(-1), &al(&c.x)])), &[SQRT_N1, ConjA, B]));
            v.push(partner("η(0,ba⁻¹x)", NONE, |c| (0, cat(&[&b(1), &a(-1), &c.x])), &[SQRT_N1, AbsB2]));
        }
        (1, SQRT_NL) => v.push(partner("η(1,b⁻¹α(x))", NONE, |c| (1, cat(&[&b(-1), &al(&c.x)])), &[SQRT_N1, A, ConjB])),
        (1, _) => v.push(partner("η(1,b⁻¹α(x))", NONE, |c| (1, cat(&[&b(-1), &al(&c.x)])), &[SQRT_N1, ConjA, B])),
        _ => {}
    }
    v
}

fn next_row(c: &Ctx) -> (i64, ReducedWord) {
    (c.ni() - c.ki() + 1, c.x.clone())
}

fn tables_34() -> Vec<BoxSpec> {
    use BoxId::{Box as Bx, Header};
    use LenCond::{AtMost, Exactly};
    use Shape::*;
    vec![
        spec(M, Header(1), "λ_aη(0,e)", header!(M, ReducedWord::identity()), vec![
            partner("η(1,e)", NONE, |_| (1, ReducedWord::identity()), &[SQRT_N1, ConjA]),
            partner("η(0,b)", NONE, |_| (0, b(1)), &[ConjB]),
        ], None, None),
        spec(M, Header(2), "λ_aη(0,b⁻¹)", header!(M, ReducedWord::generator(2).inverse()), vec![
            partner("η(1,b⁻¹)", NONE, |_| (1, b(-1)), &[SQRT_N1, AbsA2]),
            partner("η(0,e)", NONE, |_| (0, ReducedWord::identity()), &[B]),
            partner("η(0,ba⁻¹)", NONE, |_| (0, cat(&[&b(1), &a(-1)])), &[B, ConjA]),
        ], None, None),
        spec(M, Bx(1), "λ_aη(0,x), x=b⁻¹a⁻ℓy, y∈W_{b,b⁻¹,e}, |x|≤R-1, ℓ≥1",
            shaped!(M, 0, BThenA, AtMost(-1)), t3_box1_partners(true), None, None),
        spec(M, Bx(2), "λ_aη(0,x), x=b⁻¹a⁻ℓy, y∈W_{b,b⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(M, 0, BThenA, Exactly(0)), t3_box1_partners(false), None, None),
        spec(M, Bx(3), "λ_aη(0,x), x=b⁻¹a^{N-ℓ}y, y∈W_{b,b⁻¹,e}, |x|≤R-1, ℓ≥1",
            shaped!(M, 0, BThenAInv, AtMost(-1)), t3_box1_partners(true), None, None),
        spec(M, Bx(4), "λ_aη(0,x), x=b⁻¹a^{N-ℓ}y, y∈W_{b,b⁻¹,e}, |x|=R, ℓ≥1",
            shaped!(M, 0, BThenAInv, Exactly(0)), t3_box1_partners(false), None, None),
        spec(M, Bx(5), "λ_aη(0,x), x=b⁻ℓy, y∈W_{a,a⁻¹,e}, |x|≤R-1, ℓ≥2",
            shaped!(M, 0, BRun(2), AtMost(-1)), t3_box5_partners(true, SQRT_NL1), None, None),
        spec(M, Bx(6), "λ_aη(0,x), x=b⁻ℓy, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥2",
            shaped!(M, 0, BRun(2), Exactly(0)), t3_box5_partners(false, SQRT_NL1), None, None),
        spec(M, Bx(7), "λ_aη(0,x), x=b^{N-ℓ}y, y∈W_{a,a⁻¹,e}, |x|≤R-1, ℓ≥2",
            shaped!(M, 0, BInvRun(1), AtMost(-1)), t3_box5_partners(true, SQRT_L1), None, None),
        spec(M, Bx(8), "λ_aη(0,x), x=b^{N-ℓ}y, y∈W_{a,a⁻¹,e}, |x|=R, ℓ≥2",
            shaped!(M, 0, BInvRun(1), Exactly(0)), t3_box5_partners(false, SQRT_L1), None, None),
        spec(M, Bx(9), "λ_aη(N-1,x), x=b⁻ℓy, y∈W_{a,a⁻¹,e}, |x|≤R-2, ℓ≥1",
            shaped!(M, 1, BRun(1), AtMost(-2)), t3_box9_partners(2, SQRT_NL), None, None),
        spec(M, Bx(10), "λ_aη(N-1,x), x=b⁻ℓy, y∈W_{a,a⁻¹,e}, |x|=R-1, ℓ≥1",
            shaped!(M, 1, BRun(1), Exactly(-1)), t3_box9_partners(1, SQRT_NL), None, None),
        spec(M, Bx(11), "λ_aη(N-1,x), x=b⁻ℓy, y∈W_a∪W_{a⁻¹}∪{e}, |x|=R, ℓ≥1",
            shaped!(M, 1, BRun(1), Exactly(0)), t3_box9_partners(0, SQRT_NL), None, None),
        spec(M, Bx(12), "λ_aη(N-1,x), x=b^{N-ℓ}y, y∈W_a∪W_{a⁻¹}∪{e}, |x|≤R-2, ℓ≥1",
            shaped!(M, 1, BInvRun(0), AtMost(-2)), t3_box9_partners(2, SQRT_L), None, None),
        spec(M, Bx(13), "λ_aη(N-1,x), x=b^{N-ℓ}y, y∈W_a∪W_{a⁻¹}∪{e}, |x|=R-1, ℓ≥1",
            shaped!(M, 1, BInvRun(0), Exactly(-1)), t3_box9_partners(1, SQRT_L), None, None),
        spec(M, Bx(14), "λ_aη(N-1,x), x=b^{N-ℓ}y, y∈W_a∪W_{a⁻¹}∪{e}, |x|=R, ℓ≥1",
            shaped!(M, 1, BInvRun(0), Exactly(0)), t3_box9_partners(0, SQRT_L), None, None),
        spec(M, Bx(15), "λ_aη(N-k,x), 2≤k≤N-1, k+|x|≤R-1",
            ranged!(M, |n, r, k, len| k + len <= r - 1), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
                partner("η(0,b^{1-k}α(x))", NONE, |c| (0, cat(&[&b(1 - c.ki()), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
                partner("η(0,ba^{-k}x)", NONE, |c| (0, cat(&[&b(1), &a(-c.ki()), &c.x])), &[SQRT_NK, AbsB2]),
                partner("η(1,b^{-k}α(x))", NONE, |c| (1, cat(&[&b(-c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_NK, ConjA, B]),
            ], None, None),
        spec(M, Bx(16), "λ_aη(N-k,x), 2≤k≤N-1, k+|x|=R",
            ranged!(M, |n, r, k, len| k + len == r), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
                partner("η(0,b^{1-k}α(x))", NONE, |c| (0, cat(&[&b(1 - c.ki()), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
                partner("η(1,b^{-k}α(x))", NONE, |c| (1, cat(&[&b(-c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_NK, ConjA, B]),
            ], None, None),
        spec(M, Bx(17), "λ_aη(N-k,x), 2≤k≤N-1, k+|x|=R+1",
            ranged!(M, |n, r, k, len| k + len == r + 1), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
                partner("η(0,b^{1-k}α(x))", NONE, |c| (0, cat(&[&b(1 - c.ki()), &al(&c.x)])), &[SQRT_NK, A, ConjB]),
            ], None, None),
        spec(M, Bx(18), "λ_aη(N-k,x), 2≤k≤N-1, N-k+|x|≤R-1",
            ranged!(M, |n, r, k, len| n - k + len <= r - 1), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
                partner("η(0,b^{N-k+1}α(x))", NONE, |c| (0, cat(&[&b(c.ni() - c.ki() + 1), &al(&c.x)])), &[SQRT_K, A, ConjB]),
                partner("η(0,ba^{N-k}x)", NONE, |c| (0, cat(&[&b(1), &a(c.ni() - c.ki()), &c.x])), &[SQRT_K, AbsB2]),
                partner("η(1,b^{N-k}α(x))", NONE, |c| (1, cat(&[&b(c.ni() - c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_K, ConjA, B]),
            ], None, None),
        spec(M, Bx(19), "λ_aη(N-k,x), 2≤k≤N-1, N-k+|x|=R",
            ranged!(M, |n, r, k, len| n - k + len == r), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
                partner("η(1,b^{N-k}α(x))", NONE, |c| (1, cat(&[&b(c.ni() - c.ki()), &al(&c.x)])), &[SQRT_N1, SQRT_K, ConjA, B]),
            ], None, None),
        spec(M, Bx(20), "λ_aη(N-k,x), k≥2, R+1-|x|<k<N-R+|x|",
            ranged!(M, |n, r, k, len| r + 1 - len < k && k < n - r + len), vec![
                partner("η(N-k+1,x)", NONE, next_row, &[S]),
            ], None, None),
    ]
}

/// The printed boxes of a table pair, headers first, then boxes 1–20.
pub fn boxes(pair: TablePair) -> Vec<BoxSpec> {
    match pair {
        TablePair::Lambda => tables_12(),
        TablePair::LambdaInverse => tables_34(),
    }
}

/// `(k, x) ↦ (N−k mod N, β(x))`, the relabeling induced by `W δ_x = δ_{β(x)}`.
pub fn conjugate_pair(n: usize, p: &IndexPair) -> IndexPair {
    IndexPair::new((n - p.k) % n, crate::words::beta(&p.x))
}

/// Boxes of a table containing a row.
pub fn enumerate_box(spec: &BoxSpec, params: &PvvParams) -> Vec<IndexPair> {
    crate::pvv::build_f(params)
        .into_iter()
        .filter(|p| spec.matches(params, p).is_some())
        .collect()
}
