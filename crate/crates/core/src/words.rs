//! Reduced words in the free group on `d` generators.
//!
//! Words are stored in free-reduced form, compared length-lexicographically
//! with the letter order `a < A < b < B < c < …` (capitals are inverses), and
//! printed in the same alphabet with `e` for the identity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest rank whose words have a one-character-per-letter text form.
pub const MAX_TEXT_RANK: u16 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: u16, rank: u16 },
    #[error("operation requires rank {expected}, got rank {actual}")]
    RankMismatch { expected: u16, actual: u16 },
    #[error("free group rank must be at least {min}, got {rank}")]
    RankTooSmall { rank: u16, min: u16 },
    #[error("invalid character {0:?} in word")]
    InvalidCharacter(char),
    #[error("word contains letters beyond generator {0}")]
    NotInRank(u16),
}

/// A generator `a_i` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    generator: u16,
    inverse: bool,
}

impl Letter {
    /// `index` is 1-based: `a = 1`, `b = 2`, …
    pub fn new(index: u16, inverse: bool) -> Result<Self, WordError> {
        if index == 0 {
            return Err(WordError::GeneratorOutOfRange { index, rank: 0 });
        }
        Ok(Letter {
            generator: index,
            inverse,
        })
    }

    pub fn generator(self) -> u16 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` for a generator, `-1` for an inverse generator.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the letter order `a < A < b < B < …`.
    pub fn order_key(self) -> u32 {
        2 * (u32::from(self.generator) - 1) + u32::from(self.inverse)
    }

    pub fn to_char(self) -> Option<char> {
        if self.generator > MAX_TEXT_RANK {
            return None;
        }
        let base = if self.inverse { b'A' } else { b'a' };
        Some(char::from(base + (self.generator - 1) as u8))
    }

    pub fn from_char(c: char) -> Result<Self, WordError> {
        match c {
            'a'..='z' => Ok(Letter {
                generator: (c as u8 - b'a' + 1) as u16,
                inverse: false,
            }),
            'A'..='Z' => Ok(Letter {
                generator: (c as u8 - b'A' + 1) as u16,
                inverse: true,
            }),
            _ => Err(WordError::InvalidCharacter(c)),
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word. The empty word is the identity `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord { letters: out }
    }

    pub fn generator(index: u16) -> Self {
        ReducedWord {
            letters: vec![Letter {
                generator: index,
                inverse: false,
            }],
        }
    }

    /// `a_index^exponent`; negative exponents give powers of the inverse.
    pub fn power(index: u16, exponent: i64) -> Self {
        let letter = Letter {
            generator: index,
            inverse: exponent < 0,
        };
        ReducedWord {
            letters: vec![letter; exponent.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Largest generator index occurring in the word (0 for `e`).
    pub fn max_generator(&self) -> u16 {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    /// True iff the word begins with `prefix` as a letter sequence.
    /// The identity is a prefix of every word.
    pub fn starts_with(&self, prefix: &ReducedWord) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    /// Number of leading letters equal to `letter`, and the remaining suffix.
    pub fn split_run(&self, letter: Letter) -> (usize, ReducedWord) {
        let run = self.letters.iter().take_while(|&&l| l == letter).count();
        (
            run,
            ReducedWord {
                letters: self.letters[run..].to_vec(),
            },
        )
    }

    /// Drops the first letter; the identity stays the identity.
    pub fn tail(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().skip(1).copied().collect(),
        }
    }

    pub fn mul_word(&self, other: &ReducedWord) -> ReducedWord {
        let mut cancel = 0;
        while cancel < self.len()
            && cancel < other.len()
            && self.letters[self.len() - 1 - cancel] == other.letters[cancel].inv()
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        ReducedWord { letters }
    }

    /// Left multiplication by a single letter.
    pub fn prepend(&self, letter: Letter) -> ReducedWord {
        if self.first() == Some(letter.inv()) {
            self.tail()
        } else {
            let mut letters = Vec::with_capacity(self.len() + 1);
            letters.push(letter);
            letters.extend_from_slice(&self.letters);
            ReducedWord { letters }
        }
    }

    /// Applies a map on letters that extends to an automorphism permuting
    /// the generators up to sign. Such maps preserve reducedness.
    fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().map(|&l| f(l)).collect(),
        }
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &ReducedWord {
    type Output = ReducedWord;

    fn mul(self, rhs: &ReducedWord) -> ReducedWord {
        self.mul_word(rhs)
    }
}

impl Mul for ReducedWord {
    type Output = ReducedWord;

    fn mul(self, rhs: ReducedWord) -> ReducedWord {
        self.mul_word(&rhs)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("e");
        }
        for l in &self.letters {
            match l.to_char() {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "[{}{}]", l.generator, if l.inverse { "'" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl FromStr for ReducedWord {
    type Err = WordError;

    /// Accepts the canonical text form; unreduced input is reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(ReducedWord::identity());
        }
        let letters = s
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReducedWord::from_letters(letters))
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Convenience parser for literals in tests and examples.
///
/// # Panics
/// On characters outside `a-z`, `A-Z`, or the identity `e` as a whole word.
pub fn w(s: &str) -> ReducedWord {
    s.parse().expect("invalid word literal")
}

/// The free group `F_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreeGroup {
    rank: u16,
}

impl FreeGroup {
    pub fn new(rank: u16) -> Result<Self, WordError> {
        if rank < 2 {
            return Err(WordError::RankTooSmall { rank, min: 2 });
        }
        Ok(FreeGroup { rank })
    }

    pub fn rank(self) -> u16 {
        self.rank
    }

    /// All `2d` letters in letter order.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (1..=self.rank).flat_map(|g| {
            [false, true].into_iter().map(move |inverse| Letter {
                generator: g,
                inverse,
            })
        })
    }

    pub fn contains(self, x: &ReducedWord) -> bool {
        x.max_generator() <= self.rank
    }

    /// Words of length exactly `n`, in letter-lexicographic order.
    pub fn sphere(self, n: usize) -> Vec<ReducedWord> {
        let mut layer = vec![ReducedWord::identity()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(layer.len() * (2 * self.rank as usize));
            for word in &layer {
                for l in self.letters() {
                    if word.last() == Some(l.inv()) {
                        continue;
                    }
                    let mut letters = word.letters.clone();
                    letters.push(l);
                    next.push(ReducedWord { letters });
                }
            }
            layer = next;
        }
        layer
    }

    /// `B_R`: all words of length at most `radius`, length-lex ordered.
    pub fn ball(self, radius: usize) -> Vec<ReducedWord> {
        let mut out = vec![ReducedWord::identity()];
        let mut layer = vec![ReducedWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::with_capacity(layer.len() * (2 * self.rank as usize));
            for word in &layer {
                for l in self.letters() {
                    if word.last() == Some(l.inv()) {
                        continue;
                    }
                    let mut letters = word.letters.clone();
                    letters.push(l);
                    next.push(ReducedWord { letters });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Closed-form `|B_R| = 1 + 2d((2d-1)^R - 1)/(2d-2)`.
    pub fn ball_size(self, radius: usize) -> u128 {
        let d = u128::from(self.rank);
        let mut total = 1u128;
        let mut sphere = 2 * d;
        for _ in 0..radius {
            total += sphere;
            sphere *= 2 * d - 1;
        }
        total
    }

    /// The automorphism exchanging the first two generators. Rank 2 only.
    pub fn alpha(self, x: &ReducedWord) -> Result<ReducedWord, WordError> {
        if self.rank != 2 {
            return Err(WordError::RankMismatch {
                expected: 2,
                actual: self.rank,
            });
        }
        if !self.contains(x) {
            return Err(WordError::NotInRank(self.rank));
        }
        Ok(swap_ab(x))
    }

    /// The automorphism sending every generator to its inverse.
    pub fn beta(self, x: &ReducedWord) -> Result<ReducedWord, WordError> {
        if !self.contains(x) {
            return Err(WordError::NotInRank(self.rank));
        }
        Ok(invert_letters(x))
    }
}

/// `x*y`, freely reduced.
pub fn multiply(x: &ReducedWord, y: &ReducedWord) -> ReducedWord {
    x.mul_word(y)
}

pub fn ball(radius: usize, rank: u16) -> Result<Vec<ReducedWord>, WordError> {
    Ok(FreeGroup::new(rank)?.ball(radius))
}

/// Membership in `W_{p_1} ∪ … ∪ W_{p_n}` where `W_p` is the set of reduced
/// words beginning with `p`, except `W_e = {e}`.
pub fn prefix_member<'a, I>(x: &ReducedWord, prefixes: I) -> bool
where
    I: IntoIterator<Item = &'a ReducedWord>,
{
    prefixes.into_iter().any(|p| {
        if p.is_identity() {
            x.is_identity()
        } else {
            x.starts_with(p)
        }
    })
}

/// Exchanges `a <-> b` (and `A <-> B`); other letters are untouched.
/// Callers working in `F_2` should prefer [`FreeGroup::alpha`], which
/// checks the rank.
pub fn swap_ab(x: &ReducedWord) -> ReducedWord {
    x.map_letters(|l| match l.generator {
        1 => Letter {
            generator: 2,
            inverse: l.inverse,
        },
        2 => Letter {
            generator: 1,
            inverse: l.inverse,
        },
        _ => l,
    })
}

/// Sends every generator to its inverse.
pub fn invert_letters(x: &ReducedWord) -> ReducedWord {
    x.map_letters(Letter::inv)
}

pub fn alpha(x: &ReducedWord, rank: u16) -> Result<ReducedWord, WordError> {
    FreeGroup::new(rank)?.alpha(x)
}

pub fn beta(x: &ReducedWord) -> ReducedWord {
    invert_letters(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> FreeGroup {
        FreeGroup::new(2).unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(multiply(&w("ab"), &w("Ba")), w("aa"));
        assert_eq!(multiply(&w("abA"), &w("e")), w("abA"));
        assert_eq!(multiply(&w("a"), &w("A")), ReducedWord::identity());
        assert_eq!(multiply(&w("abA"), &w("abA").inverse()), w("e"));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("e").to_string(), "e");
        assert_eq!(w("aBBa").to_string(), "aBBa");
        assert_eq!(w("aAb").to_string(), "b");
        assert!("ab1".parse::<ReducedWord>().is_err());
    }

    #[test]
    fn ball_counts() {
        let g = f2();
        assert_eq!(g.ball(0), vec![ReducedWord::identity()]);
        assert_eq!(g.ball(2).len(), 17);
        for r in 1..=6 {
            assert_eq!(g.sphere(r).len() as u128, 4 * 3u128.pow(r as u32 - 1));
            assert_eq!(g.ball(r).len() as u128, 2 * 3u128.pow(r as u32) - 1);
        }
        let g3 = FreeGroup::new(3).unwrap();
        let expected: usize = 1 + (1..=3).map(|n| 6 * 5usize.pow(n - 1)).sum::<usize>();
        assert_eq!(g3.ball(3).len(), expected);
        assert_eq!(expected, 187);
    }

    #[test]
    fn ball_order_is_length_lex() {
        let words = f2().ball(2);
        let text: Vec<String> = words.iter().take(9).map(|x| x.to_string()).collect();
        assert_eq!(text, ["e", "a", "A", "b", "B", "aa", "ab", "aB", "AA"]);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(f2().ball(3), f2().ball(3));
    }

    #[test]
    fn sphere_recursion() {
        for d in 2..=4u16 {
            let g = FreeGroup::new(d).unwrap();
            assert_eq!(g.sphere(1).len(), 2 * d as usize);
            for n in 1..4 {
                assert_eq!(g.sphere(n + 1).len(), (2 * d as usize - 1) * g.sphere(n).len());
            }
            assert_eq!(g.ball(4).len() as u128, g.ball_size(4));
        }
    }

    #[test]
    fn prefix_membership() {
        let bs = [w("b"), w("B")];
        assert!(prefix_member(&w("bA"), &bs));
        assert!(!prefix_member(&w("ab"), &bs));
        assert!(prefix_member(&w("e"), &[w("e")]));
        assert!(!prefix_member(&w("b"), &[w("e")]));
        assert!(!prefix_member(&w("e"), &bs));
    }

    #[test]
    fn alpha_beta() {
        let g = f2();
        assert_eq!(g.alpha(&w("aB")).unwrap(), w("bA"));
        assert_eq!(g.alpha(&w("e")).unwrap(), w("e"));
        assert_eq!(beta(&w("ab")), w("AB"));
        assert_eq!(beta(&w("e")), w("e"));
        let g3 = FreeGroup::new(3).unwrap();
        assert!(matches!(
            g3.alpha(&w("a")),
            Err(WordError::RankMismatch { expected: 2, actual: 3 })
        ));
        for x in g.ball(4) {
            let ax = g.alpha(&x).unwrap();
            assert_eq!(g.alpha(&ax).unwrap(), x);
            assert_eq!(ax.len(), x.len());
            assert_eq!(beta(&beta(&x)), x);
            assert_eq!(beta(&ax), g.alpha(&beta(&x)).unwrap());
        }
    }

    #[test]
    fn length_parity_over_ball() {
        let b4 = f2().ball(4);
        for x in b4.iter().step_by(7) {
            for y in b4.iter().step_by(5) {
                let p = multiply(x, y);
                assert!(p.len() <= x.len() + y.len());
                assert_eq!(p.len() % 2, (x.len() + y.len()) % 2);
            }
        }
    }

    #[test]
    fn split_run_and_power() {
        let a = Letter::new(1, false).unwrap();
        let (run, rest) = w("aaab").split_run(a);
        assert_eq!(run, 3);
        assert_eq!(rest, w("b"));
        assert_eq!(ReducedWord::power(1, -3), w("AAA"));
        assert_eq!(ReducedWord::power(2, 0), w("e"));
    }

    fn arb_word() -> impl Strategy<Value = ReducedWord> {
        proptest::collection::vec((1u16..=3, any::<bool>()), 0..12).prop_map(|v| {
            ReducedWord::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(x in arb_word(), y in arb_word(), z in arb_word()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn reduction_is_idempotent(x in arb_word()) {
            prop_assert_eq!(ReducedWord::from_letters(x.letters().iter().copied()), x.clone());
            prop_assert_eq!(&x * &x.inverse(), ReducedWord::identity());
        }

        #[test]
        fn text_form_round_trips(x in arb_word()) {
            prop_assert_eq!(x.to_string().parse::<ReducedWord>().unwrap(), x);
        }
    }
}
