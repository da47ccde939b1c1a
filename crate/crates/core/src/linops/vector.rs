use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{Cplx, Real};
use crate::words::ReducedWord;

/// Entries with modulus below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// A finitely supported function `F_d -> C`, i.e. an element of `C[F_d]`.
///
/// Iteration is in word order, so everything built from a `FinVector` is
/// reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct FinVector<T: Real> {
    entries: BTreeMap<ReducedWord, Cplx<T>>,
}

impl<T: Real> Default for FinVector<T> {
    fn default() -> Self {
        FinVector {
            entries: BTreeMap::new(),
        }
    }
}

fn negligible<T: Real>(c: Cplx<T>) -> bool {
    c.norm() < T::of(PRUNE_THRESHOLD)
}

impl<T: Real> FinVector<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `δ_x`.
    pub fn delta(x: ReducedWord) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(x, Cplx::new(T::one(), T::zero()));
        FinVector { entries }
    }

    /// Sums repeated words and prunes negligible entries.
    pub fn from_entries<I: IntoIterator<Item = (ReducedWord, Cplx<T>)>>(entries: I) -> Self {
        let mut v = Self::zero();
        for (x, c) in entries {
            v.add_at(x, c);
        }
        v
    }

    pub fn get(&self, x: &ReducedWord) -> Cplx<T> {
        self.entries.get(x).copied().unwrap_or_else(Cplx::zero)
    }

    /// `v(x) += c`, pruning the entry if it becomes negligible.
    pub fn add_at(&mut self, x: ReducedWord, c: Cplx<T>) {
        match self.entries.entry(x) {
            btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if negligible(s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            btree_map::Entry::Vacant(e) => {
                if !negligible(c) {
                    e.insert(c);
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReducedWord, &Cplx<T>)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ReducedWord> {
        self.entries.keys()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩ = Σ self(x)·conj(other(x))`.
    pub fn inner(&self, other: &FinVector<T>) -> Cplx<T> {
        let (small, large, flip) = if self.entries.len() <= other.entries.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Cplx::zero();
        for (x, c) in &small.entries {
            if let Some(d) = large.entries.get(x) {
                acc = acc + if flip { *d * c.conj() } else { *c * d.conj() };
            }
        }
        acc
    }

    pub fn scale(&self, c: Cplx<T>) -> FinVector<T> {
        FinVector::from_entries(self.entries.iter().map(|(x, v)| (x.clone(), *v * c)))
    }

    pub fn normalized(&self) -> FinVector<T> {
        let n = self.norm();
        self.scale(Cplx::new(T::one() / n, T::zero()))
    }

    /// Pushes every basis word through a bijection of `F_d`.
    pub fn map_words(&self, f: impl Fn(&ReducedWord) -> ReducedWord) -> FinVector<T> {
        FinVector::from_entries(self.entries.iter().map(|(x, c)| (f(x), *c)))
    }

    /// `λ_g v`, i.e. `δ_x ↦ δ_{gx}`.
    pub fn translate(&self, g: &ReducedWord) -> FinVector<T> {
        FinVector {
            entries: self.entries.iter().map(|(x, c)| (g * x, *c)).collect(),
        }
    }
}

impl<T: Real> AddAssign<&FinVector<T>> for FinVector<T> {
    fn add_assign(&mut self, rhs: &FinVector<T>) {
        for (x, c) in &rhs.entries {
            self.add_at(x.clone(), *c);
        }
    }
}

impl<T: Real> Add for &FinVector<T> {
    type Output = FinVector<T>;

    fn add(self, rhs: &FinVector<T>) -> FinVector<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Real> Neg for &FinVector<T> {
    type Output = FinVector<T>;

    fn neg(self) -> FinVector<T> {
        FinVector {
            entries: self.entries.iter().map(|(x, c)| (x.clone(), -*c)).collect(),
        }
    }
}

impl<T: Real> Sub for &FinVector<T> {
    type Output = FinVector<T>;

    fn sub(self, rhs: &FinVector<T>) -> FinVector<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Mul<Cplx<T>> for &FinVector<T> {
    type Output = FinVector<T>;

    fn mul(self, rhs: Cplx<T>) -> FinVector<T> {
        self.scale(rhs)
    }
}

impl<T: Real> FromIterator<(ReducedWord, Cplx<T>)> for FinVector<T> {
    fn from_iter<I: IntoIterator<Item = (ReducedWord, Cplx<T>)>>(iter: I) -> Self {
        FinVector::from_entries(iter)
    }
}

/// `⟨u, v⟩`, linear in the first argument.
pub fn inner<T: Real>(u: &FinVector<T>, v: &FinVector<T>) -> Cplx<T> {
    u.inner(v)
}

/// The left regular representation: `(λ_g v)(x) = v(g⁻¹x)`.
pub fn lambda_apply<T: Real>(g: &ReducedWord, v: &FinVector<T>) -> FinVector<T> {
    v.translate(g)
}
