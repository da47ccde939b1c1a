use std::fmt;

use serde::{Serialize, Serializer};

use crate::pvv::{coef_a, coef_b};
use crate::scalar::Cplx;

/// Integer parameters a table entry may depend on: the window length `N`,
/// the row's `k`, and the box's run parameter `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymParams {
    pub n: i64,
    pub k: i64,
    pub l: i64,
}

/// `n·N + k·k + l·ℓ + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lin {
    pub n: i64,
    pub k: i64,
    pub l: i64,
    pub c: i64,
}

impl Lin {
    pub const fn new(n: i64, k: i64, l: i64, c: i64) -> Self {
        Lin { n, k, l, c }
    }

    pub fn eval(&self, p: &SymParams) -> i64 {
        self.n * p.n + self.k * p.k + self.l * p.l + self.c
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, name) in [(self.n, "N"), (self.k, "k"), (self.l, "ℓ")] {
            if coef == 0 {
                continue;
            }
            let sign = if coef < 0 { "-" } else if first { "" } else { "+" };
            let mag = coef.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if self.c != 0 || first {
            let sign = if self.c < 0 { "-" } else if first { "" } else { "+" };
            write!(f, "{sign}{}", self.c.abs())?;
        }
        Ok(())
    }
}

/// One multiplicative factor of a table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `√(lin/N)`.
    SqrtOverN(Lin),
    /// `s(k,N) = (√(k(k−1)) + √((N−k)(N−k+1)))/(4N)`.
    S,
    Int(i64),
    A,
    B,
    ConjA,
    ConjB,
    AbsA2,
    AbsB2,
}

/// A product of [`Factor`]s, the closed forms appearing in the tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sym(pub Vec<Factor>);

/// `s(k,N)`.
pub fn s_kn(k: f64, n: f64) -> f64 {
    ((k * (k - 1.0)).sqrt() + ((n - k) * (n - k + 1.0)).sqrt()) / (4.0 * n)
}

impl Factor {
    pub fn eval(&self, p: &SymParams) -> Cplx<f64> {
        let re = |x: f64| Cplx::new(x, 0.0);
        match self {
            Factor::SqrtOverN(lin) => re((lin.eval(p) as f64 / p.n as f64).sqrt()),
            Factor::S => re(s_kn(p.k as f64, p.n as f64)),
            Factor::Int(v) => re(*v as f64),
            Factor::A => coef_a(),
            Factor::B => coef_b(),
            Factor::ConjA => coef_a::<f64>().conj(),
            Factor::ConjB => coef_b::<f64>().conj(),
            Factor::AbsA2 => re(coef_a::<f64>().norm_sqr()),
            Factor::AbsB2 => re(coef_b::<f64>().norm_sqr()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::SqrtOverN(lin) => write!(f, "√(({lin})/N)"),
            Factor::S => write!(f, "s(k,N)"),
            Factor::Int(v) => write!(f, "{v}"),
            Factor::A => write!(f, "A"),
            Factor::B => write!(f, "B"),
            Factor::ConjA => write!(f, "conj(A)"),
            Factor::ConjB => write!(f, "conj(B)"),
            Factor::AbsA2 => write!(f, "|A|²"),
            Factor::AbsB2 => write!(f, "|B|²"),
        }
    }
}

impl Sym {
    pub fn eval(&self, p: &SymParams) -> Cplx<f64> {
        self.0
            .iter()
            .fold(Cplx::new(1.0, 0.0), |acc, f| acc * f.eval(p))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, fac) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

impl Serialize for Sym {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Shorthands used by the table encodings.
pub mod sym {
    use super::{Factor, Lin, Sym};

    /// `√((N−1)/N)`.
    pub const SQRT_N1: Factor = Factor::SqrtOverN(Lin::new(1, 0, 0, -1));
    /// `√((N−ℓ)/N)`.
    pub const SQRT_NL: Factor = Factor::SqrtOverN(Lin::new(1, 0, -1, 0));
    /// `√(ℓ/N)`.
    pub const SQRT_L: Factor = Factor::SqrtOverN(Lin::new(0, 0, 1, 0));
    /// `√((ℓ−1)/N)`.
    pub const SQRT_L1: Factor = Factor::SqrtOverN(Lin::new(0, 0, 1, -1));
    /// `√((N−ℓ−1)/N)`.
    pub const SQRT_NL1: Factor = Factor::SqrtOverN(Lin::new(1, 0, -1, -1));
    /// `√((N−ℓ+1)/N)`.
    pub const SQRT_NL_PLUS1: Factor = Factor::SqrtOverN(Lin::new(1, 0, -1, 1));
    /// `√((N−k)/N)`.
    pub const SQRT_NK: Factor = Factor::SqrtOverN(Lin::new(1, -1, 0, 0));
    /// `√(k/N)`.
    pub const SQRT_K: Factor = Factor::SqrtOverN(Lin::new(0, 1, 0, 0));

    pub fn of(f: &[Factor]) -> Sym {
        Sym(f.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::sym::*;
    use super::*;

    const P: SymParams = SymParams { n: 12, k: 3, l: 2 };

    #[test]
    fn cross_products_of_a_and_b() {
        let ab = of(&[Factor::A, Factor::ConjB]).eval(&P);
        let ba = of(&[Factor::ConjA, Factor::B]).eval(&P);
        assert!((ab - Cplx::new(0.0, 0.5)).norm() < 1e-15);
        assert!((ba - Cplx::new(0.0, -0.5)).norm() < 1e-15);
        assert!((of(&[Factor::AbsA2]).eval(&P).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn roots_evaluate() {
        let v = of(&[SQRT_N1, SQRT_NL, Factor::A]).eval(&P);
        let expected = (11.0f64 * 10.0 / 144.0).sqrt();
        assert!((v - coef_a::<f64>() * expected).norm() < 1e-15);
        assert_eq!(of(&[SQRT_NL1]).to_string(), "√((N-ℓ-1)/N)");
        assert_eq!(of(&[SQRT_K, Factor::ConjA]).to_string(), "√((k)/N)·conj(A)");
    }

    #[test]
    fn s_lower_bound() {
        let n = 12.0;
        for k in 2..12 {
            assert!(s_kn(k as f64, n) >= (n - 1.0) / (4.0 * n) - 1e-15);
        }
    }
}
