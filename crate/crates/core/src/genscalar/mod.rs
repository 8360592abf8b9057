//! The ring C̃ of complex generalized numbers, restricted to the exactly
//! representable class of finite monomial sums in ε and their piecewise
//! patchings on dyadic intervals.

mod complex;
mod ext;
mod limit;
mod net;
mod piecewise;
mod vector;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use complex::ComplexRational;
pub use ext::ExtReal;
pub use limit::{cauchy_patch_limit, CauchyLimit};
pub use net::{normalize, Monomial, SymbolicNet};
pub use piecewise::PiecewiseNet;
pub use vector::GenVector;

/// Exact rational numbers used for exponents and coefficients.
pub type Rational = num_rational::BigRational;

/// `serialize_with` helpers rendering rationals as `p/q` strings.
pub mod rational_serde {
    use super::Rational;

    pub fn one<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn opt<S: serde::Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.collect_str(q),
            None => s.serialize_none(),
        }
    }
}

/// Default truncation order for [`SymbolicNet::invert_truncated`].
pub const DEFAULT_INVERSE_ORDER: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenScalarError {
    #[error("cannot invert the zero net")]
    ZeroLeading,
    #[error("valuation gap condition val(u[k+1] - u[k]) > k fails at k = {0}")]
    GapViolation(usize),
    #[error("sequence too short: need {needed} elements, got {got}")]
    SequenceTooShort { needed: usize, got: usize },
    #[error("invalid piecewise net: {0}")]
    InvalidPiecewise(String),
}

/// An element of C̃ in one of its two exact representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenScalar {
    Symbolic(SymbolicNet),
    Piecewise(PiecewiseNet),
}

impl GenScalar {
    pub fn valuation(&self) -> ExtReal {
        match self {
            GenScalar::Symbolic(n) => n.valuation(),
            GenScalar::Piecewise(p) => p.valuation(),
        }
    }

    pub fn abs_e(&self) -> f64 {
        self.valuation().abs_e()
    }

    pub fn eval(&self, eps: f64) -> Complex64 {
        match self {
            GenScalar::Symbolic(n) => n.eval(eps),
            GenScalar::Piecewise(p) => p.eval(eps),
        }
    }

    pub fn to_piecewise(&self) -> PiecewiseNet {
        match self {
            GenScalar::Symbolic(n) => PiecewiseNet::from_symbolic(n.clone()),
            GenScalar::Piecewise(p) => p.clone(),
        }
    }

    fn lift(
        &self,
        other: &Self,
        sym: impl Fn(&SymbolicNet, &SymbolicNet) -> SymbolicNet,
    ) -> Self {
        match (self, other) {
            (GenScalar::Symbolic(a), GenScalar::Symbolic(b)) => GenScalar::Symbolic(sym(a, b)),
            _ => GenScalar::Piecewise(self.to_piecewise().combine(&other.to_piecewise(), sym)),
        }
    }
}

impl From<SymbolicNet> for GenScalar {
    fn from(n: SymbolicNet) -> Self {
        GenScalar::Symbolic(n)
    }
}

impl From<PiecewiseNet> for GenScalar {
    fn from(p: PiecewiseNet) -> Self {
        GenScalar::Piecewise(p)
    }
}

impl Add for &GenScalar {
    type Output = GenScalar;
    fn add(self, rhs: Self) -> GenScalar {
        self.lift(rhs, |a, b| a + b)
    }
}

impl Sub for &GenScalar {
    type Output = GenScalar;
    fn sub(self, rhs: Self) -> GenScalar {
        self.lift(rhs, |a, b| a - b)
    }
}

impl Mul for &GenScalar {
    type Output = GenScalar;
    fn mul(self, rhs: Self) -> GenScalar {
        self.lift(rhs, |a, b| a * b)
    }
}

impl Neg for &GenScalar {
    type Output = GenScalar;
    fn neg(self) -> GenScalar {
        match self {
            GenScalar::Symbolic(n) => GenScalar::Symbolic(-n),
            GenScalar::Piecewise(p) => GenScalar::Piecewise(-p),
        }
    }
}

/// Valuation of `u − v`; the sharp distance is `e^{-sharp_dist_val}`.
pub fn sharp_dist_val(u: &GenScalar, v: &GenScalar) -> ExtReal {
    (u - v).valuation()
}

/// The sharp ultrametric `|u − v|_e` on C̃.
pub fn sharp_dist(u: &GenScalar, v: &GenScalar) -> f64 {
    sharp_dist_val(u, v).abs_e()
}
