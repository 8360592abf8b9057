use std::ops::Index;

use num_complex::Complex64;

use super::{ExtReal, SymbolicNet};

/// An element of C̃ⁿ (equivalently of `G_E` with `E = Cⁿ`), coordinate-wise
/// in the symbolic class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenVector(pub Vec<SymbolicNet>);

impl GenVector {
    pub fn new(coords: Vec<SymbolicNet>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![SymbolicNet::zero(); dim])
    }

    /// The `i`-th unit vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = SymbolicNet::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[SymbolicNet] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(SymbolicNet::is_zero)
    }

    /// `val(‖u_ε‖_E)` for any norm on `Cⁿ`: all norms on a finite-dimensional
    /// space are equivalent up to constants, and in the symbolic class this is
    /// the minimal coordinate valuation.
    pub fn norm_valuation(&self) -> ExtReal {
        ExtReal::min_of(self.0.iter().map(|c| c.valuation()).collect::<Vec<_>>().iter())
    }

    pub fn norm_e(&self) -> f64 {
        self.norm_valuation().abs_e()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, lambda: &SymbolicNet) -> Self {
        Self(self.0.iter().map(|a| a * lambda).collect())
    }

    pub fn shift(&self, by: &super::Rational) -> Self {
        Self(self.0.iter().map(|a| a.shift(by)).collect())
    }

    pub fn eval(&self, eps: f64) -> Vec<Complex64> {
        self.0.iter().map(|c| c.eval(eps)).collect()
    }
}

impl Index<usize> for GenVector {
    type Output = SymbolicNet;
    fn index(&self, i: usize) -> &SymbolicNet {
        &self.0[i]
    }
}

impl From<Vec<SymbolicNet>> for GenVector {
    fn from(v: Vec<SymbolicNet>) -> Self {
        Self(v)
    }
}
