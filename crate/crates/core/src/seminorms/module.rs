use crate::genscalar::{ExtReal, GenScalar, GenVector, Rational, SymbolicNet};

/// The C̃-module operations the seminorm machinery needs.
pub trait GenModule: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by a scalar.
    fn scale(&self, lambda: &SymbolicNet) -> Self;
    /// Multiplication by `ε^by`.
    fn shift(&self, by: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Modules that are the scalars themselves.
pub trait Scalar {
    fn scalar_valuation(&self) -> ExtReal;
}

impl GenModule for SymbolicNet {
    fn zero_like(&self) -> Self {
        SymbolicNet::zero()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, lambda: &SymbolicNet) -> Self {
        self * lambda
    }

    fn shift(&self, by: &Rational) -> Self {
        SymbolicNet::shift(self, by)
    }

    fn is_zero(&self) -> bool {
        SymbolicNet::is_zero(self)
    }
}

impl Scalar for SymbolicNet {
    fn scalar_valuation(&self) -> ExtReal {
        self.valuation()
    }
}

impl GenModule for GenScalar {
    fn zero_like(&self) -> Self {
        GenScalar::Symbolic(SymbolicNet::zero())
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, lambda: &SymbolicNet) -> Self {
        self * &GenScalar::Symbolic(lambda.clone())
    }

    fn shift(&self, by: &Rational) -> Self {
        match self {
            GenScalar::Symbolic(n) => GenScalar::Symbolic(n.shift(by)),
            GenScalar::Piecewise(p) => GenScalar::Piecewise(p.map(|n| n.shift(by))),
        }
    }

    fn is_zero(&self) -> bool {
        self.valuation().is_infinite()
    }
}

impl Scalar for GenScalar {
    fn scalar_valuation(&self) -> ExtReal {
        self.valuation()
    }
}

impl GenModule for GenVector {
    fn zero_like(&self) -> Self {
        GenVector::zeros(self.dim())
    }

    fn add(&self, other: &Self) -> Self {
        GenVector::add(self, other)
    }

    fn neg(&self) -> Self {
        GenVector::neg(self)
    }

    fn scale(&self, lambda: &SymbolicNet) -> Self {
        GenVector::scale(self, lambda)
    }

    fn shift(&self, by: &Rational) -> Self {
        GenVector::shift(self, by)
    }

    fn is_zero(&self) -> bool {
        GenVector::is_zero(self)
    }
}
