use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{pair, DualityError};
use crate::genscalar::{GenVector, SymbolicNet};
use crate::sampled::{SampleGrid, SampledError, SampledNet};

/// A per-ε representative `(ε, u_ε) ↦ T_ε(u_ε)`.
pub type SampledMap = Arc<dyn Fn(f64, &[Complex64]) -> Complex64 + Send + Sync>;

/// How a black-box functional acts.
#[derive(Clone)]
pub enum Representative {
    /// `u ↦ Σ c_k u^{α_k}` with symbolic coefficients; exact and sampled.
    Polynomial(Vec<(SymbolicNet, Vec<u32>)>),
    /// Only evaluable on samples.
    Sampled(SampledMap),
}

impl fmt::Debug for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representative::Polynomial(terms) => f.debug_tuple("Polynomial").field(terms).finish(),
            Representative::Sampled(_) => f.write_str("Sampled(..)"),
        }
    }
}

/// A black-box map `C̃ⁿ → C̃`; the handle must be pure.
#[derive(Clone, Debug)]
pub struct Blackbox {
    pub id: String,
    pub dim: usize,
    pub repr: Representative,
}

impl Blackbox {
    /// `u ↦ Σ_i c_i x_i^{α_i}`-style polynomial maps.
    pub fn polynomial(id: impl Into<String>, dim: usize, terms: Vec<(SymbolicNet, Vec<u32>)>) -> Self {
        Self {
            id: id.into(),
            dim,
            repr: Representative::Polynomial(terms),
        }
    }

    /// `u ↦ Σ_i u_i²`, i.e. `b(u, u)`.
    pub fn quadratic(dim: usize) -> Self {
        let terms = (0..dim)
            .map(|i| {
                let mut a = vec![0; dim];
                a[i] = 2;
                (SymbolicNet::one(), a)
            })
            .collect();
        Self::polynomial("quadratic", dim, terms)
    }
}

/// An element of `L(C̃ⁿ, C̃)` or a candidate for one.
#[derive(Clone, Debug)]
pub enum Functional {
    /// `u ↦ b(u, w)`.
    PairingVector(GenVector),
    Blackbox(Blackbox),
}

impl Functional {
    pub fn dim(&self) -> usize {
        match self {
            Functional::PairingVector(w) => w.dim(),
            Functional::Blackbox(b) => b.dim,
        }
    }

    fn check_dim(&self, got: usize) -> Result<(), DualityError> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(DualityError::DimMismatch {
                expected: self.dim(),
                got,
            })
        }
    }

    /// `T(u)` in exact arithmetic, `None` for sampled-only black boxes.
    pub fn apply_exact(&self, u: &GenVector) -> Result<Option<SymbolicNet>, DualityError> {
        self.check_dim(u.dim())?;
        Ok(match self {
            Functional::PairingVector(w) => Some(pair(u, w)?),
            Functional::Blackbox(b) => match &b.repr {
                Representative::Polynomial(terms) => Some(
                    terms
                        .iter()
                        .map(|(c, alpha)| {
                            alpha
                                .iter()
                                .zip(u.coords())
                                .fold(c.clone(), |acc, (a, x)| &acc * &x.pow(*a))
                        })
                        .fold(SymbolicNet::zero(), |acc, t| &acc + &t),
                ),
                Representative::Sampled(_) => None,
            },
        })
    }

    /// `T_ε(u_ε)` at one ε.
    pub fn apply_sampled(&self, eps: f64, u_eps: &[Complex64]) -> Complex64 {
        match self {
            Functional::PairingVector(w) => w
                .eval(eps)
                .iter()
                .zip(u_eps)
                .map(|(a, b)| a * b)
                .sum(),
            Functional::Blackbox(b) => match &b.repr {
                Representative::Polynomial(terms) => terms
                    .iter()
                    .map(|(c, alpha)| {
                        alpha
                            .iter()
                            .zip(u_eps)
                            .fold(c.eval(eps), |acc, (a, x)| acc * x.powu(*a))
                    })
                    .sum(),
                Representative::Sampled(f) => f(eps, u_eps),
            },
        }
    }

    /// `ε_k ↦ T_{ε_k}(u_{ε_k})` on the grid.
    pub fn sample(&self, u: &GenVector, grid: SampleGrid) -> Result<SampledNet, DualityError> {
        self.check_dim(u.dim())?;
        let values = grid
            .points()
            .map(|(_, eps)| self.apply_sampled(eps, &u.eval(eps)))
            .collect();
        SampledNet::new(grid, values).map_err(|e: SampledError| DualityError::Sampled(e))
    }

    pub fn scale(&self, lambda: &SymbolicNet) -> Functional {
        match self {
            Functional::PairingVector(w) => Functional::PairingVector(w.scale(lambda)),
            Functional::Blackbox(b) => {
                let repr = match &b.repr {
                    Representative::Polynomial(terms) => Representative::Polynomial(
                        terms.iter().map(|(c, a)| (c * lambda, a.clone())).collect(),
                    ),
                    Representative::Sampled(f) => {
                        let f = f.clone();
                        let lambda = lambda.clone();
                        Representative::Sampled(Arc::new(move |eps, u| lambda.eval(eps) * f(eps, u)))
                    }
                };
                Functional::Blackbox(Blackbox {
                    id: format!("({lambda})*{}", b.id),
                    dim: b.dim,
                    repr,
                })
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Functional::PairingVector(w) => {
                let parts: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
                format!("b(., [{}])", parts.join(", "))
            }
            Functional::Blackbox(b) => b.id.clone(),
        }
    }
}
