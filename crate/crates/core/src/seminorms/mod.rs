//! Ultra-pseudo-seminorms over C̃-modules, gauges of ball intersections, sharp
//! metrics, boundedness scans, continuity estimates and quotient seminorms.
//!
//! Every seminorm here is of the form `P = e^{-val_P}` and is represented by
//! its exact valuation, so inequalities between seminorms reduce to
//! comparisons in [`ExtReal`].

mod bounded;
mod gauge;
mod module;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::genscalar::{ExtReal, GenVector, Rational};

pub use bounded::{
    continuity_estimate, is_bounded, is_bounded_generated, ContinuityEstimate, GrowthScan,
    Violation,
    SeminormReport, SeminormSummary, Witness,
};
pub use gauge::{Ball, ConvexSetSpec};
pub use module::GenModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeminormError {
    #[error("quotient seminorms need a max-type seminorm, got {0}")]
    UnsupportedQ(String),
    #[error("a convex set spec needs at least one ball")]
    EmptySpec,
    #[error("a seminorm family needs at least one member")]
    EmptyFamily,
    #[error("coordinate {index} out of range for dimension {dim}")]
    MaskOutOfRange { index: usize, dim: usize },
}

/// An ultra-pseudo-seminorm `P = e^{-val_P}` on a module `M`.
pub trait UltraSeminorm<M>: Send + Sync {
    fn label(&self) -> String;

    /// `val_P(u)`; `+∞` exactly when `P(u) = 0`.
    fn valuation(&self, u: &M) -> ExtReal;

    fn eval(&self, u: &M) -> f64 {
        self.valuation(u).abs_e()
    }

    /// The coordinate description, when the seminorm is a weighted max.
    fn max_type(&self) -> Option<&CoordinateMaxNorm> {
        None
    }
}

/// `|·|_e` on the scalars.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AbsE;

impl<M: GenModule> UltraSeminorm<M> for AbsE
where
    M: module::Scalar,
{
    fn label(&self) -> String {
        "abs_e".into()
    }

    fn valuation(&self, u: &M) -> ExtReal {
        u.scalar_valuation()
    }
}

/// `u ↦ |ε^s u|_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledAbsE {
    pub shift: Rational,
}

impl ScaledAbsE {
    pub fn new(shift: Rational) -> Self {
        Self { shift }
    }
}

impl<M: GenModule + module::Scalar> UltraSeminorm<M> for ScaledAbsE {
    fn label(&self) -> String {
        format!("abs_e(eps^{} .)", self.shift)
    }

    fn valuation(&self, u: &M) -> ExtReal {
        u.scalar_valuation().shift(&self.shift)
    }
}

/// `u ↦ max_i e^{-w_i} |u_i|_e` over the coordinates with a weight; the
/// unweighted coordinates are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateMaxNorm {
    pub weights: Vec<Option<Rational>>,
}

impl CoordinateMaxNorm {
    /// `max_i |u_i|_e`, the max-ultranorm on C̃ⁿ.
    pub fn max_norm(dim: usize) -> Self {
        Self {
            weights: vec![Some(Rational::zero()); dim],
        }
    }

    /// `|u_i|_e` for a single coordinate.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut weights = vec![None; dim];
        weights[i] = Some(Rational::zero());
        Self { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

impl UltraSeminorm<GenVector> for CoordinateMaxNorm {
    fn label(&self) -> String {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|w| w.as_ref().map_or("-".into(), |w| w.to_string()))
            .collect();
        format!("max[{}]", parts.join(","))
    }

    fn valuation(&self, u: &GenVector) -> ExtReal {
        let vals: Vec<ExtReal> = self
            .weights
            .iter()
            .zip(u.coords())
            .filter_map(|(w, c)| w.as_ref().map(|w| c.valuation().shift(w)))
            .collect();
        ExtReal::min_of(&vals)
    }

    fn max_type(&self) -> Option<&CoordinateMaxNorm> {
        Some(self)
    }
}

/// A seminorm given by a valuation closure.
#[derive(Clone)]
pub struct FnSeminorm<M> {
    label: String,
    val: Arc<dyn Fn(&M) -> ExtReal + Send + Sync>,
}

impl<M> FnSeminorm<M> {
    pub fn new(label: impl Into<String>, val: impl Fn(&M) -> ExtReal + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            val: Arc::new(val),
        }
    }
}

impl<M> fmt::Debug for FnSeminorm<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSeminorm").field("label", &self.label).finish()
    }
}

impl<M> UltraSeminorm<M> for FnSeminorm<M> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn valuation(&self, u: &M) -> ExtReal {
        (self.val)(u)
    }
}

/// A seminorm defined on the representatives of `C̃ⁿ / M`, with `M` spanned by
/// the masked coordinate axes.
pub struct QuotientSeminorm {
    base: CoordinateMaxNorm,
    mask: Vec<usize>,
}

impl QuotientSeminorm {
    pub fn new(q: &dyn UltraSeminorm<GenVector>, mask: &[usize]) -> Result<Self, SeminormError> {
        let base = q
            .max_type()
            .ok_or_else(|| SeminormError::UnsupportedQ(q.label()))?
            .clone();
        if let Some(&index) = mask.iter().find(|&&i| i >= base.dim()) {
            return Err(SeminormError::MaskOutOfRange {
                index,
                dim: base.dim(),
            });
        }
        Ok(Self {
            base,
            mask: mask.to_vec(),
        })
    }

    /// The representative of `[u]` with the masked coordinates set to zero.
    pub fn reduce(&self, u: &GenVector) -> GenVector {
        let mut v = u.clone();
        for &i in &self.mask {
            v.0[i] = crate::genscalar::SymbolicNet::zero();
        }
        v
    }
}

impl UltraSeminorm<GenVector> for QuotientSeminorm {
    fn label(&self) -> String {
        format!("quotient({}; mask {:?})", self.base.label(), self.mask)
    }

    fn valuation(&self, u: &GenVector) -> ExtReal {
        self.base.valuation(&self.reduce(u))
    }
}

/// `Q̇([u]) = inf_{v ∈ u + M} Q(v)`, attained at the coordinate reduction.
pub fn quotient_seminorm(
    q: &dyn UltraSeminorm<GenVector>,
    mask: &[usize],
    u: &GenVector,
) -> Result<ExtReal, SeminormError> {
    Ok(QuotientSeminorm::new(q, mask)?.valuation(u))
}

/// A finite, ordered family `P_0, P_1, …` (a truncation of a countable base).
pub struct SeminormFamily<M> {
    members: Vec<Arc<dyn UltraSeminorm<M>>>,
}

impl<M> Clone for SeminormFamily<M> {
    fn clone(&self) -> Self {
        Self {
            members: self.members.clone(),
        }
    }
}

/// The sharp metric together with the exact valuation of each term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricValue {
    pub value: f64,
    /// `val_{P_n}(u − v)` for each member.
    pub term_valuations: Vec<ExtReal>,
}

impl MetricValue {
    /// `d(u, v) = 0`, decided exactly.
    pub fn is_zero(&self) -> bool {
        self.term_valuations.iter().all(ExtReal::is_infinite)
    }
}

/// `2^{-n} min(e^{-v}, 1)`.
fn metric_term(n: usize, v: &ExtReal) -> f64 {
    let p = match v {
        ExtReal::Infinity => 0.0,
        ExtReal::Finite(q) if q > &Rational::zero() => v.abs_e(),
        ExtReal::Finite(_) => 1.0,
    };
    p * 2f64.powi(-(n as i32))
}

impl<M: GenModule> SeminormFamily<M> {
    pub fn new(members: Vec<Arc<dyn UltraSeminorm<M>>>) -> Result<Self, SeminormError> {
        if members.is_empty() {
            return Err(SeminormError::EmptyFamily);
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Arc<dyn UltraSeminorm<M>>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|p| p.label()).collect()
    }

    /// `d(u, v) = Σ_n 2^{-n} min(P_n(u − v), 1)`.
    pub fn sharp_metric(&self, u: &M, v: &M) -> MetricValue {
        let d = u.sub(v);
        let term_valuations: Vec<ExtReal> = self.members.iter().map(|p| p.valuation(&d)).collect();
        let value = term_valuations
            .iter()
            .enumerate()
            .map(|(n, t)| metric_term(n, t))
            .sum();
        MetricValue {
            value,
            term_valuations,
        }
    }
}
