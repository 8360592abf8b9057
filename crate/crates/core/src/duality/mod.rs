//! Pairings, polars, dual norms, Hahn–Banach witnesses, representing vectors
//! and uniform bounds on the finite-rank modules `C̃ⁿ`.
//!
//! The pairing is the bilinear form `b(u, v) = Σ u_i v_i`, with no complex
//! conjugation; conjugates appear only inside Hahn–Banach witnesses.

mod functional;
mod ops;

use serde::Serialize;
use thiserror::Error;

use crate::genscalar::{ExtReal, GenVector, SymbolicNet};
use crate::sampled::SampledError;
use crate::seminorms::UltraSeminorm;

pub use functional::{Blackbox, Functional, Representative, SampledMap};
pub use ops::{
    dual_norm, hahn_banach_witness, recover_representor, uniform_bound, DualNormReport, DualNormRow,
    FamilyShape, HahnBanach, Recovery, UniformBound, HB_ZERO_THRESHOLD,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DualityError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("probe verification failed: |T(u) - b(u, y)|_e = {residual:e} at probe {probe}")]
    NonLinear { residual: f64, probe: usize },
    #[error("functional has no exact representative")]
    NotExact,
    #[error(transparent)]
    Sampled(#[from] SampledError),
}

/// The norms on `Cⁿ` with exact dual constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Euclidean,
    Max,
}

/// `b(u, v) = Σ u_i v_i`.
pub fn pair(u: &GenVector, v: &GenVector) -> Result<SymbolicNet, DualityError> {
    if u.dim() != v.dim() {
        return Err(DualityError::DimMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(u
        .coords()
        .iter()
        .zip(v.coords())
        .fold(SymbolicNet::zero(), |acc, (a, b)| &acc + &(a * b)))
}

/// `P_v(u) = |b(u, v)|_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakSeminorm {
    pub v: GenVector,
}

impl WeakSeminorm {
    pub fn new(v: GenVector) -> Self {
        Self { v }
    }

    pub fn try_valuation(&self, u: &GenVector) -> Result<ExtReal, DualityError> {
        Ok(pair(u, &self.v)?.valuation())
    }
}

impl UltraSeminorm<GenVector> for WeakSeminorm {
    fn label(&self) -> String {
        let parts: Vec<String> = self.v.coords().iter().map(|c| c.to_string()).collect();
        format!("|b(., [{}])|_e", parts.join(", "))
    }

    /// Panics on a dimension mismatch; use [`WeakSeminorm::try_valuation`] to
    /// handle it.
    fn valuation(&self, u: &GenVector) -> ExtReal {
        self.try_valuation(u).expect("weak seminorm dimension")
    }
}

/// `val` of the polar gauge: `min_{u ∈ A} val b(u, v)`, so that
/// `P_{A°}(v) = sup_{u ∈ A} |b(u, v)|_e = e^{-polar_gauge_val}`.
pub fn polar_gauge_val(a: &[GenVector], v: &GenVector) -> Result<ExtReal, DualityError> {
    let vals = a
        .iter()
        .map(|u| Ok(pair(u, v)?.valuation()))
        .collect::<Result<Vec<_>, DualityError>>()?;
    Ok(ExtReal::min_of(&vals))
}

pub fn polar_gauge(a: &[GenVector], v: &GenVector) -> Result<f64, DualityError> {
    Ok(polar_gauge_val(a, v)?.abs_e())
}

/// `v ∈ A°`, i.e. `|b(u, v)|_e ≤ 1` for every `u ∈ A`.
pub fn polar_contains(a: &[GenVector], v: &GenVector) -> Result<bool, DualityError> {
    Ok(polar_gauge_val(a, v)? >= ExtReal::zero())
}
