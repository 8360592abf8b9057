//! Generalized functions represented by symbolic expression nets
//! `(x, ε) ↦ u_ε(x)`, their derivative seminorms, compact-support bookkeeping
//! and point values.
//!
//! Spatial suprema are taken over uniform grids and are therefore lower bounds
//! for the true suprema. Derivatives are always symbolic.

mod expr;
mod point;
mod seminorm;
mod sexp;
mod support;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::genscalar::Rational;
use crate::sampled::SampledError;

pub use expr::Expr;
pub use point::{point_value, GenPoint};
pub use seminorm::{
    ginf_val, ginf_val_with, gtau_seminorm, negligibility, negligibility_with, schwartz_seminorm,
    seminorm_pkj, GinfReport,
    GinfVerdict, NegligibilityMode, PkjSpec, GINF_TOLERANCE, GTAU_RADIUS, SCHWARTZ_RADII,
    SHELL_RATIO,
};
pub use sexp::{parse_expr, ParseError};
pub use support::{gc_converges, GcReason, GcVerdict, Support, SupportedNet};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FuncError {
    #[error("non-finite value at x = {x:?}, eps = {eps:e}")]
    NonFinite { x: Vec<f64>, eps: f64 },
    #[error("truncation at radius {radius} not verified: {detail}")]
    TruncationWarning { radius: f64, detail: String },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("expression uses x{index} but the net has dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("generalized point is not compactly supported in its witness box")]
    NotCompact,
    #[error("generalized point coordinates must be real")]
    ComplexCoordinate,
    #[error("declared support violated: |u| = {value:e} at x = {x:?}, eps = {eps:e}")]
    SupportViolation { x: Vec<f64>, eps: f64, value: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sampled(#[from] SampledError),
}

/// A net of functions on `Rⁿ` given by one expression in `x_0…x_{n-1}` and `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprNet {
    expr: Expr,
    dim: usize,
}

impl ExprNet {
    pub fn new(expr: Expr, dim: usize) -> Result<Self, FuncError> {
        let need = expr.min_dim();
        if need > dim {
            return Err(FuncError::VariableOutOfRange {
                index: need - 1,
                dim,
            });
        }
        Ok(Self { expr, dim })
    }

    /// Parses an s-expression; the dimension is the largest variable index
    /// plus one, and at least one.
    pub fn parse(src: &str) -> Result<Self, FuncError> {
        let expr = parse_expr(src)?;
        let dim = expr.min_dim().max(1);
        Ok(Self { expr, dim })
    }

    pub fn parse_with_dim(src: &str, dim: usize) -> Result<Self, FuncError> {
        Self::new(parse_expr(src)?, dim)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn differentiate(&self, axis: usize) -> Result<Self, FuncError> {
        if axis >= self.dim {
            return Err(FuncError::AxisOutOfRange { axis, dim: self.dim });
        }
        Ok(Self {
            expr: self.expr.diff(axis),
            dim: self.dim,
        })
    }

    pub fn eval(&self, x: &[f64], eps: f64) -> Result<f64, FuncError> {
        if x.len() != self.dim {
            return Err(FuncError::DimMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let v = self.expr.eval(x, eps);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FuncError::NonFinite { x: x.to_vec(), eps })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FuncError> {
        self.combine(other, |a, b| Expr::Add(Box::new(a), Box::new(b)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FuncError> {
        self.combine(other, |a, b| Expr::Mul(Box::new(a), Box::new(b)))
    }

    fn combine(&self, other: &Self, op: impl Fn(Expr, Expr) -> Expr) -> Result<Self, FuncError> {
        if self.dim != other.dim {
            return Err(FuncError::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(Self {
            expr: op(self.expr.clone(), other.expr.clone()),
            dim: self.dim,
        })
    }

    /// All `∂^α u` with `|α| ≤ order`, each multi-index once.
    pub(crate) fn derivatives(&self, order: u32) -> Vec<Expr> {
        // (expression, smallest axis still allowed) keeps the multi-indices ordered
        let mut level = vec![(self.expr.clone(), 0usize)];
        let mut out = vec![self.expr.clone()];
        for _ in 0..order {
            let mut next = Vec::new();
            for (e, from) in &level {
                for axis in *from..self.dim {
                    let d = e.diff(axis);
                    out.push(d.clone());
                    next.push((d, axis));
                }
            }
            level = next;
        }
        out
    }
}

impl std::fmt::Display for ExprNet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.expr.fmt(f)
    }
}

/// `∏ [a_i, b_i]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactBox {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl CompactBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self, FuncError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(FuncError::InvalidBox("need one interval per axis".into()));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(FuncError::InvalidBox(format!(
                "axis {i}: {} > {}",
                lo[i], hi[i]
            )));
        }
        Ok(Self { lo, hi })
    }

    /// `[a, b]ⁿ` from integers.
    pub fn cube(a: i64, b: i64, dim: usize) -> Result<Self, FuncError> {
        let q = |v: i64| Rational::from_integer(v.into());
        Self::new(vec![q(a); dim], vec![q(b); dim])
    }

    pub fn interval(a: Rational, b: Rational) -> Result<Self, FuncError> {
        Self::new(vec![a], vec![b])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn contains_box(&self, other: &CompactBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(i, v)| {
                let (a, b) = self.bounds_f64(i);
                a <= *v && *v <= b
            })
    }

    pub(crate) fn bounds_f64(&self, i: usize) -> (f64, f64) {
        (
            self.lo[i].to_f64().unwrap_or(f64::NEG_INFINITY),
            self.hi[i].to_f64().unwrap_or(f64::INFINITY),
        )
    }

    /// Uniform grid with `per_axis` points on each axis, endpoints included.
    pub fn grid_points(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| {
                let (a, b) = self.bounds_f64(i);
                axis_points(a, b, per_axis)
            })
            .collect();
        cartesian(&axes)
    }
}

pub(crate) fn axis_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 || a == b {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + h * i as f64 })
        .collect()
}

pub(crate) fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Resolution of spatial grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpatialGrid {
    pub per_axis: usize,
}

impl SpatialGrid {
    pub const DEFAULT_PER_AXIS: usize = 129;

    pub fn new(per_axis: usize) -> Self {
        Self {
            per_axis: per_axis.max(2),
        }
    }
}

impl Default for SpatialGrid {
    fn default() -> Self {
        Self::new(Self::DEFAULT_PER_AXIS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_multi_indices() {
        let u = ExprNet::parse_with_dim("(mul x0 x1)", 2).unwrap();
        // |α| ≤ 2 in two variables: 1 + 2 + 3
        assert_eq!(u.derivatives(2).len(), 6);
        let d = u.differentiate(1).unwrap();
        assert_eq!(d.eval(&[3.0, 5.0], 1.0).unwrap(), 3.0);
        assert!(matches!(
            u.differentiate(2),
            Err(FuncError::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn dims_and_eval_errors() {
        assert!(matches!(
            ExprNet::parse_with_dim("x3", 2),
            Err(FuncError::VariableOutOfRange { index: 3, dim: 2 })
        ));
        let u = ExprNet::parse("(log x0)").unwrap();
        assert_eq!(u.dim(), 1);
        assert!(matches!(u.eval(&[-1.0], 0.5), Err(FuncError::NonFinite { .. })));
        assert!(matches!(u.eval(&[1.0, 2.0], 0.5), Err(FuncError::DimMismatch { .. })));
    }

    #[test]
    fn boxes() {
        let k = CompactBox::cube(0, 1, 2).unwrap();
        assert_eq!(k.grid_points(3).len(), 9);
        assert!(CompactBox::cube(-1, 2, 2).unwrap().contains_box(&k));
        assert!(!k.contains_box(&CompactBox::cube(0, 1, 1).unwrap()));
        assert!(CompactBox::cube(2, 1, 1).is_err());
        let pts = CompactBox::cube(0, 1, 1).unwrap().grid_points(129);
        assert_eq!(pts.len(), 129);
        assert_eq!(pts[128], vec![1.0]);
        assert_eq!(pts[64], vec![0.5]);
    }
}
