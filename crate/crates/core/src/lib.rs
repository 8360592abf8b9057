//! Sharp topologies on modules of generalized numbers and functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`genscalar`]: exact arithmetic, valuation and `|·|_e` on C̃;
//! * [`sampled`]: nets sampled on dyadic ε-grids and log–log valuation fits;
//! * [`seminorms`]: ultra-pseudo-seminorms, gauges, sharp metrics, continuity;
//! * [`funcspaces`]: symbolic expression nets and the derivative seminorms of
//!   `G(Ω)`, `G_S`, `G_τ` and `G_c`;
//! * [`duality`]: pairings, polars, dual norms and Hahn–Banach witnesses on C̃ⁿ;
//! * [`format`]: the JSON wire formats shared with the command-line front end.

pub mod duality;
pub mod format;
pub mod funcspaces;
pub mod genscalar;
pub mod random;
pub mod sampled;
pub mod seminorms;

pub use genscalar::{
    ComplexRational, ExtReal, GenScalar, GenVector, Monomial, PiecewiseNet, Rational, SymbolicNet,
};
