use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{pair, Blackbox, DualityError, Functional, NormKind, Representative};
use crate::genscalar::{ExtReal, GenVector, Rational};
use crate::random::{self, NetParams};
use crate::sampled::{estimate_val, Estimate, SampleGrid};
use crate::seminorms::GrowthScan;

/// `‖u_ε‖` below this counts as a zero of the norm.
pub const HB_ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualNormRow {
    pub probe: usize,
    /// `|T(u/‖u‖)|_e`.
    pub abs_e: f64,
    /// Exact valuation of `T(u/‖u‖)`, when `T` has an exact representative.
    pub exact_val: Option<ExtReal>,
    /// Estimated valuation otherwise.
    pub estimated_val: Option<Estimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualNormReport {
    pub norm: NormKind,
    /// `e^{-val ‖w_ε‖_{E'}}` for pairing functionals.
    pub closed_form: Option<f64>,
    pub closed_form_val: Option<ExtReal>,
    /// `max` over the normalised probes.
    pub estimate: f64,
    pub rows: Vec<DualNormRow>,
}

/// `‖T‖ = sup_{‖u‖ = 1} |Tu|_e`, estimated on probes and, for pairing
/// vectors, in closed form.
///
/// Probes are normalised by the monomial `ε^{-val ‖u_ε‖}` so that
/// `‖u‖_{G_E} = 1`; zero probes are skipped. Sampled-only functionals are
/// evaluated on `grid`.
pub fn dual_norm(
    t: &Functional,
    norm: NormKind,
    probes: &[GenVector],
    grid: SampleGrid,
) -> Result<DualNormReport, DualityError> {
    let mut rows = Vec::new();
    for (i, u) in probes.iter().enumerate() {
        let Some(v) = u.norm_valuation().as_finite().cloned() else {
            continue;
        };
        let unit = u.shift(&-v);
        let row = match t.apply_exact(&unit)? {
            Some(tu) => {
                let val = tu.valuation();
                DualNormRow {
                    probe: i,
                    abs_e: val.abs_e(),
                    exact_val: Some(val),
                    estimated_val: None,
                }
            }
            None => {
                let est = estimate_val(&t.sample(&unit, grid)?)?;
                DualNormRow {
                    probe: i,
                    abs_e: est.abs_e(),
                    exact_val: None,
                    estimated_val: Some(est.estimate),
                }
            }
        };
        rows.push(row);
    }
    let estimate = rows.iter().map(|r| r.abs_e).fold(0.0, f64::max);
    // every norm on Cⁿ and its dual share valuations in the symbolic class
    let closed_form_val = match t {
        Functional::PairingVector(w) => Some(w.norm_valuation()),
        Functional::Blackbox(_) => None,
    };
    Ok(DualNormReport {
        norm,
        closed_form: closed_form_val.as_ref().map(ExtReal::abs_e),
        closed_form_val,
        estimate,
        rows,
    })
}

/// A Hahn–Banach witness: `‖v‖ = 1` and `v(u) = ‖u‖_E`, per ε.
#[derive(Clone, Debug)]
pub struct HahnBanach {
    pub functional: Functional,
    /// `u = 0`, and the zero functional was returned.
    pub zero_functional: bool,
    /// Grid points where `‖u_ε‖ < 10⁻¹²` and the witness is set to zero.
    pub skipped: usize,
}

fn norm_eps(u: &[Complex64], kind: NormKind) -> f64 {
    match kind {
        NormKind::Euclidean => u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        NormKind::Max => u.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// The per-ε dual vector of `u_ε`.
fn witness_vector(u: &[Complex64], kind: NormKind) -> Option<Vec<Complex64>> {
    let n = norm_eps(u, kind);
    if !(n >= HB_ZERO_THRESHOLD) {
        return None;
    }
    Some(match kind {
        NormKind::Euclidean => u.iter().map(|z| z.conj() / n).collect(),
        NormKind::Max => {
            let i = u
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bi, bn), (i, z)| if z.norm() > bn { (i, z.norm()) } else { (bi, bn) })
                .0;
            let mut w = vec![Complex64::new(0.0, 0.0); u.len()];
            w[i] = u[i].conj() / u[i].norm();
            w
        }
    })
}

pub fn hahn_banach_witness(u: &GenVector, norm: NormKind, grid: SampleGrid) -> HahnBanach {
    let dim = u.dim();
    if u.is_zero() {
        return HahnBanach {
            functional: Functional::PairingVector(GenVector::zeros(dim)),
            zero_functional: true,
            skipped: 0,
        };
    }
    let skipped = grid
        .points()
        .filter(|(_, eps)| witness_vector(&u.eval(*eps), norm).is_none())
        .count();
    let target = u.clone();
    let map = move |eps: f64, v: &[Complex64]| -> Complex64 {
        match witness_vector(&target.eval(eps), norm) {
            Some(w) => w.iter().zip(v).map(|(a, b)| a * b).sum(),
            None => Complex64::new(0.0, 0.0),
        }
    };
    HahnBanach {
        functional: Functional::Blackbox(Blackbox {
            id: format!("hahn_banach_{}", match norm {
                NormKind::Euclidean => "euclidean",
                NormKind::Max => "max",
            }),
            dim,
            repr: Representative::Sampled(Arc::new(map)),
        }),
        zero_functional: false,
        skipped,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recovery {
    pub y: Vec<String>,
    #[serde(skip)]
    pub vector: GenVector,
    /// `max_u |T(u) − b(u, y)|_e` over the verification probes.
    pub residual: f64,
    pub probes: usize,
}

/// `y_i = T(e_i)`, verified exactly on `n_probes` seeded random probes.
pub fn recover_representor(t: &Functional, seed: u64, n_probes: usize) -> Result<Recovery, DualityError> {
    let n = t.dim();
    let y = (0..n)
        .map(|i| t.apply_exact(&GenVector::basis(n, i))?.ok_or(DualityError::NotExact))
        .collect::<Result<Vec<_>, _>>()?;
    let y = GenVector::new(y);
    let mut rng = random::rng(seed);
    let params = NetParams::default();
    let mut worst = ExtReal::Infinity;
    for probe in 0..n_probes {
        let u = random::vector(&mut rng, n, &params);
        let tu = t.apply_exact(&u)?.ok_or(DualityError::NotExact)?;
        let r = (&tu - &pair(&u, &y)?).valuation();
        if !r.is_infinite() {
            return Err(DualityError::NonLinear {
                residual: r.abs_e(),
                probe,
            });
        }
        worst = worst.min(r);
    }
    Ok(Recovery {
        y: y.coords().iter().map(|c| c.to_string()).collect(),
        vector: y,
        residual: worst.abs_e(),
        probes: n_probes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UniformBound {
    Bounded {
        #[serde(rename = "C")]
        c: f64,
        per_functional: Vec<f64>,
    },
    PointwiseUnbounded {
        /// Index of the probe `u` where `|T_i(u)|_e` grows along the family.
        probe: usize,
        values: Vec<f64>,
    },
}

/// How a family of functionals was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyShape {
    /// An explicit finite family; pointwise bounded by construction.
    Finite,
    /// `T_0, …, T_M` from a generator; the scan looks for growth in `m`.
    Scanned,
}

/// Banach–Steinhaus on a finite or scanned family: pointwise boundedness on
/// the probes first, then `C = max_i ‖T_i‖`.
pub fn uniform_bound(
    family: &[Functional],
    shape: FamilyShape,
    probes: &[GenVector],
    norm: NormKind,
    grid: SampleGrid,
) -> Result<UniformBound, DualityError> {
    let scan_probes = match shape {
        FamilyShape::Finite => &probes[..0],
        FamilyShape::Scanned => probes,
    };
    for (p, u) in scan_probes.iter().enumerate() {
        let vals = family
            .iter()
            .map(|t| {
                Ok(match t.apply_exact(u)? {
                    Some(tu) => tu.valuation(),
                    None => match estimate_val(&t.sample(u, grid)?)?.estimate {
                        Estimate::Infinite => ExtReal::Infinity,
                        Estimate::Finite(v) => ExtReal::Finite(
                            Rational::from_float(v).unwrap_or_else(|| Rational::from_integer(0.into())),
                        ),
                    },
                })
            })
            .collect::<Result<Vec<_>, DualityError>>()?;
        if GrowthScan::grows(&vals) {
            return Ok(UniformBound::PointwiseUnbounded {
                probe: p,
                values: vals.iter().map(ExtReal::abs_e).collect(),
            });
        }
    }
    let per_functional = family
        .iter()
        .map(|t| {
            let r = dual_norm(t, norm, probes, grid)?;
            Ok(r.closed_form.unwrap_or(r.estimate))
        })
        .collect::<Result<Vec<_>, DualityError>>()?;
    Ok(UniformBound::Bounded {
        c: per_functional.iter().cloned().fold(0.0, f64::max),
        per_functional,
    })
}
