use serde::Serialize;

use super::{axis_points, cartesian, CompactBox, Expr, ExprNet, FuncError, SpatialGrid};
use crate::sampled::{
    classify_with, estimate_val_with, Classification, Estimate, EstimatorConfig, SampleGrid,
    SampledNet, ValEstimate,
};

/// Candidate truncation radii for `G_S`, tried in order.
pub const SCHWARTZ_RADII: [f64; 4] = [4.0, 8.0, 16.0, 32.0];
/// Truncation radius for `G_τ`.
pub const GTAU_RADIUS: f64 = 16.0;
/// Shell-to-interior ratio below which truncation counts as verified.
pub const SHELL_RATIO: f64 = 1e-12;
/// Largest admissible growth exponent `log₂(shell(2R)/shell(R))` for `G_τ`.
const GTAU_GROWTH_LIMIT: f64 = 0.5;
/// Tolerance for the stabilisation test of [`ginf_val`].
pub const GINF_TOLERANCE: f64 = 0.05;
/// Shell radii, as multiples of the truncation radius.
const SHELL_FACTORS: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
/// Points per axis on each shell face.
const FACE_POINTS: usize = 33;

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `max_{x, α} weight(x) |∂^α u_ε(x)|`.
fn grid_sup(derivs: &[Expr], points: &[Vec<f64>], weights: &[f64], eps: f64) -> Result<f64, FuncError> {
    let mut best = 0.0f64;
    for (x, w) in points.iter().zip(weights) {
        for d in derivs {
            let v = d.eval(x, eps);
            if !v.is_finite() {
                return Err(FuncError::NonFinite { x: x.clone(), eps });
            }
            best = best.max(w * v.abs());
        }
    }
    Ok(best)
}

fn sups(
    derivs: &[Expr],
    points: &[Vec<f64>],
    weight: impl Fn(&[f64]) -> f64,
    grid: SampleGrid,
) -> Result<Vec<f64>, FuncError> {
    let weights: Vec<f64> = points.iter().map(|x| weight(x)).collect();
    grid.points()
        .map(|(_, eps)| grid_sup(derivs, points, &weights, eps))
        .collect()
}

/// Points on the faces of `[−r, r]ⁿ`.
fn faces(r: f64, dim: usize) -> Vec<Vec<f64>> {
    let side = axis_points(-r, r, FACE_POINTS);
    let mut out = Vec::new();
    for axis in 0..dim {
        for sign in [-1.0, 1.0] {
            let axes: Vec<Vec<f64>> = (0..dim)
                .map(|i| if i == axis { vec![sign * r] } else { side.clone() })
                .collect();
            out.extend(cartesian(&axes));
        }
    }
    out
}

fn to_sampled(grid: SampleGrid, values: Vec<f64>) -> Result<SampledNet, FuncError> {
    Ok(SampledNet::from_real(grid, values)?)
}

/// `p_{K,j}(u_ε) = sup_{x ∈ K, |α| ≤ j} |∂^α u_ε(x)|` at each grid ε.
pub fn seminorm_pkj(
    net: &ExprNet,
    k: &CompactBox,
    j: u32,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<SampledNet, FuncError> {
    if k.dim() != net.dim() {
        return Err(FuncError::DimMismatch {
            expected: net.dim(),
            got: k.dim(),
        });
    }
    let derivs = net.derivatives(j);
    let points = k.grid_points(spatial.per_axis);
    to_sampled(grid, sups(&derivs, &points, |_| 1.0, grid)?)
}

/// `sup_x (1+|x|)^k max_{|α| ≤ k} |∂^α u_ε(x)|` over `[−R, R]ⁿ`, with `R` the
/// first radius whose shell is negligible against the interior.
pub fn schwartz_seminorm(
    net: &ExprNet,
    k: u32,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<SampledNet, FuncError> {
    let derivs = net.derivatives(k);
    let weight = |x: &[f64]| (1.0 + norm(x)).powi(k as i32);
    let mut last = String::new();
    for r in SCHWARTZ_RADII {
        let interior = sups(&derivs, &CompactBox::cube_f64(r, net.dim(), spatial.per_axis), weight, grid)?;
        let shell = SHELL_FACTORS
            .iter()
            .map(|t| sups(&derivs, &faces(r * t, net.dim()), weight, grid))
            .collect::<Result<Vec<_>, _>>()?;
        let bad = interior.iter().enumerate().find(|(i, inner)| {
            shell.iter().any(|s| s[*i] > SHELL_RATIO * **inner)
        });
        match bad {
            None => return to_sampled(grid, interior),
            Some((i, inner)) => {
                let worst = shell.iter().map(|s| s[i]).fold(0.0, f64::max);
                last = format!("eps = 2^-{}: shell {worst:e} vs interior {inner:e}", grid.k_min() + i as i32);
            }
        }
    }
    Err(FuncError::TruncationWarning {
        radius: SCHWARTZ_RADII[SCHWARTZ_RADII.len() - 1],
        detail: last,
    })
}

/// `sup_x (1+|x|)^{-N} max_{|α| ≤ m} |∂^α u_ε(x)|` over `[−R, R]ⁿ`, `R = 16`.
///
/// The weighted values on the faces of `[−R, R]ⁿ` and `[−2R, 2R]ⁿ` must not
/// grow faster than `2^{1/2}` between the two radii.
pub fn gtau_seminorm(
    net: &ExprNet,
    m: u32,
    n_weight: u32,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<SampledNet, FuncError> {
    let derivs = net.derivatives(m);
    let weight = |x: &[f64]| (1.0 + norm(x)).powi(-(n_weight as i32));
    let r = GTAU_RADIUS;
    let interior = sups(&derivs, &CompactBox::cube_f64(r, net.dim(), spatial.per_axis), weight, grid)?;
    let inner = sups(&derivs, &faces(r, net.dim()), weight, grid)?;
    let outer = sups(&derivs, &faces(2.0 * r, net.dim()), weight, grid)?;
    for (i, (a, b)) in inner.iter().zip(&outer).enumerate() {
        let growth = if *b == 0.0 {
            f64::NEG_INFINITY
        } else if *a == 0.0 {
            f64::INFINITY
        } else {
            (b / a).log2()
        };
        if growth > GTAU_GROWTH_LIMIT {
            return Err(FuncError::TruncationWarning {
                radius: r,
                detail: format!(
                    "eps = 2^-{}: weighted shell grows with exponent {growth:.3}",
                    grid.k_min() + i as i32
                ),
            });
        }
    }
    to_sampled(grid, interior)
}

impl CompactBox {
    /// Grid points of `[−r, r]ⁿ`.
    fn cube_f64(r: f64, dim: usize, per_axis: usize) -> Vec<Vec<f64>> {
        let axis = axis_points(-r, r, per_axis);
        cartesian(&vec![axis; dim])
    }
}

/// One seminorm `p_{K,j}` of a list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkjSpec {
    pub k: CompactBox,
    pub j: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GinfVerdict {
    RegularUpToCap,
    DivergingOrders,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GinfReport {
    /// `inf_i val_{p_i}` over the tested indices.
    pub infimum: Estimate,
    pub per_seminorm: Vec<ValEstimate>,
    pub verdict: GinfVerdict,
}

/// Infimum of the estimated valuations of the first `cap` listed seminorms,
/// and whether the running infimum has stabilised at the last two indices.
pub fn ginf_val(
    net: &ExprNet,
    seminorms: &[PkjSpec],
    cap: usize,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<GinfReport, FuncError> {
    ginf_val_with(net, seminorms, cap, spatial, grid, GINF_TOLERANCE, &EstimatorConfig::default())
}

/// [`ginf_val`] with an explicit stabilisation tolerance and estimator.
pub fn ginf_val_with(
    net: &ExprNet,
    seminorms: &[PkjSpec],
    cap: usize,
    spatial: SpatialGrid,
    grid: SampleGrid,
    tol: f64,
    cfg: &EstimatorConfig,
) -> Result<GinfReport, FuncError> {
    let tested = &seminorms[..cap.min(seminorms.len())];
    let mut per_seminorm = Vec::with_capacity(tested.len());
    let mut running = Vec::with_capacity(tested.len());
    for spec in tested {
        let est = estimate_val_with(&seminorm_pkj(net, &spec.k, spec.j, spatial, grid)?, cfg)?;
        let key = est.estimate.key();
        running.push(running.last().map_or(key, |r: &f64| r.min(key)));
        per_seminorm.push(est);
    }
    let stable = match running.as_slice() {
        [.., a, b] if a.is_infinite() && b.is_infinite() => true,
        [.., a, b] => (a - b).abs() <= tol,
        _ => true,
    };
    let infimum = match running.last() {
        Some(v) if v.is_finite() => Estimate::Finite(*v),
        _ => Estimate::Infinite,
    };
    Ok(GinfReport {
        infimum,
        per_seminorm,
        verdict: if stable {
            GinfVerdict::RegularUpToCap
        } else {
            GinfVerdict::DivergingOrders
        },
    })
}

/// Which derivative seminorms a negligibility test consults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegligibilityMode {
    /// `p_{K,j}` for every `j ≤ j_max`.
    AllOrders(u32),
    /// Only `p_{K,0}`; sound for the spaces where the zeroth seminorm
    /// characterises negligibility.
    ZerothOnly,
}

/// Classifies `u` through its derivative seminorms on `K`: negligible only if
/// every consulted seminorm is, moderate with the worst order otherwise.
pub fn negligibility(
    net: &ExprNet,
    k: &CompactBox,
    q_max: i64,
    mode: NegligibilityMode,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<Classification, FuncError> {
    negligibility_with(net, k, q_max, mode, spatial, grid, &EstimatorConfig::default())
}

pub fn negligibility_with(
    net: &ExprNet,
    k: &CompactBox,
    q_max: i64,
    mode: NegligibilityMode,
    spatial: SpatialGrid,
    grid: SampleGrid,
    cfg: &EstimatorConfig,
) -> Result<Classification, FuncError> {
    let j_max = match mode {
        NegligibilityMode::AllOrders(j) => j,
        NegligibilityMode::ZerothOnly => 0,
    };
    let mut verdict = Classification::Negligible(q_max);
    for j in 0..=j_max {
        let c = classify_with(&seminorm_pkj(net, k, j, spatial, grid)?, q_max, cfg)?;
        verdict = match (verdict, c) {
            (Classification::Undecided, _) | (_, Classification::Undecided) => Classification::Undecided,
            (Classification::Negligible(_), other) => other,
            (Classification::Moderate(a), Classification::Moderate(b)) => Classification::Moderate(a.max(b)),
            (m @ Classification::Moderate(_), Classification::Negligible(_)) => m,
        };
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genscalar::Rational;
    use crate::sampled::estimate_val;

    fn g(a: i32, b: i32) -> SampleGrid {
        SampleGrid::new(a, b).unwrap()
    }

    fn val(s: &SampledNet) -> f64 {
        estimate_val(s).unwrap().estimate.value().unwrap()
    }

    fn unit() -> CompactBox {
        CompactBox::cube(0, 1, 1).unwrap()
    }

    #[test]
    fn pkj_examples() {
        let one = ExprNet::parse("1").unwrap();
        let s = seminorm_pkj(&one, &unit(), 0, SpatialGrid::default(), g(1, 12)).unwrap();
        assert!(s.values().iter().all(|v| v.re == 1.0));
        assert_eq!(val(&s), 0.0);

        let osc = ExprNet::parse("(sin (div x0 eps))").unwrap();
        for j in 0..=3u32 {
            let s = seminorm_pkj(&osc, &unit(), j, SpatialGrid::default(), g(4, 24)).unwrap();
            assert!((val(&s) + j as f64).abs() <= 0.05, "j = {j}: {}", val(&s));
        }
        // grid-sup oracle at one ε: cosine attains 1 at x = 0
        let s = seminorm_pkj(&osc, &unit(), 1, SpatialGrid::default(), g(4, 10)).unwrap();
        assert_eq!(s.values()[0].re, 16.0);
    }

    #[test]
    fn pkj_is_monotone_in_j() {
        let u = ExprNet::parse("(mul (pow eps -1) (exp (neg (pow (div x0 eps) 2))))").unwrap();
        let k = CompactBox::cube(-1, 1, 1).unwrap();
        let mut prev: Option<SampledNet> = None;
        for j in 0..3 {
            let s = seminorm_pkj(&u, &k, j, SpatialGrid::new(65), g(1, 8)).unwrap();
            if let Some(p) = prev {
                assert!(p.values().iter().zip(s.values()).all(|(a, b)| a.re <= b.re));
            }
            prev = Some(s);
        }
    }

    #[test]
    fn schwartz_examples() {
        let gauss = ExprNet::parse("(exp (neg (pow x0 2)))").unwrap();
        let s = schwartz_seminorm(&gauss, 2, SpatialGrid::default(), g(1, 10)).unwrap();
        assert!(val(&s).abs() < 1e-9);

        let peak = ExprNet::parse("(mul (pow eps -1) (exp (neg (pow (div x0 eps) 2))))").unwrap();
        let s = schwartz_seminorm(&peak, 0, SpatialGrid::default(), g(1, 16)).unwrap();
        assert!((val(&s) + 1.0).abs() < 1e-9);

        let zero = ExprNet::parse("0").unwrap();
        let s = schwartz_seminorm(&zero, 3, SpatialGrid::default(), g(1, 10)).unwrap();
        assert!(estimate_val(&s).unwrap().estimate.is_infinite());

        let slow = ExprNet::parse("(div 1 (add 1 (pow x0 2)))").unwrap();
        assert!(matches!(
            schwartz_seminorm(&slow, 0, SpatialGrid::default(), g(1, 8)),
            Err(FuncError::TruncationWarning { .. })
        ));
    }

    #[test]
    fn gtau_examples() {
        let sq = ExprNet::parse("(pow x0 2)").unwrap();
        let s = gtau_seminorm(&sq, 0, 2, SpatialGrid::default(), g(1, 10)).unwrap();
        assert!(s.values().iter().all(|v| v.re <= 1.0));
        assert!(val(&s).abs() < 1e-9);

        let lin = ExprNet::parse("(div x0 eps)").unwrap();
        let s = gtau_seminorm(&lin, 0, 1, SpatialGrid::default(), g(1, 10)).unwrap();
        assert!((val(&s) + 1.0).abs() < 1e-9);

        let zero = ExprNet::parse("0").unwrap();
        let s = gtau_seminorm(&zero, 2, 0, SpatialGrid::default(), g(1, 10)).unwrap();
        assert!(estimate_val(&s).unwrap().estimate.is_infinite());

        let cubic = ExprNet::parse("(pow x0 3)").unwrap();
        assert!(matches!(
            gtau_seminorm(&cubic, 0, 2, SpatialGrid::default(), g(1, 8)),
            Err(FuncError::TruncationWarning { .. })
        ));
    }

    #[test]
    fn ginf_examples() {
        let specs: Vec<PkjSpec> = (0..4)
            .map(|j| PkjSpec {
                k: CompactBox::cube(-1, 1, 1).unwrap(),
                j,
            })
            .collect();
        let c = ExprNet::parse("(add 2 (sin x0))").unwrap();
        let r = ginf_val(&c, &specs, 4, SpatialGrid::default(), g(1, 12)).unwrap();
        assert_eq!(r.verdict, GinfVerdict::RegularUpToCap);
        assert!(r.infimum.value().unwrap().abs() < 1e-9);

        // per-j regression oracle: val p_{K,j} ≈ −1 − j
        let bump = ExprNet::parse("(mul (pow eps -1) (bump (div x0 eps)))").unwrap();
        let r = ginf_val(&bump, &specs, 4, SpatialGrid::new(16385), g(1, 6)).unwrap();
        for (j, est) in r.per_seminorm.iter().enumerate() {
            let v = est.estimate.value().unwrap();
            assert!((v + 1.0 + j as f64).abs() < 0.25, "j = {j}: {v}");
        }
        assert_eq!(r.verdict, GinfVerdict::DivergingOrders);

        let zero = ExprNet::parse("0").unwrap();
        let r = ginf_val(&zero, &specs, 4, SpatialGrid::default(), g(1, 12)).unwrap();
        assert_eq!(r.infimum, Estimate::Infinite);
        assert_eq!(r.verdict, GinfVerdict::RegularUpToCap);
    }

    #[test]
    fn negligibility_modes() {
        let k = CompactBox::interval(Rational::from_integer(0.into()), Rational::from_integer(1.into())).unwrap();
        // ε^12 sin(x/ε^8): p_0 looks negligible at order 10, p_2 does not
        let u = ExprNet::parse("(mul (pow eps 12) (sin (div x0 (pow eps 8))))").unwrap();
        let grid = g(2, 14);
        let zeroth = negligibility(&u, &k, 10, NegligibilityMode::ZerothOnly, SpatialGrid::default(), grid).unwrap();
        assert_eq!(zeroth, Classification::Negligible(10));
        let all = negligibility(&u, &k, 10, NegligibilityMode::AllOrders(2), SpatialGrid::default(), grid).unwrap();
        assert!(matches!(all, Classification::Moderate(n) if n >= 4), "{all:?}");
    }
}
