use serde::Serialize;

use super::{axis_points, cartesian, seminorm_pkj, CompactBox, ExprNet, FuncError, SpatialGrid};
use crate::sampled::{estimate_val, SampleGrid, NEGLIGIBILITY_FLOOR};

/// Offsets, relative to `max(1, half-width)`, of the shells sampled outside a
/// declared support.
const SHELL_OFFSETS: [f64; 5] = [1.0 / 64.0, 1.0 / 16.0, 0.25, 1.0, 4.0];
const SHELL_FACE_POINTS: usize = 17;
/// Minimal increase of the valuation between consecutive sequence members.
const MIN_VALUATION_GAIN: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    Box(CompactBox),
    Unbounded,
}

/// A net together with a declared, shell-verified support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportedNet {
    net: ExprNet,
    support: Support,
}

impl SupportedNet {
    /// Checks `|u_ε| < floor` on shells around the declared box at every grid ε.
    pub fn new(net: ExprNet, support: Support, grid: SampleGrid) -> Result<Self, FuncError> {
        if let Support::Box(k) = &support {
            if k.dim() != net.dim() {
                return Err(FuncError::DimMismatch {
                    expected: net.dim(),
                    got: k.dim(),
                });
            }
            for x in shell_points(k) {
                for (_, eps) in grid.points() {
                    let value = net.eval(&x, eps)?.abs();
                    if value >= NEGLIGIBILITY_FLOOR {
                        return Err(FuncError::SupportViolation { x, eps, value });
                    }
                }
            }
        }
        Ok(Self { net, support })
    }

    pub fn net(&self) -> &ExprNet {
        &self.net
    }

    pub fn support(&self) -> &Support {
        &self.support
    }
}

fn shell_points(k: &CompactBox) -> Vec<Vec<f64>> {
    let dim = k.dim();
    let bounds: Vec<(f64, f64)> = (0..dim).map(|i| k.bounds_f64(i)).collect();
    let mut out = Vec::new();
    for off in SHELL_OFFSETS {
        let grown: Vec<(f64, f64)> = bounds
            .iter()
            .map(|(a, b)| {
                let d = off * ((b - a) / 2.0).max(1.0);
                (a - d, b + d)
            })
            .collect();
        for axis in 0..dim {
            for side in [0, 1] {
                let axes: Vec<Vec<f64>> = grown
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b))| {
                        if i == axis {
                            vec![if side == 0 { *a } else { *b }]
                        } else {
                            axis_points(*a, *b, SHELL_FACE_POINTS)
                        }
                    })
                    .collect();
                out.extend(cartesian(&axes));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GcReason {
    /// No probe box contains every declared support.
    Support,
    /// The seminorm valuations do not tend to `+∞`.
    Seminorm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GcVerdict {
    /// Convergence to `0` in the layer of the probe box with this index.
    Converges { probe: usize, valuations: Vec<Option<f64>> },
    NotConvergent { reason: GcReason, valuations: Vec<Option<f64>> },
}

impl GcVerdict {
    pub fn converges(&self) -> bool {
        matches!(self, GcVerdict::Converges { .. })
    }

    pub fn reason(&self) -> Option<GcReason> {
        match self {
            GcVerdict::NotConvergent { reason, .. } => Some(*reason),
            GcVerdict::Converges { .. } => None,
        }
    }
}

/// Convergence to `0` in `G_c`: a common probe box for the supports, then
/// `min_{j ≤ j_max} val_{p_{K,j}}(u_m) → +∞` across the sequence.
///
/// The valuations must increase by at least `1/2` at each step of the second
/// half of the sequence (or be `+∞`); a one-element sequence must be `0`.
pub fn gc_converges(
    seq: &[SupportedNet],
    probes: &[CompactBox],
    j_max: u32,
    spatial: SpatialGrid,
    grid: SampleGrid,
) -> Result<GcVerdict, FuncError> {
    let probe = probes.iter().position(|k| {
        seq.iter().all(|u| match &u.support {
            Support::Box(s) => k.contains_box(s),
            Support::Unbounded => false,
        })
    });
    let Some(probe) = probe else {
        return Ok(GcVerdict::NotConvergent {
            reason: GcReason::Support,
            valuations: Vec::new(),
        });
    };
    let k = &probes[probe];
    let mut vals = Vec::with_capacity(seq.len());
    for u in seq {
        let mut v = f64::INFINITY;
        for j in 0..=j_max {
            let est = estimate_val(&seminorm_pkj(&u.net, k, j, spatial, grid)?)?;
            v = v.min(est.estimate.key());
        }
        vals.push(v);
    }
    let rising = match vals.len() {
        0 => true,
        1 => vals[0].is_infinite(),
        n => vals[(n - 1) / 2..]
            .windows(2)
            .all(|w| w[1].is_infinite() || w[1] >= w[0] + MIN_VALUATION_GAIN),
    };
    let valuations = vals.iter().map(|v| v.is_finite().then_some(*v)).collect();
    Ok(if rising {
        GcVerdict::Converges { probe, valuations }
    } else {
        GcVerdict::NotConvergent {
            reason: GcReason::Seminorm,
            valuations,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> SampleGrid {
        SampleGrid::new(1, 12).unwrap()
    }

    fn probes() -> Vec<CompactBox> {
        [1, 2, 4, 8].iter().map(|r| CompactBox::cube(-r, *r, 1).unwrap()).collect()
    }

    fn supported(src: &str, r: i64) -> SupportedNet {
        SupportedNet::new(
            ExprNet::parse(src).unwrap(),
            Support::Box(CompactBox::cube(-r, r, 1).unwrap()),
            g(),
        )
        .unwrap()
    }

    #[test]
    fn support_is_verified() {
        assert!(SupportedNet::new(
            ExprNet::parse("(exp (neg (pow x0 2)))").unwrap(),
            Support::Box(CompactBox::cube(-1, 1, 1).unwrap()),
            g()
        )
        .is_err());
        let _ = supported("(bump x0)", 1);
        let two_d = SupportedNet::new(
            ExprNet::parse("(mul (bump x0) (bump (div x1 2)))").unwrap(),
            Support::Box(
                CompactBox::new(
                    vec![(-1).into(), (-2).into()].into_iter().map(crate::genscalar::Rational::from_integer).collect(),
                    vec![1.into(), 2.into()].into_iter().map(crate::genscalar::Rational::from_integer).collect(),
                )
                .unwrap(),
            ),
            g(),
        );
        assert!(two_d.is_ok());
    }

    #[test]
    fn fixed_bump_scaled_down_converges() {
        let seq: Vec<SupportedNet> = (1..=8)
            .map(|m| supported(&format!("(mul (pow eps {m}) (bump x0))"), 1))
            .collect();
        let v = gc_converges(&seq, &probes(), 2, SpatialGrid::default(), g()).unwrap();
        assert!(matches!(v, GcVerdict::Converges { probe: 0, .. }), "{v:?}");
    }

    #[test]
    fn spreading_supports_escape() {
        let seq: Vec<SupportedNet> = (1..=10)
            .map(|m| supported(&format!("(mul (pow eps {m}) (bump (div x0 {m})))"), m))
            .collect();
        let v = gc_converges(&seq, &probes(), 2, SpatialGrid::default(), g()).unwrap();
        assert_eq!(v.reason(), Some(GcReason::Support));
    }

    #[test]
    fn stalled_valuations() {
        let seq: Vec<SupportedNet> = (1..=6).map(|_| supported("(mul eps (bump x0))", 1)).collect();
        let v = gc_converges(&seq, &probes(), 1, SpatialGrid::default(), g()).unwrap();
        assert_eq!(v.reason(), Some(GcReason::Seminorm));
    }

    #[test]
    fn zero_sequence_converges() {
        let seq: Vec<SupportedNet> = (0..4).map(|_| supported("0", 1)).collect();
        assert!(gc_converges(&seq, &probes(), 2, SpatialGrid::default(), g()).unwrap().converges());
        let single = vec![supported("0", 1)];
        assert!(gc_converges(&single, &probes(), 2, SpatialGrid::default(), g()).unwrap().converges());
    }
}
