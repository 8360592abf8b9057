use std::sync::Arc;

use serde::Serialize;

use super::{GenModule, UltraSeminorm};
use crate::genscalar::{ExtReal, Rational};

/// Per-seminorm line of a report: `C_n = e^{-val}` with the exact valuation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormSummary {
    pub label: String,
    #[serde(rename = "C")]
    pub c: f64,
    pub val: ExtReal,
}

impl SeminormSummary {
    fn new(label: String, val: ExtReal) -> Self {
        Self {
            label,
            c: val.abs_e(),
            val,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Probe or generator index.
    pub index: usize,
    pub seminorm: String,
    pub value: f64,
    pub val: ExtReal,
}

/// The report shape shared by boundedness and continuity analyses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormReport {
    pub op: String,
    /// Overall bound, absent when a witness refutes boundedness.
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub witness: Option<Witness>,
    pub per_seminorm: Vec<SeminormSummary>,
}

impl SeminormReport {
    pub fn is_bounded(&self) -> bool {
        self.witness.is_none()
    }
}

/// Finite-set boundedness: `C_n = max_{u ∈ A} P_n(u)`.
pub fn is_bounded<M: GenModule>(
    probes: &[M],
    family: &[Arc<dyn UltraSeminorm<M>>],
) -> SeminormReport {
    let per_seminorm: Vec<SeminormSummary> = family
        .iter()
        .map(|p| {
            let vals: Vec<ExtReal> = probes.iter().map(|u| p.valuation(u)).collect();
            SeminormSummary::new(p.label(), ExtReal::min_of(&vals))
        })
        .collect();
    let overall = ExtReal::min_of(per_seminorm.iter().map(|s| &s.val));
    SeminormReport {
        op: "is_bounded".into(),
        c: Some(overall.abs_e()),
        witness: None,
        per_seminorm,
    }
}

/// The growth rule used for generated families: a sequence of valuations is
/// declared unbounded when it strictly decreases at every step across the
/// second half of the scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthScan;

impl GrowthScan {
    pub fn grows(vals: &[ExtReal]) -> bool {
        if vals.len() < 2 {
            return false;
        }
        let start = (vals.len() - 1) / 2;
        vals[start..].windows(2).all(|w| w[1] < w[0])
    }
}

/// Scans `u_0, …, u_M` from a generator.
pub fn is_bounded_generated<M: GenModule>(
    generator: impl Fn(usize) -> M,
    m_max: usize,
    family: &[Arc<dyn UltraSeminorm<M>>],
) -> SeminormReport {
    let probes: Vec<M> = (0..=m_max).map(generator).collect();
    let mut report = is_bounded(&probes, family);
    report.op = "is_bounded_generated".into();
    for p in family {
        let vals: Vec<ExtReal> = probes.iter().map(|u| p.valuation(u)).collect();
        if GrowthScan::grows(&vals) {
            let val = vals[m_max].clone();
            report.witness = Some(Witness {
                index: m_max,
                seminorm: p.label(),
                value: val.abs_e(),
                val,
            });
            report.c = None;
            break;
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityEstimate {
    #[serde(rename = "C")]
    pub c: f64,
    /// `log C` exactly; absent when every ratio is zero (`C = 0`).
    #[serde(serialize_with = "crate::genscalar::rational_serde::opt")]
    pub log_c: Option<Rational>,
    /// Probes with `max_{i∈I₀} P_i(u) = 0` but `Q(Tu) > 0`.
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    /// `val_Q(Tu)` at the probe.
    pub q_val: ExtReal,
}

impl ContinuityEstimate {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `C = max_u Q(Tu) / max_{i∈I₀} P_i(u)` over the probes.
pub fn continuity_estimate<M: GenModule, N>(
    t: impl Fn(&M) -> N,
    q: &dyn UltraSeminorm<N>,
    p_selected: &[Arc<dyn UltraSeminorm<M>>],
    probes: &[M],
) -> ContinuityEstimate {
    let mut log_c: Option<Rational> = None;
    let mut violations = Vec::new();
    for (i, u) in probes.iter().enumerate() {
        let num = q.valuation(&t(u));
        let den_vals: Vec<ExtReal> = p_selected.iter().map(|p| p.valuation(u)).collect();
        let den = ExtReal::min_of(&den_vals);
        match (den, num) {
            (_, ExtReal::Infinity) => {}
            (ExtReal::Infinity, q_val) => violations.push(Violation { index: i, q_val }),
            (ExtReal::Finite(d), ExtReal::Finite(n)) => {
                let r = d - n;
                if log_c.as_ref().is_none_or(|c| &r > c) {
                    log_c = Some(r);
                }
            }
        }
    }
    let c = log_c.as_ref().map_or(0.0, |l| {
        use num_traits::ToPrimitive;
        l.to_f64().unwrap_or(f64::INFINITY).exp()
    });
    ContinuityEstimate {
        c,
        log_c,
        violations,
    }
}

impl ContinuityEstimate {
    /// As a report: `C` and the first violating probe, if any.
    pub fn to_report(&self, q_label: &str) -> SeminormReport {
        let val = self
            .log_c
            .as_ref()
            .map_or(ExtReal::Infinity, |l| ExtReal::Finite(-l));
        SeminormReport {
            op: "continuity_estimate".into(),
            c: if self.holds() { Some(self.c) } else { None },
            witness: self.violations.first().map(|v| Witness {
                index: v.index,
                seminorm: q_label.into(),
                value: v.q_val.abs_e(),
                val: v.q_val.clone(),
            }),
            per_seminorm: vec![SeminormSummary {
                label: q_label.into(),
                c: self.c,
                val,
            }],
        }
    }
}
