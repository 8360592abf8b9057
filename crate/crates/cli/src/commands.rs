use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use sharptop_core::duality::{
    dual_norm, hahn_banach_witness, polar_contains, polar_gauge_val, recover_representor,
    uniform_bound, Functional,
};
use sharptop_core::format::{self, SymbolicWire, Q};
use sharptop_core::funcspaces::{
    gc_converges, ginf_val_with, gtau_seminorm, negligibility_with, point_value, schwartz_seminorm,
    seminorm_pkj, CompactBox, ExprNet, GenPoint, NegligibilityMode, PkjSpec, SupportedNet,
};
use sharptop_core::genscalar::{cauchy_patch_limit, sharp_dist_val};
use sharptop_core::random::{self, NetParams};
use sharptop_core::sampled::{
    classify_estimate_with, estimate_val_with, sample, Estimate, SampledNet, ValEstimate,
};
use sharptop_core::seminorms::{Ball, ConvexSetSpec, ScaledAbsE, SeminormFamily, UltraSeminorm};
use sharptop_core::{ExtReal, GenScalar, GenVector, SymbolicNet};

use crate::args::{Command, SpaceArg};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::input::{self, BallWire, PointWire, SupportedWire};

/// The verb-specific part of a report and the optional CSV plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: Map<String, Value>,
    pub csv: Option<String>,
}

fn value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn body(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    }
}

fn output(v: Value, csv: Option<String>) -> Output {
    Output { body: body(v), csv }
}

pub fn box_string(k: &CompactBox) -> String {
    k.lo()
        .iter()
        .zip(k.hi())
        .map(|(a, b)| format!("{a}:{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn box_or_unit(arg: &Option<String>, dim: usize) -> Result<CompactBox, CliError> {
    match arg {
        Some(s) => input::parse_box(s),
        None => Ok(input::unit_box(dim)),
    }
}

/// `|estimate − exact| ≤ tol`, with `+∞` agreeing only with `+∞`.
fn agrees(est: &Estimate, exact: &ExtReal, tol: f64) -> bool {
    match (est, exact.to_f64()) {
        (Estimate::Infinite, None) => true,
        (Estimate::Finite(e), Some(x)) => (e - x).abs() <= tol,
        _ => false,
    }
}

/// Basis vectors, sign vectors (up to dimension 4) and `n` seeded random vectors.
pub fn probe_set(dim: usize, seed: u64, n: usize) -> Vec<GenVector> {
    let mut out: Vec<GenVector> = (0..dim).map(|i| GenVector::basis(dim, i)).collect();
    if dim <= 4 {
        for mask in 0..(1u32 << dim) {
            out.push(GenVector::new(
                (0..dim)
                    .map(|i| SymbolicNet::from_integer(if mask & (1 << i) != 0 { -1 } else { 1 }))
                    .collect(),
            ));
        }
    }
    let mut rng = random::rng(seed);
    let p = NetParams::default();
    out.extend((0..n).map(|_| random::vector(&mut rng, dim, &p)));
    out
}

fn estimate(cfg: &RunConfig, s: &SampledNet) -> Result<ValEstimate, CliError> {
    Ok(estimate_val_with(s, &cfg.estimator())?)
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let grid = cfg.grid()?;
    let spatial = cfg.spatial_grid();
    let est_cfg = cfg.estimator();
    match cmd {
        Command::Val { net } => {
            let u = input::scalar_arg(net)?;
            let s = sample(&u, grid)?;
            let est = estimate(cfg, &s)?;
            Ok(output(
                json!({"val": u.valuation(), "abs_e": u.abs_e(), "estimate": est}),
                Some(s.to_csv()),
            ))
        }
        Command::Dist { net, other } => {
            let (u, v) = (input::scalar_arg(net)?, input::scalar_arg(other)?);
            let d = sharp_dist_val(&u, &v);
            Ok(output(json!({"val": d, "d": d.abs_e()}), None))
        }
        Command::Classify {
            net,
            expr,
            q_max,
            k_box,
            orders,
            zeroth_only,
        } => match (net, expr) {
            (Some(n), _) => {
                let u = input::scalar_arg(n)?;
                let s = sample(&u, grid)?;
                let est = estimate(cfg, &s)?;
                let c = classify_estimate_with(&est, *q_max, &est_cfg);
                Ok(output(json!({"classification": c, "estimate": est, "q_max": q_max}), Some(s.to_csv())))
            }
            (None, Some(e)) => {
                let u = input::expr_arg(e)?;
                let k = box_or_unit(k_box, u.dim())?;
                let mode = if *zeroth_only {
                    NegligibilityMode::ZerothOnly
                } else {
                    NegligibilityMode::AllOrders(*orders)
                };
                let c = negligibility_with(&u, &k, *q_max, mode, spatial, grid, &est_cfg)?;
                let orders = if *zeroth_only { 0 } else { *orders };
                Ok(output(
                    json!({"classification": c, "box": box_string(&k), "orders": orders, "q_max": q_max}),
                    None,
                ))
            }
            (None, None) => Err(CliError::Usage("classify needs --net or --expr".into())),
        },
        Command::Seminorm {
            expr,
            space,
            k,
            weight,
            k_box,
        } => {
            let u = input::expr_arg(expr)?;
            let (s, extra) = match space {
                SpaceArg::Omega => {
                    let b = box_or_unit(k_box, u.dim())?;
                    (seminorm_pkj(&u, &b, *k, spatial, grid)?, json!({"space": "omega", "box": box_string(&b)}))
                }
                SpaceArg::Schwartz => (schwartz_seminorm(&u, *k, spatial, grid)?, json!({"space": "schwartz"})),
                SpaceArg::Tau => (
                    gtau_seminorm(&u, *k, *weight, spatial, grid)?,
                    json!({"space": "tau", "weight": weight}),
                ),
                SpaceArg::Ginf => {
                    let b = box_or_unit(k_box, u.dim())?;
                    let specs: Vec<PkjSpec> = (0..=*k).map(|j| PkjSpec { k: b.clone(), j }).collect();
                    let r = ginf_val_with(&u, &specs, specs.len(), spatial, grid, cfg.tol, &est_cfg)?;
                    let mut m = body(value(&r));
                    m.insert("space".into(), json!("ginf"));
                    m.insert("box".into(), json!(box_string(&b)));
                    m.insert("cap".into(), json!(k));
                    return Ok(Output { body: m, csv: None });
                }
            };
            let est = estimate(cfg, &s)?;
            let mut m = body(extra);
            m.insert("k".into(), json!(k));
            m.insert("estimate".into(), value(&est));
            Ok(Output {
                body: m,
                csv: Some(s.to_csv()),
            })
        }
        Command::Gauge { net, balls, log_eta } => {
            let u = input::scalar_arg(net)?;
            let (_, wires): (_, Vec<BallWire>) = input::json_arg(balls)?;
            let balls: Vec<Ball<GenScalar>> = wires
                .into_iter()
                .map(|w| {
                    let p: Arc<dyn UltraSeminorm<GenScalar>> = Arc::new(ScaledAbsE::new(w.weight.0));
                    Ball::new(p, w.log_eta.0, w.shift.0)
                })
                .collect();
            let a = ConvexSetSpec::new(balls)?;
            let l = format::parse_rational(log_eta).map_err(CliError::Usage)?;
            let (strict, member, weak) = a.chain(&u, &l);
            Ok(output(
                json!({
                    "gauge_val": a.gauge_val(&u),
                    "gauge": a.gauge(&u),
                    "contains": a.contains(&u),
                    "chain": {"log_eta": l.to_string(), "strict": strict, "member": member, "weak": weak},
                }),
                None,
            ))
        }
        Command::Metric { net, other, family } => {
            let (u, v) = (input::scalar_arg(net)?, input::scalar_arg(other)?);
            let (_, weights): (_, Vec<Q>) = input::json_arg(family)?;
            let members: Vec<Arc<dyn UltraSeminorm<GenScalar>>> = weights
                .into_iter()
                .map(|w| Arc::new(ScaledAbsE::new(w.0)) as Arc<dyn UltraSeminorm<GenScalar>>)
                .collect();
            let fam = SeminormFamily::new(members)?;
            let mut m = body(value(fam.sharp_metric(&u, &v)));
            m.insert("labels".into(), json!(fam.labels()));
            Ok(Output { body: m, csv: None })
        }
        Command::Limit { seq, depth } => {
            let (_, wires): (_, Vec<SymbolicWire>) = input::json_arg(seq)?;
            let seq: Vec<SymbolicNet> = wires.into_iter().map(SymbolicNet::from).collect();
            if seq.is_empty() {
                return Err(CliError::Usage("limit needs a nonempty sequence".into()));
            }
            let depth = depth.unwrap_or(seq.len() - 1);
            let lim = cauchy_patch_limit(&seq, depth)?;
            let u = GenScalar::Piecewise(lim.limit.clone());
            let gaps: Vec<ExtReal> = seq[..=depth]
                .iter()
                .map(|s| (&GenScalar::Symbolic(s.clone()) - &u).valuation())
                .collect();
            let limit: Value = serde_json::from_str(&format::piecewise_to_json(&lim.limit)).expect("valid json");
            Ok(output(
                json!({
                    "depth": depth,
                    "limit": limit,
                    "thresholds": lim.thresholds.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "val_seq_minus_limit": gaps,
                }),
                None,
            ))
        }
        Command::Polar { set, net } => {
            let (_, wires): (_, Vec<Vec<SymbolicWire>>) = input::json_arg(set)?;
            let a: Vec<GenVector> = wires
                .into_iter()
                .map(|w| GenVector::new(w.into_iter().map(SymbolicNet::from).collect()))
                .collect();
            if a.is_empty() {
                return Err(CliError::Usage("polar needs a nonempty set".into()));
            }
            let v = input::vector_arg(net)?;
            let g = polar_gauge_val(&a, &v)?;
            Ok(output(
                json!({"gauge_val": g, "gauge": g.abs_e(), "contains": polar_contains(&a, &v)?}),
                None,
            ))
        }
        Command::Dualnorm { functional, norm, probes } => {
            let t = input::functional_arg(functional)?;
            let ps = probe_set(t.dim(), cfg.seed, *probes);
            let r = dual_norm(&t, (*norm).into(), &ps, grid)?;
            let mut m = body(value(&r));
            m.insert("probes".into(), json!(ps.len()));
            if let Some(c) = r.closed_form {
                m.insert("estimate_le_closed_form".into(), json!(r.estimate <= c));
            }
            Ok(Output { body: m, csv: None })
        }
        Command::Hahnbanach { net, norm } => {
            let u = input::vector_arg(net)?;
            let hb = hahn_banach_witness(&u, (*norm).into(), grid);
            let s = hb.functional.sample(&u, grid)?;
            let est = estimate(cfg, &s)?;
            let exact = u.norm_valuation();
            Ok(output(
                json!({
                    "norm": value(sharptop_core::duality::NormKind::from(*norm)),
                    "zero_functional": hb.zero_functional,
                    "skipped": hb.skipped,
                    "norm_val": exact,
                    "norm_abs_e": exact.abs_e(),
                    "witness_estimate": est,
                    "witness_abs_e": est.abs_e(),
                    "agrees": agrees(&est.estimate, &exact, cfg.tol),
                }),
                Some(s.to_csv()),
            ))
        }
        Command::Recover { functional, probes } => {
            let t = input::functional_arg(functional)?;
            let r = recover_representor(&t, cfg.seed, *probes)?;
            let mut m = body(value(&r));
            let wire: Value = serde_json::from_str(&format::vector_to_json(&r.vector)).expect("valid json");
            m.insert("vector".into(), wire);
            Ok(Output { body: m, csv: None })
        }
        Command::Ubound {
            family,
            shape,
            norm,
            probes,
        } => {
            let (name, items): (_, Vec<Value>) = input::json_arg(family)?;
            let fam = items
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    format::functional_from_json(&v.to_string())
                        .map_err(|e| CliError::parse_in(&format!("{name}[{i}]"), e))
                })
                .collect::<Result<Vec<Functional>, _>>()?;
            let Some(first) = fam.first() else {
                return Err(CliError::Usage("ubound needs a nonempty family".into()));
            };
            let ps = probe_set(first.dim(), cfg.seed, *probes);
            let r = uniform_bound(&fam, (*shape).into(), &ps, (*norm).into(), grid)?;
            let mut m = body(value(&r));
            m.insert("probes".into(), json!(ps.len()));
            Ok(Output { body: m, csv: None })
        }
        Command::Gcconv { seq, j_max, radii } => {
            let (_, wires): (_, Vec<SupportedWire>) = input::json_arg(seq)?;
            let seq = wires
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let (net, support) = w.parse(i)?;
                    Ok(SupportedNet::new(net, support, grid)?)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let dim = seq.first().map_or(1, |s| s.net().dim());
            let boxes = radii
                .iter()
                .map(|r| Ok(CompactBox::cube(-r, *r, dim)?))
                .collect::<Result<Vec<_>, CliError>>()?;
            let v = gc_converges(&seq, &boxes, *j_max, spatial, grid)?;
            let mut m = body(value(&v));
            m.insert("probes".into(), json!(boxes.iter().map(box_string).collect::<Vec<_>>()));
            Ok(Output { body: m, csv: None })
        }
        Command::Pointval { expr, point, q_max } => {
            let (_, pw): (_, PointWire) = input::json_arg(point)?;
            let coords: Vec<SymbolicNet> = pw.coords.into_iter().map(SymbolicNet::from).collect();
            let witness = input::parse_box(&pw.witness)?;
            let (name, text) = input::read_arg(expr)?;
            let u: ExprNet = input::parse_expr_named(&name, &text, Some(coords.len()))?;
            let pt = GenPoint::new(coords, witness, grid)?;
            let s = point_value(&u, &pt, grid)?;
            let est = estimate(cfg, &s)?;
            let c = classify_estimate_with(&est, *q_max, &est_cfg);
            Ok(output(
                json!({"estimate": est, "classification": c, "q_max": q_max}),
                Some(s.to_csv()),
            ))
        }
        Command::Report {
            net,
            expr,
            k_box,
            k,
            q_max,
        } => match (net, expr) {
            (Some(n), _) => {
                let u = input::scalar_arg(n)?;
                let s = sample(&u, grid)?;
                let est = estimate(cfg, &s)?;
                let c = classify_estimate_with(&est, *q_max, &est_cfg);
                let val = u.valuation();
                Ok(output(
                    json!({
                        "kind": "number",
                        "val": val,
                        "abs_e": u.abs_e(),
                        "estimate": est,
                        "estimate_agrees": agrees(&est.estimate, &val, cfg.tol),
                        "classification": c,
                        "q_max": q_max,
                    }),
                    Some(s.to_csv()),
                ))
            }
            (None, Some(e)) => {
                let u = input::expr_arg(e)?;
                let b = box_or_unit(k_box, u.dim())?;
                let specs: Vec<PkjSpec> = (0..=*k).map(|j| PkjSpec { k: b.clone(), j }).collect();
                let ginf = ginf_val_with(&u, &specs, specs.len(), spatial, grid, cfg.tol, &est_cfg)?;
                let class =
                    negligibility_with(&u, &b, *q_max, NegligibilityMode::AllOrders(*k), spatial, grid, &est_cfg)?;
                let zeroth = seminorm_pkj(&u, &b, 0, spatial, grid)?;
                Ok(output(
                    json!({
                        "kind": "expression",
                        "expr": u.to_string(),
                        "dim": u.dim(),
                        "box": box_string(&b),
                        "orders": k,
                        "per_order": ginf.per_seminorm,
                        "infimum": ginf.infimum,
                        "verdict": ginf.verdict,
                        "classification": class,
                        "q_max": q_max,
                    }),
                    Some(zeroth.to_csv()),
                ))
            }
            (None, None) => Err(CliError::Usage("report needs --net or --expr".into())),
        },
    }
}
