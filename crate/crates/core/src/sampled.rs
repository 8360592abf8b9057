//! Nets sampled on dyadic grids `ε_k = 2^{-k}` and the log–log estimator of
//! their valuation.
//!
//! The estimator fits `log|u_ε| ≈ b·log ε + c` by least squares over the
//! deepest two thirds of the grid. Samples whose magnitude falls below
//! [`NEGLIGIBILITY_FLOOR`] carry no slope information: an underflowed suffix
//! shortens the usable grid, isolated sub-floor points (zeros of the net) are
//! skipped, and a tail that is entirely below the floor reports `+∞`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genscalar::{GenScalar, PiecewiseNet, SymbolicNet};

/// Magnitudes below this are treated as zero.
pub const NEGLIGIBILITY_FLOOR: f64 = 1e-300;
/// Classification gives up when the slope's standard error exceeds this.
pub const UNDECIDED_THRESHOLD: f64 = 0.25;
/// Fewest grid points the estimator accepts.
pub const MIN_GRID_POINTS: usize = 6;
/// Slack when rounding `−estimate + half_width` up to an integer order.
const ORDER_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampledError {
    #[error("grid needs k_min < k_max, got {0}..{1}")]
    EmptyGrid(i32, i32),
    #[error("non-finite value at grid index k = {k}")]
    NonFinite { k: i32 },
    #[error("grid has {0} points; the estimator needs at least {MIN_GRID_POINTS}")]
    TooFewPoints(usize),
    #[error("grids differ")]
    GridMismatch,
}

/// The dyadic points `ε_k = 2^{-k}` for `k_min ≤ k ≤ k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleGrid {
    k_min: i32,
    k_max: i32,
}

impl SampleGrid {
    pub fn new(k_min: i32, k_max: i32) -> Result<Self, SampledError> {
        if k_min >= k_max || k_min < 0 {
            return Err(SampledError::EmptyGrid(k_min, k_max));
        }
        Ok(Self { k_min, k_max })
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ks(&self) -> impl Iterator<Item = i32> {
        self.k_min..=self.k_max
    }

    pub fn eps(k: i32) -> f64 {
        2f64.powi(-k)
    }

    pub fn points(&self) -> impl Iterator<Item = (i32, f64)> {
        self.ks().map(|k| (k, Self::eps(k)))
    }
}

/// Anything that can be evaluated at a single ε.
pub trait NetSource {
    fn value_at(&self, eps: f64) -> Complex64;
}

impl NetSource for SymbolicNet {
    fn value_at(&self, eps: f64) -> Complex64 {
        self.eval(eps)
    }
}

impl NetSource for PiecewiseNet {
    fn value_at(&self, eps: f64) -> Complex64 {
        self.eval(eps)
    }
}

impl NetSource for GenScalar {
    fn value_at(&self, eps: f64) -> Complex64 {
        self.eval(eps)
    }
}

impl<F: Fn(f64) -> Complex64> NetSource for F {
    fn value_at(&self, eps: f64) -> Complex64 {
        self(eps)
    }
}

/// Samples of a net on a [`SampleGrid`]; all values finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledNet {
    grid: SampleGrid,
    #[serde(serialize_with = "serialize_values")]
    values: Vec<Complex64>,
}

fn serialize_values<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl SampledNet {
    pub fn new(grid: SampleGrid, values: Vec<Complex64>) -> Result<Self, SampledError> {
        assert_eq!(values.len(), grid.len(), "one value per grid point");
        if let Some((k, _)) = grid
            .ks()
            .zip(&values)
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(SampledError::NonFinite { k });
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: SampleGrid, values: Vec<f64>) -> Result<Self, SampledError> {
        Self::new(grid, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn grid(&self) -> SampleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, SampledError> {
        if self.grid != other.grid {
            return Err(SampledError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SampledError> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SampledError> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Rows `k,eps,value_re,value_im,magnitude` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,eps,value_re,value_im,magnitude\n");
        for ((k, eps), v) in self.grid.points().zip(&self.values) {
            let _ = writeln!(
                out,
                "{k},{eps:.16e},{:.16e},{:.16e},{:.16e}",
                v.re,
                v.im,
                v.norm()
            );
        }
        out
    }
}

/// Evaluates `source` at every grid point.
pub fn sample(source: &impl NetSource, grid: SampleGrid) -> Result<SampledNet, SampledError> {
    let values = grid.points().map(|(_, eps)| source.value_at(eps)).collect();
    SampledNet::new(grid, values)
}

/// A finite estimate, or the flag for an entirely negligible tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    Finite(f64),
    Infinite,
}

impl Estimate {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Estimate::Infinite)
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Estimate::Finite(v) => Some(*v),
            Estimate::Infinite => None,
        }
    }

    /// Comparison key with `+∞` on top.
    pub fn key(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValEstimate {
    pub estimate: Estimate,
    /// Twice the standard error of the fitted slope.
    pub half_width: f64,
    /// Standard error of the fitted slope (`+∞` with fewer than three points).
    pub slope_se: f64,
    /// Range of `k` the fit used.
    pub window: (i32, i32),
    /// Number of samples entering the fit.
    pub used: usize,
}

impl ValEstimate {
    fn infinite(window: (i32, i32)) -> Self {
        Self {
            estimate: Estimate::Infinite,
            half_width: 0.0,
            slope_se: 0.0,
            window,
            used: 0,
        }
    }

    pub fn abs_e(&self) -> f64 {
        match self.estimate {
            Estimate::Finite(v) => (-v).exp(),
            Estimate::Infinite => 0.0,
        }
    }
}

fn tail_len(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

/// Thresholds of the estimator and the classifier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimatorConfig {
    pub floor: f64,
    pub undecided: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            floor: NEGLIGIBILITY_FLOOR,
            undecided: UNDECIDED_THRESHOLD,
        }
    }
}

/// Least-squares slope of `log|u_ε|` against `log ε` over the tail window.
pub fn estimate_val(net: &SampledNet) -> Result<ValEstimate, SampledError> {
    estimate_val_with(net, &EstimatorConfig::default())
}

pub fn estimate_val_with(net: &SampledNet, cfg: &EstimatorConfig) -> Result<ValEstimate, SampledError> {
    let floor = cfg.floor;
    let n = net.grid.len();
    if n < MIN_GRID_POINTS {
        return Err(SampledError::TooFewPoints(n));
    }
    let ks: Vec<i32> = net.grid.ks().collect();
    let mags = net.magnitudes();
    let full_tail = n - tail_len(n);
    if mags[full_tail..].iter().all(|m| *m < floor) {
        return Ok(ValEstimate::infinite((ks[full_tail], ks[n - 1])));
    }
    // drop an underflowed suffix, then take the deepest two thirds
    let usable = mags
        .iter()
        .rposition(|m| *m >= floor)
        .map_or(0, |i| i + 1);
    let start = usable - tail_len(usable);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in start..usable {
        if mags[i] >= floor {
            xs.push(SampleGrid::eps(ks[i]).ln());
            ys.push(mags[i].ln());
        }
    }
    if xs.len() < 3 {
        // too few points in the window: fall back to the whole usable prefix
        xs.clear();
        ys.clear();
        for i in 0..usable {
            if mags[i] >= floor {
                xs.push(SampleGrid::eps(ks[i]).ln());
                ys.push(mags[i].ln());
            }
        }
    }
    let window = (ks[start], ks[usable - 1]);
    let used = xs.len();
    if used == 1 {
        return Ok(ValEstimate {
            estimate: Estimate::Finite(ys[0] / xs[0]),
            half_width: f64::INFINITY,
            slope_se: f64::INFINITY,
            window,
            used,
        });
    }
    let fit = LinearFit::new(&xs, &ys);
    Ok(ValEstimate {
        estimate: Estimate::Finite(fit.slope),
        half_width: 2.0 * fit.slope_se,
        slope_se: fit.slope_se,
        window,
        used,
    })
}

struct LinearFit {
    slope: f64,
    slope_se: f64,
}

impl LinearFit {
    fn new(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let slope_se = if xs.len() > 2 {
            let rss: f64 = xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (y - slope * x - intercept).powi(2))
                .sum();
            (rss / (n - 2.0) / sxx).sqrt()
        } else {
            f64::INFINITY
        };
        Self { slope, slope_se }
    }
}

/// Moderateness / negligibility verdict for a sampled net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "order", rename_all = "snake_case")]
pub enum Classification {
    /// `|u_ε| = O(ε^{-N})` on the evidence of the fit.
    Moderate(u32),
    /// `|u_ε| = O(ε^{q_max})` on the evidence of the fit.
    Negligible(i64),
    Undecided,
}

pub fn classify(net: &SampledNet, q_max: i64) -> Result<Classification, SampledError> {
    classify_with(net, q_max, &EstimatorConfig::default())
}

pub fn classify_with(net: &SampledNet, q_max: i64, cfg: &EstimatorConfig) -> Result<Classification, SampledError> {
    Ok(classify_estimate_with(&estimate_val_with(net, cfg)?, q_max, cfg))
}

pub fn classify_estimate(est: &ValEstimate, q_max: i64) -> Classification {
    classify_estimate_with(est, q_max, &EstimatorConfig::default())
}

pub fn classify_estimate_with(est: &ValEstimate, q_max: i64, cfg: &EstimatorConfig) -> Classification {
    let value = match est.estimate {
        Estimate::Infinite => return Classification::Negligible(q_max),
        Estimate::Finite(v) => v,
    };
    if !(est.slope_se <= cfg.undecided) {
        return Classification::Undecided;
    }
    if value - est.half_width > q_max as f64 {
        return Classification::Negligible(q_max);
    }
    let order = (-value + est.half_width).max(0.0);
    Classification::Moderate((order - ORDER_SNAP).ceil().max(0.0) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genscalar::Rational;

    fn grid(a: i32, b: i32) -> SampleGrid {
        SampleGrid::new(a, b).unwrap()
    }

    fn power(a: f64, g: SampleGrid) -> SampledNet {
        sample(&|eps: f64| Complex64::new(eps.powf(a), 0.0), g).unwrap()
    }

    #[test]
    fn sample_examples() {
        let s = sample(&SymbolicNet::eps_pow_int(2), grid(1, 10)).unwrap();
        for (k, v) in (1..=10).zip(s.values()) {
            assert_eq!(v.re, 2f64.powi(-2 * k));
        }
        let z = sample(&SymbolicNet::zero(), grid(1, 10)).unwrap();
        assert!(z.values().iter().all(|v| v.norm() == 0.0));

        let e = sample(&|eps: f64| Complex64::new((-1.0 / eps).exp(), 0.0), grid(1, 20)).unwrap();
        // direct evaluation oracle: positive until underflow, decaying
        let m = e.magnitudes();
        assert!(m[..9].iter().all(|v| *v > 0.0));
        assert!(m.windows(2).all(|w| w[1] <= w[0]));
        // m[k+1] / m[k] = e^{-2^k}
        for (i, w) in m.windows(2).take(8).enumerate() {
            let expected = (-(2f64.powi(i as i32 + 1))).exp();
            assert!((w[1] / w[0] / expected - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let r = sample(&|eps: f64| Complex64::new(1.0 / (eps - 0.25), 0.0), grid(1, 4));
        assert_eq!(r, Err(SampledError::NonFinite { k: 2 }));
    }

    #[test]
    fn exact_powers() {
        let g = grid(4, 20);
        let est = estimate_val(&power(1.5, g)).unwrap();
        assert!((est.estimate.value().unwrap() - 1.5).abs() < 0.05);
        for a in [-5.0, -1.5, 0.0, 2.0, 5.0] {
            let est = estimate_val(&power(a, g)).unwrap();
            assert!((est.estimate.value().unwrap() - a).abs() < 1e-9, "a = {a}");
            assert!(est.half_width < 1e-9);
        }
    }

    #[test]
    fn super_polynomial_decay() {
        let s = sample(&|eps: f64| Complex64::new((-1.0 / eps).exp(), 0.0), grid(4, 20)).unwrap();
        let est = estimate_val(&s).unwrap();
        assert!(est.estimate.is_infinite() || est.estimate.value().unwrap() > 20.0, "{est:?}");

        let deep = sample(&|eps: f64| Complex64::new((-1.0 / eps).exp(), 0.0), grid(12, 30)).unwrap();
        assert!(estimate_val(&deep).unwrap().estimate.is_infinite());
        assert_eq!(classify(&deep, 10).unwrap(), Classification::Negligible(10));
    }

    #[test]
    fn zero_net_is_infinite() {
        let z = sample(&SymbolicNet::zero(), grid(1, 12)).unwrap();
        assert!(estimate_val(&z).unwrap().estimate.is_infinite());
        assert_eq!(classify(&z, 10).unwrap(), Classification::Negligible(10));
    }

    #[test]
    fn classification_examples() {
        let g = grid(4, 24);
        assert_eq!(classify(&power(-3.0, g), 10).unwrap(), Classification::Moderate(3));
        assert_eq!(classify(&power(2.0, g), 10).unwrap(), Classification::Moderate(0));
        assert_eq!(classify(&power(-2.5, g), 10).unwrap(), Classification::Moderate(3));
        assert_eq!(classify(&power(12.0, g), 10).unwrap(), Classification::Negligible(10));

        // alternating magnitudes 1 and 2^{-k²}
        let osc = SampledNet::from_real(
            grid(1, 20),
            (1..=20)
                .map(|k: i32| if k % 2 == 0 { 1.0 } else { 2f64.powi(-k * k) })
                .collect(),
        )
        .unwrap();
        assert_eq!(classify(&osc, 10).unwrap(), Classification::Undecided);
    }

    #[test]
    fn too_few_points() {
        let s = power(1.0, grid(1, 5));
        assert_eq!(estimate_val(&s), Err(SampledError::TooFewPoints(5)));
    }

    #[test]
    fn isolated_zeros_are_skipped() {
        let g = grid(1, 20);
        let vals = (1..=20)
            .map(|k: i32| if k == 15 { 0.0 } else { 2f64.powi(-k) })
            .collect();
        let s = SampledNet::from_real(g, vals).unwrap();
        let est = estimate_val(&s).unwrap();
        assert!((est.estimate.value().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(est.used, 13);
    }

    #[test]
    fn csv_rows_round_trip() {
        let s = sample(&SymbolicNet::eps_pow(Rational::new(1.into(), 3.into())), grid(1, 6)).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,eps,value_re,value_im,magnitude"));
        for (line, v) in lines.zip(s.values()) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 5);
            assert_eq!(cols[2].parse::<f64>().unwrap(), v.re);
        }
    }
}
