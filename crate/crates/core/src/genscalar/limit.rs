//! Constructive limits of Cauchy sequences in C̃.
//!
//! Given `u_0, u_1, …, u_K` with `val(u_{k+1} − u_k) > k`, the limit is the
//! patched net `u_0 + Σ_k h_k` where `h_k = u_{k+1} − u_k` on `(0, ε_k]` and
//! `0` above. Consequently the limit equals `u_k` on `(ε_k, ε_{k-1}]` and `u_K`
//! on `(0, ε_{K-1}]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::net::dyadic;
use super::{ExtReal, GenScalarError, PiecewiseNet, Rational, SymbolicNet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyLimit {
    pub limit: PiecewiseNet,
    /// `ε_k` for `k = 0..K`, strictly decreasing with `ε_k ≤ 2^{-k}`.
    pub thresholds: Vec<Rational>,
}

/// Largest `m₀`-or-deeper dyadic `2^{-m}` such that `|d_ε| ≤ ε^k` on `(0, 2^{-m}]`.
///
/// Requires `val(d) > k`. Each term `c ε^a` contributes `|c| ε^{a−k}` to
/// `|d_ε| ε^{-k}`, which is increasing in ε, so checking the right endpoint
/// suffices; `|c| ≤ |re| + |im|` and `2^{-m(a−k)} ≤ 2^{-⌊m(a−k)⌋}` keep the test
/// in exact rationals.
pub(crate) fn dyadic_threshold_exponent(d: &SymbolicNet, k: i64, m0: u64) -> u64 {
    let k = Rational::from_integer(k.into());
    let terms: Vec<(Rational, Rational)> = d
        .terms()
        .iter()
        .map(|t| (t.coeff.l1_bound(), &t.exp - &k))
        .collect();
    debug_assert!(terms.iter().all(|(_, e)| e.is_positive()));
    let holds = |m: u64| -> bool {
        let m_q = Rational::from_integer(BigInt::from(m));
        let total = terms.iter().fold(Rational::zero(), |acc, (c, e)| {
            let shift = (&m_q * e).floor().to_integer().to_u64().unwrap_or(u64::MAX);
            acc + c / Rational::from_integer(BigInt::one() << shift.min(1 << 20))
        });
        total <= Rational::one()
    };
    if holds(m0) {
        return m0;
    }
    // the bound is monotone in m: double, then bisect
    let mut hi = m0.max(1) * 2;
    while !holds(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Patches a finite Cauchy sequence into its limit up to `depth`.
pub fn cauchy_patch_limit(seq: &[SymbolicNet], depth: usize) -> Result<CauchyLimit, GenScalarError> {
    if seq.len() < depth + 1 {
        return Err(GenScalarError::SequenceTooShort {
            needed: depth + 1,
            got: seq.len(),
        });
    }
    let mut thresholds: Vec<Rational> = Vec::with_capacity(depth);
    let mut exponents: Vec<u64> = Vec::with_capacity(depth);
    for k in 0..depth {
        let d = &seq[k + 1] - &seq[k];
        if d.valuation() <= ExtReal::from_integer(k as i64) {
            return Err(GenScalarError::GapViolation(k));
        }
        // strictly below the previous threshold and below 2^{-k}
        let floor_m = exponents.last().map_or(k as u64 + 1, |prev| (prev + 1).max(k as u64 + 1));
        let m = if d.is_zero() {
            floor_m
        } else {
            dyadic_threshold_exponent(&d, k as i64, floor_m)
        };
        exponents.push(m);
        thresholds.push(dyadic(m));
    }
    let mut breakpoints = vec![Rational::one()];
    breakpoints.extend(thresholds.iter().cloned());
    let pieces = seq[..depth].to_vec();
    let limit = PiecewiseNet::new(breakpoints, pieces, seq[depth].clone())?;
    Ok(CauchyLimit { limit, thresholds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genscalar::{ComplexRational, GenScalar};

    fn partial_sums(n: usize) -> Vec<SymbolicNet> {
        let mut acc = SymbolicNet::zero();
        let mut out = Vec::new();
        for j in 0..=n {
            acc = &acc + &SymbolicNet::eps_pow_int(j as i64);
            out.push(acc.clone());
        }
        out
    }

    #[test]
    fn constant_sequence_is_its_own_limit() {
        let c = SymbolicNet::constant(ComplexRational::from_integer(4));
        let seq = vec![c.clone(); 5];
        let lim = cauchy_patch_limit(&seq, 4).unwrap();
        assert!(lim.limit.pieces().iter().all(|p| p == &c));
        assert_eq!(lim.limit.tail(), &c);
        assert_eq!(lim.limit.compact(), PiecewiseNet::from_symbolic(c));
    }

    #[test]
    fn partial_sums_converge_with_tail_estimate() {
        let seq = partial_sums(7);
        let lim = cauchy_patch_limit(&seq, 6).unwrap();
        let u = GenScalar::Piecewise(lim.limit.clone());
        for k in 1..=6 {
            let diff = &GenScalar::Symbolic(seq[k].clone()) - &u;
            assert!(diff.valuation() >= ExtReal::from_integer(k as i64 - 1), "k = {k}");
        }
        for (k, t) in lim.thresholds.iter().enumerate() {
            assert!(t <= &dyadic(k as u64));
        }
        assert!(lim.thresholds.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn gap_violation_is_reported() {
        let seq: Vec<SymbolicNet> = (1..=4).map(SymbolicNet::from_integer).collect();
        assert_eq!(
            cauchy_patch_limit(&seq, 3),
            Err(GenScalarError::GapViolation(0))
        );
    }

    #[test]
    fn threshold_bounds_difference_pointwise() {
        // d = 40 ε^{3/2} − 7 ε^5 against ε^1
        let d = SymbolicNet::from_terms([
            crate::genscalar::Monomial::new(
                ComplexRational::from_integer(40),
                Rational::new(3.into(), 2.into()),
            ),
            crate::genscalar::Monomial::new(
                ComplexRational::from_integer(-7),
                Rational::from_integer(5.into()),
            ),
        ]);
        let m = dyadic_threshold_exponent(&d, 1, 1);
        let t = 2f64.powi(-(m as i32));
        for s in 0..200 {
            let eps = t * (1.0 - s as f64 / 200.0).max(1e-6);
            assert!(d.eval(eps).norm() <= eps * (1.0 + 1e-12));
        }
        // ceiling on the bound: 40 · 2^{-(m-1)/2} > 1 would have failed at
        // m − 1, so the threshold is not wastefully deep.
        assert!(m <= 13, "m = {m}");
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            cauchy_patch_limit(&[SymbolicNet::one()], 2),
            Err(GenScalarError::SequenceTooShort { .. })
        ));
    }
}
