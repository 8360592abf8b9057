use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};

use super::net::is_dyadic;
use super::{ExtReal, GenScalarError, Rational, SymbolicNet};

/// A net given by different monomial sums on the dyadic intervals
/// `(b_{k+1}, b_k]`, with `b_0 = 1 > b_1 > … > b_K > 0` and a tail on `(0, b_K]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseNet {
    breakpoints: Vec<Rational>,
    pieces: Vec<SymbolicNet>,
    tail: SymbolicNet,
}

impl PiecewiseNet {
    pub fn new(
        breakpoints: Vec<Rational>,
        pieces: Vec<SymbolicNet>,
        tail: SymbolicNet,
    ) -> Result<Self, GenScalarError> {
        let invalid = |msg: &str| Err(GenScalarError::InvalidPiecewise(msg.to_string()));
        match breakpoints.first() {
            Some(b0) if b0.is_one() => {}
            _ => return invalid("breakpoints must start at 1"),
        }
        if breakpoints.iter().any(|b| !b.is_positive()) {
            return invalid("breakpoints must be positive");
        }
        if breakpoints.windows(2).any(|w| w[0] <= w[1]) {
            return invalid("breakpoints must be strictly decreasing");
        }
        if breakpoints.iter().any(|b| !is_dyadic(b)) {
            return invalid("breakpoints must be dyadic rationals");
        }
        if pieces.len() + 1 != breakpoints.len() {
            return invalid("one piece is required per interval between consecutive breakpoints");
        }
        Ok(Self {
            breakpoints,
            pieces,
            tail,
        })
    }

    /// The constant-in-shape net: a single tail on `(0, 1]`.
    pub fn from_symbolic(net: SymbolicNet) -> Self {
        Self {
            breakpoints: vec![Rational::one()],
            pieces: Vec::new(),
            tail: net,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[SymbolicNet] {
        &self.pieces
    }

    pub fn tail(&self) -> &SymbolicNet {
        &self.tail
    }

    /// Number of pieces before the tail.
    pub fn depth(&self) -> usize {
        self.pieces.len()
    }

    /// The net governing the point `eps`, exactly.
    pub fn piece_at(&self, eps: &Rational) -> &SymbolicNet {
        // intervals are (b_{k+1}, b_k]
        for (k, piece) in self.pieces.iter().enumerate() {
            if eps > &self.breakpoints[k + 1] {
                return piece;
            }
        }
        &self.tail
    }

    fn piece_at_f64(&self, eps: f64) -> &SymbolicNet {
        for (k, piece) in self.pieces.iter().enumerate() {
            if eps > self.breakpoints[k + 1].to_f64().unwrap_or(0.0) {
                return piece;
            }
        }
        &self.tail
    }

    pub fn eval(&self, eps: f64) -> Complex64 {
        self.piece_at_f64(eps).eval(eps)
    }

    /// The sup-O valuation as ε → 0, computed exactly.
    ///
    /// A piece supported on `(b_{k+1}, b_k]` with `b_{k+1} > 0` is a bounded
    /// function vanishing near 0, so its growth order restricted to its
    /// interval is `+∞`; the minimum over pieces therefore reduces to the
    /// valuation of the tail.
    pub fn valuation(&self) -> ExtReal {
        self.tail.valuation()
    }

    pub fn abs_e(&self) -> f64 {
        self.valuation().abs_e()
    }

    /// Combines two piecewise nets interval by interval on the common refinement.
    pub fn combine(&self, other: &Self, op: impl Fn(&SymbolicNet, &SymbolicNet) -> SymbolicNet) -> Self {
        let mut breakpoints: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        breakpoints.sort_by(|a, b| b.cmp(a));
        breakpoints.dedup();
        let pieces = breakpoints
            .iter()
            .skip(1)
            .zip(breakpoints.iter())
            .map(|(_lo, hi)| op(self.piece_at(hi), other.piece_at(hi)))
            .collect();
        Self {
            breakpoints,
            pieces,
            tail: op(&self.tail, &other.tail),
        }
    }

    pub fn map(&self, op: impl Fn(&SymbolicNet) -> SymbolicNet) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(&op).collect(),
            tail: op(&self.tail),
        }
    }

    /// Merges neighbouring intervals carrying the same net.
    pub fn compact(&self) -> Self {
        let mut breakpoints = vec![Rational::one()];
        let mut pieces: Vec<SymbolicNet> = Vec::new();
        let all: Vec<&SymbolicNet> = self.pieces.iter().chain(std::iter::once(&self.tail)).collect();
        let mut current = all[0];
        for (k, next) in all.iter().enumerate().skip(1) {
            if *next != current {
                pieces.push(current.clone());
                breakpoints.push(self.breakpoints[k].clone());
                current = next;
            }
        }
        Self {
            breakpoints,
            pieces,
            tail: current.clone(),
        }
    }

    /// True when the net coincides with a single monomial sum on all of (0, 1].
    pub fn as_symbolic(&self) -> Option<&SymbolicNet> {
        self.pieces
            .iter()
            .all(|p| p == &self.tail)
            .then_some(&self.tail)
    }
}

impl Add for &PiecewiseNet {
    type Output = PiecewiseNet;
    fn add(self, rhs: Self) -> PiecewiseNet {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &PiecewiseNet {
    type Output = PiecewiseNet;
    fn sub(self, rhs: Self) -> PiecewiseNet {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &PiecewiseNet {
    type Output = PiecewiseNet;
    fn mul(self, rhs: Self) -> PiecewiseNet {
        self.combine(rhs, |a, b| a * b)
    }
}

impl Neg for &PiecewiseNet {
    type Output = PiecewiseNet;
    fn neg(self) -> PiecewiseNet {
        self.map(|a| -a)
    }
}

#[cfg(test)]
mod tests {
    use super::super::net::dyadic;
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// ε^k on (2^{-k-1}, 2^{-k}] for k = 0..K, tail ε^K below.
    fn staircase(depth: u64) -> PiecewiseNet {
        let breakpoints = (0..=depth + 1).map(dyadic).collect();
        let pieces = (0..=depth)
            .map(|k| SymbolicNet::eps_pow_int(k as i64))
            .collect();
        PiecewiseNet::new(breakpoints, pieces, SymbolicNet::eps_pow_int(depth as i64)).unwrap()
    }

    /// Brute-force sup-b search: the largest b on a 10⁻³ grid for which
    /// `|u_ε| ε^{-b}` does not grow along a deep run of dyadic ε samples.
    fn brute_force_valuation(u: &PiecewiseNet, b_max: f64) -> f64 {
        let samples: Vec<(f64, f64)> = (40..=140)
            .map(|m| {
                let eps = 2f64.powi(-m);
                (eps.ln(), u.eval(eps).norm().ln())
            })
            .collect();
        let mut best = f64::NEG_INFINITY;
        let mut b = -b_max;
        while b <= b_max {
            let scaled: Vec<f64> = samples.iter().map(|(le, lu)| lu - b * le).collect();
            let first = scaled[0];
            let bounded = scaled.iter().all(|s| *s <= first + 1e-9);
            if bounded {
                best = b;
            }
            b += 1e-3;
        }
        best
    }

    #[test]
    fn staircase_valuation_matches_brute_force() {
        for depth in 0..5u64 {
            let u = staircase(depth);
            let exact = u.valuation().to_f64().unwrap();
            assert_eq!(exact, depth as f64);
            let oracle = brute_force_valuation(&u, 8.0);
            assert!((oracle - exact).abs() <= 1.5e-3, "depth {depth}: {oracle} vs {exact}");
        }
    }

    #[test]
    fn zero_tail_is_negligible() {
        let u = PiecewiseNet::new(
            vec![q(1, 1), q(1, 2)],
            vec![SymbolicNet::from_integer(5)],
            SymbolicNet::zero(),
        )
        .unwrap();
        assert_eq!(u.valuation(), ExtReal::Infinity);
        assert_eq!(u.abs_e(), 0.0);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        let one = SymbolicNet::one();
        assert!(PiecewiseNet::new(vec![q(1, 2)], vec![], one.clone()).is_err());
        assert!(PiecewiseNet::new(vec![q(1, 1), q(1, 3)], vec![one.clone()], one.clone()).is_err());
        assert!(PiecewiseNet::new(vec![q(1, 1), q(1, 1)], vec![one.clone()], one.clone()).is_err());
        assert!(PiecewiseNet::new(vec![q(1, 1), q(1, 2)], vec![], one).is_err());
    }

    #[test]
    fn piece_lookup_uses_half_open_intervals() {
        let u = staircase(2);
        assert_eq!(u.piece_at(&q(1, 1)), &SymbolicNet::one());
        assert_eq!(u.piece_at(&q(1, 2)), &SymbolicNet::eps_pow_int(1));
        assert_eq!(u.piece_at(&q(3, 8)), &SymbolicNet::eps_pow_int(1));
        assert_eq!(u.piece_at(&q(1, 4)), &SymbolicNet::eps_pow_int(2));
        assert_eq!(u.piece_at(&q(1, 1000)), &SymbolicNet::eps_pow_int(2));
    }

    #[test]
    fn lifted_ops_refine_breakpoints() {
        let a = staircase(1);
        let b = PiecewiseNet::new(
            vec![q(1, 1), q(3, 8)],
            vec![SymbolicNet::from_integer(2)],
            SymbolicNet::from_integer(-1),
        )
        .unwrap();
        let s = &a + &b;
        assert_eq!(s.breakpoints(), &[q(1, 1), q(1, 2), q(3, 8), q(1, 4)]);
        for eps in [0.9, 0.45, 0.3, 0.2, 0.01] {
            let got = s.eval(eps);
            let want = a.eval(eps) + b.eval(eps);
            assert!((got - want).norm() < 1e-12, "eps {eps}");
        }
        let p = &a * &b;
        assert_eq!(p.valuation(), ExtReal::from_integer(1));
        assert_eq!((&a - &a).valuation(), ExtReal::Infinity);
    }

    #[test]
    fn compact_merges_equal_neighbours() {
        let u = PiecewiseNet::new(
            vec![q(1, 1), q(1, 2), q(1, 4)],
            vec![SymbolicNet::one(), SymbolicNet::one()],
            SymbolicNet::one(),
        )
        .unwrap();
        assert_eq!(u.compact(), PiecewiseNet::from_symbolic(SymbolicNet::one()));
        assert_eq!(u.as_symbolic(), Some(&SymbolicNet::one()));
    }
}
