use std::sync::Arc;

use num_traits::Zero;

use super::{GenModule, SeminormError, UltraSeminorm};
use crate::genscalar::{ExtReal, Rational};

/// The scaled ball `[(ε^a)]·{u : P(u) ≤ η}` with `η = e^{log_eta}`.
pub struct Ball<M> {
    pub p: Arc<dyn UltraSeminorm<M>>,
    pub log_eta: Rational,
    pub shift: Rational,
}

impl<M> Clone for Ball<M> {
    fn clone(&self) -> Self {
        Self {
            p: self.p.clone(),
            log_eta: self.log_eta.clone(),
            shift: self.shift.clone(),
        }
    }
}

impl<M: GenModule> Ball<M> {
    pub fn new(p: Arc<dyn UltraSeminorm<M>>, log_eta: Rational, shift: Rational) -> Self {
        Self { p, log_eta, shift }
    }

    /// `{P ≤ 1}`.
    pub fn unit(p: Arc<dyn UltraSeminorm<M>>) -> Self {
        Self::new(p, Rational::zero(), Rational::zero())
    }

    /// `sup{b : u ∈ [(ε^b)]·ball} = log η − a + val_P(u)`.
    pub fn gauge_val(&self, u: &M) -> ExtReal {
        self.p.valuation(u).shift(&(&self.log_eta - &self.shift))
    }

    /// `u ∈ ball`, checked from the definition: `ε^{-a}u` must lie in `{P ≤ η}`.
    pub fn contains(&self, u: &M) -> bool {
        let pulled = u.shift(&-&self.shift);
        self.p.valuation(&pulled) >= ExtReal::Finite(-&self.log_eta)
    }
}

/// A finite intersection of scaled seminorm balls.
pub struct ConvexSetSpec<M> {
    balls: Vec<Ball<M>>,
}

impl<M> Clone for ConvexSetSpec<M> {
    fn clone(&self) -> Self {
        Self {
            balls: self.balls.clone(),
        }
    }
}

impl<M: GenModule> ConvexSetSpec<M> {
    pub fn new(balls: Vec<Ball<M>>) -> Result<Self, SeminormError> {
        if balls.is_empty() {
            return Err(SeminormError::EmptySpec);
        }
        Ok(Self { balls })
    }

    pub fn balls(&self) -> &[Ball<M>] {
        &self.balls
    }

    /// `val_A(u) = sup{b : u ∈ [(ε^b)]A}`: the minimum over the balls.
    pub fn gauge_val(&self, u: &M) -> ExtReal {
        let vals: Vec<ExtReal> = self.balls.iter().map(|b| b.gauge_val(u)).collect();
        ExtReal::min_of(&vals)
    }

    /// `P_A(u) = e^{-val_A(u)}`.
    pub fn gauge(&self, u: &M) -> f64 {
        self.gauge_val(u).abs_e()
    }

    pub fn contains(&self, u: &M) -> bool {
        self.balls.iter().all(|b| b.contains(u))
    }

    /// `u ∈ [(ε^r)]A`, i.e. `ε^{-r}u ∈ A`.
    pub fn contains_scaled(&self, u: &M, r: &Rational) -> bool {
        self.contains(&u.shift(&-r))
    }

    /// The chain `P_A(u) < η ⇒ u ∈ [(ε^{-log η})]A ⇒ P_A(u) ≤ η` at
    /// `η = e^{log_eta}`, decided exactly. Returns the three truth values.
    pub fn chain(&self, u: &M, log_eta: &Rational) -> (bool, bool, bool) {
        let val = self.gauge_val(u);
        let bound = ExtReal::Finite(-log_eta);
        let strict = val > bound;
        let member = self.contains_scaled(u, &-log_eta);
        let weak = val >= bound;
        (strict, member, weak)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genscalar::SymbolicNet;
    use crate::seminorms::{AbsE, FnSeminorm, ScaledAbsE};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn abs_e() -> Arc<dyn UltraSeminorm<SymbolicNet>> {
        Arc::new(AbsE)
    }

    #[test]
    fn unit_ball_examples() {
        let a = ConvexSetSpec::new(vec![Ball::unit(abs_e())]).unwrap();
        let u = SymbolicNet::eps_pow_int(2);
        assert_eq!(a.gauge_val(&u), ExtReal::from_integer(2));
        assert_eq!(a.gauge(&u), (-2f64).exp());
        // hand oracle: P(ε^{-b}ε²) = e^{b-2} ≤ 1 exactly for b ≤ 2
        assert!(a.contains_scaled(&u, &q(2)));
        assert!(!a.contains_scaled(&u, &Rational::new(201.into(), 100.into())));
        assert_eq!(a.gauge_val(&SymbolicNet::zero()), ExtReal::Infinity);
    }

    #[test]
    fn intersection_takes_the_min() {
        let p1 = FnSeminorm::new("p1", |_: &SymbolicNet| ExtReal::from_integer(1));
        let p2 = FnSeminorm::new("p2", |_: &SymbolicNet| ExtReal::from_integer(3));
        let a = ConvexSetSpec::new(vec![Ball::unit(Arc::new(p1)), Ball::unit(Arc::new(p2))]).unwrap();
        assert_eq!(a.gauge_val(&SymbolicNet::one()), ExtReal::from_integer(1));
    }

    #[test]
    fn shifted_ball_gauge() {
        // [(ε^a)]{|·|_e ≤ e^l}: u ∈ ε^b ε^a B iff val(u) − a − b ≥ −l
        let ball = Ball::new(abs_e(), q(2), q(3));
        let a = ConvexSetSpec::new(vec![ball]).unwrap();
        let u = SymbolicNet::eps_pow_int(5);
        assert_eq!(a.gauge_val(&u), ExtReal::from_integer(4));
        assert!(a.contains_scaled(&u, &q(4)));
        assert!(!a.contains_scaled(&u, &Rational::new(41.into(), 10.into())));
    }

    #[test]
    fn chain_on_a_scaled_family() {
        let a = ConvexSetSpec::new(vec![
            Ball::new(abs_e(), Rational::new(1.into(), 2.into()), q(-1)),
            Ball::new(Arc::new(ScaledAbsE::new(q(2))), q(-1), q(0)),
        ])
        .unwrap();
        for k in -3..4 {
            let u = SymbolicNet::eps_pow_int(k);
            for l in -6..6 {
                let (strict, member, weak) = a.chain(&u, &Rational::new(l.into(), 3.into()));
                assert!(!strict || member);
                assert!(!member || weak);
            }
        }
        assert!(ConvexSetSpec::<SymbolicNet>::new(vec![]).is_err());
    }
}
