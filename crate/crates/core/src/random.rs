//! Seeded generators for random nets, vectors and probe sets.
//!
//! All randomness in the crate flows through [`rng`], a ChaCha stream keyed by
//! a `u64` seed, so runs are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::genscalar::{ComplexRational, GenVector, Monomial, Rational, SymbolicNet};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly generated symbolic nets.
#[derive(Clone, Debug, PartialEq)]
pub struct NetParams {
    /// Terms per net, inclusive range.
    pub terms: (usize, usize),
    /// Exponent numerators, inclusive range (before division by the denominator).
    pub exp_num: (i64, i64),
    /// Exponent denominators to draw from.
    pub exp_den: Vec<i64>,
    /// Coefficient numerators drawn from `[-coeff, coeff]`.
    pub coeff: i64,
    /// Coefficient denominators drawn from `1..=coeff_den`.
    pub coeff_den: i64,
    pub complex: bool,
    /// Probability of the zero net.
    pub zero_prob: f64,
}

impl Default for NetParams {
    fn default() -> Self {
        Self {
            terms: (1, 4),
            exp_num: (-12, 12),
            exp_den: vec![1, 2, 3, 4],
            coeff: 9,
            coeff_den: 4,
            complex: true,
            zero_prob: 0.05,
        }
    }
}

impl NetParams {
    /// Real coefficients, dyadic exponents in `[lo, hi]`: the class that also
    /// samples cleanly.
    pub fn sampling(lo: i64, hi: i64) -> Self {
        Self {
            terms: (1, 3),
            exp_num: (2 * lo, 2 * hi),
            exp_den: vec![2],
            coeff: 5,
            coeff_den: 1,
            complex: false,
            zero_prob: 0.0,
        }
    }
}

pub fn rational(rng: &mut impl Rng, num: (i64, i64), dens: &[i64]) -> Rational {
    let n = rng.gen_range(num.0..=num.1);
    let d = dens[rng.gen_range(0..dens.len())];
    Rational::new(n.into(), d.into())
}

fn nonzero_coeff<R: Rng>(rng: &mut R, p: &NetParams) -> ComplexRational {
    let part = |rng: &mut R| {
        let n = rng.gen_range(-p.coeff..=p.coeff);
        Rational::new(n.into(), rng.gen_range(1..=p.coeff_den.max(1)).into())
    };
    loop {
        let re = part(rng);
        let im = if p.complex && rng.gen_bool(0.5) {
            part(rng)
        } else {
            Rational::from_integer(0.into())
        };
        let c = ComplexRational::new(re, im);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A nonzero monomial `c ε^a`.
pub fn monomial(rng: &mut impl Rng, p: &NetParams) -> SymbolicNet {
    let c = nonzero_coeff(rng, p);
    SymbolicNet::monomial(c, rational(rng, p.exp_num, &p.exp_den))
}

pub fn net(rng: &mut impl Rng, p: &NetParams) -> SymbolicNet {
    if p.zero_prob > 0.0 && rng.gen_bool(p.zero_prob) {
        return SymbolicNet::zero();
    }
    let n = rng.gen_range(p.terms.0..=p.terms.1);
    SymbolicNet::from_terms((0..n).map(|_| {
        Monomial::new(nonzero_coeff(rng, p), rational(rng, p.exp_num, &p.exp_den))
    }))
}

pub fn vector(rng: &mut impl Rng, dim: usize, p: &NetParams) -> GenVector {
    GenVector::new((0..dim).map(|_| net(rng, p)).collect())
}
