use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ComplexRational, ExtReal, GenScalarError, Rational};

/// The net `(c ε^b)_ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: ComplexRational,
    pub exp: Rational,
}

impl Monomial {
    pub fn new(coeff: ComplexRational, exp: Rational) -> Self {
        Self { coeff, exp }
    }

    pub fn eval(&self, eps: f64) -> Complex64 {
        self.coeff.to_complex64() * eps.powf(self.exp.to_f64().unwrap_or(f64::NAN))
    }
}

/// A finite sum of monomials `Σ c_j ε^{b_j}`.
///
/// Terms are kept sorted strictly ascending by exponent with no zero
/// coefficients, so the empty list is the zero net and the first term is the
/// leading one. Two nets in this class are equal in C̃ exactly when their term
/// lists coincide.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicNet {
    terms: Vec<Monomial>,
}

/// Merges equal exponents, drops zero coefficients and sorts ascending.
pub fn normalize(terms: impl IntoIterator<Item = Monomial>) -> SymbolicNet {
    let mut merged: BTreeMap<Rational, ComplexRational> = BTreeMap::new();
    for Monomial { coeff, exp } in terms {
        let slot = merged.entry(exp).or_insert_with(ComplexRational::zero);
        *slot = &*slot + &coeff;
    }
    SymbolicNet {
        terms: merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exp, coeff)| Monomial { coeff, exp })
            .collect(),
    }
}

impl SymbolicNet {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ComplexRational::one())
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    pub fn from_integer(c: i64) -> Self {
        Self::constant(ComplexRational::from_integer(c))
    }

    pub fn monomial(coeff: ComplexRational, exp: Rational) -> Self {
        normalize([Monomial::new(coeff, exp)])
    }

    /// `ε^exp`.
    pub fn eps_pow(exp: Rational) -> Self {
        Self::monomial(ComplexRational::one(), exp)
    }

    pub fn eps_pow_int(exp: i64) -> Self {
        Self::eps_pow(Rational::from_integer(exp.into()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        normalize(terms)
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The smallest exponent present, `+∞` for the zero net.
    pub fn valuation(&self) -> ExtReal {
        match self.leading() {
            Some(m) => ExtReal::Finite(m.exp.clone()),
            None => ExtReal::Infinity,
        }
    }

    pub fn abs_e(&self) -> f64 {
        self.valuation().abs_e()
    }

    /// Multiplies by `ε^by`.
    pub fn shift(&self, by: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::new(m.coeff.clone(), &m.exp + by))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        normalize(
            self.terms
                .iter()
                .map(|m| Monomial::new(&m.coeff * c, m.exp.clone())),
        )
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::new(m.coeff.conj(), m.exp.clone()))
                .collect(),
        }
    }

    /// Drops every term with exponent strictly above `order`.
    pub fn truncate_above(&self, order: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|m| &m.exp <= order)
                .cloned()
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// A truncated multiplicative inverse `w` with `val(u·w − 1) > order`.
    ///
    /// Writing `u = c ε^a (1 + r)` with `val(r) = δ > 0`, the geometric series
    /// `Σ_{n ≤ N} (−r)^n` with `(N+1)δ > order` leaves the remainder
    /// `(−r)^{N+1}`; terms of the partial sum above `order` are dropped since
    /// they only perturb `u·w − 1` above `order`.
    pub fn invert_truncated(&self, order: &Rational) -> Result<Self, GenScalarError> {
        let lead = self.leading().ok_or(GenScalarError::ZeroLeading)?;
        let c_inv = lead
            .coeff
            .inv()
            .expect("normalized terms have nonzero coefficients");
        let a = lead.exp.clone();
        // r = u / (c ε^a) − 1
        let r = normalize(
            self.terms[1..]
                .iter()
                .map(|m| Monomial::new(&m.coeff * &c_inv, &m.exp - &a)),
        );
        let w_rel = match r.leading() {
            None => Self::one(),
            Some(m) => {
                let delta = m.exp.clone();
                let n = if order.is_negative() {
                    0
                } else {
                    (order / &delta).floor().to_integer().to_u32().unwrap_or(u32::MAX)
                };
                let neg_r = -&r;
                let mut sum = Self::one();
                let mut power = Self::one();
                for _ in 0..n {
                    power = (&power * &neg_r).truncate_above(order);
                    if power.is_zero() {
                        break;
                    }
                    sum = &sum + &power;
                }
                sum.truncate_above(order)
            }
        };
        Ok(w_rel.scale(&c_inv).shift(&-a))
    }

    pub fn eval(&self, eps: f64) -> Complex64 {
        self.terms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, m| acc + m.eval(eps))
    }

    /// Largest exponent present, if any.
    pub fn max_exp(&self) -> Option<&Rational> {
        self.terms.last().map(|m| &m.exp)
    }

    /// True when every exponent has a power-of-two denominator.
    pub fn has_dyadic_exponents(&self) -> bool {
        self.terms.iter().all(|m| is_dyadic(&m.exp))
    }
}

pub(crate) fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    let one = num_bigint::BigInt::one();
    // d is positive; a power of two has a single set bit.
    d.is_positive() && (d & (d - &one)).is_zero()
}

pub(crate) fn dyadic(k: u64) -> Rational {
    Rational::new(num_bigint::BigInt::one(), num_bigint::BigInt::one() << k)
}

impl Add for &SymbolicNet {
    type Output = SymbolicNet;
    fn add(self, rhs: Self) -> SymbolicNet {
        normalize(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Sub for &SymbolicNet {
    type Output = SymbolicNet;
    fn sub(self, rhs: Self) -> SymbolicNet {
        self + &(-rhs)
    }
}

impl Neg for &SymbolicNet {
    type Output = SymbolicNet;
    fn neg(self) -> SymbolicNet {
        SymbolicNet {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::new(-&m.coeff, m.exp.clone()))
                .collect(),
        }
    }
}

impl Mul for &SymbolicNet {
    type Output = SymbolicNet;
    fn mul(self, rhs: Self) -> SymbolicNet {
        normalize(self.terms.iter().flat_map(|a| {
            rhs.terms
                .iter()
                .map(move |b| Monomial::new(&a.coeff * &b.coeff, &a.exp + &b.exp))
        }))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SymbolicNet {
            type Output = SymbolicNet;
            fn $m(self, rhs: SymbolicNet) -> SymbolicNet {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SymbolicNet {
    type Output = SymbolicNet;
    fn neg(self) -> SymbolicNet {
        -&self
    }
}

impl fmt::Display for SymbolicNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.exp.is_zero() {
                write!(f, "{}", m.coeff)?;
            } else {
                write!(f, "{}·ε^{}", m.coeff, m.exp)?;
            }
        }
        Ok(())
    }
}
