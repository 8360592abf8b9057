use num_traits::Zero;

use super::{CompactBox, Expr, ExprNet, FuncError};
use crate::genscalar::SymbolicNet;
use crate::sampled::{SampleGrid, SampledNet};

/// A generalized point `x̃ = [(x_ε)]` with one symbolic net per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GenPoint {
    coords: Vec<SymbolicNet>,
    witness: CompactBox,
    compact: bool,
}

impl GenPoint {
    /// Records whether every coordinate sample on the grid lies in `witness`.
    pub fn new(coords: Vec<SymbolicNet>, witness: CompactBox, grid: SampleGrid) -> Result<Self, FuncError> {
        if coords.len() != witness.dim() {
            return Err(FuncError::DimMismatch {
                expected: witness.dim(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| c.terms().iter().any(|t| !t.coeff.im.is_zero())) {
            return Err(FuncError::ComplexCoordinate);
        }
        let compact = grid.points().all(|(_, eps)| {
            let x: Vec<f64> = coords.iter().map(|c| c.eval(eps).re).collect();
            witness.contains_point(&x)
        });
        Ok(Self {
            coords,
            witness,
            compact,
        })
    }

    pub fn coords(&self) -> &[SymbolicNet] {
        &self.coords
    }

    pub fn witness(&self) -> &CompactBox {
        &self.witness
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `u(x̃) = [(u_ε(x_ε))]`, sampled on the grid through the composed expression.
pub fn point_value(net: &ExprNet, pt: &GenPoint, grid: SampleGrid) -> Result<SampledNet, FuncError> {
    if !pt.compact {
        return Err(FuncError::NotCompact);
    }
    if pt.dim() != net.dim() {
        return Err(FuncError::DimMismatch {
            expected: net.dim(),
            got: pt.dim(),
        });
    }
    let subs = pt
        .coords
        .iter()
        .map(Expr::from_symbolic)
        .collect::<Option<Vec<_>>>()
        .ok_or(FuncError::ComplexCoordinate)?;
    let composed = net.expr().substitute(&subs);
    let values = grid
        .points()
        .map(|(_, eps)| {
            let v = composed.eval(&[], eps);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(FuncError::NonFinite { x: Vec::new(), eps })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledNet::from_real(grid, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genscalar::{ComplexRational, Rational};
    use crate::sampled::{classify, estimate_val, Classification};

    fn g() -> SampleGrid {
        SampleGrid::new(1, 20).unwrap()
    }

    fn unit() -> CompactBox {
        CompactBox::cube(-4, 4, 1).unwrap()
    }

    #[test]
    fn identity_at_eps() {
        let pt = GenPoint::new(vec![SymbolicNet::eps_pow_int(1)], unit(), g()).unwrap();
        let v = point_value(&ExprNet::parse("x0").unwrap(), &pt, g()).unwrap();
        let est = estimate_val(&v).unwrap();
        assert!((est.estimate.value().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_net_is_negligible() {
        let x = &SymbolicNet::from_integer(1) + &SymbolicNet::eps_pow(Rational::new(1.into(), 2.into()));
        let pt = GenPoint::new(vec![x], unit(), g()).unwrap();
        let v = point_value(&ExprNet::parse("0").unwrap(), &pt, g()).unwrap();
        assert_eq!(classify(&v, 10).unwrap(), Classification::Negligible(10));
    }

    #[test]
    fn oscillation_at_a_scaled_point() {
        // x̃ = [(ε c)] with c = 355/226 ≈ π/2: sin(x_ε/ε) = sin(c)
        let c = Rational::new(355.into(), 226.into());
        let pt = GenPoint::new(
            vec![SymbolicNet::monomial(ComplexRational::real(c), Rational::from_integer(1.into()))],
            unit(),
            g(),
        )
        .unwrap();
        let v = point_value(&ExprNet::parse("(sin (div x0 eps))").unwrap(), &pt, g()).unwrap();
        let expected = (355.0f64 / 226.0).sin();
        assert!(v.values().iter().all(|z| (z.re - expected).abs() < 1e-14));
        assert!((1.0 - expected) < 1e-12);
        assert!(estimate_val(&v).unwrap().estimate.value().unwrap().abs() < 1e-9);
    }

    #[test]
    fn escaping_points_are_rejected() {
        let pt = GenPoint::new(vec![SymbolicNet::eps_pow_int(-1)], unit(), g()).unwrap();
        assert!(!pt.is_compact());
        assert_eq!(
            point_value(&ExprNet::parse("x0").unwrap(), &pt, g()),
            Err(FuncError::NotCompact)
        );
        let complex = SymbolicNet::constant(ComplexRational::i());
        assert_eq!(GenPoint::new(vec![complex], unit(), g()), Err(FuncError::ComplexCoordinate));
    }

    #[test]
    fn sums_are_pointwise_exact() {
        let pt = GenPoint::new(vec![&SymbolicNet::one() - &SymbolicNet::eps_pow_int(2)], unit(), g()).unwrap();
        let u = ExprNet::parse("(sin (div x0 eps))").unwrap();
        let w = ExprNet::parse("(mul (pow eps -2) (exp x0))").unwrap();
        let sum = point_value(&u.add(&w).unwrap(), &pt, g()).unwrap();
        let parts = point_value(&u, &pt, g()).unwrap().add(&point_value(&w, &pt, g()).unwrap()).unwrap();
        assert_eq!(sum, parts);
    }
}
