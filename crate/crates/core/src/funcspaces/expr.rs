//! Expression trees over `x_0, …, x_{n-1}` and `ε`, with exact symbolic
//! differentiation.

use num_traits::ToPrimitive;

use crate::genscalar::SymbolicNet;

/// A real-valued expression in the spatial variables and `ε`.
///
/// `Bump { poly, order, arg }` is the function
/// `P(z) (1 − z²)^{-2n} exp(−1/(1 − z²))` on `|z| < 1` and `0` elsewhere, with
/// `P` given by ascending coefficients and `n = order`. The plain bump
/// `exp(−1/(1 − z²))` is `poly = [1], order = 0`; every derivative of a bump is
/// again of this form.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Eps,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Bump {
        poly: Vec<f64>,
        order: u32,
        arg: Box<Expr>,
    },
}

use Expr::*;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn finite_const(v: f64) -> Option<Expr> {
    v.is_finite().then_some(Const(v))
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Const(v)
    }

    pub fn var(i: usize) -> Self {
        Var(i)
    }

    pub fn eps() -> Self {
        Eps
    }

    pub fn bump(arg: Expr) -> Self {
        Bump {
            poly: vec![1.0],
            order: 0,
            arg: b(arg),
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_const(&self, v: f64) -> bool {
        self.as_const() == Some(v)
    }

    // Simplifying constructors used by differentiation; the parser builds raw
    // nodes so that printing and parsing are mutually inverse.

    pub fn neg(a: Expr) -> Expr {
        match a {
            Const(c) => Const(-c),
            Neg(inner) => *inner,
            a => Neg(b(a)),
        }
    }

    pub fn add(x: Expr, y: Expr) -> Expr {
        if x.is_const(0.0) {
            return y;
        }
        if y.is_const(0.0) {
            return x;
        }
        if let (Some(p), Some(q)) = (x.as_const(), y.as_const()) {
            if let Some(c) = finite_const(p + q) {
                return c;
            }
        }
        Add(b(x), b(y))
    }

    pub fn sub(x: Expr, y: Expr) -> Expr {
        if y.is_const(0.0) {
            return x;
        }
        if x.is_const(0.0) {
            return Expr::neg(y);
        }
        if let (Some(p), Some(q)) = (x.as_const(), y.as_const()) {
            if let Some(c) = finite_const(p - q) {
                return c;
            }
        }
        Sub(b(x), b(y))
    }

    pub fn mul(x: Expr, y: Expr) -> Expr {
        if x.is_const(0.0) || y.is_const(0.0) {
            return Const(0.0);
        }
        if x.is_const(1.0) {
            return y;
        }
        if y.is_const(1.0) {
            return x;
        }
        if x.is_const(-1.0) {
            return Expr::neg(y);
        }
        if y.is_const(-1.0) {
            return Expr::neg(x);
        }
        if let (Some(p), Some(q)) = (x.as_const(), y.as_const()) {
            if let Some(c) = finite_const(p * q) {
                return c;
            }
        }
        Mul(b(x), b(y))
    }

    pub fn div(x: Expr, y: Expr) -> Expr {
        if x.is_const(0.0) && !y.is_const(0.0) {
            return Const(0.0);
        }
        if y.is_const(1.0) {
            return x;
        }
        if let (Some(p), Some(q)) = (x.as_const(), y.as_const()) {
            if let Some(c) = finite_const(p / q) {
                return c;
            }
        }
        Div(b(x), b(y))
    }

    pub fn pow(x: Expr, y: Expr) -> Expr {
        if y.is_const(0.0) {
            return Const(1.0);
        }
        if y.is_const(1.0) {
            return x;
        }
        Pow(b(x), b(y))
    }

    pub fn exp(a: Expr) -> Expr {
        Exp(b(a))
    }

    pub fn log(a: Expr) -> Expr {
        Log(b(a))
    }

    pub fn sin(a: Expr) -> Expr {
        Sin(b(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Cos(b(a))
    }

    /// `Σ c_a ε^a`; only real coefficients are representable.
    pub fn from_symbolic(net: &SymbolicNet) -> Option<Expr> {
        let mut acc = Const(0.0);
        for t in net.terms() {
            if !num_traits::Zero::is_zero(&t.coeff.im) {
                return None;
            }
            let c = t.coeff.re.to_f64()?;
            let a = t.exp.to_f64()?;
            acc = Expr::add(acc, Expr::mul(Const(c), Expr::pow(Eps, Const(a))));
        }
        Some(acc)
    }

    /// Largest variable index plus one.
    pub fn min_dim(&self) -> usize {
        match self {
            Const(_) | Eps => 0,
            Var(i) => i + 1,
            Neg(a) | Exp(a) | Log(a) | Sin(a) | Cos(a) | Bump { arg: a, .. } => a.min_dim(),
            Add(x, y) | Sub(x, y) | Mul(x, y) | Div(x, y) | Pow(x, y) => x.min_dim().max(y.min_dim()),
        }
    }

    pub fn depends_on(&self, axis: usize) -> bool {
        match self {
            Const(_) | Eps => false,
            Var(i) => *i == axis,
            Neg(a) | Exp(a) | Log(a) | Sin(a) | Cos(a) | Bump { arg: a, .. } => a.depends_on(axis),
            Add(x, y) | Sub(x, y) | Mul(x, y) | Div(x, y) | Pow(x, y) => {
                x.depends_on(axis) || y.depends_on(axis)
            }
        }
    }

    pub fn eval(&self, x: &[f64], eps: f64) -> f64 {
        match self {
            Const(c) => *c,
            Var(i) => x[*i],
            Eps => eps,
            Neg(a) => -a.eval(x, eps),
            Add(p, q) => p.eval(x, eps) + q.eval(x, eps),
            Sub(p, q) => p.eval(x, eps) - q.eval(x, eps),
            Mul(p, q) => p.eval(x, eps) * q.eval(x, eps),
            Div(p, q) => p.eval(x, eps) / q.eval(x, eps),
            Pow(p, q) => pow_f64(p.eval(x, eps), q.eval(x, eps)),
            Exp(a) => a.eval(x, eps).exp(),
            Log(a) => a.eval(x, eps).ln(),
            Sin(a) => a.eval(x, eps).sin(),
            Cos(a) => a.eval(x, eps).cos(),
            Bump { poly, order, arg } => bump_value(poly, *order, arg.eval(x, eps)),
        }
    }

    /// `∂/∂x_axis`, symbolically.
    pub fn diff(&self, axis: usize) -> Expr {
        if !self.depends_on(axis) {
            return Const(0.0);
        }
        match self {
            Const(_) | Eps => Const(0.0),
            Var(_) => Const(1.0),
            Neg(a) => Expr::neg(a.diff(axis)),
            Add(p, q) => Expr::add(p.diff(axis), q.diff(axis)),
            Sub(p, q) => Expr::sub(p.diff(axis), q.diff(axis)),
            Mul(p, q) => Expr::add(
                Expr::mul(p.diff(axis), (**q).clone()),
                Expr::mul((**p).clone(), q.diff(axis)),
            ),
            Div(p, q) => {
                if !q.depends_on(axis) {
                    Expr::div(p.diff(axis), (**q).clone())
                } else {
                    Expr::div(
                        Expr::sub(
                            Expr::mul(p.diff(axis), (**q).clone()),
                            Expr::mul((**p).clone(), q.diff(axis)),
                        ),
                        Expr::pow((**q).clone(), Const(2.0)),
                    )
                }
            }
            Pow(base, e) => {
                if !e.depends_on(axis) {
                    let lowered = Expr::sub((**e).clone(), Const(1.0));
                    Expr::mul(
                        Expr::mul((**e).clone(), Expr::pow((**base).clone(), lowered)),
                        base.diff(axis),
                    )
                } else {
                    Expr::mul(
                        self.clone(),
                        Expr::add(
                            Expr::mul(e.diff(axis), Expr::log((**base).clone())),
                            Expr::div(
                                Expr::mul((**e).clone(), base.diff(axis)),
                                (**base).clone(),
                            ),
                        ),
                    )
                }
            }
            Exp(a) => Expr::mul(self.clone(), a.diff(axis)),
            Log(a) => Expr::div(a.diff(axis), (**a).clone()),
            Sin(a) => Expr::mul(Expr::cos((**a).clone()), a.diff(axis)),
            Cos(a) => Expr::neg(Expr::mul(Expr::sin((**a).clone()), a.diff(axis))),
            Bump { poly, order, arg } => {
                let (dpoly, dorder) = bump_derivative(poly, *order);
                Expr::mul(
                    Bump {
                        poly: dpoly,
                        order: dorder,
                        arg: arg.clone(),
                    },
                    arg.diff(axis),
                )
            }
        }
    }

    /// Replaces `x_i` by `subs[i]`.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        let s = |e: &Expr| b(e.substitute(subs));
        match self {
            Const(_) | Eps => self.clone(),
            Var(i) => subs[*i].clone(),
            Neg(a) => Neg(s(a)),
            Add(p, q) => Add(s(p), s(q)),
            Sub(p, q) => Sub(s(p), s(q)),
            Mul(p, q) => Mul(s(p), s(q)),
            Div(p, q) => Div(s(p), s(q)),
            Pow(p, q) => Pow(s(p), s(q)),
            Exp(a) => Exp(s(a)),
            Log(a) => Log(s(a)),
            Sin(a) => Sin(s(a)),
            Cos(a) => Cos(s(a)),
            Bump { poly, order, arg } => Bump {
                poly: poly.clone(),
                order: *order,
                arg: s(arg),
            },
        }
    }
}

fn pow_f64(base: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
        base.powi(e as i32)
    } else {
        base.powf(e)
    }
}

fn horner(poly: &[f64], z: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, c| acc * z + c)
}

fn bump_value(poly: &[f64], order: u32, z: f64) -> f64 {
    if !(z.abs() < 1.0) {
        return if z.is_nan() { f64::NAN } else { 0.0 };
    }
    let s = 1.0 - z * z;
    let log_factor = -2.0 * order as f64 * s.ln() - 1.0 / s;
    horner(poly, z) * log_factor.exp()
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `d/dz [P s^{-2n} e^{-1/s}] = Q s^{-2(n+1)} e^{-1/s}` with `s = 1 − z²` and
/// `Q = P′ s² + 4n z P s − 2z P`.
fn bump_derivative(poly: &[f64], order: u32) -> (Vec<f64>, u32) {
    let s = [1.0, 0.0, -1.0];
    let dp: Vec<f64> = poly.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let term1 = poly_mul(&dp, &poly_mul(&s, &s));
    let term2 = poly_mul(&[0.0, 4.0 * order as f64], &poly_mul(poly, &s));
    let term3 = poly_mul(&[0.0, -2.0], poly);
    let mut q = poly_add(&poly_add(&term1, &term2), &term3);
    while q.len() > 1 && q.last() == Some(&0.0) {
        q.pop();
    }
    (q, order + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Var(0)
    }

    fn sin_x_over_eps() -> Expr {
        Expr::sin(Expr::div(x(), Eps))
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn chain_rule() {
        let d = sin_x_over_eps().diff(0);
        for &(xv, e) in &[(0.3, 0.1), (0.7, 0.01), (0.0, 0.5)] {
            assert!(close(d.eval(&[xv], e), (xv / e).cos() / e));
        }
    }

    #[test]
    fn constants_vanish() {
        assert_eq!(Const(3.0).diff(0), Const(0.0));
        assert_eq!(Expr::mul(Eps, Const(2.0)).diff(0), Const(0.0));
        assert_eq!(Var(1).diff(0), Const(0.0));
    }

    #[test]
    fn product_rule() {
        let g = Expr::exp(Expr::mul(Const(-1.0), Expr::pow(x(), Const(2.0))));
        let f = Expr::mul(x(), g.clone());
        let expected = Expr::add(g.clone(), Expr::mul(x(), g.diff(0)));
        for xv in [-1.5, -0.2, 0.0, 0.9] {
            assert!(close(f.diff(0).eval(&[xv], 1.0), expected.eval(&[xv], 1.0)));
        }
    }

    #[test]
    fn quotient_and_variable_exponent() {
        let f = Expr::div(Expr::sin(x()), Expr::add(Const(2.0), x()));
        let g = Expr::pow(Expr::add(Const(2.0), x()), x());
        for xv in [0.1f64, 0.5, 1.5] {
            let df = (xv.cos() * (2.0 + xv) - xv.sin()) / (2.0 + xv).powi(2);
            assert!(close(f.diff(0).eval(&[xv], 1.0), df));
            let dg = (2.0 + xv).powf(xv) * ((2.0 + xv).ln() + xv / (2.0 + xv));
            assert!(close(g.diff(0).eval(&[xv], 1.0), dg));
        }
    }

    #[test]
    fn bump_derivatives_match_central_differences() {
        let mut f = Expr::bump(x());
        for _ in 0..4 {
            let d = f.diff(0);
            for z in [-0.8, -0.3, 0.1, 0.55, 0.9] {
                let h = 1e-5;
                let fd = (f.eval(&[z + h], 1.0) - f.eval(&[z - h], 1.0)) / (2.0 * h);
                let exact = d.eval(&[z], 1.0);
                assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "z = {z}");
            }
            f = d;
        }
        assert_eq!(Expr::bump(x()).eval(&[1.0], 1.0), 0.0);
        assert_eq!(Expr::bump(x()).eval(&[0.0], 1.0), (-1f64).exp());
    }

    #[test]
    fn substitution_composes() {
        // sin(x/ε) at x = ε·c is sin(c)
        let c = 355.0 / 226.0;
        let at = sin_x_over_eps().substitute(&[Expr::mul(Const(c), Eps)]);
        for e in [0.5, 1e-3, 1e-9] {
            assert!(close(at.eval(&[], e), c.sin()));
        }
    }

    #[test]
    fn symbolic_nets_convert() {
        let net = &SymbolicNet::eps_pow_int(2) + &SymbolicNet::from_integer(3);
        let e = Expr::from_symbolic(&net).unwrap();
        assert!(close(e.eval(&[], 0.5), 3.25));
        let complex = SymbolicNet::constant(crate::genscalar::ComplexRational::i());
        assert!(Expr::from_symbolic(&complex).is_none());
    }
}
