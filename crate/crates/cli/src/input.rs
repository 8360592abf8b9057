//! Reading nets, vectors, functionals and the CLI's auxiliary JSON files.
//!
//! Every `--net`/`--expr`-style argument is either a path to an existing file
//! or the text itself.

use std::path::Path;

use serde::Deserialize;

use sharptop_core::format::{self, SymbolicWire, Q};
use sharptop_core::funcspaces::{CompactBox, ExprNet, Support};
use sharptop_core::{GenScalar, GenVector, PiecewiseNet, Rational, SymbolicNet};

use crate::error::CliError;

/// Any object accepted where a net is expected.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedNet {
    Symbolic(SymbolicNet),
    Piecewise(PiecewiseNet),
    Expr(ExprNet),
}

impl ParsedNet {
    pub fn into_scalar(self) -> Result<GenScalar, CliError> {
        match self {
            ParsedNet::Symbolic(n) => Ok(GenScalar::Symbolic(n)),
            ParsedNet::Piecewise(p) => Ok(GenScalar::Piecewise(p)),
            ParsedNet::Expr(_) => Err(CliError::Usage(
                "expected a generalized number (JSON net), got an expression net".into(),
            )),
        }
    }

    pub fn into_symbolic(self) -> Result<SymbolicNet, CliError> {
        match self {
            ParsedNet::Symbolic(n) => Ok(n),
            _ => Err(CliError::Usage("expected a symbolic net".into())),
        }
    }
}

/// A JSON object parses as a symbolic or piecewise net, anything else as an
/// s-expression.
pub fn parse_net(text: &str) -> Result<ParsedNet, CliError> {
    parse_net_named("net", text)
}

pub fn parse_net_named(name: &str, text: &str) -> Result<ParsedNet, CliError> {
    if text.trim_start().starts_with('{') {
        Ok(match format::scalar_from_json(text).map_err(|e| CliError::parse_in(name, e))? {
            GenScalar::Symbolic(n) => ParsedNet::Symbolic(n),
            GenScalar::Piecewise(p) => ParsedNet::Piecewise(p),
        })
    } else {
        parse_expr_named(name, text, None).map(ParsedNet::Expr)
    }
}

pub fn parse_expr_named(name: &str, text: &str, dim: Option<usize>) -> Result<ExprNet, CliError> {
    let expr = sharptop_core::funcspaces::parse_expr(text.trim()).map_err(|e| CliError::sexp_in(name, e))?;
    let dim = dim.unwrap_or(expr.min_dim().max(1));
    Ok(ExprNet::new(expr, dim)?)
}

/// `(label, text)` for a path-or-inline argument.
pub fn read_arg(arg: &str) -> Result<(String, String), CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Ok((path.display().to_string(), text))
    } else {
        Ok(("<inline>".into(), arg.to_string()))
    }
}

pub fn net_arg(arg: &str) -> Result<ParsedNet, CliError> {
    let (name, text) = read_arg(arg)?;
    parse_net_named(&name, &text)
}

pub fn scalar_arg(arg: &str) -> Result<GenScalar, CliError> {
    net_arg(arg)?.into_scalar()
}

pub fn expr_arg(arg: &str) -> Result<ExprNet, CliError> {
    let (name, text) = read_arg(arg)?;
    parse_expr_named(&name, &text, None)
}

pub fn vector_arg(arg: &str) -> Result<GenVector, CliError> {
    let (name, text) = read_arg(arg)?;
    format::vector_from_json(&text).map_err(|e| CliError::parse_in(&name, e))
}

pub fn functional_arg(arg: &str) -> Result<sharptop_core::duality::Functional, CliError> {
    let (name, text) = read_arg(arg)?;
    format::functional_from_json(&text).map_err(|e| CliError::parse_in(&name, e))
}

/// Parses a JSON argument into a CLI-specific wire type.
pub fn json_arg<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<(String, T), CliError> {
    let (name, text) = read_arg(arg)?;
    let v = serde_json::from_str(&text).map_err(|e| CliError::parse_in(&name, e.into()))?;
    Ok((name, v))
}

/// `lo:hi` per axis, comma separated, rational endpoints: `-1:1,0:1/2`.
pub fn parse_box(s: &str) -> Result<CompactBox, CliError> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in s.split(',') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("box axis must be lo:hi, got '{part}'")))?;
        lo.push(rational(a)?);
        hi.push(rational(b)?);
    }
    Ok(CompactBox::new(lo, hi)?)
}

fn rational(s: &str) -> Result<Rational, CliError> {
    format::parse_rational(s).map_err(CliError::Usage)
}

/// The unit cube `[0, 1]ⁿ`.
pub fn unit_box(dim: usize) -> CompactBox {
    CompactBox::cube(0, 1, dim).expect("valid cube")
}

/// `{"weight":"s","log_eta":"l","shift":"a"}`: the scaled ball
/// `[(ε^a)]·{u : |ε^s u|_e ≤ e^l}`, all fields defaulting to 0.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallWire {
    #[serde(default = "zero")]
    pub weight: Q,
    #[serde(default = "zero")]
    pub log_eta: Q,
    #[serde(default = "zero")]
    pub shift: Q,
}

fn zero() -> Q {
    Q(Rational::from_integer(0.into()))
}

/// One member of a `gcconv` sequence: an expression and its declared
/// support box, `null` for an unbounded support.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportedWire {
    pub expr: String,
    pub support: Option<String>,
}

impl SupportedWire {
    pub fn parse(&self, index: usize) -> Result<(ExprNet, Support), CliError> {
        let support = match &self.support {
            Some(b) => Support::Box(parse_box(b)?),
            None => Support::Unbounded,
        };
        let dim = match &support {
            Support::Box(b) => Some(b.dim()),
            Support::Unbounded => None,
        };
        let net = parse_expr_named(&format!("seq[{index}]"), &self.expr, dim)?;
        Ok((net, support))
    }
}

/// `{"coords":[net, …],"witness":"lo:hi,…"}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointWire {
    pub coords: Vec<SymbolicWire>,
    pub witness: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_net_examples() {
        let n = parse_net(r#"{"terms":[{"re":"1","im":"0","exp":"2"}]}"#).unwrap();
        assert_eq!(n, ParsedNet::Symbolic(SymbolicNet::eps_pow_int(2)));
        match parse_net("(sin (div x0 eps))").unwrap() {
            ParsedNet::Expr(e) => {
                assert_eq!(e.dim(), 1);
                assert!((e.eval(&[1.0], 0.5).unwrap() - 2f64.sin()).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let err = parse_net(r#"{"terms":[{"re":"1","im":"0","exp":"1/0"}]}"#).unwrap_err();
        assert_eq!(err.code(), "parse_error");
        let err = parse_net("(sin (div x0 eps)").unwrap_err();
        assert_eq!(err.code(), "parse_error");
        let err = parse_net(r#"{"breakpoints":["1/2"],"pieces":[],"tail":{"terms":[]}}"#).unwrap_err();
        assert_eq!(err.code(), "invariant_error");
        assert!(err.to_string().contains("start at 1"), "{err}");
    }

    #[test]
    fn boxes() {
        let b = parse_box("-1:1,0:1/2").unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.hi()[1], Rational::new(1.into(), 2.into()));
        assert!(parse_box("1:-1").is_err());
        assert!(parse_box("0").is_err());
        assert!(parse_box("0:1/0").is_err());
    }
}
