//! JSON wire formats.
//!
//! Rationals travel as strings `"p"` or `"p/q"` so that every value
//! round-trips exactly:
//!
//! * symbolic net: `{"terms":[{"re":"1","im":"0","exp":"2"}]}`
//! * piecewise net: `{"breakpoints":["1","1/4"],"pieces":[net],"tail":net}`
//! * vector: `[net, …]`
//! * functional: `{"kind":"pairing_vector","w":[net, …]}` or
//!   `{"kind":"blackbox","id":"quadratic","dim":2}` or
//!   `{"kind":"blackbox","id":…,"dim":n,"terms":[{"coeff":net,"powers":[…]}]}`

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{Blackbox, Functional, Representative};
use crate::genscalar::{
    ComplexRational, GenScalar, GenScalarError, GenVector, Monomial, PiecewiseNet, Rational,
    SymbolicNet,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        FormatError::Parse {
            line: e.line(),
            col: e.column(),
            msg: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    }
}

impl From<GenScalarError> for FormatError {
    fn from(e: GenScalarError) -> Self {
        FormatError::Invariant(e.to_string())
    }
}

/// A rational written as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(de::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        if d.trim_start_matches(['+', '-']).chars().all(|c| c == '0') && !d.is_empty() {
            return Err(format!("zero denominator in rational '{s}'"));
        }
        if n.is_empty() || d.is_empty() {
            return Err(format!("malformed rational '{s}'"));
        }
    }
    t.parse::<Rational>().map_err(|e| format!("malformed rational '{s}': {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialWire {
    pub re: Q,
    pub im: Q,
    pub exp: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicWire {
    pub terms: Vec<MonomialWire>,
}

impl From<&SymbolicNet> for SymbolicWire {
    fn from(n: &SymbolicNet) -> Self {
        Self {
            terms: n
                .terms()
                .iter()
                .map(|t| MonomialWire {
                    re: Q(t.coeff.re.clone()),
                    im: Q(t.coeff.im.clone()),
                    exp: Q(t.exp.clone()),
                })
                .collect(),
        }
    }
}

impl From<SymbolicWire> for SymbolicNet {
    fn from(w: SymbolicWire) -> Self {
        SymbolicNet::from_terms(
            w.terms
                .into_iter()
                .map(|t| Monomial::new(ComplexRational::new(t.re.0, t.im.0), t.exp.0)),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseWire {
    pub breakpoints: Vec<Q>,
    pub pieces: Vec<SymbolicWire>,
    pub tail: SymbolicWire,
}

impl From<&PiecewiseNet> for PiecewiseWire {
    fn from(p: &PiecewiseNet) -> Self {
        Self {
            breakpoints: p.breakpoints().iter().cloned().map(Q).collect(),
            pieces: p.pieces().iter().map(SymbolicWire::from).collect(),
            tail: p.tail().into(),
        }
    }
}

impl TryFrom<PiecewiseWire> for PiecewiseNet {
    type Error = FormatError;
    fn try_from(w: PiecewiseWire) -> Result<Self, FormatError> {
        Ok(PiecewiseNet::new(
            w.breakpoints.into_iter().map(|q| q.0).collect(),
            w.pieces.into_iter().map(SymbolicNet::from).collect(),
            w.tail.into(),
        )?)
    }
}

pub fn symbolic_to_json(n: &SymbolicNet) -> String {
    serde_json::to_string(&SymbolicWire::from(n)).expect("serializable")
}

pub fn symbolic_from_json(s: &str) -> Result<SymbolicNet, FormatError> {
    Ok(serde_json::from_str::<SymbolicWire>(s)?.into())
}

pub fn piecewise_to_json(p: &PiecewiseNet) -> String {
    serde_json::to_string(&PiecewiseWire::from(p)).expect("serializable")
}

pub fn piecewise_from_json(s: &str) -> Result<PiecewiseNet, FormatError> {
    serde_json::from_str::<PiecewiseWire>(s)?.try_into()
}

pub fn scalar_to_json(u: &GenScalar) -> String {
    match u {
        GenScalar::Symbolic(n) => symbolic_to_json(n),
        GenScalar::Piecewise(p) => piecewise_to_json(p),
    }
}

/// A symbolic or piecewise net, by the presence of `breakpoints`.
pub fn scalar_from_json(s: &str) -> Result<GenScalar, FormatError> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    if v.get("breakpoints").is_some() {
        Ok(GenScalar::Piecewise(piecewise_from_json(s)?))
    } else {
        Ok(GenScalar::Symbolic(symbolic_from_json(s)?))
    }
}

pub fn vector_to_json(u: &GenVector) -> String {
    let w: Vec<SymbolicWire> = u.coords().iter().map(SymbolicWire::from).collect();
    serde_json::to_string(&w).expect("serializable")
}

pub fn vector_from_json(s: &str) -> Result<GenVector, FormatError> {
    let w: Vec<SymbolicWire> = serde_json::from_str(s)?;
    Ok(GenVector::new(w.into_iter().map(SymbolicNet::from).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermWire {
    pub coeff: SymbolicWire,
    pub powers: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalWire {
    PairingVector {
        w: Vec<SymbolicWire>,
    },
    Blackbox {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terms: Option<Vec<TermWire>>,
    },
}

/// Built-in black boxes addressable by id alone.
pub const BUILTIN_BLACKBOXES: [&str; 1] = ["quadratic"];

pub fn functional_from_json(s: &str) -> Result<Functional, FormatError> {
    match serde_json::from_str::<FunctionalWire>(s)? {
        FunctionalWire::PairingVector { w } => Ok(Functional::PairingVector(GenVector::new(
            w.into_iter().map(SymbolicNet::from).collect(),
        ))),
        FunctionalWire::Blackbox { id, dim, terms } => {
            let dim_of_terms = terms.as_ref().and_then(|t| t.first()).map(|t| t.powers.len());
            let dim = dim
                .or(dim_of_terms)
                .ok_or_else(|| FormatError::Invariant(format!("blackbox '{id}' needs a dimension")))?;
            match terms {
                Some(terms) => {
                    if let Some(t) = terms.iter().find(|t| t.powers.len() != dim) {
                        return Err(FormatError::Invariant(format!(
                            "term powers {:?} do not match dimension {dim}",
                            t.powers
                        )));
                    }
                    Ok(Functional::Blackbox(Blackbox::polynomial(
                        id,
                        dim,
                        terms
                            .into_iter()
                            .map(|t| (SymbolicNet::from(t.coeff), t.powers))
                            .collect(),
                    )))
                }
                None if id == "quadratic" => Ok(Functional::Blackbox(Blackbox::quadratic(dim))),
                None => Err(FormatError::Invariant(format!(
                    "unknown blackbox id '{id}' (built-ins: {})",
                    BUILTIN_BLACKBOXES.join(", ")
                ))),
            }
        }
    }
}

/// `None` for sampled-only black boxes, which have no wire form.
pub fn functional_to_json(t: &Functional) -> Option<String> {
    let wire = match t {
        Functional::PairingVector(w) => FunctionalWire::PairingVector {
            w: w.coords().iter().map(SymbolicWire::from).collect(),
        },
        Functional::Blackbox(b) => match &b.repr {
            Representative::Polynomial(terms) => FunctionalWire::Blackbox {
                id: b.id.clone(),
                dim: Some(b.dim),
                terms: Some(
                    terms
                        .iter()
                        .map(|(c, p)| TermWire {
                            coeff: c.into(),
                            powers: p.clone(),
                        })
                        .collect(),
                ),
            },
            Representative::Sampled(_) => return None,
        },
    };
    Some(serde_json::to_string(&wire).expect("serializable"))
}
