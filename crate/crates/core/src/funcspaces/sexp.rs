//! S-expression syntax for [`Expr`].
//!
//! Atoms are numbers, `eps` and `x<i>`. Operators: `add` and `mul` (n-ary,
//! folded to the left), `sub`, `div`, `pow`, `neg`, `exp`, `log`, `sin`, `cos`,
//! `(bump z)` and `(bumpd n (c0 c1 …) z)`.

use std::fmt;

use thiserror::Error;

use super::Expr;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => {
                    toks.push((i, Tok::Open));
                    i += 1;
                }
                b')' => {
                    toks.push((i, Tok::Close));
                    i += 1;
                }
                c if c.is_ascii_whitespace() => i += 1,
                _ => {
                    let start = i;
                    while i < bytes.len()
                        && !bytes[i].is_ascii_whitespace()
                        && bytes[i] != b'('
                        && bytes[i] != b')'
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Atom(&src[start..i])));
                }
            }
        }
        Self { src, toks, pos: 0 }
    }

    fn error(&self, offset: usize, msg: impl Into<String>) -> ParseError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |nl| {
            before[nl + 1..].chars().count()
        }) + 1;
        ParseError {
            offset,
            line,
            col,
            msg: msg.into(),
        }
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.0)
    }

    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some((_, Tok::Close)) => Ok(()),
            Some((at, _)) => Err(self.error(at, "expected ')'")),
            None => Err(self.error(self.src.len(), "unexpected end of input, expected ')'")),
        }
    }

    fn number(&self, at: usize, s: &str) -> Result<f64, ParseError> {
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(self.error(at, format!("non-finite constant '{s}'"))),
            Err(_) => Err(self.error(at, format!("unknown atom '{s}'"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            None => Err(self.error(self.src.len(), "unexpected end of input")),
            Some((at, Tok::Close)) => Err(self.error(at, "unexpected ')'")),
            Some((at, Tok::Atom(a))) => self.atom(at, a),
            Some((_, Tok::Open)) => self.form(),
        }
    }

    fn atom(&self, at: usize, a: &str) -> Result<Expr, ParseError> {
        if a == "eps" {
            return Ok(Expr::Eps);
        }
        if let Some(idx) = a.strip_prefix('x') {
            if !idx.is_empty() && idx.bytes().all(|c| c.is_ascii_digit()) {
                return idx
                    .parse()
                    .map(Expr::Var)
                    .map_err(|_| self.error(at, format!("variable index too large in '{a}'")));
            }
        }
        self.number(at, a).map(Expr::Const)
    }

    fn args_until_close(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(args);
                }
                None => return Err(self.error(self.src.len(), "unexpected end of input, expected ')'")),
                _ => args.push(self.expr()?),
            }
        }
    }

    fn form(&mut self) -> Result<Expr, ParseError> {
        let (at, head) = match self.next() {
            Some((at, Tok::Atom(h))) => (at, h),
            Some((at, _)) => return Err(self.error(at, "expected an operator name")),
            None => return Err(self.error(self.src.len(), "unexpected end of input")),
        };
        if head == "bumpd" {
            return self.bumpd(at);
        }
        let args = self.args_until_close()?;
        let arity = |n: usize| -> Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(self.error(at, format!("'{head}' takes {n} argument(s), got {}", args.len())))
            }
        };
        let mut it = args.clone().into_iter().map(Box::new);
        Ok(match head {
            "add" | "mul" => {
                if args.len() < 2 {
                    return Err(self.error(at, format!("'{head}' takes at least 2 arguments")));
                }
                let first = it.next().unwrap();
                it.fold(*first, |acc, e| {
                    if head == "add" {
                        Expr::Add(Box::new(acc), e)
                    } else {
                        Expr::Mul(Box::new(acc), e)
                    }
                })
            }
            "sub" | "div" | "pow" => {
                arity(2)?;
                let (p, q) = (it.next().unwrap(), it.next().unwrap());
                match head {
                    "sub" => Expr::Sub(p, q),
                    "div" => Expr::Div(p, q),
                    _ => Expr::Pow(p, q),
                }
            }
            "neg" | "exp" | "log" | "sin" | "cos" | "bump" => {
                arity(1)?;
                let a = it.next().unwrap();
                match head {
                    "neg" => Expr::Neg(a),
                    "exp" => Expr::Exp(a),
                    "log" => Expr::Log(a),
                    "sin" => Expr::Sin(a),
                    "cos" => Expr::Cos(a),
                    _ => Expr::Bump {
                        poly: vec![1.0],
                        order: 0,
                        arg: a,
                    },
                }
            }
            other => return Err(self.error(at, format!("unknown operator '{other}'"))),
        })
    }

    fn bumpd(&mut self, at: usize) -> Result<Expr, ParseError> {
        let order = match self.next() {
            Some((p, Tok::Atom(a))) => a
                .parse::<u32>()
                .map_err(|_| self.error(p, format!("bump order must be a nonnegative integer, got '{a}'")))?,
            _ => return Err(self.error(at, "'bumpd' expects an order")),
        };
        match self.next() {
            Some((_, Tok::Open)) => {}
            _ => return Err(self.error(at, "'bumpd' expects a coefficient list")),
        }
        let mut poly = Vec::new();
        loop {
            match self.next() {
                Some((_, Tok::Close)) => break,
                Some((p, Tok::Atom(a))) => poly.push(self.number(p, a)?),
                Some((p, Tok::Open)) => return Err(self.error(p, "coefficients must be numbers")),
                None => return Err(self.error(self.src.len(), "unexpected end of input")),
            }
        }
        if poly.is_empty() {
            return Err(self.error(at, "'bumpd' needs at least one coefficient"));
        }
        let arg = self.expr()?;
        self.expect_close()?;
        Ok(Expr::Bump {
            poly,
            order,
            arg: Box::new(arg),
        })
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut lx = Lexer::new(src);
    let e = lx.expr()?;
    if lx.pos < lx.toks.len() {
        return Err(lx.error(lx.here(), "trailing input"));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            Var(i) => write!(f, "x{i}"),
            Eps => f.write_str("eps"),
            Neg(a) => write!(f, "(neg {a})"),
            Add(p, q) => write!(f, "(add {p} {q})"),
            Sub(p, q) => write!(f, "(sub {p} {q})"),
            Mul(p, q) => write!(f, "(mul {p} {q})"),
            Div(p, q) => write!(f, "(div {p} {q})"),
            Pow(p, q) => write!(f, "(pow {p} {q})"),
            Exp(a) => write!(f, "(exp {a})"),
            Log(a) => write!(f, "(log {a})"),
            Sin(a) => write!(f, "(sin {a})"),
            Cos(a) => write!(f, "(cos {a})"),
            Bump { poly, order, arg } => {
                if *order == 0 && poly.as_slice() == [1.0] {
                    write!(f, "(bump {arg})")
                } else {
                    let cs: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
                    write!(f, "(bumpd {order} ({}) {arg})", cs.join(" "))
                }
            }
        }
    }
}
