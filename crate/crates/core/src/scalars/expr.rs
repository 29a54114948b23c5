use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::bignum::BigComplex;
use super::exact::{ExactComplex, ExactReal};
use super::numtheory::squarefree_decompose;
use super::Field;
use crate::error::{Error, Result};

/// Parsed scalar expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Pi,
    I,
    Sqrt(Box<Expr>),
    Exp(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn perr(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
            if text.matches('.').count() > 1 || (int.is_empty() && frac.is_empty()) {
                return Err(perr(col, format!("malformed number '{text}'")));
            }
            let digits = format!("{int}{frac}");
            let n: BigInt = digits.parse().map_err(|_| perr(col, "malformed number"))?;
            let d = BigInt::from(10).pow(frac.len() as u32);
            out.push((Tok::Num(BigRational::new(n, d)), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/()^".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(perr(col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.col(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                // implicit multiplication: 2pi, 3i, (1+i)(2-i)
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            let e = self.unary()?;
            let k = e
                .eval_exact()
                .ok()
                .flatten()
                .and_then(|z| {
                    if z.im.is_zero() {
                        z.re.as_integer()
                    } else {
                        None
                    }
                })
                .and_then(|k| k.to_i64())
                .filter(|k| k.abs() <= 4096)
                .ok_or_else(|| perr(col, "exponent must be a small integer"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(perr(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(Expr::Num(q)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(Expr::Pi),
                "i" => Ok(Expr::I),
                "sqrt" | "exp" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(if name == "sqrt" {
                        Expr::Sqrt(Box::new(e))
                    } else {
                        Expr::Exp(Box::new(e))
                    })
                }
                _ => Err(perr(col, format!("unknown identifier '{name}'"))),
            },
            Tok::Op(c) => Err(perr(col, format!("unexpected '{c}'"))),
        }
    }
}

/// `sqrt(q)` for a rational `q`, exactly.
fn exact_sqrt(q: &BigRational) -> Result<ExactComplex> {
    let a = q.abs();
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = a.numer() * a.denom();
    let (s, m) = squarefree_decompose(&nd)
        .ok_or_else(|| Error::NotExact("sqrt argument too large to factor".into()))?;
    let coef = BigRational::new(s, a.denom().clone());
    let r = ExactReal::sqrt_of(m).mul(&ExactReal::rational(coef));
    Ok(if q.is_negative() {
        ExactComplex::new(ExactReal::zero(), r)
    } else {
        ExactComplex::real(r)
    })
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let toks = tokenize(src)?;
        let mut p = Parser {
            toks,
            pos: 0,
            end_col: src.chars().count() + 1,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(perr(p.col(), "trailing input"));
        }
        Ok(e)
    }

    /// Exact value; `Ok(None)` when the expression contains `exp`.
    pub fn eval_exact(&self) -> Result<Option<ExactComplex>> {
        use Expr::*;
        let bin = |a: &Expr, b: &Expr| -> Result<Option<(ExactComplex, ExactComplex)>> {
            Ok(match (a.eval_exact()?, b.eval_exact()?) {
                (Some(x), Some(y)) => Some((x, y)),
                _ => None,
            })
        };
        Ok(match self {
            Num(q) => Some(ExactComplex::real(ExactReal::rational(q.clone()))),
            Pi => Some(ExactComplex::real(ExactReal::pi())),
            I => Some(ExactComplex::i()),
            Exp(_) => None,
            Sqrt(e) => match e.eval_exact()? {
                None => None,
                Some(z) => {
                    let q = (z.im.is_zero())
                        .then(|| z.re.as_rational())
                        .flatten()
                        .ok_or_else(|| Error::NotExact("sqrt argument must be rational".into()))?;
                    Some(exact_sqrt(&q)?)
                }
            },
            Neg(e) => e.eval_exact()?.map(|z| z.neg()),
            Add(a, b) => bin(a, b)?.map(|(x, y)| x.add(&y)),
            Sub(a, b) => bin(a, b)?.map(|(x, y)| x.sub(&y)),
            Mul(a, b) => bin(a, b)?.map(|(x, y)| x.mul(&y)),
            Div(a, b) => match bin(a, b)? {
                Some((x, y)) => Some(x.div(&y)?),
                None => None,
            },
            Pow(b, k) => match b.eval_exact()? {
                Some(x) => Some(x.powi(*k)?),
                None => None,
            },
        })
    }

    /// Numeric value at `prec` bits.
    pub fn eval_numeric(&self, prec: usize) -> Result<BigComplex> {
        use Expr::*;
        Ok(match self {
            Num(q) => BigComplex::from_rational(q, prec),
            Pi => BigComplex::pi(prec),
            I => BigComplex::i(prec),
            Exp(e) => e.eval_numeric(prec)?.exp(),
            Sqrt(e) => e.eval_numeric(prec)?.sqrt(),
            Neg(e) => e.eval_numeric(prec)?.neg(),
            Add(a, b) => a.eval_numeric(prec)?.add(&b.eval_numeric(prec)?),
            Sub(a, b) => a.eval_numeric(prec)?.sub(&b.eval_numeric(prec)?),
            Mul(a, b) => a.eval_numeric(prec)?.mul(&b.eval_numeric(prec)?),
            Div(a, b) => a.eval_numeric(prec)?.div(&b.eval_numeric(prec)?)?,
            Pow(b, k) => b.eval_numeric(prec)?.powi(*k)?,
        })
    }

    /// Squarefree radicands of every `sqrt` leaf with a rational argument.
    pub fn radicands(&self) -> Vec<u64> {
        use Expr::*;
        let mut out = Vec::new();
        match self {
            Num(_) | Pi | I => {}
            Sqrt(e) => {
                if let Ok(Some(z)) = e.eval_exact() {
                    if let Some(q) = z.re.as_rational().filter(|_| z.im.is_zero()) {
                        let a = q.abs();
                        if let Some((_, m)) = squarefree_decompose(&(a.numer() * a.denom())) {
                            if m != 1 {
                                out.push(m);
                            }
                        }
                    }
                }
                out.extend(e.radicands());
            }
            Exp(e) | Neg(e) | Pow(e, _) => out.extend(e.radicands()),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                out.extend(a.radicands());
                out.extend(b.radicands());
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A scalar as written in an input file, with its parsed and (when possible) exact value.
#[derive(Clone)]
pub struct ScalarLiteral {
    text: String,
    expr: Expr,
    exact: Option<ExactComplex>,
}

impl ScalarLiteral {
    pub fn parse(text: &str) -> Result<Self> {
        let expr = Expr::parse(text)?;
        let exact = expr.eval_exact()?;
        Ok(ScalarLiteral {
            text: text.to_string(),
            expr,
            exact,
        })
    }

    /// Literal for an exact value, rendered in the input grammar.
    pub fn from_exact(z: &ExactComplex) -> Self {
        let text = z.to_string();
        let expr = Expr::parse(&text).expect("rendered exact scalars re-parse");
        ScalarLiteral {
            text,
            expr,
            exact: Some(z.clone()),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::parse(&v.to_string()).expect("integer literal")
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn exact(&self) -> Option<&ExactComplex> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn numeric(&self, prec: usize) -> Result<BigComplex> {
        match &self.exact {
            Some(z) => Ok(z.to_numeric(prec)),
            None => Ok(self.expr.eval_numeric(prec + 64)?.with_prec(prec)),
        }
    }

    pub fn radicands(&self) -> Vec<u64> {
        self.expr.radicands()
    }
}

impl PartialEq for ScalarLiteral {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl fmt::Debug for ScalarLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.text)
    }
}

impl fmt::Display for ScalarLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Default for ScalarLiteral {
    fn default() -> Self {
        Self::from_int(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> ExactComplex {
        ScalarLiteral::parse(s).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn grammar_and_implicit_multiplication() {
        assert_eq!(ex("2pi"), ex("2*pi"));
        assert_eq!(ex("(1+i)(1-i)"), ex("2"));
        assert_eq!(ex("-2^2"), ex("-4"));
        assert_eq!(ex("2^-1"), ex("1/2"));
        assert_eq!(ex("0.25"), ex("1/4"));
        assert_eq!(ex("sqrt(8)"), ex("2 sqrt(2)"));
        assert_eq!(ex("sqrt(1/2)"), ex("sqrt(2)/2"));
        assert_eq!(ex("sqrt(-3)"), ex("i sqrt(3)"));
        assert_eq!(ex("3i"), ex("3*i"));
        assert_eq!(ex("-sqrt(3)/(2pi) + i(sqrt(5)/2 - sqrt(3)/(2pi))").re, ex("-sqrt(3)/2/pi").re);
    }

    #[test]
    fn exp_is_numeric_only() {
        let lit = ScalarLiteral::parse("exp(-2+i)").unwrap();
        assert!(!lit.is_exact());
        let z = lit.numeric(128).unwrap().to_c64();
        let expected = num_complex::Complex64::new(-2.0, 1.0).exp();
        assert!((z - expected).norm() < 1e-15);
    }

    #[test]
    fn errors_carry_columns() {
        match Expr::parse("1 + $") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match Expr::parse("sqrt(2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("foo").is_err());
        assert!(Expr::parse("2^pi").is_err());
        assert!(ScalarLiteral::parse("1/(pi-pi)").is_err());
    }

    #[test]
    fn radicands_are_squarefree_parts() {
        let lit = ScalarLiteral::parse("sqrt(12) + sqrt(5/2) + exp(sqrt(7))").unwrap();
        assert_eq!(lit.radicands(), vec![3, 7, 10]);
    }

    #[test]
    fn exact_display_reparses() {
        for s in ["-sqrt(3)/(2pi) + i(sqrt(5)/2 - sqrt(3)/(2pi))", "(pi^2+sqrt(6))/(3pi - 1)", "0", "i"] {
            let z = ex(s);
            assert_eq!(ex(&z.to_string()), z, "{s}");
        }
    }
}
