//! Textual grammar for operator expressions and formal states.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { "*" unary } ;
//! unary   = "-" unary | atom ;
//! atom    = number | "i" | "sqrt2" | "a" | "a+" | "J" | basis | "(" expr ")" ;
//! number  = digit { digit } [ "/" digit { digit } ] ;
//! basis   = "e" [ "-" ] digit { digit } ;        (states only)
//! ```
//!
//! `a+` (no space) is the creation operator; a sum needs whitespace, `a + a`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{FormalState, Generator, OperatorExpr, RepresentationKind};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    I,
    Sqrt2,
    Gen(Generator),
    Basis(i64),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(r) => r.to_string(),
            Tok::I => "i".into(),
            Tok::Sqrt2 => "sqrt2".into(),
            Tok::Gen(g) => g.token().into(),
            Tok::Basis(k) => format!("e{k}"),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                let end = digits(i);
                let numer: BigInt = src[i..end].parse().expect("ascii digits");
                let mut value = BigRational::from_integer(numer);
                i = end;
                if i < bytes.len() && bytes[i] == b'/' {
                    let dend = digits(i + 1);
                    if dend == i + 1 {
                        return Err(err(i, "expected denominator after `/`"));
                    }
                    let denom: BigInt = src[i + 1..dend].parse().expect("ascii digits");
                    if denom.is_zero() {
                        return Err(err(i + 1, "zero denominator"));
                    }
                    value /= BigRational::from_integer(denom);
                    i = dend;
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            b'a' => {
                if bytes.get(i + 1) == Some(&b'+') {
                    out.push((start, Tok::Gen(Generator::ADag)));
                    i += 2;
                    continue;
                }
                out.push((start, Tok::Gen(Generator::A)));
            }
            b'J' => out.push((start, Tok::Gen(Generator::J))),
            b'i' => out.push((start, Tok::I)),
            b's' if src[i..].starts_with("sqrt2") => {
                out.push((start, Tok::Sqrt2));
                i += 5;
                continue;
            }
            b'e' => {
                let mut j = i + 1;
                let negative = bytes.get(j) == Some(&b'-');
                if negative {
                    j += 1;
                }
                let end = digits(j);
                if end == j {
                    return Err(err(start, "expected basis index after `e`"));
                }
                let k: i64 = src[j..end]
                    .parse()
                    .map_err(|_| err(j, "basis index does not fit in 64 bits"))?;
                out.push((start, Tok::Basis(if negative { -k } else { k })));
                i = end;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Scalar(ExactScalar),
    Gen(Generator),
    Basis(usize, i64),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(usize, Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            let at = self.offset();
            self.pos += 1;
            lhs = Ast::Mul(at, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.offset();
        let tok = self.peek().cloned().ok_or_else(|| err(at, "unexpected end of input"))?;
        self.pos += 1;
        Ok(match tok {
            Tok::Num(r) => Ast::Scalar(ExactScalar::from_rational(r)),
            Tok::I => Ast::Scalar(ExactScalar::i()),
            Tok::Sqrt2 => Ast::Scalar(ExactScalar::sqrt2()),
            Tok::Gen(g) => Ast::Gen(g),
            Tok::Basis(k) => Ast::Basis(at, k),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => self.pos += 1,
                    _ => return Err(err(self.offset(), "expected `)`")),
                }
                inner
            }
            other => return Err(err(at, format!("unexpected `{}`", other.text()))),
        })
    }
}

fn parse_ast(src: &str) -> Result<Ast> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.offset(), "expected operator (`+`, `-`, `*`) or end of input"));
    }
    Ok(ast)
}

fn to_operator(ast: &Ast) -> Result<OperatorExpr> {
    Ok(match ast {
        Ast::Scalar(c) => OperatorExpr::scalar(c.clone()),
        Ast::Gen(g) => OperatorExpr::generator(*g),
        Ast::Basis(at, _) => return Err(err(*at, "basis vectors are not allowed in an operator")),
        Ast::Add(l, r) => &to_operator(l)? + &to_operator(r)?,
        Ast::Sub(l, r) => &to_operator(l)? - &to_operator(r)?,
        Ast::Mul(_, l, r) => &to_operator(l)? * &to_operator(r)?,
        Ast::Neg(x) => -&to_operator(x)?,
    })
}

/// Parses an operator expression such as `a*a+ - a+*a` or `(1/2)*sqrt2*(a + a+)`.
pub fn parse_expr(src: &str) -> Result<OperatorExpr> {
    to_operator(&parse_ast(src)?)
}

enum Value {
    Scalar(ExactScalar),
    State(FormalState),
}

fn to_state(ast: &Ast, kind: &RepresentationKind) -> Result<Value> {
    Ok(match ast {
        Ast::Scalar(c) => Value::Scalar(c.clone()),
        Ast::Gen(_) => {
            return Err(err(0, "operators are not allowed in a state; use `eval` with --state"))
        }
        Ast::Basis(at, k) => Value::State(
            FormalState::basis(kind.clone(), *k).map_err(|e| err(*at, e.to_string()))?,
        ),
        Ast::Neg(x) => match to_state(x, kind)? {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::State(s) => Value::State(s.scale(&ExactScalar::from_int(-1))),
        },
        Ast::Add(l, r) | Ast::Sub(l, r) => {
            let sign = if matches!(ast, Ast::Sub(..)) { -1 } else { 1 };
            match (to_state(l, kind)?, to_state(r, kind)?) {
                (Value::Scalar(x), Value::Scalar(y)) => {
                    Value::Scalar(x + y * ExactScalar::from_int(sign))
                }
                (Value::State(x), Value::State(y)) => {
                    Value::State(x.add(&y.scale(&ExactScalar::from_int(sign)))?)
                }
                _ => return Err(err(0, "cannot add a scalar to a state")),
            }
        }
        Ast::Mul(at, l, r) => match (to_state(l, kind)?, to_state(r, kind)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(c), Value::State(s)) | (Value::State(s), Value::Scalar(c)) => {
                Value::State(s.scale(&c))
            }
            (Value::State(_), Value::State(_)) => {
                return Err(err(*at, "product of two states is undefined"))
            }
        },
    })
}

/// Parses a state such as `e2`, `e0 - (1/2)*e3` or `sqrt2*e-1` (Λ-case).
pub fn parse_state(src: &str, kind: &RepresentationKind) -> Result<FormalState> {
    match to_state(&parse_ast(src)?, kind)? {
        Value::State(s) => Ok(s),
        Value::Scalar(c) if c.is_zero() => Ok(FormalState::zero(kind.clone())),
        Value::Scalar(_) => Err(err(0, "expected a combination of basis vectors `e<k>`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::normal_order;

    #[test]
    fn commutator_text_normalizes_to_one() {
        let x = parse_expr("a*a+ - a+*a").unwrap();
        assert_eq!(normal_order(&x).to_string(), "1");
    }

    #[test]
    fn j_squared_text() {
        assert_eq!(normal_order(&parse_expr("J*J").unwrap()).to_string(), "1");
    }

    #[test]
    fn scalars_and_parentheses() {
        let x = parse_expr("(1/2)*sqrt2*i*(a + a+)").unwrap();
        let nf = normal_order(&x);
        assert_eq!(nf.to_string(), "(1/2)*sqrt2*i * a+ + (1/2)*sqrt2*i * a");
        // printed form parses back to the same canonical expression
        assert_eq!(normal_order(&parse_expr(&nf.to_string()).unwrap()), nf);
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_expr("a * * a") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("a + (J") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expr("a ? J"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("a e1").is_err());
        assert!(parse_expr("e1").is_err());
    }

    #[test]
    fn states() {
        let af = RepresentationKind::AntiFock;
        let s = parse_state("e0 - (1/2)*e3", &af).unwrap();
        assert_eq!(s.to_string(), "1 · e0 - (1/2) · e3");
        assert!(parse_state("e-1", &af).is_err());
        let l = RepresentationKind::lambda(BigRational::new((-1).into(), 2.into())).unwrap();
        assert_eq!(parse_state("sqrt2*e-1", &l).unwrap().to_string(), "sqrt2 · e-1");
        assert!(parse_state("e1*e2", &af).is_err());
    }
}
