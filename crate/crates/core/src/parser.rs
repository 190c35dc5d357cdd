//! Textual polynomials.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' NAT)? | '-' factor
//! atom     := RATIONAL | VAR | '(' expr ')'
//! RATIONAL := NAT ('/' NAT)?
//! VAR      := 'x' | 'y' | 'z' | 't'
//! ```
//!
//! Whitespace is ignored. Multiplication is always explicit. The formal
//! variable `t` is only accepted by [`parse_uni`]. [`format`] produces the
//! canonical string that [`parse`] reads back to the same polynomial.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jacobian::PolyMap;
use crate::poly::{PolyError, Polynomial, Rational, UniPoly, Var, DEFAULT_DEGREE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown operator `{op}` at offset {offset}")]
    UnknownOperator { offset: usize, op: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at offset {offset} must be a non-negative integer literal")]
    BadExponent { offset: usize },
    #[error("zero denominator at offset {offset}")]
    ZeroDenominator { offset: usize },
    #[error("variable `{name}` at offset {offset} is not allowed here")]
    MisplacedVariable { offset: usize, name: char },
    #[error("expression is not a constant")]
    NotConstant,
    #[error(transparent)]
    Degree(#[from] PolyError),
}

impl ParseError {
    /// Byte offset of the offending input, when there is one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownOperator { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::BadExponent { offset }
            | ParseError::ZeroDenominator { offset }
            | ParseError::MisplacedVariable { offset, .. } => Some(*offset),
            ParseError::NotConstant | ParseError::Degree(_) => None,
        }
    }
}

/// Parse tree of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Constant(Rational),
    Variable { name: char, offset: usize },
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Var(c) => format!("variable `{c}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Nat(text[start..i].parse().expect("digits")), start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                return Err(ParseError::UnknownOperator {
                    offset: start,
                    op: "**".into(),
                })
            }
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                match name {
                    "x" | "y" | "z" | "t" => {
                        out.push((Tok::Var(name.chars().next().unwrap()), start));
                        continue;
                    }
                    _ => {
                        return Err(ParseError::UnknownIdentifier {
                            offset: start,
                            name: name.into(),
                        })
                    }
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(ParseError::UnknownOperator {
                    offset: start,
                    op: ch.to_string(),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        match self.bump().0 {
            Tok::Nat(n) => {
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|&e| e <= DEFAULT_DEGREE_CAP)
                    .ok_or(ParseError::Degree(PolyError::DegreeCapExceeded {
                        degree: u32::MAX,
                        cap: DEFAULT_DEGREE_CAP,
                    }))?;
                Ok(ExprAst::Pow(Box::new(base), e))
            }
            _ => Err(ParseError::BadExponent { offset }),
        }
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().clone() {
            Tok::Nat(num) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(ExprAst::Constant(Rational::from_integer(num)));
                }
                self.bump();
                let offset = self.offset();
                match self.peek().clone() {
                    Tok::Nat(den) if den.is_zero() => Err(ParseError::ZeroDenominator { offset }),
                    Tok::Nat(den) => {
                        self.bump();
                        Ok(ExprAst::Constant(Rational::new(num, den)))
                    }
                    _ => Err(self.unexpected(vec!["number"])),
                }
            }
            Tok::Var(name) => {
                let (_, offset) = self.bump();
                Ok(ExprAst::Variable { name, offset })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(vec!["`)`", "`+`", "`-`", "`*`", "`^`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(vec!["number", "variable", "`(`", "`-`"])),
        }
    }
}

/// Parses text into its expression tree without interpreting variables.
pub fn parse_ast(text: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(vec!["`+`", "`-`", "`*`", "`^`", "end of input"]));
    }
    Ok(ast)
}

/// `var_map` sends each admissible variable to its polynomial image.
fn interpret(ast: &ExprAst, var_map: &dyn Fn(char, usize) -> Result<Polynomial, ParseError>) -> Result<Polynomial, ParseError> {
    Ok(match ast {
        ExprAst::Constant(c) => Polynomial::constant(c.clone()),
        ExprAst::Variable { name, offset } => var_map(*name, *offset)?,
        ExprAst::Add(a, b) => interpret(a, var_map)? + interpret(b, var_map)?,
        ExprAst::Sub(a, b) => interpret(a, var_map)? - interpret(b, var_map)?,
        ExprAst::Mul(a, b) => interpret(a, var_map)?.checked_mul(&interpret(b, var_map)?, DEFAULT_DEGREE_CAP)?,
        ExprAst::Neg(a) => -interpret(a, var_map)?,
        ExprAst::Pow(a, e) => interpret(a, var_map)?.checked_pow(*e, DEFAULT_DEGREE_CAP)?,
    })
}

/// Parses a polynomial in `x`, `y`, `z`.
pub fn parse(text: &str) -> Result<Polynomial, ParseError> {
    let ast = parse_ast(text)?;
    interpret(&ast, &|name, offset| match name {
        'x' => Ok(Polynomial::x()),
        'y' => Ok(Polynomial::y()),
        'z' => Ok(Polynomial::z()),
        _ => Err(ParseError::MisplacedVariable { offset, name }),
    })
}

/// Parses a univariate polynomial in `t`.
pub fn parse_uni(text: &str) -> Result<UniPoly, ParseError> {
    let ast = parse_ast(text)?;
    // `t` is carried by the x slot while interpreting.
    let p = interpret(&ast, &|name, offset| match name {
        't' => Ok(Polynomial::x()),
        _ => Err(ParseError::MisplacedVariable { offset, name }),
    })?;
    Ok(UniPoly::from_terms(
        p.terms().map(|(m, c)| (m.exponent(Var::X), c.clone())),
    ))
}

/// Parses a rational constant such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let p = parse(text)?;
    if !p.is_constant() {
        return Err(ParseError::NotConstant);
    }
    Ok(p.constant_term())
}

/// Canonical text for a polynomial: descending graded-lex terms, reduced
/// rational coefficients, unit coefficients elided.
pub fn format(p: &Polynomial) -> String {
    p.to_string()
}

pub fn format_uni(g: &UniPoly) -> String {
    g.to_string()
}

/// The three component expressions `(u, v, h)` of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSource {
    pub u: String,
    pub v: String,
    pub h: String,
}

impl MapSource {
    pub fn new(u: impl Into<String>, v: impl Into<String>, h: impl Into<String>) -> Self {
        MapSource {
            u: u.into(),
            v: v.into(),
            h: h.into(),
        }
    }

    pub fn from_map(map: &PolyMap) -> Self {
        MapSource::new(format(&map.u), format(&map.v), format(&map.h))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("component {component} ({name}): {source}")]
pub struct MapParseError {
    /// 0, 1, 2 for u, v, h.
    pub component: usize,
    pub name: &'static str,
    #[source]
    pub source: ParseError,
}

pub fn parse_map(src: &MapSource) -> Result<PolyMap, MapParseError> {
    let names = ["u", "v", "h"];
    let texts = [&src.u, &src.v, &src.h];
    let mut out = Vec::with_capacity(3);
    for (component, text) in texts.into_iter().enumerate() {
        out.push(parse(text).map_err(|source| MapParseError {
            component,
            name: names[component],
            source,
        })?);
    }
    let h = out.pop().unwrap();
    let v = out.pop().unwrap();
    let u = out.pop().unwrap();
    Ok(PolyMap::new(u, v, h))
}
