//! Recursive-descent parser for matrix documents.
//!
//! ```text
//! document := ["params:" ident ("," ident)*] matrix
//! matrix   := "[" row ("," row)* "]"
//! row      := "[" expr ("," expr)* "]"
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := atom ["^" ["-"] int | "^" "(" ["-"] int ")"]
//! atom     := int | ident | "(" expr ")"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::chart::Point;
use crate::algebra::field::{ExtensionError, Field, FieldElem, NumberField, DEFAULT_DEGREE_CAP};
use crate::algebra::matrix::{Matrix, RatFunMatrix};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::param::specialize::{ParamMatrix, ParamRatFun};
use crate::param::{ParamElem, ParamSpace, ParamSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UndeclaredIdentifier(String),
    ZeroDenominator,
    Shape(String),
    Extension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "{m}"),
            ParseErrorKind::UndeclaredIdentifier(id) => write!(f, "undeclared identifier `{id}`"),
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator"),
            ParseErrorKind::Shape(m) => write!(f, "{m}"),
            ParseErrorKind::Extension(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, column: c0 });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
            continue;
        }
        if "+-*/^()[],:;=".contains(ch) {
            out.push(Token { tok: Tok::Sym(ch), line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError { line: l0, column: c0, kind: ParseErrorKind::Syntax(format!("unexpected character `{ch}`")) });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Names in scope while parsing.
#[derive(Clone, Debug)]
pub struct Scope {
    pub variable: String,
    pub space: ParamSpace,
    pub extension: Option<Arc<NumberField>>,
}

impl Scope {
    pub fn new(space: ParamSpace, extension: Option<Arc<NumberField>>) -> Self {
        Scope { variable: "z".into(), space, extension }
    }

    pub fn plain() -> Self {
        Self::new(ParamSpace::new(&[]), None)
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    scope: &'a Scope,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError { line: t.line, column: t.column, kind }
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Int(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(Self::error_at(&t, ParseErrorKind::Syntax(format!("expected `{c}`, found {}", Self::describe(&t.tok)))))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ParamRatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add_fn(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_fn(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ParamRatFun, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_fn(&self.unary()?);
            } else if self.peek().tok == Tok::Sym('/') {
                let slash = self.next();
                let d = self.unary()?;
                acc = acc.div_fn(&d).ok_or_else(|| Self::error_at(&slash, ParseErrorKind::ZeroDenominator))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ParamRatFun, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg_fn());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat('(');
        let negative = self.eat('-');
        let t = self.next();
        let Tok::Int(v) = &t.tok else {
            return Err(Self::error_at(&t, ParseErrorKind::Syntax(format!("expected an integer exponent, found {}", Self::describe(&t.tok)))));
        };
        let v: i64 = i64::try_from(v.clone())
            .ok()
            .filter(|v| *v <= u32::MAX as i64)
            .ok_or_else(|| Self::error_at(&t, ParseErrorKind::Syntax("exponent too large".into())))?;
        if paren {
            self.expect(')')?;
        }
        Ok(if negative { -v } else { v })
    }

    fn power(&mut self) -> Result<ParamRatFun, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Sym('^') {
            return Ok(base);
        }
        let caret = self.next();
        let e = self.exponent()?;
        let p = base.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Ok(p)
        } else {
            p.inv_fn().ok_or_else(|| Self::error_at(&caret, ParseErrorKind::ZeroDenominator))
        }
    }

    fn atom(&mut self) -> Result<ParamRatFun, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(RatFun::constant(ParamElem::from_rational(&BigRational::from_integer(v.clone())))),
            Tok::Ident(id) => self.identifier(&t, id),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => Err(Self::error_at(&t, ParseErrorKind::Syntax(format!("expected an expression, found {}", Self::describe(other))))),
        }
    }

    fn identifier(&self, t: &Token, id: &str) -> Result<ParamRatFun, ParseError> {
        if id == self.scope.variable {
            return Ok(RatFun::var());
        }
        if let Some(i) = self.scope.space.index_of(id) {
            return Ok(RatFun::constant(self.scope.space.var(i)));
        }
        if let Some(k) = self.scope.extension.as_ref().filter(|k| k.name() == id) {
            return Ok(RatFun::constant(ParamElem::Const(k.generator())));
        }
        Err(Self::error_at(t, ParseErrorKind::UndeclaredIdentifier(id.to_string())))
    }

    fn matrix(&mut self) -> Result<ParamMatrix, ParseError> {
        let open = self.expect('[')?;
        let mut rows: Vec<Vec<ParamRatFun>> = Vec::new();
        loop {
            let row_open = self.expect('[')?;
            let mut row = vec![self.expr()?];
            while self.eat(',') {
                row.push(self.expr()?);
            }
            self.expect(']')?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Self::error_at(
                        &row_open,
                        ParseErrorKind::Shape(format!("row has {} entries, expected {}", row.len(), first.len())),
                    ));
                }
            }
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        if rows.len() != rows[0].len() {
            return Err(Self::error_at(&open, ParseErrorKind::Shape(format!("matrix is {}x{}, expected square", rows.len(), rows[0].len()))));
        }
        Ok(Matrix::from_rows(rows))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            Err(Self::error_at(&t, ParseErrorKind::Syntax(format!("unexpected {} after input", Self::describe(&t.tok)))))
        }
    }
}

/// A parsed input file.
#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub space: ParamSpace,
    pub matrix: ParamMatrix,
}

impl InputDocument {
    pub fn is_parametric(&self) -> bool {
        !self.space.is_empty()
    }

    /// The matrix when no parameters are declared.
    pub fn plain_matrix(&self) -> Option<RatFunMatrix<FieldElem>> {
        if self.is_parametric() {
            return None;
        }
        Some(self.matrix.map(|f| f.map(|c| c.as_const().expect("no parameters").clone())))
    }

    pub fn system(&self) -> ParamSystem {
        ParamSystem::new(self.space.clone(), self.matrix.clone())
    }
}

fn header(toks: &[Token]) -> Result<(Vec<String>, usize), ParseError> {
    let is_header = matches!(&toks[0].tok, Tok::Ident(s) if s == "params") && toks.get(1).is_some_and(|t| t.tok == Tok::Sym(':'));
    if !is_header {
        return Ok((Vec::new(), 0));
    }
    let mut names: Vec<String> = Vec::new();
    let mut pos = 2;
    loop {
        let t = &toks[pos];
        let Tok::Ident(name) = &t.tok else {
            return Err(Parser::error_at(t, ParseErrorKind::Syntax(format!("expected a parameter name, found {}", Parser::describe(&t.tok)))));
        };
        if name == "z" || names.contains(name) {
            return Err(Parser::error_at(t, ParseErrorKind::Syntax(format!("parameter `{name}` declared twice or shadows z"))));
        }
        names.push(name.clone());
        pos += 1;
        if toks[pos].tok != Tok::Sym(',') {
            return Ok((names, pos));
        }
        pos += 1;
    }
}

/// Parses a document, optionally with a declared extension generator.
pub fn parse_document(text: &str, extension: Option<&Arc<NumberField>>) -> Result<InputDocument, ParseError> {
    let toks = tokenize(text)?;
    let (names, start) = header(&toks)?;
    if let (Some(k), true) = (extension, names.iter().any(|n| Some(n.as_str()) == extension.map(|k| k.name()))) {
        let t = &toks[0];
        return Err(Parser::error_at(t, ParseErrorKind::Syntax(format!("parameter `{}` clashes with the extension generator", k.name()))));
    }
    let scope = Scope::new(ParamSpace::new(&names), extension.cloned());
    let mut p = Parser { toks, pos: start, scope: &scope };
    let matrix = p.matrix()?;
    p.end()?;
    Ok(InputDocument { space: scope.space.clone(), matrix })
}

/// A parameter-free matrix literal.
pub fn parse_matrix(text: &str) -> Result<RatFunMatrix<FieldElem>, ParseError> {
    let doc = parse_document(text, None)?;
    doc.plain_matrix().ok_or(ParseError { line: 1, column: 1, kind: ParseErrorKind::Syntax("parameters are not allowed here".into()) })
}

/// One expression in the given scope.
pub fn parse_expression(text: &str, scope: &Scope) -> Result<ParamRatFun, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, scope };
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

fn constant_of(f: &ParamRatFun, text_err: ParseError) -> Result<FieldElem, ParseError> {
    f.as_constant().and_then(|c| c.as_const().cloned()).ok_or(text_err)
}

/// A constant (no `z`, no parameters).
pub fn parse_constant(text: &str, extension: Option<&Arc<NumberField>>) -> Result<FieldElem, ParseError> {
    let scope = Scope::new(ParamSpace::new(&[]), extension.cloned());
    let f = parse_expression(text, &scope)?;
    constant_of(&f, ParseError { line: 1, column: 1, kind: ParseErrorKind::Syntax("expected a constant".into()) })
}

/// `inf`, a constant, or `root(q(z))`.
pub fn parse_point(text: &str, extension: Option<&Arc<NumberField>>) -> Result<Point<FieldElem>, ParseError> {
    let s = text.trim();
    if s == "inf" || s == "infinity" {
        return Ok(Point::Infinity);
    }
    if let Some(inner) = s.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
        let scope = Scope::new(ParamSpace::new(&[]), extension.cloned());
        let f = parse_expression(inner, &scope)?;
        let err = ParseError { line: 1, column: 6, kind: ParseErrorKind::Syntax("root(...) needs a polynomial of degree at least 2".into()) };
        if !f.is_poly() || f.num().degree().unwrap_or(0) < 2 {
            return Err(err);
        }
        let q = f.num().map(|c| c.as_const().expect("no parameters").clone()).monic();
        return Ok(Point::RootOf(q));
    }
    parse_constant(s, extension).map(Point::Finite)
}

/// `m(x)` with a single identifier as generator name.
pub fn parse_extension(text: &str) -> Result<Arc<NumberField>, ParseError> {
    let toks = tokenize(text)?;
    let mut names: Vec<String> = Vec::new();
    for t in &toks {
        if let Tok::Ident(s) = &t.tok {
            if !names.contains(s) {
                names.push(s.clone());
            }
        }
    }
    let ext_err = |m: String| ParseError { line: 1, column: 1, kind: ParseErrorKind::Extension(m) };
    if names.len() != 1 {
        return Err(ext_err("extension polynomial must use exactly one variable".into()));
    }
    if names[0] == "z" {
        return Err(ext_err("the generator cannot be called z".into()));
    }
    let scope = Scope { variable: names[0].clone(), space: ParamSpace::new(&[]), extension: None };
    let f = parse_expression(text, &scope)?;
    if !f.is_poly() {
        return Err(ext_err("extension must be a polynomial".into()));
    }
    let p: Poly<BigRational> = f.num().map(|c| c.to_rational().expect("rational"));
    NumberField::new(&p, &names[0], DEFAULT_DEGREE_CAP).map_err(|e: ExtensionError| ext_err(e.to_string()))
}

/// A sequence of constant square matrices, separated by whitespace, commas
/// or semicolons.
pub fn parse_constant_matrices(text: &str, extension: Option<&Arc<NumberField>>) -> Result<Vec<Matrix<FieldElem>>, ParseError> {
    let scope = Scope::new(ParamSpace::new(&[]), extension.cloned());
    let mut p = Parser { toks: tokenize(text)?, pos: 0, scope: &scope };
    let mut out = Vec::new();
    while p.peek().tok != Tok::Eof {
        let at = p.peek().clone();
        let m = p.matrix()?;
        let c = m.try_map(|f| f.as_constant().and_then(|c| c.as_const().cloned()).ok_or(()));
        out.push(c.map_err(|_| Parser::error_at(&at, ParseErrorKind::Shape("residue matrices must be constant".into())))?);
        while p.eat(',') || p.eat(';') {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_matrix() {
        let m = parse_matrix("[[1/z]]").unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m[(0, 0)], RatFun::var_pow(-1));
    }

    #[test]
    fn parametric_document() {
        let doc = parse_document("params: a\n[[a/(z*(z-1)), 0],[0, 1/z]]", None).unwrap();
        assert!(doc.is_parametric());
        assert_eq!(doc.matrix.rows(), 2);
        assert_eq!(doc.space.names(), &["a".to_string()]);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_matrix("[[1/(z-z)]]").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ZeroDenominator);
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse_matrix("[[1/z],\n [2]]").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Shape("matrix is 2x1, expected square".into()));
        let e = parse_matrix("[[y]]").unwrap_err();
        assert_eq!(e, ParseError { line: 1, column: 3, kind: ParseErrorKind::UndeclaredIdentifier("y".into()) });
        let e = parse_matrix("[[1/z]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(parse_matrix("[[z^-1 + z^(-2) - 3*z^2]]").is_ok());
    }

    #[test]
    fn points_and_extensions() {
        let k = parse_extension("x^2-2").unwrap();
        assert_eq!(k.name(), "x");
        assert!(parse_extension("x^2-1").is_err());
        assert_eq!(parse_point("inf", None).unwrap(), Point::Infinity);
        assert_eq!(parse_point("-1/2", None).unwrap(), Point::Finite(FieldElem::frac(-1, 2)));
        assert!(matches!(parse_point("root(z^2+1)", None).unwrap(), Point::RootOf(_)));
        let x = parse_constant("x+1", Some(&k)).unwrap();
        assert_eq!(x.sub(&FieldElem::int(1)).mul(&x.sub(&FieldElem::int(1))), FieldElem::int(2));
        let doc = parse_document("[[x/z]]", Some(&k)).unwrap();
        assert!(doc.plain_matrix().is_some());
    }

    #[test]
    fn residue_lists() {
        let rs = parse_constant_matrices("[[1,0],[0,2]]; [[0,1],[0,0]]", None).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(parse_constant_matrices("[[z]]", None).is_err());
    }
}
