//! Line-oriented text format for models.
//!
//! ```text
//! # comments run to the end of the line
//! gen x1 3
//! gen x2 3
//! gen x3 5
//! d x3 = x1*x2
//! ```
//!
//! An expression is a `+`/`-` separated sum of terms
//! `[p/q*]name[^k]*name[^k]...`; a bare rational is a constant term.
//! Generators without a `d` line are closed. Products are put into
//! canonical order with the Koszul sign when parsed.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{FreeAlgebra, Polynomial, Sign, Q};
use crate::error::{AlgebraError, ModelError};
use crate::model::{SullivanModel, ValidationOptions, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TextError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unknown generator `{name}`")]
    UnknownGenerator {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}: generator `{name}` declared twice")]
    DuplicateGenerator { name: String, line: usize },
    #[error("{line}: differential of `{name}` assigned twice")]
    DuplicateAssignment { name: String, line: usize },
    #[error("{line}: generator `{name}` has degree 0")]
    ZeroDegree { name: String, line: usize },
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
}

impl From<ModelError> for TextError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Invalid(r) => TextError::Invalid(r),
            other => TextError::Syntax {
                line: 0,
                col: 0,
                message: other.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: u32,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub exponent: u32,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Q,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialDecl {
    pub name: String,
    pub terms: Vec<Term>,
    pub line: usize,
    pub col: usize,
}

/// A parsed but not yet resolved model description.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelDocument {
    pub generators: Vec<GeneratorDecl>,
    pub differentials: Vec<DifferentialDecl>,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TextError> {
        Err(TextError::Syntax {
            line: self.line,
            col: self.col(),
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TextError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), TextError> {
        self.skip_ws();
        let start = self.pos;
        let ok_start = |c: char| c.is_alphabetic() || c == '_';
        if !self.chars.get(self.pos).is_some_and(|&c| ok_start(c)) {
            return self.err("expected a name");
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn integer(&mut self) -> Result<BigInt, TextError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn small_integer(&mut self) -> Result<u32, TextError> {
        let n = self.integer()?;
        match u32::try_from(n) {
            Ok(n) => Ok(n),
            Err(_) => self.err("integer too large"),
        }
    }

    fn rational(&mut self) -> Result<Q, TextError> {
        let num = self.integer()?;
        if self.eat('/') {
            let den = self.integer()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn factor(&mut self) -> Result<Factor, TextError> {
        let (name, col) = self.ident()?;
        let exponent = if self.eat('^') {
            self.small_integer()?
        } else {
            1
        };
        Ok(Factor {
            name,
            exponent,
            line: self.line,
            col,
        })
    }

    fn term(&mut self, sign: Q) -> Result<Term, TextError> {
        let mut coefficient = sign;
        let mut factors = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coefficient *= self.rational()?;
            if !self.eat('*') {
                return Ok(Term {
                    coefficient,
                    factors,
                });
            }
        }
        factors.push(self.factor()?);
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(Term {
            coefficient,
            factors,
        })
    }

    fn expression(&mut self) -> Result<Vec<Term>, TextError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -Q::one()
        } else {
            self.eat('+');
            Q::one()
        };
        loop {
            terms.push(self.term(sign)?);
            if self.eat('+') {
                sign = Q::one();
            } else if self.eat('-') {
                sign = -Q::one();
            } else if self.at_end() {
                return Ok(terms);
            } else {
                return self.err("expected `+`, `-` or end of line");
            }
        }
    }
}

pub fn parse_document(text: &str) -> Result<ModelDocument, TextError> {
    let mut doc = ModelDocument::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(content, line);
        if cur.at_end() {
            continue;
        }
        let (keyword, _) = cur.ident()?;
        match keyword.as_str() {
            "gen" => {
                let (name, _) = cur.ident()?;
                let degree = cur.small_integer()?;
                if !cur.at_end() {
                    return cur.err("unexpected trailing input");
                }
                doc.generators.push(GeneratorDecl { name, degree, line });
            }
            "d" => {
                let (name, col) = cur.ident()?;
                cur.expect('=')?;
                if cur.eat('0') && cur.at_end() {
                    doc.differentials.push(DifferentialDecl {
                        name,
                        terms: Vec::new(),
                        line,
                        col,
                    });
                    continue;
                }
                let terms = cur.expression()?;
                doc.differentials.push(DifferentialDecl {
                    name,
                    terms,
                    line,
                    col,
                });
            }
            other => {
                return Err(TextError::Syntax {
                    line,
                    col: 1,
                    message: format!("unknown keyword `{other}` (expected `gen` or `d`)"),
                })
            }
        }
    }
    Ok(doc)
}

impl ModelDocument {
    /// Resolves names and builds the model without validating it.
    pub fn to_model_unchecked(&self) -> Result<SullivanModel, TextError> {
        let alg = FreeAlgebra::new(self.generators.iter().map(|g| (g.name.clone(), g.degree)))
            .map_err(|e| {
                let line_of = |n: &str| {
                    self.generators
                        .iter()
                        .filter(|g| g.name == n)
                        .map(|g| g.line)
                        .next_back()
                        .unwrap_or(0)
                };
                match e {
                    AlgebraError::DuplicateGenerator(name) => TextError::DuplicateGenerator {
                        line: line_of(&name),
                        name,
                    },
                    AlgebraError::ZeroDegree(name) => TextError::ZeroDegree {
                        line: line_of(&name),
                        name,
                    },
                    other => TextError::Syntax {
                        line: 0,
                        col: 0,
                        message: other.to_string(),
                    },
                }
            })?;
        let mut diffs = vec![Polynomial::zero(); alg.len()];
        let mut assigned = vec![false; alg.len()];
        for decl in &self.differentials {
            let target = alg
                .id_of(&decl.name)
                .ok_or_else(|| TextError::UnknownGenerator {
                    name: decl.name.clone(),
                    line: decl.line,
                    col: decl.col,
                })?;
            if assigned[target] {
                return Err(TextError::DuplicateAssignment {
                    name: decl.name.clone(),
                    line: decl.line,
                });
            }
            assigned[target] = true;
            let mut p = Polynomial::zero();
            for term in &decl.terms {
                let mut factors = Vec::with_capacity(term.factors.len());
                for f in &term.factors {
                    let id = alg
                        .id_of(&f.name)
                        .ok_or_else(|| TextError::UnknownGenerator {
                            name: f.name.clone(),
                            line: f.line,
                            col: f.col,
                        })?;
                    factors.push((id, f.exponent));
                }
                let (sign, m) = alg
                    .normalize_product(&factors)
                    .expect("ids come from the algebra");
                match sign {
                    Sign::Zero => {}
                    Sign::Plus => p.add_term(m, term.coefficient.clone()),
                    Sign::Minus => p.add_term(m, -term.coefficient.clone()),
                }
            }
            diffs[target] = p;
        }
        Ok(SullivanModel::from_parts(alg, diffs))
    }

    pub fn to_model(&self, options: &ValidationOptions) -> Result<SullivanModel, TextError> {
        let model = self.to_model_unchecked()?;
        let report = model.validate(options);
        if report.accepted() {
            Ok(model)
        } else {
            Err(TextError::Invalid(report))
        }
    }
}

/// Parses and validates a model with default options.
pub fn parse_model(text: &str) -> Result<SullivanModel, TextError> {
    parse_document(text)?.to_model(&ValidationOptions::default())
}

pub fn print_model(model: &SullivanModel) -> String {
    let mut out = String::new();
    for g in model.generators() {
        writeln!(out, "gen {} {}", g.name, g.degree).expect("write to string");
    }
    for g in model.generators() {
        let dw = model.d_of(g.id);
        if !dw.is_zero() {
            writeln!(out, "d {} = {}", g.name, model.algebra().fmt_polynomial(dw))
                .expect("write to string");
        }
    }
    out
}
