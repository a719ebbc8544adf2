//! Concrete syntax shared by language definitions, compiled theory files and
//! program term files.
//!
//! ```text
//! pattern := VAR | IDENT ("[" (pattern ("," pattern)*)? "]")? | builtin | "[" builtin "]"
//! eterm   := IDENT "[" (eterm ("," eterm)*)? "]" | IDENT | expr
//! expr    := VAR | IDENT "(" (expr ("," expr)*)? ")" | "[" pattern "]" | builtin | "(" expr ")"
//! builtin := "(" "@builtin-int" INT ")" | "(" "@builtin-bool" ("true"|"false") ")"
//!          | "(" "@builtin-string" STRING ")" | "(" "@builtin-error" ")"
//!          | "(" "@builtin-symbol" IDENT ")"
//!          | "(" "@builtin-list" "[" (pattern ("," pattern)*)? "]" ")"
//!          | "(" "@builtin-dict" "[" (pattern "|->" pattern ("," ...)*)? "]" ")"
//! ```
//!
//! A bare identifier in term position is the nullary node `s[]`.

mod lexer;
mod print;

use std::fmt;

use thiserror::Error;

pub use lexer::{tokenize, Tok, Token};
pub(crate) use print::write_string_literal;

use crate::term::{Expression, ExpressionTerm, GroundTerm, SymLeaf, SymbolicTerm, Term};
use crate::value::BuiltinValue;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            message: message.into(),
        }
    }
}

/// Recursive-descent parser over a token stream.
pub struct Parser {
    tokens: Vec<Token>,
    idx: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            tokens: tokenize(src)?,
            idx: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.idx].tok
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.idx + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub fn pos(&self) -> Pos {
        self.tokens[self.idx].pos
    }

    pub fn advance(&mut self) -> Token {
        let t = self.tokens[self.idx].clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(self.pos(), message))
    }

    pub fn unexpected<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        self.error(format!("expected {expected}, found {}", self.peek()))
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, SyntaxError> {
        if self.peek() == tok {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    pub fn expect_var(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.advance();
                Ok(s)
            }
            _ => self.unexpected("a variable"),
        }
    }

    pub fn expect_nat(&mut self) -> Result<usize, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(z) => match usize::try_from(&z) {
                Ok(n) => {
                    self.advance();
                    Ok(n)
                }
                Err(_) => self.error("expected a natural number"),
            },
            _ => self.unexpected("a natural number"),
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if self.at_eof() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    /// Parses a comma-separated list up to (and consuming) `close`.
    pub fn list<T>(
        &mut self,
        close: &Tok,
        mut item: impl FnMut(&mut Self) -> Result<T, SyntaxError>,
    ) -> Result<Vec<T>, SyntaxError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn at_builtin(&self) -> bool {
        matches!(self.peek(), Tok::LParen) && matches!(self.peek_at(1), Tok::Directive(d) if d.starts_with("builtin-"))
    }

    /// `( @builtin-... )`
    pub fn builtin(&mut self) -> Result<BuiltinValue, SyntaxError> {
        self.expect(&Tok::LParen)?;
        let pos = self.pos();
        let Tok::Directive(kind) = self.advance().tok else {
            return Err(SyntaxError::new(pos, "expected a `@builtin-...` literal"));
        };
        let value = match kind.as_str() {
            "builtin-int" => match self.advance().tok {
                Tok::Int(z) => BuiltinValue::Int(z),
                _ => return Err(SyntaxError::new(pos, "expected an integer after `@builtin-int`")),
            },
            "builtin-bool" => match self.advance().tok {
                Tok::Ident(b) if b == "true" => BuiltinValue::Bool(true),
                Tok::Ident(b) if b == "false" => BuiltinValue::Bool(false),
                _ => {
                    return Err(SyntaxError::new(
                        pos,
                        "expected `true` or `false` after `@builtin-bool`",
                    ))
                }
            },
            "builtin-string" => match self.advance().tok {
                Tok::Str(s) => BuiltinValue::string(s),
                _ => return Err(SyntaxError::new(pos, "expected a string after `@builtin-string`")),
            },
            "builtin-error" => BuiltinValue::Error,
            "builtin-symbol" => BuiltinValue::Sym(self.expect_ident()?.into()),
            "builtin-list" => {
                self.expect(&Tok::LBrack)?;
                BuiltinValue::list(self.list(&Tok::RBrack, Self::ground_term)?)
            }
            "builtin-dict" => {
                self.expect(&Tok::LBrack)?;
                let entries = self.list(&Tok::RBrack, |p| {
                    let k = p.ground_term()?;
                    p.expect(&Tok::MapsTo)?;
                    Ok((k, p.ground_term()?))
                })?;
                BuiltinValue::dict(entries)
            }
            other => return Err(SyntaxError::new(pos, format!("unknown literal kind `@{other}`"))),
        };
        self.expect(&Tok::RParen)?;
        Ok(value)
    }

    pub fn pattern(&mut self) -> Result<SymbolicTerm, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.advance();
                Ok(SymbolicTerm::var(v))
            }
            Tok::Ident(s) => {
                self.advance();
                if self.eat(&Tok::LBrack) {
                    Ok(Term::node(s, self.list(&Tok::RBrack, Self::pattern)?))
                } else {
                    Ok(Term::constant(s))
                }
            }
            Tok::LParen if self.at_builtin() => Ok(Term::Leaf(SymLeaf::Builtin(self.builtin()?))),
            Tok::LBrack => {
                self.advance();
                if !self.at_builtin() {
                    return self.unexpected("a `(@builtin-...)` literal");
                }
                let b = self.builtin()?;
                self.expect(&Tok::RBrack)?;
                Ok(Term::Leaf(SymLeaf::Builtin(b)))
            }
            _ => self.unexpected("a term"),
        }
    }

    /// A pattern that must not contain variables.
    pub fn ground_term(&mut self) -> Result<GroundTerm, SyntaxError> {
        let pos = self.pos();
        let p = self.pattern()?;
        p.to_ground().ok_or_else(|| {
            let var = p.free_vars_first().unwrap_or_default();
            SyntaxError::new(pos, format!("variable `{var}` is not allowed in a ground term"))
        })
    }

    pub fn expr(&mut self) -> Result<Expression, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.advance();
                Ok(Expression::var(v))
            }
            Tok::Ident(name) => {
                if matches!(self.peek_at(1), Tok::LParen) {
                    self.advance();
                    self.advance();
                    let args = self.list(&Tok::RParen, Self::expr)?;
                    Ok(Expression::call(name, args))
                } else {
                    Ok(Expression::Ground(self.ground_term()?))
                }
            }
            Tok::LBrack => {
                self.advance();
                let g = self.ground_term()?;
                self.expect(&Tok::RBrack)?;
                Ok(Expression::Ground(g))
            }
            Tok::LParen if self.at_builtin() => Ok(Expression::Ground(Term::Leaf(self.builtin()?))),
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => self.unexpected("an expression"),
        }
    }

    pub fn eterm(&mut self) -> Result<ExpressionTerm, SyntaxError> {
        if let Tok::Ident(s) = self.peek().clone() {
            match self.peek_at(1) {
                Tok::LBrack => {
                    self.advance();
                    self.advance();
                    return Ok(Term::node(s, self.list(&Tok::RBrack, Self::eterm)?));
                }
                Tok::LParen => {}
                _ => {
                    self.advance();
                    return Ok(Term::constant(s));
                }
            }
        }
        Ok(Term::Leaf(self.expr()?))
    }
}

impl SymbolicTerm {
    fn free_vars_first(&self) -> Option<String> {
        let mut first = None;
        self.for_each_leaf(&mut |l| {
            if let (SymLeaf::Var(v), None) = (l, &first) {
                first = Some(v.to_string());
            }
        });
        first
    }
}

fn parse_all<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T, SyntaxError>) -> Result<T, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = f(&mut p)?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_ground_term(src: &str) -> Result<GroundTerm, SyntaxError> {
    parse_all(src, Parser::ground_term)
}

pub fn parse_symbolic_term(src: &str) -> Result<SymbolicTerm, SyntaxError> {
    parse_all(src, Parser::pattern)
}

pub fn parse_expression_term(src: &str) -> Result<ExpressionTerm, SyntaxError> {
    parse_all(src, Parser::eterm)
}

pub fn parse_expression(src: &str) -> Result<Expression, SyntaxError> {
    parse_all(src, Parser::expr)
}
