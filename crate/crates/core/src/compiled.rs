//! Compiled theory files: a canonical, versioned text form of a desugared
//! theory. Loading and re-serializing a file reproduces it byte for byte.
//!
//! ```text
//! @format 1;
//! @source-digest "<sha256 of the .m source>";
//! @value(X): <expr>;                                  (optional)
//! @freezer [freezer.plus.0]: plus of_arity 2 at 0;    (one per strict position)
//! @rule [label]: <pattern> => <eterm> where <expr> == <expr>, ...;
//! ```
//!
//! One declaration per line, in this order. Rules keep theory order.

use std::fmt::{self, Write};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::frontend::{compile_definition, freezer_table, parse_definition, Diagnostic, FreezerInfo};
use crate::semantics::{IllFormedRule, RewritingRule, RewritingTheory, SideCondition};
use crate::static_model::StaticModel;
use crate::syntax::{write_string_literal, Parser, SyntaxError, Tok};
use crate::term::{Expression, Variable};

pub const FORMAT_VERSION: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTheoryFile {
    /// Lowercase hex SHA-256 of the source text.
    pub source_digest: String,
    pub value: Option<(Variable, Expression)>,
    pub freezers: Vec<FreezerInfo>,
    pub theory: RewritingTheory,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(usize),
    #[error(transparent)]
    IllFormed(#[from] IllFormedRule),
    #[error("rule `{rule}`: {problem}")]
    Model { rule: String, problem: String },
}

pub fn source_digest(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

impl CompiledTheoryFile {
    /// Parses and compiles `.m` source text.
    pub fn from_source(source: &str, model: &StaticModel) -> Result<Self, Vec<Diagnostic>> {
        let def = parse_definition(source).map_err(|d| vec![d])?;
        let theory = compile_definition(&def, model)?;
        Ok(CompiledTheoryFile {
            source_digest: source_digest(source),
            freezers: freezer_table(&def),
            value: def.value.map(|v| (v.var, v.expr)),
            theory,
        })
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Reads a compiled file, checking every call site against `model`.
    pub fn parse(text: &str, model: &StaticModel) -> Result<Self, LoadError> {
        let mut p = Parser::new(text)?;

        directive(&mut p, "format")?;
        let version = p.expect_nat()?;
        if version != FORMAT_VERSION {
            return Err(LoadError::Version(version));
        }
        p.expect(&Tok::Semi)?;

        directive(&mut p, "source-digest")?;
        let source_digest = match p.advance().tok {
            Tok::Str(s) => s,
            _ => return Err(p.error::<()>("expected a quoted digest").unwrap_err().into()),
        };
        p.expect(&Tok::Semi)?;

        let mut value = None;
        if peek_directive(&p, "value") {
            p.advance();
            p.expect(&Tok::LParen)?;
            let var: Variable = p.expect_var()?.into();
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::Colon)?;
            value = Some((var, p.expr()?));
            p.expect(&Tok::Semi)?;
        }

        let mut freezers = Vec::new();
        while peek_directive(&p, "freezer") {
            p.advance();
            p.expect(&Tok::LBrack)?;
            let name = p.expect_ident()?.into();
            p.expect(&Tok::RBrack)?;
            p.expect(&Tok::Colon)?;
            let symbol = p.expect_ident()?.into();
            p.expect_keyword("of_arity")?;
            let arity = p.expect_nat()?;
            p.expect_keyword("at")?;
            let position = p.expect_nat()?;
            p.expect(&Tok::Semi)?;
            freezers.push(FreezerInfo {
                name,
                symbol,
                arity,
                position,
            });
        }

        let mut rules = Vec::new();
        while !p.at_eof() {
            directive(&mut p, "rule")?;
            p.expect(&Tok::LBrack)?;
            let action = p.expect_ident()?.into();
            p.expect(&Tok::RBrack)?;
            p.expect(&Tok::Colon)?;
            let lhs = p.pattern()?;
            p.expect(&Tok::Arrow)?;
            let rhs = p.eterm()?;
            let mut conditions = Vec::new();
            if matches!(p.peek(), Tok::Ident(kw) if kw == "where") {
                p.advance();
                conditions = p.list(&Tok::Semi, |p| {
                    let l = p.expr()?;
                    p.expect(&Tok::EqEq)?;
                    Ok(SideCondition::new(l, p.expr()?))
                })?;
            } else {
                p.expect(&Tok::Semi)?;
            }
            rules.push(RewritingRule {
                lhs,
                rhs,
                conditions,
                action,
            });
        }

        for rule in &rules {
            check_calls(rule, model)?;
        }
        Ok(CompiledTheoryFile {
            source_digest,
            value,
            freezers,
            theory: RewritingTheory::new(rules)?,
        })
    }

    /// Theory rules in `@rule [label]: ...;` syntax, one per line.
    pub fn print_rules(&self) -> String {
        let mut out = String::new();
        for rule in self.theory.rules() {
            writeln!(out, "@rule [{}]: {rule};", rule.action).expect("writing to a String");
        }
        out
    }
}

fn check_calls(rule: &RewritingRule, model: &StaticModel) -> Result<(), LoadError> {
    let mut problem = None;
    let mut visit = |e: &Expression| {
        e.for_each_call(&mut |name, got| {
            if problem.is_some() {
                return;
            }
            match model.arity(name.as_str()) {
                None => problem = Some(format!("unknown built-in function `{name}`")),
                Some(n) if n != got => {
                    problem = Some(format!("built-in function `{name}` expects {n} argument(s), got {got}"))
                }
                Some(_) => {}
            }
        })
    };
    rule.rhs.for_each_leaf(&mut |e| visit(e));
    for c in &rule.conditions {
        visit(&c.lhs);
        visit(&c.rhs);
    }
    match problem {
        None => Ok(()),
        Some(problem) => Err(LoadError::Model {
            rule: rule.action.to_string(),
            problem,
        }),
    }
}

fn peek_directive(p: &Parser, name: &str) -> bool {
    matches!(p.peek(), Tok::Directive(d) if d == name)
}

fn directive(p: &mut Parser, name: &str) -> Result<(), SyntaxError> {
    if peek_directive(p, name) {
        p.advance();
        Ok(())
    } else {
        p.unexpected(&format!("`@{name}`"))
    }
}

impl fmt::Display for CompiledTheoryFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "@format {FORMAT_VERSION};")?;
        f.write_str("@source-digest ")?;
        write_string_literal(f, &self.source_digest)?;
        f.write_str(";\n")?;
        if let Some((var, expr)) = &self.value {
            writeln!(f, "@value({var}): {expr};")?;
        }
        for z in &self.freezers {
            writeln!(
                f,
                "@freezer [{}]: {} of_arity {} at {};",
                z.name, z.symbol, z.arity, z.position
            )?;
        }
        for rule in self.theory.rules() {
            writeln!(f, "@rule [{}]: {rule};", rule.action)?;
        }
        Ok(())
    }
}
