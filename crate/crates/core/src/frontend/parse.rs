use std::collections::HashSet;

use super::{
    Diagnostic, DiagnosticKind, EvaluationContext, Frame, LanguageDefinition, StrictnessDecl, SugaredRule,
    ValuePredicate,
};
use crate::syntax::{Parser, SyntaxError, Tok};
use crate::term::Variable;

/// Parses the text of a `.m` language definition.
pub fn parse_definition(source: &str) -> Result<LanguageDefinition, Diagnostic> {
    let mut p = Parser::new(source)?;
    let mut def = LanguageDefinition::default();
    let mut labels = HashSet::new();

    while !p.at_eof() {
        let pos = p.pos();
        let directive = match p.peek() {
            Tok::Directive(d) => d.clone(),
            _ => {
                return Err(p
                    .unexpected::<()>("a declaration (`@rule`, `@frames`, ...)")
                    .unwrap_err()
                    .into())
            }
        };
        p.advance();
        match directive.as_str() {
            "frames" => {
                p.expect(&Tok::Colon)?;
                p.expect(&Tok::LBrack)?;
                for frame in p.list(&Tok::RBrack, frame)? {
                    if def.frame(&frame.name).is_some() {
                        return Err(Diagnostic::at(frame.pos, DiagnosticKind::DuplicateFrame(frame.name)));
                    }
                    def.frames.push(frame);
                }
            }
            "value" => {
                if def.value.is_some() {
                    return Err(Diagnostic::at(pos, DiagnosticKind::DuplicateValue));
                }
                let var = hole(&mut p)?;
                p.expect(&Tok::Colon)?;
                let expr = p.expr()?;
                def.value = Some(ValuePredicate { var, expr, pos });
            }
            "context" => {
                if def.context.is_some() {
                    return Err(Diagnostic::at(pos, DiagnosticKind::DuplicateContext));
                }
                let hole = hole(&mut p)?;
                p.expect(&Tok::Colon)?;
                let template = p.pattern()?;
                def.context = Some(EvaluationContext { hole, template, pos });
            }
            "strictness" => {
                p.expect(&Tok::Colon)?;
                p.expect(&Tok::LBrack)?;
                def.strictness.extend(p.list(&Tok::RBrack, strict)?);
            }
            "rule" => {
                let frame = if p.eat(&Tok::Slash) {
                    Some(p.expect_ident()?)
                } else {
                    None
                };
                p.expect(&Tok::LBrack)?;
                let label_pos = p.pos();
                let label = p.expect_ident()?;
                p.expect(&Tok::RBrack)?;
                p.expect(&Tok::Colon)?;
                let lhs = p.pattern()?;
                p.expect(&Tok::Arrow)?;
                let rhs = p.eterm()?;
                let guard = match p.peek() {
                    Tok::Ident(kw) if kw == "where" => {
                        p.advance();
                        Some(p.expr()?)
                    }
                    _ => None,
                };
                if !labels.insert(label.clone()) {
                    return Err(Diagnostic::at(label_pos, DiagnosticKind::DuplicateLabel(label.into())));
                }
                def.rules.push(SugaredRule {
                    label: label.into(),
                    frame,
                    lhs,
                    rhs,
                    guard,
                    pos,
                });
            }
            other => {
                return Err(Diagnostic::at(
                    pos,
                    DiagnosticKind::Syntax(format!("unknown declaration `@{other}`")),
                ))
            }
        }
        p.expect(&Tok::Semi)?;
    }
    Ok(def)
}

fn hole(p: &mut Parser) -> Result<Variable, SyntaxError> {
    p.expect(&Tok::LParen)?;
    let v = p.expect_var()?;
    p.expect(&Tok::RParen)?;
    Ok(v.into())
}

fn frame(p: &mut Parser) -> Result<Frame, SyntaxError> {
    let pos = p.pos();
    let name = p.expect_ident()?;
    let hole = hole(p)?;
    p.expect(&Tok::Colon)?;
    let template = p.pattern()?;
    Ok(Frame {
        name,
        hole,
        template,
        pos,
    })
}

fn strict(p: &mut Parser) -> Result<StrictnessDecl, SyntaxError> {
    let pos = p.pos();
    let symbol = p.expect_ident()?;
    p.expect_keyword("of_arity")?;
    let arity = p.expect_nat()?;
    p.expect_keyword("in")?;
    p.expect(&Tok::LBrack)?;
    let positions = p.list(&Tok::RBrack, Parser::expect_nat)?;
    Ok(StrictnessDecl {
        symbol: symbol.into(),
        arity,
        positions,
        pos,
    })
}
