//! Program term files and run preparation.
//!
//! A program file holds one ground term in the pattern syntax. Nullary
//! symbols `$arg`, `$arg1`, `$arg2`, ... are placeholders for arguments given
//! at run time (`$arg` is `$arg1`).

use thiserror::Error;

use crate::semantics::RewritingTheory;
use crate::syntax::{parse_ground_term, SyntaxError};
use crate::term::{GroundTerm, Term};

/// Rule label that switches on init wrapping.
pub const INIT_LABEL: &str = "init";
pub const INIT_SYMBOL: &str = "builtin.init";

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("placeholder `{placeholder}` needs argument {index}, but only {given} given")]
    MissingArgument {
        placeholder: String,
        index: usize,
        given: usize,
    },
}

pub fn parse_term_file(source: &str) -> Result<GroundTerm, SyntaxError> {
    parse_ground_term(source)
}

/// 1-based argument index of a placeholder symbol.
fn placeholder_index(symbol: &str) -> Option<usize> {
    let rest = symbol.strip_prefix("$arg")?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

/// Replaces every placeholder by its argument.
pub fn substitute_args(program: &GroundTerm, args: &[GroundTerm]) -> Result<GroundTerm, ProgramError> {
    match program {
        Term::Leaf(_) => Ok(program.clone()),
        Term::Node(s, children) if children.is_empty() => match placeholder_index(s.as_str()) {
            None => Ok(program.clone()),
            Some(index) => args
                .get(index - 1)
                .cloned()
                .ok_or_else(|| ProgramError::MissingArgument {
                    placeholder: s.to_string(),
                    index,
                    given: args.len(),
                }),
        },
        Term::Node(s, children) => Ok(Term::Node(
            s.clone(),
            children
                .iter()
                .map(|c| substitute_args(c, args))
                .collect::<Result<_, _>>()?,
        )),
    }
}

/// Wraps the program as `builtin.init[p]` when the theory has an `init` rule.
pub fn initial_configuration(theory: &RewritingTheory, program: GroundTerm) -> GroundTerm {
    if theory.position_of(INIT_LABEL).is_some() {
        Term::node(INIT_SYMBOL, vec![program])
    } else {
        program
    }
}
