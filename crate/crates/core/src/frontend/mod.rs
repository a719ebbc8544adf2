//! Sugared language definitions (`.m` files) and their translation into
//! plain rewriting theories.
//!
//! ```text
//! file   := decl*
//! decl   := "@frames:" "[" frame ("," frame)* "]" ";"
//!         | "@value" "(" VAR ")" ":" expr ";"
//!         | "@context" "(" VAR ")" ":" pattern ";"
//!         | "@strictness:" "[" strict ("," strict)* "]" ";"
//!         | "@rule" ("/" IDENT)? "[" label "]" ":" pattern "=>" eterm ("where" expr)? ";"
//! frame  := IDENT "(" VAR ")" ":" pattern
//! strict := IDENT "of_arity" NAT "in" "[" NAT ("," NAT)* "]"
//! ```
//!
//! Terms, expression terms and expressions use the grammar of
//! [`crate::syntax`]. Comments are `/* ... */`.

mod desugar;
mod parse;

use std::fmt;

use thiserror::Error;

use crate::semantics::ActionLabel;
use crate::syntax::{Pos, SyntaxError};
use crate::term::{Expression, ExpressionTerm, Symbol, SymbolicTerm, Variable};

pub use desugar::{
    apply_frame, compile_definition, desugar_guard, expand_strictness, freezer_symbol, freezer_table, FreezerInfo,
    FREEZER_PREFIX,
};
pub use parse::parse_definition;

/// A named template with a hole, e.g. `simple(CODE): c[builtin.cseq[CODE,REST], STATE]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub name: String,
    pub hole: Variable,
    pub template: SymbolicTerm,
    pub pos: Pos,
}

/// `@value(X): expr`: decides which terms are fully evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuePredicate {
    pub var: Variable,
    pub expr: Expression,
    pub pos: Pos,
}

/// `@context(HOLE): pattern`: where strictness rules look for work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationContext {
    pub hole: Variable,
    pub template: SymbolicTerm,
    pub pos: Pos,
}

/// `s of_arity n in [p, ...]`; positions are 0-based and evaluated in the
/// listed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessDecl {
    pub symbol: Symbol,
    pub arity: usize,
    pub positions: Vec<usize>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SugaredRule {
    pub label: ActionLabel,
    pub frame: Option<String>,
    pub lhs: SymbolicTerm,
    pub rhs: ExpressionTerm,
    pub guard: Option<Expression>,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LanguageDefinition {
    /// In declaration order.
    pub frames: Vec<Frame>,
    pub value: Option<ValuePredicate>,
    pub context: Option<EvaluationContext>,
    pub strictness: Vec<StrictnessDecl>,
    pub rules: Vec<SugaredRule>,
}

impl LanguageDefinition {
    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frames.iter().find(|f| f.name == name)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DiagnosticKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(ActionLabel),
    #[error("duplicate `@value` declaration")]
    DuplicateValue,
    #[error("duplicate `@context` declaration")]
    DuplicateContext,
    #[error("duplicate frame `{0}`")]
    DuplicateFrame(String),
    #[error("{owner} must contain its hole `{hole}` exactly once (found {count})")]
    HoleCount {
        owner: String,
        hole: Variable,
        count: usize,
    },
    #[error("`@value` may only mention its own variable `{expected}`, found `{found}`")]
    ValueVariable { expected: Variable, found: Variable },
    #[error("`@strictness` is declared but `@{0}` is missing")]
    MissingDeclaration(&'static str),
    #[error("strictness for `{symbol}`: position {position} is out of range for arity {arity}")]
    PositionOutOfRange {
        symbol: Symbol,
        position: usize,
        arity: usize,
    },
    #[error("strictness for `{symbol}`: position {position} is listed twice")]
    DuplicatePosition { symbol: Symbol, position: usize },
    #[error("strictness for `{0}` is declared twice")]
    DuplicateStrictness(Symbol),
    #[error("rule `{rule}`: unknown frame `{frame}`")]
    UnknownFrame { rule: ActionLabel, frame: String },
    #[error("rule `{rule}`: variable `{var}` is also a variable of frame `{frame}`")]
    FrameCapture {
        rule: ActionLabel,
        frame: String,
        var: Variable,
    },
    #[error("rule `{rule}`: symbol `{symbol}` is reserved for generated freezers")]
    ReservedSymbol { rule: ActionLabel, symbol: Symbol },
    #[error("rule `{rule}`: variable `{var}` does not occur in the left-hand side")]
    Unhoused { rule: ActionLabel, var: Variable },
    #[error("{owner}: unknown built-in function `{name}`")]
    UnknownFunction { owner: String, name: String },
    #[error("{owner}: built-in function `{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        owner: String,
        name: String,
        expected: usize,
        got: usize,
    },
}

/// A frontend error, located in the source when possible.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Option<Pos>,
    pub kind: DiagnosticKind,
}

impl Diagnostic {
    pub fn at(pos: Pos, kind: DiagnosticKind) -> Self {
        Diagnostic { pos: Some(pos), kind }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(pos) => write!(f, "{pos}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl From<SyntaxError> for Diagnostic {
    fn from(e: SyntaxError) -> Self {
        Diagnostic::at(e.pos, DiagnosticKind::Syntax(e.message))
    }
}
