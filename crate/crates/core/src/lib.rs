//! First-order term rewriting over built-in types.
//!
//! A language is described by a set of labelled, conditional rewriting rules
//! (usually written in the sugared `.m` syntax handled by [`frontend`]).
//! [`interpreter`] executes programs with a universal one-step interpreter,
//! and [`semantics`] implements the declarative step relation independently
//! so that every interpreter step can be checked.

pub mod bench;
pub mod compiled;
pub mod frontend;
pub mod interpreter;
pub mod par;
pub mod program;
pub mod semantics;
pub mod static_model;
pub mod syntax;
pub mod term;
pub mod value;

pub use interpreter::{run, step, try_match, RunOptions, RunResult, StepOutcome};
pub use par::Execution;
pub use semantics::{ActionLabel, RewritingRule, RewritingTheory, SideCondition, Valuation};
pub use static_model::{default_model, StaticModel};
pub use term::{Expression, ExpressionTerm, FreeVars, GroundTerm, SymLeaf, Symbol, SymbolicTerm, Term, Variable};
pub use value::BuiltinValue;
