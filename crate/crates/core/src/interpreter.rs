//! The universal one-step interpreter.
//!
//! Rule selection is a linear scan over the theory in definition order: the
//! first rule whose left side matches and whose side conditions hold fires.
//! There is no indexing and no compiled matching.

use thiserror::Error;

use crate::par::{self, Execution};
use crate::semantics::{ActionLabel, RewritingTheory, SideCondition, TraceStep, Valuation};
use crate::static_model::{ModelError, StaticModel};
use crate::term::{Expression, ExpressionTerm, GroundTerm, SymLeaf, SymbolicTerm, Term, Variable};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is unbound")]
    UnboundVariable(Variable),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InterpreterError {
    /// A matched rule's right side failed to evaluate. Impossible for
    /// well-formed theories over a model that knows every called function.
    #[error(
        "internal invariant violated: rule #{rule} `{action}` matched but its right-hand side is undefined: {source}"
    )]
    Evaluation {
        rule: usize,
        action: ActionLabel,
        source: EvalError,
    },
}

/// Matches `phi` against `g`, returning the valuation whose domain is
/// exactly the variables of `phi`.
pub fn try_match(phi: &SymbolicTerm, g: &GroundTerm) -> Option<Valuation> {
    let mut rho = Valuation::new();
    match_into(phi, g, &mut rho).then_some(rho)
}

// Child valuations are merged as they are produced; a variable already bound
// to a different term is the "defined but distinct" failure.
fn match_into(phi: &SymbolicTerm, g: &GroundTerm, rho: &mut Valuation) -> bool {
    match phi {
        Term::Leaf(SymLeaf::Var(x)) => match rho.get(x) {
            Some(bound) => bound == g,
            None => {
                rho.insert(x.clone(), g.clone());
                true
            }
        },
        Term::Leaf(SymLeaf::Builtin(b)) => matches!(g, Term::Leaf(gb) if gb == b),
        Term::Node(s, patterns) => match g {
            Term::Leaf(_) => false,
            Term::Node(t, children) => {
                s == t
                    && patterns.len() == children.len()
                    && patterns.iter().zip(children.iter()).all(|(p, c)| match_into(p, c, rho))
            }
        },
    }
}

fn eval_expr(model: &StaticModel, rho: &Valuation, e: &Expression) -> Result<GroundTerm, EvalError> {
    match e {
        Expression::Ground(g) => Ok(g.clone()),
        Expression::Var(v) => rho.get(v).cloned().ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Expression::Call(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_expr(model, rho, a)?);
            }
            Ok(model.apply(f.as_str(), &vals)?)
        }
    }
}

/// Evaluates a right-hand side under `rho`.
pub fn evaluate(model: &StaticModel, rho: &Valuation, r: &ExpressionTerm) -> Result<GroundTerm, EvalError> {
    r.try_map_leaves(&mut |e| eval_expr(model, rho, e))
}

/// True when every condition holds under `rho`. A side that cannot be
/// evaluated makes its condition hold vacuously, as in the declarative
/// definition.
pub fn evaluate_condition(model: &StaticModel, rho: &Valuation, cs: &[SideCondition]) -> bool {
    cs.iter().all(
        |c| match (eval_expr(model, rho, &c.lhs), eval_expr(model, rho, &c.rhs)) {
            (Ok(a), Ok(b)) => a == b,
            _ => true,
        },
    )
}

/// First rule (in theory order) that matches `g` and whose conditions hold.
pub fn naive_select(model: &StaticModel, theory: &RewritingTheory, g: &GroundTerm) -> Option<(usize, Valuation)> {
    theory.rules().iter().enumerate().find_map(|(i, rule)| {
        let rho = try_match(&rule.lhs, g)?;
        evaluate_condition(model, &rho, &rule.conditions).then_some((i, rho))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped {
        next: GroundTerm,
        rule: usize,
        action: ActionLabel,
        valuation: Valuation,
    },
    Stuck,
}

pub fn step(model: &StaticModel, theory: &RewritingTheory, g: &GroundTerm) -> Result<StepOutcome, InterpreterError> {
    let Some((rule, valuation)) = naive_select(model, theory, g) else {
        return Ok(StepOutcome::Stuck);
    };
    let r = &theory.rules()[rule];
    match evaluate(model, &valuation, &r.rhs) {
        Ok(next) => Ok(StepOutcome::Stepped {
            next,
            rule,
            action: r.action.clone(),
            valuation,
        }),
        Err(source) => Err(InterpreterError::Evaluation {
            rule,
            action: r.action.clone(),
            source,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub fuel: u64,
    /// Keep every intermediate term with its rule and valuation.
    pub record_trace: bool,
}

impl RunOptions {
    pub fn with_fuel(fuel: u64) -> Self {
        RunOptions {
            fuel,
            record_trace: false,
        }
    }

    pub fn traced(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub final_term: GroundTerm,
    pub steps_taken: u64,
    pub action_word: Vec<ActionLabel>,
    /// Fuel ran out while the final term still had a successor.
    pub exhausted: bool,
    /// How often each rule fired, indexed like the theory.
    pub rule_counts: Vec<u64>,
    pub trace: Option<Vec<TraceStep>>,
}

/// Steps from `start` until the term is stuck or the fuel is used up.
pub fn run(
    model: &StaticModel,
    theory: &RewritingTheory,
    start: GroundTerm,
    options: RunOptions,
) -> Result<RunResult, InterpreterError> {
    let mut current = start;
    let mut action_word = Vec::new();
    let mut rule_counts = vec![0u64; theory.len()];
    let mut trace = options.record_trace.then(Vec::new);
    let mut steps_taken = 0u64;

    while steps_taken < options.fuel {
        match step(model, theory, &current)? {
            StepOutcome::Stuck => {
                return Ok(RunResult {
                    final_term: current,
                    steps_taken,
                    action_word,
                    exhausted: false,
                    rule_counts,
                    trace,
                });
            }
            StepOutcome::Stepped {
                next,
                rule,
                action,
                valuation,
            } => {
                steps_taken += 1;
                rule_counts[rule] += 1;
                action_word.push(action);
                if let Some(trace) = trace.as_mut() {
                    trace.push(TraceStep {
                        rule,
                        valuation,
                        next: next.clone(),
                    });
                }
                current = next;
            }
        }
    }

    let exhausted = naive_select(model, theory, &current).is_some();
    Ok(RunResult {
        final_term: current,
        steps_taken,
        action_word,
        exhausted,
        rule_counts,
        trace,
    })
}

/// Runs independent start terms against a shared theory.
pub fn run_batch(
    model: &StaticModel,
    theory: &RewritingTheory,
    starts: &[GroundTerm],
    options: RunOptions,
    mode: Execution,
) -> Vec<Result<RunResult, InterpreterError>> {
    par::map(mode, starts, |g| run(model, theory, g.clone(), options))
}
