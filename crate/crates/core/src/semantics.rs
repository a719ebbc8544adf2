//! Declarative semantics of rewriting theories.
//!
//! Satisfaction relations between valuations, ground terms and the three
//! kinds of syntax, side-condition validity, rule well-formedness and the
//! one-step relation. Nothing here shares code with [`crate::interpreter`];
//! the functions in this module are the oracle the interpreter is tested
//! against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::par::{self, Execution};
use crate::static_model::StaticModel;
use crate::term::{name_type, Expression, ExpressionTerm, FreeVars, GroundTerm, SymLeaf, SymbolicTerm, Term, Variable};

use std::sync::Arc;

name_type!(
    /// Label attached to a rule; sequences of labels are action words.
    ActionLabel
);

/// Finite partial map from variables to ground terms.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation(BTreeMap<Variable, GroundTerm>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&GroundTerm> {
        self.0.get(v)
    }

    /// Returns the previous binding, if any.
    pub fn insert(&mut self, v: Variable, g: GroundTerm) -> Option<GroundTerm> {
        self.0.insert(v, g)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Variable> {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &GroundTerm)> {
        self.0.iter()
    }

    /// True when every binding of `other` is also a binding of `self`.
    pub fn extends(&self, other: &Valuation) -> bool {
        other.iter().all(|(v, g)| self.get(v) == Some(g))
    }

    pub fn restrict(&self, vars: &BTreeSet<Variable>) -> Valuation {
        self.iter()
            .filter(|(v, _)| vars.contains(*v))
            .map(|(v, g)| (v.clone(), g.clone()))
            .collect()
    }
}

impl FromIterator<(Variable, GroundTerm)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Variable, GroundTerm)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, g)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} |-> {g}")?;
        }
        f.write_str("}")
    }
}

/// A pair of expressions required to denote equal ground terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideCondition {
    pub lhs: Expression,
    pub rhs: Expression,
}

impl SideCondition {
    pub fn new(lhs: Expression, rhs: Expression) -> Self {
        SideCondition { lhs, rhs }
    }
}

impl FreeVars for SideCondition {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewritingRule {
    pub lhs: SymbolicTerm,
    pub rhs: ExpressionTerm,
    pub conditions: Vec<SideCondition>,
    pub action: ActionLabel,
}

impl RewritingRule {
    /// Variables of the right-hand side or conditions not bound by the
    /// left-hand side. Empty exactly when the rule is well-formed.
    pub fn unhoused_variables(&self) -> BTreeSet<Variable> {
        let bound = self.lhs.free_vars();
        let mut used = self.rhs.free_vars();
        self.conditions.collect_vars(&mut used);
        used.difference(&bound).cloned().collect()
    }
}

pub fn check_rule_wf(rule: &RewritingRule) -> bool {
    rule.unhoused_variables().is_empty()
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("rule #{index} `{action}`: variable `{variable}` does not occur in the left-hand side")]
pub struct IllFormedRule {
    pub index: usize,
    pub action: ActionLabel,
    pub variable: Variable,
}

/// Ordered collection of well-formed rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RewritingTheory {
    rules: Vec<RewritingRule>,
}

impl RewritingTheory {
    pub fn new(rules: Vec<RewritingRule>) -> Result<Self, IllFormedRule> {
        for (index, rule) in rules.iter().enumerate() {
            if let Some(variable) = rule.unhoused_variables().into_iter().next() {
                return Err(IllFormedRule {
                    index,
                    action: rule.action.clone(),
                    variable,
                });
            }
        }
        Ok(RewritingTheory { rules })
    }

    pub fn rules(&self) -> &[RewritingRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, index: usize) -> Option<&RewritingRule> {
        self.rules.get(index)
    }

    pub fn position_of(&self, action: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.action.as_str() == action)
    }
}

/// `rho, g |= e` for expressions.
pub fn sat_expr(model: &StaticModel, rho: &Valuation, g: &GroundTerm, e: &Expression) -> bool {
    match e {
        Expression::Ground(lit) => lit == g,
        Expression::Var(v) => rho.get(v) == Some(g),
        Expression::Call(f, args) => {
            // Expressions denote at most one term, so the witnesses for the
            // arguments are their denotations.
            let Some(witnesses) = args
                .iter()
                .map(|a| denote_expr(model, rho, a))
                .collect::<Option<Vec<_>>>()
            else {
                return false;
            };
            debug_assert!(witnesses.iter().zip(args).all(|(w, a)| sat_expr(model, rho, w, a)));
            model.apply(f.as_str(), &witnesses).is_ok_and(|r| &r == g)
        }
    }
}

/// The unique ground term an expression denotes under `rho`, or `None` when
/// it mentions an unbound variable (or an unregistered function).
pub fn denote_expr(model: &StaticModel, rho: &Valuation, e: &Expression) -> Option<GroundTerm> {
    match e {
        Expression::Ground(g) => Some(g.clone()),
        Expression::Var(v) => rho.get(v).cloned(),
        Expression::Call(f, args) => {
            let vals = args
                .iter()
                .map(|a| denote_expr(model, rho, a))
                .collect::<Option<Vec<_>>>()?;
            model.apply(f.as_str(), &vals).ok()
        }
    }
}

/// `rho, g |= phi` for symbolic terms.
pub fn sat_sym(rho: &Valuation, g: &GroundTerm, phi: &SymbolicTerm) -> bool {
    match (phi, g) {
        (Term::Leaf(SymLeaf::Builtin(b)), Term::Leaf(gb)) => b == gb,
        (Term::Leaf(SymLeaf::Builtin(_)), Term::Node(..)) => false,
        (Term::Leaf(SymLeaf::Var(v)), _) => rho.get(v) == Some(g),
        (Term::Node(s, ps), Term::Node(t, gs)) => {
            s == t && ps.len() == gs.len() && ps.iter().zip(gs.iter()).all(|(p, c)| sat_sym(rho, c, p))
        }
        (Term::Node(..), Term::Leaf(_)) => false,
    }
}

/// `rho, g |= t` for expression terms.
pub fn sat_exprterm(model: &StaticModel, rho: &Valuation, g: &GroundTerm, t: &ExpressionTerm) -> bool {
    match (t, g) {
        (Term::Leaf(e), _) => sat_expr(model, rho, g, e),
        (Term::Node(s, ts), Term::Node(u, gs)) => {
            s == u && ts.len() == gs.len() && ts.iter().zip(gs.iter()).all(|(t, c)| sat_exprterm(model, rho, c, t))
        }
        (Term::Node(..), Term::Leaf(_)) => false,
    }
}

static VACUOUS_CONDITIONS: AtomicU64 = AtomicU64::new(0);

/// Number of side conditions found to hold only vacuously (one side had no
/// denotation) since the process started. Non-zero indicates a suspicious rule.
pub fn vacuous_side_conditions() -> u64 {
    VACUOUS_CONDITIONS.load(Ordering::Relaxed)
}

/// `rho |= e1 = e2`: every pair of denotations is equal. A side without a
/// denotation makes the condition hold vacuously.
pub fn side_condition_holds(model: &StaticModel, rho: &Valuation, c: &SideCondition) -> bool {
    match (denote_expr(model, rho, &c.lhs), denote_expr(model, rho, &c.rhs)) {
        (Some(a), Some(b)) => a == b,
        _ => {
            VACUOUS_CONDITIONS.fetch_add(1, Ordering::Relaxed);
            true
        }
    }
}

fn conditions_hold(model: &StaticModel, rho: &Valuation, cs: &[SideCondition]) -> bool {
    cs.iter().all(|c| side_condition_holds(model, rho, c))
}

/// The least valuation satisfying `phi` against `g`, with domain exactly the
/// variables of `phi`.
///
/// Works in two passes: walk both trees collecting `(variable, subterm)`
/// constraints while checking the rigid structure, then group constraints by
/// variable and require each group to agree.
pub fn minimal_valuation(phi: &SymbolicTerm, g: &GroundTerm) -> Option<Valuation> {
    let mut constraints: Vec<(&Variable, &GroundTerm)> = Vec::new();
    let mut work = vec![(phi, g)];
    while let Some((p, t)) = work.pop() {
        match (p, t) {
            (Term::Leaf(SymLeaf::Var(v)), _) => constraints.push((v, t)),
            (Term::Leaf(SymLeaf::Builtin(b)), Term::Leaf(tb)) if b == tb => {}
            (Term::Node(s, ps), Term::Node(u, ts)) if s == u && ps.len() == ts.len() => {
                work.extend(ps.iter().zip(ts.iter()));
            }
            _ => return None,
        }
    }
    constraints.sort_by(|a, b| a.0.cmp(b.0));
    let mut rho = Valuation::new();
    for group in constraints.chunk_by(|a, b| a.0 == b.0) {
        let (v, first) = group[0];
        if group.iter().any(|(_, t)| *t != first) {
            return None;
        }
        rho.insert(v.clone(), first.clone());
    }
    Some(rho)
}

/// Denotation of an expression term: expression leaves are replaced by
/// their denotations.
pub fn denote_exprterm(model: &StaticModel, rho: &Valuation, t: &ExpressionTerm) -> Option<GroundTerm> {
    t.try_map_leaves(&mut |e| denote_expr(model, rho, e).ok_or(())).ok()
}

/// A rule index and valuation relating two ground terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rule: usize,
    pub valuation: Valuation,
}

/// Re-verifies a claimed step: the rule exists and the valuation satisfies
/// its left side against `g1`, its right side against `g2`, and all of its
/// side conditions.
pub fn verify_witness(
    model: &StaticModel,
    theory: &RewritingTheory,
    g1: &GroundTerm,
    g2: &GroundTerm,
    witness: &Witness,
) -> bool {
    theory.rule(witness.rule).is_some_and(|r| {
        let rho = &witness.valuation;
        sat_sym(rho, g1, &r.lhs) && sat_exprterm(model, rho, g2, &r.rhs) && conditions_hold(model, rho, &r.conditions)
    })
}

fn related_by(model: &StaticModel, rule: &RewritingRule, g1: &GroundTerm, g2: &GroundTerm) -> Option<Valuation> {
    // Well-formedness puts every variable of the right side and conditions
    // in the domain of the minimal valuation; extending it cannot change
    // any of the three judgements, so it decides the existential.
    let rho = minimal_valuation(&rule.lhs, g1)?;
    (conditions_hold(model, &rho, &rule.conditions) && sat_exprterm(model, &rho, g2, &rule.rhs)).then_some(rho)
}

/// `g1 ~> g2` by some rule of the theory.
pub fn step_related(
    model: &StaticModel,
    theory: &RewritingTheory,
    g1: &GroundTerm,
    g2: &GroundTerm,
) -> Option<Witness> {
    theory
        .rules()
        .iter()
        .enumerate()
        .find_map(|(rule, r)| related_by(model, r, g1, g2).map(|valuation| Witness { rule, valuation }))
}

/// `g1 ~a~> g2` for a specific action.
pub fn step_related_by_action(
    model: &StaticModel,
    theory: &RewritingTheory,
    g1: &GroundTerm,
    action: &ActionLabel,
    g2: &GroundTerm,
) -> Option<Witness> {
    theory
        .rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| &r.action == action)
        .find_map(|(rule, r)| related_by(model, r, g1, g2).map(|valuation| Witness { rule, valuation }))
}

/// All successors of `g`, one per applicable rule, in rule order.
pub fn successors(model: &StaticModel, theory: &RewritingTheory, g: &GroundTerm) -> Vec<(Witness, GroundTerm)> {
    theory
        .rules()
        .iter()
        .enumerate()
        .filter_map(|(rule, r)| {
            let rho = minimal_valuation(&r.lhs, g)?;
            if !conditions_hold(model, &rho, &r.conditions) {
                return None;
            }
            let next = denote_exprterm(model, &rho, &r.rhs)?;
            Some((Witness { rule, valuation: rho }, next))
        })
        .collect()
}

/// True when `g` has no successor.
pub fn is_stuck(model: &StaticModel, theory: &RewritingTheory, g: &GroundTerm) -> bool {
    successors(model, theory, g).is_empty()
}

/// `start ~w~> end`, given the intermediate terms of the trace.
///
/// `intermediates` must hold exactly `word.len() - 1` terms (none for the
/// empty word, which relates a term only to itself).
pub fn trace_related(
    model: &StaticModel,
    theory: &RewritingTheory,
    start: &GroundTerm,
    word: &[ActionLabel],
    intermediates: &[GroundTerm],
    end: &GroundTerm,
    mode: Execution,
) -> bool {
    if word.is_empty() {
        return intermediates.is_empty() && start == end;
    }
    if intermediates.len() + 1 != word.len() {
        return false;
    }
    let term_at = |i: usize| -> &GroundTerm {
        match i {
            0 => start,
            i if i <= intermediates.len() => &intermediates[i - 1],
            _ => end,
        }
    };
    par::first_failure(mode, word.len(), |i| {
        step_related_by_action(model, theory, term_at(i), &word[i], term_at(i + 1))
            .is_none()
            .then_some(())
    })
    .is_none()
}

/// One recorded interpreter step, as consumed by [`check_trace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: usize,
    pub valuation: Valuation,
    pub next: GroundTerm,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TraceViolation {
    #[error("step {index}: rule #{rule} with the reported valuation does not relate the two terms")]
    BadWitness { index: usize, rule: usize },
    #[error("step {index}: the terms are not related by any rule labelled `{action}`")]
    NotRelated { index: usize, action: ActionLabel },
}

impl TraceViolation {
    pub fn index(&self) -> usize {
        match self {
            TraceViolation::BadWitness { index, .. } | TraceViolation::NotRelated { index, .. } => *index,
        }
    }
}

/// Validates a recorded trace step by step: each reported witness must
/// re-verify, and the pair must be in the relation for the rule's action.
/// Returns the earliest violation.
pub fn check_trace(
    model: &StaticModel,
    theory: &RewritingTheory,
    start: &GroundTerm,
    steps: &[TraceStep],
    mode: Execution,
) -> Result<(), TraceViolation> {
    let failure = par::first_failure(mode, steps.len(), |i| {
        let before = if i == 0 { start } else { &steps[i - 1].next };
        let step = &steps[i];
        let witness = Witness {
            rule: step.rule,
            valuation: step.valuation.clone(),
        };
        if !verify_witness(model, theory, before, &step.next, &witness) {
            return Some(TraceViolation::BadWitness {
                index: i,
                rule: step.rule,
            });
        }
        let action = &theory.rules()[step.rule].action;
        step_related_by_action(model, theory, before, action, &step.next)
            .is_none()
            .then(|| TraceViolation::NotRelated {
                index: i,
                action: action.clone(),
            })
    });
    match failure {
        Some((_, v)) => Err(v),
        None => Ok(()),
    }
}
