use std::collections::{BTreeSet, HashSet};

use super::{Diagnostic, DiagnosticKind, EvaluationContext, Frame, LanguageDefinition, StrictnessDecl, ValuePredicate};
use crate::semantics::{ActionLabel, RewritingRule, RewritingTheory, SideCondition};
use crate::static_model::StaticModel;
use crate::term::{subst, Expression, ExpressionTerm, FreeVars, SymLeaf, Symbol, SymbolicTerm, Term, Variable};

/// User symbols may not start with this.
pub const FREEZER_PREFIX: &str = "freezer.";

const CSEQ: &str = "builtin.cseq";
const BOOL_TRUE: &str = "bool.true";
const BOOL_NEG: &str = "bool.neg";

/// The freezer symbol remembering the other children of `symbol` while the
/// child at `position` is evaluated.
pub fn freezer_symbol(symbol: &Symbol, position: usize) -> Symbol {
    format!("{FREEZER_PREFIX}{symbol}.{position}").into()
}

/// One generated freezer: `name` has arity `arity - 1` and stands for
/// `symbol` with its child at `position` removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreezerInfo {
    pub name: Symbol,
    pub symbol: Symbol,
    pub arity: usize,
    pub position: usize,
}

pub fn freezer_table(def: &LanguageDefinition) -> Vec<FreezerInfo> {
    def.strictness
        .iter()
        .flat_map(|d| {
            d.positions.iter().map(|&p| FreezerInfo {
                name: freezer_symbol(&d.symbol, p),
                symbol: d.symbol.clone(),
                arity: d.arity,
                position: p,
            })
        })
        .collect()
}

/// `where e` becomes the single condition `e == bool.true()`.
pub fn desugar_guard(guard: Option<&Expression>) -> Vec<SideCondition> {
    guard
        .map(|e| vec![SideCondition::new(e.clone(), Expression::call(BOOL_TRUE, vec![]))])
        .unwrap_or_default()
}

/// Wraps both sides of a rule into the frame template.
pub fn apply_frame(frame: &Frame, lhs: &SymbolicTerm, rhs: &ExpressionTerm) -> (SymbolicTerm, ExpressionTerm) {
    let lhs = subst(&frame.template, &frame.hole, lhs);
    let rhs = plug_eterm(&frame.template.to_expression_term(), &frame.hole, rhs);
    (lhs, rhs)
}

fn plug_eterm(template: &ExpressionTerm, hole: &Variable, filler: &ExpressionTerm) -> ExpressionTerm {
    match template {
        Term::Leaf(Expression::Var(v)) if v == hole => filler.clone(),
        Term::Leaf(_) => template.clone(),
        Term::Node(s, children) => Term::Node(
            s.clone(),
            children.iter().map(|c| plug_eterm(c, hole, filler)).collect(),
        ),
    }
}

fn count_var(t: &SymbolicTerm, x: &Variable) -> usize {
    let mut n = 0;
    t.for_each_leaf(&mut |l| {
        if matches!(l, SymLeaf::Var(v) if v == x) {
            n += 1;
        }
    });
    n
}

fn fresh(base: &str, avoid: &BTreeSet<Variable>) -> Variable {
    let mut name = base.to_string();
    while avoid.contains(name.as_str()) {
        name.push('_');
    }
    name.into()
}

/// Heating and cooling rules for one strictness declaration, position by
/// position in listed order.
///
/// For position `p` of `s` with context `C[H]`:
///
/// ```text
/// heat.s.p: C[cseq[s[X0..Xn-1], REST]] => C[cseq[Xp, cseq[freezer.s.p[X0..Xn-1 without Xp], REST]]]
///           where bool.neg(value(Xp))
/// cool.s.p: the converse, where value(Xp)
/// ```
pub fn expand_strictness(
    decl: &StrictnessDecl,
    context: &EvaluationContext,
    value: &ValuePredicate,
) -> Vec<RewritingRule> {
    let avoid = context.template.free_vars();
    let xs: Vec<Variable> = (0..decl.arity).map(|i| fresh(&format!("X{i}"), &avoid)).collect();
    let rest = fresh("REST", &avoid);
    let rest_t = SymbolicTerm::var(rest);
    let plug = |t: SymbolicTerm| subst(&context.template, &context.hole, &t);
    let cseq = |head: SymbolicTerm, tail: SymbolicTerm| Term::node(CSEQ, vec![head, tail]);

    let mut rules = Vec::with_capacity(2 * decl.positions.len());
    for &p in &decl.positions {
        let whole = Term::node(decl.symbol.clone(), xs.iter().cloned().map(SymbolicTerm::var).collect());
        let others = xs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, x)| SymbolicTerm::var(x.clone()))
            .collect();
        let frozen = Term::node(freezer_symbol(&decl.symbol, p), others);
        let unfrozen = plug(cseq(whole, rest_t.clone()));
        let heated = plug(cseq(SymbolicTerm::var(xs[p].clone()), cseq(frozen, rest_t.clone())));
        let is_value = value.expr.rename(&value.var, &xs[p]);
        let truth = Expression::call(BOOL_TRUE, vec![]);

        rules.push(RewritingRule {
            rhs: heated.to_expression_term(),
            lhs: unfrozen.clone(),
            conditions: vec![SideCondition::new(
                Expression::call(BOOL_NEG, vec![is_value.clone()]),
                truth.clone(),
            )],
            action: format!("heat.{}.{p}", decl.symbol).into(),
        });
        rules.push(RewritingRule {
            rhs: unfrozen.to_expression_term(),
            lhs: heated,
            conditions: vec![SideCondition::new(is_value, truth)],
            action: format!("cool.{}.{p}", decl.symbol).into(),
        });
    }
    rules
}

struct Checker<'a> {
    model: &'a StaticModel,
    errors: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn calls(&mut self, owner: &str, pos: crate::syntax::Pos, e: &Expression) {
        e.for_each_call(&mut |name, got| match self.model.arity(name.as_str()) {
            None => self.errors.push(Diagnostic::at(
                pos,
                DiagnosticKind::UnknownFunction {
                    owner: owner.to_string(),
                    name: name.to_string(),
                },
            )),
            Some(expected) if expected != got => self.errors.push(Diagnostic::at(
                pos,
                DiagnosticKind::ArityMismatch {
                    owner: owner.to_string(),
                    name: name.to_string(),
                    expected,
                    got,
                },
            )),
            Some(_) => {}
        });
    }

    fn hole_once(&mut self, owner: String, pos: crate::syntax::Pos, template: &SymbolicTerm, hole: &Variable) {
        let count = count_var(template, hole);
        if count != 1 {
            self.errors.push(Diagnostic::at(
                pos,
                DiagnosticKind::HoleCount {
                    owner,
                    hole: hole.clone(),
                    count,
                },
            ));
        }
    }
}

fn reserved_symbols(lhs: &SymbolicTerm, rhs: &ExpressionTerm) -> BTreeSet<Symbol> {
    let mut found = BTreeSet::new();
    let mut visit = |s: &Symbol| {
        if s.as_str().starts_with(FREEZER_PREFIX) {
            found.insert(s.clone());
        }
    };
    lhs.for_each_symbol(&mut visit);
    rhs.for_each_symbol(&mut visit);
    rhs.for_each_leaf(&mut |e| literal_symbols(e, &mut visit));
    found
}

fn literal_symbols(e: &Expression, visit: &mut impl FnMut(&Symbol)) {
    match e {
        Expression::Ground(g) => g.for_each_symbol(visit),
        Expression::Var(_) => {}
        Expression::Call(_, args) => args.iter().for_each(|a| literal_symbols(a, visit)),
    }
}

/// Checks and translates a parsed definition. Generated strictness rules come
/// first, then user rules in file order. All problems found are reported.
pub fn compile_definition(def: &LanguageDefinition, model: &StaticModel) -> Result<RewritingTheory, Vec<Diagnostic>> {
    let mut ck = Checker {
        model,
        errors: Vec::new(),
    };

    for frame in &def.frames {
        ck.hole_once(
            format!("frame `{}`", frame.name),
            frame.pos,
            &frame.template,
            &frame.hole,
        );
    }
    if let Some(ctx) = &def.context {
        ck.hole_once("`@context`".to_string(), ctx.pos, &ctx.template, &ctx.hole);
    }
    if let Some(value) = &def.value {
        for found in value.expr.free_vars() {
            if found != value.var {
                ck.errors.push(Diagnostic::at(
                    value.pos,
                    DiagnosticKind::ValueVariable {
                        expected: value.var.clone(),
                        found,
                    },
                ));
            }
        }
        ck.calls("`@value`", value.pos, &value.expr);
    }

    let mut generated = Vec::new();
    if let Some(first) = def.strictness.first() {
        for (missing, present) in [("value", def.value.is_some()), ("context", def.context.is_some())] {
            if !present {
                ck.errors
                    .push(Diagnostic::at(first.pos, DiagnosticKind::MissingDeclaration(missing)));
            }
        }
        let mut seen = HashSet::new();
        for decl in &def.strictness {
            if !seen.insert(&decl.symbol) {
                ck.errors.push(Diagnostic::at(
                    decl.pos,
                    DiagnosticKind::DuplicateStrictness(decl.symbol.clone()),
                ));
            }
            let mut positions = HashSet::new();
            for &position in &decl.positions {
                let symbol = decl.symbol.clone();
                if position >= decl.arity {
                    ck.errors.push(Diagnostic::at(
                        decl.pos,
                        DiagnosticKind::PositionOutOfRange {
                            symbol,
                            position,
                            arity: decl.arity,
                        },
                    ));
                } else if !positions.insert(position) {
                    ck.errors.push(Diagnostic::at(
                        decl.pos,
                        DiagnosticKind::DuplicatePosition { symbol, position },
                    ));
                }
            }
        }
        if let (Some(ctx), Some(value), true) = (&def.context, &def.value, ck.errors.is_empty()) {
            for decl in &def.strictness {
                generated.extend(expand_strictness(decl, ctx, value));
            }
        }
    }

    let generated_labels: HashSet<ActionLabel> = generated.iter().map(|r| r.action.clone()).collect();
    let mut user = Vec::with_capacity(def.rules.len());
    for rule in &def.rules {
        let label = &rule.label;
        if generated_labels.contains(label) {
            ck.errors
                .push(Diagnostic::at(rule.pos, DiagnosticKind::DuplicateLabel(label.clone())));
        }
        for symbol in reserved_symbols(&rule.lhs, &rule.rhs) {
            ck.errors.push(Diagnostic::at(
                rule.pos,
                DiagnosticKind::ReservedSymbol {
                    rule: label.clone(),
                    symbol,
                },
            ));
        }
        let owner = format!("rule `{label}`");
        rule.rhs.for_each_leaf(&mut |e| ck.calls(&owner, rule.pos, e));
        if let Some(g) = &rule.guard {
            ck.calls(&owner, rule.pos, g);
        }

        let (lhs, rhs) = match &rule.frame {
            None => (rule.lhs.clone(), rule.rhs.clone()),
            Some(name) => match def.frame(name) {
                None => {
                    ck.errors.push(Diagnostic::at(
                        rule.pos,
                        DiagnosticKind::UnknownFrame {
                            rule: label.clone(),
                            frame: name.clone(),
                        },
                    ));
                    continue;
                }
                Some(frame) => {
                    let mut frame_vars = frame.template.free_vars();
                    frame_vars.remove(&frame.hole);
                    let mut rule_vars = rule.lhs.free_vars();
                    rule.rhs.collect_vars(&mut rule_vars);
                    rule.guard.collect_vars(&mut rule_vars);
                    for var in rule_vars.intersection(&frame_vars) {
                        ck.errors.push(Diagnostic::at(
                            rule.pos,
                            DiagnosticKind::FrameCapture {
                                rule: label.clone(),
                                frame: name.clone(),
                                var: var.clone(),
                            },
                        ));
                    }
                    apply_frame(frame, &rule.lhs, &rule.rhs)
                }
            },
        };
        let compiled = RewritingRule {
            lhs,
            rhs,
            conditions: desugar_guard(rule.guard.as_ref()),
            action: label.clone(),
        };
        for var in compiled.unhoused_variables() {
            ck.errors.push(Diagnostic::at(
                rule.pos,
                DiagnosticKind::Unhoused {
                    rule: label.clone(),
                    var,
                },
            ));
        }
        user.push(compiled);
    }

    if !ck.errors.is_empty() {
        return Err(ck.errors);
    }
    generated.extend(user);
    RewritingTheory::new(generated).map_err(|e| {
        vec![Diagnostic {
            pos: None,
            kind: DiagnosticKind::Unhoused {
                rule: e.action,
                var: e.variable,
            },
        }]
    })
}
