//! First-order terms over an arbitrary leaf type.
//!
//! Three instantiations are used throughout the crate:
//!
//! * [`GroundTerm`]: leaves are built-in values; program configurations.
//! * [`SymbolicTerm`]: leaves are built-in values or variables; rule left-hand sides.
//! * [`ExpressionTerm`]: leaves are [`Expression`]s; rule right-hand sides.
//!
//! Terms are immutable. Child lists live behind an [`Arc`], so cloning a term
//! is cheap and terms can be shared freely between threads.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::value::BuiltinValue;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                $name(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

pub(crate) use name_type;

name_type!(
    /// Head symbol of a term node, e.g. `plus` or `builtin.cseq`.
    Symbol
);
name_type!(
    /// A rule variable. Only the frontend cares that variables start uppercase.
    Variable
);
name_type!(
    /// Name of a built-in function registered in a static model.
    FunctionName
);

/// A leaf or a symbol applied to an ordered list of children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term<L> {
    Leaf(L),
    Node(Symbol, Arc<[Term<L>]>),
}

pub type GroundTerm = Term<BuiltinValue>;
pub type SymbolicTerm = Term<SymLeaf>;
pub type ExpressionTerm = Term<Expression>;

impl<L> Term<L> {
    pub fn node(symbol: impl Into<Symbol>, children: Vec<Term<L>>) -> Self {
        Term::Node(symbol.into(), children.into())
    }

    /// Nullary application `s[]`.
    pub fn constant(symbol: impl Into<Symbol>) -> Self {
        Term::Node(symbol.into(), Arc::from(Vec::new()))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node(_, children) => 1 + children.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node(_, children) => 1 + children.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Leaf(_) => None,
            Term::Node(s, _) => Some(s),
        }
    }

    pub fn children(&self) -> &[Term<L>] {
        match self {
            Term::Leaf(_) => &[],
            Term::Node(_, children) => children,
        }
    }

    /// Rebuilds the term with every leaf mapped through `f`.
    pub fn map_leaves<M>(&self, f: &mut impl FnMut(&L) -> Term<M>) -> Term<M> {
        match self {
            Term::Leaf(l) => f(l),
            Term::Node(s, children) => Term::Node(s.clone(), children.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    /// Fallible variant of [`Term::map_leaves`]; stops at the first error.
    pub fn try_map_leaves<M, E>(&self, f: &mut impl FnMut(&L) -> Result<Term<M>, E>) -> Result<Term<M>, E> {
        match self {
            Term::Leaf(l) => f(l),
            Term::Node(s, children) => {
                let mapped = children
                    .iter()
                    .map(|c| c.try_map_leaves(f))
                    .collect::<Result<Vec<_>, E>>()?;
                Ok(Term::Node(s.clone(), mapped.into()))
            }
        }
    }

    /// Visits every leaf left to right.
    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a L)) {
        match self {
            Term::Leaf(l) => f(l),
            Term::Node(_, children) => children.iter().for_each(|c| c.for_each_leaf(f)),
        }
    }

    /// Visits every node symbol, pre-order.
    pub fn for_each_symbol<'a>(&'a self, f: &mut impl FnMut(&'a Symbol)) {
        if let Term::Node(s, children) = self {
            f(s);
            children.iter().for_each(|c| c.for_each_symbol(f));
        }
    }
}

impl GroundTerm {
    pub fn builtin(value: BuiltinValue) -> Self {
        Term::Leaf(value)
    }

    pub fn int(z: impl Into<num_bigint::BigInt>) -> Self {
        Term::Leaf(BuiltinValue::Int(z.into()))
    }

    pub fn bool(b: bool) -> Self {
        Term::Leaf(BuiltinValue::Bool(b))
    }

    pub fn string(s: impl AsRef<str>) -> Self {
        Term::Leaf(BuiltinValue::Str(Arc::from(s.as_ref())))
    }

    pub fn error() -> Self {
        Term::Leaf(BuiltinValue::Error)
    }

    pub fn as_builtin(&self) -> Option<&BuiltinValue> {
        match self {
            Term::Leaf(b) => Some(b),
            Term::Node(..) => None,
        }
    }

    /// Embeds a ground term as a symbolic term (no variables).
    pub fn to_symbolic(&self) -> SymbolicTerm {
        self.map_leaves(&mut |b| Term::Leaf(SymLeaf::Builtin(b.clone())))
    }

    /// Embeds a ground term as an expression term whose leaves are literals.
    pub fn to_expression_term(&self) -> ExpressionTerm {
        self.map_leaves(&mut |b| Term::Leaf(Expression::Ground(Term::Leaf(b.clone()))))
    }

    /// Replaces every nullary node headed by `symbol` with `replacement`.
    pub fn replace_constant(&self, symbol: &Symbol, replacement: &GroundTerm) -> GroundTerm {
        match self {
            Term::Leaf(_) => self.clone(),
            Term::Node(s, children) if s == symbol && children.is_empty() => replacement.clone(),
            Term::Node(s, children) => Term::Node(
                s.clone(),
                children
                    .iter()
                    .map(|c| c.replace_constant(symbol, replacement))
                    .collect(),
            ),
        }
    }
}

/// Leaf of a symbolic term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymLeaf {
    Builtin(BuiltinValue),
    Var(Variable),
}

impl SymbolicTerm {
    pub fn var(name: impl Into<Variable>) -> Self {
        Term::Leaf(SymLeaf::Var(name.into()))
    }

    /// Returns the ground term when the symbolic term has no variables.
    pub fn to_ground(&self) -> Option<GroundTerm> {
        self.try_map_leaves(&mut |l| match l {
            SymLeaf::Builtin(b) => Ok(Term::Leaf(b.clone())),
            SymLeaf::Var(_) => Err(()),
        })
        .ok()
    }

    /// Embeds a pattern as an expression term: variables become variable
    /// expressions and builtins become literals.
    pub fn to_expression_term(&self) -> ExpressionTerm {
        self.map_leaves(&mut |l| {
            Term::Leaf(match l {
                SymLeaf::Builtin(b) => Expression::Ground(Term::Leaf(b.clone())),
                SymLeaf::Var(v) => Expression::Var(v.clone()),
            })
        })
    }
}

/// Replaces every leaf occurrence of `x` in `t` by `replacement`.
pub fn subst(t: &SymbolicTerm, x: &Variable, replacement: &SymbolicTerm) -> SymbolicTerm {
    t.map_leaves(&mut |leaf| match leaf {
        SymLeaf::Var(v) if v == x => replacement.clone(),
        other => Term::Leaf(other.clone()),
    })
}

/// Right-hand-side building block: a literal, a variable, or a call of a
/// built-in function.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expression {
    Ground(GroundTerm),
    Var(Variable),
    Call(FunctionName, Vec<Expression>),
}

impl Expression {
    pub fn var(name: impl Into<Variable>) -> Self {
        Expression::Var(name.into())
    }

    pub fn call(name: impl Into<FunctionName>, args: Vec<Expression>) -> Self {
        Expression::Call(name.into(), args)
    }

    pub fn lit(g: GroundTerm) -> Self {
        Expression::Ground(g)
    }

    /// Renames free occurrences of `from` to the variable `to`.
    pub fn rename(&self, from: &Variable, to: &Variable) -> Expression {
        match self {
            Expression::Var(v) if v == from => Expression::Var(to.clone()),
            Expression::Ground(_) | Expression::Var(_) => self.clone(),
            Expression::Call(f, args) => Expression::Call(f.clone(), args.iter().map(|a| a.rename(from, to)).collect()),
        }
    }

    /// Visits every call site, outermost first.
    pub fn for_each_call<'a>(&'a self, f: &mut impl FnMut(&'a FunctionName, usize)) {
        if let Expression::Call(name, args) = self {
            f(name, args.len());
            args.iter().for_each(|a| a.for_each_call(f));
        }
    }
}

/// Anything that mentions variables.
pub trait FreeVars {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>);

    fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

impl FreeVars for SymLeaf {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        if let SymLeaf::Var(v) = self {
            out.insert(v.clone());
        }
    }
}

impl FreeVars for BuiltinValue {
    fn collect_vars(&self, _out: &mut BTreeSet<Variable>) {}
}

impl FreeVars for Expression {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Expression::Ground(_) => {}
            Expression::Var(v) => {
                out.insert(v.clone());
            }
            Expression::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl<L: FreeVars> FreeVars for Term<L> {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.for_each_leaf(&mut |l| l.collect_vars(out));
    }
}

impl<T: FreeVars> FreeVars for [T] {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.iter().for_each(|t| t.collect_vars(out));
    }
}

impl<T: FreeVars> FreeVars for Option<T> {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        if let Some(t) = self {
            t.collect_vars(out);
        }
    }
}

impl<T: FreeVars> FreeVars for Vec<T> {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.as_slice().collect_vars(out);
    }
}

impl<A: FreeVars, B: FreeVars> FreeVars for (A, B) {
    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        self.0.collect_vars(out);
        self.1.collect_vars(out);
    }
}
