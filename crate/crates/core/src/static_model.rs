//! The static model: interpretations of built-in function names.
//!
//! Every interpretation is total. Argument tuples of the wrong shape produce
//! the ground term `(@builtin-error)` instead of failing, so a language
//! definition can never make the model inconsistent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::term::{FunctionName, GroundTerm, Term};
use crate::value::BuiltinValue;

pub type BuiltinFn = Arc<dyn Fn(&[GroundTerm]) -> GroundTerm + Send + Sync>;

#[derive(Clone)]
struct Entry {
    arity: usize,
    interp: BuiltinFn,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("built-in function `{0}` is already registered")]
    Duplicate(FunctionName),
    #[error("unknown built-in function `{0}`")]
    UnknownFunction(FunctionName),
    #[error("built-in function `{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        name: FunctionName,
        expected: usize,
        got: usize,
    },
}

/// Table of built-in functions with fixed arities.
#[derive(Clone, Default)]
pub struct StaticModel {
    table: HashMap<FunctionName, Entry>,
}

impl fmt::Debug for StaticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.names().map(|n| (n, self.table[n].arity)))
            .finish()
    }
}

impl StaticModel {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registers `name` with a fixed arity. Names must be unique.
    pub fn register<F>(&mut self, name: &str, arity: usize, interp: F) -> Result<(), ModelError>
    where
        F: Fn(&[GroundTerm]) -> GroundTerm + Send + Sync + 'static,
    {
        if self.table.contains_key(name) {
            return Err(ModelError::Duplicate(FunctionName::new(name)));
        }
        self.table.insert(
            FunctionName::new(name),
            Entry {
                arity,
                interp: Arc::new(interp),
            },
        );
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.table.get(name).map(|e| e.arity)
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &FunctionName> {
        let mut names: Vec<_> = self.table.keys().collect();
        names.sort();
        names.into_iter()
    }

    pub fn apply(&self, name: &str, args: &[GroundTerm]) -> Result<GroundTerm, ModelError> {
        let entry = self
            .table
            .get(name)
            .ok_or_else(|| ModelError::UnknownFunction(FunctionName::new(name)))?;
        if entry.arity != args.len() {
            return Err(ModelError::ArityMismatch {
                name: FunctionName::new(name),
                expected: entry.arity,
                got: args.len(),
            });
        }
        Ok((entry.interp)(args))
    }
}

fn int(t: &GroundTerm) -> Option<&num_bigint::BigInt> {
    match t {
        Term::Leaf(BuiltinValue::Int(z)) => Some(z),
        _ => None,
    }
}

fn boolean(t: &GroundTerm) -> Option<bool> {
    match t {
        Term::Leaf(BuiltinValue::Bool(b)) => Some(*b),
        _ => None,
    }
}

fn string(t: &GroundTerm) -> Option<&str> {
    match t {
        Term::Leaf(BuiltinValue::Str(s)) => Some(s),
        _ => None,
    }
}

fn dict(t: &GroundTerm) -> Option<&Arc<BTreeMap<GroundTerm, GroundTerm>>> {
    match t {
        Term::Leaf(BuiltinValue::Dict(d)) => Some(d),
        _ => None,
    }
}

fn or_error(value: Option<GroundTerm>) -> GroundTerm {
    value.unwrap_or_else(GroundTerm::error)
}

fn int2(args: &[GroundTerm], f: impl Fn(&num_bigint::BigInt, &num_bigint::BigInt) -> GroundTerm) -> GroundTerm {
    or_error(int(&args[0]).zip(int(&args[1])).map(|(a, b)| f(a, b)))
}

fn bool2(args: &[GroundTerm], f: impl Fn(bool, bool) -> bool) -> GroundTerm {
    or_error(
        boolean(&args[0])
            .zip(boolean(&args[1]))
            .map(|(a, b)| GroundTerm::bool(f(a, b))),
    )
}

fn is_variant(args: &[GroundTerm], pred: fn(&BuiltinValue) -> bool) -> GroundTerm {
    GroundTerm::bool(args[0].as_builtin().is_some_and(pred))
}

/// The default model.
///
/// | arity | names |
/// |-------|-------|
/// | 0 | `bool.true`, `bool.false`, `map.empty`, `list.empty` |
/// | 1 | `z.is`, `bool.is`, `bool.neg`, `string.is`, `list.is`, `map.is`, `term.is_builtin` |
/// | 2 | `z.plus`, `z.minus`, `z.eq`, `z.le`, `z.lt`, `bool.and`, `bool.or`, `bool.eq`, `term.same_symbol`, `map.lookup`, `string.eq`, `list.cons` |
/// | 3 | `map.update` |
pub fn default_model() -> StaticModel {
    let mut m = StaticModel::empty();
    let mut reg = |name: &str, arity: usize, f: fn(&[GroundTerm]) -> GroundTerm| {
        m.register(name, arity, f).expect("default model names are unique");
    };

    reg("bool.true", 0, |_| GroundTerm::bool(true));
    reg("bool.false", 0, |_| GroundTerm::bool(false));
    reg("bool.is", 1, |a| is_variant(a, |b| matches!(b, BuiltinValue::Bool(_))));
    reg("bool.neg", 1, |a| {
        or_error(boolean(&a[0]).map(|b| GroundTerm::bool(!b)))
    });
    reg("bool.and", 2, |a| bool2(a, |x, y| x && y));
    reg("bool.or", 2, |a| bool2(a, |x, y| x || y));
    reg("bool.eq", 2, |a| bool2(a, |x, y| x == y));

    reg("z.is", 1, |a| is_variant(a, |b| matches!(b, BuiltinValue::Int(_))));
    reg("z.plus", 2, |a| int2(a, |x, y| GroundTerm::int(x + y)));
    reg("z.minus", 2, |a| int2(a, |x, y| GroundTerm::int(x - y)));
    reg("z.eq", 2, |a| int2(a, |x, y| GroundTerm::bool(x == y)));
    reg("z.le", 2, |a| int2(a, |x, y| GroundTerm::bool(x <= y)));
    reg("z.lt", 2, |a| int2(a, |x, y| GroundTerm::bool(x < y)));

    reg("string.is", 1, |a| is_variant(a, |b| matches!(b, BuiltinValue::Str(_))));
    reg("string.eq", 2, |a| {
        or_error(string(&a[0]).zip(string(&a[1])).map(|(x, y)| GroundTerm::bool(x == y)))
    });

    reg("list.is", 1, |a| is_variant(a, |b| matches!(b, BuiltinValue::List(_))));
    reg("list.empty", 0, |_| GroundTerm::builtin(BuiltinValue::list(Vec::new())));
    reg("list.cons", 2, |a| match &a[1] {
        Term::Leaf(BuiltinValue::List(items)) => {
            let mut out = Vec::with_capacity(items.len() + 1);
            out.push(a[0].clone());
            out.extend(items.iter().cloned());
            GroundTerm::builtin(BuiltinValue::list(out))
        }
        _ => GroundTerm::error(),
    });

    reg("map.is", 1, |a| is_variant(a, |b| matches!(b, BuiltinValue::Dict(_))));
    reg("map.empty", 0, |_| GroundTerm::builtin(BuiltinValue::dict([])));
    reg("map.update", 3, |a| {
        or_error(dict(&a[0]).map(|d| {
            let mut d = BTreeMap::clone(d);
            d.insert(a[1].clone(), a[2].clone());
            GroundTerm::builtin(BuiltinValue::Dict(Arc::new(d)))
        }))
    });
    reg("map.lookup", 2, |a| {
        or_error(dict(&a[0]).and_then(|d| d.get(&a[1]).cloned()))
    });

    reg("term.is_builtin", 1, |a| {
        GroundTerm::bool(matches!(a[0], Term::Leaf(_)))
    });
    reg("term.same_symbol", 2, |a| {
        GroundTerm::bool(matches!((&a[0], &a[1]), (Term::Node(s, _), Term::Node(t, _)) if s == t))
    });

    m
}
