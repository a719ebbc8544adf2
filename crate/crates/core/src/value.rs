use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::term::{GroundTerm, Symbol};

/// Built-in values that may appear as leaves of ground terms.
///
/// The derived order (variant first, then payload) is the canonical order
/// used for printing and for dictionary keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinValue {
    Error,
    Bool(bool),
    Int(BigInt),
    Sym(Symbol),
    Str(Arc<str>),
    List(Arc<[GroundTerm]>),
    Dict(Arc<BTreeMap<GroundTerm, GroundTerm>>),
}

impl BuiltinValue {
    pub fn int(z: impl Into<BigInt>) -> Self {
        BuiltinValue::Int(z.into())
    }

    pub fn string(s: impl AsRef<str>) -> Self {
        BuiltinValue::Str(Arc::from(s.as_ref()))
    }

    pub fn list(items: Vec<GroundTerm>) -> Self {
        BuiltinValue::List(items.into())
    }

    pub fn dict(entries: impl IntoIterator<Item = (GroundTerm, GroundTerm)>) -> Self {
        BuiltinValue::Dict(Arc::new(entries.into_iter().collect()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BuiltinValue::Error => "error",
            BuiltinValue::Bool(_) => "bool",
            BuiltinValue::Int(_) => "int",
            BuiltinValue::Sym(_) => "symbol",
            BuiltinValue::Str(_) => "string",
            BuiltinValue::List(_) => "list",
            BuiltinValue::Dict(_) => "dict",
        }
    }
}
