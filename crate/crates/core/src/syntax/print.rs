//! Canonical textual forms. Everything printed here parses back to the same
//! value with the parsers in [`super`].

use std::fmt::{self, Write};

use crate::semantics::{RewritingRule, SideCondition};
use crate::term::{Expression, SymLeaf, Term};
use crate::value::BuiltinValue;

pub(crate) fn write_string_literal(f: &mut impl Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

fn write_separated<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for BuiltinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinValue::Error => f.write_str("(@builtin-error)"),
            BuiltinValue::Bool(b) => write!(f, "(@builtin-bool {b})"),
            BuiltinValue::Int(z) => write!(f, "(@builtin-int {z})"),
            BuiltinValue::Sym(s) => write!(f, "(@builtin-symbol {s})"),
            BuiltinValue::Str(s) => {
                f.write_str("(@builtin-string ")?;
                write_string_literal(f, s)?;
                f.write_char(')')
            }
            BuiltinValue::List(items) => {
                f.write_str("(@builtin-list [")?;
                write_separated(f, items)?;
                f.write_str("])")
            }
            BuiltinValue::Dict(entries) => {
                f.write_str("(@builtin-dict [")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{k}|->{v}")?;
                }
                f.write_str("])")
            }
        }
    }
}

impl fmt::Debug for BuiltinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<L: fmt::Display> fmt::Display for Term<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(l) => l.fmt(f),
            Term::Node(s, children) => {
                write!(f, "{s}[")?;
                write_separated(f, children)?;
                f.write_char(']')
            }
        }
    }
}

impl<L: fmt::Display> fmt::Debug for Term<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SymLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymLeaf::Builtin(b) => b.fmt(f),
            SymLeaf::Var(v) => v.fmt(f),
        }
    }
}

impl fmt::Debug for SymLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Ground(Term::Leaf(b)) => b.fmt(f),
            // Quoted so that it is not read back as an expression-term node.
            Expression::Ground(g) => write!(f, "[{g}]"),
            Expression::Var(v) => v.fmt(f),
            Expression::Call(name, args) => {
                write!(f, "{name}(")?;
                write_separated(f, args)?;
                f.write_char(')')
            }
        }
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.lhs, self.rhs)
    }
}

/// `lhs => rhs where l1 == r1, l2 == r2`; the `where` part is omitted when
/// there are no conditions.
impl fmt::Display for RewritingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.lhs, self.rhs)?;
        for (i, c) in self.conditions.iter().enumerate() {
            f.write_str(if i == 0 { " where " } else { ", " })?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
