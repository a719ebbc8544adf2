//! Generators and reference implementations shared by the property tests and
//! the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::sample::select;

pub mod checks;

use rwsem::semantics::{RewritingRule, RewritingTheory, SideCondition, Valuation};
use rwsem::{
    default_model, BuiltinValue, Expression, ExpressionTerm, FreeVars, GroundTerm, SymLeaf, SymbolicTerm, Term,
    Variable,
};

pub const VARS: [&str; 4] = ["X", "Y", "Z", "W"];

/// Ranked symbols used by the generators. `g` also shows up with the wrong
/// arity now and then so arity mismatches get exercised.
pub const SIGNATURE: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 3)];

pub fn builtin_leaf() -> impl Strategy<Value = BuiltinValue> {
    prop_oneof![
        4 => (-3i64..=3).prop_map(BuiltinValue::int),
        2 => any::<bool>().prop_map(BuiltinValue::Bool),
        1 => Just(BuiltinValue::Error),
        1 => "[ab]{0,2}".prop_map(BuiltinValue::string),
        1 => select(vec!["s", "t"]).prop_map(|s| BuiltinValue::Sym(s.into())),
    ]
}

fn node<L>(children: BoxedStrategy<Term<L>>) -> BoxedStrategy<Term<L>>
where
    L: Clone + std::fmt::Display + 'static,
{
    select(SIGNATURE.to_vec())
        .prop_flat_map(move |(s, n)| proptest::collection::vec(children.clone(), n).prop_map(move |c| Term::node(s, c)))
        .boxed()
}

pub fn ground_term() -> impl Strategy<Value = GroundTerm> {
    let leaf = prop_oneof![
        3 => builtin_leaf().prop_map(Term::Leaf),
        2 => select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            6 => node(inner.clone()),
            1 => proptest::collection::vec(inner.clone(), 0..3).prop_map(|c| Term::node("g", c)),
            1 => proptest::collection::vec(inner.clone(), 0..3)
                .prop_map(|c| GroundTerm::builtin(BuiltinValue::list(c))),
            1 => proptest::collection::vec((inner.clone(), inner), 0..3)
                .prop_map(|kv| GroundTerm::builtin(BuiltinValue::dict(kv))),
        ]
    })
}

pub fn pattern() -> impl Strategy<Value = SymbolicTerm> {
    let leaf = prop_oneof![
        4 => select(VARS.to_vec()).prop_map(SymbolicTerm::var),
        2 => builtin_leaf().prop_map(|b| Term::Leaf(SymLeaf::Builtin(b))),
        2 => select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            6 => node(inner.clone()),
            1 => proptest::collection::vec(inner, 0..3).prop_map(|c| Term::node("g", c)),
        ]
    })
}

/// A valuation over a random subset of [`VARS`].
pub fn valuation() -> impl Strategy<Value = Valuation> {
    proptest::collection::btree_map(select(VARS.to_vec()), ground_term(), 0..=VARS.len())
        .prop_map(|m| m.into_iter().map(|(v, g)| (Variable::new(v), g)).collect())
}

/// A valuation binding every variable in [`VARS`].
pub fn full_valuation() -> impl Strategy<Value = Valuation> {
    proptest::collection::vec(ground_term(), VARS.len())
        .prop_map(|gs| VARS.iter().zip(gs).map(|(v, g)| (Variable::new(*v), g)).collect())
}

fn model_functions() -> Vec<(String, usize)> {
    let model = default_model();
    model
        .names()
        .map(|n| (n.to_string(), model.arity(n.as_str()).unwrap()))
        .collect()
}

pub fn expression() -> impl Strategy<Value = Expression> {
    let functions = model_functions();
    let leaf = prop_oneof![
        3 => select(VARS.to_vec()).prop_map(Expression::var),
        2 => builtin_leaf().prop_map(|b| Expression::lit(Term::Leaf(b))),
        1 => select(vec!["a", "b"]).prop_map(|s| Expression::lit(Term::constant(s))),
    ];
    leaf.prop_recursive(3, 12, 3, move |inner| {
        select(functions.clone()).prop_flat_map(move |(name, arity)| {
            proptest::collection::vec(inner.clone(), arity).prop_map(move |args| Expression::call(name.clone(), args))
        })
    })
}

pub fn expression_term() -> impl Strategy<Value = ExpressionTerm> {
    let leaf = prop_oneof![
        3 => expression().prop_map(Term::Leaf),
        1 => select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(2, 8, 3, node)
}

pub fn side_condition() -> impl Strategy<Value = SideCondition> {
    prop_oneof![
        2 => expression().prop_map(|e| SideCondition::new(e, Expression::call("bool.true", vec![]))),
        1 => (expression(), expression()).prop_map(|(l, r)| SideCondition::new(l, r)),
    ]
}

fn house(e: &Expression, bound: &BTreeSet<Variable>) -> Expression {
    match e {
        Expression::Var(v) if !bound.contains(v) => match bound.iter().nth(v.as_str().len() % bound.len().max(1)) {
            Some(w) => Expression::Var(w.clone()),
            None => Expression::lit(Term::constant("a")),
        },
        Expression::Call(f, args) => Expression::Call(f.clone(), args.iter().map(|a| house(a, bound)).collect()),
        _ => e.clone(),
    }
}

/// A well-formed rule: right-hand-side and condition variables are mapped
/// into the variables of the left-hand side.
pub fn rule() -> impl Strategy<Value = RewritingRule> {
    (
        pattern(),
        expression_term(),
        proptest::collection::vec(side_condition(), 0..3),
        select(vec!["r0", "r1", "r2"]),
    )
        .prop_map(|(lhs, rhs, conditions, action)| {
            let bound = lhs.free_vars();
            let rhs = rhs.map_leaves(&mut |e| Term::Leaf(house(e, &bound)));
            let conditions = conditions
                .iter()
                .map(|c| SideCondition::new(house(&c.lhs, &bound), house(&c.rhs, &bound)))
                .collect();
            RewritingRule {
                lhs,
                rhs,
                conditions,
                action: action.into(),
            }
        })
}

pub fn theory() -> impl Strategy<Value = RewritingTheory> {
    proptest::collection::vec(rule(), 1..5)
        .prop_map(|rules| RewritingTheory::new(rules).expect("generated rules are well-formed"))
}

pub fn instantiate(phi: &SymbolicTerm, rho: &Valuation) -> Option<GroundTerm> {
    phi.try_map_leaves(&mut |l| match l {
        SymLeaf::Builtin(b) => Ok(Term::Leaf(b.clone())),
        SymLeaf::Var(v) => rho.get(v).cloned().ok_or(()),
    })
    .ok()
}

/// A theory with a term that is either random or an instance of one of the
/// theory's left-hand sides (so that rules actually fire).
pub fn theory_and_term() -> impl Strategy<Value = (RewritingTheory, GroundTerm)> {
    theory().prop_flat_map(|th| {
        let n = th.len();
        let lhss: Vec<SymbolicTerm> = th.rules().iter().map(|r| r.lhs.clone()).collect();
        let instance = (0..n, full_valuation())
            .prop_map(move |(i, rho)| instantiate(&lhss[i], &rho).expect("full valuation covers VARS"));
        let term = prop_oneof![1 => ground_term(), 2 => instance];
        (Just(th), term)
    })
}

/// A pattern and a valuation covering its variables (plus possibly others).
pub fn pattern_and_covering_valuation() -> impl Strategy<Value = (SymbolicTerm, Valuation)> {
    (pattern(), full_valuation(), valuation()).prop_map(|(phi, full, extra)| {
        let fv = phi.free_vars();
        let rho = full
            .restrict(&fv)
            .iter()
            .chain(extra.iter())
            .map(|(v, g)| (v.clone(), g.clone()))
            .collect();
        (phi, rho)
    })
}

/// Arithmetic IMP expressions over integer literals.
#[derive(Clone, Debug)]
pub enum Arith {
    Lit(i64),
    Plus(Box<Arith>, Box<Arith>),
    Minus(Box<Arith>, Box<Arith>),
}

impl Arith {
    pub fn depth(&self) -> usize {
        match self {
            Arith::Lit(_) => 0,
            Arith::Plus(a, b) | Arith::Minus(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn value(&self) -> BigInt {
        match self {
            Arith::Lit(n) => BigInt::from(*n),
            Arith::Plus(a, b) => a.value() + b.value(),
            Arith::Minus(a, b) => a.value() - b.value(),
        }
    }

    pub fn to_term(&self) -> GroundTerm {
        match self {
            Arith::Lit(n) => GroundTerm::int(*n),
            Arith::Plus(a, b) => Term::node("plus", vec![a.to_term(), b.to_term()]),
            Arith::Minus(a, b) => Term::node("minus", vec![a.to_term(), b.to_term()]),
        }
    }
}

pub fn arith() -> impl Strategy<Value = Arith> {
    (-1000i64..=1000)
        .prop_map(Arith::Lit)
        .prop_recursive(5, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Arith::Plus(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| Arith::Minus(Box::new(a), Box::new(b))),
            ]
        })
}

fn leaf(t: &GroundTerm) -> Option<&BuiltinValue> {
    match t {
        Term::Leaf(b) => Some(b),
        Term::Node(..) => None,
    }
}

fn int(t: &GroundTerm) -> Option<&BigInt> {
    match leaf(t)? {
        BuiltinValue::Int(z) => Some(z),
        _ => None,
    }
}

fn boolean(t: &GroundTerm) -> Option<bool> {
    match leaf(t)? {
        BuiltinValue::Bool(b) => Some(*b),
        _ => None,
    }
}

fn string(t: &GroundTerm) -> Option<&str> {
    match leaf(t)? {
        BuiltinValue::Str(s) => Some(s),
        _ => None,
    }
}

fn b(v: bool) -> GroundTerm {
    Term::Leaf(BuiltinValue::Bool(v))
}

fn err() -> GroundTerm {
    Term::Leaf(BuiltinValue::Error)
}

/// Whether `name` applied to `args` is ill-typed (or, for lookups, unbound).
pub fn expects_error(name: &str, args: &[GroundTerm]) -> bool {
    let is_dict = |t: &GroundTerm| matches!(leaf(t), Some(BuiltinValue::Dict(_)));
    match name {
        "z.plus" | "z.minus" | "z.eq" | "z.le" | "z.lt" => int(&args[0]).is_none() || int(&args[1]).is_none(),
        "bool.and" | "bool.or" | "bool.eq" => boolean(&args[0]).is_none() || boolean(&args[1]).is_none(),
        "bool.neg" => boolean(&args[0]).is_none(),
        "string.eq" => string(&args[0]).is_none() || string(&args[1]).is_none(),
        "list.cons" => !matches!(leaf(&args[1]), Some(BuiltinValue::List(_))),
        "map.update" => !is_dict(&args[0]),
        "map.lookup" => match leaf(&args[0]) {
            Some(BuiltinValue::Dict(d)) => d.get(&args[1]).is_none_or(|v| *v == err()),
            _ => true,
        },
        _ => false,
    }
}

/// Reference semantics of the default catalog, written independently of
/// the library.
pub fn reference_apply(name: &str, args: &[GroundTerm]) -> GroundTerm {
    if expects_error(name, args) {
        return err();
    }
    let zz = || (int(&args[0]).unwrap(), int(&args[1]).unwrap());
    let bb = || (boolean(&args[0]).unwrap(), boolean(&args[1]).unwrap());
    let variant = |k: &str| b(leaf(&args[0]).is_some_and(|v| v.kind() == k));
    match name {
        "bool.true" => b(true),
        "bool.false" => b(false),
        "bool.is" => variant("bool"),
        "bool.neg" => b(!boolean(&args[0]).unwrap()),
        "bool.and" => b(bb().0 & bb().1),
        "bool.or" => b(bb().0 | bb().1),
        "bool.eq" => b(bb().0 == bb().1),
        "z.is" => variant("int"),
        "z.plus" => Term::Leaf(BuiltinValue::Int(zz().0 + zz().1)),
        "z.minus" => Term::Leaf(BuiltinValue::Int(zz().0 - zz().1)),
        "z.eq" => b(zz().0 == zz().1),
        "z.le" => b(zz().0 <= zz().1),
        "z.lt" => b(zz().0 < zz().1),
        "string.is" => variant("string"),
        "string.eq" => b(string(&args[0]) == string(&args[1])),
        "list.is" => variant("list"),
        "list.empty" => Term::Leaf(BuiltinValue::List(Vec::new().into())),
        "list.cons" => {
            let Some(BuiltinValue::List(items)) = leaf(&args[1]) else {
                unreachable!()
            };
            let mut out = vec![args[0].clone()];
            out.extend(items.iter().cloned());
            Term::Leaf(BuiltinValue::List(out.into()))
        }
        "map.is" => variant("dict"),
        "map.empty" => Term::Leaf(BuiltinValue::dict(BTreeMap::new())),
        "map.update" => {
            let Some(BuiltinValue::Dict(d)) = leaf(&args[0]) else {
                unreachable!()
            };
            let mut d = (**d).clone();
            d.insert(args[1].clone(), args[2].clone());
            Term::Leaf(BuiltinValue::dict(d))
        }
        "map.lookup" => {
            let Some(BuiltinValue::Dict(d)) = leaf(&args[0]) else {
                unreachable!()
            };
            d[&args[1]].clone()
        }
        "term.is_builtin" => b(leaf(&args[0]).is_some()),
        "term.same_symbol" => b(match (&args[0], &args[1]) {
            (Term::Node(s, _), Term::Node(t, _)) => s == t,
            _ => false,
        }),
        other => panic!("no reference for `{other}`"),
    }
}

/// Small domain for exhaustive builtin checks: one or two inhabitants of
/// every kind of leaf plus a few nodes.
pub fn small_domain() -> Vec<GroundTerm> {
    let one = GroundTerm::int(1);
    vec![
        GroundTerm::int(-1),
        GroundTerm::int(0),
        one.clone(),
        b(true),
        b(false),
        err(),
        GroundTerm::string(""),
        GroundTerm::string("x"),
        Term::Leaf(BuiltinValue::Sym("s".into())),
        Term::Leaf(BuiltinValue::list(vec![])),
        Term::Leaf(BuiltinValue::list(vec![one.clone()])),
        Term::Leaf(BuiltinValue::dict([])),
        Term::Leaf(BuiltinValue::dict([(one.clone(), b(true))])),
        Term::Leaf(BuiltinValue::dict([(Term::constant("a"), err())])),
        Term::constant("a"),
        Term::node("f", vec![one]),
        Term::node("a", vec![b(false)]),
    ]
}

/// Every tuple of `domain` elements of length `n`.
pub fn tuples(domain: &[GroundTerm], n: usize) -> Vec<Vec<GroundTerm>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |x| {
                    let mut t = prefix.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect()
    })
}
