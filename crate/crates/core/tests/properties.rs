mod common;

use proptest::prelude::*;

use common::checks;
use common::*;
use rwsem::interpreter::{run, step, RunOptions};
use rwsem::semantics::{denote_expr, minimal_valuation, sat_expr, sat_sym, step_related, successors, verify_witness};
use rwsem::syntax::{parse_expression, parse_expression_term, parse_ground_term, parse_symbolic_term};
use rwsem::term::subst;
use rwsem::{default_model, FreeVars, SymbolicTerm, Variable};

proptest! {
    #[test]
    fn ground_terms_print_and_parse_back(g in ground_term()) {
        prop_assert_eq!(parse_ground_term(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn patterns_print_and_parse_back(p in pattern()) {
        prop_assert_eq!(parse_symbolic_term(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn expressions_print_and_parse_back(e in expression(), t in expression_term()) {
        prop_assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
        prop_assert_eq!(parse_expression_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn equality_agrees_with_order(a in ground_term(), b in ground_term()) {
        prop_assert_eq!(a == b, a.cmp(&b) == std::cmp::Ordering::Equal);
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn subst_of_absent_variable_is_identity(t in pattern(), u in pattern()) {
        let x = Variable::new("Q");
        prop_assert_eq!(subst(&t, &x, &u), t);
    }

    #[test]
    fn free_vars_of_subst(t in pattern(), u in pattern(), x in proptest::sample::select(VARS.to_vec())) {
        let x = Variable::new(x);
        let mut expected = t.free_vars();
        let had = expected.remove(&x);
        if had {
            expected.extend(u.free_vars());
        }
        prop_assert_eq!(subst(&t, &x, &u).free_vars(), expected);
    }

    #[test]
    fn size_counts_nodes_and_leaves(g in ground_term()) {
        fn count(g: &rwsem::GroundTerm) -> usize {
            1 + g.children().iter().map(count).sum::<usize>()
        }
        prop_assert_eq!(g.size(), count(&g));
    }

    #[test]
    fn sat_expr_agrees_with_denotation(rho in full_valuation(), e in expression(), g in ground_term()) {
        let model = default_model();
        let d = denote_expr(&model, &rho, &e);
        prop_assert!(d.is_some());
        let d = d.unwrap();
        prop_assert!(sat_expr(&model, &rho, &d, &e));
        prop_assert_eq!(sat_expr(&model, &rho, &g, &e), g == d);
    }

    #[test]
    fn satisfaction_is_monotone((phi, rho) in pattern_and_covering_valuation(), extra in valuation()) {
        let g = instantiate(&phi, &rho).unwrap();
        let mut bigger = rho.clone();
        for (v, t) in extra.iter() {
            if bigger.get(v).is_none() {
                bigger.insert(v.clone(), t.clone());
            }
        }
        prop_assert!(sat_sym(&rho, &g, &phi));
        prop_assert!(sat_sym(&bigger, &g, &phi));
    }

    #[test]
    fn minimal_valuation_is_the_restriction((phi, rho) in pattern_and_covering_valuation()) {
        let g = instantiate(&phi, &rho).unwrap();
        let fv = phi.free_vars();
        prop_assert_eq!(minimal_valuation(&phi, &g), Some(rho.restrict(&fv)));
    }

    #[test]
    fn oracle_witnesses_reverify((th, g) in theory_and_term()) {
        let model = default_model();
        for (w, next) in successors(&model, &th, &g) {
            prop_assert!(verify_witness(&model, &th, &g, &next, &w));
            prop_assert!(step_related(&model, &th, &g, &next).is_some());
        }
    }

    #[test]
    fn interpreter_is_sound((th, g) in theory_and_term()) {
        checks::soundness(&default_model(), &th, &g)?;
    }

    #[test]
    fn interpreter_is_complete((th, g) in theory_and_term()) {
        checks::completeness(&default_model(), &th, &g)?;
    }

    #[test]
    fn step_is_deterministic((th, g) in theory_and_term()) {
        let model = default_model();
        prop_assert_eq!(step(&model, &th, &g).unwrap(), step(&model, &th, &g).unwrap());
    }

    #[test]
    fn run_bookkeeping((th, g) in theory_and_term(), fuel in 0u64..6) {
        let model = default_model();
        let r = run(&model, &th, g.clone(), RunOptions::with_fuel(fuel)).unwrap();
        prop_assert_eq!(r.steps_taken as usize, r.action_word.len());
        prop_assert_eq!(r.rule_counts.iter().sum::<u64>(), r.steps_taken);
        prop_assert_eq!(r.exhausted, !successors(&model, &th, &r.final_term).is_empty());
        if r.exhausted {
            prop_assert_eq!(r.steps_taken, fuel);
        }
    }

    #[test]
    fn match_is_sound(phi in pattern(), g in ground_term()) {
        checks::match_sound(&phi, &g)?;
    }

    #[test]
    fn match_is_complete((phi, rho) in pattern_and_covering_valuation()) {
        checks::match_complete(&phi, &rho)?;
    }

    #[test]
    fn conditions_agree(rho in valuation(), cs in proptest::collection::vec(side_condition(), 0..4)) {
        checks::conditions_agree(&default_model(), &rho, &cs)?;
    }

    #[test]
    fn evaluate_agrees(rho in valuation(), t in expression_term(), other in ground_term()) {
        checks::evaluate_agrees(&default_model(), &rho, &t, &other)?;
    }

    #[test]
    fn builtins_match_reference(
        f in proptest::sample::select(default_model().names().map(|n| n.to_string()).collect::<Vec<_>>()),
        args in proptest::collection::vec(ground_term(), 3),
    ) {
        let model = default_model();
        let n = model.arity(&f).unwrap();
        checks::builtin_matches_reference(&model, &f, &args[..n])?;
    }

    #[test]
    fn dict_laws(
        entries in proptest::collection::vec((ground_term(), ground_term()), 0..4),
        k in ground_term(), k2 in ground_term(), v in ground_term(), w in ground_term(),
    ) {
        let d = rwsem::GroundTerm::builtin(rwsem::BuiltinValue::dict(entries));
        checks::dict_laws(&default_model(), &d, &k, &k2, &v, &w)?;
    }
}

#[test]
fn generated_theories_fire_often_enough() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;

    let model = default_model();
    let mut runner = TestRunner::deterministic();
    let strategy = theory_and_term();
    let stepped = (0..500)
        .filter(|_| {
            let (th, g) = strategy.new_tree(&mut runner).unwrap().current();
            !successors(&model, &th, &g).is_empty()
        })
        .count();
    assert!(stepped >= 50, "only {stepped} of 500 generated pairs can step");
}

#[test]
fn bare_symbols_are_nullary_nodes() {
    assert_eq!(parse_symbolic_term("s").unwrap(), SymbolicTerm::constant("s"));
}
