//! Property bodies. Each returns `Err` with a counterexample description.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use rwsem::interpreter::{evaluate, evaluate_condition, step, try_match, StepOutcome};
use rwsem::semantics::{
    sat_exprterm, sat_sym, side_condition_holds, step_related, successors, verify_witness, RewritingTheory,
    SideCondition, Valuation, Witness,
};
use rwsem::static_model::StaticModel;
use rwsem::{FreeVars, GroundTerm, SymbolicTerm};

use super::{expects_error, reference_apply, ExpressionTerm};

/// Soundness: every interpreter step is a step of the relation,
/// with the reported rule and valuation as witness.
pub fn soundness(model: &StaticModel, th: &RewritingTheory, g: &GroundTerm) -> Result<(), TestCaseError> {
    let outcome = step(model, th, g).map_err(|e| TestCaseError::fail(format!("interpreter error: {e}")))?;
    if let StepOutcome::Stepped {
        next, rule, valuation, ..
    } = outcome
    {
        let witness = Witness { rule, valuation };
        prop_assert!(
            verify_witness(model, th, g, &next, &witness),
            "reported witness does not verify: {g} -> {next} by #{rule}"
        );
        prop_assert!(step_related(model, th, g, &next).is_some(), "{g} -> {next} not related");
    }
    Ok(())
}

/// Completeness: if the relation has a successor, the interpreter
/// steps (and the other way round).
pub fn completeness(model: &StaticModel, th: &RewritingTheory, g: &GroundTerm) -> Result<(), TestCaseError> {
    let oracle_has_successor = !successors(model, th, g).is_empty();
    let outcome = step(model, th, g).map_err(|e| TestCaseError::fail(format!("interpreter error: {e}")))?;
    let stepped = matches!(outcome, StepOutcome::Stepped { .. });
    prop_assert_eq!(oracle_has_successor, stepped, "on {}", g);
    Ok(())
}

/// A successful match satisfies the pattern.
pub fn match_sound(phi: &SymbolicTerm, g: &GroundTerm) -> Result<(), TestCaseError> {
    if let Some(rho) = try_match(phi, g) {
        prop_assert!(sat_sym(&rho, g, phi), "{rho} does not satisfy {phi} against {g}");
        prop_assert_eq!(rho.domain(), phi.free_vars());
    }
    Ok(())
}

/// Matching an instance recovers the instantiating valuation,
/// restricted to the pattern's variables.
pub fn match_complete(phi: &SymbolicTerm, rho: &Valuation) -> Result<(), TestCaseError> {
    let g = super::instantiate(phi, rho).expect("valuation covers the pattern");
    prop_assert!(sat_sym(rho, &g, phi));
    match try_match(phi, &g) {
        None => prop_assert!(false, "{phi} does not match its instance {g}"),
        Some(found) => {
            prop_assert_eq!(found.domain(), phi.free_vars());
            prop_assert!(rho.extends(&found), "{rho} does not extend {found}");
        }
    }
    Ok(())
}

/// The interpreter's condition check agrees with the declarative one.
pub fn conditions_agree(model: &StaticModel, rho: &Valuation, cs: &[SideCondition]) -> Result<(), TestCaseError> {
    let declarative = cs.iter().all(|c| side_condition_holds(model, rho, c));
    prop_assert_eq!(evaluate_condition(model, rho, cs), declarative);
    Ok(())
}

/// `evaluate(rho, t) = g` exactly when `rho, g |= t`.
pub fn evaluate_agrees(
    model: &StaticModel,
    rho: &Valuation,
    t: &ExpressionTerm,
    other: &GroundTerm,
) -> Result<(), TestCaseError> {
    match evaluate(model, rho, t) {
        Ok(g) => {
            prop_assert!(
                sat_exprterm(model, rho, &g, t),
                "{t} evaluates to {g} but is not satisfied by it"
            );
            prop_assert_eq!(sat_exprterm(model, rho, other, t), *other == g);
        }
        Err(_) => prop_assert!(
            !sat_exprterm(model, rho, other, t),
            "{t} has no value but {other} satisfies it"
        ),
    }
    Ok(())
}

/// A builtin application is total, deterministic and matches the reference.
pub fn builtin_matches_reference(model: &StaticModel, name: &str, args: &[GroundTerm]) -> Result<(), TestCaseError> {
    let got = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| model.apply(name, args)))
        .map_err(|_| TestCaseError::fail(format!("{name} trapped on {args:?}")))?
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&got, &model.apply(name, args).unwrap(), "nondeterministic");
    prop_assert_eq!(
        got == GroundTerm::error(),
        expects_error(name, args),
        "{}{:?} gave {}",
        name,
        args,
        got
    );
    prop_assert_eq!(got, reference_apply(name, args), "{}{:?}", name, args);
    Ok(())
}

/// Dictionary update/lookup laws.
pub fn dict_laws(
    model: &StaticModel,
    d: &GroundTerm,
    k: &GroundTerm,
    k2: &GroundTerm,
    v: &GroundTerm,
    w: &GroundTerm,
) -> Result<(), TestCaseError> {
    let apply = |f: &str, a: &[GroundTerm]| model.apply(f, a).unwrap();
    let updated = apply("map.update", &[d.clone(), k.clone(), v.clone()]);
    prop_assert_eq!(apply("map.lookup", &[updated.clone(), k.clone()]), v.clone());
    if k != k2 {
        prop_assert_eq!(
            apply("map.lookup", &[updated.clone(), k2.clone()]),
            apply("map.lookup", &[d.clone(), k2.clone()])
        );
    }
    let twice = apply("map.update", &[updated, k.clone(), w.clone()]);
    prop_assert_eq!(
        &twice,
        &apply("map.update", &[d.clone(), k.clone(), w.clone()]),
        "last write wins"
    );
    prop_assert_eq!(apply("map.lookup", &[twice, k.clone()]), w.clone());
    Ok(())
}
