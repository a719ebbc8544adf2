//! Bundled language definitions and a small benchmark harness.
//!
//! Every case checks its final term against a closed form or a reference
//! implementation that does not use the interpreter.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::compiled::CompiledTheoryFile;
use crate::frontend::Diagnostic;
use crate::interpreter::{run, InterpreterError, RunOptions};
use crate::par::{self, Execution};
use crate::program::{initial_configuration, parse_term_file, substitute_args};
use crate::semantics::RewritingTheory;
use crate::static_model::{default_model, StaticModel};
use crate::term::{GroundTerm, Term};
use crate::value::BuiltinValue;

pub const TWO_COUNTERS: &str = include_str!("../languages/two-counters.m");
pub const IMP: &str = include_str!("../languages/imp.m");
pub const IMP_FRAGMENT: &str = include_str!("../languages/imp-fragment.m");
pub const UNARY_FIB: &str = include_str!("../languages/unary-fib.m");
pub const UNARY_FACT: &str = include_str!("../languages/unary-fact.m");
pub const NATIVE_FIB: &str = include_str!("../languages/native-fib.m");
/// IMP program summing `1..=$arg`.
pub const IMP_COUNT_TO: &str = include_str!("../languages/programs/imp-count-to.term");

/// `(file name, source)` for every bundled `.m` file.
pub fn bundled_definitions() -> [(&'static str, &'static str); 6] {
    [
        ("two-counters.m", TWO_COUNTERS),
        ("imp.m", IMP),
        ("imp-fragment.m", IMP_FRAGMENT),
        ("unary-fib.m", UNARY_FIB),
        ("unary-fact.m", UNARY_FACT),
        ("native-fib.m", NATIVE_FIB),
    ]
}

/// `succ[...succ[zero[]]...]` with `n` successors.
pub fn unary(n: u64) -> GroundTerm {
    (0..n).fold(Term::constant("zero"), |t, _| Term::node("succ", vec![t]))
}

pub fn from_unary(mut t: &GroundTerm) -> Option<u64> {
    let mut n = 0;
    loop {
        match t {
            Term::Node(s, c) if s.as_str() == "zero" && c.is_empty() => return Some(n),
            Term::Node(s, c) if s.as_str() == "succ" && c.len() == 1 => {
                n += 1;
                t = &c[0];
            }
            _ => return None,
        }
    }
}

/// Reference Fibonacci: fib(0) = 0, fib(1) = 1.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn triangular(n: u64) -> BigInt {
    BigInt::from(n) * BigInt::from(n + 1) / 2
}

fn int_of(t: &GroundTerm) -> Option<&BigInt> {
    match t.as_builtin()? {
        BuiltinValue::Int(z) => Some(z),
        _ => None,
    }
}

/// The single result left in a `c[builtin.cseq[R, builtin.empty_cseq[]], ...]`
/// configuration.
pub fn configuration_result(t: &GroundTerm) -> Option<&GroundTerm> {
    let Term::Node(c, parts) = t else { return None };
    if c.as_str() != "c" || parts.is_empty() {
        return None;
    }
    let Term::Node(cseq, seq) = &parts[0] else { return None };
    if cseq.as_str() != "builtin.cseq" || seq.len() != 2 || seq[1] != Term::constant("builtin.empty_cseq") {
        return None;
    }
    Some(&seq[0])
}

type Check = fn(u64, &GroundTerm) -> Result<(), String>;

/// One benchmark family, parameterised by a size `n`.
pub struct BenchmarkCase {
    pub name: &'static str,
    pub source: &'static str,
    /// Program term before init wrapping.
    pub program: fn(u64) -> GroundTerm,
    pub expected: Check,
    pub fuel: fn(u64) -> u64,
    pub default_sizes: &'static [u64],
}

fn expect_eq(found: &GroundTerm, want: impl std::fmt::Display) -> Result<(), String> {
    Err(format!("expected {want}, got {found}"))
}

fn check_tc(n: u64, t: &GroundTerm) -> Result<(), String> {
    let want = Term::node(
        "state",
        vec![
            GroundTerm::int(0),
            GroundTerm::builtin(BuiltinValue::Int(triangular(n))),
        ],
    );
    if *t == want {
        Ok(())
    } else {
        expect_eq(t, want)
    }
}

fn check_unary(n: u64, t: &GroundTerm, reference: fn(u64) -> BigInt) -> Result<(), String> {
    let want = reference(n);
    match configuration_result(t).and_then(from_unary) {
        Some(k) if BigInt::from(k) == want => Ok(()),
        _ => expect_eq(t, format!("a configuration holding unary {want}")),
    }
}

fn check_native_fib(n: u64, t: &GroundTerm) -> Result<(), String> {
    let want = Term::node("result", vec![GroundTerm::builtin(BuiltinValue::Int(fibonacci(n)))]);
    if *t == want {
        Ok(())
    } else {
        expect_eq(t, want)
    }
}

fn check_count_to(n: u64, t: &GroundTerm) -> Result<(), String> {
    let want = triangular(n);
    match configuration_result(t).and_then(int_of) {
        Some(z) if *z == want => Ok(()),
        _ => expect_eq(t, format!("a configuration holding {want}")),
    }
}

fn count_to_program(n: u64) -> GroundTerm {
    let p = parse_term_file(IMP_COUNT_TO).expect("bundled program parses");
    substitute_args(&p, &[GroundTerm::int(n as i64)]).expect("one argument")
}

pub static CASES: [BenchmarkCase; 5] = [
    BenchmarkCase {
        name: "two-counters",
        source: TWO_COUNTERS,
        program: |n| Term::node("state", vec![GroundTerm::int(n as i64), GroundTerm::int(0)]),
        expected: check_tc,
        fuel: |n| n + 1,
        default_sizes: &[10, 1_000, 100_000],
    },
    BenchmarkCase {
        name: "unary-fib",
        source: UNARY_FIB,
        program: |n| Term::node("fib", vec![unary(n)]),
        expected: |n, t| check_unary(n, t, fibonacci),
        fuel: |_| 100_000_000,
        default_sizes: &[5, 10, 15],
    },
    BenchmarkCase {
        name: "unary-fact",
        source: UNARY_FACT,
        program: |n| Term::node("fact", vec![unary(n)]),
        expected: |n, t| check_unary(n, t, factorial),
        fuel: |_| 100_000_000,
        default_sizes: &[3, 5, 7],
    },
    BenchmarkCase {
        name: "native-fib",
        source: NATIVE_FIB,
        program: |n| GroundTerm::int(n as i64),
        expected: check_native_fib,
        fuel: |n| n + 3,
        default_sizes: &[10, 100, 1_000],
    },
    BenchmarkCase {
        name: "imp-count-to",
        source: IMP,
        program: count_to_program,
        expected: check_count_to,
        fuel: |_| 100_000_000,
        default_sizes: &[1, 4, 7],
    },
];

pub fn case(name: &str) -> Option<&'static BenchmarkCase> {
    CASES.iter().find(|c| c.name == name)
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("case `{case}` does not compile: {}", first(.diagnostics))]
    Compile { case: String, diagnostics: Vec<Diagnostic> },
    #[error("case `{case}` n={n}: {source}")]
    Interpreter {
        case: String,
        n: u64,
        source: InterpreterError,
    },
    #[error("case `{case}` n={n}: fuel exhausted after {steps} steps")]
    Exhausted { case: String, n: u64, steps: u64 },
    #[error("case `{case}` n={n}: {message}")]
    Expectation { case: String, n: u64, message: String },
}

fn first(diagnostics: &[Diagnostic]) -> String {
    diagnostics.first().map(ToString::to_string).unwrap_or_default()
}

/// Outcome of one verified run.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub steps: u64,
    pub final_term: GroundTerm,
    pub elapsed: Duration,
}

impl BenchmarkCase {
    pub fn compile(&self, model: &StaticModel) -> Result<RewritingTheory, BenchError> {
        CompiledTheoryFile::from_source(self.source, model)
            .map(|f| f.theory)
            .map_err(|diagnostics| BenchError::Compile {
                case: self.name.to_string(),
                diagnostics,
            })
    }

    /// The start term for size `n`, init-wrapped as the CLI would.
    pub fn start(&self, theory: &RewritingTheory, n: u64) -> GroundTerm {
        initial_configuration(theory, (self.program)(n))
    }

    /// Runs size `n` once and checks the result.
    pub fn measure(&self, model: &StaticModel, theory: &RewritingTheory, n: u64) -> Result<Measurement, BenchError> {
        let start = self.start(theory, n);
        let clock = Instant::now();
        let result = run(model, theory, start, RunOptions::with_fuel((self.fuel)(n))).map_err(|source| {
            BenchError::Interpreter {
                case: self.name.to_string(),
                n,
                source,
            }
        })?;
        let elapsed = clock.elapsed();
        if result.exhausted {
            return Err(BenchError::Exhausted {
                case: self.name.to_string(),
                n,
                steps: result.steps_taken,
            });
        }
        (self.expected)(n, &result.final_term).map_err(|message| BenchError::Expectation {
            case: self.name.to_string(),
            n,
            message,
        })?;
        Ok(Measurement {
            steps: result.steps_taken,
            final_term: result.final_term,
            elapsed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub case: String,
    pub n: u64,
    pub steps: u64,
    pub repetitions: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>9} {:>12} {:>5} {:>12} {:>12}\n",
            "case", "n", "steps", "reps", "median [s]", "min [s]"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<14} {:>9} {:>12} {:>5} {:>12.6} {:>12.6}\n",
                r.case, r.n, r.steps, r.repetitions, r.median_seconds, r.min_seconds
            ));
        }
        out
    }
}

fn median(sorted: &[f64]) -> f64 {
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Runs each case at each of its sizes `repetitions` times. With
/// `Execution::Parallel` independent (case, size) jobs run concurrently,
/// which is only meaningful as a correctness sweep.
pub fn run_suite(
    cases: &[(&BenchmarkCase, Vec<u64>)],
    repetitions: usize,
    mode: Execution,
) -> Result<Report, BenchError> {
    let model = default_model();
    let repetitions = repetitions.max(1);
    let mut jobs = Vec::new();
    for (case, sizes) in cases {
        let theory = case.compile(&model)?;
        for &n in sizes {
            jobs.push((*case, theory.clone(), n));
        }
    }
    let rows = par::map(mode, &jobs, |(case, theory, n)| {
        let mut times = Vec::with_capacity(repetitions);
        let mut steps = 0;
        for _ in 0..repetitions {
            let m = case.measure(&model, theory, *n)?;
            steps = m.steps;
            times.push(m.elapsed.as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        Ok(ReportRow {
            case: case.name.to_string(),
            n: *n,
            steps,
            repetitions,
            median_seconds: median(&times),
            min_seconds: times[0],
        })
    });
    Ok(Report {
        rows: rows.into_iter().collect::<Result<_, _>>()?,
    })
}
