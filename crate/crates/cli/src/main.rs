use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use rwsem::bench::{self, BenchmarkCase};
use rwsem::compiled::CompiledTheoryFile;
use rwsem::interpreter::{run, RunOptions};
use rwsem::program::{initial_configuration, parse_term_file, substitute_args};
use rwsem::semantics::{check_trace, trace_related};
use rwsem::syntax::parse_ground_term;
use rwsem::{default_model, Execution, GroundTerm, StaticModel};

/// Compile rewriting-based language definitions and run programs in them.
#[derive(Parser)]
#[command(name = "rwsem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a `.m` language definition and write its compiled theory.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a program term under a compiled theory (or a `.m` file).
    Run {
        theory: PathBuf,
        program: PathBuf,
        /// Value for `$arg1`, `$arg2`, ... in order (`$arg` is `$arg1`).
        #[arg(long = "arg", value_name = "TERM")]
        args: Vec<String>,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
        /// Print one line per step: index, action, rule number.
        #[arg(long)]
        trace: bool,
        /// With --trace, also print the term after each step.
        #[arg(long, requires = "trace")]
        trace_terms: bool,
        /// Validate every step with the declarative checker.
        #[arg(long)]
        check: bool,
        /// Print per-rule fire counts and wall time.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the desugared rules of a compiled theory (or a `.m` file).
    PrintTheory { theory: PathBuf },
    /// Run the bundled benchmark cases and report median times.
    Bench {
        /// Case to run; repeatable. Defaults to all.
        #[arg(long = "case", value_name = "NAME")]
        cases: Vec<String>,
        /// Sizes for every selected case, e.g. `10,100`. Defaults per case.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Run independent jobs concurrently (timings become unreliable).
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
}

const EXIT_DIAGNOSTICS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_ORACLE: u8 = 4;

/// An error carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::new(EXIT_DIAGNOSTICS, format!("{e:#}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let model = default_model();
    let outcome = match cli.command {
        Command::Compile { input, output } => compile(&model, &input, &output),
        Command::Run {
            theory,
            program,
            args,
            fuel,
            trace,
            trace_terms,
            check,
            stats,
            json,
        } => run_program(
            &model,
            &theory,
            &program,
            &args,
            RunFlags {
                fuel,
                trace,
                trace_terms,
                check,
                stats,
                json,
            },
        ),
        Command::PrintTheory { theory } => load_theory(&model, &theory).map(|file| {
            print!("{}", file.print_rules());
            0
        }),
        Command::Bench {
            cases,
            sizes,
            repetitions,
            parallel,
            json,
        } => run_bench(&cases, &sizes, repetitions, parallel, json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn compile_source(model: &StaticModel, path: &Path) -> Result<CompiledTheoryFile, Failure> {
    let source = read(path)?;
    CompiledTheoryFile::from_source(&source, model).map_err(|diagnostics| {
        let lines: Vec<String> = diagnostics.iter().map(|d| format!("{}:{d}", path.display())).collect();
        Failure::new(
            EXIT_DIAGNOSTICS,
            format!("{} problem(s) found\n{}", lines.len(), lines.join("\n")),
        )
    })
}

fn compile(model: &StaticModel, input: &Path, output: &Path) -> Result<u8, Failure> {
    let file = compile_source(model, input)?;
    if file.theory.is_empty() {
        eprintln!("warning: {} defines no rules", input.display());
    }
    fs::write(output, file.serialize()).with_context(|| format!("cannot write {}", output.display()))?;
    eprintln!("compiled {} rule(s) to {}", file.theory.len(), output.display());
    Ok(0)
}

fn load_theory(model: &StaticModel, path: &Path) -> Result<CompiledTheoryFile, Failure> {
    if path.extension().is_some_and(|e| e == "m") {
        return compile_source(model, path);
    }
    let text = read(path)?;
    CompiledTheoryFile::parse(&text, model)
        .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, format!("{}: {e}", path.display())))
}

struct RunFlags {
    fuel: u64,
    trace: bool,
    trace_terms: bool,
    check: bool,
    stats: bool,
    json: bool,
}

fn run_program(
    model: &StaticModel,
    theory_path: &Path,
    program_path: &Path,
    raw_args: &[String],
    flags: RunFlags,
) -> Result<u8, Failure> {
    let file = load_theory(model, theory_path)?;
    let theory = &file.theory;
    let program = parse_term_file(&read(program_path)?)
        .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, format!("{}:{e}", program_path.display())))?;
    let args = raw_args
        .iter()
        .map(|a| parse_ground_term(a).map_err(|e| Failure::new(EXIT_USAGE, format!("--arg {a:?}: {e}"))))
        .collect::<Result<Vec<GroundTerm>, _>>()?;
    let program = substitute_args(&program, &args).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let start = initial_configuration(theory, program);

    let mut options = RunOptions::with_fuel(flags.fuel);
    if flags.trace || flags.check {
        options = options.traced();
    }
    let clock = Instant::now();
    let result =
        run(model, theory, start.clone(), options).map_err(|e| Failure::new(EXIT_DIAGNOSTICS, e.to_string()))?;
    let elapsed = clock.elapsed();

    let steps = result.trace.as_deref().unwrap_or_default();
    let mut violation = None;
    if flags.check {
        let mode = Execution::best();
        if let Err(v) = check_trace(model, theory, &start, steps, mode) {
            violation = Some((v.index(), v.to_string()));
        } else if let Some((last, middle)) = steps.split_last() {
            let intermediates: Vec<GroundTerm> = middle.iter().map(|s| s.next.clone()).collect();
            if !trace_related(
                model,
                theory,
                &start,
                &result.action_word,
                &intermediates,
                &last.next,
                mode,
            ) {
                violation = Some((0, "the action word does not relate start and end".to_string()));
            }
        }
    }

    let labels: Vec<&str> = theory.rules().iter().map(|r| r.action.as_str()).collect();
    if flags.json {
        let mut out = json!({
            "final": result.final_term.to_string(),
            "steps": result.steps_taken,
            "exhausted": result.exhausted,
            "rule_counts": labels.iter().zip(&result.rule_counts)
                .map(|(l, c)| (l.to_string(), json!(c)))
                .collect::<serde_json::Map<_, _>>(),
            "wall_seconds": elapsed.as_secs_f64(),
        });
        if flags.trace {
            out["trace"] = steps
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut rec = json!({"step": i, "action": labels[s.rule], "rule": s.rule});
                    if flags.trace_terms {
                        rec["term"] = json!(s.next.to_string());
                    }
                    rec
                })
                .collect();
        }
        if flags.check {
            out["check"] = match &violation {
                None => json!("passed"),
                Some((index, message)) => json!({"step": index, "violation": message}),
            };
        }
        println!("{out}");
    } else {
        if flags.trace {
            for (i, s) in steps.iter().enumerate() {
                print!("step {i}\t{}\trule {}", labels[s.rule], s.rule);
                if flags.trace_terms {
                    print!("\t{}", s.next);
                }
                println!();
            }
        }
        println!("final: {}", result.final_term);
        println!("steps: {}", result.steps_taken);
        println!("exhausted: {}", result.exhausted);
        if flags.stats {
            for (label, count) in labels.iter().zip(&result.rule_counts) {
                println!("rule {label}: {count}");
            }
            println!("wall time: {:.6} s", elapsed.as_secs_f64());
        }
        if flags.check && violation.is_none() {
            println!("check: passed");
        }
    }

    if let Some((index, message)) = violation {
        return Err(Failure::new(
            EXIT_ORACLE,
            format!("oracle violation at step {index}: {message}"),
        ));
    }
    Ok(if result.exhausted { EXIT_FUEL } else { 0 })
}

fn run_bench(names: &[String], sizes: &[u64], repetitions: usize, parallel: bool, json: bool) -> Result<u8, Failure> {
    let selected: Vec<&BenchmarkCase> = if names.is_empty() {
        bench::CASES.iter().collect()
    } else {
        names
            .iter()
            .map(|n| {
                bench::case(n).ok_or_else(|| {
                    let known: Vec<&str> = bench::CASES.iter().map(|c| c.name).collect();
                    Failure::new(EXIT_USAGE, format!("unknown case `{n}` (known: {})", known.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let plan: Vec<(&BenchmarkCase, Vec<u64>)> = selected
        .into_iter()
        .map(|c| {
            let s = if sizes.is_empty() {
                c.default_sizes.to_vec()
            } else {
                sizes.to_vec()
            };
            (c, s)
        })
        .collect();
    let mode = if parallel {
        Execution::best()
    } else {
        Execution::Sequential
    };
    let report =
        bench::run_suite(&plan, repetitions, mode).map_err(|e| Failure::new(EXIT_DIAGNOSTICS, e.to_string()))?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
        );
    } else {
        print!("{}", report.to_table());
    }
    Ok(0)
}
