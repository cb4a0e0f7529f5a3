//! `datr` — check DATR theory files, run queries and goal suites, dump the
//! implicit-sentence closure, and cross-check the evaluator against the
//! brute-force oracle.
//!
//! Exit codes are stable: 0 success, 1 failed assertions or oracle
//! mismatches, 2 input errors (parse or IO), 3 resource-limit outcomes.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use datr_core::{
    closure_sentences, cross_check, evaluate_query, parse_goals, parse_query, parse_theory,
    random_theory, render_sentence, ClosureParams, DefSentence, Diagnostic, EvalConfig, EvalMode,
    EvalOutcome, Theory, DEFAULT_MAX_STEPS,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILURES: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "datr",
    version,
    about = "DATR theory checker and query evaluator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a theory file and report diagnostics and counts.
    Check { theory: PathBuf },
    /// Evaluate a single query, e.g. 'Walk:<mor past>'.
    Query {
        theory: PathBuf,
        query: String,
        /// Exact-path matches only (no prefix defaulting).
        #[arg(long)]
        strict: bool,
        /// Stream evaluation trace events to standard error.
        #[arg(long)]
        trace: bool,
        /// Step budget for this query (overrides DATR_MAX_STEPS).
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Run a goal file against a theory and report PASS/FAIL per goal.
    Test {
        theory: PathBuf,
        goals: PathBuf,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Print the implicit-sentence closure up to a suffix depth.
    Dump {
        theory: PathBuf,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Cross-check the evaluator against the brute-force oracle.
    OracleCheck {
        theory: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Base seed for generated theories.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Additionally cross-check this many generated theories.
        #[arg(long)]
        random: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { theory } => cmd_check(&theory),
        Command::Query {
            theory,
            query,
            strict,
            trace,
            max_steps,
            format,
        } => cmd_query(&theory, &query, strict, trace, max_steps, format),
        Command::Test {
            theory,
            goals,
            max_steps,
        } => cmd_test(&theory, &goals, max_steps),
        Command::Dump { theory, depth } => cmd_dump(&theory, depth),
        Command::OracleCheck {
            theory,
            depth,
            seed,
            random,
        } => cmd_oracle_check(&theory, depth, seed, random),
    };
    ExitCode::from(code)
}

fn read_file(path: &FsPath) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {}", path.display(), e);
        EXIT_INPUT
    })
}

fn print_diagnostics(path: &FsPath, diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{}:{}", path.display(), d);
    }
}

fn load_theory(path: &FsPath) -> Result<Theory, u8> {
    let text = read_file(path)?;
    match parse_theory(&text) {
        Ok((theory, warnings)) => {
            print_diagnostics(path, &warnings);
            Ok(theory)
        }
        Err(diags) => {
            print_diagnostics(path, &diags);
            Err(EXIT_INPUT)
        }
    }
}

/// Step budget precedence: flag, then DATR_MAX_STEPS, then the default.
/// Budgets are at least 1.
fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("DATR_MAX_STEPS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_MAX_STEPS)
    .max(1)
}

fn cmd_check(path: &FsPath) -> u8 {
    match load_theory(path) {
        Ok(theory) => {
            println!(
                "{} nodes, {} sentences",
                theory.node_count(),
                theory.sentence_count()
            );
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn cmd_query(
    path: &FsPath,
    query: &str,
    strict: bool,
    trace: bool,
    max_steps: Option<u64>,
    format: OutputFormat,
) -> u8 {
    let theory = match load_theory(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let (node, qpath) = match parse_query(query) {
        Ok(q) => q,
        Err(diags) => {
            for d in diags {
                eprintln!("query: {}", d);
            }
            return EXIT_INPUT;
        }
    };
    let cfg = EvalConfig {
        mode: if strict {
            EvalMode::Strict
        } else {
            EvalMode::Default
        },
        max_steps: resolve_budget(max_steps),
        trace_enabled: trace,
    };
    let (outcome, events) = evaluate_query(&theory, &node, &qpath, &cfg);
    for e in &events {
        eprintln!("{}", e);
    }
    match format {
        OutputFormat::Text => println!("{}", outcome),
        OutputFormat::Machine => println!("result\t{}:{}\t{}", node, qpath, outcome),
    }
    if outcome.is_limit() {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

fn cmd_test(theory_path: &FsPath, goals_path: &FsPath, max_steps: Option<u64>) -> u8 {
    let theory = match load_theory(theory_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let goals_text = match read_file(goals_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let (goals, diags) = parse_goals(&goals_text);
    print_diagnostics(goals_path, &diags);
    if diags
        .iter()
        .any(|d| d.severity == datr_core::Severity::Error)
    {
        return EXIT_INPUT;
    }

    let cfg = EvalConfig {
        max_steps: resolve_budget(max_steps),
        ..EvalConfig::default()
    };
    let (mut passed, mut failed, mut undefined, mut limits) = (0u32, 0u32, 0u32, 0u32);
    for goal in &goals {
        let (outcome, _) = evaluate_query(&theory, &goal.node, &goal.path, &cfg);
        let loc = format!("{}:{}", goal.node, goal.path);
        match (&goal.expected, &outcome) {
            (Some(expected), EvalOutcome::Value(v)) if v == expected => {
                println!("PASS\t{}\t{}", loc, outcome);
                passed += 1;
            }
            (Some(expected), EvalOutcome::Value(_)) => {
                let want = EvalOutcome::Value(expected.clone());
                println!("FAIL\t{}\texpected {}, got {}", loc, want, outcome);
                failed += 1;
            }
            (Some(_), EvalOutcome::Undefined { .. }) => {
                println!("UNDEFINED\t{}\t{}", loc, outcome);
                undefined += 1;
            }
            (Some(_), EvalOutcome::LimitExceeded { .. })
            | (None, EvalOutcome::LimitExceeded { .. }) => {
                println!("LIMIT\t{}\t{}", loc, outcome);
                limits += 1;
            }
            (None, _) => {
                println!("RESULT\t{}\t{}", loc, outcome);
            }
        }
    }
    println!(
        "{} goals, {} passed, {} failed, {} undefined, {} limit-exceeded",
        goals.len(),
        passed,
        failed,
        undefined,
        limits
    );
    if limits > 0 {
        EXIT_LIMIT
    } else if failed + undefined > 0 {
        EXIT_FAILURES
    } else {
        EXIT_OK
    }
}

fn cmd_dump(path: &FsPath, depth: usize) -> u8 {
    use std::io::Write;
    let theory = match load_theory(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let params = ClosureParams::for_theory(&theory, depth);
    let sentences = closure_sentences(&theory, &params);
    // Nodes in declaration order, paths lexicographic within a node.
    let mut by_node: std::collections::BTreeMap<_, Vec<&DefSentence>> = Default::default();
    for s in &sentences {
        by_node.entry(s.node.clone()).or_default().push(s);
    }
    // Closures get large; write buffered, and stop quietly if the
    // downstream consumer closes the pipe.
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    for node in theory.nodes() {
        if let Some(group) = by_node.get(node) {
            for s in group {
                if writeln!(out, "{}", render_sentence(s)).is_err() {
                    return EXIT_OK;
                }
            }
        }
    }
    let _ = out.flush();
    EXIT_OK
}

fn cmd_oracle_check(path: &FsPath, depth: usize, seed: u64, random: Option<usize>) -> u8 {
    let theory = match load_theory(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let report = cross_check(&theory, &ClosureParams::for_theory(&theory, depth));
    println!("{}", report);
    let mut any_mismatch = !report.agreed();

    if let Some(count) = random {
        let mut total_mismatches = 0usize;
        for i in 0..count as u64 {
            let s = seed + i;
            let size = (s % 6 + 1) as usize;
            let generated = random_theory(s, size, 3, true);
            let r = cross_check(&generated, &ClosureParams::for_theory(&generated, depth));
            if !r.agreed() {
                println!("seed={}", s);
                println!("{}", r);
                total_mismatches += r.mismatches.len();
            }
        }
        println!(
            "random\ttheories={}\tmismatches={}",
            count, total_mismatches
        );
        any_mismatch = any_mismatch || total_mismatches > 0;
    }

    if any_mismatch {
        EXIT_FAILURES
    } else {
        EXIT_OK
    }
}
