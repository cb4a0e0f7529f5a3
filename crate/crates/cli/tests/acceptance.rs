//! Acceptance suite. Each test covers one criterion and prints a single
//! PASS/FAIL line (visible with `--nocapture`):
//!
//! 1. golden query values on the verb-morphology fixture, under 1 s;
//! 2. implicit-sentence dump membership at the stated depths;
//! 3. evaluator/oracle agreement on the fixture (depth 3) and on 200
//!    generated theories (depth 2), under 60 s;
//! 4. every strict-mode value reproduced identically by default mode over
//!    the same 200 theories and all depth-<=2 queries;
//! 5. the cyclic theory terminates with the limit exit code at budget
//!    10000, under 1 s;
//! 6. parse -> render -> parse is a fixpoint on the fixture and on all 200
//!    generated theories.

use std::path::{Path as FsPath, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use datr_core::{
    cross_check, evaluate_query, parse_theory, random_theory, render_theory, AtomSym,
    ClosureParams, EvalConfig, EvalOutcome, NodeSym, Path, Theory, ValueSeq,
};

fn fixture_path(name: &str) -> PathBuf {
    FsPath::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn fixture_theory() -> Theory {
    let text = std::fs::read_to_string(fixture_path("verbs.dtr")).expect("fixture readable");
    parse_theory(&text).expect("fixture parses").0
}

fn generated_theories() -> Vec<(u64, Theory)> {
    (1..=200u64)
        .map(|seed| (seed, random_theory(seed, (seed % 6 + 1) as usize, 3, true)))
        .collect()
}

/// All paths over the theory's closure alphabet up to `depth`.
fn query_paths(theory: &Theory, depth: usize) -> Vec<Path> {
    let alphabet: Vec<AtomSym> = ClosureParams::for_theory(theory, depth)
        .alphabet
        .into_iter()
        .collect();
    let mut out = vec![Path::empty()];
    let mut layer: Vec<Vec<AtomSym>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for stem in &layer {
            for a in &alphabet {
                let mut s = stem.clone();
                s.push(a.clone());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned().map(Path::new));
        layer = next;
    }
    out
}

fn report(number: u32, description: &str, failures: Vec<String>, elapsed: Duration) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "acceptance criterion {}: {} — {} ({} ms)",
        number,
        status,
        description,
        elapsed.as_millis()
    );
    assert!(
        failures.is_empty(),
        "criterion {} failed:\n{}",
        number,
        failures.join("\n")
    );
}

#[test]
fn criterion_1_golden_query_suite() {
    let started = Instant::now();
    let theory = fixture_theory();
    let cfg = EvalConfig::default();
    let expect_value: [(&str, &[&str], &[&str]); 12] = [
        ("Walk", &["syn", "cat"], &["verb"]),
        ("Walk", &["mor", "pres"], &["walk"]),
        ("Walk", &["mor", "past"], &["walk", "ed"]),
        ("Walk", &["mor", "root", "root"], &["walk"]),
        ("Aux", &["syn", "type"], &["aux"]),
        ("Can", &["mor", "past"], &["could"]),
        ("Mow", &["syn", "cat"], &["verb"]),
        ("Can", &["syn", "cat"], &["verb"]),
        ("Walk", &["mor", "pres", "part"], &["walk", "ing"]),
        ("Walk", &["mor", "pres", "sing", "three"], &["walk", "s"]),
        ("Mow", &["mor", "past", "part"], &["mow", "en"]),
        ("Can", &["mor", "pres", "sing", "three"], &["can"]),
    ];

    let mut failures = Vec::new();
    for (node, path, expected) in expect_value {
        let p = Path::from_names(path.iter().copied());
        let (outcome, _) = evaluate_query(&theory, &NodeSym::new(node), &p, &cfg);
        let want = EvalOutcome::Value(ValueSeq::from_names(expected.iter().copied()));
        if outcome != want {
            failures.push(format!("{}:{} = {}, want {}", node, p, outcome, want));
        }
    }

    let (outcome, _) = evaluate_query(
        &theory,
        &NodeSym::new("Walk"),
        &Path::from_names(["mor", "form"]),
        &cfg,
    );
    if !matches!(outcome, EvalOutcome::Undefined { .. }) {
        failures.push(format!("Walk:<mor form> = {}, want UNDEFINED", outcome));
    }

    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("suite took {:?}, budget 1 s", elapsed));
    }
    report(1, "golden query suite (13 queries)", failures, elapsed);
}

#[test]
fn criterion_2_implicit_sentence_dump_membership() {
    let started = Instant::now();
    let theory = fixture_path("verbs.dtr");
    let dump = |depth: &str| -> String {
        let out = Command::new(env!("CARGO_BIN_EXE_datr"))
            .args(["dump", theory.to_str().unwrap(), "--depth", depth])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout).into_owned()
    };
    let depth1 = dump("1");
    let depth2 = dump("2");

    let mut failures = Vec::new();
    let positives: [(&str, &str); 3] = [
        ("Walk: <mor> == Verb:<mor> .", "depth1"),
        ("Walk: <mor form> == Verb:<mor form> .", "depth2"),
        ("Walk: <syn cat> == Verb:<syn cat> .", "depth2"),
    ];
    for (sentence, which) in positives {
        let text = if which == "depth1" { &depth1 } else { &depth2 };
        if !text.contains(sentence) {
            failures.push(format!("{} missing from {} dump", sentence, which));
        }
    }
    let negatives = [
        "Walk: <mor root> == Verb:<mor root> .",
        "Can: <mor past> == Modal:<mor past> .",
        "Aux: <syn type> == Verb:<syn type> .",
    ];
    for sentence in negatives {
        for (text, which) in [(&depth1, "depth1"), (&depth2, "depth2")] {
            if text.contains(sentence) {
                failures.push(format!("shadowed {} present in {} dump", sentence, which));
            }
        }
    }
    report(
        2,
        "implicit-sentence dump membership",
        failures,
        started.elapsed(),
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let theory = fixture_theory();
    let fig_report = cross_check(&theory, &ClosureParams::for_theory(&theory, 3));
    if !fig_report.agreed() {
        failures.push(format!("fixture depth 3: {}", fig_report));
    }

    for (seed, t) in generated_theories() {
        let r = cross_check(&t, &ClosureParams::for_theory(&t, 2));
        if !r.agreed() {
            failures.push(format!("seed {}: {}", seed, r));
        }
    }

    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("run took {:?}, budget 60 s", elapsed));
    }
    report(
        3,
        "oracle equivalence (fixture depth 3 + 200 generated theories depth 2)",
        failures,
        elapsed,
    );
}

#[test]
fn criterion_4_strict_values_contained_in_default_mode() {
    let started = Instant::now();
    let strict = EvalConfig::strict();
    let default = EvalConfig::default();
    let mut failures = Vec::new();
    let mut values_seen = 0u32;

    for (seed, t) in generated_theories() {
        let nodes: Vec<_> = t.nodes().cloned().collect();
        for n in &nodes {
            for p in query_paths(&t, 2) {
                let (s, _) = evaluate_query(&t, n, &p, &strict);
                if let EvalOutcome::Value(_) = s {
                    values_seen += 1;
                    let (d, _) = evaluate_query(&t, n, &p, &default);
                    if s != d {
                        failures.push(format!(
                            "seed {} at {}:{}: strict {}, default {}",
                            seed, n, p, s, d
                        ));
                    }
                }
            }
        }
    }
    assert!(values_seen > 0, "the strict sample must not be vacuous");
    report(
        4,
        "strict-mode values reproduced by default mode",
        failures,
        started.elapsed(),
    );
}

#[test]
fn criterion_5_cyclic_theory_terminates_with_limit_code() {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_datr"))
        .args([
            "query",
            fixture_path("cyclic.dtr").to_str().unwrap(),
            "L:<>",
            "--max-steps",
            "10000",
        ])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();

    let mut failures = Vec::new();
    if out.status.code() != Some(3) {
        failures.push(format!("exit code {:?}, want 3", out.status.code()));
    }
    if !String::from_utf8_lossy(&out.stdout).starts_with("LIMIT EXCEEDED") {
        failures.push("stdout does not report LIMIT EXCEEDED".to_string());
    }
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {:?}, budget 1 s", elapsed));
    }
    report(
        5,
        "cyclic theory hits the budget (exit 3)",
        failures,
        elapsed,
    );
}

#[test]
fn criterion_6_parser_roundtrip_fixpoint() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let mut theories: Vec<(String, Theory)> = vec![("fixture".to_string(), fixture_theory())];
    theories.extend(
        generated_theories()
            .into_iter()
            .map(|(seed, t)| (format!("seed {}", seed), t)),
    );

    for (label, t) in &theories {
        match parse_theory(&render_theory(t)) {
            Ok((reparsed, _)) => {
                if reparsed != *t {
                    failures.push(format!("{}: reparse differs", label));
                } else {
                    match parse_theory(&render_theory(&reparsed)) {
                        Ok((again, _)) if again == reparsed => {}
                        Ok(_) => failures.push(format!("{}: second reparse differs", label)),
                        Err(d) => failures.push(format!("{}: second render fails: {:?}", label, d)),
                    }
                }
            }
            Err(d) => failures.push(format!("{}: render does not parse: {:?}", label, d)),
        }
    }
    report(
        6,
        "parse → render → parse fixpoint (fixture + 200 theories)",
        failures,
        started.elapsed(),
    );
}
