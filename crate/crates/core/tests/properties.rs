//! Property tests: generator round-trips, evaluator/oracle agreement,
//! default-mode containment of strict mode, closure structure, and
//! longest-prefix lookup laws.

use std::collections::BTreeSet;

use proptest::prelude::*;

use datr_core::{
    closure_sentences, cross_check, delta_evaluate, evaluate_query, longest_prefix_lookup,
    oracle_evaluate, parse_theory, random_theory, render_theory, AtomSym, ClosureParams,
    Descriptor, EvalConfig, EvalOutcome, Path, Theory,
};

fn small_theory(seed: u64) -> Theory {
    let size = (seed % 6 + 1) as usize;
    random_theory(seed, size, 3, true)
}

/// Query paths up to `depth` over the generator's alphabet plus `_pad`.
fn query_paths(theory: &Theory, depth: usize) -> Vec<Path> {
    let params = ClosureParams::for_theory(theory, depth);
    let alphabet: Vec<AtomSym> = params.alphabet.into_iter().collect();
    let mut out = vec![Path::empty()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for stem in &layer {
            for a in &alphabet {
                let mut s: Vec<AtomSym> = stem.clone();
                s.push(a.clone());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned().map(Path::new));
        layer = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_theories_roundtrip(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let (reparsed, _) = parse_theory(&render_theory(&t)).expect("rendered theory parses");
        prop_assert_eq!(&t, &reparsed);
        let (again, _) = parse_theory(&render_theory(&reparsed)).expect("second render parses");
        prop_assert_eq!(&reparsed, &again);
    }

    #[test]
    fn evaluator_agrees_with_the_closure_oracle(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let report = cross_check(&t, &ClosureParams::for_theory(&t, 2));
        prop_assert!(report.agreed(), "seed {}: {}", seed, report);
    }

    #[test]
    fn delta_route_agrees_with_both(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let params = ClosureParams::for_theory(&t, 2);
        let cfg = EvalConfig { max_steps: params.step_budget, ..EvalConfig::default() };
        let nodes: Vec<_> = t.nodes().cloned().collect();
        for n in &nodes {
            for p in query_paths(&t, 2) {
                let (ev, _) = evaluate_query(&t, n, &p, &cfg);
                let cl = oracle_evaluate(&t, n, &p, &params);
                let dl = delta_evaluate(&t, n, &p, params.step_budget);
                if !ev.is_limit() && !dl.is_limit() {
                    prop_assert_eq!(&ev, &dl, "delta vs evaluator at {}:{}", n, &p);
                }
                if !cl.is_limit() && !dl.is_limit() {
                    prop_assert_eq!(&cl, &dl, "delta vs closure at {}:{}", n, &p);
                }
            }
        }
    }

    #[test]
    fn strict_values_are_contained_in_default_mode(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let strict = EvalConfig::strict();
        let default = EvalConfig::default();
        let nodes: Vec<_> = t.nodes().cloned().collect();
        for n in &nodes {
            for p in query_paths(&t, 2) {
                let (s, _) = evaluate_query(&t, n, &p, &strict);
                if let EvalOutcome::Value(_) = s {
                    let (d, _) = evaluate_query(&t, n, &p, &default);
                    prop_assert_eq!(&s, &d, "at {}:{}", n, &p);
                }
            }
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let cfg = EvalConfig { trace_enabled: true, ..EvalConfig::default() };
        let nodes: Vec<_> = t.nodes().cloned().collect();
        for n in &nodes {
            for p in query_paths(&t, 1) {
                let a = evaluate_query(&t, n, &p, &cfg);
                let b = evaluate_query(&t, n, &p, &cfg);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn closure_is_monotone_and_shadowing_unique(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let shallow = closure_sentences(&t, &ClosureParams::for_theory(&t, 1));
        let deep = closure_sentences(&t, &ClosureParams::for_theory(&t, 2));
        prop_assert!(shallow.is_subset(&deep));

        // One sentence per (node, path), derived from the longest explicit
        // prefix (recomputed here by scan).
        let mut seen = BTreeSet::new();
        for s in &deep {
            prop_assert!(seen.insert((s.node.clone(), s.lhs_path.clone())));
            let def = t.node_definition(&s.node);
            let best = def
                .entries()
                .keys()
                .filter(|p| p.is_prefix_of(s.lhs_path.atoms()))
                .max_by_key(|p| p.len())
                .expect("closure sentences come from explicit ones");
            let suffix = &s.lhs_path.atoms()[best.len()..];
            let reassembled = best.extended(suffix);
            prop_assert_eq!(
                s.lhs_path.atoms(),
                reassembled.atoms(),
                "closure path decomposes over its origin"
            );
        }
    }

    #[test]
    fn longest_prefix_lookup_laws(seed in 0u64..10_000) {
        let t = small_theory(seed);
        let nodes: Vec<_> = t.nodes().cloned().collect();
        for n in &nodes {
            let def = t.node_definition(n);
            for p in query_paths(&t, 2) {
                match longest_prefix_lookup(&def, &p) {
                    Some(m) => {
                        prop_assert_eq!(&m.explicit.extended(m.suffix.atoms()), &p);
                        prop_assert!(def.get(m.explicit).is_some());
                        for key in def.entries().keys() {
                            if key.is_prefix_of(p.atoms()) {
                                prop_assert!(key.len() <= m.explicit.len());
                            }
                        }
                    }
                    None => {
                        for key in def.entries().keys() {
                            prop_assert!(!key.is_prefix_of(p.atoms()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn atom_descriptors_ignore_context_and_extension(
        name in "[a-z][a-z0-9_]{0,6}",
        ext in proptest::collection::vec("[a-z]{1,3}", 0..4),
    ) {
        use datr_core::{Context, Evaluator, NodeSym, ValueSeq};
        let (t, _) = parse_theory("X: <> == .").unwrap();
        let cfg = EvalConfig::default();
        let mut ev = Evaluator::new(&t, &cfg);
        let ctx = Context::new(NodeSym::new("X"), ValueSeq::from_names(["p"]));
        let d = Descriptor::Atom(AtomSym::new(&name));
        let ext = ValueSeq::from_names(ext.iter().map(|s| s.as_str()));
        let out = ev.eval_descriptor(&ctx, &d, &ext);
        prop_assert_eq!(out, EvalOutcome::Value(ValueSeq::from_names([name.as_str()])));
    }
}
