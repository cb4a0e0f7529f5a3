//! DATR: a declarative language for lexical knowledge, built on path/value
//! equations with non-monotonic default inheritance.
//!
//! This crate holds everything that does not touch the filesystem: the
//! theory model ([`model`]), the concrete syntax ([`parser`]), query
//! evaluation with local/global inheritance and prefix defaulting
//! ([`eval`]), and a brute-force oracle that cross-validates the default
//! mechanism ([`oracle`]). The companion `datr-cli` crate layers file
//! handling and a command-line interface on top.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod eval;
pub mod model;
pub mod oracle;
pub mod parser;

pub use eval::{
    evaluate_query, Context, EvalConfig, EvalMode, EvalOutcome, Evaluator, TraceEvent, TraceKind,
    UndefinedReason, DEFAULT_MAX_STEPS,
};
pub use model::{
    longest_prefix_lookup, AtomSym, DefSentence, Descriptor, DuplicateError, GoalSentence, NodeDef,
    NodeSym, Path, PrefixMatch, Theory, ValueSeq,
};
pub use oracle::{
    closure_sentences, cross_check, delta_evaluate, oracle_evaluate, random_theory, ClosureParams,
    CrossCheckReport, Mismatch, PAD_ATOM,
};
pub use parser::{
    parse_goals, parse_query, parse_theory, render_sentence, render_theory, Diagnostic, Severity,
    SourceSpan,
};
