//! Query evaluation.
//!
//! A query seeds the global context with its own node/path pair and then
//! resolves descriptors recursively. In default mode a lookup takes its
//! definition from the longest explicitly defined prefix of the queried
//! path, and the leftover suffix extends the paths built by the right-hand
//! side's inheritance descriptors. Strict mode requires exact path matches
//! and never extends, which isolates the non-default reading.
//!
//! Evaluation of one query is sequential; many queries may run against a
//! shared immutable [`Theory`] concurrently since the evaluator keeps no
//! cross-query state.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::model::{Descriptor, NodeSym, Path, Theory, ValueSeq};

pub const DEFAULT_MAX_STEPS: u64 = 10_000;

/// Hard bound on evaluation recursion. Inheritance chains consume stack
/// frames, so a runaway derivation is cut off here (reported as a limit
/// outcome) even when the step budget is configured far higher. Sized to
/// stay inside a 2 MiB thread stack.
const MAX_RECURSION_DEPTH: u32 = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum EvalMode {
    /// Exact-path matches only; no prefix defaulting.
    Strict,
    /// Longest-prefix defaulting; the product behavior.
    #[default]
    Default,
}

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub mode: EvalMode,
    pub max_steps: u64,
    pub trace_enabled: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            mode: EvalMode::Default,
            max_steps: DEFAULT_MAX_STEPS,
            trace_enabled: false,
        }
    }
}

impl EvalConfig {
    pub fn strict() -> Self {
        EvalConfig {
            mode: EvalMode::Strict,
            ..EvalConfig::default()
        }
    }
}

/// The global node/path pair threaded through evaluation. Seeded by the
/// query, overwritten by quoted descriptors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Context {
    pub node: NodeSym,
    pub path: ValueSeq,
}

impl Context {
    pub fn new(node: NodeSym, path: ValueSeq) -> Self {
        Context { node, path }
    }
}

impl core::fmt::Display for Context {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:", self.node)?;
        crate::model::write_path(f, self.path.atoms())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UndefinedReason {
    /// No explicitly defined prefix of the looked-up path (in strict mode:
    /// no exact entry).
    NoPrefix,
    /// The node has no definition at all.
    UnknownNode,
}

impl core::fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            UndefinedReason::NoPrefix => f.write_str("no-prefix"),
            UndefinedReason::UnknownNode => f.write_str("unknown-node"),
        }
    }
}

/// Result of evaluating a query: a value, a definedness gap (identifying
/// the failing local lookup), or an exhausted resource budget.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalOutcome {
    Value(ValueSeq),
    Undefined {
        reason: UndefinedReason,
        node: NodeSym,
        path: Path,
    },
    LimitExceeded {
        steps: u64,
    },
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&ValueSeq> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, EvalOutcome::LimitExceeded { .. })
    }
}

impl core::fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalOutcome::Value(v) if v.is_empty() => f.write_str("()"),
            EvalOutcome::Value(v) => write!(f, "{}", v),
            EvalOutcome::Undefined { reason, node, path } => {
                write!(f, "UNDEFINED ({} at {}:{})", reason, node, path)
            }
            EvalOutcome::LimitExceeded { steps } => {
                write!(f, "LIMIT EXCEEDED ({} steps)", steps)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraceKind {
    Lookup,
    Descriptor,
    ContextSwitch,
}

impl core::fmt::Display for TraceKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TraceKind::Lookup => f.write_str("lookup"),
            TraceKind::Descriptor => f.write_str("descriptor"),
            TraceKind::ContextSwitch => f.write_str("context-switch"),
        }
    }
}

/// One trace record. `step` is the trace ordinal (strictly increasing over
/// a query), which is distinct from the budget accounting: lookups and
/// context switches are traced but only descriptor evaluations cost steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceEvent {
    pub step: u64,
    pub kind: TraceKind,
    pub global: Context,
    pub local_node: NodeSym,
    pub local_path: ValueSeq,
    pub detail: String,
}

/// Stable line format: `step<TAB>kind<TAB>global=N:<p><TAB>local=N:<p><TAB>detail`.
impl core::fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{}\t{}\tglobal={}\tlocal={}:",
            self.step, self.kind, self.global, self.local_node
        )?;
        crate::model::write_path(f, self.local_path.atoms())?;
        write!(f, "\t{}", self.detail)
    }
}

enum Halt {
    Undefined {
        reason: UndefinedReason,
        node: NodeSym,
        path: Path,
    },
    Limit(u64),
}

fn undefined(reason: UndefinedReason, node: &NodeSym, path: &ValueSeq) -> Halt {
    Halt::Undefined {
        reason,
        node: node.clone(),
        path: Path::new(path.atoms().to_vec()),
    }
}

fn into_outcome(r: Result<ValueSeq, Halt>) -> EvalOutcome {
    match r {
        Ok(v) => EvalOutcome::Value(v),
        Err(Halt::Undefined { reason, node, path }) => {
            EvalOutcome::Undefined { reason, node, path }
        }
        Err(Halt::Limit(steps)) => EvalOutcome::LimitExceeded { steps },
    }
}

/// Per-query evaluation state over an immutable theory.
pub struct Evaluator<'a> {
    theory: &'a Theory,
    cfg: &'a EvalConfig,
    steps: u64,
    depth: u32,
    trace: Vec<TraceEvent>,
    next_event: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(theory: &'a Theory, cfg: &'a EvalConfig) -> Self {
        Evaluator {
            theory,
            cfg,
            steps: 0,
            depth: 0,
            trace: Vec::new(),
            next_event: 1,
        }
    }

    pub fn steps_used(&self) -> u64 {
        self.steps
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        core::mem::take(&mut self.trace)
    }

    /// Looks up `path` at `node` under global context `ctx` and evaluates
    /// the selected right-hand side.
    pub fn eval_local(&mut self, ctx: &Context, node: &NodeSym, path: &ValueSeq) -> EvalOutcome {
        into_outcome(self.local(ctx, node, path))
    }

    /// Evaluates one descriptor at path extension `ext`.
    pub fn eval_descriptor(
        &mut self,
        ctx: &Context,
        d: &Descriptor,
        ext: &ValueSeq,
    ) -> EvalOutcome {
        let encl = ctx.node.clone();
        into_outcome(self.descriptor(ctx, &encl, d, ext))
    }

    /// Evaluates a descriptor sequence at extension `ext`, concatenating
    /// the member values left to right. The empty sequence denotes the
    /// empty value.
    pub fn eval_sequence(
        &mut self,
        ctx: &Context,
        descs: &[Descriptor],
        ext: &ValueSeq,
    ) -> EvalOutcome {
        let encl = ctx.node.clone();
        into_outcome(self.sequence(ctx, &encl, descs, ext))
    }

    fn event(
        &mut self,
        kind: TraceKind,
        global: &Context,
        local_node: &NodeSym,
        local_path: &ValueSeq,
        detail: String,
    ) {
        if !self.cfg.trace_enabled {
            return;
        }
        self.trace.push(TraceEvent {
            step: self.next_event,
            kind,
            global: global.clone(),
            local_node: local_node.clone(),
            local_path: local_path.clone(),
            detail,
        });
        self.next_event += 1;
    }

    fn charge_step(&mut self) -> Result<(), Halt> {
        if self.steps >= self.cfg.max_steps {
            return Err(Halt::Limit(self.steps));
        }
        self.steps += 1;
        Ok(())
    }

    fn local(&mut self, ctx: &Context, node: &NodeSym, path: &ValueSeq) -> Result<ValueSeq, Halt> {
        if self.depth >= MAX_RECURSION_DEPTH {
            return Err(Halt::Limit(self.steps));
        }
        self.depth += 1;
        let r = self.local_inner(ctx, node, path);
        self.depth -= 1;
        r
    }

    fn local_inner(
        &mut self,
        ctx: &Context,
        node: &NodeSym,
        path: &ValueSeq,
    ) -> Result<ValueSeq, Halt> {
        let def = self.theory.node_definition(node);
        if def.is_empty() {
            return Err(undefined(UndefinedReason::UnknownNode, node, path));
        }
        let found = match self.cfg.mode {
            EvalMode::Default => def.longest_prefix(path.atoms()),
            EvalMode::Strict => def.exact(path.atoms()),
        };
        let Some(m) = found else {
            return Err(undefined(UndefinedReason::NoPrefix, node, path));
        };
        self.event(TraceKind::Lookup, ctx, node, path, m.explicit.to_string());
        let rhs = m.rhs;
        let ext = ValueSeq::from(m.suffix);
        self.sequence(ctx, node, rhs, &ext)
    }

    fn sequence(
        &mut self,
        ctx: &Context,
        encl: &NodeSym,
        descs: &[Descriptor],
        ext: &ValueSeq,
    ) -> Result<ValueSeq, Halt> {
        let mut out = ValueSeq::empty();
        for d in descs {
            let v = self.descriptor(ctx, encl, d, ext)?;
            out.append(&v);
        }
        Ok(out)
    }

    /// Subterms of an inheritance descriptor are evaluated at the empty
    /// extension; the suffix only extends the assembled lookup path.
    fn subterm_values(
        &mut self,
        ctx: &Context,
        encl: &NodeSym,
        subs: &[Descriptor],
    ) -> Result<ValueSeq, Halt> {
        let empty = ValueSeq::empty();
        self.sequence(ctx, encl, subs, &empty)
    }

    fn descriptor(
        &mut self,
        ctx: &Context,
        encl: &NodeSym,
        d: &Descriptor,
        ext: &ValueSeq,
    ) -> Result<ValueSeq, Halt> {
        self.charge_step()?;
        self.event(TraceKind::Descriptor, ctx, encl, ext, d.to_string());
        match d {
            // Atoms are constant functions: the extension is ignored.
            Descriptor::Atom(a) => Ok(ValueSeq::single(a.clone())),
            Descriptor::LocalNodePath(n, subs) => {
                let mut target = self.subterm_values(ctx, encl, subs)?;
                target.append(ext);
                self.local(ctx, n, &target)
            }
            Descriptor::GlobalNodePath(n, subs) => {
                let mut target = self.subterm_values(ctx, encl, subs)?;
                target.append(ext);
                let switched = Context::new(n.clone(), target.clone());
                self.event(
                    TraceKind::ContextSwitch,
                    &switched,
                    n,
                    &target,
                    d.to_string(),
                );
                self.local(&switched, n, &target)
            }
            Descriptor::GlobalPath(subs) => {
                let mut target = self.subterm_values(ctx, encl, subs)?;
                target.append(ext);
                let node = ctx.node.clone();
                let switched = Context::new(node.clone(), target.clone());
                self.event(
                    TraceKind::ContextSwitch,
                    &switched,
                    &node,
                    &target,
                    d.to_string(),
                );
                self.local(&switched, &node, &target)
            }
            // A quoted node keeps the global path as-is; the extension is
            // not appended, since that path already reflects the full
            // extended query.
            Descriptor::GlobalNode(n) => {
                let target = ctx.path.clone();
                let switched = Context::new(n.clone(), target.clone());
                self.event(
                    TraceKind::ContextSwitch,
                    &switched,
                    n,
                    &target,
                    d.to_string(),
                );
                self.local(&switched, n, &target)
            }
        }
    }
}

/// Evaluates `node:path` against `theory`, seeding the global context with
/// the query itself. Deterministic: identical inputs give identical
/// outcomes and traces.
pub fn evaluate_query(
    theory: &Theory,
    node: &NodeSym,
    path: &Path,
    cfg: &EvalConfig,
) -> (EvalOutcome, Vec<TraceEvent>) {
    let mut ev = Evaluator::new(theory, cfg);
    let seed = ValueSeq::from(path.clone());
    let ctx = Context::new(node.clone(), seed.clone());
    let outcome = ev.eval_local(&ctx, node, &seed);
    let trace = ev.take_trace();
    (outcome, trace)
}
