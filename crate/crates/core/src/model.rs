//! Abstract syntax and theory store for DATR.
//!
//! A theory maps `(node, path)` pairs to sequences of value descriptors.
//! Node and atom symbols live in disjoint namespaces, values and paths are
//! atom sequences, and the store enforces functionality: at most one
//! right-hand side per `(node, path)` key. [`NodeDef`] exposes the
//! longest-prefix lookup that drives the default mechanism.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

/// An uninterpreted symbol. Values and path elements are atom sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomSym(Arc<str>);

impl AtomSym {
    /// Panics on an empty name; atoms are always non-empty symbol text.
    pub fn new(name: &str) -> Self {
        assert!(!name.is_empty(), "atom name must be non-empty");
        AtomSym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AtomSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A node name. Nodes name partial functions from paths to values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeSym(Arc<str>);

impl NodeSym {
    /// Panics on an empty name; nodes are always non-empty symbol text.
    pub fn new(name: &str) -> Self {
        assert!(!name.is_empty(), "node name must be non-empty");
        NodeSym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn write_atoms_spaced(f: &mut fmt::Formatter<'_>, atoms: &[AtomSym]) -> fmt::Result {
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(a.as_str())?;
    }
    Ok(())
}

pub(crate) fn write_path(f: &mut fmt::Formatter<'_>, atoms: &[AtomSym]) -> fmt::Result {
    f.write_str("<")?;
    write_atoms_spaced(f, atoms)?;
    f.write_str(">")
}

/// A lookup key: a possibly empty atom sequence in angle brackets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Path(Vec<AtomSym>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn new(atoms: Vec<AtomSym>) -> Self {
        Path(atoms)
    }

    pub fn from_names<'n, I: IntoIterator<Item = &'n str>>(names: I) -> Self {
        Path(names.into_iter().map(AtomSym::new).collect())
    }

    pub fn atoms(&self) -> &[AtomSym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when `self` is a (non-strict) prefix of `other`.
    pub fn is_prefix_of(&self, other: &[AtomSym]) -> bool {
        other.len() >= self.0.len() && &other[..self.0.len()] == self.0.as_slice()
    }

    pub fn extended(&self, suffix: &[AtomSym]) -> Path {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(suffix);
        Path(atoms)
    }
}

// Keys in definition maps are probed with atom slices, so Path must order
// and compare exactly like its underlying slice.
impl Borrow<[AtomSym]> for Path {
    fn borrow(&self) -> &[AtomSym] {
        &self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_path(f, &self.0)
    }
}

impl From<ValueSeq> for Path {
    fn from(v: ValueSeq) -> Path {
        Path(v.0)
    }
}

/// A semantic value: an atom sequence. Same shape as [`Path`], kept as a
/// distinct role (query results and context paths rather than lookup keys).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ValueSeq(Vec<AtomSym>);

impl ValueSeq {
    pub fn empty() -> Self {
        ValueSeq(Vec::new())
    }

    pub fn new(atoms: Vec<AtomSym>) -> Self {
        ValueSeq(atoms)
    }

    pub fn single(atom: AtomSym) -> Self {
        ValueSeq(alloc::vec![atom])
    }

    pub fn from_names<'n, I: IntoIterator<Item = &'n str>>(names: I) -> Self {
        ValueSeq(names.into_iter().map(AtomSym::new).collect())
    }

    pub fn atoms(&self) -> &[AtomSym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, atom: AtomSym) {
        self.0.push(atom);
    }

    pub fn append(&mut self, other: &ValueSeq) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &ValueSeq) -> ValueSeq {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        ValueSeq(atoms)
    }
}

impl From<Path> for ValueSeq {
    fn from(p: Path) -> ValueSeq {
        ValueSeq(p.0)
    }
}

/// Atoms joined by single spaces; the empty value displays as nothing.
impl fmt::Display for ValueSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atoms_spaced(f, &self.0)
    }
}

/// A right-hand-side term: an atom or one of the four inheritance forms.
/// Path arguments are descriptor sequences, which is what makes paths
/// evaluable: subterms are reduced to atoms before the lookup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Descriptor {
    Atom(AtomSym),
    /// `N:<d1 .. dn>` — lookup at another node, global context untouched.
    LocalNodePath(NodeSym, Vec<Descriptor>),
    /// `"N:<d1 .. dn>"` — lookup that overwrites the global context.
    GlobalNodePath(NodeSym, Vec<Descriptor>),
    /// `"<d1 .. dn>"` — node taken from the global context.
    GlobalPath(Vec<Descriptor>),
    /// `"N"` — path taken from the global context.
    GlobalNode(NodeSym),
}

fn write_subterms(f: &mut fmt::Formatter<'_>, subs: &[Descriptor]) -> fmt::Result {
    f.write_str("<")?;
    for (i, d) in subs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{}", d)?;
    }
    f.write_str(">")
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Atom(a) => write!(f, "{}", a),
            Descriptor::LocalNodePath(n, subs) => {
                write!(f, "{}:", n)?;
                write_subterms(f, subs)
            }
            Descriptor::GlobalNodePath(n, subs) => {
                write!(f, "\"{}:", n)?;
                write_subterms(f, subs)?;
                f.write_str("\"")
            }
            Descriptor::GlobalPath(subs) => {
                f.write_str("\"")?;
                write_subterms(f, subs)?;
                f.write_str("\"")
            }
            Descriptor::GlobalNode(n) => write!(f, "\"{}\"", n),
        }
    }
}

/// One definitional sentence `N:P == d1 .. dn .` (rhs may be empty).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DefSentence {
    pub node: NodeSym,
    pub lhs_path: Path,
    pub rhs: Vec<Descriptor>,
}

impl DefSentence {
    pub fn new(node: NodeSym, lhs_path: Path, rhs: Vec<Descriptor>) -> Self {
        DefSentence {
            node,
            lhs_path,
            rhs,
        }
    }
}

/// Canonical unabbreviated rendering, e.g. `Walk: <mor root> == walk .`
impl fmt::Display for DefSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ==", self.node, self.lhs_path)?;
        for d in &self.rhs {
            write!(f, " {}", d)?;
        }
        f.write_str(" .")
    }
}

/// A goal: either an assertion `N:P = a1 .. an .` or a bare query `N:P ?`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoalSentence {
    pub node: NodeSym,
    pub path: Path,
    pub expected: Option<ValueSeq>,
}

impl fmt::Display for GoalSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.node, self.path)?;
        match &self.expected {
            Some(v) => {
                write!(f, " =")?;
                for a in v.atoms() {
                    write!(f, " {}", a)?;
                }
                f.write_str(" .")
            }
            None => f.write_str(" ?"),
        }
    }
}

/// Two different right-hand sides were given for the same `(node, path)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DuplicateError {
    pub node: NodeSym,
    pub path: Path,
    pub existing: Vec<Descriptor>,
    pub incoming: Vec<Descriptor>,
}

fn rhs_to_string(rhs: &[Descriptor]) -> String {
    use alloc::string::ToString;
    let mut out = String::new();
    for (i, d) in rhs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&d.to_string());
    }
    out
}

impl fmt::Display for DuplicateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "duplicate definition of {}:{}: already `== {}`, now `== {}`",
            self.node,
            self.path,
            rhs_to_string(&self.existing),
            rhs_to_string(&self.incoming)
        )
    }
}

/// A functional, definitional theory: per node, a map from explicit paths
/// to descriptor sequences. Immutable once built; construction goes through
/// [`Theory::add_sentence`], which rejects conflicting re-definitions.
#[derive(Clone, Debug, Default)]
pub struct Theory {
    sentences: BTreeMap<NodeSym, BTreeMap<Path, Vec<Descriptor>>>,
    node_order: Vec<NodeSym>,
}

/// Theory equality is equality of the sentence maps; declaration order is
/// presentation detail only.
impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.sentences == other.sentences
    }
}

impl Eq for Theory {}

impl Theory {
    pub fn new() -> Self {
        Theory::default()
    }

    /// Adds a sentence, recording the node on first mention. Re-asserting an
    /// identical sentence is accepted idempotently; a different rhs for an
    /// existing `(node, path)` is a functionality violation.
    pub fn add_sentence(&mut self, s: DefSentence) -> Result<(), DuplicateError> {
        let DefSentence {
            node,
            lhs_path,
            rhs,
        } = s;
        if !self.sentences.contains_key(&node) {
            self.node_order.push(node.clone());
            self.sentences.insert(node.clone(), BTreeMap::new());
        }
        let entries = self.sentences.get_mut(&node).expect("node just inserted");
        if let Some(existing) = entries.get(&lhs_path) {
            if *existing == rhs {
                return Ok(());
            }
            return Err(DuplicateError {
                node,
                path: lhs_path,
                existing: existing.clone(),
                incoming: rhs,
            });
        }
        entries.insert(lhs_path, rhs);
        Ok(())
    }

    pub fn contains_node(&self, n: &NodeSym) -> bool {
        self.sentences.contains_key(n)
    }

    /// Nodes in declaration order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeSym> {
        self.node_order.iter()
    }

    pub fn node_count(&self) -> usize {
        self.node_order.len()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.values().map(|m| m.len()).sum()
    }

    /// Sentences in declaration order of nodes, paths lexicographic within
    /// a node.
    pub fn iter(&self) -> impl Iterator<Item = (&NodeSym, &Path, &[Descriptor])> {
        self.node_order.iter().flat_map(move |n| {
            self.sentences[n]
                .iter()
                .map(move |(p, rhs)| (n, p, rhs.as_slice()))
        })
    }

    /// The restriction of the theory to `n`; empty when `n` is unknown.
    pub fn node_definition(&self, n: &NodeSym) -> NodeDef<'_> {
        static EMPTY: BTreeMap<Path, Vec<Descriptor>> = BTreeMap::new();
        NodeDef {
            owner: n.clone(),
            entries: self.sentences.get(n).unwrap_or(&EMPTY),
        }
    }

    /// Every atom occurring in the theory: path elements, atom descriptors,
    /// and descriptor subterms at any nesting depth.
    pub fn atoms(&self) -> BTreeSet<AtomSym> {
        let mut out = BTreeSet::new();
        for (_, path, rhs) in self.iter() {
            out.extend(path.atoms().iter().cloned());
            for d in rhs {
                collect_descriptor_atoms(d, &mut out);
            }
        }
        out
    }
}

fn collect_descriptor_atoms(d: &Descriptor, out: &mut BTreeSet<AtomSym>) {
    match d {
        Descriptor::Atom(a) => {
            out.insert(a.clone());
        }
        Descriptor::LocalNodePath(_, subs)
        | Descriptor::GlobalNodePath(_, subs)
        | Descriptor::GlobalPath(subs) => {
            for s in subs {
                collect_descriptor_atoms(s, out);
            }
        }
        Descriptor::GlobalNode(_) => {}
    }
}

/// Borrowed view of one node's definition.
#[derive(Clone, Debug)]
pub struct NodeDef<'a> {
    owner: NodeSym,
    entries: &'a BTreeMap<Path, Vec<Descriptor>>,
}

/// Result of a longest-prefix lookup: `explicit ++ suffix` reassembles the
/// queried path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixMatch<'a> {
    pub explicit: &'a Path,
    pub rhs: &'a [Descriptor],
    pub suffix: Path,
}

impl<'a> NodeDef<'a> {
    pub fn owner(&self) -> &NodeSym {
        &self.owner
    }

    pub fn entries(&self) -> &'a BTreeMap<Path, Vec<Descriptor>> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, path: &Path) -> Option<&'a [Descriptor]> {
        self.entries.get(path).map(|v| v.as_slice())
    }

    /// The longest explicitly defined prefix of `atoms`, if any.
    /// Functionality makes the result unique: prefixes of a path of a given
    /// length are unique, so no tie-breaking exists.
    pub fn longest_prefix(&self, atoms: &[AtomSym]) -> Option<PrefixMatch<'a>> {
        for len in (0..=atoms.len()).rev() {
            if let Some((explicit, rhs)) = self.entries.get_key_value(&atoms[..len]) {
                return Some(PrefixMatch {
                    explicit,
                    rhs,
                    suffix: Path::new(atoms[len..].to_vec()),
                });
            }
        }
        None
    }

    /// Exact-path lookup, presented as a match with an empty suffix.
    pub fn exact(&self, atoms: &[AtomSym]) -> Option<PrefixMatch<'a>> {
        self.entries
            .get_key_value(atoms)
            .map(|(explicit, rhs)| PrefixMatch {
                explicit,
                rhs,
                suffix: Path::empty(),
            })
    }
}

/// Longest-prefix definition lookup at a node definition.
pub fn longest_prefix_lookup<'a>(def: &NodeDef<'a>, p: &Path) -> Option<PrefixMatch<'a>> {
    def.longest_prefix(p.atoms())
}
