//! Concrete syntax for theory (`.dtr`) and goal (`.dtg`) files.
//!
//! Lexical rules: identifiers are alphanumerics plus `_`; an initial
//! uppercase letter makes a token a node, anything else an atom. Paths are
//! `<`-`>` delimited with whitespace-separated elements, definitions use
//! `==`, goals use `=`, sentences end with `.`, and `%` starts a comment
//! running to end of line. Input is UTF-8 with LF or CRLF line endings.
//!
//! The parser desugars the usual abbreviations into the core terms:
//! within a node block the node name is implicit after the first clause;
//! a bare node `N` on the right abbreviates `N:<lhs path>`; a bare path
//! `<..>` abbreviates `Node:<..>` for the sentence's own node. Quoted
//! descriptors parse directly to their global forms, since the missing
//! node or path is supplied by the global context at evaluation time.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::model::{
    AtomSym, DefSentence, Descriptor, GoalSentence, NodeSym, Path, Theory, ValueSeq,
};

/// Location of a token in the source, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse-time report. Errors prevent a theory from being produced,
/// warnings do not.
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub code: &'static str,
}

impl core::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.span.line, self.span.column, sev, self.code, self.message
        )
    }
}

/// Stable diagnostic codes.
pub mod codes {
    pub const SYNTAX: &str = "syntax";
    pub const DUPLICATE: &str = "duplicate-definition";
    pub const UNKNOWN_NODE: &str = "unknown-node";
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Node(String),
    Atom(String),
    Lt,
    Gt,
    DefEq,
    GoalEq,
    Dot,
    Colon,
    Quote,
    Question,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Node(n) => format!("node `{}`", n),
            Tok::Atom(a) => format!("atom `{}`", a),
            Tok::Lt => "`<`".to_string(),
            Tok::Gt => "`>`".to_string(),
            Tok::DefEq => "`==`".to_string(),
            Tok::GoalEq => "`=`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Colon => "`:`".to_string(),
            Tok::Quote => "`\"`".to_string(),
            Tok::Question => "`?`".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();

    macro_rules! span {
        ($len:expr) => {
            SourceSpan {
                line,
                column: col,
                length: $len,
            }
        };
    }

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            '\r' | ' ' | '\t' => {
                chars.next();
                col += 1;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '<' => {
                tokens.push(Token {
                    tok: Tok::Lt,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            '>' => {
                tokens.push(Token {
                    tok: Tok::Gt,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            '.' => {
                tokens.push(Token {
                    tok: Tok::Dot,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            ':' => {
                tokens.push(Token {
                    tok: Tok::Colon,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            '"' => {
                tokens.push(Token {
                    tok: Tok::Quote,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            '?' => {
                tokens.push(Token {
                    tok: Tok::Question,
                    span: span!(1),
                });
                chars.next();
                col += 1;
            }
            '=' => {
                chars.next();
                let start = col;
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    tokens.push(Token {
                        tok: Tok::DefEq,
                        span: SourceSpan {
                            line,
                            column: start,
                            length: 2,
                        },
                    });
                } else {
                    tokens.push(Token {
                        tok: Tok::GoalEq,
                        span: SourceSpan {
                            line,
                            column: start,
                            length: 1,
                        },
                    });
                }
            }
            c if is_ident_char(c) => {
                let start = col;
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    ident.push(c);
                    chars.next();
                    col += 1;
                }
                let span = SourceSpan {
                    line,
                    column: start,
                    length: ident.chars().count() as u32,
                };
                let tok = if ident.chars().next().is_some_and(|c| c.is_uppercase()) {
                    Tok::Node(ident)
                } else {
                    Tok::Atom(ident)
                };
                tokens.push(Token { tok, span });
            }
            other => {
                diags.push(Diagnostic {
                    severity: Severity::Error,
                    span: span!(1),
                    message: format!("unexpected character `{}`", other),
                    code: codes::SYNTAX,
                });
                chars.next();
                col += 1;
            }
        }
    }
    (tokens, diags)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    /// Node references seen on right-hand sides, for unknown-node warnings.
    node_refs: Vec<(NodeSym, SourceSpan)>,
}

impl Parser {
    fn new(tokens: Vec<Token>, diags: Vec<Diagnostic>) -> Self {
        Parser {
            tokens,
            pos: 0,
            diags,
            node_refs: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn span_here(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| t.span)
            .unwrap_or(SourceSpan {
                line: 1,
                column: 1,
                length: 0,
            })
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&mut self, span: SourceSpan, message: String) {
        self.diags.push(Diagnostic {
            severity: Severity::Error,
            span,
            message,
            code: codes::SYNTAX,
        });
    }

    fn error_here(&mut self, message: String) {
        let span = self.span_here();
        self.error(span, message);
    }

    fn found_description(&self) -> String {
        match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        }
    }

    /// Sentence-level resynchronization: skip past the next terminator.
    fn resync(&mut self) {
        while let Some(t) = self.advance() {
            if matches!(t.tok, Tok::Dot | Tok::Question) {
                break;
            }
        }
    }

    fn expect(&mut self, want: &Tok) -> Result<Token, ()> {
        match self.peek() {
            Some(t) if t == want => Ok(self.advance().expect("peeked")),
            _ => {
                let found = self.found_description();
                self.error_here(format!("expected {}, found {}", want.describe(), found));
                Err(())
            }
        }
    }

    /// `<a1 .. an>`: a plain atom path, as used on left-hand sides and in
    /// goals.
    fn simple_path(&mut self) -> Result<Path, ()> {
        self.expect(&Tok::Lt)?;
        let mut atoms = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Atom(_)) => {
                    if let Some(Token {
                        tok: Tok::Atom(a), ..
                    }) = self.advance()
                    {
                        atoms.push(AtomSym::new(&a));
                    }
                }
                Some(Tok::Gt) => {
                    self.advance();
                    return Ok(Path::new(atoms));
                }
                Some(Tok::Node(_)) => {
                    self.error_here("node name not allowed as a path element".to_string());
                    return Err(());
                }
                Some(Tok::Dot) | None => {
                    self.error_here("unterminated path".to_string());
                    return Err(());
                }
                Some(_) => {
                    let found = self.found_description();
                    self.error_here(format!("expected atom or `>` in path, found {}", found));
                    return Err(());
                }
            }
        }
    }

    /// `<d1 .. dn>` where each element is a full descriptor (evaluable
    /// path). `node` and `lhs_path` feed the bare-node/bare-path desugaring
    /// of nested elements.
    fn descriptor_path(&mut self, node: &NodeSym, lhs_path: &Path) -> Result<Vec<Descriptor>, ()> {
        self.expect(&Tok::Lt)?;
        let mut subs = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Gt) => {
                    self.advance();
                    return Ok(subs);
                }
                Some(Tok::Dot) | None => {
                    self.error_here("unterminated path".to_string());
                    return Err(());
                }
                Some(_) => subs.push(self.descriptor(node, lhs_path)?),
            }
        }
    }

    fn descriptor(&mut self, node: &NodeSym, lhs_path: &Path) -> Result<Descriptor, ()> {
        match self.peek() {
            Some(Tok::Atom(_)) => {
                if let Some(Token {
                    tok: Tok::Atom(a), ..
                }) = self.advance()
                {
                    Ok(Descriptor::Atom(AtomSym::new(&a)))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::Node(_)) => {
                let tok = self.advance().expect("peeked");
                let Tok::Node(name) = tok.tok else {
                    unreachable!()
                };
                let n = NodeSym::new(&name);
                self.node_refs.push((n.clone(), tok.span));
                if self.peek() == Some(&Tok::Colon) {
                    self.advance();
                    let subs = self.descriptor_path(node, lhs_path)?;
                    Ok(Descriptor::LocalNodePath(n, subs))
                } else {
                    // Bare node: inherit at this sentence's own path.
                    let subs = lhs_path
                        .atoms()
                        .iter()
                        .map(|a| Descriptor::Atom(a.clone()))
                        .collect();
                    Ok(Descriptor::LocalNodePath(n, subs))
                }
            }
            Some(Tok::Lt) => {
                // Bare path: inherit at this sentence's own node.
                let subs = self.descriptor_path(node, lhs_path)?;
                Ok(Descriptor::LocalNodePath(node.clone(), subs))
            }
            Some(Tok::Quote) => {
                self.advance();
                match self.peek() {
                    Some(Tok::Node(_)) => {
                        let tok = self.advance().expect("peeked");
                        let Tok::Node(name) = tok.tok else {
                            unreachable!()
                        };
                        let n = NodeSym::new(&name);
                        self.node_refs.push((n.clone(), tok.span));
                        if self.peek() == Some(&Tok::Colon) {
                            self.advance();
                            let subs = self.descriptor_path(node, lhs_path)?;
                            self.expect(&Tok::Quote)?;
                            Ok(Descriptor::GlobalNodePath(n, subs))
                        } else {
                            self.expect(&Tok::Quote)?;
                            Ok(Descriptor::GlobalNode(n))
                        }
                    }
                    Some(Tok::Lt) => {
                        let subs = self.descriptor_path(node, lhs_path)?;
                        self.expect(&Tok::Quote)?;
                        Ok(Descriptor::GlobalPath(subs))
                    }
                    _ => {
                        let found = self.found_description();
                        self.error_here(format!(
                            "expected node or path inside quoted descriptor, found {}",
                            found
                        ));
                        Err(())
                    }
                }
            }
            _ => {
                let found = self.found_description();
                self.error_here(format!("expected value descriptor, found {}", found));
                Err(())
            }
        }
    }

    fn rhs(&mut self, node: &NodeSym, lhs_path: &Path) -> Result<Vec<Descriptor>, ()> {
        let mut rhs = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.advance();
                    return Ok(rhs);
                }
                None => {
                    self.error_here("missing sentence terminator `.`".to_string());
                    return Err(());
                }
                Some(_) => rhs.push(self.descriptor(node, lhs_path)?),
            }
        }
    }
}

/// Parses a theory file. Warnings ride along with a successful parse;
/// any error-severity diagnostic yields `Err` with everything collected.
pub fn parse_theory(text: &str) -> Result<(Theory, Vec<Diagnostic>), Vec<Diagnostic>> {
    let (tokens, lex_diags) = lex(text);
    let mut p = Parser::new(tokens, lex_diags);
    let mut theory = Theory::new();
    let mut current_node: Option<NodeSym> = None;

    while p.peek().is_some() {
        // Node header, or a node-elided clause continuing the current block.
        let node = match (p.peek(), p.peek_at(1)) {
            (Some(Tok::Node(_)), Some(Tok::Colon)) => {
                let tok = p.advance().expect("peeked");
                p.advance();
                let Tok::Node(name) = tok.tok else {
                    unreachable!()
                };
                let n = NodeSym::new(&name);
                current_node = Some(n.clone());
                n
            }
            (Some(Tok::Lt), _) => match &current_node {
                Some(n) => n.clone(),
                None => {
                    p.error_here("path clause before any node header".to_string());
                    p.resync();
                    continue;
                }
            },
            _ => {
                let found = p.found_description();
                p.error_here(format!(
                    "expected a node header or a path clause, found {}",
                    found
                ));
                p.resync();
                continue;
            }
        };

        let clause_span = p.span_here();
        let Ok(lhs_path) = p.simple_path() else {
            p.resync();
            continue;
        };
        if p.expect(&Tok::DefEq).is_err() {
            p.resync();
            continue;
        }
        let Ok(rhs) = p.rhs(&node, &lhs_path) else {
            p.resync();
            continue;
        };
        if let Err(dup) = theory.add_sentence(DefSentence::new(node, lhs_path, rhs)) {
            p.diags.push(Diagnostic {
                severity: Severity::Error,
                span: clause_span,
                message: dup.to_string(),
                code: codes::DUPLICATE,
            });
        }
    }

    for (n, span) in &p.node_refs {
        if !theory.contains_node(n) {
            p.diags.push(Diagnostic {
                severity: Severity::Warning,
                span: *span,
                message: format!("node `{}` is referenced but never defined", n),
                code: codes::UNKNOWN_NODE,
            });
        }
    }

    if p.diags.iter().any(|d| d.severity == Severity::Error) {
        Err(p.diags)
    } else {
        Ok((theory, p.diags))
    }
}

/// Parses a goal file: assertions `N:<..> = a1 .. an .` and bare queries
/// `N:<..> ?`. Malformed goals become diagnostics; well-formed goals are
/// still returned.
pub fn parse_goals(text: &str) -> (Vec<GoalSentence>, Vec<Diagnostic>) {
    let (tokens, lex_diags) = lex(text);
    let mut p = Parser::new(tokens, lex_diags);
    let mut goals = Vec::new();

    while p.peek().is_some() {
        match goal_sentence(&mut p) {
            Ok(g) => goals.push(g),
            Err(()) => p.resync(),
        }
    }
    (goals, p.diags)
}

fn goal_sentence(p: &mut Parser) -> Result<GoalSentence, ()> {
    let node = match p.peek() {
        Some(Tok::Node(_)) => {
            let tok = p.advance().expect("peeked");
            let Tok::Node(name) = tok.tok else {
                unreachable!()
            };
            NodeSym::new(&name)
        }
        _ => {
            let found = p.found_description();
            p.error_here(format!("expected node at start of goal, found {}", found));
            return Err(());
        }
    };
    p.expect(&Tok::Colon)?;
    let path = p.simple_path()?;
    match p.peek() {
        Some(Tok::GoalEq) => {
            p.advance();
            let mut atoms = Vec::new();
            loop {
                match p.peek() {
                    Some(Tok::Atom(_)) => {
                        if let Some(Token {
                            tok: Tok::Atom(a), ..
                        }) = p.advance()
                        {
                            atoms.push(AtomSym::new(&a));
                        }
                    }
                    Some(Tok::Dot) => {
                        p.advance();
                        return Ok(GoalSentence {
                            node,
                            path,
                            expected: Some(ValueSeq::new(atoms)),
                        });
                    }
                    _ => {
                        let found = p.found_description();
                        p.error_here(format!(
                            "expected atom or `.` in goal value, found {}",
                            found
                        ));
                        return Err(());
                    }
                }
            }
        }
        Some(Tok::Question) => {
            p.advance();
            Ok(GoalSentence {
                node,
                path,
                expected: None,
            })
        }
        _ => {
            let found = p.found_description();
            p.error_here(format!(
                "expected `=` or `?` after goal path, found {}",
                found
            ));
            Err(())
        }
    }
}

/// Parses a single query of the form `N:<a1 .. an>` (a trailing `?` is
/// accepted), as taken on the command line.
pub fn parse_query(text: &str) -> Result<(NodeSym, Path), Vec<Diagnostic>> {
    let (tokens, lex_diags) = lex(text);
    let mut p = Parser::new(tokens, lex_diags);
    let result = (|p: &mut Parser| {
        let node = match p.peek() {
            Some(Tok::Node(_)) => {
                let tok = p.advance().expect("peeked");
                let Tok::Node(name) = tok.tok else {
                    unreachable!()
                };
                NodeSym::new(&name)
            }
            _ => {
                let found = p.found_description();
                p.error_here(format!("expected node in query, found {}", found));
                return Err(());
            }
        };
        p.expect(&Tok::Colon)?;
        let path = p.simple_path()?;
        if p.peek() == Some(&Tok::Question) {
            p.advance();
        }
        if p.peek().is_some() {
            let found = p.found_description();
            p.error_here(format!("unexpected {} after query", found));
            return Err(());
        }
        Ok((node, path))
    })(&mut p);
    match result {
        Ok(q) if !p.diags.iter().any(|d| d.severity == Severity::Error) => Ok(q),
        _ => Err(p.diags),
    }
}

/// Canonical unabbreviated rendering; `parse_theory(render_sentence(s))`
/// reproduces `s` exactly.
pub fn render_sentence(s: &DefSentence) -> String {
    s.to_string()
}

/// Renders a whole theory, nodes in declaration order, one sentence per
/// line.
pub fn render_theory(t: &Theory) -> String {
    let mut out = String::new();
    for (node, path, rhs) in t.iter() {
        out.push_str(&render_sentence(&DefSentence::new(
            node.clone(),
            path.clone(),
            rhs.to_vec(),
        )));
        out.push('\n');
    }
    out
}
