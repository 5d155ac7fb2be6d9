//! RDF terms, triples and triple patterns.
//!
//! Textual syntax used throughout the crate:
//!
//! | kind     | syntax                            |
//! |----------|-----------------------------------|
//! | URI      | `<text>`                          |
//! | blank    | `_:label` (document-scoped) or `_:docid/label` |
//! | literal  | `"text"` with `\"`, `\\`, `\n`, `\r`, `\t` escapes |
//! | variable | `?name`                           |

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("URI text must be nonempty")]
    EmptyUri,
    #[error("invalid character {found:?} in URI {text:?}")]
    InvalidUri { text: String, found: char },
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid document id {0:?}")]
    InvalidDocumentId(String),
    #[error("blank node `_:{0}` needs a document scope")]
    UnscopedBlank(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
    #[error("the predicate of a triple must be a URI, found {0}")]
    NonUriPredicate(String),
    #[error("blank nodes are not permitted in triple patterns")]
    BlankInPattern,
    #[error("malformed term {0:?}")]
    Malformed(String),
}

fn uri_char_ok(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '<' | '>' | '"'))
}

pub(crate) fn name_char_ok(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn label_char_ok(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Document ids end up inside canonical blank node text (`docid/label`), so
/// they may not contain `/` or whitespace.
pub(crate) fn check_document_id(id: &str) -> Result<(), TermError> {
    if id.is_empty()
        || id
            .chars()
            .any(|c| c == '/' || c.is_whitespace() || c.is_control())
    {
        return Err(TermError::InvalidDocumentId(id.to_owned()));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Uri(Arc<str>);

impl Uri {
    pub fn new(text: impl AsRef<str>) -> Result<Self, TermError> {
        let text = text.as_ref();
        if text.is_empty() {
            return Err(TermError::EmptyUri);
        }
        if let Some(found) = text.chars().find(|c| !uri_char_ok(*c)) {
            return Err(TermError::InvalidUri {
                text: text.to_owned(),
                found,
            });
        }
        Ok(Uri(text.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Uri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Debug for Uri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A blank node. Identity is the pair (document, label), so blank nodes taken
/// from two different documents never compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct BlankNode {
    doc: Arc<str>,
    label: Arc<str>,
}

impl BlankNode {
    pub fn new(doc: &str, label: &str) -> Result<Self, TermError> {
        check_document_id(doc)?;
        if label.is_empty() || !label.chars().all(label_char_ok) {
            return Err(TermError::InvalidBlankLabel(label.to_owned()));
        }
        Ok(BlankNode {
            doc: doc.into(),
            label: label.into(),
        })
    }

    pub fn document(&self) -> &str {
        &self.doc
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn key_bytes(&self) -> impl Iterator<Item = u8> + '_ {
        self.doc
            .bytes()
            .chain(std::iter::once(b'/'))
            .chain(self.label.bytes())
    }
}

impl Hash for BlankNode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.doc.hash(state);
        self.label.hash(state);
    }
}

// Byte order on "docid/label". Document ids never contain '/', so the text is
// injective and this agrees with equality.
impl Ord for BlankNode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_bytes().cmp(other.key_bytes())
    }
}

impl PartialOrd for BlankNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}/{}", self.doc, self.label)
    }
}

impl fmt::Debug for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An opaque literal; no datatypes or language tags.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(Arc<str>);

impl Literal {
    pub fn new(text: impl AsRef<str>) -> Self {
        Literal(text.as_ref().into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.0.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\r' => f.write_str("\\r")?,
                '\t' => f.write_str("\\t")?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("\"")
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An RDF term. The derived order ranks URIs before blank nodes before
/// literals and compares byte-lexicographically within each kind.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Uri(Uri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn uri(text: impl AsRef<str>) -> Result<Self, TermError> {
        Uri::new(text).map(Term::Uri)
    }

    pub fn literal(text: impl AsRef<str>) -> Self {
        Term::Literal(Literal::new(text))
    }

    pub fn as_uri(&self) -> Option<&Uri> {
        match self {
            Term::Uri(u) => Some(u),
            _ => None,
        }
    }

    /// Parses one term in textual syntax. `scope` is the document that plain
    /// `_:label` blank nodes belong to; without it only `_:docid/label` is accepted.
    pub fn parse(text: &str, scope: Option<&str>) -> Result<Self, TermError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Term::uri(inner);
        }
        if let Some(rest) = text.strip_prefix("_:") {
            return match rest.split_once('/') {
                Some((doc, label)) => BlankNode::new(doc, label).map(Term::Blank),
                None => match scope {
                    Some(doc) => BlankNode::new(doc, rest).map(Term::Blank),
                    None => Err(TermError::UnscopedBlank(rest.to_owned())),
                },
            };
        }
        if text.starts_with('"') {
            let (lit, used) =
                scan_literal(text).ok_or_else(|| TermError::Malformed(text.to_owned()))?;
            if used != text.len() {
                return Err(TermError::Malformed(text.to_owned()));
            }
            return Ok(Term::Literal(Literal::new(lit)));
        }
        Err(TermError::Malformed(text.to_owned()))
    }
}

/// Reads a quoted literal at the start of `input`. Returns the unescaped
/// text and the number of bytes consumed, or `None` if the literal is
/// unterminated or has a bad escape.
pub(crate) fn scan_literal(input: &str) -> Option<(String, usize)> {
    let mut chars = input.char_indices();
    if chars.next()?.1 != '"' {
        return None;
    }
    let mut out = String::new();
    while let Some((i, c)) = chars.next() {
        match c {
            '"' => return Some((out, i + 1)),
            '\\' => {
                let (_, e) = chars.next()?;
                out.push(match e {
                    '"' => '"',
                    '\\' => '\\',
                    'n' => '\n',
                    'r' => '\r',
                    't' => '\t',
                    _ => return None,
                });
            }
            c => out.push(c),
        }
    }
    None
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Uri(u) => u.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Uri> for Term {
    fn from(u: Uri) -> Self {
        Term::Uri(u)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

/// A query variable, stored without the leading `?`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Result<Self, TermError> {
        let name = name.as_ref();
        if name.is_empty() || !name.chars().all(name_char_ok) {
            return Err(TermError::InvalidVariable(name.to_owned()));
        }
        Ok(Variable(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An RDF triple. The subject is never a literal and the predicate is always
/// a URI. Ordering is lexicographic on (s, p, o).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    s: Term,
    p: Uri,
    o: Term,
}

impl Triple {
    pub fn new(s: Term, p: Term, o: Term) -> Result<Self, TermError> {
        if matches!(s, Term::Literal(_)) {
            return Err(TermError::LiteralSubject);
        }
        let p = match p {
            Term::Uri(u) => u,
            other => return Err(TermError::NonUriPredicate(other.to_string())),
        };
        Ok(Triple { s, p, o })
    }

    /// Shorthand for an all-URI triple.
    pub fn uris(s: &str, p: &str, o: &str) -> Result<Self, TermError> {
        Triple::new(Term::uri(s)?, Term::uri(p)?, Term::uri(o)?)
    }

    pub fn subject(&self) -> &Term {
        &self.s
    }

    pub fn predicate(&self) -> &Uri {
        &self.p
    }

    pub fn object(&self) -> &Term {
        &self.o
    }

    /// `{s, p, o}` as a set.
    pub fn terms(&self) -> BTreeSet<Term> {
        [self.s.clone(), Term::Uri(self.p.clone()), self.o.clone()]
            .into_iter()
            .collect()
    }

    /// The URIs among the triple's terms.
    pub fn ids(&self) -> BTreeSet<Uri> {
        self.uri_positions().cloned().collect()
    }

    /// URIs in position order s, p, o (duplicates kept).
    pub(crate) fn uri_positions(&self) -> impl Iterator<Item = &Uri> {
        [self.s.as_uri(), Some(&self.p), self.o.as_uri()]
            .into_iter()
            .flatten()
    }

    /// Parses `s p o` written in textual term syntax, whitespace separated.
    pub fn parse(line: &str, scope: Option<&str>) -> Result<Self, TermError> {
        let parts = split_terms(line).ok_or_else(|| TermError::Malformed(line.to_owned()))?;
        match parts.as_slice() {
            [s, p, o] => Triple::new(
                Term::parse(s, scope)?,
                Term::parse(p, scope)?,
                Term::parse(o, scope)?,
            ),
            _ => Err(TermError::Malformed(line.to_owned())),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.s, self.p, self.o)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.s, self.p, self.o)
    }
}

/// Splits a line into whitespace-separated term tokens, keeping quoted
/// literals (which may contain spaces) intact.
pub(crate) fn split_terms(line: &str) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    let mut rest = line.trim_start();
    while !rest.is_empty() {
        let len = if rest.starts_with('"') {
            scan_literal(rest)?.1
        } else {
            rest.find(char::is_whitespace).unwrap_or(rest.len())
        };
        out.push(&rest[..len]);
        rest = rest[len..].trim_start();
    }
    Some(out)
}

/// One position of a triple pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(Variable),
    Term(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Result<Self, TermError> {
        Variable::new(name).map(PatternTerm::Var)
    }

    pub fn uri(text: &str) -> Result<Self, TermError> {
        Term::uri(text).map(PatternTerm::Term)
    }

    pub fn literal(text: &str) -> Self {
        PatternTerm::Term(Term::literal(text))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => v.fmt(f),
            PatternTerm::Term(t) => t.fmt(f),
        }
    }
}

impl fmt::Debug for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

/// A triple pattern: subject URI or variable, predicate URI or variable,
/// object URI, literal or variable. Blank nodes never occur.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    s: PatternTerm,
    p: PatternTerm,
    o: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> Result<Self, TermError> {
        for pos in [&s, &p, &o] {
            if let PatternTerm::Term(Term::Blank(_)) = pos {
                return Err(TermError::BlankInPattern);
            }
        }
        if let PatternTerm::Term(Term::Literal(_)) = s {
            return Err(TermError::LiteralSubject);
        }
        if let PatternTerm::Term(t @ Term::Literal(_)) = &p {
            return Err(TermError::NonUriPredicate(t.to_string()));
        }
        Ok(TriplePattern { s, p, o })
    }

    pub fn subject(&self) -> &PatternTerm {
        &self.s
    }

    pub fn predicate(&self) -> &PatternTerm {
        &self.p
    }

    pub fn object(&self) -> &PatternTerm {
        &self.o
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.s, &self.p, &self.o]
    }

    pub fn vars(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }

    /// True iff every non-variable position equals the triple's term at the
    /// same position. Repeated variables are not constrained here.
    pub fn matches(&self, t: &Triple) -> bool {
        let fits = |pt: &PatternTerm, term: &Term| match pt {
            PatternTerm::Var(_) => true,
            PatternTerm::Term(x) => x == term,
        };
        fits(&self.s, &t.s)
            && match &self.p {
                PatternTerm::Var(_) => true,
                PatternTerm::Term(Term::Uri(u)) => *u == t.p,
                PatternTerm::Term(_) => false,
            }
            && fits(&self.o, &t.o)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.s, self.p, self.o)
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `t` matches `tp` iff every non-variable position of `tp` agrees with `t`.
pub fn matches(t: &Triple, tp: &TriplePattern) -> bool {
    tp.matches(t)
}

pub fn terms_of(t: &Triple) -> BTreeSet<Term> {
    t.terms()
}

pub fn ids_of(t: &Triple) -> BTreeSet<Uri> {
    t.ids()
}

pub fn term_compare(a: &Term, b: &Term) -> Ordering {
    a.cmp(b)
}

pub fn triple_compare(a: &Triple, b: &Triple) -> Ordering {
    a.cmp(b)
}
