//! Reachability criteria and budgeted computation of reachable parts.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::algebra::{Graph, SparqlExpression};
use crate::term::{Term, TermError, Triple, Uri};
use crate::web::{DocumentId, WebOfLinkedData};

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error("unknown criterion {0:?} (expected all, none, match, u:FILE, t:FILE, and:UFILE,TFILE or or:UFILE,TFILE)")]
    Unknown(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {source}")]
    BadLine { line: usize, source: TermError },
    #[error("restrictiveness is only decided for constant criteria, got {0}")]
    Unsupported(String),
}

/// Decides whether a data link `u` found in triple `t` may be followed while
/// answering query `P`.
#[derive(Clone, PartialEq, Eq)]
pub enum ReachabilityCriterion {
    All,
    None,
    /// `t` matches some triple pattern of `P`.
    Match,
    ConstU(BTreeSet<Uri>),
    ConstT(BTreeSet<Triple>),
    ConstAnd(BTreeSet<Uri>, BTreeSet<Triple>),
    ConstOr(BTreeSet<Uri>, BTreeSet<Triple>),
}

impl ReachabilityCriterion {
    pub fn accepts(&self, t: &Triple, u: &Uri, p: &SparqlExpression) -> bool {
        match self {
            ReachabilityCriterion::All => true,
            ReachabilityCriterion::None => false,
            ReachabilityCriterion::Match => p.patterns().iter().any(|tp| tp.matches(t)),
            ReachabilityCriterion::ConstU(us) => us.contains(u),
            ReachabilityCriterion::ConstT(ts) => ts.contains(t),
            ReachabilityCriterion::ConstAnd(us, ts) => us.contains(u) && ts.contains(t),
            ReachabilityCriterion::ConstOr(us, ts) => us.contains(u) || ts.contains(t),
        }
    }

    pub fn is_constant(&self) -> bool {
        !matches!(
            self,
            ReachabilityCriterion::All | ReachabilityCriterion::Match
        )
    }

    fn name(&self) -> &'static str {
        match self {
            ReachabilityCriterion::All => "all",
            ReachabilityCriterion::None => "none",
            ReachabilityCriterion::Match => "match",
            ReachabilityCriterion::ConstU(_) => "u",
            ReachabilityCriterion::ConstT(_) => "t",
            ReachabilityCriterion::ConstAnd(..) => "and",
            ReachabilityCriterion::ConstOr(..) => "or",
        }
    }

    /// Parses the CLI form: `all`, `none`, `match`, `u:FILE`, `t:FILE`,
    /// `and:UFILE,TFILE`, `or:UFILE,TFILE`.
    pub fn from_text(text: &str) -> Result<Self, CriterionError> {
        match text {
            "all" => return Ok(ReachabilityCriterion::All),
            "none" => return Ok(ReachabilityCriterion::None),
            "match" => return Ok(ReachabilityCriterion::Match),
            _ => {}
        }
        let unknown = || CriterionError::Unknown(text.to_owned());
        let (kind, args) = text.split_once(':').ok_or_else(unknown)?;
        let pair = || args.split_once(',').ok_or_else(unknown);
        match kind {
            "u" => Ok(ReachabilityCriterion::ConstU(read_uri_set(args)?)),
            "t" => Ok(ReachabilityCriterion::ConstT(read_triple_set(args)?)),
            "and" => {
                let (u, t) = pair()?;
                Ok(ReachabilityCriterion::ConstAnd(
                    read_uri_set(u)?,
                    read_triple_set(t)?,
                ))
            }
            "or" => {
                let (u, t) = pair()?;
                Ok(ReachabilityCriterion::ConstOr(
                    read_uri_set(u)?,
                    read_triple_set(t)?,
                ))
            }
            _ => Err(unknown()),
        }
    }
}

impl fmt::Debug for ReachabilityCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReachabilityCriterion::ConstU(u) => write!(f, "u{u:?}"),
            ReachabilityCriterion::ConstT(t) => write!(f, "t{t:?}"),
            ReachabilityCriterion::ConstAnd(u, t) => write!(f, "and({u:?}, {t:?})"),
            ReachabilityCriterion::ConstOr(u, t) => write!(f, "or({u:?}, {t:?})"),
            other => f.write_str(other.name()),
        }
    }
}

pub fn criterion_eval(
    c: &ReachabilityCriterion,
    t: &Triple,
    u: &Uri,
    p: &SparqlExpression,
) -> bool {
    c.accepts(t, u, p)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One `<uri>` per line; blank lines and `#` comments are skipped.
pub fn parse_uri_set(text: &str) -> Result<BTreeSet<Uri>, CriterionError> {
    content_lines(text)
        .map(|(line, l)| match Term::parse(l, None) {
            Ok(Term::Uri(u)) => Ok(u),
            Ok(other) => Err(CriterionError::BadLine {
                line,
                source: TermError::Malformed(other.to_string()),
            }),
            Err(source) => Err(CriterionError::BadLine { line, source }),
        })
        .collect()
}

/// A seed URI written as `<uri>` or bare.
pub fn parse_seed(text: &str) -> Result<Uri, TermError> {
    let text = text.trim();
    if !text.starts_with('<') {
        return Uri::new(text);
    }
    match Term::parse(text, None)? {
        Term::Uri(u) => Ok(u),
        other => Err(TermError::Malformed(other.to_string())),
    }
}

/// Comma-separated seeds in the given order; empty items are skipped.
pub fn parse_seed_list(text: &str) -> Result<Vec<Uri>, TermError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_seed)
        .collect()
}

/// One triple per line in term syntax (`<s> <p> <o>`); blank nodes use the
/// qualified `_:docid/label` form.
pub fn parse_triple_set(text: &str) -> Result<BTreeSet<Triple>, CriterionError> {
    content_lines(text)
        .map(|(line, l)| {
            Triple::parse(l, None).map_err(|source| CriterionError::BadLine { line, source })
        })
        .collect()
}

fn read(path: &str) -> Result<String, CriterionError> {
    std::fs::read_to_string(Path::new(path)).map_err(|source| CriterionError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_uri_set(path: &str) -> Result<BTreeSet<Uri>, CriterionError> {
    parse_uri_set(&read(path)?)
}

fn read_triple_set(path: &str) -> Result<BTreeSet<Triple>, CriterionError> {
    parse_triple_set(&read(path)?)
}

/// Outcome of comparing two constant criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restrictiveness {
    /// The first accepts everything the second does, and more.
    Less,
    /// The second accepts everything the first does, and more.
    More,
    Equivalent,
    Incomparable,
}

impl Restrictiveness {
    pub fn is_less_restrictive(self) -> bool {
        self == Restrictiveness::Less
    }
}

/// The accepted (t, u) pairs of a constant criterion:
/// `{u ∈ strip_u} ∪ {t ∈ strip_t} ∪ (prod_t × prod_u)`.
struct Region<'a> {
    strip_u: Option<&'a BTreeSet<Uri>>,
    strip_t: Option<&'a BTreeSet<Triple>>,
    prod: Option<(&'a BTreeSet<Uri>, &'a BTreeSet<Triple>)>,
}

impl<'a> Region<'a> {
    fn of(c: &'a ReachabilityCriterion) -> Result<Self, CriterionError> {
        let empty = Region {
            strip_u: None,
            strip_t: None,
            prod: None,
        };
        Ok(match c {
            ReachabilityCriterion::None => empty,
            ReachabilityCriterion::ConstU(u) => Region {
                strip_u: Some(u),
                ..empty
            },
            ReachabilityCriterion::ConstT(t) => Region {
                strip_t: Some(t),
                ..empty
            },
            ReachabilityCriterion::ConstOr(u, t) => Region {
                strip_u: Some(u),
                strip_t: Some(t),
                prod: None,
            },
            ReachabilityCriterion::ConstAnd(u, t) => Region {
                prod: Some((u, t)),
                ..empty
            },
            other => return Err(CriterionError::Unsupported(other.name().to_owned())),
        })
    }

    fn member(&self, t: &Triple, u: &Uri) -> bool {
        self.strip_u.is_some_and(|s| s.contains(u))
            || self.strip_t.is_some_and(|s| s.contains(t))
            || self
                .prod
                .is_some_and(|(pu, pt)| pu.contains(u) && pt.contains(t))
    }

    /// `self ⊆ other`. A strip is infinite (it ranges over every triple or
    /// every URI), so only a strip of `other` can cover it.
    fn within(&self, other: &Region) -> bool {
        let no_u = BTreeSet::new();
        let no_t = BTreeSet::new();
        self.strip_u
            .unwrap_or(&no_u)
            .is_subset(other.strip_u.unwrap_or(&no_u))
            && self
                .strip_t
                .unwrap_or(&no_t)
                .is_subset(other.strip_t.unwrap_or(&no_t))
            && self
                .prod
                .is_none_or(|(pu, pt)| pt.iter().all(|t| pu.iter().all(|u| other.member(t, u))))
    }
}

/// Compares two constant criteria (`None`, `ConstU`, `ConstT`, `ConstAnd`,
/// `ConstOr`) by the sets of (triple, URI) pairs they accept.
pub fn less_restrictive_constant(
    c1: &ReachabilityCriterion,
    c2: &ReachabilityCriterion,
) -> Result<Restrictiveness, CriterionError> {
    let (r1, r2) = (Region::of(c1)?, Region::of(c2)?);
    Ok(match (r2.within(&r1), r1.within(&r2)) {
        (true, true) => Restrictiveness::Equivalent,
        (true, false) => Restrictiveness::Less,
        (false, true) => Restrictiveness::More,
        (false, false) => Restrictiveness::Incomparable,
    })
}

/// Maximum number of expansion-loop lookups. Seed lookups are not counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Limited(u64),
    Unlimited,
}

impl Budget {
    pub fn allows(self, spent: u64) -> bool {
        match self {
            Budget::Limited(max) => spent < max,
            Budget::Unlimited => true,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Limited(n) => write!(f, "{n}"),
            Budget::Unlimited => f.write_str("unlimited"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachablePart {
    /// Retrieved documents with the URI that first dereferenced to each, in
    /// retrieval order.
    pub documents: Vec<(Uri, DocumentId)>,
    pub triples: Graph,
    /// No admissible link is left unexpanded.
    pub complete: bool,
    /// Lookups made by the expansion loop, broken links included.
    pub lookups_spent: u64,
    pub seed_lookups: u64,
}

impl ReachablePart {
    pub fn document_ids(&self) -> BTreeSet<DocumentId> {
        self.documents.iter().map(|(_, d)| d.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lookup {
    /// A document not seen before was added.
    NewDocument,
    /// The URI dereferenced to a document that was already retrieved.
    KnownDocument,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Looked(Lookup),
    /// No admissible link remains.
    Done,
    /// An admissible link remains but the budget is spent.
    OutOfBudget,
}

/// Link-traversal state. The frontier holds admissible link URIs in
/// discovery order: documents in retrieval order, triples of a document in
/// triple order, and URIs of a triple in position order s, p, o. The
/// criterion is applied when a link is discovered.
pub(crate) struct Traversal {
    criterion: ReachabilityCriterion,
    query: SparqlExpression,
    looked_up: HashSet<Uri>,
    retrieved: HashSet<DocumentId>,
    frontier: VecDeque<Uri>,
    pub(crate) documents: Vec<(Uri, DocumentId)>,
    pub(crate) triples: Graph,
    pub(crate) lookups: u64,
    pub(crate) seed_lookups: u64,
}

impl Traversal {
    pub(crate) fn new(criterion: ReachabilityCriterion, query: SparqlExpression) -> Self {
        Traversal {
            criterion,
            query,
            looked_up: HashSet::new(),
            retrieved: HashSet::new(),
            frontier: VecDeque::new(),
            documents: Vec::new(),
            triples: Graph::new(),
            lookups: 0,
            seed_lookups: 0,
        }
    }

    pub(crate) fn seed<W: WebOfLinkedData + ?Sized>(&mut self, web: &W, seeds: &[Uri]) {
        for u in seeds {
            if !self.looked_up.contains(u) {
                self.lookup(web, u.clone());
                self.seed_lookups += 1;
            }
        }
    }

    fn lookup<W: WebOfLinkedData + ?Sized>(&mut self, web: &W, u: Uri) -> Lookup {
        self.looked_up.insert(u.clone());
        let Some(doc) = web.dereference(&u) else {
            return Lookup::Broken;
        };
        if !self.retrieved.insert(doc.clone()) {
            return Lookup::KnownDocument;
        }
        let data = web.data(&doc);
        for t in &data {
            for link in t.uri_positions() {
                if !self.looked_up.contains(link) && self.criterion.accepts(t, link, &self.query) {
                    self.frontier.push_back(link.clone());
                }
            }
        }
        self.triples.extend(data);
        self.documents.push((u, doc));
        Lookup::NewDocument
    }

    pub(crate) fn step<W: WebOfLinkedData + ?Sized>(&mut self, web: &W, budget: Budget) -> Step {
        while let Some(u) = self.frontier.front() {
            if self.looked_up.contains(u) {
                self.frontier.pop_front();
                continue;
            }
            if !budget.allows(self.lookups) {
                return Step::OutOfBudget;
            }
            let u = self.frontier.pop_front().expect("front exists");
            self.lookups += 1;
            return Step::Looked(self.lookup(web, u));
        }
        Step::Done
    }

    pub(crate) fn into_part(self, complete: bool) -> ReachablePart {
        ReachablePart {
            documents: self.documents,
            triples: self.triples,
            complete,
            lookups_spent: self.lookups,
            seed_lookups: self.seed_lookups,
        }
    }
}

/// Expands from `seeds`, following only links accepted by `c` for `p`, until
/// no admissible link remains or the budget is spent.
pub fn compute_reachable_part<W: WebOfLinkedData + ?Sized>(
    web: &W,
    seeds: &[Uri],
    c: &ReachabilityCriterion,
    p: &SparqlExpression,
    budget: Budget,
) -> ReachablePart {
    let mut tr = Traversal::new(c.clone(), p.clone());
    tr.seed(web, seeds);
    loop {
        match tr.step(web, budget) {
            Step::Looked(_) => {}
            Step::Done => return tr.into_part(true),
            Step::OutOfBudget => return tr.into_part(false),
        }
    }
}
