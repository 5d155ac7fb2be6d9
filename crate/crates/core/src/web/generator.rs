//! Procedurally generated webs, computed on demand.

use std::fmt;

use super::{DocumentId, WebError, WebOfLinkedData};
use crate::algebra::Graph;
use crate::term::{Triple, Uri};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WebSize {
    Finite(u64),
    Infinite,
}

impl WebSize {
    fn contains(self, k: u64) -> bool {
        k >= 1
            && match self {
                WebSize::Finite(n) => k <= n,
                WebSize::Infinite => k < u64::MAX,
            }
    }
}

impl fmt::Display for WebSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebSize::Finite(n) => write!(f, "{n}"),
            WebSize::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `<num:k>` dereferences to `dk` holding `(<num:k>, <num:succ>, <num:k+1>)`.
    Numbers,
    /// `<chain:i>` holds `(<chain:i>, <chain:next>, <chain:i+1>)` for i < n;
    /// the last document is empty.
    Chain(WebSize),
    /// `<star:i>` holds `(<star:i>, <star:first>, <star:1>)`.
    Star(WebSize),
}

/// A web whose documents are generated by a deterministic rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWeb {
    kind: GeneratorKind,
}

pub fn number_web() -> GeneratorWeb {
    GeneratorWeb {
        kind: GeneratorKind::Numbers,
    }
}

pub fn chain_web(n: WebSize) -> GeneratorWeb {
    GeneratorWeb {
        kind: GeneratorKind::Chain(n),
    }
}

pub fn star_web(n: WebSize) -> GeneratorWeb {
    GeneratorWeb {
        kind: GeneratorKind::Star(n),
    }
}

impl GeneratorWeb {
    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// `gen:numbers`, `gen:chain:N|inf` or `gen:star:N|inf` with N >= 1.
    pub fn from_selector(selector: &str) -> Result<Self, WebError> {
        let bad = || WebError::BadSelector(selector.to_owned());
        let size = |s: &str| match s {
            "inf" => Ok(WebSize::Infinite),
            n => match n.parse::<u64>() {
                Ok(n) if (1..u64::MAX).contains(&n) && canonical_number(n) == s => {
                    Ok(WebSize::Finite(n))
                }
                _ => Err(bad()),
            },
        };
        match selector
            .strip_prefix("gen:")
            .ok_or_else(bad)?
            .split_once(':')
        {
            None if selector == "gen:numbers" => Ok(number_web()),
            Some(("chain", n)) => Ok(chain_web(size(n)?)),
            Some(("star", n)) => Ok(star_web(size(n)?)),
            _ => Err(bad()),
        }
    }

    pub fn selector(&self) -> String {
        match self.kind {
            GeneratorKind::Numbers => "gen:numbers".to_owned(),
            GeneratorKind::Chain(n) => format!("gen:chain:{n}"),
            GeneratorKind::Star(n) => format!("gen:star:{n}"),
        }
    }

    fn namespace(&self) -> &'static str {
        match self.kind {
            GeneratorKind::Numbers => "num",
            GeneratorKind::Chain(_) => "chain",
            GeneratorKind::Star(_) => "star",
        }
    }

    fn size(&self) -> WebSize {
        match self.kind {
            GeneratorKind::Numbers => WebSize::Infinite,
            GeneratorKind::Chain(n) | GeneratorKind::Star(n) => n,
        }
    }

    /// The URI for index `k` of this generator's namespace.
    pub fn uri(&self, k: u64) -> Uri {
        Uri::new(format!("{}:{k}", self.namespace())).expect("generated URIs are valid")
    }

    fn link_predicate(&self) -> Uri {
        let name = match self.kind {
            GeneratorKind::Numbers => "num:succ",
            GeneratorKind::Chain(_) => "chain:next",
            GeneratorKind::Star(_) => "star:first",
        };
        Uri::new(name).expect("generated URIs are valid")
    }

    fn index_of_uri(&self, uri: &Uri) -> Option<u64> {
        let digits = uri
            .as_str()
            .strip_prefix(self.namespace())?
            .strip_prefix(':')?;
        let k = digits.parse::<u64>().ok()?;
        (canonical_number(k) == digits && self.size().contains(k)).then_some(k)
    }

    fn index_of_doc(&self, doc: &DocumentId) -> Option<u64> {
        let digits = doc.as_str().strip_prefix('d')?;
        let k = digits.parse::<u64>().ok()?;
        (canonical_number(k) == digits && self.size().contains(k)).then_some(k)
    }
}

fn canonical_number(n: u64) -> String {
    n.to_string()
}

impl WebOfLinkedData for GeneratorWeb {
    fn dereference(&self, uri: &Uri) -> Option<DocumentId> {
        let k = self.index_of_uri(uri)?;
        Some(DocumentId::new(format!("d{k}")).expect("generated ids are valid"))
    }

    fn data(&self, doc: &DocumentId) -> Graph {
        let Some(k) = self.index_of_doc(doc) else {
            return Graph::new();
        };
        let target = match self.kind {
            GeneratorKind::Numbers => k + 1,
            GeneratorKind::Chain(n) => {
                if n == WebSize::Finite(k) {
                    return Graph::new();
                }
                k + 1
            }
            GeneratorKind::Star(_) => 1,
        };
        let t = Triple::new(
            self.uri(k).into(),
            self.link_predicate().into(),
            self.uri(target).into(),
        )
        .expect("generated triples are valid");
        [t].into()
    }

    fn is_materializable(&self) -> bool {
        matches!(self.size(), WebSize::Finite(_))
    }

    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_> {
        match self.size() {
            WebSize::Finite(n) => Box::new((1..=n).map(|k| self.uri(k))),
            WebSize::Infinite => Box::new((1..u64::MAX).map(|k| self.uri(k))),
        }
    }
}
