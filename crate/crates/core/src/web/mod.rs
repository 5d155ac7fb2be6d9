//! Webs of Linked Data: a set of documents, their (finite) data, and a
//! partial, surjective URI-to-document dereference map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use thiserror::Error;

use crate::algebra::Graph;
use crate::term::{check_document_id, Term, TermError, Triple, Uri};

mod generator;

pub use generator::{chain_web, number_web, star_web, GeneratorKind, GeneratorWeb, WebSize};

#[derive(Debug, Error)]
pub enum WebError {
    #[error("invalid web description: {0}")]
    Json(String),
    #[error("bad term in document {doc:?}: {source}")]
    BadTerm { doc: String, source: TermError },
    #[error("document {doc:?} uses blank node {blank} that belongs to another document")]
    BlankNodeSharing { doc: String, blank: String },
    #[error("document {0:?} is not the image of any URI")]
    NonSurjective(String),
    #[error("document {0:?} is defined twice")]
    DuplicateDoc(String),
    #[error("URI {0} is mapped twice")]
    DuplicateUri(String),
    #[error("unknown document {0:?}")]
    UnknownDocument(String),
    #[error("invalid document id: {0}")]
    BadDocumentId(TermError),
    #[error("the web is infinite and cannot be materialized")]
    NotMaterializable,
    #[error("unknown web selector {0:?}")]
    BadSelector(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Opaque document identifier. Nonempty, no `/`, no whitespace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DocumentId(Arc<str>);

impl DocumentId {
    pub fn new(id: impl AsRef<str>) -> Result<Self, TermError> {
        check_document_id(id.as_ref())?;
        Ok(DocumentId(id.as_ref().into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DocumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for DocumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Read access to a Web of Linked Data.
///
/// Implementations must be deterministic: the same URI always dereferences to
/// the same document, and `data` is finite for every document.
pub trait WebOfLinkedData: Send + Sync {
    /// `None` is a broken link (the URI is outside the dereference map).
    fn dereference(&self, uri: &Uri) -> Option<DocumentId>;

    /// Data of a document. Empty for ids that are not documents of this web.
    fn data(&self, doc: &DocumentId) -> Graph;

    /// Whether the set of documents is finite.
    fn is_materializable(&self) -> bool;

    /// Every URI that dereferences successfully, in canonical order. Infinite
    /// for infinite webs.
    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_>;
}

impl<T: WebOfLinkedData + ?Sized> WebOfLinkedData for &T {
    fn dereference(&self, uri: &Uri) -> Option<DocumentId> {
        (**self).dereference(uri)
    }
    fn data(&self, doc: &DocumentId) -> Graph {
        (**self).data(doc)
    }
    fn is_materializable(&self) -> bool {
        (**self).is_materializable()
    }
    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_> {
        (**self).uris()
    }
}

impl<T: WebOfLinkedData + ?Sized> WebOfLinkedData for Arc<T> {
    fn dereference(&self, uri: &Uri) -> Option<DocumentId> {
        (**self).dereference(uri)
    }
    fn data(&self, doc: &DocumentId) -> Graph {
        (**self).data(doc)
    }
    fn is_materializable(&self) -> bool {
        (**self).is_materializable()
    }
    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_> {
        (**self).uris()
    }
}

impl<T: WebOfLinkedData + ?Sized> WebOfLinkedData for Box<T> {
    fn dereference(&self, uri: &Uri) -> Option<DocumentId> {
        (**self).dereference(uri)
    }
    fn data(&self, doc: &DocumentId) -> Graph {
        (**self).data(doc)
    }
    fn is_materializable(&self) -> bool {
        (**self).is_materializable()
    }
    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_> {
        (**self).uris()
    }
}

/// Union of the data of every document.
pub fn all_data(web: &(impl WebOfLinkedData + ?Sized)) -> Result<Graph, WebError> {
    if !web.is_materializable() {
        return Err(WebError::NotMaterializable);
    }
    let docs: BTreeSet<DocumentId> = web.uris().filter_map(|u| web.dereference(&u)).collect();
    Ok(docs.iter().flat_map(|d| web.data(d)).collect())
}

/// A finite, fully materialized web, validated on construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteWeb {
    documents: BTreeMap<DocumentId, Graph>,
    adoc: BTreeMap<Uri, DocumentId>,
}

impl FiniteWeb {
    /// Checks that every adoc target is a document, every document has a URI,
    /// and blank nodes in each document belong to that document.
    pub fn new(
        documents: BTreeMap<DocumentId, Graph>,
        adoc: BTreeMap<Uri, DocumentId>,
    ) -> Result<Self, WebError> {
        for doc in adoc.values() {
            if !documents.contains_key(doc) {
                return Err(WebError::UnknownDocument(doc.to_string()));
            }
        }
        let images: BTreeSet<&DocumentId> = adoc.values().collect();
        for (doc, data) in &documents {
            if !images.contains(doc) {
                return Err(WebError::NonSurjective(doc.to_string()));
            }
            for t in data {
                for term in [t.subject(), t.object()] {
                    if let Term::Blank(b) = term {
                        if b.document() != doc.as_str() {
                            return Err(WebError::BlankNodeSharing {
                                doc: doc.to_string(),
                                blank: b.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(FiniteWeb { documents, adoc })
    }

    pub fn empty() -> Self {
        FiniteWeb {
            documents: BTreeMap::new(),
            adoc: BTreeMap::new(),
        }
    }

    pub fn documents(&self) -> impl Iterator<Item = (&DocumentId, &Graph)> {
        self.documents.iter()
    }

    pub fn document_ids(&self) -> BTreeSet<DocumentId> {
        self.documents.keys().cloned().collect()
    }

    pub fn adoc(&self) -> impl Iterator<Item = (&Uri, &DocumentId)> {
        self.adoc.iter()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn all_data(&self) -> Graph {
        self.documents.values().flatten().cloned().collect()
    }

    /// The web as a JSON web-description document.
    pub fn to_json(&self) -> String {
        let documents: serde_json::Map<String, serde_json::Value> = self
            .documents
            .iter()
            .map(|(doc, data)| {
                let show = |t: &Term| match t {
                    Term::Blank(b) if b.document() == doc.as_str() => format!("_:{}", b.label()),
                    other => other.to_string(),
                };
                let triples = data
                    .iter()
                    .map(|t| {
                        serde_json::json!([
                            show(t.subject()),
                            t.predicate().to_string(),
                            show(t.object())
                        ])
                    })
                    .collect();
                (doc.to_string(), serde_json::Value::Array(triples))
            })
            .collect();
        let adoc: serde_json::Map<String, serde_json::Value> = self
            .adoc
            .iter()
            .map(|(u, d)| (u.to_string(), serde_json::Value::String(d.to_string())))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "documents": documents, "adoc": adoc }))
            .expect("JSON values always serialize")
    }
}

impl fmt::Debug for FiniteWeb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteWeb")
            .field("documents", &self.documents)
            .field("adoc", &self.adoc)
            .finish()
    }
}

impl WebOfLinkedData for FiniteWeb {
    fn dereference(&self, uri: &Uri) -> Option<DocumentId> {
        self.adoc.get(uri).cloned()
    }

    fn data(&self, doc: &DocumentId) -> Graph {
        self.documents.get(doc).cloned().unwrap_or_default()
    }

    fn is_materializable(&self) -> bool {
        true
    }

    fn uris(&self) -> Box<dyn Iterator<Item = Uri> + '_> {
        Box::new(self.adoc.keys().cloned())
    }
}

/// Restricts `web` to `keep`: data is unchanged on kept documents and the
/// dereference map keeps exactly the URIs that point into `keep`.
pub fn induced_subweb(web: &FiniteWeb, keep: &BTreeSet<DocumentId>) -> Result<FiniteWeb, WebError> {
    if let Some(missing) = keep.iter().find(|d| !web.documents.contains_key(*d)) {
        return Err(WebError::UnknownDocument(missing.to_string()));
    }
    Ok(FiniteWeb {
        documents: web
            .documents
            .iter()
            .filter(|(d, _)| keep.contains(*d))
            .map(|(d, g)| (d.clone(), g.clone()))
            .collect(),
        adoc: web
            .adoc
            .iter()
            .filter(|(_, d)| keep.contains(*d))
            .map(|(u, d)| (u.clone(), d.clone()))
            .collect(),
    })
}

/// JSON object entries in document order, duplicates kept.
struct Entries<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct EntriesVisitor<V>(std::marker::PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for EntriesVisitor<V> {
            type Value = Entries<V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }

        de.deserialize_map(EntriesVisitor(std::marker::PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeb {
    documents: Entries<Vec<[String; 3]>>,
    adoc: Entries<String>,
}

/// Parses and validates a JSON web description:
///
/// ```json
/// { "documents": { "d1": [["<s>", "<p>", "_:b"]] },
///   "adoc": { "<s>": "d1" } }
/// ```
///
/// `_:label` inside a document denotes a blank node of that document.
pub fn load_web(input: &str) -> Result<FiniteWeb, WebError> {
    let raw: RawWeb = serde_json::from_str(input).map_err(|e| WebError::Json(e.to_string()))?;
    let mut documents = BTreeMap::new();
    for (id, triples) in raw.documents.0 {
        let doc = DocumentId::new(&id).map_err(WebError::BadDocumentId)?;
        let mut data = Graph::new();
        for [s, p, o] in &triples {
            let bad = |source| WebError::BadTerm {
                doc: id.clone(),
                source,
            };
            let parse = |text: &str| Term::parse(text, Some(&id)).map_err(bad);
            let t = Triple::new(parse(s)?, parse(p)?, parse(o)?).map_err(bad)?;
            data.insert(t);
        }
        if documents.insert(doc, data).is_some() {
            return Err(WebError::DuplicateDoc(id));
        }
    }
    let mut adoc = BTreeMap::new();
    for (key, target) in raw.adoc.0 {
        let text = key
            .strip_prefix('<')
            .and_then(|k| k.strip_suffix('>'))
            .unwrap_or(&key);
        let uri = Uri::new(text).map_err(|source| WebError::BadTerm {
            doc: target.clone(),
            source,
        })?;
        let doc = DocumentId::new(&target).map_err(WebError::BadDocumentId)?;
        if adoc.insert(uri.clone(), doc).is_some() {
            return Err(WebError::DuplicateUri(uri.to_string()));
        }
    }
    FiniteWeb::new(documents, adoc)
}

pub fn load_web_file(path: impl AsRef<Path>) -> Result<FiniteWeb, WebError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| WebError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_web(&text)
}

/// Opens `gen:...` selectors as generators and anything else as a web file.
pub fn open_web(selector: &str) -> Result<Arc<dyn WebOfLinkedData>, WebError> {
    if selector.starts_with("gen:") {
        Ok(Arc::new(GeneratorWeb::from_selector(selector)?))
    } else {
        Ok(Arc::new(load_web_file(selector)?))
    }
}
