//! Canonical text encodings of triples, triple sets, valuations and solution
//! sets. Equal inputs always give byte-equal text.

use std::fmt;

use crate::algebra::{SolutionSet, Valuation};
use crate::term::Triple;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalText(String);

impl CanonicalText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl From<CanonicalText> for String {
    fn from(c: CanonicalText) -> String {
        c.0
    }
}

fn bracketed(items: impl Iterator<Item = String>) -> String {
    let body: Vec<String> = items.collect();
    if body.is_empty() {
        "⟨⟨ ⟩⟩".to_owned()
    } else {
        format!("⟨⟨ {} ⟩⟩", body.join(" , "))
    }
}

/// `⟨ s , p , o ⟩`
pub fn enc_triple(t: &Triple) -> CanonicalText {
    CanonicalText(format!(
        "⟨ {} , {} , {} ⟩",
        t.subject(),
        t.predicate(),
        t.object()
    ))
}

/// Members in triple order.
pub fn enc_triple_set<'a, I>(g: I) -> CanonicalText
where
    I: IntoIterator<Item = &'a Triple>,
{
    let mut sorted: Vec<&Triple> = g.into_iter().collect();
    sorted.sort();
    sorted.dedup();
    CanonicalText(bracketed(sorted.into_iter().map(|t| enc_triple(t).0)))
}

/// `⟨⟨ ?a → <x> , ?b → "y" ⟩⟩`, variables in name order.
pub fn enc_valuation(mu: &Valuation) -> CanonicalText {
    CanonicalText(bracketed(mu.iter().map(|(v, t)| format!("{v} → {t}"))))
}

/// One valuation per line, lines sorted; the empty set encodes as empty text.
pub fn enc_solution_set(o: &SolutionSet) -> CanonicalText {
    let mut lines: Vec<String> = o.iter().map(|mu| enc_valuation(mu).0).collect();
    lines.sort();
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    CanonicalText(text)
}
