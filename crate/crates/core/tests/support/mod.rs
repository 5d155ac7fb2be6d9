#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ldq_core::algebra::{FilterCondition, Graph, SparqlExpression};
use ldq_core::reach::ReachabilityCriterion;
use ldq_core::term::{PatternTerm, Term, Triple, TriplePattern, Uri, Variable};
use ldq_core::web::{DocumentId, FiniteWeb};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestRng, TestRunner};

pub fn uri(s: &str) -> Uri {
    Uri::new(s).unwrap()
}

pub fn var(s: &str) -> Variable {
    Variable::new(s).unwrap()
}

pub fn doc(s: &str) -> DocumentId {
    DocumentId::new(s).unwrap()
}

/// A runner with a fixed seed so every run sees the same instances.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = runner(1);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

/// Vocabulary for algebra-level instances.
pub struct Vocabulary {
    /// Variables usable in filter conditions.
    pub vars: Vec<Variable>,
    /// Variables usable at subject, predicate and object position.
    pub position_vars: [Vec<Variable>; 3],
    pub subjects: Vec<Term>,
    pub predicates: Vec<Term>,
    pub objects: Vec<Term>,
}

impl Vocabulary {
    pub fn small() -> Self {
        let u = |s: &str| Term::uri(s).unwrap();
        let vars: Vec<Variable> = ["a", "b", "c"].into_iter().map(var).collect();
        Vocabulary {
            position_vars: [vars.clone(), vars.clone(), vars.clone()],
            vars,
            subjects: vec![u("a"), u("b"), u("c")],
            predicates: vec![u("p"), u("q")],
            objects: vec![u("a"), u("b"), u("c"), Term::literal("x")],
        }
    }

    /// Terms of a random web built by [`finite_web`] with `docs` documents.
    pub fn for_web(docs: usize) -> Self {
        let u = |s: String| Term::uri(s).unwrap();
        let mut subjects: Vec<Term> = (0..docs.max(1)).map(|i| u(format!("w{i}"))).collect();
        subjects.push(u("v0".into()));
        subjects.push(u("z0".into()));
        let mut objects = subjects.clone();
        objects.push(Term::literal("lit"));
        let v = |names: &[&str]| names.iter().map(|n| var(n)).collect::<Vec<_>>();
        Vocabulary {
            vars: v(&["s", "p", "o", "x"]),
            position_vars: [v(&["s", "o"]), v(&["p"]), v(&["o", "x"])],
            predicates: vec![u("p".into()), u("q".into()), u("w0".into()), u("z1".into())],
            subjects,
            objects,
        }
    }
}

fn pattern_term(terms: Vec<Term>, vars: Vec<Variable>) -> impl Strategy<Value = PatternTerm> {
    prop_oneof![
        2 => select(vars).prop_map(PatternTerm::Var),
        1 => select(terms).prop_map(PatternTerm::Term),
    ]
}

pub fn triple_pattern(voc: &Vocabulary) -> impl Strategy<Value = TriplePattern> {
    (
        pattern_term(voc.subjects.clone(), voc.position_vars[0].clone()),
        pattern_term(voc.predicates.clone(), voc.position_vars[1].clone()),
        pattern_term(voc.objects.clone(), voc.position_vars[2].clone()),
    )
        .prop_map(|(s, p, o)| TriplePattern::new(s, p, o).expect("valid pattern"))
}

pub fn condition(voc: &Vocabulary) -> impl Strategy<Value = FilterCondition> {
    let vars = voc.vars.clone();
    let constants = voc.objects.clone();
    let leaf = prop_oneof![
        (select(vars.clone()), select(constants)).prop_map(|(v, c)| FilterCondition::Eq(v, c)),
        (select(vars.clone()), select(vars.clone()))
            .prop_map(|(x, y)| FilterCondition::EqVar(x, y)),
        select(vars).prop_map(FilterCondition::Bound),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FilterCondition::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FilterCondition::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| FilterCondition::or(l, r)),
        ]
    })
}

/// Expressions of nesting depth at most `depth`, with or without OPT.
pub fn expression(voc: &Vocabulary, depth: u32, with_opt: bool) -> BoxedStrategy<SparqlExpression> {
    let leaf = triple_pattern(voc).prop_map(SparqlExpression::Pattern);
    let cond = condition(voc).boxed();
    leaf.prop_recursive(depth, 6, 2, move |inner| {
        let cond = cond.clone();
        let mut choices = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| SparqlExpression::and(l, r))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| SparqlExpression::union(l, r))
                .boxed(),
            (inner.clone(), cond)
                .prop_map(|(p, c)| SparqlExpression::filter(p, c))
                .boxed(),
        ];
        if with_opt {
            choices.push(
                (inner.clone(), inner)
                    .prop_map(|(l, r)| SparqlExpression::opt(l, r))
                    .boxed(),
            );
        }
        proptest::strategy::Union::new(choices)
    })
    .boxed()
}

pub fn graph(voc: &Vocabulary, max: usize) -> impl Strategy<Value = Graph> {
    let triple = (
        select(voc.subjects.clone()),
        select(voc.predicates.clone()),
        select(voc.objects.clone()),
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o).expect("valid triple"));
    proptest::collection::btree_set(triple, 0..=max)
}

#[derive(Debug, Clone)]
struct RawTriple {
    subject: usize,
    predicate: usize,
    object: usize,
}

/// Random finite webs with up to `max_docs` documents.
///
/// Document `di` is the target of `<wi>`; `<v0>` and `<v1>` are extra URIs
/// of random documents; `<z0>` and `<z1>` are broken. Triples draw subjects
/// and objects from those URIs, the document's own blank node, and (for
/// objects) a literal.
pub fn finite_web(max_docs: usize) -> impl Strategy<Value = FiniteWeb> {
    (1..=max_docs)
        .prop_flat_map(|n| {
            let raw =
                (0..8usize, 0..4usize, 0..10usize).prop_map(|(subject, predicate, object)| {
                    RawTriple {
                        subject,
                        predicate,
                        object,
                    }
                });
            (
                Just(n),
                proptest::collection::vec(proptest::collection::vec(raw, 0..6), n),
                (0..n, 0..n),
            )
        })
        .prop_map(|(n, docs, (v0, v1))| build_web(n, &docs, v0, v1))
}

fn build_web(n: usize, docs: &[Vec<RawTriple>], v0: usize, v1: usize) -> FiniteWeb {
    let u = |s: String| Term::uri(s).unwrap();
    let mut adoc = BTreeMap::new();
    let mut documents = BTreeMap::new();
    for i in 0..n {
        adoc.insert(uri(&format!("w{i}")), doc(&format!("d{i}")));
    }
    adoc.insert(uri("v0"), doc(&format!("d{v0}")));
    adoc.insert(uri("v1"), doc(&format!("d{v1}")));
    for (i, raw) in docs.iter().enumerate() {
        let id = format!("d{i}");
        let blank = Term::parse("_:b", Some(&id)).unwrap();
        let node = |k: usize| match k {
            0..=2 => u(format!("w{}", (i + k) % n)),
            3 => u(format!("w{}", k % n)),
            4 => u("v0".into()),
            5 => u("v1".into()),
            6 => u("z0".into()),
            7 => blank.clone(),
            8 => u("z1".into()),
            _ => Term::literal("lit"),
        };
        let predicate = |k: usize| match k {
            0 => u("p".into()),
            1 => u("q".into()),
            2 => u("w0".into()),
            _ => u("z1".into()),
        };
        let graph: Graph = raw
            .iter()
            .map(|r| {
                Triple::new(node(r.subject), predicate(r.predicate), node(r.object)).expect("valid")
            })
            .collect();
        documents.insert(doc(&id), graph);
    }
    FiniteWeb::new(documents, adoc).expect("generated webs are valid")
}

/// Seed URIs for webs from [`finite_web`]: existing, alias and broken ones.
pub fn seeds(max: usize) -> impl Strategy<Value = Vec<Uri>> {
    let pool: Vec<Uri> = ["w0", "w1", "w2", "v0", "z0"]
        .into_iter()
        .map(uri)
        .collect();
    subsequence(pool, 1..=max)
}

pub fn basic_criterion() -> impl Strategy<Value = ReachabilityCriterion> {
    select(vec![
        ReachabilityCriterion::All,
        ReachabilityCriterion::None,
        ReachabilityCriterion::Match,
    ])
}

/// A constant criterion over the given URI and triple pools.
pub fn constant_criterion(
    uris: Vec<Uri>,
    triples: Vec<Triple>,
) -> impl Strategy<Value = ReachabilityCriterion> {
    let us = move |max: usize| subsequence(uris.clone(), 0..=max.min(uris.len()));
    let ts = move |max: usize| subsequence(triples.clone(), 0..=max.min(triples.len()));
    let set_u = |v: Vec<Uri>| v.into_iter().collect::<BTreeSet<_>>();
    let set_t = |v: Vec<Triple>| v.into_iter().collect::<BTreeSet<_>>();
    prop_oneof![
        Just(ReachabilityCriterion::None),
        us(5).prop_map(move |u| ReachabilityCriterion::ConstU(set_u(u))),
        ts(5).prop_map(move |t| ReachabilityCriterion::ConstT(set_t(t))),
        (us(5), ts(5)).prop_map(move |(u, t)| ReachabilityCriterion::ConstAnd(set_u(u), set_t(t))),
        (us(5), ts(5)).prop_map(move |(u, t)| ReachabilityCriterion::ConstOr(set_u(u), set_t(t))),
    ]
}

/// `|U| + |T|` of a constant criterion; `(0, 0)` for `None`.
pub fn constant_sizes(c: &ReachabilityCriterion) -> (usize, usize) {
    match c {
        ReachabilityCriterion::ConstU(u) => (u.len(), 0),
        ReachabilityCriterion::ConstT(t) => (0, t.len()),
        ReachabilityCriterion::ConstAnd(u, t) | ReachabilityCriterion::ConstOr(u, t) => {
            (u.len(), t.len())
        }
        _ => (0, 0),
    }
}

/// A random subset of a web's documents.
pub fn web_and_subset(max_docs: usize) -> impl Strategy<Value = (FiniteWeb, BTreeSet<DocumentId>)> {
    finite_web(max_docs).prop_flat_map(|web| {
        let ids: Vec<DocumentId> = web.document_ids().into_iter().collect();
        let n = ids.len();
        (
            Just(web),
            subsequence(ids, 0..=n).prop_map(|v| v.into_iter().collect()),
        )
    })
}
