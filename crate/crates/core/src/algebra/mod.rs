//! The SPARQL core fragment: expressions, filter conditions, valuations and
//! set-semantics evaluation over finite triple sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{PatternTerm, Term, TermError, Triple, TriplePattern, Variable};

pub mod oracle;

pub use oracle::brute_force_eval;

/// A finite set of triples, kept in triple order.
pub type Graph = BTreeSet<Triple>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable {0} is not bound by the valuation")]
    UnboundVariable(Variable),
    #[error("substitution produces an illegal triple: {0}")]
    IllegalPosition(TermError),
    #[error("brute-force enumeration needs {candidates} candidate valuations (limit {limit})")]
    TooLarge { candidates: u128, limit: u128 },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterCondition {
    /// `?x = c` with `c` a URI or literal.
    Eq(Variable, Term),
    EqVar(Variable, Variable),
    Bound(Variable),
    Not(Box<FilterCondition>),
    And(Box<FilterCondition>, Box<FilterCondition>),
    Or(Box<FilterCondition>, Box<FilterCondition>),
}

impl FilterCondition {
    pub fn eq(var: Variable, constant: Term) -> Result<Self, TermError> {
        if let Term::Blank(_) = constant {
            return Err(TermError::BlankInPattern);
        }
        Ok(FilterCondition::Eq(var, constant))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: FilterCondition) -> Self {
        FilterCondition::Not(Box::new(inner))
    }

    pub fn and(l: FilterCondition, r: FilterCondition) -> Self {
        FilterCondition::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FilterCondition, r: FilterCondition) -> Self {
        FilterCondition::Or(Box::new(l), Box::new(r))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SparqlExpression {
    Pattern(TriplePattern),
    And(Box<SparqlExpression>, Box<SparqlExpression>),
    Union(Box<SparqlExpression>, Box<SparqlExpression>),
    Opt(Box<SparqlExpression>, Box<SparqlExpression>),
    Filter(Box<SparqlExpression>, FilterCondition),
}

impl SparqlExpression {
    pub fn and(l: SparqlExpression, r: SparqlExpression) -> Self {
        SparqlExpression::And(Box::new(l), Box::new(r))
    }

    pub fn union(l: SparqlExpression, r: SparqlExpression) -> Self {
        SparqlExpression::Union(Box::new(l), Box::new(r))
    }

    pub fn opt(l: SparqlExpression, r: SparqlExpression) -> Self {
        SparqlExpression::Opt(Box::new(l), Box::new(r))
    }

    pub fn filter(inner: SparqlExpression, cond: FilterCondition) -> Self {
        SparqlExpression::Filter(Box::new(inner), cond)
    }

    /// All triple patterns, left to right.
    pub fn patterns(&self) -> Vec<&TriplePattern> {
        let mut out = Vec::new();
        self.collect_patterns(&mut out);
        out
    }

    fn collect_patterns<'a>(&'a self, out: &mut Vec<&'a TriplePattern>) {
        match self {
            SparqlExpression::Pattern(tp) => out.push(tp),
            SparqlExpression::And(l, r)
            | SparqlExpression::Union(l, r)
            | SparqlExpression::Opt(l, r) => {
                l.collect_patterns(out);
                r.collect_patterns(out);
            }
            SparqlExpression::Filter(p, _) => p.collect_patterns(out),
        }
    }

    /// Variables of the triple patterns; filter-only variables are not included.
    pub fn vars(&self) -> BTreeSet<Variable> {
        self.patterns()
            .into_iter()
            .flat_map(|tp| tp.vars().cloned())
            .collect()
    }

    /// No OPT anywhere. Sufficient (not necessary) for monotonicity.
    pub fn is_opt_free(&self) -> bool {
        match self {
            SparqlExpression::Pattern(_) => true,
            SparqlExpression::Opt(..) => false,
            SparqlExpression::And(l, r) | SparqlExpression::Union(l, r) => {
                l.is_opt_free() && r.is_opt_free()
            }
            SparqlExpression::Filter(p, _) => p.is_opt_free(),
        }
    }
}

impl From<TriplePattern> for SparqlExpression {
    fn from(tp: TriplePattern) -> Self {
        SparqlExpression::Pattern(tp)
    }
}

impl fmt::Debug for SparqlExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_expression(self))
    }
}

impl fmt::Display for SparqlExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_expression(self))
    }
}

impl fmt::Debug for FilterCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_condition(self))
    }
}

pub fn vars(p: &SparqlExpression) -> BTreeSet<Variable> {
    p.vars()
}

pub fn is_opt_free(p: &SparqlExpression) -> bool {
    p.is_opt_free()
}

/// A partial mapping from variables to terms. The empty valuation is
/// `Valuation::default()`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(BTreeMap<Variable, Term>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn is_bound(&self, v: &Variable) -> bool {
        self.0.contains_key(v)
    }

    /// Binds `v`. Returns `false` (and leaves the valuation unchanged) if `v`
    /// is already bound to a different term.
    pub fn bind(&mut self, v: Variable, t: Term) -> bool {
        match self.0.get(&v) {
            Some(existing) => *existing == t,
            None => {
                self.0.insert(v, t);
                true
            }
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Agreement on every shared variable.
    pub fn compatible(&self, other: &Valuation) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .0
            .iter()
            .all(|(v, t)| large.0.get(v).is_none_or(|u| u == t))
    }

    /// `self ∪ other`; only meaningful for compatible valuations.
    pub fn merge(&self, other: &Valuation) -> Valuation {
        let mut out = self.clone();
        for (v, t) in &other.0 {
            out.0.entry(v.clone()).or_insert_with(|| t.clone());
        }
        out
    }
}

impl FromIterator<(Variable, Term)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

/// A duplicate-free set of valuations.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SolutionSet(BTreeSet<Valuation>);

impl SolutionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{μ∅}`, the identity for join.
    pub fn unit() -> Self {
        SolutionSet([Valuation::new()].into())
    }

    pub fn insert(&mut self, mu: Valuation) -> bool {
        self.0.insert(mu)
    }

    pub fn contains(&self, mu: &Valuation) -> bool {
        self.0.contains(mu)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Valuation> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &SolutionSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<Valuation> for SolutionSet {
    fn from_iter<I: IntoIterator<Item = Valuation>>(iter: I) -> Self {
        SolutionSet(iter.into_iter().collect())
    }
}

impl IntoIterator for SolutionSet {
    type Item = Valuation;
    type IntoIter = std::collections::btree_set::IntoIter<Valuation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a SolutionSet {
    type Item = &'a Valuation;
    type IntoIter = std::collections::btree_set::Iter<'a, Valuation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Extend<Valuation> for SolutionSet {
    fn extend<I: IntoIterator<Item = Valuation>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl fmt::Debug for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// True iff some solution binds at least one variable.
pub fn nontrivial_witness(sols: &SolutionSet) -> bool {
    sols.iter().any(|mu| !mu.is_empty())
}

/// `mu[tp]`: the pattern with every variable replaced by its image.
pub fn apply(mu: &Valuation, tp: &TriplePattern) -> Result<Triple, AlgebraError> {
    let subst = |pt: &PatternTerm| match pt {
        PatternTerm::Term(t) => Ok(t.clone()),
        PatternTerm::Var(v) => mu
            .get(v)
            .cloned()
            .ok_or_else(|| AlgebraError::UnboundVariable(v.clone())),
    };
    let [s, p, o] = tp.positions();
    Triple::new(subst(s)?, subst(p)?, subst(o)?).map_err(AlgebraError::IllegalPosition)
}

/// Whether `mu` satisfies `cond`. Atoms over unbound variables are false.
pub fn satisfies(mu: &Valuation, cond: &FilterCondition) -> bool {
    match cond {
        FilterCondition::Eq(x, c) => mu.get(x) == Some(c),
        FilterCondition::EqVar(x, y) => match (mu.get(x), mu.get(y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        FilterCondition::Bound(x) => mu.is_bound(x),
        FilterCondition::Not(r) => !satisfies(mu, r),
        FilterCondition::And(l, r) => satisfies(mu, l) && satisfies(mu, r),
        FilterCondition::Or(l, r) => satisfies(mu, l) || satisfies(mu, r),
    }
}

pub fn join(a: &SolutionSet, b: &SolutionSet) -> SolutionSet {
    let mut out = SolutionSet::new();
    for l in a {
        for r in b {
            if l.compatible(r) {
                out.insert(l.merge(r));
            }
        }
    }
    out
}

pub fn union(a: &SolutionSet, b: &SolutionSet) -> SolutionSet {
    a.iter().chain(b.iter()).cloned().collect()
}

/// Elements of `a` compatible with no element of `b`.
pub fn minus(a: &SolutionSet, b: &SolutionSet) -> SolutionSet {
    a.iter()
        .filter(|l| b.iter().all(|r| !l.compatible(r)))
        .cloned()
        .collect()
}

pub fn left_outer_join(a: &SolutionSet, b: &SolutionSet) -> SolutionSet {
    let mut out = join(a, b);
    out.extend(minus(a, b));
    out
}

pub fn select(cond: &FilterCondition, a: &SolutionSet) -> SolutionSet {
    a.iter().filter(|mu| satisfies(mu, cond)).cloned().collect()
}

/// Binds `tp` against `t`, honoring repeated variables.
fn bind_pattern(tp: &TriplePattern, t: &Triple) -> Option<Valuation> {
    let p = Term::Uri(t.predicate().clone());
    let mut mu = Valuation::new();
    for (pt, term) in tp
        .positions()
        .into_iter()
        .zip([t.subject(), &p, t.object()])
    {
        match pt {
            PatternTerm::Term(x) if x != term => return None,
            PatternTerm::Term(_) => {}
            PatternTerm::Var(v) => {
                if !mu.bind(v.clone(), term.clone()) {
                    return None;
                }
            }
        }
    }
    Some(mu)
}

/// Set-semantics evaluation of `p` over the finite graph `g`.
pub fn eval(p: &SparqlExpression, g: &Graph) -> SolutionSet {
    match p {
        SparqlExpression::Pattern(tp) => g.iter().filter_map(|t| bind_pattern(tp, t)).collect(),
        SparqlExpression::And(l, r) => join(&eval(l, g), &eval(r, g)),
        SparqlExpression::Union(l, r) => union(&eval(l, g), &eval(r, g)),
        SparqlExpression::Opt(l, r) => left_outer_join(&eval(l, g), &eval(r, g)),
        SparqlExpression::Filter(inner, cond) => select(cond, &eval(inner, g)),
    }
}
