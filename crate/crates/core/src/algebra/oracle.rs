//! Brute-force evaluation used as a test oracle.
//!
//! Every candidate partial valuation over `vars(P)` into `terms(G)` is
//! enumerated and kept iff it is a solution by direct reading of the
//! evaluation rules. Nothing here goes through the join/union/difference
//! operators of the parent module.

use std::collections::{BTreeSet, HashSet};

use super::{AlgebraError, FilterCondition, Graph, SparqlExpression, Valuation};
use crate::term::{PatternTerm, Term, Triple, Variable};

/// Upper bound on `(|terms(G)| + 1) ^ |vars(P)|`.
pub const CANDIDATE_LIMIT: u128 = 1_000_000;

pub fn brute_force_eval(
    p: &SparqlExpression,
    g: &Graph,
) -> Result<super::SolutionSet, AlgebraError> {
    let universe: Vec<Term> = g
        .iter()
        .flat_map(Triple::terms)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vars: Vec<Variable> = p.vars().into_iter().collect();
    let candidates = (universe.len() as u128 + 1)
        .checked_pow(vars.len() as u32)
        .unwrap_or(u128::MAX);
    if candidates > CANDIDATE_LIMIT {
        return Err(AlgebraError::TooLarge {
            candidates,
            limit: CANDIDATE_LIMIT,
        });
    }
    Ok(solutions(p, g, &universe).into_iter().collect())
}

/// All partial valuations with domain inside `vars` and range inside `universe`.
fn candidates(vars: &[Variable], universe: &[Term]) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * (universe.len() + 1));
        for mu in &out {
            next.push(mu.clone());
            for t in universe {
                let mut ext = mu.clone();
                ext.bind(v.clone(), t.clone());
                next.push(ext);
            }
        }
        out = next;
    }
    out
}

fn restrict(mu: &Valuation, keep: &BTreeSet<Variable>) -> Valuation {
    mu.iter()
        .filter(|(v, _)| keep.contains(*v))
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect()
}

fn subsets(of: &[Variable]) -> impl Iterator<Item = BTreeSet<Variable>> + '_ {
    (0u32..(1 << of.len())).map(move |mask| {
        of.iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v.clone())
            .collect()
    })
}

/// Is there a split `mu = m1 ∪ m2` with `m1 ∈ left`, `m2 ∈ right`?
fn splits_into(
    mu: &Valuation,
    left_vars: &BTreeSet<Variable>,
    right_vars: &BTreeSet<Variable>,
    left: &HashSet<Valuation>,
    right: &HashSet<Valuation>,
) -> bool {
    let dom: Vec<Variable> = mu.domain().cloned().collect();
    let in_left: Vec<Variable> = dom
        .iter()
        .filter(|v| left_vars.contains(*v))
        .cloned()
        .collect();
    let in_right: Vec<Variable> = dom
        .iter()
        .filter(|v| right_vars.contains(*v))
        .cloned()
        .collect();
    for d1 in subsets(&in_left) {
        let m1 = restrict(mu, &d1);
        if !left.contains(&m1) {
            continue;
        }
        for d2 in subsets(&in_right) {
            if dom.iter().all(|v| d1.contains(v) || d2.contains(v))
                && right.contains(&restrict(mu, &d2))
            {
                return true;
            }
        }
    }
    false
}

fn holds(mu: &Valuation, cond: &FilterCondition) -> bool {
    match cond {
        FilterCondition::Eq(x, c) => matches!(mu.get(x), Some(t) if t == c),
        FilterCondition::EqVar(x, y) => mu.is_bound(x) && mu.is_bound(y) && mu.get(x) == mu.get(y),
        FilterCondition::Bound(x) => mu.get(x).is_some(),
        FilterCondition::Not(r) => !holds(mu, r),
        FilterCondition::And(l, r) => holds(mu, l) && holds(mu, r),
        FilterCondition::Or(l, r) => holds(mu, l) || holds(mu, r),
    }
}

fn substitute(pt: &PatternTerm, mu: &Valuation) -> Option<Term> {
    match pt {
        PatternTerm::Term(t) => Some(t.clone()),
        PatternTerm::Var(v) => mu.get(v).cloned(),
    }
}

fn solutions(p: &SparqlExpression, g: &Graph, universe: &[Term]) -> HashSet<Valuation> {
    let vars: Vec<Variable> = p.vars().into_iter().collect();
    let all = candidates(&vars, universe);
    match p {
        SparqlExpression::Pattern(tp) => {
            let want: BTreeSet<&Variable> = tp.vars().collect();
            all.into_iter()
                .filter(|mu| {
                    mu.domain().collect::<BTreeSet<_>>() == want && {
                        let [s, pp, o] = tp.positions();
                        match (substitute(s, mu), substitute(pp, mu), substitute(o, mu)) {
                            (Some(s), Some(pp), Some(o)) => {
                                Triple::new(s, pp, o).is_ok_and(|t| g.contains(&t))
                            }
                            _ => false,
                        }
                    }
                })
                .collect()
        }
        SparqlExpression::And(l, r) => {
            let (lv, rv) = (l.vars(), r.vars());
            let (ls, rs) = (solutions(l, g, universe), solutions(r, g, universe));
            all.into_iter()
                .filter(|mu| splits_into(mu, &lv, &rv, &ls, &rs))
                .collect()
        }
        SparqlExpression::Union(l, r) => {
            let (ls, rs) = (solutions(l, g, universe), solutions(r, g, universe));
            all.into_iter()
                .filter(|mu| ls.contains(mu) || rs.contains(mu))
                .collect()
        }
        SparqlExpression::Opt(l, r) => {
            let (lv, rv) = (l.vars(), r.vars());
            let (ls, rs) = (solutions(l, g, universe), solutions(r, g, universe));
            all.into_iter()
                .filter(|mu| {
                    splits_into(mu, &lv, &rv, &ls, &rs)
                        || (ls.contains(mu)
                            && !rs
                                .iter()
                                .any(|nu| nu.iter().all(|(v, t)| mu.get(v).is_none_or(|x| x == t))))
                })
                .collect()
        }
        SparqlExpression::Filter(inner, cond) => {
            let inner_sols = solutions(inner, g, universe);
            all.into_iter()
                .filter(|mu| inner_sols.contains(mu) && holds(mu, cond))
                .collect()
        }
    }
}
