//! Query execution: full-Web semantics, terminating reachability-based
//! execution, and streaming reachability-based execution.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::algebra::{eval, Graph, SolutionSet, SparqlExpression, Valuation};
use crate::reach::{
    compute_reachable_part, Budget, Lookup, ReachabilityCriterion, Step, Traversal,
};
use crate::term::Uri;
use crate::web::{all_data, WebOfLinkedData};

pub use crate::algebra::nontrivial_witness;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the web is not materializable; full-web evaluation needs a finite budget")]
    BudgetRequired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// The solutions are the exact query result.
    Complete,
    /// The budget ran out; the solutions are a partial result.
    BudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Complete => "Complete",
            Status::BudgetExhausted => "BudgetExhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionReport {
    pub solutions: SolutionSet,
    pub status: Status,
    /// Budgeted lookups (seed lookups excluded).
    pub lookups_spent: u64,
    pub iterations: u64,
    /// Number of documents whose data the solutions were computed from.
    pub part_size: usize,
}

/// Evaluates `p` over all data of `web`.
///
/// Materializable webs are evaluated exactly and `budget` is ignored. For
/// infinite webs the dereferenceable URIs are enumerated in canonical order
/// up to the budget and the result is marked `BudgetExhausted`.
pub fn exec_full_web<W: WebOfLinkedData + ?Sized>(
    web: &W,
    p: &SparqlExpression,
    budget: Budget,
) -> Result<ExecutionReport, EngineError> {
    if web.is_materializable() {
        let g = all_data(web).expect("materializable");
        let docs: std::collections::BTreeSet<_> =
            web.uris().filter_map(|u| web.dereference(&u)).collect();
        return Ok(ExecutionReport {
            solutions: eval(p, &g),
            status: Status::Complete,
            lookups_spent: 0,
            iterations: 0,
            part_size: docs.len(),
        });
    }
    let Budget::Limited(max) = budget else {
        return Err(EngineError::BudgetRequired);
    };
    let mut uris = web.uris();
    let mut docs = std::collections::BTreeSet::new();
    let mut g = Graph::new();
    let mut spent = 0;
    while spent < max {
        let Some(u) = uris.next() else { break };
        spent += 1;
        if let Some(d) = web.dereference(&u) {
            if docs.insert(d.clone()) {
                g.extend(web.data(&d));
            }
        }
    }
    // every document has a URI, so running out of URIs means every document was seen
    let status = if uris.next().is_none() {
        Status::Complete
    } else {
        Status::BudgetExhausted
    };
    Ok(ExecutionReport {
        solutions: eval(p, &g),
        status,
        lookups_spent: spent,
        iterations: spent,
        part_size: docs.len(),
    })
}

/// Expands the reachable part first, then evaluates once over its data.
pub fn exec_reach_terminating<W: WebOfLinkedData + ?Sized>(
    web: &W,
    seeds: &[Uri],
    c: &ReachabilityCriterion,
    p: &SparqlExpression,
    budget: Budget,
) -> ExecutionReport {
    let part = compute_reachable_part(web, seeds, c, p, budget);
    ExecutionReport {
        solutions: eval(p, &part.triples),
        status: if part.complete {
            Status::Complete
        } else {
            Status::BudgetExhausted
        },
        lookups_spent: part.lookups_spent,
        iterations: part.lookups_spent,
        part_size: part.documents.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamEvent {
    Solution {
        iteration: u64,
        valuation: Valuation,
    },
    /// Last event of every stream.
    Finished(Status),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Start,
    Evaluate,
    Emit,
    Finished(Status),
    Done,
}

/// Pull-based execution that interleaves evaluation and lookups: each
/// iteration evaluates the query over everything retrieved so far, emits the
/// solutions not emitted before, and then looks up links until one yields a
/// new document.
///
/// With an unlimited budget the stream does not end if the reachable part is
/// infinite.
pub struct SolutionStream<W> {
    web: W,
    seeds: Vec<Uri>,
    query: SparqlExpression,
    budget: Budget,
    traversal: Traversal,
    emitted: SolutionSet,
    pending: VecDeque<Valuation>,
    iteration: u64,
    phase: Phase,
    status: Option<Status>,
}

pub fn exec_reach_streaming<W: WebOfLinkedData>(
    web: W,
    seeds: &[Uri],
    c: &ReachabilityCriterion,
    p: &SparqlExpression,
    budget: Budget,
) -> SolutionStream<W> {
    SolutionStream {
        web,
        seeds: seeds.to_vec(),
        query: p.clone(),
        budget,
        traversal: Traversal::new(c.clone(), p.clone()),
        emitted: SolutionSet::new(),
        pending: VecDeque::new(),
        iteration: 0,
        phase: Phase::Start,
        status: None,
    }
}

impl<W: WebOfLinkedData> SolutionStream<W> {
    pub fn emitted(&self) -> &SolutionSet {
        &self.emitted
    }

    pub fn iterations(&self) -> u64 {
        self.iteration
    }

    pub fn lookups_spent(&self) -> u64 {
        self.traversal.lookups
    }

    pub fn part_size(&self) -> usize {
        self.traversal.documents.len()
    }

    /// The triples retrieved so far.
    pub fn triples(&self) -> &Graph {
        &self.traversal.triples
    }

    /// The terminal status, once the `Finished` event has been produced.
    pub fn status(&self) -> Option<Status> {
        self.status
    }

    /// Drains the stream and summarizes it.
    pub fn run_to_end(mut self) -> ExecutionReport {
        self.by_ref().for_each(drop);
        let status = self.status.expect("a drained stream has finished");
        ExecutionReport {
            solutions: self.emitted,
            status,
            lookups_spent: self.traversal.lookups,
            iterations: self.iteration,
            part_size: self.traversal.documents.len(),
        }
    }

    /// Lookups until one retrieves a new document; `Some(status)` when the
    /// traversal cannot continue.
    fn advance(&mut self) -> Option<Status> {
        loop {
            match self.traversal.step(&self.web, self.budget) {
                Step::Looked(Lookup::NewDocument) => return None,
                Step::Looked(Lookup::Broken | Lookup::KnownDocument) => {}
                Step::Done => return Some(Status::Complete),
                Step::OutOfBudget => return Some(Status::BudgetExhausted),
            }
        }
    }
}

impl<W: WebOfLinkedData> Iterator for SolutionStream<W> {
    type Item = StreamEvent;

    fn next(&mut self) -> Option<StreamEvent> {
        loop {
            match self.phase {
                Phase::Start => {
                    let seeds = std::mem::take(&mut self.seeds);
                    self.traversal.seed(&self.web, &seeds);
                    self.phase = Phase::Evaluate;
                }
                Phase::Evaluate => {
                    self.iteration += 1;
                    for mu in eval(&self.query, &self.traversal.triples) {
                        if self.emitted.insert(mu.clone()) {
                            self.pending.push_back(mu);
                        }
                    }
                    self.phase = Phase::Emit;
                }
                Phase::Emit => {
                    if let Some(valuation) = self.pending.pop_front() {
                        return Some(StreamEvent::Solution {
                            iteration: self.iteration,
                            valuation,
                        });
                    }
                    self.phase = match self.advance() {
                        None => Phase::Evaluate,
                        Some(status) => Phase::Finished(status),
                    };
                }
                Phase::Finished(status) => {
                    self.phase = Phase::Done;
                    self.status = Some(status);
                    return Some(StreamEvent::Finished(status));
                }
                Phase::Done => return None,
            }
        }
    }
}
