//! Linked Data query engine: SPARQL expressions evaluated over Webs of
//! Linked Data under full-web and reachability-based semantics.

pub mod algebra;
pub mod cli;
pub mod encoding;
pub mod engine;
pub mod parser;
pub mod reach;
pub mod term;
pub mod web;

pub use algebra::{eval, Graph, SolutionSet, SparqlExpression, Valuation};
pub use encoding::{enc_solution_set, enc_triple, enc_triple_set, enc_valuation, CanonicalText};
pub use engine::{
    exec_full_web, exec_reach_streaming, exec_reach_terminating, ExecutionReport, SolutionStream,
    Status, StreamEvent,
};
pub use parser::{parse_expression, print_expression};
pub use reach::{compute_reachable_part, Budget, ReachabilityCriterion, ReachablePart};
pub use term::{Term, Triple, Uri, Variable};
pub use web::{open_web, DocumentId, FiniteWeb, WebOfLinkedData};
