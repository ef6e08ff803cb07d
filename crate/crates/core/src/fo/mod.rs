//! First-order logic over finite relational structures.
//!
//! Formulas use variables `v0, v1, …`, the five connectives as primitive
//! nodes, and `forall`/`exists`. Structures have universe `0..size` and one
//! tuple set per relation symbol. Graphs are the structures over `{~}` that
//! satisfy the symmetry axiom.

mod parser;
mod structure;
mod syntax;

use thiserror::Error;

pub use parser::parse_formula;
pub use structure::{
    evaluate, evaluate_sentence, gaifman_graph, graph_from_structure, models_graph_theory,
    structure_from_graph, Assignment, GraphTheoryCheck, SigmaStructure,
};
pub use syntax::{free_vars, is_relation_name, is_sentence, Formula, Signature, Var, EDGE_SYMBOL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("lexical error at {position}: unexpected '{found}'")]
    Lexical { position: usize, found: String },
    #[error("unexpected {found} at {position}, expected {expected}")]
    UnexpectedToken {
        position: usize,
        found: String,
        expected: String,
    },
    #[error("unexpected end of input at {position}, expected {expected}")]
    UnexpectedEnd { position: usize, expected: String },
    #[error("unbalanced parenthesis at {position}")]
    UnbalancedParens { position: usize },
    #[error("unknown relation symbol '{symbol}' at {position}")]
    UnknownSymbolAt { position: usize, symbol: String },
    #[error("relation '{symbol}' at {position} takes {expected} arguments, found {found}")]
    ArityAt {
        position: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown relation symbol '{0}'")]
    UnknownSymbol(String),
    #[error("relation '{symbol}' takes {expected} arguments, found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("relation '{0}' must have positive arity")]
    ZeroArity(String),
    #[error("'{0}' is not a valid relation symbol")]
    BadSymbol(String),
    #[error("relation symbol '{0}' declared twice")]
    DuplicateSymbol(String),
    #[error("tuple {tuple:?} of '{symbol}' mentions an element outside the universe of size {universe}")]
    TupleOutOfRange {
        symbol: String,
        tuple: Vec<usize>,
        universe: usize,
    },
    #[error("cannot infer the arity of '{0}' from an empty tuple list")]
    UnknownArity(String),
    #[error("free variable {0} has no value")]
    Unassigned(Var),
    #[error("assignment gives {var} the value {value} outside the universe of size {universe}")]
    AssignmentOutOfRange { var: Var, value: usize, universe: usize },
    #[error("expected the graph signature {{~}} with ~ binary")]
    NotGraphSignature,
    #[error("structure is not a model of the theory of graphs: {0}")]
    NotAGraph(String),
}
