//! Combinatorial rigidity and finite model theory on small graphs.
//!
//! The crate builds the cyclic and path window complexes, decides generic
//! local and global rigidity with exact randomized rank tests, evaluates
//! first-order sentences over finite relational structures, and checks the
//! Hanf relation `⇄_r` between graphs. [`locality::verify_theorem`] ties these
//! together into a machine-checkable report showing that local and global
//! d-rigidity queries disagree on a pair of Hanf-equivalent graphs.

pub mod complex;
pub mod fo;
pub mod graph;
pub mod linalg;
pub mod locality;
pub mod report;
pub mod rigidity;

pub use complex::{
    build_cyclic_complex, build_path_complex, faces_of_dim, graph_of, is_k_circuit,
    is_pure_k_complex, CircuitReport, ComplexError, SimplicialComplex,
};
pub use graph::{
    are_isomorphic, connected_components, disjoint_union, is_connected, is_k_connected, r_ball,
    Ball, Graph, GraphError, Vertex, VertexBijection,
};
pub use locality::{
    ball_census, build_counterexample, glo_query, hanf_equivalent, loc_query, verify_theorem,
    BallCensus, LocalityError, NonDefinabilityReport, QueryOptions,
};
pub use report::{Claim, ClaimStatus, VerificationReport};
