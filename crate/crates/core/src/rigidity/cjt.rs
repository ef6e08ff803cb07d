//! Global rigidity predicate for graphs of simplicial k-circuits, `k >= 3`:
//! the graph is globally `(k+1)`-rigid iff it is `K_{k+1}`, `K_{k+2}`, or
//! `(k+2)`-connected. Only the predicate is evaluated; the hypotheses are
//! checked and never assumed.

use serde::Serialize;

use super::RigidityError;
use crate::complex::{graph_of, is_k_circuit, SimplicialComplex};
use crate::graph::is_k_connected;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CjtOutcome {
    pub k: usize,
    /// Predicted global rigidity in dimension `k + 1`.
    pub prediction: bool,
    /// Which disjunct held: `"K_{k+1}"`, `"K_{k+2}"`, `"(k+2)-connected"` or `"none"`.
    pub via: String,
}

pub fn cjt_globally_rigid_predicate(
    c: &SimplicialComplex,
    k: usize,
) -> Result<CjtOutcome, RigidityError> {
    if k < 3 {
        return Err(RigidityError::HypothesesNotMet(format!(
            "k = {k} < 3"
        )));
    }
    let circuit = is_k_circuit(c, k);
    if !circuit.is_circuit {
        let detail = match circuit.violations.first() {
            Some((face, count)) => format!(
                "not a {k}-circuit: {}-face {face:?} lies in {count} facet(s)",
                k - 1
            ),
            None => format!("not a pure {k}-complex"),
        };
        return Err(RigidityError::HypothesesNotMet(detail));
    }
    let g = graph_of(c);
    let n = g.order();
    let via = if g.is_complete() && n == k + 1 {
        "K_{k+1}"
    } else if g.is_complete() && n == k + 2 {
        "K_{k+2}"
    } else if is_k_connected(&g, k + 2) {
        "(k+2)-connected"
    } else {
        "none"
    };
    Ok(CjtOutcome {
        k,
        prediction: via != "none",
        via: via.into(),
    })
}
