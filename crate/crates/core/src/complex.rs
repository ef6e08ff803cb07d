//! Pure simplicial complexes given by their facets, including the cyclic
//! and path window families.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("window size {d} must be smaller than the ground set size {n}")]
    CyclicWindowTooLarge { n: usize, d: usize },
    #[error("window size {d} exceeds the ground set size {n}")]
    PathWindowTooLarge { n: usize, d: usize },
    #[error("window size must be at least 1")]
    ZeroWindow,
    #[error("facet contains vertex {vertex} outside ground set of size {ground_size}")]
    VertexOutOfRange { vertex: Vertex, ground_size: usize },
}

/// A simplicial complex stored as its facets. Faces are every subset of a
/// facet; they are enumerated on demand and never stored.
///
/// Facets are sorted ascending, deduplicated, maximality-filtered and listed
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct SimplicialComplex {
    ground_size: usize,
    facets: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    ground_size: usize,
    facets: Vec<Vec<Vertex>>,
}

impl TryFrom<ComplexRepr> for SimplicialComplex {
    type Error = ComplexError;

    fn try_from(r: ComplexRepr) -> Result<Self, Self::Error> {
        SimplicialComplex::new(r.ground_size, r.facets)
    }
}

impl From<SimplicialComplex> for ComplexRepr {
    fn from(c: SimplicialComplex) -> Self {
        ComplexRepr {
            ground_size: c.ground_size,
            facets: c.facets,
        }
    }
}

impl SimplicialComplex {
    pub fn new(
        ground_size: usize,
        facets: impl IntoIterator<Item = Vec<Vertex>>,
    ) -> Result<Self, ComplexError> {
        let mut set: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        for facet in facets {
            let facet: BTreeSet<Vertex> = facet.into_iter().collect();
            if let Some(&v) = facet.iter().find(|&&v| v >= ground_size) {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: v,
                    ground_size,
                });
            }
            set.insert(facet.into_iter().collect());
        }
        let all: Vec<Vec<Vertex>> = set.into_iter().collect();
        let facets = all
            .iter()
            .filter(|f| {
                !all.iter()
                    .any(|g| g.len() > f.len() && is_subset(f, g))
            })
            .cloned()
            .collect();
        Ok(Self {
            ground_size,
            facets,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn facets(&self) -> &[Vec<Vertex>] {
        &self.facets
    }

    /// Largest facet cardinality minus one; `None` for a complex with no facets.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len()).max().map(|m| m.saturating_sub(1))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serialization is infallible")
    }
}

fn is_subset(small: &[Vertex], large: &[Vertex]) -> bool {
    small.iter().all(|v| large.binary_search(v).is_ok())
}

/// The cyclic window complex on `0..n`: one facet
/// `{i, i+1, …, i+d-1} (mod n)` for each `i`.
pub fn build_cyclic_complex(n: usize, d: usize) -> Result<SimplicialComplex, ComplexError> {
    if d == 0 {
        return Err(ComplexError::ZeroWindow);
    }
    if d >= n {
        return Err(ComplexError::CyclicWindowTooLarge { n, d });
    }
    SimplicialComplex::new(n, (0..n).map(|i| (0..d).map(|j| (i + j) % n).collect()))
}

/// The path window complex on `0..n`: facets `{i, …, i+d-1}` for
/// `i = 0..=n-d`.
pub fn build_path_complex(n: usize, d: usize) -> Result<SimplicialComplex, ComplexError> {
    if d == 0 {
        return Err(ComplexError::ZeroWindow);
    }
    if d > n {
        return Err(ComplexError::PathWindowTooLarge { n, d });
    }
    SimplicialComplex::new(n, (0..=n - d).map(|i| (i..i + d).collect()))
}

/// The 1-skeleton: `{u, v}` is an edge iff it lies in some facet.
pub fn graph_of(c: &SimplicialComplex) -> Graph {
    let pairs = c.facets.iter().flat_map(|f| {
        f.iter()
            .enumerate()
            .flat_map(move |(i, &u)| f[i + 1..].iter().map(move |&v| (u, v)))
    });
    Graph::from_edge_set(c.ground_size, pairs).expect("facets are validated against the ground set")
}

/// All `k`-faces (faces with `k + 1` vertices), sorted lexicographically.
pub fn faces_of_dim(c: &SimplicialComplex, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = BTreeSet::new();
    for f in &c.facets {
        for s in subsets_of_size(f, k + 1) {
            out.insert(s);
        }
    }
    out.into_iter().collect()
}

fn subsets_of_size(items: &[Vertex], size: usize) -> Vec<Vec<Vertex>> {
    fn rec(items: &[Vertex], start: usize, size: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= items.len() {
        rec(items, 0, size, &mut Vec::with_capacity(size), &mut out);
    }
    out
}

/// True iff every facet has exactly `k + 1` vertices (and there is at least one).
pub fn is_pure_k_complex(c: &SimplicialComplex, k: usize) -> bool {
    !c.facets.is_empty() && c.facets.iter().all(|f| f.len() == k + 1)
}

/// Outcome of a k-circuit check with the incidence data behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitReport {
    pub k: usize,
    pub pure: bool,
    /// How many `(k-1)`-faces lie in exactly `m` facets, keyed by `m`.
    pub incidence_histogram: BTreeMap<usize, usize>,
    /// `(k-1)`-faces whose facet count is odd, with that count.
    pub violations: Vec<(Vec<Vertex>, usize)>,
    pub is_circuit: bool,
}

impl CircuitReport {
    /// Every `(k-1)`-face lies in exactly two facets.
    pub fn exactly_two(&self) -> bool {
        self.is_circuit && self.incidence_histogram.keys().all(|&m| m == 2)
    }
}

/// Checks the k-circuit condition: `c` is a pure k-complex and every
/// `(k-1)`-face is contained in an even, nonzero number of k-faces.
pub fn is_k_circuit(c: &SimplicialComplex, k: usize) -> CircuitReport {
    let pure = is_pure_k_complex(c, k);
    let mut counts: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
    if pure && k >= 1 {
        for f in &c.facets {
            for s in subsets_of_size(f, k) {
                *counts.entry(s).or_default() += 1;
            }
        }
    }
    let mut incidence_histogram = BTreeMap::new();
    for &m in counts.values() {
        *incidence_histogram.entry(m).or_default() += 1;
    }
    let violations: Vec<(Vec<Vertex>, usize)> = counts
        .into_iter()
        .filter(|&(_, m)| m % 2 == 1)
        .collect();
    let is_circuit = pure && k >= 1 && violations.is_empty();
    CircuitReport {
        k,
        pure,
        incidence_histogram,
        violations,
        is_circuit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::are_isomorphic;

    #[test]
    fn cyclic_6_2() {
        let c = build_cyclic_complex(6, 2).unwrap();
        assert_eq!(
            c.facets(),
            &[vec![0, 1], vec![0, 5], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5]]
        );
        assert_eq!(graph_of(&c), Graph::cycle(6));
    }

    #[test]
    fn cyclic_5_3_is_k5() {
        let c = build_cyclic_complex(5, 3).unwrap();
        assert_eq!(c.facets().len(), 5);
        assert!(c.facets().contains(&vec![0, 3, 4]));
        assert!(c.facets().contains(&vec![0, 1, 4]));
        assert_eq!(graph_of(&c), Graph::complete(5));
    }

    #[test]
    fn window_preconditions() {
        assert_eq!(
            build_cyclic_complex(4, 4),
            Err(ComplexError::CyclicWindowTooLarge { n: 4, d: 4 })
        );
        assert!(build_path_complex(3, 4).is_err());
        assert!(build_cyclic_complex(4, 0).is_err());
    }

    #[test]
    fn path_complexes() {
        assert_eq!(graph_of(&build_path_complex(5, 2).unwrap()), Graph::path(5));
        let p = build_path_complex(7, 3).unwrap();
        assert_eq!(p.facets().len(), 5);
        let g = graph_of(&p);
        for u in 0..7 {
            for v in u + 1..7 {
                assert_eq!(g.has_edge(u, v), v - u <= 2);
            }
        }
        assert_eq!(build_path_complex(3, 3).unwrap().facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn single_facet_is_complete() {
        let c = SimplicialComplex::new(5, [vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(graph_of(&c), Graph::complete(5));
    }

    #[test]
    fn cyclic_12_3_edges() {
        let c = build_cyclic_complex(12, 3).unwrap();
        let g = graph_of(&c);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(faces_of_dim(&c, 1).len(), 24);
    }

    #[test]
    fn face_enumeration() {
        let c = build_cyclic_complex(6, 2).unwrap();
        assert_eq!(faces_of_dim(&c, 0), (0..6).map(|v| vec![v]).collect::<Vec<_>>());
        assert!(faces_of_dim(&c, 2).is_empty());
        assert_eq!(subsets_of_size(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets_of_size(&[1, 2], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn maximality_filter() {
        let c = SimplicialComplex::new(4, [vec![0, 1], vec![1, 0, 2], vec![2, 3]]).unwrap();
        assert_eq!(c.facets(), &[vec![0, 1, 2], vec![2, 3]]);
        assert!(SimplicialComplex::new(2, [vec![0, 2]]).is_err());
    }

    #[test]
    fn purity() {
        for (n, d) in [(8, 3), (12, 4), (10, 2)] {
            assert!(is_pure_k_complex(&build_cyclic_complex(n, d).unwrap(), d - 1));
            assert!(is_pure_k_complex(&build_path_complex(n, d).unwrap(), d - 1));
        }
        let mixed = SimplicialComplex::new(5, [vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert!((0..5).all(|k| !is_pure_k_complex(&mixed, k)));
    }

    #[test]
    fn circuits() {
        let tetra_boundary =
            SimplicialComplex::new(4, [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
                .unwrap();
        let rep = is_k_circuit(&tetra_boundary, 2);
        assert!(rep.is_circuit && rep.exactly_two());

        let p = build_path_complex(5, 2).unwrap();
        let rep = is_k_circuit(&p, 1);
        assert!(!rep.is_circuit);
        assert!(rep.violations.contains(&(vec![0], 1)));

        let c = build_cyclic_complex(9, 2).unwrap();
        assert!(is_k_circuit(&c, 1).exactly_two());
    }

    // The consecutive (d-2)-faces lie in two facets, but the non-consecutive
    // ones, e.g. {0,1,3} in the 4-window complex, lie in exactly one.
    #[test]
    fn cyclic_windows_are_not_circuits_beyond_cycles() {
        let rep = is_k_circuit(&build_cyclic_complex(10, 4).unwrap(), 3);
        assert!(rep.pure);
        assert!(!rep.is_circuit);
        assert!(rep.violations.contains(&(vec![0, 1, 3], 1)));
        assert_eq!(rep.incidence_histogram, BTreeMap::from([(1, 20), (2, 10)]));

        let rep = is_k_circuit(&build_cyclic_complex(8, 3).unwrap(), 2);
        assert!(rep.violations.contains(&(vec![0, 2], 1)));
    }

    #[test]
    fn cyclic_graph_is_circulant() {
        for n in 3..=40 {
            for d in 2..n {
                let g = graph_of(&build_cyclic_complex(n, d).unwrap());
                for u in 0..n {
                    for v in u + 1..n {
                        let circ = (v - u).min(n - (v - u));
                        assert_eq!(g.has_edge(u, v), circ < d, "n={n} d={d} {u}-{v}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_is_automorphism() {
        for (n, d) in [(10, 4), (12, 3), (7, 2), (15, 5)] {
            let g = graph_of(&build_cyclic_complex(n, d).unwrap());
            let rot = crate::graph::VertexBijection::new((0..n).map(|i| (i + 1) % n).collect(), n)
                .unwrap();
            assert_eq!(g.relabel(&rot), g);
            assert!(are_isomorphic(&g, &g).is_some());
        }
    }

    #[test]
    fn json_format() {
        let c = build_cyclic_complex(5, 2).unwrap();
        assert_eq!(
            c.to_json(),
            r#"{"ground_size":5,"facets":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#
        );
    }
}
