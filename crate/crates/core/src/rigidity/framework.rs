use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::RigidityError;
use crate::graph::{Graph, Vertex};
use crate::linalg::IntMatrix;

/// A graph with an integer point in `dim`-space for every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FrameworkRepr")]
pub struct Framework {
    graph: Graph,
    dim: usize,
    config: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct FrameworkRepr {
    graph: Graph,
    dim: usize,
    config: Vec<Vec<i64>>,
}

impl TryFrom<FrameworkRepr> for Framework {
    type Error = RigidityError;

    fn try_from(r: FrameworkRepr) -> Result<Self, Self::Error> {
        Framework::new(r.graph, r.dim, r.config)
    }
}

impl Framework {
    pub fn new(graph: Graph, dim: usize, config: Vec<Vec<i64>>) -> Result<Self, RigidityError> {
        if dim == 0 {
            return Err(RigidityError::ZeroDimension);
        }
        if config.len() != graph.order() {
            return Err(RigidityError::ConfigLength {
                order: graph.order(),
                found: config.len(),
            });
        }
        if let Some((vertex, p)) = config.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(RigidityError::PointDimension {
                vertex,
                dim,
                found: p.len(),
            });
        }
        Ok(Self { graph, dim, config })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, v: Vertex) -> &[i64] {
        &self.config[v]
    }

    pub fn squared_distance(&self, u: Vertex, v: Vertex) -> i128 {
        self.config[u]
            .iter()
            .zip(&self.config[v])
            .map(|(&a, &b)| {
                let t = a as i128 - b as i128;
                t * t
            })
            .sum()
    }
}

fn check_compatible(f1: &Framework, f2: &Framework) -> Result<(), RigidityError> {
    if f1.dim != f2.dim {
        return Err(RigidityError::Mismatch("dimension"));
    }
    if f1.graph != f2.graph {
        return Err(RigidityError::Mismatch("graph"));
    }
    Ok(())
}

/// Equal squared lengths on every edge.
pub fn are_equivalent(f1: &Framework, f2: &Framework) -> Result<bool, RigidityError> {
    check_compatible(f1, f2)?;
    Ok(f1
        .graph
        .edges()
        .iter()
        .all(|&(u, v)| f1.squared_distance(u, v) == f2.squared_distance(u, v)))
}

/// Equal squared distances between every pair of vertices.
pub fn are_congruent(f1: &Framework, f2: &Framework) -> Result<bool, RigidityError> {
    check_compatible(f1, f2)?;
    let n = f1.graph.order();
    Ok((0..n).all(|u| (u + 1..n).all(|v| f1.squared_distance(u, v) == f2.squared_distance(u, v))))
}

/// Rigidity matrix with one row per edge in canonical edge order and
/// `dim` columns per vertex. The row of `{u, v}` holds `p(u) - p(v)` in the
/// block of `u` and `p(v) - p(u)` in the block of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityMatrix {
    pub matrix: IntMatrix,
    pub edges: Vec<(Vertex, Vertex)>,
    pub dim: usize,
}

pub fn rigidity_matrix(f: &Framework) -> RigidityMatrix {
    let d = f.dim;
    let edges = f.graph.edges().to_vec();
    let mut m = IntMatrix::zeros(edges.len(), d * f.graph.order());
    for (row, &(u, v)) in edges.iter().enumerate() {
        for k in 0..d {
            let diff = f.config[u][k] as i128 - f.config[v][k] as i128;
            m.set(row, u * d + k, BigInt::from(diff));
            m.set(row, v * d + k, BigInt::from(-diff));
        }
    }
    RigidityMatrix {
        matrix: m,
        edges,
        dim: d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::exact_rank;

    fn fw(g: Graph, dim: usize, pts: &[&[i64]]) -> Framework {
        Framework::new(g, dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn translation_and_reflection() {
        let g = Graph::complete(3);
        let a = fw(g.clone(), 2, &[&[0, 0], &[3, 1], &[1, 5]]);
        let shifted = fw(g.clone(), 2, &[&[7, -2], &[10, -1], &[8, 3]]);
        let reflected = fw(g, 2, &[&[0, 0], &[-3, 1], &[-1, 5]]);
        assert!(are_equivalent(&a, &shifted).unwrap());
        assert!(are_congruent(&a, &reflected).unwrap());
    }

    #[test]
    fn k2_lengths_differ() {
        let a = fw(Graph::complete(2), 1, &[&[0], &[1]]);
        let b = fw(Graph::complete(2), 1, &[&[0], &[2]]);
        assert!(!are_equivalent(&a, &b).unwrap());
    }

    // Square and rhombus with side length 5: (0,0),(5,0),(5,5),(0,5) versus
    // (0,0),(5,0),(8,4),(3,4). All four sides have squared length 25.
    #[test]
    fn square_versus_rhombus() {
        let c4 = Graph::cycle(4);
        let square = fw(c4.clone(), 2, &[&[0, 0], &[5, 0], &[5, 5], &[0, 5]]);
        let rhombus = fw(c4, 2, &[&[0, 0], &[5, 0], &[8, 4], &[3, 4]]);
        assert!(are_equivalent(&square, &rhombus).unwrap());
        assert!(!are_congruent(&square, &rhombus).unwrap());
        assert_eq!(square.squared_distance(0, 2), 50);
        assert_eq!(rhombus.squared_distance(0, 2), 80);
    }

    #[test]
    fn single_vertex_congruent() {
        let a = fw(Graph::empty(1), 3, &[&[1, 2, 3]]);
        let b = fw(Graph::empty(1), 3, &[&[9, 9, 9]]);
        assert!(are_congruent(&a, &b).unwrap());
    }

    #[test]
    fn mismatches_rejected() {
        let a = fw(Graph::complete(2), 1, &[&[0], &[1]]);
        let b = fw(Graph::empty(2), 1, &[&[0], &[1]]);
        assert_eq!(are_equivalent(&a, &b), Err(RigidityError::Mismatch("graph")));
        assert!(Framework::new(Graph::complete(2), 2, vec![vec![0, 0]]).is_err());
        assert!(Framework::new(Graph::complete(2), 2, vec![vec![0, 0], vec![1]]).is_err());
    }

    #[test]
    fn k2_row() {
        let m = rigidity_matrix(&fw(Graph::complete(2), 1, &[&[0], &[1]]));
        assert_eq!(m.matrix, IntMatrix::from_rows(&[vec![-1i64, 1]]));
    }

    #[test]
    fn small_ranks() {
        let tri = fw(Graph::complete(3), 2, &[&[0, 0], &[7, 2], &[3, 11]]);
        assert_eq!(exact_rank(&rigidity_matrix(&tri).matrix), 3);
        let c4 = fw(Graph::cycle(4), 2, &[&[0, 0], &[7, 2], &[13, 9], &[-2, 17]]);
        assert_eq!(exact_rank(&rigidity_matrix(&c4).matrix), 4);
        let k4 = fw(Graph::complete(4), 2, &[&[0, 0], &[7, 2], &[13, 9], &[-2, 17]]);
        assert_eq!(exact_rank(&rigidity_matrix(&k4).matrix), 5);
    }

    #[test]
    fn rows_sum_to_zero_blockwise() {
        let f = fw(Graph::complete(4), 3, &[&[1, 2, 3], &[4, -5, 6], &[0, 8, -1], &[2, 2, 9]]);
        let m = rigidity_matrix(&f);
        for r in 0..m.matrix.rows() {
            let nonzero = m.matrix.row(r).iter().filter(|x| **x != BigInt::from(0)).count();
            assert!(nonzero <= 2 * f.dim());
            for k in 0..f.dim() {
                let s: BigInt = (0..4).map(|v| m.matrix.get(r, v * 3 + k).clone()).sum();
                assert_eq!(s, BigInt::from(0));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = fw(Graph::cycle(4), 2, &[&[0, 0], &[5, 0], &[5, 5], &[0, 5]]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"graph":{"order":4,"edges":[[0,1],[0,3],[1,2],[2,3]]},"dim":2,"config":[[0,0],[5,0],[5,5],[0,5]]}"#
        );
        assert_eq!(serde_json::from_str::<Framework>(&s).unwrap(), f);
        assert!(serde_json::from_str::<Framework>(r#"{"graph":{"order":1,"edges":[]},"dim":2,"config":[[0]]}"#).is_err());
    }
}
