//! Finite simple undirected graphs on dense vertex ranges `0..order`.
//!
//! Everything else in the crate is built on [`Graph`]: complexes produce
//! graphs, frameworks carry them, structures are translated into them and the
//! locality checks compare their balls.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: Vertex, order: usize },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("map is not a bijection: {0}")]
    NotBijection(String),
}

/// A finite simple graph. Edges are stored as `(u, v)` with `u < v`, sorted
/// lexicographically, so two equal graphs always serialize identically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    order: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    order: usize,
    edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(repr: GraphRepr) -> Result<Self, Self::Error> {
        Graph::new(repr.order, repr.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            order: g.order,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(order={}, edges={:?})", self.order, self.edges)
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates (in either orientation)
    /// and out-of-range endpoints.
    pub fn new(
        order: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= order {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_canonical(order, set))
    }

    /// Like [`Graph::new`] but silently merges duplicate edges. Loops and
    /// out-of-range endpoints are still errors.
    pub fn from_edge_set(
        order: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= order {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_canonical(order, set))
    }

    fn from_canonical(order: usize, set: BTreeSet<(Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); order];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            order,
            edges: set.into_iter().collect(),
            adj,
        }
    }

    pub fn empty(order: usize) -> Self {
        Self::from_canonical(order, BTreeSet::new())
    }

    pub fn complete(order: usize) -> Self {
        let set = (0..order)
            .flat_map(|u| (u + 1..order).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(order, set)
    }

    /// The cycle on `order` vertices; `order` must be at least 3.
    pub fn cycle(order: usize) -> Self {
        assert!(order >= 3, "a cycle needs at least 3 vertices");
        let set = (0..order)
            .map(|i| {
                let j = (i + 1) % order;
                (i.min(j), i.max(j))
            })
            .collect();
        Self::from_canonical(order, set)
    }

    pub fn path(order: usize) -> Self {
        let set = (1..order).map(|i| (i - 1, i)).collect();
        Self::from_canonical(order, set)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.order && v < self.order && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.order * self.order.saturating_sub(1) / 2
    }

    /// Degree sequence sorted in decreasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = (0..self.order).map(|v| self.degree(v)).collect();
        seq.sort_unstable_by(|a, b| b.cmp(a));
        seq
    }

    /// Returns a copy of the graph with the edge `{u, v}` added.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Self, GraphError> {
        Graph::from_edge_set(self.order, self.edges.iter().copied().chain([(u, v)]))
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<Self, GraphError> {
        let mut index = vec![usize::MAX; self.order];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.order {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    order: self.order,
                });
            }
            index[v] = i;
        }
        let set = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
            .collect();
        Ok(Self::from_canonical(vertices.len(), set))
    }

    /// Relabels the graph through `map`: vertex `v` becomes `map.apply(v)`.
    pub fn relabel(&self, map: &VertexBijection) -> Self {
        assert_eq!(map.domain_order(), self.order);
        let set = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (map.apply(u), map.apply(v));
                (a.min(b), a.max(b))
            })
            .collect();
        Self::from_canonical(self.order, set)
    }

    /// Breadth-first distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }
}

/// A bijection between two vertex ranges, stored as its forward table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexBijection {
    forward: Vec<Vertex>,
    codomain_order: usize,
}

impl VertexBijection {
    pub fn new(forward: Vec<Vertex>, codomain_order: usize) -> Result<Self, GraphError> {
        if forward.len() != codomain_order {
            return Err(GraphError::NotBijection(format!(
                "domain has {} vertices, codomain {}",
                forward.len(),
                codomain_order
            )));
        }
        let mut seen = vec![false; codomain_order];
        for (v, &w) in forward.iter().enumerate() {
            if w >= codomain_order {
                return Err(GraphError::NotBijection(format!(
                    "{v} maps to {w}, outside the codomain"
                )));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(GraphError::NotBijection(format!("{w} is hit twice")));
            }
        }
        Ok(Self {
            forward,
            codomain_order,
        })
    }

    pub fn identity(order: usize) -> Self {
        Self {
            forward: (0..order).collect(),
            codomain_order: order,
        }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.forward[v]
    }

    pub fn domain_order(&self) -> usize {
        self.forward.len()
    }

    pub fn codomain_order(&self) -> usize {
        self.codomain_order
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.forward
    }

    pub fn inverse(&self) -> Self {
        let mut back = vec![0; self.codomain_order];
        for (v, &w) in self.forward.iter().enumerate() {
            back[w] = v;
        }
        Self {
            forward: back,
            codomain_order: self.forward.len(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &VertexBijection) -> Self {
        assert_eq!(self.codomain_order, other.domain_order());
        Self {
            forward: self.forward.iter().map(|&w| other.apply(w)).collect(),
            codomain_order: other.codomain_order,
        }
    }

    /// Whether this bijection maps `g1`'s edges exactly onto `g2`'s edges.
    pub fn is_isomorphism(&self, g1: &Graph, g2: &Graph) -> bool {
        g1.order() == self.domain_order()
            && g2.order() == self.codomain_order
            && g1.edge_count() == g2.edge_count()
            && g1
                .edges()
                .iter()
                .all(|&(u, v)| g2.has_edge(self.apply(u), self.apply(v)))
    }
}

/// Disjoint union; the vertices of `g2` are shifted by `g1.order()`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let shift = g1.order();
    let set = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(u, v)| (u + shift, v + shift)))
        .collect();
    Graph::from_canonical(g1.order() + g2.order(), set)
}

/// An r-ball: the induced subgraph on all vertices within distance `radius`
/// of `center`. `vertices[i]` is the original label of ball vertex `i`;
/// vertices are kept in ascending original order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub graph: Graph,
    pub vertices: Vec<Vertex>,
    pub center: Vertex,
    pub radius: usize,
}

impl Ball {
    /// Index of the center inside `graph`.
    pub fn center_index(&self) -> usize {
        self.vertices.binary_search(&self.center).unwrap()
    }
}

pub fn r_ball(g: &Graph, center: Vertex, radius: usize) -> Result<Ball, GraphError> {
    if center >= g.order() {
        return Err(GraphError::VertexOutOfRange {
            vertex: center,
            order: g.order(),
        });
    }
    let vertices: Vec<Vertex> = g
        .distances_from(center)
        .into_iter()
        .enumerate()
        .filter_map(|(v, d)| d.filter(|&d| d <= radius).map(|_| v))
        .collect();
    let graph = g.induced_subgraph(&vertices)?;
    Ok(Ball {
        graph,
        vertices,
        center,
        radius,
    })
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for start in 0..g.order() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// At most one component. The empty graph and `K1` count as connected.
pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}

/// Unit-capacity flow network for counting internally vertex-disjoint paths.
/// Vertex `v` is split into `2v` (in) and `2v + 1` (out).
struct SplitNetwork {
    head: Vec<usize>,
    cap: Vec<i32>,
    out: Vec<Vec<usize>>,
}

impl SplitNetwork {
    fn new(g: &Graph, s: Vertex, t: Vertex) -> Self {
        let mut net = SplitNetwork {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); 2 * g.order()],
        };
        let big = g.order() as i32;
        for v in 0..g.order() {
            let c = if v == s || v == t { big } else { 1 };
            net.add_arc(2 * v, 2 * v + 1, c);
        }
        for &(u, v) in g.edges() {
            net.add_arc(2 * u + 1, 2 * v, big);
            net.add_arc(2 * v + 1, 2 * u, big);
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        self.out[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.out[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// One BFS augmenting path of unit value; returns false when none exists.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut visited = vec![false; self.out.len()];
        visited[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &a in &self.out[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !visited[y] {
                    visited[y] = true;
                    via[y] = a;
                    queue.push_back(y);
                }
            }
        }
        if !visited[sink] {
            return false;
        }
        let mut y = sink;
        while y != source {
            let a = via[y];
            self.cap[a] -= 1;
            self.cap[a ^ 1] += 1;
            y = self.head[a ^ 1];
        }
        true
    }
}

/// Number of internally vertex-disjoint `s`–`t` paths for non-adjacent
/// `s != t`, capped at `limit`.
pub fn local_vertex_connectivity(g: &Graph, s: Vertex, t: Vertex, limit: usize) -> usize {
    debug_assert!(s != t && !g.has_edge(s, t));
    let mut net = SplitNetwork::new(g, s, t);
    let mut flow = 0;
    while flow < limit && net.augment(2 * s + 1, 2 * t) {
        flow += 1;
    }
    flow
}

/// Whether `g` is `k`-connected: more than `k` vertices and no separating
/// set of fewer than `k` vertices. `K_n` is `(n-1)`-connected but not
/// `n`-connected. Decided with Menger's theorem over all non-adjacent pairs.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if g.order() <= k {
        return false;
    }
    if k == 0 {
        return true;
    }
    if (0..g.order()).any(|v| g.degree(v) < k) {
        return false;
    }
    for s in 0..g.order() {
        for t in s + 1..g.order() {
            if !g.has_edge(s, t) && local_vertex_connectivity(g, s, t, k) < k {
                return false;
            }
        }
    }
    true
}

/// Vertex connectivity κ(g); `n - 1` for complete graphs.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let mut k = 0;
    while is_k_connected(g, k + 1) {
        k += 1;
    }
    k
}

/// Per-vertex invariant used to prune isomorphism candidates: degree and
/// the sorted multiset of neighbor degrees.
fn vertex_invariants(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.order())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

/// Exact isomorphism test by backtracking. Returns a witness mapping `g1`
/// onto `g2` when one exists.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Option<VertexBijection> {
    let n = g1.order();
    if n != g2.order()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return None;
    }
    let inv1 = vertex_invariants(g1);
    let inv2 = vertex_invariants(g2);
    let mut sorted1 = inv1.clone();
    let mut sorted2 = inv2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }

    // Visit g1 in BFS order so that every vertex after the first of its
    // component already has a mapped neighbor to anchor the candidates.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for comp in connected_components(g1) {
        let start = *comp
            .iter()
            .max_by_key(|&&v| (g1.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g1.neighbors(u) {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut search = IsoSearch {
        g1,
        g2,
        inv1: &inv1,
        inv2: &inv2,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        Some(VertexBijection::new(search.map, n).expect("search yields a bijection"))
    } else {
        None
    }
}

struct IsoSearch<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    inv1: &'a [(usize, Vec<usize>)],
    inv2: &'a [(usize, Vec<usize>)],
    order: &'a [Vertex],
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        let anchor = self
            .g1
            .neighbors(x)
            .iter()
            .find(|&&w| self.map[w] != usize::MAX)
            .map(|&w| self.map[w]);
        let candidates: Vec<Vertex> = match anchor {
            Some(a) => self.g2.neighbors(a).to_vec(),
            None => (0..self.g2.order()).collect(),
        };
        for y in candidates {
            if self.used[y] || self.inv1[x] != self.inv2[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[x] = usize::MAX;
            self.used[y] = false;
        }
        false
    }

    fn consistent(&self, x: Vertex, y: Vertex) -> bool {
        let mut mapped_nbrs = 0;
        for &w in self.g1.neighbors(x) {
            let fw = self.map[w];
            if fw != usize::MAX {
                if !self.g2.has_edge(y, fw) {
                    return false;
                }
                mapped_nbrs += 1;
            }
        }
        // y must not have extra edges into the image of the mapped part.
        let image_nbrs = self
            .g2
            .neighbors(y)
            .iter()
            .filter(|&&z| self.used[z])
            .count();
        image_nbrs == mapped_nbrs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        disjoint_union(&Graph::complete(3), &Graph::complete(3))
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn json_is_canonical() {
        let g = Graph::new(4, [(3, 2), (1, 0), (0, 2)]).unwrap();
        assert_eq!(g.to_json(), r#"{"order":4,"edges":[[0,1],[0,2],[2,3]]}"#);
        let back: Graph = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"order":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn union_of_triangles() {
        let g = two_triangles();
        assert_eq!(g.order(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(connected_components(&g), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn union_with_empty_is_identity() {
        let g = Graph::cycle(5);
        let u = disjoint_union(&Graph::empty(0), &g);
        assert_eq!(u, g);
        assert!(are_isomorphic(&u, &g).is_some());
    }

    #[test]
    fn cycle_balls() {
        let c6 = Graph::cycle(6);
        let b = r_ball(&c6, 0, 1).unwrap();
        assert_eq!(b.vertices, vec![0, 1, 5]);
        assert_eq!(b.graph.edge_count(), 2);
        assert!(are_isomorphic(&b.graph, &Graph::path(3)).is_some());

        let b0 = r_ball(&c6, 4, 0).unwrap();
        assert_eq!(b0.vertices, vec![4]);
        assert_eq!(b0.graph.edge_count(), 0);
        assert!(r_ball(&c6, 6, 1).is_err());
    }

    #[test]
    fn ball_excludes_unreachable() {
        let g = two_triangles();
        let b = r_ball(&g, 0, 10).unwrap();
        assert_eq!(b.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn connectivity_small_cases() {
        let c6 = Graph::cycle(6);
        assert!(is_k_connected(&c6, 2));
        assert!(!is_k_connected(&c6, 3));
        let k5 = Graph::complete(5);
        assert!(is_k_connected(&k5, 4));
        assert!(!is_k_connected(&k5, 5));
        assert_eq!(vertex_connectivity(&k5), 4);
        assert!(!is_k_connected(&two_triangles(), 1));
        assert!(is_k_connected(&Graph::path(4), 1));
        assert!(!is_k_connected(&Graph::path(4), 2));
    }

    #[test]
    fn isomorphism_small_cases() {
        let p = Graph::path(3);
        let q = Graph::new(3, [(0, 2), (2, 1)]).unwrap();
        let w = are_isomorphic(&p, &q).unwrap();
        assert!(w.is_isomorphism(&p, &q));
        assert!(are_isomorphic(&Graph::cycle(6), &two_triangles()).is_none());
        assert!(are_isomorphic(&Graph::empty(0), &Graph::empty(0)).is_some());
    }

    #[test]
    fn bijection_validation() {
        assert!(VertexBijection::new(vec![0, 0], 2).is_err());
        assert!(VertexBijection::new(vec![0, 2], 2).is_err());
        assert!(VertexBijection::new(vec![0], 2).is_err());
        let f = VertexBijection::new(vec![2, 0, 1], 3).unwrap();
        assert_eq!(f.then(&f.inverse()), VertexBijection::identity(3));
    }
}
