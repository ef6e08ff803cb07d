//! The (2,3) pebble game.
//!
//! Every vertex starts with two pebbles. An edge is accepted when four
//! pebbles can be gathered on its endpoints; it is then covered by one of
//! them and oriented away from the vertex that paid. The accepted edges form
//! a maximal (2,3)-sparse subgraph, so their number is the generic rank of
//! the planar rigidity matroid.

use super::RigidityError;
use crate::graph::{Graph, Vertex};

struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<Vertex>>,
}

impl PebbleGame {
    fn new(order: usize) -> Self {
        Self {
            pebbles: vec![2; order],
            out: vec![Vec::new(); order],
        }
    }

    /// Moves one free pebble onto `start` along a directed path that avoids
    /// `keep`, reversing the path. Returns false if no pebble is reachable.
    fn draw_pebble(&mut self, start: Vertex, keep: Vertex) -> bool {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        seen[start] = true;
        seen[keep] = true;
        let mut stack = vec![start];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(end) = found else {
            return false;
        };
        self.pebbles[end] -= 1;
        self.pebbles[start] += 1;
        let mut y = end;
        while y != start {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&z| z == y).unwrap();
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        true
    }

    fn try_insert(&mut self, u: Vertex, v: Vertex) -> bool {
        while self.pebbles[u] + self.pebbles[v] < 4 {
            if self.pebbles[u] < 2 && self.draw_pebble(u, v) {
                continue;
            }
            if self.pebbles[v] < 2 && self.draw_pebble(v, u) {
                continue;
            }
            return false;
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        true
    }
}

/// Size of a maximal (2,3)-sparse edge set of `g`.
pub fn pebble_rank_2_3(g: &Graph) -> usize {
    let mut game = PebbleGame::new(g.order());
    g.edges()
        .iter()
        .filter(|&&(u, v)| game.try_insert(u, v))
        .count()
}

/// Laman-type test for local rigidity in the plane: a spanning
/// (2,3)-tight subgraph exists iff the pebble rank is `2n - 3`.
pub fn geiringer_locally_2_rigid(g: &Graph) -> Result<bool, RigidityError> {
    if g.order() < 2 {
        return Err(RigidityError::OrderTooSmall(g.order()));
    }
    Ok(pebble_rank_2_3(g) == 2 * g.order() - 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;

    fn k33() -> Graph {
        Graph::new(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap()
    }

    // Largest (2,3)-sparse edge subset by exhaustive search.
    fn brute_rank(g: &Graph) -> usize {
        let m = g.edge_count();
        let edges = g.edges();
        let n = g.order();
        (0u32..1 << m)
            .filter(|mask| {
                (1u32..1 << n).all(|vs| {
                    let k = vs.count_ones() as usize;
                    let inside = (0..m)
                        .filter(|&i| mask >> i & 1 == 1)
                        .filter(|&i| vs >> edges[i].0 & 1 == 1 && vs >> edges[i].1 & 1 == 1)
                        .count();
                    k < 2 || inside + 3 <= 2 * k
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn classic_examples() {
        assert!(geiringer_locally_2_rigid(&Graph::complete(4)).unwrap());
        assert!(!geiringer_locally_2_rigid(&Graph::cycle(4)).unwrap());
        assert!(geiringer_locally_2_rigid(&k33()).unwrap());
        assert!(geiringer_locally_2_rigid(&Graph::complete(2)).unwrap());
        assert!(!geiringer_locally_2_rigid(&Graph::empty(2)).unwrap());
        assert_eq!(
            geiringer_locally_2_rigid(&Graph::empty(1)),
            Err(RigidityError::OrderTooSmall(1))
        );
    }

    #[test]
    fn k33_brute_force() {
        assert_eq!(brute_rank(&k33()), 9);
        assert_eq!(pebble_rank_2_3(&k33()), 9);
    }

    #[test]
    fn ranks_match_brute_force() {
        let graphs = [
            Graph::complete(5),
            Graph::cycle(5),
            disjoint_union(&Graph::complete(4), &Graph::complete(3)),
            Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 4)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(pebble_rank_2_3(g), brute_rank(g), "{g:?}");
        }
    }
}
