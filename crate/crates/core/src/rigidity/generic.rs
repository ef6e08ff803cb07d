use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::framework::{rigidity_matrix, Framework};
use crate::graph::{is_connected, is_k_connected, Graph};
use crate::linalg::{checked_rank, integer_kernel_basis, IntMatrix, RankCheck};

pub const DEFAULT_TRIALS: usize = 3;

/// Coordinates and stress coefficients are drawn from `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Local,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Rigid,
    NotRigid,
}

/// How much a verdict can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    /// A sampled configuration reached the generic target rank.
    Certificate,
    /// No trial reached the target rank; wrong with small probability.
    Probabilistic,
    /// Decided without sampling: a combinatorial characterization, the
    /// small-order convention or a counting bound.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Rank of the rigidity matrix at random integer points.
    RigidityRank,
    /// Rank of a random equilibrium stress matrix.
    StressRank,
    /// (2,3) pebble game.
    Pebble,
    /// Connectivity characterizations on the line.
    Connectivity,
    /// Graphs with at most `d + 1` vertices: rigid iff complete.
    SmallOrder,
    /// Fewer edges than the generic rank target.
    EdgeCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityVerdict {
    pub property: Property,
    pub dim: usize,
    pub verdict: Verdict,
    pub certainty: Certainty,
    pub method: Method,
    pub order: usize,
    pub edge_count: usize,
    /// Best rank reached: rigidity-matrix rank for local tests, stress-matrix
    /// rank for global tests.
    pub observed_rank: Option<usize>,
    pub target_rank: Option<usize>,
    /// Best rigidity-matrix rank reached during a global test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stress_space_dim: Option<usize>,
    pub rank_checks: Vec<RankCheck>,
    pub trials: usize,
    pub trials_run: usize,
    pub seed: u64,
    pub trial_seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RigidityVerdict {
    pub fn is_rigid(&self) -> bool {
        self.verdict == Verdict::Rigid
    }

    fn exact(g: &Graph, property: Property, dim: usize, rigid: bool, method: Method) -> Self {
        RigidityVerdict {
            property,
            dim,
            verdict: if rigid { Verdict::Rigid } else { Verdict::NotRigid },
            certainty: Certainty::Exact,
            method,
            order: g.order(),
            edge_count: g.edge_count(),
            observed_rank: None,
            target_rank: None,
            local_rank: None,
            stress_space_dim: None,
            rank_checks: Vec::new(),
            trials: 0,
            trials_run: 0,
            seed: 0,
            trial_seeds: Vec::new(),
            note: None,
        }
    }

    /// Verdict from an exact combinatorial route.
    pub fn combinatorial(g: &Graph, property: Property, dim: usize, rigid: bool, method: Method) -> Self {
        Self::exact(g, property, dim, rigid, method)
    }
}

/// Generic rank of the rigidity matrix of a locally rigid graph on `n`
/// vertices in dimension `d`, for `n >= d + 1`: `dn - d(d+1)/2`.
pub fn generic_rank_target(n: usize, d: usize) -> usize {
    d * n - d * (d + 1) / 2
}

/// Seed for trial `t`, derived from the base seed with a splitmix64 step.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    let mut z = seed.wrapping_add((t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_configuration<R: Rng>(order: usize, dim: usize, rng: &mut R) -> Vec<Vec<i64>> {
    (0..order)
        .map(|_| (0..dim).map(|_| rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)).collect())
        .collect()
}

fn sampled_framework(g: &Graph, dim: usize, rng: &mut ChaCha8Rng) -> Framework {
    let config = sample_configuration(g.order(), dim, rng);
    Framework::new(g.clone(), dim, config).expect("sampled configuration has the right shape")
}

fn small_order_verdict(g: &Graph, property: Property, d: usize) -> RigidityVerdict {
    let mut v = RigidityVerdict::exact(g, property, d, g.is_complete(), Method::SmallOrder);
    v.note = Some(format!(
        "order {} <= d + 1: rigid iff complete",
        g.order()
    ));
    v
}

fn edge_count_verdict(g: &Graph, property: Property, d: usize, target: usize) -> RigidityVerdict {
    let mut v = RigidityVerdict::exact(g, property, d, false, Method::EdgeCount);
    v.target_rank = Some(target);
    v.note = Some(format!(
        "{} edges cannot reach rigidity-matrix rank {target}",
        g.edge_count()
    ));
    v
}

/// Randomized generic local rigidity in dimension `d`.
pub fn is_locally_rigid_generic(g: &Graph, d: usize, trials: usize, seed: u64) -> RigidityVerdict {
    assert!(d >= 1, "dimension must be at least 1");
    let n = g.order();
    if n <= d + 1 {
        return small_order_verdict(g, Property::Local, d);
    }
    let target = generic_rank_target(n, d);
    if g.edge_count() < target {
        return edge_count_verdict(g, Property::Local, d, target);
    }
    let mut out = RigidityVerdict {
        property: Property::Local,
        dim: d,
        verdict: Verdict::NotRigid,
        certainty: Certainty::Probabilistic,
        method: Method::RigidityRank,
        order: n,
        edge_count: g.edge_count(),
        observed_rank: None,
        target_rank: Some(target),
        local_rank: None,
        stress_space_dim: None,
        rank_checks: Vec::new(),
        trials,
        trials_run: 0,
        seed,
        trial_seeds: Vec::new(),
        note: None,
    };
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let f = sampled_framework(g, d, &mut rng);
        let rc = checked_rank(&rigidity_matrix(&f).matrix);
        out.trial_seeds.push(ts);
        out.trials_run += 1;
        out.rank_checks.push(rc);
        out.observed_rank = out.observed_rank.max(Some(rc.exact));
        if rc.exact == target {
            out.verdict = Verdict::Rigid;
            out.certainty = Certainty::Certificate;
            break;
        }
    }
    out
}

/// Integer basis of the equilibrium stresses of `f`: the kernel of the
/// transposed rigidity matrix, indexed by the canonical edge order.
pub fn equilibrium_stress_basis(f: &Framework) -> Vec<Vec<BigInt>> {
    integer_kernel_basis(&rigidity_matrix(f).matrix.transpose())
}

/// Stress matrix of `omega` (one weight per edge in canonical order):
/// `-ω_uv` off the diagonal on edges, zero on non-edges, and the negated
/// off-diagonal row sum on the diagonal.
pub fn stress_matrix(g: &Graph, omega: &[BigInt]) -> IntMatrix {
    assert_eq!(omega.len(), g.edge_count());
    let n = g.order();
    let mut m = IntMatrix::zeros(n, n);
    let mut diag = vec![BigInt::zero(); n];
    for (&(u, v), w) in g.edges().iter().zip(omega) {
        m.set(u, v, -w);
        m.set(v, u, -w);
        diag[u] += w;
        diag[v] += w;
    }
    for (i, x) in diag.into_iter().enumerate() {
        m.set(i, i, x);
    }
    m
}

/// Randomized generic global rigidity in dimension `d` via the stress-matrix
/// rank test: rigid iff some equilibrium stress at a generic configuration
/// has a stress matrix of rank `n - d - 1`.
pub fn is_globally_rigid_generic(g: &Graph, d: usize, trials: usize, seed: u64) -> RigidityVerdict {
    assert!(d >= 1, "dimension must be at least 1");
    let n = g.order();
    if n <= d + 1 {
        return small_order_verdict(g, Property::Global, d);
    }
    let local_target = generic_rank_target(n, d);
    if g.edge_count() < local_target {
        let mut v = edge_count_verdict(g, Property::Global, d, n - d - 1);
        v.note = Some(format!(
            "{} edges cannot reach rigidity-matrix rank {local_target}; not locally rigid",
            g.edge_count()
        ));
        return v;
    }
    let target = n - d - 1;
    let mut out = RigidityVerdict {
        property: Property::Global,
        dim: d,
        verdict: Verdict::NotRigid,
        certainty: Certainty::Probabilistic,
        method: Method::StressRank,
        order: n,
        edge_count: g.edge_count(),
        observed_rank: None,
        target_rank: Some(target),
        local_rank: None,
        stress_space_dim: None,
        rank_checks: Vec::new(),
        trials,
        trials_run: 0,
        seed,
        trial_seeds: Vec::new(),
        note: None,
    };
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let f = sampled_framework(g, d, &mut rng);
        let rmat = rigidity_matrix(&f).matrix;
        let local = checked_rank(&rmat);
        out.trial_seeds.push(ts);
        out.trials_run += 1;
        out.rank_checks.push(local);
        out.local_rank = out.local_rank.max(Some(local.exact));
        if local.exact < local_target {
            continue;
        }
        let basis = integer_kernel_basis(&rmat.transpose());
        out.stress_space_dim = Some(basis.len());
        if basis.is_empty() {
            // Locally rigid with independent edges: the only stress is zero,
            // generically as well, so the stress rank can never be positive.
            out.observed_rank = out.observed_rank.max(Some(0));
            out.certainty = Certainty::Exact;
            out.note = Some(
                "locally rigid with no nonzero equilibrium stress; stress matrix is zero".into(),
            );
            break;
        }
        let mut omega = vec![BigInt::zero(); g.edge_count()];
        for b in &basis {
            let c = BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND));
            for (w, x) in omega.iter_mut().zip(b) {
                *w += &c * x;
            }
        }
        debug_assert!(rmat.transpose().mul_vec(&omega).iter().all(Zero::is_zero));
        let rc = checked_rank(&stress_matrix(g, &omega));
        out.rank_checks.push(rc);
        out.observed_rank = out.observed_rank.max(Some(rc.exact));
        if rc.exact == target {
            out.verdict = Verdict::Rigid;
            out.certainty = Certainty::Certificate;
            break;
        }
    }
    if out.local_rank < Some(local_target) && out.note.is_none() {
        out.note = Some(format!(
            "rigidity-matrix rank {} below {local_target} in every trial; not locally rigid",
            out.local_rank.unwrap_or(0)
        ));
    }
    out
}

/// Local rigidity on the line: connectivity.
pub fn is_locally_1_rigid(g: &Graph) -> bool {
    is_connected(g)
}

/// Global rigidity on the line: 2-connectivity, with graphs on at most two
/// vertices rigid iff complete.
pub fn is_globally_1_rigid(g: &Graph) -> bool {
    if g.order() <= 2 {
        g.is_complete()
    } else {
        is_k_connected(g, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_cyclic_complex, graph_of};
    use crate::graph::disjoint_union;
    use crate::rigidity::framework::Framework;

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_ne!(trial_seed(7, 0), trial_seed(7, 1));
        assert_ne!(trial_seed(7, 0), trial_seed(8, 0));
        assert_eq!(trial_seed(7, 2), trial_seed(7, 2));
    }

    #[test]
    fn disconnected_is_never_rigid() {
        let g = disjoint_union(&Graph::complete(4), &Graph::complete(4));
        for d in 1..=3 {
            assert!(!is_locally_rigid_generic(&g, d, 3, 1).is_rigid());
            assert!(!is_globally_rigid_generic(&g, d, 3, 1).is_rigid());
        }
    }

    #[test]
    fn four_cycle_flexible_in_plane() {
        let v = is_locally_rigid_generic(&Graph::cycle(4), 2, 3, 5);
        assert_eq!(v.verdict, Verdict::NotRigid);
        assert_eq!(v.method, Method::EdgeCount);
    }

    #[test]
    fn k4_plane_certificate() {
        let v = is_locally_rigid_generic(&Graph::complete(4), 2, 3, 11);
        assert!(v.is_rigid());
        assert_eq!(v.certainty, Certainty::Certificate);
        assert_eq!(v.observed_rank, Some(5));
        assert!(v.rank_checks.iter().all(RankCheck::agrees));
    }

    #[test]
    fn cyclic_12_3_not_locally_rigid() {
        let g = graph_of(&build_cyclic_complex(12, 3).unwrap());
        let v = is_locally_rigid_generic(&g, 3, 3, 2);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(v.target_rank, Some(30));
        assert!(!v.is_rigid());
    }

    #[test]
    fn complete_graphs_globally_rigid() {
        for d in 1..=3 {
            let v = is_globally_rigid_generic(&Graph::complete(d + 2), d, 3, 3);
            assert!(v.is_rigid(), "d={d}: {v:?}");
            assert_eq!(v.certainty, Certainty::Certificate);
            assert_eq!(v.observed_rank, Some(1));
        }
    }

    #[test]
    fn six_cycle_on_line() {
        let v = is_globally_rigid_generic(&Graph::cycle(6), 1, 3, 9);
        assert!(v.is_rigid());
        assert_eq!(v.observed_rank, Some(4));
        assert!(is_globally_1_rigid(&Graph::cycle(6)));
        assert!(is_locally_1_rigid(&Graph::cycle(6)));
    }

    #[test]
    fn path_is_locally_but_not_globally_1_rigid() {
        let p = Graph::path(3);
        assert!(is_locally_1_rigid(&p));
        assert!(!is_globally_1_rigid(&p));
        assert!(is_locally_rigid_generic(&p, 1, 3, 1).is_rigid());
        assert!(!is_globally_rigid_generic(&p, 1, 3, 1).is_rigid());
        let two = disjoint_union(&Graph::complete(3), &Graph::complete(3));
        assert!(!is_locally_1_rigid(&two) && !is_globally_1_rigid(&two));
    }

    #[test]
    fn small_order_convention() {
        assert!(is_globally_rigid_generic(&Graph::complete(3), 2, 3, 0).is_rigid());
        assert!(!is_locally_rigid_generic(&Graph::path(3), 2, 3, 0).is_rigid());
        assert!(is_globally_1_rigid(&Graph::complete(2)));
        assert!(is_globally_1_rigid(&Graph::complete(1)));
    }

    // The 4-window cyclic graph on 10 vertices has exactly 4·10 - 10 = 30
    // edges: at best isostatic, hence no stress and no global rigidity.
    #[test]
    fn cyclic_10_4_has_no_stress() {
        let g = graph_of(&build_cyclic_complex(10, 4).unwrap());
        assert_eq!(g.edge_count(), 30);
        let local = is_locally_rigid_generic(&g, 4, 3, 7);
        assert!(local.is_rigid());
        let global = is_globally_rigid_generic(&g, 4, 3, 7);
        assert!(!global.is_rigid());
        assert_eq!(global.stress_space_dim, Some(0));
        assert_eq!(global.observed_rank, Some(0));
        assert_eq!(global.certainty, Certainty::Exact);
    }

    #[test]
    fn stress_sanity() {
        let g = Graph::complete(5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Framework::new(g.clone(), 2, sample_configuration(5, 2, &mut rng)).unwrap();
        let basis = equilibrium_stress_basis(&f);
        assert_eq!(basis.len(), 10 - 7);
        let rt = rigidity_matrix(&f).matrix.transpose();
        for w in &basis {
            assert!(rt.mul_vec(w).iter().all(Zero::is_zero));
            let omega = stress_matrix(&g, w);
            for i in 0..5 {
                let s: BigInt = omega.row(i).iter().sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn verdicts_reproducible() {
        let g = Graph::complete(6);
        assert_eq!(
            is_globally_rigid_generic(&g, 3, 3, 42),
            is_globally_rigid_generic(&g, 3, 3, 42)
        );
    }
}
