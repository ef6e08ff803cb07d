//! Ball censuses, the Hanf relation `⇄_r`, the LOC_d / GLO_d queries and
//! the verifiers for the cyclic-window counterexample.
//!
//! `g1 ⇄_r g2` holds when some bijection between the vertex sets maps every
//! vertex to one whose r-ball is isomorphic to its own. Boolean queries
//! definable in first-order logic are Hanf-local, so a query that takes
//! different values on a `⇄_r` pair (for every `r`) is not first-order
//! definable.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    build_cyclic_complex, build_path_complex, graph_of, is_k_circuit, ComplexError,
};
use crate::fo::{gaifman_graph, models_graph_theory, structure_from_graph, GraphTheoryCheck, SigmaStructure};
use crate::graph::{
    are_isomorphic, disjoint_union, is_k_connected, r_ball, vertex_connectivity, Graph, Vertex,
    VertexBijection,
};
use crate::report::{graph_hash, Claim, ClaimStatus, VerificationReport};
use crate::rigidity::{
    cjt_globally_rigid_predicate, geiringer_locally_2_rigid, is_globally_1_rigid,
    is_globally_rigid_generic, is_locally_1_rigid, is_locally_rigid_generic, Method, Property,
    RigidityVerdict, DEFAULT_TRIALS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalityError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// One isomorphism class of r-balls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallClass {
    pub representative: Graph,
    pub multiplicity: usize,
    pub sample_center: Vertex,
    pub members: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallCensus {
    pub radius: usize,
    pub order: usize,
    pub classes: Vec<BallClass>,
}

impl BallCensus {
    /// Index of the class containing `v`.
    pub fn class_of(&self, v: Vertex) -> Option<usize> {
        self.classes.iter().position(|c| c.members.binary_search(&v).is_ok())
    }
}

/// Groups the r-balls of `g` by isomorphism type. Classes are ordered by
/// (order, edge count, degree sequence, first appearance).
pub fn ball_census(g: &Graph, r: usize) -> BallCensus {
    let mut classes: Vec<BallClass> = Vec::new();
    for v in 0..g.order() {
        let ball = r_ball(g, v, r).expect("vertex in range").graph;
        match classes
            .iter_mut()
            .find(|c| are_isomorphic(&c.representative, &ball).is_some())
        {
            Some(c) => {
                c.multiplicity += 1;
                c.members.push(v);
            }
            None => classes.push(BallClass {
                representative: ball,
                multiplicity: 1,
                sample_center: v,
                members: vec![v],
            }),
        }
    }
    classes.sort_by_cached_key(|c| {
        let rep = &c.representative;
        (rep.order(), rep.edge_count(), rep.degree_sequence(), c.sample_center)
    });
    BallCensus {
        radius: r,
        order: g.order(),
        classes,
    }
}

/// Whether two censuses contain the same isomorphism classes with the same
/// multiplicities. Returns the class matching `a -> b` when they do.
pub fn match_censuses(a: &BallCensus, b: &BallCensus) -> Option<Vec<usize>> {
    if a.order != b.order || a.classes.len() != b.classes.len() {
        return None;
    }
    let mut used = vec![false; b.classes.len()];
    let mut matching = Vec::with_capacity(a.classes.len());
    for ca in &a.classes {
        let j = b.classes.iter().enumerate().position(|(j, cb)| {
            !used[j]
                && cb.multiplicity == ca.multiplicity
                && are_isomorphic(&ca.representative, &cb.representative).is_some()
        })?;
        used[j] = true;
        matching.push(j);
    }
    Some(matching)
}

/// A witness of `g1 ⇄_r g2`, if one exists. The bijection pairs the members
/// of matched census classes in order, and is rechecked ball by ball before
/// being returned.
pub fn hanf_equivalent(g1: &Graph, g2: &Graph, r: usize) -> Option<VertexBijection> {
    if g1.order() != g2.order() {
        return None;
    }
    let c1 = ball_census(g1, r);
    let c2 = ball_census(g2, r);
    let matching = match_censuses(&c1, &c2)?;
    let mut forward = vec![0; g1.order()];
    for (ca, &j) in c1.classes.iter().zip(&matching) {
        for (&v, &w) in ca.members.iter().zip(&c2.classes[j].members) {
            forward[v] = w;
        }
    }
    let f = VertexBijection::new(forward, g2.order()).expect("classes partition both vertex sets");
    witness_is_valid(g1, g2, r, &f).then_some(f)
}

/// Per-vertex check of a `⇄_r` witness.
pub fn witness_is_valid(g1: &Graph, g2: &Graph, r: usize, f: &VertexBijection) -> bool {
    f.domain_order() == g1.order()
        && f.codomain_order() == g2.order()
        && (0..g1.order()).all(|v| {
            let b1 = r_ball(g1, v, r).unwrap().graph;
            let b2 = r_ball(g2, f.apply(v), r).unwrap().graph;
            are_isomorphic(&b1, &b2).is_some()
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

/// Value of LOC_d or GLO_d with the route that decided it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryOutcome {
    pub query: String,
    pub d: usize,
    pub holds: bool,
    pub graph_theory: Option<GraphTheoryCheck>,
    pub method: String,
    pub verdict: Option<RigidityVerdict>,
}

fn method_name(m: Method) -> String {
    serde_json::to_value(m).unwrap().as_str().unwrap().to_string()
}

fn query(s: &SigmaStructure, d: usize, property: Property, opts: QueryOptions) -> QueryOutcome {
    let name = match property {
        Property::Local => "LOC",
        Property::Global => "GLO",
    };
    let refused = |check: Option<GraphTheoryCheck>, why: &str| QueryOutcome {
        query: name.into(),
        d,
        holds: false,
        graph_theory: check,
        method: why.into(),
        verdict: None,
    };
    let check = match models_graph_theory(s) {
        Ok(c) => c,
        Err(_) => return refused(None, "not-a-graph-signature"),
    };
    if !check.axiom_holds {
        return refused(Some(check), "not-a-model-of-graph-theory");
    }
    let g = match gaifman_graph(s) {
        Ok(g) => g,
        Err(_) => return refused(Some(check), "not-a-graph-signature"),
    };
    let verdict = rigidity_dispatch(&g, d, property, opts);
    QueryOutcome {
        query: name.into(),
        d,
        holds: verdict.is_rigid(),
        graph_theory: Some(check),
        method: method_name(verdict.method),
        verdict: Some(verdict),
    }
}

/// Default decision route per dimension: connectivity on the line, the
/// pebble game for planar local rigidity, randomized rank tests otherwise.
pub fn rigidity_dispatch(g: &Graph, d: usize, property: Property, opts: QueryOptions) -> RigidityVerdict {
    match (d, property) {
        (1, Property::Local) => RigidityVerdict::combinatorial(
            g,
            property,
            1,
            is_locally_1_rigid(g),
            Method::Connectivity,
        ),
        (1, Property::Global) => RigidityVerdict::combinatorial(
            g,
            property,
            1,
            is_globally_1_rigid(g),
            Method::Connectivity,
        ),
        (2, Property::Local) if g.order() >= 2 => RigidityVerdict::combinatorial(
            g,
            property,
            2,
            geiringer_locally_2_rigid(g).expect("order checked"),
            Method::Pebble,
        ),
        (_, Property::Local) => is_locally_rigid_generic(g, d, opts.trials, opts.seed),
        (_, Property::Global) => is_globally_rigid_generic(g, d, opts.trials, opts.seed),
    }
}

/// LOC_d: models the theory of graphs and is locally d-rigid.
pub fn loc_query(s: &SigmaStructure, d: usize, opts: QueryOptions) -> QueryOutcome {
    query(s, d, Property::Local, opts)
}

/// GLO_d: models the theory of graphs and is globally d-rigid.
pub fn glo_query(s: &SigmaStructure, d: usize, opts: QueryOptions) -> QueryOutcome {
    query(s, d, Property::Global, opts)
}

/// The pair `G(C_{2m}^w)` and two disjoint copies of `G(C_m^w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub window: usize,
    pub half_order: usize,
    pub g1: Graph,
    pub g2: Graph,
}

fn cyclic_pair(window: usize, half_order: usize) -> Result<Counterexample, LocalityError> {
    let g1 = graph_of(&build_cyclic_complex(2 * half_order, window)?);
    let half = graph_of(&build_cyclic_complex(half_order, window)?);
    Ok(Counterexample {
        window,
        half_order,
        g1,
        g2: disjoint_union(&half, &half),
    })
}

/// `G1 = G(C_{4rd+4}^d)`, `G2` = two copies of `G(C_{2rd+2}^d)`.
pub fn build_counterexample(d: usize, r: usize) -> Result<Counterexample, LocalityError> {
    if d < 2 {
        return Err(LocalityError::Hypothesis(format!(
            "d = {d}: the window complex of width 1 has no edges"
        )));
    }
    cyclic_pair(d, 2 * r * d + 2)
}

/// Graph of the path window complex on `m` vertices with window `d`. When
/// `m < d` the single truncated window is used, giving `K_m`.
fn path_window_graph(m: usize, d: usize) -> Graph {
    if m < d {
        Graph::complete(m)
    } else {
        graph_of(&build_path_complex(m, d).expect("m >= d"))
    }
}

/// Checks the r-balls of `G(C_n^d)` against two path-window candidates:
/// the stated `G(P_{2rd+1}^d)` and `G(P_{2r(d-1)+1}^d)`, which is what `r`
/// steps of length at most `d - 1` reach. The stepped comparison and the
/// single-class (transitivity) claim are asserted; the stated one is recorded.
pub fn verify_neighborhood_lemma(d: usize, r: usize, n: usize) -> Result<VerificationReport, LocalityError> {
    if d == 0 || n < 2 * r * d + 2 || d >= n {
        return Err(LocalityError::Hypothesis(format!(
            "need d >= 1, d < n and n >= 2rd + 2 (d = {d}, r = {r}, n = {n})"
        )));
    }
    let g = graph_of(&build_cyclic_complex(n, d)?);
    let census = ball_census(&g, r);
    let stated = 2 * r * d + 1;
    let stepped = 2 * r * (d - 1) + 1;
    let mut report = VerificationReport::new("neighborhoods")
        .param("d", d)
        .param("r", r)
        .param("n", n)
        .param("stated_path_order", stated)
        .param("stepped_path_order", stepped);
    report.push(Claim::check("single_ball_class", 1, census.classes.len()));
    let ball = &census.classes[0].representative;
    report.push(Claim::recorded(
        "ball_order",
        stated,
        serde_json::json!({"order": ball.order(), "edges": ball.edge_count()}),
    ));
    for (name, m) in [("ball_iso_stated_path", stated), ("ball_iso_stepped_path", stepped)] {
        let iso = census
            .classes
            .iter()
            .all(|c| are_isomorphic(&c.representative, &path_window_graph(m, d)).is_some());
        report.push(if m == stepped {
            Claim::check(name, true, iso)
        } else {
            Claim::recorded(name, true, iso)
        });
        if m < d {
            report.notes.push(format!("{name}: {m} < d, compared against K_{m}"));
        }
    }
    Ok(report)
}

/// Circuit check of `C_n^d` as a `(d-1)`-complex: every `(d-2)`-face in
/// exactly two facets.
pub fn verify_circuit(d: usize, n: usize) -> Result<VerificationReport, LocalityError> {
    if d < 2 {
        return Err(LocalityError::Hypothesis("need d >= 2".into()));
    }
    let c = build_cyclic_complex(n, d)?;
    let rep = is_k_circuit(&c, d - 1);
    let mut report = VerificationReport::new("circuit").param("d", d).param("n", n);
    report.push(Claim::check("pure", true, rep.pure));
    report.push(Claim::check("every_ridge_in_exactly_two_facets", true, rep.exactly_two()));
    report.push(Claim::recorded("incidence_histogram", serde_json::json!({"2": rep.incidence_histogram.values().sum::<usize>()}), &rep.incidence_histogram));
    if let Some((face, count)) = rep.violations.first() {
        report.notes.push(format!(
            "{} of the {}-faces lie in an odd number of facets, e.g. {face:?} in {count}",
            rep.violations.len(),
            d - 2
        ));
    }
    Ok(report)
}

/// `(d+1)`-connectivity of `G(C_n^d)`.
pub fn verify_connectivity(d: usize, n: usize) -> Result<VerificationReport, LocalityError> {
    if d < 2 {
        return Err(LocalityError::Hypothesis("need d >= 2".into()));
    }
    let g = graph_of(&build_cyclic_complex(n, d)?);
    let mut report = VerificationReport::new("connectivity").param("d", d).param("n", n);
    report.push(Claim::check("d_plus_1_connected", true, is_k_connected(&g, d + 1)));
    report.push(Claim::recorded("vertex_connectivity", d + 1, vertex_connectivity(&g)));
    if d == 2 {
        report.flags.push(
            "d = 2 is outside the theorem-backed range: the graph is a cycle, 2-connected but not 3-connected"
                .into(),
        );
        report.push(Claim::recorded("two_connected", true, is_k_connected(&g, 2)));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub family: String,
    pub n: usize,
    pub window: usize,
    pub copies: usize,
    pub order: usize,
    pub edge_count: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HanfResult {
    pub radius: usize,
    pub claimed: bool,
    pub computed: bool,
    pub verdict: ClaimStatus,
    pub census_classes: [usize; 2],
    pub witness: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryPair {
    pub g1: QueryOutcome,
    pub g2: QueryOutcome,
}

/// Outcome of the predicate route for graphs of k-circuits, with `k = d - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitRoute {
    pub k: usize,
    pub hypotheses_met: bool,
    pub prediction: Option<bool>,
    pub error: Option<String>,
    pub stress_route: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonDefinabilityReport {
    pub d: usize,
    pub r: usize,
    pub seed: u64,
    pub trials: usize,
    pub g1: Construction,
    pub g2: Construction,
    pub hanf: HanfResult,
    pub loc: QueryPair,
    pub glo: QueryPair,
    pub circuit_route: Option<CircuitRoute>,
    pub claims: Vec<Claim>,
    pub rule: String,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl NonDefinabilityReport {
    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes to JSON")
    }
}

const HANF_RULE: &str = "first-order definable Boolean queries are Hanf-local; \
a query taking different values on a pair related by the Hanf relation at radius r \
is not first-order definable with Hanf radius r";

/// Builds the counterexample pair for `(d, r)`, checks `G1 ⇄_r G2`, and
/// evaluates LOC_d and GLO_d on both sides. Passes iff the Hanf witness exists
/// and both queries disagree across the pair. For `d = 1` the pair is made
/// of cycles (`C_{4r+4}` against two copies of `C_{2r+2}`).
pub fn verify_theorem(d: usize, r: usize, seed: u64, trials: usize) -> Result<NonDefinabilityReport, LocalityError> {
    if d == 0 {
        return Err(LocalityError::Hypothesis("need d >= 1".into()));
    }
    let pair = if d == 1 {
        cyclic_pair(2, 2 * r + 2)?
    } else {
        build_counterexample(d, r)?
    };
    let opts = QueryOptions { trials, seed };
    let summary = |g: &Graph, n: usize, copies: usize| Construction {
        family: "cyclic-window".into(),
        n,
        window: pair.window,
        copies,
        order: g.order(),
        edge_count: g.edge_count(),
        sha256: graph_hash(g),
    };
    let g1_info = summary(&pair.g1, 2 * pair.half_order, 1);
    let g2_info = summary(&pair.g2, pair.half_order, 2);

    let witness = hanf_equivalent(&pair.g1, &pair.g2, r);
    let hanf = HanfResult {
        radius: r,
        claimed: true,
        computed: witness.is_some(),
        verdict: if witness.is_some() { ClaimStatus::Pass } else { ClaimStatus::Fail },
        census_classes: [
            ball_census(&pair.g1, r).classes.len(),
            ball_census(&pair.g2, r).classes.len(),
        ],
        witness: witness.as_ref().map(|w| w.as_slice().to_vec()),
    };

    let s1 = structure_from_graph(&pair.g1);
    let s2 = structure_from_graph(&pair.g2);
    let loc = QueryPair {
        g1: loc_query(&s1, d, opts),
        g2: loc_query(&s2, d, opts),
    };
    let glo = QueryPair {
        g1: glo_query(&s1, d, opts),
        g2: glo_query(&s2, d, opts),
    };

    let mut notes = Vec::new();
    let mut claims = vec![
        Claim::check("orders_equal", true, pair.g1.order() == pair.g2.order()),
        Claim::check("hanf_equivalent", true, witness.is_some()),
    ];
    let expectations = [
        ("loc_g1", true, loc.g1.holds),
        ("loc_g2", false, loc.g2.holds),
        ("glo_g1", true, glo.g1.holds),
        ("glo_g2", false, glo.g2.holds),
    ];
    for (name, claimed, computed) in expectations {
        claims.push(if d == 2 {
            Claim::recorded(name, claimed, computed)
        } else {
            Claim::check(name, claimed, computed)
        });
    }
    if d == 2 {
        notes.push(
            "d = 2: G1 is a cycle, which has fewer than 2n - 3 edges and is not locally 2-rigid; \
             only the Hanf claim is asserted"
                .into(),
        );
    }
    let disagree = loc.g1.holds != loc.g2.holds && glo.g1.holds != glo.g2.holds;
    claims.push(if d == 2 {
        Claim::recorded("queries_disagree", true, disagree)
    } else {
        Claim::check("queries_disagree", true, disagree)
    });

    let circuit_route = (d >= 4).then(|| {
        let c = build_cyclic_complex(2 * pair.half_order, d).expect("window fits");
        let (hypotheses_met, prediction, error) = match cjt_globally_rigid_predicate(&c, d - 1) {
            Ok(out) => (true, Some(out.prediction), None),
            Err(e) => (false, None, Some(e.to_string())),
        };
        CircuitRoute {
            k: d - 1,
            hypotheses_met,
            prediction,
            error,
            stress_route: glo.g1.holds,
            agrees: prediction == Some(glo.g1.holds),
        }
    });
    if let Some(route) = &circuit_route {
        claims.push(Claim::check("circuit_hypotheses_met", true, route.hypotheses_met));
        if route.hypotheses_met {
            claims.push(Claim::check("circuit_route_agrees_with_stress_route", true, route.agrees));
        }
    }
    if d == 3 {
        notes.push("d = 3: the circuit predicate needs k >= 3, so GLO is decided numerically only".into());
    }

    let passed = claims.iter().all(Claim::passed);
    Ok(NonDefinabilityReport {
        d,
        r,
        seed,
        trials,
        g1: g1_info,
        g2: g2_info,
        hanf,
        loc,
        glo,
        circuit_route,
        claims,
        rule: HANF_RULE.into(),
        notes,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::Signature;

    #[test]
    fn census_of_cycle() {
        let c = ball_census(&Graph::cycle(6), 1);
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].multiplicity, 6);
        assert!(are_isomorphic(&c.classes[0].representative, &Graph::path(3)).is_some());
    }

    #[test]
    fn census_of_path() {
        let c = ball_census(&Graph::path(5), 1);
        let shape: Vec<(usize, Vec<usize>)> =
            c.classes.iter().map(|k| (k.representative.order(), k.members.clone())).collect();
        assert_eq!(shape, vec![(2, vec![0, 4]), (3, vec![1, 2, 3])]);
        // Near-end and middle balls are both paths on 3 vertices, so
        // unrooted isomorphism merges them.
    }

    #[test]
    fn census_of_path_radius_two() {
        let c = ball_census(&Graph::path(5), 2);
        let orders: Vec<usize> = c.classes.iter().map(|k| k.representative.order()).collect();
        assert_eq!(orders, vec![3, 4, 5]);
        assert_eq!(c.classes.iter().map(|k| k.multiplicity).sum::<usize>(), 5);
    }

    #[test]
    fn hanf_basics() {
        let g = Graph::path(6);
        let w = hanf_equivalent(&g, &g, 2).unwrap();
        assert!(witness_is_valid(&g, &g, 2, &w));
        assert!(hanf_equivalent(&Graph::cycle(6), &Graph::path(6), 1).is_none());
        assert!(hanf_equivalent(&Graph::cycle(6), &Graph::cycle(7), 1).is_none());
    }

    #[test]
    fn counterexample_shapes() {
        let c = build_counterexample(4, 1).unwrap();
        assert_eq!((c.g1.order(), c.g2.order(), c.half_order), (20, 20, 10));
        let c = build_counterexample(2, 1).unwrap();
        assert_eq!(c.g1, Graph::cycle(12));
        assert_eq!(c.g2, disjoint_union(&Graph::cycle(6), &Graph::cycle(6)));
        let c = build_counterexample(3, 2).unwrap();
        assert_eq!((c.g1.order(), c.half_order), (28, 14));
        assert!(build_counterexample(1, 1).is_err());
    }

    #[test]
    fn queries() {
        let opts = QueryOptions::default();
        let mut one_way = SigmaStructure::new(Signature::graphs(), 2);
        one_way.insert("~", vec![0, 1]).unwrap();
        assert!(!loc_query(&one_way, 1, opts).holds);
        assert!(!glo_query(&one_way, 3, opts).holds);
        let c6 = structure_from_graph(&Graph::cycle(6));
        assert!(loc_query(&c6, 1, opts).holds);
        assert!(glo_query(&c6, 1, opts).holds);
        assert_eq!(loc_query(&c6, 2, opts).method, "pebble");
        let g = graph_of(&build_cyclic_complex(10, 4).unwrap());
        let two = structure_from_graph(&disjoint_union(&g, &g));
        assert!(!loc_query(&two, 4, opts).holds);
        assert!(!glo_query(&two, 4, opts).holds);
    }

    #[test]
    fn neighborhood_probe_small() {
        let rep = verify_neighborhood_lemma(2, 1, 6).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.claim("ball_iso_stated_path").unwrap().computed, false);
        assert_eq!(rep.claim("ball_iso_stepped_path").unwrap().computed, true);
        let rep = verify_neighborhood_lemma(2, 0, 6).unwrap();
        assert_eq!(rep.claim("ball_iso_stated_path").unwrap().computed, true);
        assert_eq!(rep.claim("ball_iso_stepped_path").unwrap().computed, true);
        assert!(verify_neighborhood_lemma(3, 1, 7).is_err());
    }

    #[test]
    fn theorem_on_the_line() {
        let rep = verify_theorem(1, 1, 3, 3).unwrap();
        assert!(rep.passed, "{}", rep.to_json());
        assert_eq!(rep.g1.order, 8);
    }
}
