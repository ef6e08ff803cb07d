use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::syntax::{free_vars, Formula, Signature, Var, EDGE_SYMBOL};
use super::FoError;
use crate::graph::Graph;

/// Values of variables; must cover the free variables of the formula.
pub type Assignment = BTreeMap<Var, usize>;

/// A finite relational structure with universe `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct SigmaStructure {
    signature: Signature,
    universe: usize,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

/// `{"universe": n, "relations": {"~": [[a, b], ...]}}`, with an optional
/// `"arities"` map for symbols whose tuple list is empty.
#[derive(Serialize, Deserialize)]
struct StructureRepr {
    universe: usize,
    relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    arities: BTreeMap<String, usize>,
}

impl TryFrom<StructureRepr> for SigmaStructure {
    type Error = FoError;

    fn try_from(r: StructureRepr) -> Result<Self, Self::Error> {
        let mut sig = Signature::new();
        for (sym, tuples) in &r.relations {
            let arity = match (r.arities.get(sym), tuples.first()) {
                (Some(&a), _) => a,
                (None, Some(t)) => t.len(),
                (None, None) if sym == EDGE_SYMBOL => 2,
                (None, None) => return Err(FoError::UnknownArity(sym.clone())),
            };
            sig.add(sym, arity)?;
        }
        for (sym, &a) in &r.arities {
            if !r.relations.contains_key(sym) {
                sig.add(sym, a)?;
            }
        }
        let mut s = SigmaStructure::new(sig, r.universe);
        for (sym, tuples) in r.relations {
            for t in tuples {
                s.insert(&sym, t)?;
            }
        }
        Ok(s)
    }
}

impl From<SigmaStructure> for StructureRepr {
    fn from(s: SigmaStructure) -> Self {
        let arities = s
            .signature
            .symbols()
            .filter(|(sym, _)| *sym != EDGE_SYMBOL && s.relations[*sym].is_empty())
            .map(|(sym, a)| (sym.to_string(), a))
            .collect();
        StructureRepr {
            universe: s.universe,
            relations: s
                .relations
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
            arities,
        }
    }
}

impl SigmaStructure {
    /// Structure with every relation empty.
    pub fn new(signature: Signature, universe: usize) -> Self {
        let relations = signature
            .symbols()
            .map(|(s, _)| (s.to_string(), BTreeSet::new()))
            .collect();
        Self {
            signature,
            universe,
            relations,
        }
    }

    pub fn insert(&mut self, symbol: &str, tuple: Vec<usize>) -> Result<(), FoError> {
        let arity = self
            .signature
            .arity(symbol)
            .ok_or_else(|| FoError::UnknownSymbol(symbol.into()))?;
        if tuple.len() != arity {
            return Err(FoError::Arity {
                symbol: symbol.into(),
                expected: arity,
                found: tuple.len(),
            });
        }
        if tuple.iter().any(|&x| x >= self.universe) {
            return Err(FoError::TupleOutOfRange {
                symbol: symbol.into(),
                tuple,
                universe: self.universe,
            });
        }
        self.relations.get_mut(symbol).unwrap().insert(tuple);
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn tuples(&self, symbol: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.relations.get(symbol)
    }

    pub fn holds(&self, symbol: &str, tuple: &[usize]) -> bool {
        self.relations.get(symbol).is_some_and(|t| t.contains(tuple))
    }

    /// Renames every element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.universe);
        let relations = self
            .relations
            .iter()
            .map(|(s, ts)| {
                (
                    s.clone(),
                    ts.iter().map(|t| t.iter().map(|&x| perm[x]).collect()).collect(),
                )
            })
            .collect();
        Self {
            signature: self.signature.clone(),
            universe: self.universe,
            relations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serialization is infallible")
    }
}

/// Truth of `f` in `s` under `asg`, by direct recursion on the formula.
pub fn evaluate(s: &SigmaStructure, f: &Formula, asg: &Assignment) -> Result<bool, FoError> {
    f.check_signature(&s.signature)?;
    for v in free_vars(f) {
        match asg.get(&v) {
            None => return Err(FoError::Unassigned(v)),
            Some(&value) if value >= s.universe => {
                return Err(FoError::AssignmentOutOfRange {
                    var: v,
                    value,
                    universe: s.universe,
                })
            }
            Some(_) => {}
        }
    }
    let slots = f
        .variables()
        .into_iter()
        .chain(asg.keys().copied())
        .map(|v| v.0 as usize + 1)
        .max()
        .unwrap_or(0);
    let mut env = vec![None; slots];
    for (v, &x) in asg {
        env[v.0 as usize] = Some(x);
    }
    Ok(eval_rec(s, f, &mut env))
}

pub fn evaluate_sentence(s: &SigmaStructure, f: &Formula) -> Result<bool, FoError> {
    evaluate(s, f, &Assignment::new())
}

fn eval_rec(s: &SigmaStructure, f: &Formula, env: &mut [Option<usize>]) -> bool {
    let val = |env: &[Option<usize>], v: &Var| env[v.0 as usize].expect("free variables are assigned");
    match f {
        Formula::Equals(a, b) => val(env, a) == val(env, b),
        Formula::Atom(sym, args) => {
            let tuple: Vec<usize> = args.iter().map(|v| val(env, v)).collect();
            s.holds(sym, &tuple)
        }
        Formula::Not(g) => !eval_rec(s, g, env),
        Formula::And(a, b) => eval_rec(s, a, env) && eval_rec(s, b, env),
        Formula::Or(a, b) => eval_rec(s, a, env) || eval_rec(s, b, env),
        Formula::Implies(a, b) => !eval_rec(s, a, env) || eval_rec(s, b, env),
        Formula::Iff(a, b) => eval_rec(s, a, env) == eval_rec(s, b, env),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let slot = v.0 as usize;
            let saved = env[slot];
            let mut result = universal;
            for x in 0..s.universe {
                env[slot] = Some(x);
                if eval_rec(s, g, env) != universal {
                    result = !universal;
                    break;
                }
            }
            env[slot] = saved;
            result
        }
    }
}

/// Whether a `{~}`-structure satisfies the symmetry axiom, with the
/// irreflexivity of `~` reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphTheoryCheck {
    pub axiom_holds: bool,
    pub irreflexive: bool,
}

impl GraphTheoryCheck {
    pub fn is_simple_graph(&self) -> bool {
        self.axiom_holds && self.irreflexive
    }
}

pub fn models_graph_theory(s: &SigmaStructure) -> Result<GraphTheoryCheck, FoError> {
    if s.signature.arity(EDGE_SYMBOL) != Some(2) {
        return Err(FoError::NotGraphSignature);
    }
    let axiom_holds = evaluate_sentence(s, &Formula::graph_axiom())?;
    let irreflexive = s.relations[EDGE_SYMBOL].iter().all(|t| t[0] != t[1]);
    Ok(GraphTheoryCheck {
        axiom_holds,
        irreflexive,
    })
}

/// Symmetrization of `~` with loops dropped. The signature must be exactly `{~}`.
pub fn gaifman_graph(s: &SigmaStructure) -> Result<Graph, FoError> {
    if s.signature.len() != 1 || s.signature.arity(EDGE_SYMBOL) != Some(2) {
        return Err(FoError::NotGraphSignature);
    }
    let edges = s.relations[EDGE_SYMBOL]
        .iter()
        .filter(|t| t[0] != t[1])
        .map(|t| (t[0], t[1]));
    Ok(Graph::from_edge_set(s.universe, edges).expect("tuples are validated against the universe"))
}

/// Both orientations of every edge.
pub fn structure_from_graph(g: &Graph) -> SigmaStructure {
    let mut s = SigmaStructure::new(Signature::graphs(), g.order());
    let rel = s.relations.get_mut(EDGE_SYMBOL).unwrap();
    for &(u, v) in g.edges() {
        rel.insert(vec![u, v]);
        rel.insert(vec![v, u]);
    }
    s
}

/// Inverse of [`structure_from_graph`] on models of the theory of graphs;
/// loops are dropped.
pub fn graph_from_structure(s: &SigmaStructure) -> Result<Graph, FoError> {
    let check = models_graph_theory(s)?;
    if !check.axiom_holds {
        let (a, b) = s.relations[EDGE_SYMBOL]
            .iter()
            .map(|t| (t[0], t[1]))
            .find(|&(a, b)| !s.holds(EDGE_SYMBOL, &[b, a]))
            .expect("a failing axiom has a one-directed pair");
        return Err(FoError::NotAGraph(format!("({a}, {b}) is related but ({b}, {a}) is not")));
    }
    gaifman_graph(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::parse_formula;

    fn graph_structure(n: usize, pairs: &[(usize, usize)]) -> SigmaStructure {
        let mut s = SigmaStructure::new(Signature::graphs(), n);
        for &(a, b) in pairs {
            s.insert("~", vec![a, b]).unwrap();
        }
        s
    }

    fn triangle_sentence() -> Formula {
        parse_formula(
            "exists v0 exists v1 exists v2 (v0 ~ v1 & v1 ~ v2 & v0 ~ v2 & !v0 = v1 & !v1 = v2 & !v0 = v2)",
            &Signature::graphs(),
        )
        .unwrap()
    }

    #[test]
    fn graph_axiom_fixtures() {
        let one_way = graph_structure(2, &[(0, 1)]);
        assert!(!evaluate_sentence(&one_way, &Formula::graph_axiom()).unwrap());
        let both = graph_structure(2, &[(0, 1), (1, 0)]);
        assert!(evaluate_sentence(&both, &Formula::graph_axiom()).unwrap());
    }

    #[test]
    fn triangle_fixtures() {
        let k3 = structure_from_graph(&Graph::complete(3));
        let c4 = structure_from_graph(&Graph::cycle(4));
        assert!(evaluate_sentence(&k3, &triangle_sentence()).unwrap());
        assert!(!evaluate_sentence(&c4, &triangle_sentence()).unwrap());
    }

    #[test]
    fn free_variables_must_be_assigned() {
        let s = graph_structure(3, &[(0, 1)]);
        let f = Formula::edge(0, 1);
        assert_eq!(evaluate(&s, &f, &Assignment::new()), Err(FoError::Unassigned(Var(0))));
        let asg = Assignment::from([(Var(0), 0), (Var(1), 1)]);
        assert!(evaluate(&s, &f, &asg).unwrap());
        let bad = Assignment::from([(Var(0), 0), (Var(1), 5)]);
        assert!(matches!(evaluate(&s, &f, &bad), Err(FoError::AssignmentOutOfRange { .. })));
    }

    #[test]
    fn empty_universe() {
        let s = SigmaStructure::new(Signature::graphs(), 0);
        assert!(evaluate_sentence(&s, &Formula::graph_axiom()).unwrap());
        assert!(!evaluate_sentence(&s, &parse_formula("exists v0 v0 = v0", &Signature::graphs()).unwrap()).unwrap());
    }

    #[test]
    fn graph_theory_and_loops() {
        let sym = graph_structure(3, &[(0, 1), (1, 0)]);
        assert_eq!(
            models_graph_theory(&sym).unwrap(),
            GraphTheoryCheck { axiom_holds: true, irreflexive: true }
        );
        assert!(!models_graph_theory(&graph_structure(2, &[(0, 1)])).unwrap().axiom_holds);
        let looped = graph_structure(2, &[(0, 1), (1, 0), (1, 1)]);
        assert_eq!(
            models_graph_theory(&looped).unwrap(),
            GraphTheoryCheck { axiom_holds: true, irreflexive: false }
        );
        let other = SigmaStructure::new(Signature::new().with("P", 1).unwrap(), 2);
        assert_eq!(models_graph_theory(&other), Err(FoError::NotGraphSignature));
    }

    #[test]
    fn gaifman() {
        assert_eq!(gaifman_graph(&graph_structure(2, &[(0, 1)])).unwrap(), Graph::complete(2));
        assert_eq!(gaifman_graph(&graph_structure(4, &[])).unwrap(), Graph::empty(4));
        assert_eq!(
            gaifman_graph(&graph_structure(3, &[(0, 1), (1, 0), (2, 2)])).unwrap(),
            Graph::new(3, [(0, 1)]).unwrap()
        );
        let two = SigmaStructure::new(Signature::graphs().with("P", 1).unwrap(), 2);
        assert_eq!(gaifman_graph(&two), Err(FoError::NotGraphSignature));
    }

    #[test]
    fn graph_bridge() {
        for g in [Graph::cycle(6), Graph::complete(5)] {
            assert_eq!(graph_from_structure(&structure_from_graph(&g)).unwrap(), g);
        }
        assert!(matches!(
            graph_from_structure(&graph_structure(2, &[(0, 1)])),
            Err(FoError::NotAGraph(_))
        ));
    }

    #[test]
    fn json_format() {
        let s = graph_structure(3, &[(1, 0), (0, 1)]);
        assert_eq!(s.to_json(), r#"{"universe":3,"relations":{"~":[[0,1],[1,0]]}}"#);
        let back: SigmaStructure = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let empty: SigmaStructure = serde_json::from_str(r#"{"universe":2,"relations":{"~":[]}}"#).unwrap();
        assert_eq!(empty.signature().arity("~"), Some(2));
        assert!(serde_json::from_str::<SigmaStructure>(r#"{"universe":2,"relations":{"~":[[0,2]]}}"#).is_err());
        assert!(serde_json::from_str::<SigmaStructure>(r#"{"universe":2,"relations":{"P":[]}}"#).is_err());
        let with_arity: SigmaStructure =
            serde_json::from_str(r#"{"universe":2,"relations":{"P":[]},"arities":{"P":1}}"#).unwrap();
        assert_eq!(with_arity.signature().arity("P"), Some(1));
        assert_eq!(with_arity.to_json(), r#"{"universe":2,"relations":{"P":[]},"arities":{"P":1}}"#);
    }
}
