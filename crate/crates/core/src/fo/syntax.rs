use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FoError;

/// Relation symbol of the graph signature.
pub const EDGE_SYMBOL: &str = "~";

/// Variable `v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Relation symbols with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The signature `{~}` with `~` binary.
    pub fn graphs() -> Self {
        let mut s = Self::new();
        s.add(EDGE_SYMBOL, 2).unwrap();
        s
    }

    pub fn add(&mut self, symbol: &str, arity: usize) -> Result<(), FoError> {
        if arity == 0 {
            return Err(FoError::ZeroArity(symbol.into()));
        }
        if symbol != EDGE_SYMBOL && !is_relation_name(symbol) {
            return Err(FoError::BadSymbol(symbol.into()));
        }
        if self.relations.contains_key(symbol) {
            return Err(FoError::DuplicateSymbol(symbol.into()));
        }
        self.relations.insert(symbol.into(), arity);
        Ok(())
    }

    pub fn with(mut self, symbol: &str, arity: usize) -> Result<Self, FoError> {
        self.add(symbol, arity)?;
        Ok(self)
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.relations.get(symbol).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(s, &a)| (s.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Names usable for relation symbols in the concrete syntax: identifiers
/// that are neither keywords nor variable names.
pub fn is_relation_name(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "forall" | "exists")
        && parse_var_name(s).is_none()
}

pub(crate) fn parse_var_name(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('v')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Equals(Var, Var),
    Atom(String, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn edge(a: u32, b: u32) -> Self {
        Formula::Atom(EDGE_SYMBOL.into(), vec![Var(a), Var(b)])
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: u32, f: Formula) -> Self {
        Formula::Exists(Var(v), Box::new(f))
    }

    pub fn forall(v: u32, f: Formula) -> Self {
        Formula::Forall(Var(v), Box::new(f))
    }

    /// `∀v0 ∀v1 (v0 ~ v1 → v1 ~ v0)`: the single axiom of the theory of graphs.
    pub fn graph_axiom() -> Self {
        Self::forall(0, Self::forall(1, Self::implies(Self::edge(0, 1), Self::edge(1, 0))))
    }

    /// Quantifier depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Equals(..) | Formula::Atom(..) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.depth().max(b.depth())
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
        }
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Equals(a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            Formula::Atom(_, args) => out.extend(args.iter().copied()),
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                out.insert(*v);
                f.collect_vars(out);
            }
        }
    }

    /// Checks every atom against `sig`: known symbol, matching arity.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), FoError> {
        match self {
            Formula::Equals(..) => Ok(()),
            Formula::Atom(sym, args) => match sig.arity(sym) {
                None => Err(FoError::UnknownSymbol(sym.clone())),
                Some(a) if a != args.len() => Err(FoError::Arity {
                    symbol: sym.clone(),
                    expected: a,
                    found: args.len(),
                }),
                Some(_) => Ok(()),
            },
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => {
                f.check_signature(sig)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.check_signature(sig)?;
                b.check_signature(sig)
            }
        }
    }
}

/// The free set, clause by clause.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    match f {
        Formula::Equals(a, b) => BTreeSet::from([*a, *b]),
        Formula::Atom(_, args) => args.iter().copied().collect(),
        Formula::Not(g) => free_vars(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let mut s = free_vars(a);
            s.extend(free_vars(b));
            s
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let mut s = free_vars(g);
            s.remove(v);
            s
        }
    }
}

pub fn is_sentence(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

// Binding strength used by the printer; quantifiers bind loosest because
// their scope runs as far right as possible.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) | Formula::Equals(..) | Formula::Atom(..) => 5,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, child: &Formula, min: u8) -> fmt::Result {
    let p = precedence(child);
    if p == 0 || p < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, l: u8, r: u8| {
            write_operand(f, a, l)?;
            write!(f, " {op} ")?;
            write_operand(f, b, r)
        };
        match self {
            Formula::Equals(a, b) => write!(f, "{a} = {b}"),
            Formula::Atom(sym, args) if sym == EDGE_SYMBOL && args.len() == 2 => {
                write!(f, "{} ~ {}", args[0], args[1])
            }
            Formula::Atom(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Not(g) => {
                write!(f, "!")?;
                write_operand(f, g, 5)
            }
            // & and | are left-associative, -> right-associative, <-> left.
            Formula::And(a, b) => binary(f, a, "&", b, 4, 5),
            Formula::Or(a, b) => binary(f, a, "|", b, 3, 4),
            Formula::Implies(a, b) => binary(f, a, "->", b, 3, 2),
            Formula::Iff(a, b) => binary(f, a, "<->", b, 1, 2),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let q = if matches!(self, Formula::Exists(..)) { "exists" } else { "forall" };
                write!(f, "{q} {v} ")?;
                match precedence(g) {
                    1..=4 => write!(f, "({g})"),
                    _ => write!(f, "{g}"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_set_clauses() {
        assert_eq!(free_vars(&Formula::Equals(Var(0), Var(1))), BTreeSet::from([Var(0), Var(1)]));
        let f = Formula::forall(0, Formula::edge(0, 1));
        assert_eq!(free_vars(&f), BTreeSet::from([Var(1)]));
        assert!(is_sentence(&Formula::graph_axiom()));
        // A bound occurrence does not hide a free one elsewhere.
        let g = Formula::and(Formula::exists(0, Formula::edge(0, 0)), Formula::edge(0, 2));
        assert_eq!(free_vars(&g), BTreeSet::from([Var(0), Var(2)]));
    }

    #[test]
    fn printing() {
        assert_eq!(
            Formula::graph_axiom().to_string(),
            "forall v0 forall v1 (v0 ~ v1 -> v1 ~ v0)"
        );
        let f = Formula::and(
            Formula::forall(0, Formula::edge(0, 0)),
            Formula::Atom("P".into(), vec![Var(3)]),
        );
        assert_eq!(f.to_string(), "(forall v0 v0 ~ v0) & P(v3)");
        let g = Formula::implies(Formula::implies(Formula::edge(0, 1), Formula::edge(1, 2)), Formula::edge(2, 3));
        assert_eq!(g.to_string(), "(v0 ~ v1 -> v1 ~ v2) -> v2 ~ v3");
    }

    #[test]
    fn signature_rules() {
        let mut s = Signature::graphs();
        assert!(s.add("~", 2).is_err());
        assert!(s.add("P", 0).is_err());
        assert!(s.add("v3", 1).is_err());
        assert!(s.add("forall", 1).is_err());
        assert!(s.add("Red", 1).is_ok());
        assert_eq!(s.arity("Red"), Some(1));
        let f = Formula::Atom("Red".into(), vec![Var(0), Var(1)]);
        assert!(matches!(f.check_signature(&s), Err(FoError::Arity { .. })));
    }
}
