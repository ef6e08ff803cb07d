//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | ("forall" | "exists") var formula | primary
//! primary := "(" formula ")" | var ("~" | "=") var | Name "(" var ("," var)* ")"
//! ```
//!
//! A quantifier's scope extends as far right as possible.

use super::syntax::{is_relation_name, parse_var_name, Formula, Signature, Var, EDGE_SYMBOL};
use super::FoError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Forall,
    Exists,
    Var(u32),
    Name(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Tilde,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::Var(i) => format!("variable v{i}"),
            Tok::Name(s) => format!("symbol '{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Eq => "'='".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FoError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'~' => Tok::Tilde,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if text[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => match parse_var_name(word) {
                        Some(idx) => Tok::Var(idx),
                        None if word.len() > 1 && word.starts_with('v') && word[1..].bytes().all(|b| b.is_ascii_digit()) => {
                            return Err(FoError::Lexical {
                                position: start,
                                found: word.into(),
                            })
                        }
                        None => Tok::Name(word.into()),
                    },
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(FoError::Lexical {
                    position: start,
                    found: ch.to_string(),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
    open_parens: Vec<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> FoError {
        match self.peek() {
            None if !self.open_parens.is_empty() => FoError::UnbalancedParens {
                position: *self.open_parens.last().unwrap(),
            },
            None => FoError::UnexpectedEnd {
                position: self.end,
                expected: expected.into(),
            },
            Some(Tok::RParen) if self.open_parens.is_empty() => FoError::UnbalancedParens {
                position: self.offset(),
            },
            Some(t) => FoError::UnexpectedToken {
                position: self.offset(),
                found: t.describe(),
                expected: expected.into(),
            },
        }
    }

    fn var(&mut self) -> Result<Var, FoError> {
        match self.peek() {
            Some(&Tok::Var(i)) => {
                self.pos += 1;
                Ok(Var(i))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, FoError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FoError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let v = self.var()?;
                let body = Box::new(self.formula()?);
                Ok(if universal {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FoError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                self.open_parens.push(at);
                let f = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.open_parens.pop();
                Ok(f)
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                let a = Var(i);
                if self.eat(&Tok::Eq) {
                    return Ok(Formula::Equals(a, self.var()?));
                }
                let op_at = self.offset();
                if self.eat(&Tok::Tilde) {
                    let b = self.var()?;
                    self.check_atom(EDGE_SYMBOL, 2, op_at)?;
                    return Ok(Formula::Atom(EDGE_SYMBOL.into(), vec![a, b]));
                }
                Err(self.unexpected("'~' or '='"))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if !self.eat(&Tok::LParen) {
                    return Err(self.unexpected("'('"));
                }
                self.open_parens.push(at);
                let mut args = vec![self.var()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.var()?);
                }
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.open_parens.pop();
                debug_assert!(is_relation_name(&name));
                self.check_atom(&name, args.len(), at)?;
                Ok(Formula::Atom(name, args))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn check_atom(&self, symbol: &str, found: usize, position: usize) -> Result<(), FoError> {
        match self.sig.arity(symbol) {
            None => Err(FoError::UnknownSymbolAt {
                position,
                symbol: symbol.into(),
            }),
            Some(expected) if expected != found => Err(FoError::ArityAt {
                position,
                symbol: symbol.into(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
        }
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FoError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        sig,
        open_parens: Vec::new(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Formula, FoError> {
        parse_formula(s, &Signature::graphs().with("P", 1).unwrap())
    }

    #[test]
    fn graph_axiom() {
        assert_eq!(
            parse("forall v0 forall v1 (v0 ~ v1 -> v1 ~ v0)").unwrap(),
            Formula::graph_axiom()
        );
    }

    #[test]
    fn leaves() {
        assert_eq!(parse("v0 = v1").unwrap(), Formula::Equals(Var(0), Var(1)));
        assert_eq!(
            parse("exists v0 (v0 ~ v0)").unwrap(),
            Formula::exists(0, Formula::edge(0, 0))
        );
        assert_eq!(parse("P(v7)").unwrap(), Formula::Atom("P".into(), vec![Var(7)]));
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Formula::edge(0, 1), Formula::edge(1, 2), Formula::edge(2, 3));
        assert_eq!(
            parse("v0 ~ v1 | v1 ~ v2 & v2 ~ v3").unwrap(),
            Formula::or(a.clone(), Formula::and(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("v0 ~ v1 -> v1 ~ v2 -> v2 ~ v3").unwrap(),
            Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("!v0 ~ v1 & v1 ~ v2").unwrap(),
            Formula::and(Formula::not(a.clone()), b.clone())
        );
        assert_eq!(
            parse("v0 ~ v1 <-> v1 ~ v2 -> v2 ~ v3").unwrap(),
            Formula::iff(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        // Quantifier scope runs to the end.
        assert_eq!(
            parse("forall v0 v0 ~ v1 & v1 ~ v2").unwrap(),
            Formula::forall(0, Formula::and(a.clone(), b.clone()))
        );
        assert_eq!(
            parse("(forall v0 v0 ~ v1) & v1 ~ v2").unwrap(),
            Formula::and(Formula::forall(0, a), b)
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("v0 ~ v1 $"),
            Err(FoError::Lexical {
                position: 8,
                found: "$".into()
            })
        );
        assert!(matches!(parse("Q(v0)"), Err(FoError::UnknownSymbolAt { position: 0, .. })));
        assert!(matches!(
            parse("v0 = v0 & P(v0, v1)"),
            Err(FoError::ArityAt { position: 10, expected: 1, found: 2, .. })
        ));
        assert_eq!(parse("(v0 ~ v1"), Err(FoError::UnbalancedParens { position: 0 }));
        assert_eq!(parse("v0 ~ v1)"), Err(FoError::UnbalancedParens { position: 7 }));
        assert!(matches!(parse("forall x v0 = v0"), Err(FoError::UnexpectedToken { position: 7, .. })));
        assert!(matches!(parse(""), Err(FoError::UnexpectedEnd { .. })));
        assert!(matches!(parse("v0 ~ v1 ~ v2"), Err(FoError::UnexpectedToken { .. })));
        assert!(matches!(
            parse_formula("v0 ~ v1", &Signature::new()),
            Err(FoError::UnknownSymbolAt { position: 3, .. })
        ));
    }
}
