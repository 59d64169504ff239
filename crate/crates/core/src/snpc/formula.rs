use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relcore::text::{Parser, Tok};
use crate::relcore::{Signature, Symbol};

/// An atom `S(x1, .., xk)` or its negation. `sym` indexes the input
/// signature for input atoms and the proof list for proof atoms; `args` index
/// the clause variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub sym: usize,
    pub args: Vec<usize>,
    pub positive: bool,
}

/// `NOT(alpha & beta & epsilon)` over clause-local variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub vars: Vec<String>,
    pub alpha: Vec<Atom>,
    pub beta: Vec<Atom>,
    /// Pairs `(i, j)` with `i < j` meaning `vars[i] != vars[j]`.
    pub epsilon: Vec<(usize, usize)>,
}

impl Clause {
    /// Sort and deduplicate atoms and inequalities.
    pub fn normalize(&mut self) {
        for (a, b) in self.epsilon.iter_mut() {
            if *a > *b {
                std::mem::swap(a, b);
            }
        }
        self.alpha.sort();
        self.alpha.dedup();
        self.beta.sort();
        self.beta.dedup();
        self.epsilon.sort();
        self.epsilon.dedup();
    }

    /// Whether some atom occurs both positively and negatively, or some
    /// inequality compares a variable with itself; such a clause never fires.
    pub fn is_vacuous(&self) -> bool {
        let clash = |atoms: &[Atom]| {
            atoms.iter().any(|a| {
                a.positive
                    && atoms
                        .iter()
                        .any(|b| !b.positive && b.sym == a.sym && b.args == a.args)
            })
        };
        clash(&self.alpha) || clash(&self.beta) || self.epsilon.iter().any(|&(a, b)| a == b)
    }

    pub fn has_inequality(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.epsilon.contains(&key)
    }

    /// The clause with variable `from` renamed to `to` and then removed.
    pub fn collapse(&self, from: usize, to: usize) -> Clause {
        let pos = |x: usize| {
            let x = if x == from { to } else { x };
            if x > from {
                x - 1
            } else {
                x
            }
        };
        let map_atoms = |atoms: &[Atom]| {
            atoms
                .iter()
                .map(|a| Atom {
                    sym: a.sym,
                    args: a.args.iter().map(|&x| pos(x)).collect(),
                    positive: a.positive,
                })
                .collect()
        };
        let mut vars = self.vars.clone();
        vars.remove(from);
        let mut c = Clause {
            vars,
            alpha: map_atoms(&self.alpha),
            beta: map_atoms(&self.beta),
            epsilon: self.epsilon.iter().map(|&(a, b)| (pos(a), pos(b))).collect(),
        };
        c.normalize();
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofSymbol {
    pub name: String,
    pub arity: usize,
}

/// `exists proof relations . forall variables . AND_i NOT(clause_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpFormula {
    pub name: String,
    pub input: Arc<Signature>,
    pub proof: Vec<ProofSymbol>,
    pub clauses: Vec<Clause>,
}

/// Which syntactic restrictions a formula satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionReport {
    pub monotone: bool,
    pub monadic: bool,
    pub no_inequality: bool,
}

impl RestrictionReport {
    pub fn is_mmsnp(&self) -> bool {
        self.monotone && self.monadic && self.no_inequality
    }
}

impl SnpFormula {
    pub fn restrictions(&self) -> RestrictionReport {
        RestrictionReport {
            monotone: self
                .clauses
                .iter()
                .all(|c| c.alpha.iter().all(|a| a.positive)),
            monadic: self.proof.iter().all(|p| p.arity == 1),
            no_inequality: self.clauses.iter().all(|c| c.epsilon.is_empty()),
        }
    }

    pub fn max_proof_arity(&self) -> usize {
        self.proof.iter().map(|p| p.arity).max().unwrap_or(0)
    }

    /// Check symbol indices, arities and variable indices.
    pub fn validate(&self) -> Result<()> {
        for c in &self.clauses {
            let check = |a: &Atom, arity: Option<usize>, name: &dyn Fn() -> String| -> Result<()> {
                let arity = arity.ok_or_else(|| Error::UnknownSymbol(name()))?;
                if a.args.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name(),
                        expected: arity,
                        found: a.args.len(),
                    });
                }
                if let Some(&x) = a.args.iter().find(|&&x| x >= c.vars.len()) {
                    return Err(Error::UnknownElement(format!("variable #{x}")));
                }
                Ok(())
            };
            for a in &c.alpha {
                let arity = (a.sym < self.input.len()).then(|| self.input.arity(a.sym));
                check(a, arity, &|| format!("input symbol #{}", a.sym))?;
            }
            for a in &c.beta {
                let arity = self.proof.get(a.sym).map(|p| p.arity);
                check(a, arity, &|| format!("proof symbol #{}", a.sym))?;
            }
            if let Some(&(a, b)) = c.epsilon.iter().find(|&&(a, b)| a.max(b) >= c.vars.len()) {
                return Err(Error::UnknownElement(format!("variable #{}", a.max(b))));
            }
        }
        Ok(())
    }
}

/// Parse `snp <name> { input { E/2 } proof { P/1 } clause NOT( ... ) ... }`.
///
/// Literals are joined by `&` or `AND`; negation is `!` or `NOT`;
/// inequalities are written `x != y`.
pub fn parse_snp(text: &str) -> Result<SnpFormula> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("snp")?;
    let name = p.expect_ident()?;
    p.expect_punct('{')?;
    p.expect_keyword("input")?;
    let input = symbol_list(&mut p)?;
    let proof = if p.eat_word("proof") {
        symbol_list(&mut p)?
    } else {
        Vec::new()
    };
    for s in &proof {
        if input.iter().any(|(n, _)| n == &s.0) {
            return p.error(format!("`{}` is both an input and a proof symbol", s.0));
        }
    }
    let input = Arc::new(Signature::new(
        name.clone(),
        input.into_iter().map(|(n, a)| Symbol::base(n, a)).collect(),
    )?);
    let proof: Vec<ProofSymbol> = proof
        .into_iter()
        .map(|(name, arity)| ProofSymbol { name, arity })
        .collect();
    let mut clauses = Vec::new();
    loop {
        if p.eat_punct('}') {
            break;
        }
        if p.eat_punct(';') {
            continue;
        }
        if p.at_eof() {
            return p.error("unterminated formula");
        }
        p.expect_keyword("clause")?;
        clauses.push(parse_clause(&mut p, &input, &proof)?);
    }
    if !p.at_eof() {
        return p.error("trailing input after formula");
    }
    Ok(SnpFormula {
        name,
        input,
        proof,
        clauses,
    })
}

fn symbol_list(p: &mut Parser) -> Result<Vec<(String, usize)>> {
    p.expect_punct('{')?;
    let mut out: Vec<(String, usize)> = Vec::new();
    while !p.eat_punct('}') {
        if p.at_eof() {
            return p.error("unterminated symbol list");
        }
        let (line, col) = p.position();
        let n = p.expect_ident()?;
        p.expect_punct('/')?;
        let a = p.expect_number()?;
        if a == 0 {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("symbol `{n}` has arity 0"),
            });
        }
        if out.iter().any(|(m, _)| m == &n) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("duplicate symbol `{n}`"),
            });
        }
        out.push((n, a));
        p.eat_punct(',');
    }
    Ok(out)
}

fn parse_clause(p: &mut Parser, input: &Signature, proof: &[ProofSymbol]) -> Result<Clause> {
    let mut c = Clause {
        vars: Vec::new(),
        alpha: Vec::new(),
        beta: Vec::new(),
        epsilon: Vec::new(),
    };
    if !(p.eat_word("NOT") || p.eat_word("not") || p.eat_punct('!')) {
        return p.error("expected `NOT(`");
    }
    p.expect_punct('(')?;
    let var = |c: &mut Clause, w: String| -> usize {
        match c.vars.iter().position(|v| *v == w) {
            Some(i) => i,
            None => {
                c.vars.push(w);
                c.vars.len() - 1
            }
        }
    };
    let mut first = true;
    loop {
        if p.eat_punct(')') {
            break;
        }
        if !first && !(p.eat_punct('&') || p.eat_word("AND") || p.eat_word("and")) {
            return p.error("expected `&` or `)`");
        }
        first = false;
        let negated = p.eat_punct('!') || p.eat_word("NOT") || p.eat_word("not");
        let (line, col) = p.position();
        let w = p.expect_word()?;
        if p.eat_punct('(') {
            let mut args = Vec::new();
            while !p.eat_punct(')') {
                if p.at_eof() {
                    return p.error("unterminated atom");
                }
                let v = p.expect_word()?;
                args.push(var(&mut c, v));
                if !p.eat_punct(',') && !p.is_punct(')') {
                    return p.error("expected `,` or `)`");
                }
            }
            let arity_err = |expected: usize| Error::ArityMismatch {
                symbol: w.clone(),
                expected,
                found: args.len(),
            };
            if let Some(sym) = input.index_of(&w) {
                if input.arity(sym) != args.len() {
                    return Err(arity_err(input.arity(sym)));
                }
                c.alpha.push(Atom {
                    sym,
                    args,
                    positive: !negated,
                });
            } else if let Some(sym) = proof.iter().position(|s| s.name == w) {
                if proof[sym].arity != args.len() {
                    return Err(arity_err(proof[sym].arity));
                }
                c.beta.push(Atom {
                    sym,
                    args,
                    positive: !negated,
                });
            } else {
                return Err(Error::UnknownSymbol(w));
            }
        } else {
            if negated {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: "only atoms can be negated".into(),
                });
            }
            if *p.peek() != Tok::Ne {
                return p.error(format!("expected `(` or `!=` after `{w}`"));
            }
            p.next();
            let b = p.expect_word()?;
            let x = var(&mut c, w);
            let y = var(&mut c, b);
            c.epsilon.push((x, y));
        }
    }
    c.normalize();
    Ok(c)
}

impl fmt::Display for SnpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "snp {} {{", self.name)?;
        write!(f, "  input {{")?;
        for s in self.input.symbols() {
            write!(f, " {}/{}", s.name, s.arity)?;
        }
        writeln!(f, " }}")?;
        if !self.proof.is_empty() {
            write!(f, "  proof {{")?;
            for s in &self.proof {
                write!(f, " {}/{}", s.name, s.arity)?;
            }
            writeln!(f, " }}")?;
        }
        for c in &self.clauses {
            let mut lits = Vec::new();
            let atom = |a: &Atom, name: &str| {
                let args: Vec<&str> = a.args.iter().map(|&x| c.vars[x].as_str()).collect();
                format!("{}{}({})", if a.positive { "" } else { "!" }, name, args.join(","))
            };
            for a in &c.alpha {
                lits.push(atom(a, &self.input.symbol(a.sym).name));
            }
            for a in &c.beta {
                lits.push(atom(a, &self.proof[a.sym].name));
            }
            for &(x, y) in &c.epsilon {
                lits.push(format!("{} != {}", c.vars[x], c.vars[y]));
            }
            writeln!(f, "  clause NOT( {} )", lits.join(" & "))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TRIANGLE_FREE: &str = "
        snp two_tf { input { E/2 } proof { P1/1 P2/1 }
          clause NOT( E(x1,x2) & E(x1,x3) & E(x2,x3) & P1(x1) & P1(x2) & P1(x3) )
          clause NOT( E(x1,x2) & E(x1,x3) & E(x2,x3) & P2(x1) & P2(x2) & P2(x3) )
          clause NOT( E(x1,x2) & E(x1,x3) & E(x2,x3) & !P1(x1) & P2(x1) & P1(x2) )
          clause NOT( !P1(y) & !P2(y) )
        }";

    #[test]
    fn parses_and_round_trips() {
        let f = parse_snp(TWO_TRIANGLE_FREE).unwrap();
        assert_eq!(f.clauses.len(), 4);
        assert_eq!(f.clauses[0].vars.len(), 3);
        assert_eq!(f.clauses[3].beta.len(), 2);
        let again = parse_snp(&f.to_string()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn empty_clause_list() {
        let f = parse_snp("snp all { input { E/2 } }").unwrap();
        assert!(f.clauses.is_empty());
        assert!(f.restrictions().is_mmsnp());
    }

    #[test]
    fn arity_error() {
        let e = parse_snp("snp bad { input { E/2 } proof { P/1 } clause NOT( P(x,y) ) }");
        assert!(matches!(e, Err(Error::ArityMismatch { .. })));
        let e = parse_snp("snp bad { input { E/2 } clause NOT( Q(x) ) }");
        assert!(matches!(e, Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn inequalities_and_negation() {
        let f = parse_snp("snp f { input { E/2 } clause NOT( !E(y,x) AND x != y ) }").unwrap();
        let r = f.restrictions();
        assert!(!r.monotone && r.monadic && !r.no_inequality);
        assert_eq!(f.clauses[0].epsilon, vec![(0, 1)]);
    }
}
