use crate::error::{guard, Result};
use crate::relcore::next_tuple;

use super::formula::{Atom, Clause, ProofSymbol, SnpFormula};

/// Default cap on the clause count produced by [`primitivize`].
pub const PRIMITIVIZE_LIMIT: u128 = 1 << 14;

/// Split clauses until every clause decides every proof atom over its
/// variables.
pub fn primitivize(phi: &SnpFormula) -> Result<SnpFormula> {
    primitivize_with_limit(phi, PRIMITIVIZE_LIMIT)
}

pub fn primitivize_with_limit(phi: &SnpFormula, limit: u128) -> Result<SnpFormula> {
    split_undecided(phi, false, limit)
}

/// Like [`primitivize`], but only proof atoms on argument tuples that already
/// occur in the clause are decided. Tuples never mentioned stay free.
pub fn primitivize_mentioned(phi: &SnpFormula, limit: u128) -> Result<SnpFormula> {
    split_undecided(phi, true, limit)
}

fn split_undecided(phi: &SnpFormula, mentioned_only: bool, limit: u128) -> Result<SnpFormula> {
    let mut missing_per_clause = Vec::with_capacity(phi.clauses.len());
    let mut total: u128 = 0;
    for c in &phi.clauses {
        let missing = undecided_atoms(phi, c, mentioned_only);
        total = total.saturating_add(1u128.checked_shl(missing.len() as u32).unwrap_or(u128::MAX));
        missing_per_clause.push(missing);
    }
    guard("primitive clauses", total, limit)?;
    let mut clauses = Vec::with_capacity(total as usize);
    for (c, missing) in phi.clauses.iter().zip(missing_per_clause) {
        for mask in 0..(1u64 << missing.len()) {
            let mut d = c.clone();
            for (i, (sym, args)) in missing.iter().enumerate() {
                d.beta.push(Atom {
                    sym: *sym,
                    args: args.clone(),
                    positive: mask >> i & 1 == 1,
                });
            }
            d.normalize();
            clauses.push(d);
        }
    }
    Ok(SnpFormula {
        clauses,
        ..phi.clone()
    })
}

fn undecided_atoms(phi: &SnpFormula, c: &Clause, mentioned_only: bool) -> Vec<(usize, Vec<usize>)> {
    let decided = |sym: usize, args: &[usize]| c.beta.iter().any(|b| b.sym == sym && b.args == args);
    let mut out = Vec::new();
    if mentioned_only {
        let mut seen: Vec<&Vec<usize>> = c.beta.iter().map(|b| &b.args).collect();
        seen.sort();
        seen.dedup();
        for args in seen {
            for (sym, p) in phi.proof.iter().enumerate() {
                if p.arity == args.len() && !decided(sym, args) {
                    out.push((sym, args.clone()));
                }
            }
        }
        return out;
    }
    if c.vars.is_empty() {
        return out;
    }
    for (sym, p) in phi.proof.iter().enumerate() {
        let mut t = vec![0; p.arity];
        loop {
            if !decided(sym, &t) {
                out.push((sym, t.clone()));
            }
            if !next_tuple(&mut t, c.vars.len()) {
                break;
            }
        }
    }
    out
}

/// Pad every proof symbol to the largest proof arity; each padded atom gets
/// its own fresh variables.
pub fn uniformize_arity(phi: &SnpFormula) -> SnpFormula {
    let r = phi.max_proof_arity();
    if phi.proof.iter().all(|p| p.arity == r) {
        return phi.clone();
    }
    let taken = |name: &str, proof: &[ProofSymbol]| {
        phi.input.index_of(name).is_some() || proof.iter().any(|p| p.name == name)
    };
    let mut proof: Vec<ProofSymbol> = phi.proof.clone();
    for i in 0..proof.len() {
        if proof[i].arity < r {
            let mut name = format!("{}_{r}", proof[i].name);
            while taken(&name, &proof) {
                name.push('_');
            }
            proof[i] = ProofSymbol { name, arity: r };
        }
    }
    let clauses = phi
        .clauses
        .iter()
        .map(|c| {
            let mut d = c.clone();
            for atom in d.beta.iter_mut() {
                while atom.args.len() < r {
                    let mut v = format!("z{}", d.vars.len());
                    while d.vars.contains(&v) {
                        v.push('_');
                    }
                    d.vars.push(v);
                    atom.args.push(d.vars.len() - 1);
                }
            }
            d.normalize();
            d
        })
        .collect();
    SnpFormula {
        name: phi.name.clone(),
        input: phi.input.clone(),
        proof,
        clauses,
    }
}

/// Split clauses until every pair of distinct variables carries an
/// inequality: a clause lacking `x != y` becomes its copy with `x != y` plus
/// its copy with `y` renamed to `x`.
pub fn saturate_inequalities(phi: &SnpFormula) -> SnpFormula {
    let mut done = Vec::new();
    let mut work: Vec<Clause> = phi.clauses.iter().rev().cloned().collect();
    while let Some(c) = work.pop() {
        let n = c.vars.len();
        let gap = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !c.has_inequality(i, j));
        match gap {
            None => done.push(c),
            Some((i, j)) => {
                let collapsed = c.collapse(j, i);
                let mut apart = c;
                apart.epsilon.push((i, j));
                apart.normalize();
                work.push(collapsed);
                work.push(apart);
            }
        }
    }
    SnpFormula {
        clauses: done,
        ..phi.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snpc::parse_snp;

    #[test]
    fn primitivize_splits_per_atom() {
        let f = parse_snp("snp f { input { E/2 } proof { P/1 } clause NOT( E(x,y) ) }").unwrap();
        let g = primitivize(&f).unwrap();
        assert_eq!(g.clauses.len(), 4);
        assert!(g.clauses.iter().all(|c| c.beta.len() == 2));
        assert_eq!(primitivize(&g).unwrap(), g);
        let h = parse_snp("snp h { input { E/2 } clause NOT( E(x,y) ) }").unwrap();
        assert_eq!(primitivize(&h).unwrap(), h);
    }

    #[test]
    fn primitivize_guard() {
        let f = parse_snp("snp f { input { E/2 } proof { P/2 Q/2 } clause NOT( E(x,y) & E(y,z) ) }")
            .unwrap();
        assert!(primitivize(&f).is_err());
    }

    #[test]
    fn uniformize_pads_with_fresh_variables() {
        let f = parse_snp(
            "snp f { input { E/2 } proof { P/1 Q/2 } clause NOT( E(x,y) & P(x) & Q(x,y) ) }",
        )
        .unwrap();
        let g = uniformize_arity(&f);
        assert_eq!(g.proof[0].arity, 2);
        assert_eq!(g.clauses[0].vars.len(), 3);
        let p = g.clauses[0].beta.iter().find(|a| a.sym == 0).unwrap();
        assert_eq!(p.args, vec![0, 2]);
    }

    #[test]
    fn saturation_splits_once_for_two_variables() {
        let f = parse_snp("snp f { input { E/2 } clause NOT( E(x,y) ) }").unwrap();
        let g = saturate_inequalities(&f);
        assert_eq!(g.clauses.len(), 2);
        assert_eq!(g.clauses[0].epsilon, vec![(0, 1)]);
        assert_eq!(g.clauses[1].vars.len(), 1);
        assert_eq!(g.clauses[1].alpha[0].args, vec![0, 0]);
        assert_eq!(saturate_inequalities(&g), g);
    }
}
