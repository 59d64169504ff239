use crate::error::{guard, Error, Result};
use crate::relcore::{next_tuple, Structure};

use super::formula::{Atom, SnpFormula};

/// Default cap on the number of proof-relation assignments.
pub const EVAL_LIMIT: u128 = 1 << 20;
/// Cap on clause valuations enumerated while evaluating.
pub const VALUATION_LIMIT: u128 = 1 << 24;

/// Whether some interpretation of the proof symbols over `a` satisfies every
/// clause under every valuation.
pub fn eval_snp(phi: &SnpFormula, a: &Structure) -> Result<bool> {
    eval_snp_with_limit(phi, a, EVAL_LIMIT)
}

pub fn eval_snp_with_limit(phi: &SnpFormula, a: &Structure, limit: u128) -> Result<bool> {
    if a.signature() != &*phi.input {
        return Err(Error::SignatureMismatch(format!(
            "structure over {}, formula input {}",
            a.signature(),
            phi.input
        )));
    }
    let n = a.size();
    let mut offset = Vec::with_capacity(phi.proof.len());
    let mut bits: u128 = 0;
    for p in &phi.proof {
        offset.push(bits as usize);
        bits = bits.saturating_add((n as u128).saturating_pow(p.arity as u32));
    }
    let assignments = 1u128.checked_shl(bits.min(127) as u32).unwrap_or(u128::MAX);
    guard("proof assignments", assignments, limit)?;
    let bits = bits as usize;

    let mut valuations: u128 = 0;
    for c in &phi.clauses {
        valuations = valuations.saturating_add((n as u128).saturating_pow(c.vars.len() as u32));
    }
    guard("clause valuations", valuations, VALUATION_LIMIT)?;

    let bit_of = |atom: &Atom, v: &[usize]| -> usize {
        let mut idx = 0;
        for &x in atom.args.iter().rev() {
            idx = idx * n + v[x];
        }
        offset[atom.sym] + idx
    };

    // Each clause valuation whose input part holds forbids one combination of
    // proof literals.
    let mut nogoods: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); bits.max(1)];
    for c in &phi.clauses {
        if c.vars.is_empty() {
            if c.alpha.is_empty() && c.beta.is_empty() && c.epsilon.is_empty() {
                return Ok(false);
            }
            continue;
        }
        if n == 0 {
            continue;
        }
        let mut v = vec![0; c.vars.len()];
        loop {
            if fires_on_input(c, a, &v) {
                let mut lits: Vec<(usize, bool)> =
                    c.beta.iter().map(|b| (bit_of(b, &v), b.positive)).collect();
                lits.sort();
                lits.dedup();
                let consistent = lits.windows(2).all(|w| w[0].0 != w[1].0);
                if consistent {
                    match lits.last() {
                        None => return Ok(false),
                        Some(&(top, _)) => nogoods[top].push(lits),
                    }
                }
            }
            if !next_tuple(&mut v, n) {
                break;
            }
        }
    }
    let mut assignment = vec![false; bits];
    Ok(solve(0, &mut assignment, &nogoods))
}

fn fires_on_input(c: &super::formula::Clause, a: &Structure, v: &[usize]) -> bool {
    if c.epsilon.iter().any(|&(x, y)| v[x] == v[y]) {
        return false;
    }
    c.alpha.iter().all(|atom| {
        let t: Vec<usize> = atom.args.iter().map(|&x| v[x]).collect();
        a.contains(atom.sym, &t) == atom.positive
    })
}

/// Depth-first search over proof bits; a nogood is checked once its largest
/// bit is set.
fn solve(bit: usize, assignment: &mut [bool], nogoods: &[Vec<Vec<(usize, bool)>>]) -> bool {
    if bit == assignment.len() {
        return true;
    }
    for value in [false, true] {
        assignment[bit] = value;
        let clash = nogoods[bit]
            .iter()
            .any(|ng| ng.iter().all(|&(b, pos)| assignment[b] == pos));
        if !clash && solve(bit + 1, assignment, nogoods) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::build::{clique, digraph};
    use crate::snpc::parse_snp;

    const TWO_TF: &str = "
        snp two_tf { input { E/2 } proof { P1/1 P2/1 }
          clause NOT( E(x,y) & E(x,z) & E(y,z) & P1(x) & P1(y) & P1(z) )
          clause NOT( E(x,y) & E(x,z) & E(y,z) & P2(x) & P2(y) & P2(z) )
          clause NOT( !P1(y) & !P2(y) )
        }";

    #[test]
    fn vertex_partition_into_triangle_free_parts() {
        let f = parse_snp(TWO_TF).unwrap();
        assert!(eval_snp(&f, &clique(3)).unwrap());
        assert!(!eval_snp(&f, &clique(7)).unwrap());
        assert!(eval_snp(&f, &clique(4)).unwrap());
        assert!(eval_snp(&f, &digraph(0, &[])).unwrap());
    }

    #[test]
    fn guard_refuses_large_assignments() {
        let f = parse_snp("snp g { input { E/2 } proof { P/2 } clause NOT( P(x,y) ) }").unwrap();
        assert!(matches!(
            eval_snp(&f, &clique(5)),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn constant_false_clause() {
        let f = parse_snp("snp no { input { E/2 } clause NOT( ) }").unwrap();
        assert!(!eval_snp(&f, &digraph(0, &[])).unwrap());
    }
}
