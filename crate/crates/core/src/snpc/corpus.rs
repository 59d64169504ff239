use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relcore::Signature;

use super::formula::{Atom, Clause, ProofSymbol, SnpFormula};

/// Which syntactic class a generated formula should fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusClass {
    /// Monotone, no inequalities, proof arity up to 2.
    General,
    /// Monotone, monadic, with inequalities.
    Injective,
    /// Monadic, no inequalities, negated input atoms allowed.
    Full,
    /// Monadic, monotone, no inequalities.
    Mmsnp,
    /// No restriction.
    Any,
}

/// Deterministic random formulas over `{E/2}` with at most two proof symbols
/// and at most three clauses, cycling through the classes.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<SnpFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = [
        CorpusClass::General,
        CorpusClass::Injective,
        CorpusClass::Full,
        CorpusClass::Mmsnp,
        CorpusClass::Any,
    ];
    (0..count)
        .map(|i| random_formula(&mut rng, classes[i % classes.len()], format!("g{i}")))
        .collect()
}

pub fn random_formula(rng: &mut impl Rng, class: CorpusClass, name: String) -> SnpFormula {
    let input = Signature::digraph();
    let monadic = !matches!(class, CorpusClass::General | CorpusClass::Any) || rng.gen_bool(0.5);
    let negated_input = matches!(class, CorpusClass::Full | CorpusClass::Any);
    let inequalities = matches!(class, CorpusClass::Injective | CorpusClass::Any);
    let proof: Vec<ProofSymbol> = (0..rng.gen_range(0..=2))
        .map(|i| ProofSymbol {
            name: format!("P{}", i + 1),
            arity: if monadic { 1 } else { rng.gen_range(1..=2) },
        })
        .collect();
    let binary_proof = proof.iter().any(|p| p.arity == 2);
    let max_vars = if binary_proof { 2 } else { 3 };
    let clauses = (0..rng.gen_range(1..=3))
        .map(|_| random_clause(rng, &proof, max_vars, negated_input, inequalities))
        .collect();
    SnpFormula {
        name,
        input: Arc::clone(&input),
        proof,
        clauses,
    }
}

fn random_clause(
    rng: &mut impl Rng,
    proof: &[ProofSymbol],
    max_vars: usize,
    negated_input: bool,
    inequalities: bool,
) -> Clause {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let mut alpha = Vec::new();
    for _ in 0..rng.gen_range(0..=n) {
        alpha.push(Atom {
            sym: 0,
            args: vec![rng.gen_range(0..n), rng.gen_range(0..n)],
            positive: !(negated_input && rng.gen_bool(0.3)),
        });
    }
    let mut beta = Vec::new();
    if !proof.is_empty() {
        for _ in 0..rng.gen_range(0..=2) {
            let sym = rng.gen_range(0..proof.len());
            beta.push(Atom {
                sym,
                args: (0..proof[sym].arity).map(|_| rng.gen_range(0..n)).collect(),
                positive: rng.gen_bool(0.5),
            });
        }
    }
    let mut epsilon = Vec::new();
    if inequalities && n > 1 && rng.gen_bool(0.5) {
        epsilon.push((0, 1));
    }
    // Every variable must occur somewhere so that the clause prints back.
    for x in 0..n {
        let used = alpha.iter().chain(&beta).any(|a: &Atom| a.args.contains(&x))
            || epsilon.iter().any(|&(a, b)| a == x || b == x);
        if !used {
            alpha.push(Atom {
                sym: 0,
                args: vec![x, rng.gen_range(0..n)],
                positive: true,
            });
        }
    }
    let mut c = Clause {
        vars,
        alpha,
        beta,
        epsilon,
    };
    c.normalize();
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::for_each_up_to;
    use crate::snpc::{eval_snp, parse_snp};

    #[test]
    fn corpus_is_deterministic_and_classed() {
        let a = generate_corpus(0, 25);
        assert_eq!(a, generate_corpus(0, 25));
        for (i, f) in a.iter().enumerate() {
            f.validate().unwrap();
            let r = f.restrictions();
            match i % 5 {
                0 => assert!(r.monotone && r.no_inequality),
                1 => assert!(r.monotone && r.monadic),
                2 => assert!(r.monadic && r.no_inequality),
                3 => assert!(r.is_mmsnp()),
                _ => {}
            }
            assert!(f.clauses.len() <= 3 && f.proof.len() <= 2);
            let g = parse_snp(&f.to_string()).unwrap();
            assert_eq!(g.restrictions(), r);
            assert_eq!(g.clauses.len(), f.clauses.len());
            for_each_up_to(&f.input, 2, 1 << 20, &mut |a| {
                assert_eq!(eval_snp(f, a).unwrap(), eval_snp(&g, a).unwrap());
                true
            })
            .unwrap();
        }
    }
}
