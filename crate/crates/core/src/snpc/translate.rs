use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fpdecide::{Pattern, PatternFamily};
use crate::relcore::{next_tuple, CoverMode, HomKind, Lift, PartialConstraints, Signature, Structure};

use super::formula::{Clause, SnpFormula};
use super::normalize::{primitivize, primitivize_mentioned, saturate_inequalities, uniformize_arity, PRIMITIVIZE_LIMIT};

/// Forbidden lifts for a monotone formula without inequalities: one lift
/// symbol per subset of proof symbols, one pattern per clause, plain matching.
pub fn to_lifts_general(phi: &SnpFormula) -> Result<PatternFamily> {
    let r = phi.restrictions();
    if !r.monotone || !r.no_inequality {
        return Err(Error::RestrictionViolation(
            "general lifts need a monotone formula without inequalities".into(),
        ));
    }
    let phi = primitivize_mentioned(&uniformize_arity(phi), PRIMITIVIZE_LIMIT)?;
    build_family(&phi, HomKind::Plain)
}

/// Forbidden lifts under injective matching for a monotone monadic formula;
/// inequalities are absorbed by injectivity.
pub fn to_lifts_injective(phi: &SnpFormula) -> Result<PatternFamily> {
    let r = phi.restrictions();
    if !r.monotone || !r.monadic {
        return Err(Error::RestrictionViolation(
            "injective lifts need a monotone monadic formula".into(),
        ));
    }
    let phi = saturate_inequalities(&primitivize_mentioned(phi, PRIMITIVIZE_LIMIT)?);
    build_family(&phi, HomKind::Injective)
}

/// Forbidden lifts under full matching for a monadic formula without
/// inequalities; negated input atoms become binding non-tuples and input
/// tuples the clause does not mention are marked free.
pub fn to_lifts_full(phi: &SnpFormula) -> Result<PatternFamily> {
    let r = phi.restrictions();
    if !r.monadic || !r.no_inequality {
        return Err(Error::RestrictionViolation(
            "full lifts need a monadic formula without inequalities".into(),
        ));
    }
    let phi = primitivize(phi)?;
    build_family(&phi, HomKind::Full)
}

/// Name of the lift symbol for a subset of proof symbols.
fn subset_name(phi: &SnpFormula, mask: usize) -> String {
    let mut name = String::from("U");
    for (i, p) in phi.proof.iter().enumerate() {
        if mask >> i & 1 == 1 {
            name.push('_');
            name.push_str(&p.name);
        }
    }
    if mask == 0 {
        name.push('0');
    }
    while phi.input.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Lifted signature with `2^|proof|` symbols of the common proof arity.
pub fn subset_signature(phi: &SnpFormula) -> Result<Arc<Signature>> {
    let arity = phi.max_proof_arity().max(1);
    let lift: Vec<(String, usize)> = (0..1usize << phi.proof.len())
        .map(|m| (subset_name(phi, m), arity))
        .collect();
    Ok(Arc::new(phi.input.extend_lift(&lift)?))
}

fn build_family(phi: &SnpFormula, kind: HomKind) -> Result<PatternFamily> {
    let sig = subset_signature(phi)?;
    let mut fam = PatternFamily::new(sig.clone(), kind)?;
    for (i, c) in phi.clauses.iter().enumerate() {
        if c.is_vacuous() {
            continue;
        }
        let (s, complete) = clause_pattern(phi, c, &sig)?;
        let cover = if complete {
            CoverMode::Partition
        } else {
            CoverMode::None
        };
        let mut p = Pattern::new(format!("c{i}"), Lift::new(s, cover)?);
        if kind == HomKind::Full {
            let free = unmentioned_input_tuples(phi, c);
            if !free.is_empty() {
                p.constraints = Some(PartialConstraints {
                    free,
                    ..PartialConstraints::default()
                });
            }
        }
        fam.push(p)?;
    }
    Ok(fam)
}

/// The pattern of one clause and whether every lift tuple got a color.
fn clause_pattern(phi: &SnpFormula, c: &Clause, sig: &Arc<Signature>) -> Result<(Structure, bool)> {
    let n = c.vars.len();
    let mut s = Structure::new(sig.clone(), n).with_names(c.vars.clone())?;
    for a in c.alpha.iter().filter(|a| a.positive) {
        s.add_tuple(a.sym, a.args.clone())?;
    }
    let base = phi.input.len();
    let arity = phi.max_proof_arity().max(1);
    let mut complete = true;
    if n == 0 {
        return Ok((s, true));
    }
    let mut t = vec![0; arity];
    loop {
        let atoms: Vec<_> = c.beta.iter().filter(|b| b.args == t).collect();
        let decided = (0..phi.proof.len()).all(|p| atoms.iter().any(|b| b.sym == p));
        if decided {
            let mask = atoms
                .iter()
                .filter(|b| b.positive)
                .fold(0usize, |m, b| m | 1 << b.sym);
            s.add_tuple(base + mask, t.clone())?;
        } else {
            complete = false;
        }
        if !next_tuple(&mut t, n) {
            break;
        }
    }
    Ok((s, complete))
}

fn unmentioned_input_tuples(phi: &SnpFormula, c: &Clause) -> std::collections::BTreeSet<(usize, Vec<usize>)> {
    let mut free = std::collections::BTreeSet::new();
    let n = c.vars.len();
    if n == 0 {
        return free;
    }
    for sym in 0..phi.input.len() {
        let mut t = vec![0; phi.input.arity(sym)];
        loop {
            if !c.alpha.iter().any(|a| a.sym == sym && a.args == t) {
                free.insert((sym, t.clone()));
            }
            if !next_tuple(&mut t, n) {
                break;
            }
        }
    }
    free
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snpc::parse_snp;

    #[test]
    fn single_clause_general() {
        let f = parse_snp("snp f { input { E/2 } proof { P/1 } clause NOT( E(x,y) & P(x) & !P(y) ) }")
            .unwrap();
        let fam = to_lifts_general(&f).unwrap();
        assert_eq!(fam.patterns.len(), 1);
        let s = fam.patterns[0].carrier();
        assert_eq!(s.signature().symbol(1).name, "U0");
        assert_eq!(s.signature().symbol(2).name, "U_P");
        assert!(s.contains(0, &[0, 1]));
        assert!(s.contains(2, &[0]));
        assert!(s.contains(1, &[1]));
    }

    #[test]
    fn restrictions_are_enforced() {
        let f = parse_snp("snp f { input { E/2 } clause NOT( E(x,y) & x != y ) }").unwrap();
        assert!(matches!(to_lifts_general(&f), Err(Error::RestrictionViolation(_))));
        assert!(to_lifts_injective(&f).is_ok());
        let g = parse_snp("snp g { input { E/2 } proof { P/2 } clause NOT( P(x,y) ) }").unwrap();
        assert!(to_lifts_full(&g).is_err());
    }

    #[test]
    fn no_clauses_gives_empty_family() {
        let f = parse_snp("snp f { input { E/2 } proof { P/1 } }").unwrap();
        assert!(to_lifts_general(&f).unwrap().patterns.is_empty());
        assert!(to_lifts_full(&f).unwrap().patterns.is_empty());
    }

    #[test]
    fn full_marks_unmentioned_tuples_free() {
        let f = parse_snp("snp f { input { E/2 } proof { P/1 } clause NOT( !E(x,y) & P(x) ) }").unwrap();
        let fam = to_lifts_full(&f).unwrap();
        let c = fam.patterns[0].constraints.as_ref().unwrap();
        assert!(!c.free.contains(&(0, vec![0, 1])));
        assert!(c.free.contains(&(0, vec![1, 0])));
        assert_eq!(fam.patterns[0].carrier().tuple_count(), 2);
    }
}
