use std::sync::Arc;

use super::hom::{check_hom, HomMode};
use super::lift::{CoverMode, Lift};
use super::signature::Signature;
use super::structure::{Structure, Tuple};
use crate::error::{Error, Result};

/// Pull the lift relations of `b` back along a homomorphism
/// `f: a -> shadow(b)`.
pub fn pullback_lift(a: &Structure, f: &[usize], b: &Lift) -> Result<Lift> {
    let sh = b.shadow();
    if a.signature() != sh.signature() {
        return Err(Error::SignatureMismatch(format!(
            "source over {} but the lift's shadow is over {}",
            a.signature(),
            sh.signature()
        )));
    }
    check_hom(a, &sh, f, &HomMode::PLAIN)?;
    let full: Arc<Signature> = b.carrier().sig_arc().clone();
    let mut out = a.restrict_to(full.clone());
    let mut fibers = vec![Vec::new(); b.size()];
    for (x, &y) in f.iter().enumerate() {
        fibers[y].push(x);
    }
    for s in full.lift_indices() {
        for t in b.carrier().relation(s) {
            for pre in fiber_product(&fibers, t) {
                out.add_tuple(s, pre)?;
            }
        }
    }
    Ok(Lift::new_unchecked(out, b.cover_mode()))
}

/// All tuples `u` with `u[i]` in `fibers[t[i]]`.
pub(crate) fn fiber_product(fibers: &[Vec<usize>], t: &[usize]) -> Vec<Tuple> {
    let mut out = vec![Vec::with_capacity(t.len())];
    for &c in t {
        let mut next = Vec::new();
        for p in &out {
            for &x in &fibers[c] {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Categorical product; element `(x, y)` is numbered `x * |b| + y`.
pub fn product(a: &Structure, b: &Structure) -> Result<Structure> {
    a.check_same_signature(b)?;
    let nb = b.size();
    let mut out = Structure::new(a.sig_arc().clone(), a.size() * nb);
    for s in 0..a.signature().len() {
        for t in a.relation(s) {
            for u in b.relation(s) {
                let p: Tuple = t.iter().zip(u).map(|(&x, &y)| x * nb + y).collect();
                out.add_tuple(s, p)?;
            }
        }
    }
    Ok(out)
}

/// Side-by-side union; elements of `b` are shifted by `|a|`.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure> {
    a.check_same_signature(b)?;
    let shift = a.size();
    let mut out = a.clone().without_names();
    out.grow(b.size());
    for (s, t) in b.tuples() {
        out.add_tuple(s, t.iter().map(|&c| c + shift).collect())?;
    }
    if let (Some(na), Some(nb)) = (a.names(), b.names()) {
        let mut names: Vec<String> = na.iter().map(|n| format!("l_{n}")).collect();
        names.extend(nb.iter().map(|n| format!("r_{n}")));
        out = out.with_names(names)?;
    }
    Ok(out)
}

/// Disjoint union of lifts. Cover metadata survives only when every tuple of
/// the union lies inside one side, i.e. for unary lifts or an empty side.
pub fn disjoint_union_lifts(a: &Lift, b: &Lift) -> Result<Lift> {
    let carrier = disjoint_union(a.carrier(), b.carrier())?;
    let cover = if a.lift_arity() == 1 || a.size() == 0 || b.size() == 0 {
        a.cover_mode().min(b.cover_mode())
    } else {
        CoverMode::None
    };
    Ok(Lift::new_unchecked(carrier, cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::build;

    #[test]
    fn product_of_edges_is_two_edges() {
        let k2 = build::clique(2);
        let p = product(&k2, &k2).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.tuple_count(), 4);
        assert!(p.contains(0, &[0, 3]));
        assert!(p.contains(0, &[1, 2]));
    }

    #[test]
    fn pullback_along_edge() {
        let k3 = build::clique(3);
        let lift = build::vertex_colored(&k3, 3, &[vec![0], vec![1], vec![2]], CoverMode::Partition)
            .unwrap();
        let k2 = build::clique(2);
        let a = pullback_lift(&k2, &[0, 1], &lift).unwrap();
        let c0 = a.signature().index_of("C1").unwrap();
        let c1 = a.signature().index_of("C2").unwrap();
        assert!(a.carrier().contains(c0, &[0]));
        assert!(a.carrier().contains(c1, &[1]));
        assert_eq!(a.carrier().tuple_count(), 4);
        assert!(pullback_lift(&k3, &[0, 0, 1], &lift).is_err());
    }
}
