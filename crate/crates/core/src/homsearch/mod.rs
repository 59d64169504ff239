//! Homomorphism existence and enumeration, cores and homomorphic images.

mod search;

use std::collections::HashSet;

pub use search::HomSearch;

use crate::canon::canonical_key;
use crate::error::{guard, Result};
use crate::relcore::{HomMode, Homomorphism, Structure};

/// A homomorphism `a -> b` in the given mode, if one exists. The witness is
/// deterministic for fixed inputs.
pub fn hom_exists(a: &Structure, b: &Structure, mode: &HomMode) -> Result<Option<Homomorphism>> {
    let s = HomSearch::new(a, b, mode)?;
    Ok(s.find().map(|m| Homomorphism::new(m, mode.clone())))
}

/// Plain-mode shorthand for [`hom_exists`].
pub fn maps_to(a: &Structure, b: &Structure) -> bool {
    HomSearch::new(a, b, &HomMode::PLAIN)
        .map(|s| s.find().is_some())
        .unwrap_or(false)
}

/// Every homomorphism in lexicographic map order.
pub fn all_homs(a: &Structure, b: &Structure, mode: &HomMode) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    for_each_hom(a, b, mode, |m| {
        out.push(Homomorphism::new(m.to_vec(), mode.clone()));
        true
    })?;
    Ok(out)
}

/// Stream homomorphisms in lexicographic order; `visit` returns `false` to
/// stop early.
pub fn for_each_hom<F>(a: &Structure, b: &Structure, mode: &HomMode, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> bool,
{
    let s = HomSearch::new(a, b, mode)?;
    s.run(true, &mut visit);
    Ok(())
}

/// An endomorphism of `a` avoiding element `v`, if any.
fn retraction_avoiding(a: &Structure, v: usize) -> Option<Vec<usize>> {
    let mut s = HomSearch::new(a, a, &HomMode::PLAIN).expect("same signature");
    s.forbid_value(v);
    s.find()
}

/// The core of `a` as an induced substructure, together with the kept
/// elements (in increasing order) and a retraction `a -> core` expressed in
/// core indices.
pub fn core_with_retraction(a: &Structure) -> (Structure, Vec<usize>, Vec<usize>) {
    let mut keep: Vec<usize> = (0..a.size()).collect();
    let mut cur = a.clone();
    // retract[x] = element of `cur` that x currently maps to
    let mut retract: Vec<usize> = (0..a.size()).collect();
    'outer: loop {
        let mut order: Vec<usize> = (0..cur.size()).collect();
        let deg = degrees(&cur);
        order.sort_by_key(|&v| (deg[v], v));
        for v in order {
            if let Some(f) = retraction_avoiding(&cur, v) {
                let mut image: Vec<usize> = f.clone();
                image.sort_unstable();
                image.dedup();
                let mut pos = vec![usize::MAX; cur.size()];
                for (i, &y) in image.iter().enumerate() {
                    pos[y] = i;
                }
                for r in retract.iter_mut() {
                    *r = pos[f[*r]];
                }
                keep = image.iter().map(|&y| keep[y]).collect();
                cur = cur.induced(&image);
                continue 'outer;
            }
        }
        break;
    }
    (cur, keep, retract)
}

fn degrees(s: &Structure) -> Vec<usize> {
    let mut d = vec![0; s.size()];
    for (_, t) in s.tuples() {
        for &c in t {
            d[c] += 1;
        }
    }
    d
}

/// The core of `a`, an induced substructure hom-equivalent to `a`.
pub fn core_of(a: &Structure) -> Structure {
    core_with_retraction(a).0
}

/// Whether every endomorphism of `a` is bijective.
pub fn is_core(a: &Structure) -> bool {
    (0..a.size()).all(|v| retraction_avoiding(a, v).is_none())
}

/// Plain homomorphisms in both directions.
pub fn hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(hom_exists(a, b, &HomMode::PLAIN)?.is_some() && hom_exists(b, a, &HomMode::PLAIN)?.is_some())
}

/// Default bound on the number of set partitions explored by [`hom_images`].
pub const IMAGE_LIMIT: u128 = 1 << 20;

/// All surjective homomorphic images of `a` up to isomorphism, `a` first.
pub fn hom_images(a: &Structure) -> Result<Vec<Structure>> {
    hom_images_with_limit(a, IMAGE_LIMIT)
}

pub fn hom_images_with_limit(a: &Structure, limit: u128) -> Result<Vec<Structure>> {
    guard("set partitions of the universe", bell(a.size()), limit)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for_each_partition(a.size(), &mut |blocks, k| {
        let img = a.image(blocks, k);
        if seen.insert(canonical_key(&img)) {
            out.push(img);
        }
    });
    Ok(out)
}

/// Bell number, saturating.
pub(crate) fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let x = next.last().expect("nonempty").saturating_add(*v);
            next.push(x);
        }
        row = next;
    }
    row[0]
}

/// Visit every set partition of `0..n` as a restricted growth string, the
/// identity partition first.
pub fn for_each_partition(n: usize, visit: &mut dyn FnMut(&[usize], usize)) {
    let mut rgs = vec![0usize; n];
    fn go(i: usize, k: usize, rgs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize], usize)) {
        if i == rgs.len() {
            visit(rgs, k);
            return;
        }
        // New block first so the discrete partition comes out first.
        rgs[i] = k;
        go(i + 1, k + 1, rgs, visit);
        for b in 0..k {
            rgs[i] = b;
            go(i + 1, k, rgs, visit);
        }
    }
    go(0, 0, &mut rgs, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::relcore::build;

    #[test]
    fn small_cases() {
        let k2 = build::clique(2);
        let k3 = build::clique(3);
        assert!(hom_exists(&k2, &k3, &HomMode::PLAIN).unwrap().is_some());
        assert!(hom_exists(&k3, &k2, &HomMode::PLAIN).unwrap().is_none());
        assert!(hom_exists(&build::directed_path(2), &build::directed_path(1), &HomMode::PLAIN)
            .unwrap()
            .is_none());
        let c4 = build::cycle(4);
        let f = hom_exists(&c4, &k2, &HomMode::FULL).unwrap().unwrap();
        f.validate(&c4, &k2).unwrap();
        let lp = build::loop_point();
        assert!(hom_exists(&k2, &lp, &HomMode::INJECTIVE).unwrap().is_none());
        assert!(hom_exists(&k2, &lp, &HomMode::PLAIN).unwrap().is_some());
        assert_eq!(all_homs(&k3, &k3, &HomMode::PLAIN).unwrap().len(), 6);
    }

    #[test]
    fn cores() {
        assert!(is_isomorphic(&core_of(&build::cycle(4)), &build::clique(2)));
        assert!(is_core(&build::clique(3)));
        assert!(!is_core(&build::cycle(4)));
        let (c, keep, r) = core_with_retraction(&build::cycle(6));
        assert_eq!(c.size(), 2);
        assert_eq!(keep.len(), 2);
        assert!(crate::relcore::is_hom(&build::cycle(6), &c, &r, &HomMode::PLAIN));
    }

    #[test]
    fn images() {
        assert_eq!(hom_images(&build::clique(2)).unwrap().len(), 2);
        assert_eq!(bell(4), 15);
        let mut count = 0;
        for_each_partition(4, &mut |_, _| count += 1);
        assert_eq!(count, 15);
    }
}
