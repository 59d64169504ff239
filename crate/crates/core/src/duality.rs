//! Finite dualities for forest obstructions.
//!
//! The dual of a tree `T` has one element for every choice function `f`
//! picking, for each element `x` of `T`, a tuple of `T` through `x`. A tuple
//! `(f_1, ..., f_m)` lies in `R(D)` unless some `e = (u_1, ..., u_m)` in
//! `R(T)` is chosen at every position, i.e. `f_i(u_i) = e` for all `i`.

use std::sync::Arc;

use crate::enumerate::{for_each_up_to, LABELED_LIMIT};
use crate::error::{guard, Error, Result};
use crate::homsearch::{core_of, maps_to};
use crate::relcore::{next_tuple, product, Signature, Structure};
use crate::shape::{component_sets, is_connected, is_forest, shortest_cycle};

/// Default cap on the universe of an unreduced tree dual.
pub const DUAL_SIZE_LIMIT: u128 = 1 << 16;

/// Default cap on candidate tuples examined while building a dual.
pub const DUAL_TUPLE_LIMIT: u128 = 1 << 24;

/// A finite set of templates, read as the union of their CSP languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualitySet {
    pub signature: Arc<Signature>,
    pub templates: Vec<Structure>,
}

impl DualitySet {
    /// Whether `a` maps into some template.
    pub fn admits(&self, a: &Structure) -> bool {
        self.templates.iter().any(|d| maps_to(a, d))
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// The dual of a tree: `A -> D` iff `T` does not map to `A`. Core-reduced.
pub fn tree_dual(t: &Structure) -> Result<Structure> {
    tree_dual_with_limits(t, DUAL_SIZE_LIMIT, DUAL_TUPLE_LIMIT)
}

pub fn tree_dual_with_limits(t: &Structure, size_limit: u128, tuple_limit: u128) -> Result<Structure> {
    Ok(core_of(&raw_tree_dual(t, size_limit, tuple_limit)?))
}

fn raw_tree_dual(t: &Structure, size_limit: u128, tuple_limit: u128) -> Result<Structure> {
    if t.size() == 0 {
        return Err(Error::NotATree("empty universe".into()));
    }
    if !is_forest(t) {
        let c = shortest_cycle(t).map(|c| c.elements).unwrap_or_default();
        return Err(Error::NotATree(format!("contains a cycle through {c:?}")));
    }
    if !is_connected(t) {
        return Err(Error::NotATree("not connected".into()));
    }
    let sig = t.sig_arc().clone();
    let tuples: Vec<(usize, Vec<usize>)> = t.tuples().map(|(s, u)| (s, u.clone())).collect();
    // incident[x] = indices into `tuples` of the tuples through x
    let mut incident = vec![Vec::new(); t.size()];
    for (k, (_, u)) in tuples.iter().enumerate() {
        for &c in u {
            incident[c].push(k);
        }
    }
    let size = incident
        .iter()
        .map(|v| v.len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b));
    guard("tree dual universe", size, size_limit)?;
    let size = size as usize;
    // Decode element index -> choice function.
    let choice = |mut idx: usize| -> Vec<usize> {
        let mut f = vec![0; t.size()];
        for x in 0..t.size() {
            let d = incident[x].len();
            f[x] = incident[x][idx % d];
            idx /= d;
        }
        f
    };
    let funcs: Vec<Vec<usize>> = (0..size).map(choice).collect();
    let mut d = Structure::new(sig.clone(), size);
    for s in 0..sig.len() {
        let m = sig.arity(s);
        guard(
            "tree dual candidate tuples",
            (size as u128).saturating_pow(m as u32),
            tuple_limit,
        )?;
        let own: Vec<usize> = (0..tuples.len()).filter(|&k| tuples[k].0 == s).collect();
        if size == 0 {
            continue;
        }
        let mut cand = vec![0; m];
        loop {
            let blocked = own.iter().any(|&k| {
                let u = &tuples[k].1;
                (0..m).all(|i| funcs[cand[i]][u[i]] == k)
            });
            if !blocked {
                d.add_tuple(s, cand.clone())?;
            }
            if !next_tuple(&mut cand, size) {
                break;
            }
        }
    }
    Ok(d)
}

/// Templates whose CSP languages together make up `Forb(family)`.
pub fn forest_family_duals(sig: &Arc<Signature>, family: &[Structure]) -> Result<DualitySet> {
    forest_family_duals_with_limits(sig, family, DUAL_SIZE_LIMIT, DUAL_TUPLE_LIMIT)
}

pub fn forest_family_duals_with_limits(
    sig: &Arc<Signature>,
    family: &[Structure],
    size_limit: u128,
    tuple_limit: u128,
) -> Result<DualitySet> {
    for (index, f) in family.iter().enumerate() {
        if f.signature() != &**sig {
            return Err(Error::SignatureMismatch(format!(
                "obstruction {index} is over {}",
                f.signature()
            )));
        }
        if !is_forest(f) {
            let cycle = shortest_cycle(f).map(|c| c.elements).unwrap_or_default();
            return Err(Error::NotAForest { index, cycle });
        }
    }
    if family.is_empty() {
        return Ok(DualitySet {
            signature: sig.clone(),
            templates: vec![Structure::all_loops_point(sig.clone())],
        });
    }
    // For each obstruction, the duals of its components (minimal ones only).
    let mut options: Vec<Vec<Structure>> = Vec::new();
    for f in family {
        let mut duals: Vec<Structure> = Vec::new();
        for comp in component_sets(f) {
            let d = tree_dual_with_limits(&f.induced(&comp), size_limit, tuple_limit)?;
            duals.push(d);
        }
        // Choosing a smaller dual for one obstruction only shrinks the product.
        options.push(maximal_up_to_equivalence(duals));
    }
    let combos = options
        .iter()
        .map(|o| o.len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b));
    guard("dual component choices", combos, size_limit)?;
    let mut templates = Vec::new();
    if combos > 0 {
        let mut pick = vec![0usize; options.len()];
        loop {
            let mut acc = options[0][pick[0]].clone();
            for (i, &p) in pick.iter().enumerate().skip(1) {
                acc = core_of(&product(&acc, &options[i][p])?);
            }
            templates.push(core_of(&acc));
            let mut i = 0;
            loop {
                if i == pick.len() {
                    break;
                }
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    Ok(DualitySet {
        signature: sig.clone(),
        templates: maximal_up_to_equivalence(templates),
    })
}

/// Drop every structure that maps into another one; of a class of
/// hom-equivalent structures keep the first.
pub fn maximal_up_to_equivalence(items: Vec<Structure>) -> Vec<Structure> {
    let n = items.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !keep[j] || !keep[i] {
                continue;
            }
            if maps_to(&items[i], &items[j]) {
                let back = maps_to(&items[j], &items[i]);
                // Equivalent: drop the later one.
                if !back || i > j {
                    keep[i] = false;
                }
            }
        }
    }
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

/// Outcome of an exhaustive duality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityCheck {
    pub holds: bool,
    pub counterexample: Option<Structure>,
    /// Structures examined (up to isomorphism).
    pub checked: usize,
}

/// Check `Forb(family) = CSP(templates)` on all structures with at most `n`
/// elements, smallest first.
pub fn verify_duality(
    sig: &Arc<Signature>,
    family: &[Structure],
    templates: &[Structure],
    n: usize,
) -> Result<DualityCheck> {
    for s in family.iter().chain(templates) {
        if s.signature() != &**sig {
            return Err(Error::SignatureMismatch(format!(
                "{} is not {}",
                s.signature(),
                sig
            )));
        }
    }
    let mut counterexample = None;
    let mut checked = 0;
    for_each_up_to(sig, n, LABELED_LIMIT, &mut |a| {
        checked += 1;
        let forb = !family.iter().any(|f| maps_to(f, a));
        let csp = templates.iter().any(|d| maps_to(a, d));
        if forb != csp {
            counterexample = Some(a.clone());
            return false;
        }
        true
    })?;
    Ok(DualityCheck {
        holds: counterexample.is_none(),
        counterexample,
        checked,
    })
}
