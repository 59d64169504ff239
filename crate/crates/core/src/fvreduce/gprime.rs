use std::collections::HashSet;

use crate::canon::canonical_key;
use crate::error::{guard, Error, Result};
use crate::fpdecide::{minimal_members, Pattern, PatternFamily};
use crate::homsearch::for_each_partition;
use crate::relcore::{CoverMode, HomKind, Lift, Structure, Tuple};
use crate::shape::is_forest;

use super::basis::Basis;

/// Default cap on search nodes and on candidate members while building G′.
pub const GPRIME_LIMIT: u128 = 1 << 20;

/// A coordinate of a covering block tuple: an element of the pattern image
/// or a fresh element used by this tuple only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    Image(usize),
    Fresh,
}

/// One block tuple placed over a pattern image, and the image tuples whose
/// coordinates it produces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Cover {
    block: usize,
    slots: Vec<Slot>,
    covers: Vec<usize>,
}

/// Colored forests over the block signature from which some pattern maps
/// into the block images: for every color-respecting image Q of a pattern,
/// each tuple of Q is produced by a block tuple whose other coordinates are
/// elements of Q or private fresh elements. Members that are not forests
/// are dropped, then only hom-minimal members are kept.
pub fn build_gprime(fam: &PatternFamily, basis: &Basis) -> Result<PatternFamily> {
    build_gprime_with_limit(fam, basis, GPRIME_LIMIT)
}

pub fn build_gprime_with_limit(fam: &PatternFamily, basis: &Basis, limit: u128) -> Result<PatternFamily> {
    if !fam.is_monadic() || fam.kind != HomKind::Plain {
        return Err(Error::Precondition(
            "the reduction needs a monadic family with plain matching".into(),
        ));
    }
    let colors = fam.colors();
    let color_names: Vec<String> = colors
        .iter()
        .map(|&c| fam.signature.symbol(c).name.clone())
        .collect();
    let sig = basis.lifted_signature(&color_names)?;
    let mut seen = HashSet::new();
    let mut members: Vec<Structure> = Vec::new();
    let mut nodes: u128 = 0;
    for p in &fam.patterns {
        let s = p.carrier();
        let elem_colors: Vec<Vec<usize>> = (0..s.size())
            .map(|x| {
                (0..colors.len())
                    .filter(|&i| s.contains(colors[i], &[x]))
                    .collect()
            })
            .collect();
        let shadow = s.restrict_to(basis.input.clone());
        let mut failure = None;
        for_each_partition(s.size(), &mut |classes, k| {
            if failure.is_some() {
                return;
            }
            let mut qcolors: Vec<Option<&Vec<usize>>> = vec![None; k];
            for (x, &c) in classes.iter().enumerate() {
                if elem_colors[x].is_empty() {
                    continue;
                }
                match qcolors[c] {
                    None => qcolors[c] = Some(&elem_colors[x]),
                    Some(prev) if prev == &elem_colors[x] => {}
                    Some(_) => return,
                }
            }
            let q = shadow.image(classes, k);
            let mut search = CoverSearch::new(basis, &q);
            let mut found = Vec::new();
            let mut chosen = Vec::new();
            let mut covered = vec![0usize; search.targets.len()];
            if let Err(e) = search.run(&mut chosen, &mut covered, &mut found, &mut nodes, limit) {
                failure = Some(e);
                return;
            }
            for tuples in found {
                let g = assemble(&sig, k, &qcolors, &tuples);
                if seen.insert(canonical_key(&g)) {
                    members.push(g);
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        guard("G′ candidates", members.len() as u128, limit)?;
    }
    members.sort_by_cached_key(|g| (g.size(), g.tuple_count(), canonical_key(g)));
    let minimal = minimal_members(members);
    let mut out = PatternFamily::new(sig, HomKind::Plain)?;
    for (i, g) in minimal.into_iter().enumerate() {
        out.push(Pattern::new(format!("g{i}"), Lift::new_unchecked(g, CoverMode::None)))?;
    }
    Ok(out)
}

/// The colored block structure on `k` image elements plus fresh ones.
fn assemble(
    sig: &std::sync::Arc<crate::relcore::Signature>,
    k: usize,
    qcolors: &[Option<&Vec<usize>>],
    tuples: &[(usize, Vec<Slot>)],
) -> Structure {
    let fresh: usize = tuples
        .iter()
        .map(|(_, s)| s.iter().filter(|x| **x == Slot::Fresh).count())
        .sum();
    let mut g = Structure::new(sig.clone(), k + fresh);
    let mut next = k;
    for (block, slots) in tuples {
        let t: Tuple = slots
            .iter()
            .map(|s| match s {
                Slot::Image(x) => *x,
                Slot::Fresh => {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        g.add_tuple(*block, t).expect("block tuple");
    }
    let offset = sig.len() - sig.lift_indices().len();
    for (x, c) in qcolors.iter().enumerate() {
        for &ci in c.iter().flat_map(|v| v.iter()) {
            g.add_tuple(offset + ci, vec![x]).expect("color tuple");
        }
    }
    g
}

struct CoverSearch<'a> {
    basis: &'a Basis,
    k: usize,
    /// Tuples of the pattern image, as (symbol, tuple).
    targets: Vec<(usize, Tuple)>,
    /// Covers available for each target, computed lazily.
    options: Vec<Option<Vec<Cover>>>,
}

impl<'a> CoverSearch<'a> {
    fn new(basis: &'a Basis, q: &Structure) -> Self {
        let targets: Vec<(usize, Tuple)> = q.tuples().map(|(s, t)| (s, t.clone())).collect();
        CoverSearch {
            basis,
            k: q.size(),
            options: vec![None; targets.len()],
            targets,
        }
    }

    /// Every placement of a block tuple onto target `i`.
    fn covers_of(&self, i: usize) -> Vec<Cover> {
        let (sym, ref t) = self.targets[i];
        let mut out = Vec::new();
        for (bi, block) in self.basis.blocks.iter().enumerate() {
            for bt in block.relation(sym) {
                let mut fixed: Vec<Option<usize>> = vec![None; block.size()];
                let consistent = bt.iter().zip(t).all(|(&x, &y)| match fixed[x] {
                    None => {
                        fixed[x] = Some(y);
                        true
                    }
                    Some(z) => z == y,
                });
                if !consistent {
                    continue;
                }
                let open: Vec<usize> = (0..block.size()).filter(|&x| fixed[x].is_none()).collect();
                // Each open element goes to an image element or to a fresh one.
                let mut choice = vec![0usize; open.len()];
                loop {
                    let slots: Vec<Slot> = (0..block.size())
                        .map(|x| match fixed[x] {
                            Some(y) => Slot::Image(y),
                            None => {
                                let c = choice[open.iter().position(|&o| o == x).expect("open")];
                                if c == self.k {
                                    Slot::Fresh
                                } else {
                                    Slot::Image(c)
                                }
                            }
                        })
                        .collect();
                    let images: Vec<usize> = slots
                        .iter()
                        .filter_map(|s| match s {
                            Slot::Image(x) => Some(*x),
                            Slot::Fresh => None,
                        })
                        .collect();
                    let distinct: HashSet<usize> = images.iter().copied().collect();
                    // A repeated coordinate is a cycle of length one.
                    if distinct.len() == images.len() {
                        let covers = self.produced(bi, &slots);
                        out.push(Cover {
                            block: bi,
                            slots,
                            covers,
                        });
                    }
                    let mut j = 0;
                    while j < choice.len() {
                        choice[j] += 1;
                        if choice[j] <= self.k {
                            break;
                        }
                        choice[j] = 0;
                        j += 1;
                    }
                    if j == choice.len() {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Targets produced by the block placed along `slots`.
    fn produced(&self, block: usize, slots: &[Slot]) -> Vec<usize> {
        let mut out = Vec::new();
        for (sym, bt) in self.basis.blocks[block].tuples() {
            let img: Option<Tuple> = bt
                .iter()
                .map(|&x| match slots[x] {
                    Slot::Image(y) => Some(y),
                    Slot::Fresh => None,
                })
                .collect();
            if let Some(img) = img {
                if let Some(i) = self.targets.iter().position(|(s, t)| *s == sym && *t == img) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn run(
        &mut self,
        chosen: &mut Vec<Cover>,
        covered: &mut Vec<usize>,
        found: &mut Vec<Vec<(usize, Vec<Slot>)>>,
        nodes: &mut u128,
        limit: u128,
    ) -> Result<()> {
        *nodes += 1;
        guard("G′ search nodes", *nodes, limit)?;
        let Some(next) = covered.iter().position(|&c| c == 0) else {
            found.push(chosen.iter().map(|c| (c.block, c.slots.clone())).collect());
            return Ok(());
        };
        if self.options[next].is_none() {
            self.options[next] = Some(self.covers_of(next));
        }
        let options = self.options[next].clone().expect("computed");
        for cover in options {
            if chosen.contains(&cover) {
                continue;
            }
            chosen.push(cover);
            if self.forest(chosen) {
                for &i in &chosen.last().expect("pushed").covers {
                    covered[i] += 1;
                }
                self.run(chosen, covered, found, nodes, limit)?;
                for &i in &chosen.last().expect("pushed").covers {
                    covered[i] -= 1;
                }
            }
            chosen.pop();
        }
        Ok(())
    }

    /// Whether the chosen block tuples form a forest; fresh elements are
    /// leaves, so only image elements can close a cycle.
    fn forest(&self, chosen: &[Cover]) -> bool {
        let mut parent: Vec<usize> = (0..self.k + chosen.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (i, c) in chosen.iter().enumerate() {
            let node = self.k + i;
            for s in &c.slots {
                if let Slot::Image(x) = s {
                    let (a, b) = (find(&mut parent, *x), find(&mut parent, node));
                    if a == b {
                        return false;
                    }
                    parent[a] = b;
                }
            }
        }
        true
    }
}

/// Every member is a forest over the block signature.
pub fn check_forests(g: &PatternFamily) -> bool {
    g.patterns.iter().all(|p| is_forest(p.carrier()))
}
