use std::collections::BTreeSet;
use std::fmt;

use super::structure::{Structure, Tuple};
use crate::error::{Error, Result};

/// The three homomorphism categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomKind {
    Plain,
    Injective,
    Full,
}

impl HomKind {
    pub fn as_str(self) -> &'static str {
        match self {
            HomKind::Plain => "plain",
            HomKind::Injective => "injective",
            HomKind::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<HomKind> {
        match s {
            "plain" => Some(HomKind::Plain),
            "injective" => Some(HomKind::Injective),
            "full" => Some(HomKind::Full),
            _ => None,
        }
    }
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Weakened injectivity / fullness requirements on the source structure.
///
/// With [`HomKind::Injective`], only the listed `distinct` pairs must be kept
/// apart. With [`HomKind::Full`], the listed `free` tuples (absent from the
/// source) may or may not land on target tuples.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialConstraints {
    pub distinct: BTreeSet<(usize, usize)>,
    pub free: BTreeSet<(usize, Tuple)>,
}

impl PartialConstraints {
    pub fn is_empty(&self) -> bool {
        self.distinct.is_empty() && self.free.is_empty()
    }

    pub fn add_distinct(&mut self, a: usize, b: usize) {
        if a != b {
            self.distinct.insert((a.min(b), a.max(b)));
        }
    }

    pub fn is_free(&self, sym: usize, t: &[usize]) -> bool {
        // BTreeSet<(usize, Vec)> cannot be probed with a borrowed slice.
        self.free.contains(&(sym, t.to_vec()))
    }

    /// Relabel under an element renumbering (`pos[old] = new`).
    pub fn renumber(&self, pos: &[usize]) -> PartialConstraints {
        let mut out = PartialConstraints::default();
        for &(a, b) in &self.distinct {
            out.add_distinct(pos[a], pos[b]);
        }
        for (s, t) in &self.free {
            out.free.insert((*s, t.iter().map(|&c| pos[c]).collect()));
        }
        out
    }
}

/// A homomorphism category, optionally weakened by partial constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomMode {
    pub kind: HomKind,
    pub partial: Option<PartialConstraints>,
}

impl HomMode {
    pub const PLAIN: HomMode = HomMode {
        kind: HomKind::Plain,
        partial: None,
    };
    pub const INJECTIVE: HomMode = HomMode {
        kind: HomKind::Injective,
        partial: None,
    };
    pub const FULL: HomMode = HomMode {
        kind: HomKind::Full,
        partial: None,
    };

    pub fn new(kind: HomKind) -> Self {
        HomMode {
            kind,
            partial: None,
        }
    }

    pub fn with_partial(kind: HomKind, partial: PartialConstraints) -> Self {
        HomMode {
            kind,
            partial: Some(partial),
        }
    }

    /// Whether elements `a` and `b` of the source must have distinct images.
    pub fn must_separate(&self, a: usize, b: usize) -> bool {
        if a == b || self.kind != HomKind::Injective {
            return false;
        }
        match &self.partial {
            None => true,
            Some(p) => p.distinct.contains(&(a.min(b), a.max(b))),
        }
    }

    /// Whether a non-tuple of the source is exempt from the fullness check.
    pub fn is_free(&self, sym: usize, t: &[usize]) -> bool {
        match &self.partial {
            Some(p) if self.kind == HomKind::Full => p.is_free(sym, t),
            _ => false,
        }
    }
}

impl From<HomKind> for HomMode {
    fn from(kind: HomKind) -> Self {
        HomMode::new(kind)
    }
}

/// A map between universes, tagged with the category it was found in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub map: Vec<usize>,
    pub mode: HomMode,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>, mode: HomMode) -> Self {
        Homomorphism { map, mode }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Recheck this map against `a` and `b` from scratch.
    pub fn validate(&self, a: &Structure, b: &Structure) -> Result<()> {
        check_hom(a, b, &self.map, &self.mode)
    }
}

/// Independent validity check of `map: a -> b` in the given mode.
pub fn check_hom(a: &Structure, b: &Structure, map: &[usize], mode: &HomMode) -> Result<()> {
    a.check_same_signature(b)?;
    if map.len() != a.size() {
        return Err(Error::NotAHomomorphism(format!(
            "map has {} entries for {} elements",
            map.len(),
            a.size()
        )));
    }
    if let Some(&x) = map.iter().find(|&&x| x >= b.size()) {
        return Err(Error::NotAHomomorphism(format!(
            "image {x} outside target of size {}",
            b.size()
        )));
    }
    for (sym, t) in a.tuples() {
        let img: Tuple = t.iter().map(|&c| map[c]).collect();
        if !b.contains(sym, &img) {
            return Err(Error::NotAHomomorphism(format!(
                "{}{:?} maps to non-tuple {:?}",
                a.signature().symbol(sym).name,
                t,
                img
            )));
        }
    }
    if mode.kind == HomKind::Injective {
        for x in 0..map.len() {
            for y in x + 1..map.len() {
                if map[x] == map[y] && mode.must_separate(x, y) {
                    return Err(Error::NotAHomomorphism(format!(
                        "elements {x} and {y} both map to {}",
                        map[x]
                    )));
                }
            }
        }
    }
    if mode.kind == HomKind::Full {
        let mut fibers = vec![Vec::new(); b.size()];
        for (x, &y) in map.iter().enumerate() {
            fibers[y].push(x);
        }
        for (sym, t) in b.tuples() {
            let mut pre = Vec::with_capacity(t.len());
            if let Some(bad) = find_unfull_preimage(a, mode, sym, t, &fibers, &mut pre) {
                return Err(Error::NotAHomomorphism(format!(
                    "non-tuple {}{:?} maps to tuple {:?}",
                    a.signature().symbol(sym).name,
                    bad,
                    t
                )));
            }
        }
    }
    Ok(())
}

fn find_unfull_preimage(
    a: &Structure,
    mode: &HomMode,
    sym: usize,
    t: &[usize],
    fibers: &[Vec<usize>],
    pre: &mut Vec<usize>,
) -> Option<Tuple> {
    if pre.len() == t.len() {
        if !a.contains(sym, pre) && !mode.is_free(sym, pre) {
            return Some(pre.clone());
        }
        return None;
    }
    for &x in &fibers[t[pre.len()]] {
        pre.push(x);
        let r = find_unfull_preimage(a, mode, sym, t, fibers, pre);
        pre.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

pub fn is_hom(a: &Structure, b: &Structure, map: &[usize], mode: &HomMode) -> bool {
    check_hom(a, b, map, mode).is_ok()
}

/// Composition `g ∘ f`.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::Signature;

    #[test]
    fn full_check_sees_collapsed_non_tuples() {
        let sig = Signature::digraph();
        let c4 = Structure::from_named(
            sig.clone(),
            4,
            "E",
            vec![
                vec![0, 1],
                vec![1, 0],
                vec![1, 2],
                vec![2, 1],
                vec![2, 3],
                vec![3, 2],
                vec![3, 0],
                vec![0, 3],
            ],
        )
        .unwrap();
        let k2 = Structure::from_named(sig, 2, "E", vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(is_hom(&c4, &k2, &[0, 1, 0, 1], &HomMode::FULL));
        assert!(!is_hom(&k2, &k2, &[0, 0], &HomMode::PLAIN));
    }

    #[test]
    fn partial_injectivity() {
        let sig = Signature::digraph();
        let a = Structure::new(sig.clone(), 3);
        let b = Structure::new(sig, 2);
        let mut p = PartialConstraints::default();
        p.add_distinct(0, 1);
        let mode = HomMode::with_partial(HomKind::Injective, p);
        assert!(is_hom(&a, &b, &[0, 1, 1], &mode));
        assert!(!is_hom(&a, &b, &[0, 0, 1], &mode));
        assert!(!is_hom(&a, &b, &[0, 1, 1], &HomMode::INJECTIVE));
    }
}
