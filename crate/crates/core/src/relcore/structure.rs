use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::signature::Signature;
use crate::error::{Error, Result};

pub type Tuple = Vec<usize>;

/// A finite relational structure with universe `0..size`.
///
/// Element names read from a file are kept as metadata only; equality and
/// hashing look at the signature, the size and the relations.
#[derive(Clone)]
pub struct Structure {
    sig: Arc<Signature>,
    size: usize,
    rels: Vec<BTreeSet<Tuple>>,
    names: Option<Vec<String>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.rels == other.rels && self.sig == other.sig
    }
}

impl Eq for Structure {}

impl std::hash::Hash for Structure {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.size.hash(state);
        self.rels.hash(state);
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(n={}", self.size)?;
        for (i, rel) in self.rels.iter().enumerate() {
            write!(f, ", {}={:?}", self.sig.symbol(i).name, rel)?;
        }
        write!(f, ")")
    }
}

impl Structure {
    /// A structure with `size` elements and all relations empty.
    pub fn new(sig: Arc<Signature>, size: usize) -> Self {
        let rels = vec![BTreeSet::new(); sig.len()];
        Structure {
            sig,
            size,
            rels,
            names: None,
        }
    }

    /// The structure on zero elements.
    pub fn empty(sig: Arc<Signature>) -> Self {
        Structure::new(sig, 0)
    }

    /// One element carrying every possible tuple (the terminal object).
    pub fn all_loops_point(sig: Arc<Signature>) -> Self {
        let mut s = Structure::new(sig, 1);
        for i in 0..s.sig.len() {
            let a = s.sig.arity(i);
            s.rels[i].insert(vec![0; a]);
        }
        s
    }

    pub fn from_tuples<I>(sig: Arc<Signature>, size: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Tuple)>,
    {
        let mut s = Structure::new(sig, size);
        for (sym, t) in tuples {
            s.add_tuple(sym, t)?;
        }
        Ok(s)
    }

    /// Build from tuples over a single symbol named `name`.
    pub fn from_named<I>(sig: Arc<Signature>, size: usize, name: &str, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Tuple>,
    {
        let sym = sig
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Structure::from_tuples(sig, size, tuples.into_iter().map(|t| (sym, t)))
    }

    /// Insert a tuple; returns whether it was new.
    pub fn add_tuple(&mut self, sym: usize, t: Tuple) -> Result<bool> {
        if sym >= self.sig.len() {
            return Err(Error::UnknownSymbol(format!("#{sym}")));
        }
        let arity = self.sig.arity(sym);
        if t.len() != arity {
            return Err(Error::ArityMismatch {
                symbol: self.sig.symbol(sym).name.clone(),
                expected: arity,
                found: t.len(),
            });
        }
        if let Some(&c) = t.iter().find(|&&c| c >= self.size) {
            return Err(Error::CoordinateOutOfRange {
                coord: c,
                size: self.size,
            });
        }
        Ok(self.rels[sym].insert(t))
    }

    pub fn remove_tuple(&mut self, sym: usize, t: &[usize]) -> bool {
        self.rels[sym].remove(t)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn sig_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, sym: usize) -> &BTreeSet<Tuple> {
        &self.rels[sym]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&BTreeSet<Tuple>> {
        self.sig.index_of(name).map(|i| &self.rels[i])
    }

    pub fn contains(&self, sym: usize, t: &[usize]) -> bool {
        self.rels[sym].contains(t)
    }

    /// All tuples as `(symbol, tuple)` pairs, symbol-major and sorted.
    pub fn tuples(&self) -> impl Iterator<Item = (usize, &Tuple)> + '_ {
        self.rels
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |t| (i, t)))
    }

    pub fn tuple_count(&self) -> usize {
        self.rels.iter().map(|r| r.len()).sum()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn element_name(&self, e: usize) -> String {
        match &self.names {
            Some(n) => n[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::Precondition(format!(
                "{} names for {} elements",
                names.len(),
                self.size
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    /// Substructure induced on `elems`, renumbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> Structure {
        let mut pos = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let mut out = Structure::new(self.sig.clone(), elems.len());
        for (sym, rel) in self.rels.iter().enumerate() {
            for t in rel {
                if t.iter().all(|&c| pos[c] != usize::MAX) {
                    out.rels[sym].insert(t.iter().map(|&c| pos[c]).collect());
                }
            }
        }
        if let Some(names) = &self.names {
            out.names = Some(elems.iter().map(|&e| names[e].clone()).collect());
        }
        out
    }

    /// Image of the structure under `map` into a universe of `target_size`.
    pub fn image(&self, map: &[usize], target_size: usize) -> Structure {
        debug_assert_eq!(map.len(), self.size);
        let mut out = Structure::new(self.sig.clone(), target_size);
        for (sym, rel) in self.rels.iter().enumerate() {
            for t in rel {
                out.rels[sym].insert(t.iter().map(|&c| map[c]).collect());
            }
        }
        out
    }

    /// Same structure reinterpreted over `sig`, keeping only symbols present
    /// (by name) in both signatures.
    pub fn restrict_to(&self, sig: Arc<Signature>) -> Structure {
        let mut out = Structure::new(sig.clone(), self.size);
        for (i, s) in sig.symbols().iter().enumerate() {
            if let Some(j) = self.sig.index_of(&s.name) {
                if self.sig.arity(j) == s.arity {
                    out.rels[i] = self.rels[j].clone();
                }
            }
        }
        out.names = self.names.clone();
        out
    }

    /// Replace the signature with an equal one (same symbols).
    pub fn with_signature(mut self, sig: Arc<Signature>) -> Result<Self> {
        if *sig != *self.sig {
            return Err(Error::SignatureMismatch(format!(
                "cannot rebind `{}` to `{}`",
                self.sig.name(),
                sig.name()
            )));
        }
        self.sig = sig;
        Ok(self)
    }

    /// Add fresh isolated elements.
    pub fn grow(&mut self, extra: usize) {
        self.size += extra;
        if let Some(n) = &mut self.names {
            let start = n.len();
            n.extend((start..start + extra).map(|i| format!("e{i}")));
        }
    }

    /// Elements that appear in no tuple.
    pub fn isolated_elements(&self) -> Vec<usize> {
        let mut used = vec![false; self.size];
        for (_, t) in self.tuples() {
            for &c in t {
                used[c] = true;
            }
        }
        (0..self.size).filter(|&e| !used[e]).collect()
    }

    pub(crate) fn check_same_signature(&self, other: &Structure) -> Result<()> {
        if !Arc::ptr_eq(&self.sig, &other.sig) && self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig, other.sig
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tuples() {
        let sig = Signature::digraph();
        let mut s = Structure::new(sig, 2);
        assert!(matches!(
            s.add_tuple(0, vec![0, 1, 1]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            s.add_tuple(0, vec![0, 2]),
            Err(Error::CoordinateOutOfRange { .. })
        ));
        assert!(s.add_tuple(0, vec![0, 1]).unwrap());
        assert!(!s.add_tuple(0, vec![0, 1]).unwrap());
        assert_eq!(s.tuple_count(), 1);
    }

    #[test]
    fn induced_renumbers() {
        let sig = Signature::digraph();
        let s = Structure::from_named(sig, 3, "E", vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let sub = s.induced(&[2, 1]);
        assert_eq!(sub.size(), 2);
        assert!(sub.contains(0, &[1, 0]));
        assert_eq!(sub.tuple_count(), 1);
    }
}
