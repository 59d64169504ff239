use std::sync::Arc;

use crate::canon::is_isomorphic;
use crate::error::{Error, Result};
use crate::fpdecide::PatternFamily;
use crate::homsearch::for_each_hom;
use crate::relcore::{HomMode, Signature, Structure, Symbol};
use crate::shape::blocks;

/// Block representatives of the pattern shadows together with the signature
/// having one symbol per block, of arity the block size.
#[derive(Debug, Clone)]
pub struct Basis {
    pub input: Arc<Signature>,
    /// Representatives over the input signature, universe `0..|B|`.
    pub blocks: Vec<Structure>,
    pub beta: Arc<Signature>,
}

/// Blocks of every pattern shadow up to isomorphism, followed by the
/// single-tuple structure of each input symbol unless already present.
/// Element-only blocks are skipped.
pub fn build_basis(fam: &PatternFamily) -> Result<Basis> {
    if !fam.is_monadic() {
        return Err(Error::Precondition("the basis needs a monadic family".into()));
    }
    let input = fam.base_signature();
    let mut reps: Vec<Structure> = Vec::new();
    for p in &fam.patterns {
        let shadow = p.carrier().restrict_to(input.clone()).without_names();
        for b in blocks(&shadow) {
            if b.tuples.is_empty() {
                continue;
            }
            let s = b.to_structure(&shadow);
            if !reps.iter().any(|r| is_isomorphic(r, &s)) {
                reps.push(s);
            }
        }
    }
    for sym in 0..input.len() {
        let r = input.arity(sym);
        let unit = Structure::from_tuples(input.clone(), r, [(sym, (0..r).collect())])?;
        match reps.iter().position(|b| is_isomorphic(b, &unit)) {
            Some(i) => reps[i] = unit,
            None => reps.push(unit),
        }
    }
    let mut symbols = Vec::with_capacity(reps.len());
    for (i, b) in reps.iter().enumerate() {
        let mut name = match unit_symbol(b) {
            Some(sym) => format!("R_{}", input.symbol(sym).name),
            None => format!("R_B{i}"),
        };
        while symbols.iter().any(|s: &Symbol| s.name == name) {
            name.push('_');
        }
        symbols.push(Symbol::base(name, b.size()));
    }
    let beta = Arc::new(Signature::new(format!("{}_blocks", input.name()), symbols)?);
    Ok(Basis {
        input,
        blocks: reps,
        beta,
    })
}

/// The symbol of a single-tuple block on distinct elements `0..r`.
fn unit_symbol(b: &Structure) -> Option<usize> {
    let mut it = b.tuples();
    let (sym, t) = it.next()?;
    if it.next().is_some() || t.len() != b.size() {
        return None;
    }
    t.iter().enumerate().all(|(i, &x)| i == x).then_some(sym)
}

impl Basis {
    /// Same universe; `R_B` holds `(f(0), .., f(|B|-1))` for every
    /// homomorphism `f: B -> a`.
    pub fn psi(&self, a: &Structure) -> Result<Structure> {
        if a.signature() != &*self.input {
            return Err(Error::SignatureMismatch(format!(
                "structure over {}, basis input {}",
                a.signature(),
                self.input
            )));
        }
        let mut out = Structure::new(self.beta.clone(), a.size());
        if let Some(names) = a.names() {
            out = out.with_names(names.to_vec())?;
        }
        for (i, b) in self.blocks.iter().enumerate() {
            let mut tuples = Vec::new();
            for_each_hom(b, a, &HomMode::PLAIN, |f| {
                tuples.push(f.to_vec());
                true
            })?;
            for t in tuples {
                out.add_tuple(i, t)?;
            }
        }
        Ok(out)
    }

    /// Same universe; the union of the images of each block under its tuples.
    pub fn theta(&self, b: &Structure) -> Result<Structure> {
        if b.signature() != &*self.beta {
            return Err(Error::SignatureMismatch(format!(
                "structure over {}, basis {}",
                b.signature(),
                self.beta
            )));
        }
        let mut out = Structure::new(self.input.clone(), b.size());
        if let Some(names) = b.names() {
            out = out.with_names(names.to_vec())?;
        }
        for (i, block) in self.blocks.iter().enumerate() {
            for t in b.relation(i) {
                for (sym, s) in block.tuples() {
                    out.add_tuple(sym, s.iter().map(|&x| t[x]).collect())?;
                }
            }
        }
        Ok(out)
    }

    /// `beta` followed by the given unary lift symbols.
    pub fn lifted_signature(&self, colors: &[String]) -> Result<Arc<Signature>> {
        let lift: Vec<(String, usize)> = colors.iter().map(|c| (c.clone(), 1)).collect();
        Ok(Arc::new(self.beta.extend_lift(&lift)?))
    }

    /// [`Basis::theta`] on a colored structure over `beta` plus unary lift
    /// symbols, keeping the colors; the result lives over `target`.
    pub fn theta_lifted(&self, b: &Structure, target: &Arc<Signature>) -> Result<Structure> {
        let base = b.restrict_to(self.beta.clone());
        let mut out = self.theta(&base)?.restrict_to(target.clone());
        let k = self.beta.len();
        let offset = self.input.len();
        for c in k..b.signature().len() {
            for t in b.relation(c) {
                out.add_tuple(offset + c - k, t.clone())?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpdecide::Pattern;
    use crate::relcore::build::{clique, digraph, directed_path, monochrome};
    use crate::relcore::{CoverMode, HomKind};

    fn fam_of(s: &Structure) -> PatternFamily {
        let l = monochrome(s, 1, 0, CoverMode::Partition).unwrap();
        PatternFamily::new(l.carrier().sig_arc().clone(), HomKind::Plain)
            .unwrap()
            .with_patterns(vec![Pattern::new("p", l)])
            .unwrap()
    }

    #[test]
    fn triangle_basis() {
        let b = build_basis(&fam_of(&clique(3))).unwrap();
        assert_eq!(b.blocks.len(), 2);
        assert_eq!(b.beta.arity(0), 3);
        assert_eq!(b.beta.symbol(1).name, "R_E");
        let psi = b.psi(&clique(3)).unwrap();
        assert_eq!(psi.relation(0).len(), 6);
        assert_eq!(b.theta(&psi).unwrap(), clique(3));
    }

    #[test]
    fn path_has_one_block_class() {
        let b = build_basis(&fam_of(&directed_path(2))).unwrap();
        assert_eq!(b.blocks.len(), 1);
        assert_eq!(b.beta.symbol(0).name, "R_E");
        let psi = b.psi(&digraph(2, &[(0, 1)])).unwrap();
        assert_eq!(psi.relation(0).iter().cloned().collect::<Vec<_>>(), vec![vec![0, 1]]);
    }

    #[test]
    fn collapsed_triangle_image() {
        let b = build_basis(&fam_of(&clique(3))).unwrap();
        let s = Structure::from_tuples(b.beta.clone(), 2, [(0, vec![0, 0, 1])]).unwrap();
        let t = b.theta(&s).unwrap();
        assert!(t.contains(0, &[0, 0]));
        assert!(t.contains(0, &[0, 1]) && t.contains(0, &[1, 0]));
    }
}
