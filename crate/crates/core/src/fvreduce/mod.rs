//! Reduction of a forbidden-pattern language to one whose patterns are
//! forests over a signature with one symbol per pattern block.

mod basis;
mod gprime;

pub use basis::{build_basis, Basis};
pub use gprime::{build_gprime, build_gprime_with_limit, check_forests, GPRIME_LIMIT};

use crate::error::{Error, Result};
use crate::fpdecide::{shadow_templates, DualLimits, PatternFamily};
use crate::relcore::Structure;
use crate::shape::{girth, shortest_cycle_below, Girth};

/// Largest pattern universe; inputs of the backward direction need girth
/// above it.
pub fn girth_threshold(fam: &PatternFamily) -> usize {
    fam.max_pattern_size()
}

/// The pieces of the reduction for one family.
#[derive(Debug, Clone)]
pub struct FvReduction {
    pub basis: Basis,
    pub gprime: PatternFamily,
    pub threshold: usize,
}

/// Result of the forward direction on one input.
#[derive(Debug, Clone)]
pub struct ForwardResult {
    pub psi: Structure,
    pub gprime: PatternFamily,
    /// Templates over the block signature; `None` when the dual caps were hit.
    pub templates: Option<Vec<Structure>>,
    pub note: Option<String>,
}

impl FvReduction {
    pub fn new(fam: &PatternFamily) -> Result<Self> {
        let basis = build_basis(fam)?;
        let gprime = build_gprime(fam, &basis)?;
        Ok(FvReduction {
            basis,
            gprime,
            threshold: girth_threshold(fam),
        })
    }

    pub fn psi(&self, a: &Structure) -> Result<Structure> {
        self.basis.psi(a)
    }

    pub fn theta(&self, b: &Structure) -> Result<Structure> {
        self.basis.theta(b)
    }

    /// Templates for the forest family G′: shadows of its lifted duals.
    pub fn templates(&self, limits: DualLimits) -> Result<Vec<Structure>> {
        shadow_templates(&self.gprime, limits)
    }

    /// `Θ(b)`, refusing inputs whose girth does not exceed the threshold.
    pub fn backward(&self, b: &Structure) -> Result<Structure> {
        if let Some(c) = shortest_cycle_below(b, self.threshold + 1) {
            let g = match girth(b) {
                Girth::Finite(g) => g,
                Girth::Infinite => c.len(),
            };
            return Err(Error::GirthTooSmall {
                girth: g,
                threshold: self.threshold,
                cycle: c.elements,
            });
        }
        self.theta(b)
    }
}

/// `Ψ(a)`, the family G′ and, caps permitting, templates for G′.
pub fn reduce_forward(a: &Structure, fam: &PatternFamily) -> Result<ForwardResult> {
    reduce_forward_with_limits(a, fam, DualLimits::default())
}

pub fn reduce_forward_with_limits(
    a: &Structure,
    fam: &PatternFamily,
    limits: DualLimits,
) -> Result<ForwardResult> {
    let red = FvReduction::new(fam)?;
    let psi = red.psi(a)?;
    let (templates, note) = match red.templates(limits) {
        Ok(t) => (Some(t), None),
        Err(e @ Error::GuardExceeded { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(ForwardResult {
        psi,
        gprime: red.gprime,
        templates,
        note,
    })
}

/// `Θ(b)` for a block-signature structure of girth above the threshold.
pub fn reduce_backward(b: &Structure, fam: &PatternFamily) -> Result<Structure> {
    let basis = build_basis(fam)?;
    let red = FvReduction {
        basis,
        gprime: PatternFamily::empty(fam.signature.clone(), fam.kind)?,
        threshold: girth_threshold(fam),
    };
    red.backward(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpdecide::{fp_membership, Pattern};
    use crate::relcore::build::{clique, cycle, digraph, monochrome};
    use crate::relcore::{CoverMode, HomKind};

    fn triangle_free() -> PatternFamily {
        let l = monochrome(&clique(3), 1, 0, CoverMode::Partition).unwrap();
        PatternFamily::new(l.carrier().sig_arc().clone(), HomKind::Plain)
            .unwrap()
            .with_patterns(vec![Pattern::new("t", l)])
            .unwrap()
    }

    #[test]
    fn triangle_gprime_contains_single_block_tuple() {
        let fam = triangle_free();
        let red = FvReduction::new(&fam).unwrap();
        assert!(check_forests(&red.gprime));
        assert!(red
            .gprime
            .patterns
            .iter()
            .any(|p| p.size() == 3 && p.carrier().relation(0).len() == 1));
        assert_eq!(red.threshold, 3);
    }

    #[test]
    fn forward_on_small_graphs() {
        let fam = triangle_free();
        let red = FvReduction::new(&fam).unwrap();
        for (a, member) in [(clique(3), false), (cycle(5), true), (digraph(0, &[]), true)] {
            let psi = red.psi(&a).unwrap();
            assert_eq!(fp_membership(&psi, &red.gprime).unwrap().is_some(), member);
            assert_eq!(fp_membership(&a, &fam).unwrap().is_some(), member);
        }
    }

    #[test]
    fn backward_girth_guard() {
        let fam = triangle_free();
        let red = FvReduction::new(&fam).unwrap();
        let single = Structure::from_tuples(red.basis.beta.clone(), 3, [(0, vec![0, 1, 2])]).unwrap();
        assert_eq!(red.backward(&single).unwrap(), clique(3));
        let two = Structure::from_tuples(red.basis.beta.clone(), 3, [(1, vec![0, 1]), (1, vec![1, 0])]).unwrap();
        assert!(matches!(red.backward(&two), Err(Error::GirthTooSmall { girth: 2, .. })));
    }
}
