use std::sync::Arc;

use crate::duality::{forest_family_duals_with_limits, maximal_up_to_equivalence, DualityCheck, DUAL_SIZE_LIMIT, DUAL_TUPLE_LIMIT};
use crate::enumerate::{for_each_up_to, LABELED_LIMIT};
use crate::error::{Error, Result};
use crate::homsearch::{core_of, maps_to};
use crate::relcore::{shadow, Lift, Signature, Structure};
use crate::shape::{is_forest, shortest_cycle, Cycle};

use super::family::PatternFamily;
use super::membership::fp_membership;
use super::normalize::normalize_family;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    FiniteUnionCsp,
    NotFiniteUnion,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::FiniteUnionCsp => "finite_union_csp",
            Verdict::NotFiniteUnion => "not_finite_union",
        }
    }
}

/// A normalized pattern whose core contains a cycle.
#[derive(Debug, Clone)]
pub struct CyclicWitness {
    pub pattern: Lift,
    pub cycle: Cycle,
}

#[derive(Debug, Clone)]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    /// Templates over the input signature; `None` for negative verdicts or
    /// when the dual construction exceeded its caps.
    pub templates: Option<Vec<Structure>>,
    pub witness: Option<CyclicWitness>,
    pub normalized: PatternFamily,
    pub note: Option<String>,
}

/// Caps used while building lifted duals.
#[derive(Debug, Clone, Copy)]
pub struct DualLimits {
    pub size: u128,
    pub tuples: u128,
}

impl Default for DualLimits {
    fn default() -> Self {
        DualLimits {
            size: DUAL_SIZE_LIMIT,
            tuples: DUAL_TUPLE_LIMIT,
        }
    }
}

/// Decide whether the language of a monadic plain family is a finite union
/// of CSP languages, with templates or a cyclic witness.
pub fn decide_finite_union_csp(fam: &PatternFamily) -> Result<DecisionOutcome> {
    decide_with_limits(fam, DualLimits::default())
}

pub fn decide_with_limits(fam: &PatternFamily, limits: DualLimits) -> Result<DecisionOutcome> {
    let normalized = normalize_family(fam)?;
    let base = fam.base_signature();
    if let Some(c) = everything_color(&normalized) {
        return Ok(DecisionOutcome {
            verdict: Verdict::FiniteUnionCsp,
            templates: Some(vec![Structure::all_loops_point(base)]),
            witness: None,
            normalized,
            note: Some(format!(
                "every structure is in the language: the all-loops point colored {} avoids every pattern",
                fam.signature.symbol(c).name
            )),
        });
    }
    for p in &normalized.patterns {
        if !is_forest(p.carrier()) {
            let cycle = shortest_cycle(p.carrier()).expect("non-forest has a cycle");
            return Ok(DecisionOutcome {
                verdict: Verdict::NotFiniteUnion,
                templates: None,
                witness: Some(CyclicWitness {
                    pattern: p.lift.clone(),
                    cycle,
                }),
                normalized,
                note: None,
            });
        }
    }
    let (templates, note) = match shadow_templates(&normalized, limits) {
        Ok(t) => (Some(t), None),
        Err(e @ Error::GuardExceeded { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(DecisionOutcome {
        verdict: Verdict::FiniteUnionCsp,
        templates,
        witness: None,
        normalized,
        note,
    })
}

/// A color whose all-loops point avoids every pattern, if any; then the
/// language contains every structure.
fn everything_color(fam: &PatternFamily) -> Option<usize> {
    fam.colors().into_iter().find(|&c| {
        let mut point = Structure::new(fam.signature.clone(), 1);
        for s in 0..fam.signature.len() {
            if !fam.signature.symbol(s).lift || s == c {
                point
                    .add_tuple(s, vec![0; fam.signature.arity(s)])
                    .expect("loop tuple");
            }
        }
        !fam.patterns.iter().any(|p| maps_to(p.carrier(), &point))
    })
}

/// Templates over the input signature for a family of forest patterns whose
/// elements carry one color each: lifted duals, cut down to colored
/// elements, then shadows, cores and hom-maximal representatives.
pub fn shadow_templates(fam: &PatternFamily, limits: DualLimits) -> Result<Vec<Structure>> {
    let carriers: Vec<Structure> = fam.patterns.iter().map(|p| p.carrier().clone()).collect();
    let duals = forest_family_duals_with_limits(&fam.signature, &carriers, limits.size, limits.tuples)?;
    let colors = fam.colors();
    let mut out = Vec::new();
    for d in &duals.templates {
        let colored: Vec<usize> = (0..d.size())
            .filter(|&x| colors.iter().any(|&c| d.contains(c, &[x])))
            .collect();
        let cut = d.induced(&colored);
        let sh = shadow(&Lift::new_unchecked(cut, crate::relcore::CoverMode::None));
        out.push(core_of(&sh));
    }
    Ok(maximal_up_to_equivalence(out))
}

/// Check that the family's language equals the union of `CSP(D)` over the
/// templates on all input structures with at most `n` elements.
pub fn verify_shadow_duality(
    fam: &PatternFamily,
    templates: &[Structure],
    n: usize,
) -> Result<DualityCheck> {
    let base: Arc<Signature> = fam.base_signature();
    for t in templates {
        if t.signature() != &*base {
            return Err(Error::SignatureMismatch(format!(
                "template over {}, expected {}",
                t.signature(),
                base
            )));
        }
    }
    let mut counterexample = None;
    let mut checked = 0;
    let mut failure = None;
    for_each_up_to(&base, n, LABELED_LIMIT, &mut |a| {
        checked += 1;
        let member = match fp_membership(a, fam) {
            Ok(m) => m.is_some(),
            Err(e) => {
                failure = Some(e);
                return false;
            }
        };
        let csp = templates.iter().any(|d| maps_to(a, d));
        if member != csp {
            counterexample = Some(a.clone());
            return false;
        }
        true
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(DualityCheck {
        holds: counterexample.is_none(),
        counterexample,
        checked,
    })
}
