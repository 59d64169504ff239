//! Forbidden-pattern languages: membership, normalization, union closure and
//! the decision whether a language is a finite union of CSP languages.

mod decide;
mod family;
mod membership;
mod normalize;

pub use decide::{
    decide_finite_union_csp, decide_with_limits, shadow_templates, verify_shadow_duality,
    CyclicWitness, DecisionOutcome, DualLimits, Verdict,
};
pub use family::{parse_family, serialize_family, Pattern, PatternFamily};
pub use membership::{fp_membership, fp_membership_with_limit, MEMBERSHIP_LIMIT};
pub use normalize::{
    expand_partial_constraints, expand_partial_constraints_with_limit, normalize_family,
    normalize_family_with_limit, partition_patterns, union_families, NORMALIZE_LIMIT,
};
pub(crate) use normalize::minimal_members;
