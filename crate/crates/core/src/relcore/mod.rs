//! Signatures, structures, lifts and the plumbing between them.

pub mod build;
mod hom;
mod lift;
mod ops;
mod signature;
mod structure;
pub mod text;

pub use hom::{check_hom, compose, is_hom, HomKind, HomMode, Homomorphism, PartialConstraints};
pub(crate) use lift::next_tuple;
pub use lift::{shadow, CoverMode, Lift};
pub use ops::{disjoint_union, disjoint_union_lifts, product, pullback_lift};
pub use signature::{Signature, Symbol};
pub use structure::{Structure, Tuple};
pub use text::{parse_document, parse_lift, parse_structure, serialize_lift, serialize_structure};
