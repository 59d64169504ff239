//! Finite relational structures, lifts and shadows.
//!
//! The crate decides homomorphism questions in the plain, injective and full
//! categories, builds dual template sets for families of forests, compiles
//! SNP sentences into families of forbidden lifts, decides when such a family
//! defines a finite union of CSP languages, and reduces forbidden-pattern
//! problems to CSPs through a block decomposition and sparse incomparable
//! structures.

pub mod canon;
pub mod duality;
pub mod enumerate;
pub mod error;
pub mod fpdecide;
pub mod fvreduce;
pub mod homsearch;
pub mod relcore;
pub mod shape;
pub mod snpc;
pub mod sparsegen;

pub use error::{Error, Result};
pub use relcore::{
    CoverMode, HomKind, HomMode, Homomorphism, Lift, PartialConstraints, Signature, Structure,
};
