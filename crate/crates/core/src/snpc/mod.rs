//! SNP formulas: parsing, brute-force evaluation, normalization passes and
//! translation into forbidden-lift families.

mod corpus;
mod eval;
mod formula;
mod normalize;
mod translate;

pub use corpus::{generate_corpus, random_formula, CorpusClass};
pub use eval::{eval_snp, eval_snp_with_limit, EVAL_LIMIT, VALUATION_LIMIT};
pub use formula::{parse_snp, Atom, Clause, ProofSymbol, RestrictionReport, SnpFormula};
pub use normalize::{
    primitivize, primitivize_mentioned, primitivize_with_limit, saturate_inequalities,
    uniformize_arity, PRIMITIVIZE_LIMIT,
};
pub use translate::{subset_signature, to_lifts_full, to_lifts_general, to_lifts_injective};
