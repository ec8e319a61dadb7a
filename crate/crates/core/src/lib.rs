//! Temperley-Lieb monoids and twisted algebras, computed exactly.
//!
//! Tangles are non-crossing perfect matchings; words over the `L ∪ R` and
//! `E` alphabets are reduced to the normal form `λ_x ρ_y` together with a
//! replayable derivation certificate.

pub mod algebra;
pub mod presentations;
pub mod rewrite;
pub mod tangle;
pub mod tuples;
pub mod verify;

pub use algebra::{alg_eval_word, verify_xi_prime, AlgebraElement, AlgebraError, Rational, Scalar};
pub use presentations::{
    apply_step, evaluate, hat, relation_set, twist_relations, Alphabet, Direction, Family, Letter,
    PresentationError, RelId, Relation, RelationSet, Step, Word,
};
pub use rewrite::{
    check_derivation, equal_words, normal_form, normal_form_e, push_lambda, reduce_one_sided, separate,
    CertError, Derivation, Equality, NormalForm, RewriteError,
};
pub use tangle::{GeneratorKind, Point, Profile, Simplicity, Tangle, TangleDoc, TangleError};
pub use tuples::{build_tangle, check_tuple, enumerate_tuples, factorize, TnTuple, TupleError};
pub use verify::{enumerate_tl, fuzz_words, verify_presentation, VerifyError};
