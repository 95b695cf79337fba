//! Finite and finitely presented groupoids, the maximal groupoid C*-category
//! in the regular representation, the adjunction with unitary groupoids,
//! fundamental groupoids of simplicial sets, nerves and the monoidal
//! comparison functor.

mod cstar;
mod groupoid;
mod nerve;
mod presented;

pub use cstar::{
    adjunction_extend, adjunction_restrict, comparison_functor, cstar_max, Comparison, ComparisonVerdict,
    GroupoidCStar, UniFunctor,
};
pub use groupoid::{
    codiscrete_groupoid, cyclic_group, discrete_groupoid, disjoint_union, interval_groupoid, permutation_group,
    product_groupoid, terminal_groupoid, FiniteGroupoid, GroupoidArrow, GroupoidFunctor,
};
pub use nerve::nerve;
pub use presented::{
    fundamental_groupoid, inverse_word, normalize_fp, reduce_word, FPGroupoid, FpLetter, FpRelation, FpWord,
    Normalization, NormalizedGroupoid, COSET_BUDGET,
};
