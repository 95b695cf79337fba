//! The unitary model structure: class predicates, right lifting against the
//! generating cofibrations, lifting solvers, the path and cylinder
//! factorizations, quasi-inverses, pushout-products on objects and axiom
//! checks.
//!
//! Fibrations are only exposed through [`solve_unitary_lift`]: the defining
//! condition quantifies over all unitaries and is not finitely checkable.

mod factor;
mod harness;
mod lifting;
mod predicates;

pub use factor::{
    factor_cylinder, factor_path, pushout_product_objects, FactorizationResult, PathObject, PathTriple,
    PushoutProductVerdict,
};
pub use harness::{
    check_factor_roundtrip, check_retract, check_rlp_equiv, check_two_of_three, summarize, Check, CheckStatus,
    RetractDiagram,
};
pub use lifting::{
    generating_trivial_cofibration, lift_cof_tfib, lift_generator, lift_tcof_fib, solve_unitary_lift, Lift,
    LiftingSquare, UnitaryLift,
};
pub use predicates::{
    is_cofibration, is_trivial_fibration, is_weak_equivalence, quasi_inverse, rlp_generating, EssentialWitness,
    Generator, QuasiInverse, WeqObstruction, WeqVerdict,
};
