//! Concrete finite-dimensional C*-categories: objects are `C^d`, hom spaces are
//! subspaces of matrices closed under composition and adjoint. Includes
//! *-functors, natural transformations, unitarization, limits and colimits,
//! and the Kronecker tensor product with its exponential transpose.

mod category;
mod functor;
mod limits;
mod natural;
mod tensor;
mod unitary;

pub use category::{validate_category, MatCStarCategory, MatObject, ValidationReport, Violation};
pub use functor::{compose, validate_functor, FunctorData, StarFunctor};
pub use limits::{
    amplify, copair, coproduct, coproduct_of, equalizer, fold, product, Equalizer, MatCoproduct, Product,
};
pub use natural::{nat_compose, nat_scale_add, nat_space, BoundedNatSpace, NatTransform};
pub use tensor::{curry, tensor_functor, tensor_max, uncurry, CurriedFunctor, TensorMax};
pub use unitary::{ism_membership, iso_exists, uni_membership, unitarize, IsoVerdict, NoIsoReason, ISO_SAMPLES};

pub(crate) use functor::same_category;
