//! Finite simplicial sets, the standard simplices, horns and boundaries, and
//! the simplicial structure on C*-categories: `πK`, tensors and cotensors with
//! simplicial sets, and membership in simplices of the mapping spaces.

mod pi;
mod simplicial;

pub use pi::{cotensor, induced_groupoid_functor, map_simplex_check, pi, pi_map, tensor_with_sset, PiCategory};
pub use simplicial::{standard, FiniteSimplicialSet, Simplex, SimplicialMap, StandardKind};
