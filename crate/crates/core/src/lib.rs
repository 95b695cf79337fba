//! Finite-dimensional C*-categories and the unitary model structure.
//!
//! The crate works with concrete C*-categories whose objects are finite
//! dimensional Hilbert spaces and whose hom spaces are subspaces of complex
//! matrices closed under composition and adjoint. On top of that substrate it
//! provides groupoid C*-categories, maximal tensor products, presented
//! *-categories, simplicial sets with their fundamental groupoids, and the
//! lifting/factorization machinery of the unitary model structure.

pub mod error;
pub mod gen;
pub mod gpd;
pub mod matcat;
pub mod model;
pub mod numlin;
pub mod sset;
pub mod starpres;

pub use error::{Error, Result};
