//! Exact combinatorial mutations of Fano simplices.
//!
//! A Fano simplex `P ⊂ N_Q` has primitive vertices and the origin in its
//! strict interior; its toric variety is a fake weighted projective space.
//! This crate computes weights and multiplicities, executes and enumerates
//! mutations, classifies canonical and terminal singularities, and builds
//! the maximal-degree mutation towers made from Sylvester numbers.

pub mod corpus;
pub mod error;
pub mod json;
pub mod lattice;
pub mod mutation;
pub mod polytope;
pub mod simplex;
pub mod singularity;
pub mod sylvester;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{pair, DualVector, IntegerMatrix, LatticeVector};
pub use simplex::{FanoSimplex, RationalPolytope, WeightSystem};
