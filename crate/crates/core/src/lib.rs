//! Combinatorial Reid's recipe for consistent dimer models.
//!
//! Pipeline: [`dimer`] (validation, faces, dual quiver) → [`matchings`]
//! (perfect matchings, heights, polygon, zig-zags) → [`fan`] (θ-stable
//! matchings and the triangulation) → [`jigsaw`] (hexagons and wall
//! crossings) → [`recipe`] (markings) → [`bundles`] (divisor classes and
//! relations). [`mckay`] builds abelian-orbifold models with classical oracles.

pub mod bits;
pub mod bundles;
pub mod dimer;
pub mod error;
pub mod fan;
pub mod io;
pub mod jigsaw;
pub mod lattice;
pub mod matchings;
pub mod mckay;
pub mod recipe;
pub mod smith;

pub use error::{Error, Result};
