//! Executable models of concepts.
//!
//! Four families of concept models live side by side in this crate:
//!
//! * [`lattice`]: formal concept analysis. Contexts, closure, concept
//!   enumeration in lectic order and the resulting concept lattice.
//! * [`similarity`] and [`embedding`]: metric spaces, prototype/exemplar
//!   classification, skip-gram word vectors, projection-based vector logic,
//!   Poincaré-ball and box embeddings of taxonomies.
//! * [`manifold`]: level-set concepts and a small variational autoencoder
//!   with hand-written backpropagation.
//! * [`group`]: group specifications, actions, and invariance, equivariance
//!   and disentanglement checkers.
//!
//! [`datasets`] holds the seeded generators that feed all of them.

// `!(x > 0.0)` is how NaN gets rejected alongside non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datasets;
pub mod embedding;
pub mod error;
pub mod group;
pub mod lattice;
pub mod manifold;
pub mod rng;
pub mod similarity;

pub use error::{Error, Result};
pub use lattice::{ConceptLattice, Context, FormalConcept};
pub use similarity::FeatureVector;

