//! Functional concepts: regions cut out by a constraint `f(x) = r`, and
//! learned low-dimensional charts via a variational autoencoder.

mod level_set;
mod vae;

pub use level_set::{LevelSetConcept, Membership, ScalarField};
pub use vae::{latent_interpolate, vae_loss, vae_train, Dense, Forward, LossParts, TrainConfig, TrainOutput, VaeModel};
