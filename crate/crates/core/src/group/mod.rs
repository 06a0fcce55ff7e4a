//! Finite and sampled transformation groups, their actions on points and
//! representations, and checks for invariance, equivariance and
//! disentanglement.

mod action;
mod check;
mod spec;

pub use action::{ActionKind, EquivariantAction, GroupAction, RepMetric, RepresentationMap};
pub use check::{
    check_action_laws, check_disentangled, check_equivariance, check_homomorphism, check_invariance,
    lie_rotation_residual, CheckReport, DisentangleReport, FactorReport, ProductDecomposition, Witness,
};
pub use spec::{verify_group, Element, GroupReport, GroupSpec, GroupViolation, EXHAUSTIVE_LIMIT};
