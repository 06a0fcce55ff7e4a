//! Formal concept analysis.
//!
//! A [`Context`] is a binary object × attribute table. The two derivation
//! operators between object sets and attribute sets form an antitone Galois
//! connection whose composites are closure operators; the closed pairs are
//! the [`FormalConcept`]s, and ordering them by extent inclusion (equivalently
//! reverse intent inclusion) gives the [`ConceptLattice`].

mod concept;
mod context;
mod export;
mod laws;
mod order;

pub use concept::{enumerate_concepts, FormalConcept};
pub use context::Context;
pub use export::{ConceptRecord, LatticeDocument};
pub use laws::{check_duality, check_laws, LawReport, LawViolation};
pub use order::{build_lattice, ConceptLattice};

pub use fixedbitset::FixedBitSet;

pub(crate) fn bits_from_indices(len: usize, indices: &[usize], what: &'static str) -> crate::Result<FixedBitSet> {
    let mut set = FixedBitSet::with_capacity(len);
    for &i in indices {
        if i >= len {
            return Err(crate::Error::IndexOutOfRange { what, index: i, len });
        }
        set.insert(i);
    }
    Ok(set)
}
