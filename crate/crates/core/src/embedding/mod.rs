//! Learned embeddings and their algebra: skip-gram word vectors, analogy
//! arithmetic, projection-based vector logic, and hierarchy embeddings in
//! the Poincaré ball and as boxes.

mod boxes;
mod logic;
mod poincare;
mod sgns;
mod space;
mod taxonomy;

pub use boxes::{box_contains, box_join, box_meet, box_volume, fit_boxes, order_embedding_violations, BoxConfig, BoxEmbedding, BoxOutput, HyperBox};
pub use logic::{vector_not, vector_or, Subspace, DROP_TOLERANCE};
pub use poincare::{poincare_distance, train_poincare, HyperbolicEmbedding, PoincareConfig, PoincareOutput, BALL_EPS};
pub use sgns::{train_sgns, SgnsConfig, SgnsOutput, Vocabulary};
pub use space::{analogy, EmbeddingSpace};
pub use taxonomy::Taxonomy;
