//! Theorems as vectors over indexed axiom systems.
//!
//! Every theorem is recorded as a fixed-length vector whose coordinates are
//! the axioms of one formal system (Hilbert geometry, Peano arithmetic, ZFC,
//! vector spaces, group theory). Marking which axioms a proof invokes turns
//! structural comparison of theorems into plain vector arithmetic: similarity
//! metrics, agglomerative clustering into logical families, heatmap rendering,
//! and nearest-neighbour queries all operate on the same representation.
//!
//! The crate is organised around six modules:
//!
//! * [`registry`] — axiom systems as ordered, indexed coordinate bases,
//!   including the five built-in systems and cross-system composition.
//! * [`corpus`] — theorem records with their proof vectors, the seed dataset,
//!   and JSON import/export.
//! * [`metrics`] — cosine, Euclidean, and Jaccard comparisons plus pairwise
//!   similarity matrices.
//! * [`analysis`] — hierarchical clustering, dendrogram cuts, k-nearest
//!   queries, outlier scores, and support-set algebra.
//! * [`viz`] — SVG heatmaps and CSV/text exports.
//! * [`assistant`] — the statement-to-vector suggestion pipeline with a
//!   remote language-model backend and a deterministic offline fallback.
//!
//! All values are immutable once constructed; operations that "update" a
//! corpus return a new one. Everything here is safe to share across threads.

pub mod analysis;
pub mod assistant;
pub mod corpus;
mod error;
pub mod metrics;
pub mod registry;
pub mod viz;

pub use crate::analysis::{cluster, cut, Dendrogram, FamilyPartition, Linkage};
pub use crate::corpus::{Corpus, ProofVector, Theorem, VectorKind};
pub use crate::error::{Error, Result};
pub use crate::metrics::{Metric, SimilarityMatrix};
pub use crate::registry::{Axiom, AxiomSystem, CompositeSystem, Registry};
