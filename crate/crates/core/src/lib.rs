//! Walk matrices of graphs relative to a vertex subset, and what they determine:
//! main eigenvalues, the adjacency matrix at high rank, and isomorphism
//! certificates through a lexicographic canonical form.

pub mod canonical;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod reconstruct;
pub mod spectral;
pub mod walk;

pub use canonical::{certify_isomorphism, lex_form, walk_equivalent, IsoCertificate, LexForm};
pub use graph::{Graph, GraphError, VertexSet};
pub use linalg::{ExactMatrix, Rational};
pub use poly::IntPolynomial;
pub use reconstruct::{reconstruct, ReconstructionInput, ReconstructionResult, UndeterminedReason};
pub use spectral::{spectral_summary, SpectralSummary};
pub use walk::{walk_matrix, WalkMatrix};
