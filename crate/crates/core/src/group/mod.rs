//! Point groups `G ≤ O(2)`, their irreps, and representations.

mod decompose;
mod element;
mod irrep;
mod rep;
mod spec;

pub use decompose::{decompose_action, Decomposition, DECOMPOSITION_TOL};
pub use element::{element_matrix, GroupElement, Rotation};
pub use irrep::{irrep_matrix, Irrep};
pub use rep::{decompose, decompose_matrices, irrep_by_index, parse_rep, quotient_rep, regular_rep, Rep, RepName};
pub use spec::{GroupKind, GroupSpec, DEFAULT_SAMPLE_COUNT};
