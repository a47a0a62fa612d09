//! Orbit spaces of torus representations.
//!
//! Given the weights of a representation of `T^k` on `R^m`, decide whether the
//! orbit space `V/T` is a topological manifold, a manifold with boundary, or
//! neither, and describe its face structure. Two independent routes compute
//! the verdict: matroid structure (Leontief decomposition) and the
//! pseudomanifold test on the independence complex.

pub mod classify;
pub mod cli;
pub mod complex;
pub mod leontief;
pub mod linalg;
pub mod matroid;
pub mod poset;
pub mod verify;
pub mod weights;

pub use classify::{
    circle_classify, classify_pseudomanifold, classify_structural, fixed_point_charge,
    general_position_relation, independence_complex, Charge, CircleQuotient, ClassifyError,
    OrbitVerdict, VerdictKind,
};
pub use complex::{ComplexError, HomologyGroup, PseudomanifoldStatus, SimplicialComplex};
pub use leontief::{
    block_system, check_leontief, enumerate_vertices, nerve_complex, restrict_standard_weights,
    LeontiefStatus, LeontiefSystem, LpError, PolyhedronReport,
};
pub use linalg::{IntMatrix, LinalgError, RatVector};
pub use matroid::{LinearMatroid, MatroidError};
pub use poset::{
    face_leontief_type, face_poset, poset_cardinality, product_structure_check, GradedPoset,
    PosetError,
};
pub use weights::{
    complexity, effective_reduction, parse_weights, snf_canonical_form, LeontiefType, WeightError,
    WeightSystem,
};
