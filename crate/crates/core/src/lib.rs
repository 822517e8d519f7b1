//! Invariants of the Borel group acting on the nilradical of a parabolic
//! subalgebra of gl(n), with exact rational arithmetic throughout.
//!
//! Given the diagonal block sizes, the crate builds the combinatorial
//! skeleton (the base of the nilradical root set, its extension by bridge
//! roots, and the two series of distinguished roots), constructs the
//! attached polynomial and rational invariants symbolically, acts on points
//! by exact adjoint conjugation, and reduces points in general position to
//! canonical slice representatives. Randomized exact verification and
//! Jacobian independence checks back every construction.
//!
//! The `pinv` binary exposes diagrams, invariant construction, verification,
//! canonicalization and orbit dimensions on the command line.

pub mod action;
pub mod base;
pub mod canonical;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod jacobian;
pub mod jsonio;
pub mod matrix;
pub mod point;
pub mod poly;
pub mod psi;
pub mod rat;
pub mod ratexpr;
pub mod roots;
pub mod verify;

pub use base::{compute_base, root_gt, AdmissiblePair, ExtendedBase};
pub use canonical::{
    invariants_to_canonical, make_x_point, make_y_point, orbit_dimension, t_reduce,
    ReductionTranscript, SliceKind, SlicePoint,
};
pub use error::{Error, Result};
pub use invariants::{
    a_invariant, b_invariant, combined_minor, l_invariant, minor_m, restrict_pi, s_gamma,
    InvariantFamily,
};
pub use point::PointM;
pub use poly::Polynomial;
pub use psi::{compute_psi, nested_layers, psi_numbering, PsiCertificates};
pub use rat::Rat;
pub use ratexpr::RationalExpr;
pub use roots::{build_block_structure, BlockStructure, Root, RootSets};
pub use verify::Structure;
