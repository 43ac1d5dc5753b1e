//! Exact structure-constant workbench for weak Hopf quasigroups.
//!
//! Structures are stored as sparse matrices over an exact field and every
//! identity is checked by exact evaluation on the full tensor-power domain.

pub mod check;
pub mod dsl;
pub mod error;
pub mod factorization;
pub mod format;
pub mod galois;
pub mod cleft;
pub mod gen;
pub mod linalg;
pub mod linmap;
pub mod morphism;
pub mod pipeline;
pub mod scalar;
pub mod space;
pub mod whq;

pub use check::{Check, Counterexample, Report};
pub use error::{Error, Result};
pub use linmap::{LinMap, SparseVec};
pub use morphism::{Difference, Morphism};
pub use scalar::{FieldSpec, Scalar};
pub use space::SpaceSig;
pub use whq::{Classification, Whq};
