//! Exact computations with symmetric operads in chain complexes over a field.

pub mod colimit;
pub mod dsl;
pub mod error;
pub mod free;
pub mod graded;
pub mod linalg;
pub mod operad;
pub mod par;
pub mod perm;
pub mod report;
pub mod scalar;
pub mod smodule;
pub mod zoo;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
