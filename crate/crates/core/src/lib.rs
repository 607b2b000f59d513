//! Generalized principal pivot transforms and Schur complements of dense
//! block matrices, together with executable checks of their Loewner-order
//! monotonicity, concavity and variational properties.

pub mod block;
pub mod convexity;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod order;
pub mod varprin;

pub use block::BlockMatrix;
pub use error::{Error, Inclusion, Result};
pub use linalg::{Complex64, Field, Inertia, Matrix, SubspaceBasis, ToleranceConfig, Vector};
