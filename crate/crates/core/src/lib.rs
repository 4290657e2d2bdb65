//! Exact computations with filtered (φ,N)-modules over p-adic fields.
//!
//! The crate covers the whole chain from a filtered (φ,N)-module to Hecke
//! eigenvalues:
//!
//! * [`phin`]: modules, Newton and Hodge numbers, weak admissibility;
//! * [`wd`]: the Weil–Deligne data, monodromy partitions and
//!   Bernstein–Zelevinsky segments of a module;
//! * [`hecke`]: eigenvalues of the operators `θ_r` on unramified principal
//!   series, by coset enumeration and in closed form;
//! * [`interpolation`]: the values `β(θ̃_r)` read off the Frobenius, their
//!   integrality, and the pointwise comparison with the Hecke side.
//!
//! All arithmetic is exact ([`arith::Rational`], [`arith::QExtScalar`]).

pub mod arith;
pub mod error;
pub mod gen;
pub mod hecke;
pub mod interpolation;
pub mod linalg;
pub mod partitions;
pub mod phin;
pub mod sweep;
pub mod wd;

pub use arith::{padic_val, qext_mul, PAdicValuation, QExtScalar, Rational};
pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
pub use partitions::{Partition, PartitionFunction};
pub use phin::{FieldDescriptor, FilteredPhiNModule};
