//! Exact computational engine for the matrix shuffle algebra of type
//! gl(n|m): graded R-matrices, shuffle products, partial-trace maps,
//! commuting families and the conic lattice model, all evaluated over a
//! large prime field with truncated Laurent jets in one infinitesimal.
//!
//! Everything is exact: identities between tensor-valued rational
//! functions are decided by randomized evaluation over F_p (p ~ 2^61)
//! with a Schwartz-Zippel failure bound, and residues / leading
//! asymptotics are read off truncated jets along explicit curves.

pub mod commuting;
pub mod error;
pub mod family;
pub mod field;
pub mod jet;
pub mod lattice;
pub mod perm;
pub mod point;
pub mod rmatrix;
pub mod series;
pub mod shuffle;
pub mod space;
pub mod suites;
pub mod tensor;
pub mod trace_maps;
pub mod wheel;

pub use error::Error;
pub use family::{AlgebraTag, ShuffleElement, TensorFamily};
pub use field::Coefficient;
pub use jet::JetScalar;
pub use point::EvalPoint;
pub use space::{EmbeddingSpec, GradedSpace};
pub use tensor::Tensor;

pub type Result<T> = std::result::Result<T, Error>;
