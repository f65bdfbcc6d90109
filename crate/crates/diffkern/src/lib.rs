//! Difference subgroups of commutative algebraic groups over finite fields,
//! at explicit finite level: modularity of integer polynomials (Weil-number
//! roots), kernel certificates for the multiplicative group, the
//! multiplicative-rank trichotomy for elliptic curves, twisted-polynomial
//! kernels on the additive group, and difference kernels in truncated Witt
//! vectors.

pub mod abelian;
pub mod additive;
pub mod arith;
pub mod error;
pub mod ff;
pub mod gm;
pub mod padic;
pub(crate) mod serde_util;
pub mod weil;
pub mod witt;

pub use error::{Error, Result};
