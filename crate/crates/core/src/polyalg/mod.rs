//! Exact multivariate polynomials over `ℚ` or `𝔽_p` in several alphabets,
//! with the symmetric-group action and divided differences.
//!
//! Every variable has internal degree 2.

mod poly;
mod scalar;

pub use poly::{graded_basis, mono_degree, mono_mul, Mono, Poly, VarSpace};
pub(crate) use poly::monomials_of_weight;
pub use scalar::{Field, Scalar};
