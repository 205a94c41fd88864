//! Exact base algebra: finite coefficient fields, sparse multivariate
//! (Laurent) polynomials, and the degree-p radicial cover ring.
//!
//! Everything downstream — Frobenius quotients, descent matrices, hom-space
//! dimensions — reduces to arithmetic in these types.  All representations
//! are canonical (ordered sparse terms, no zero coefficients, a fixed
//! modulus polynomial per extension field), so equality of values is
//! equality of representations and every pipeline is deterministic.

mod cover;
mod field;
mod poly;

pub use cover::CoverRing;
pub use field::{FieldSpec, Fq, MAX_FIELD_ORDER};
pub use poly::{poly_arith, ArithOp, Monomial, MultiPoly, PolyRing};

pub(crate) use field::power_string;
