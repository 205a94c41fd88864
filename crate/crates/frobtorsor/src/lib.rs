//! Exact decision procedures for saturation of purely inseparable torsors.
//!
//! In characteristic p > 0, a finite local height-one group scheme G and a
//! G-torsor P over an affine base X (the affine line 𝔸ⁿ or the torus 𝔾_m)
//! determine a classifying map from the local fundamental group scheme of X
//! onto a subgroup of G.  The torsor is *saturated* when that map is
//! surjective.  Saturation is detected by exact linear algebra: the torsor
//! trivializes on the degree-p radicial cover (u ↦ u^p = x), the induced
//! descent datum is a square matrix over the cover ring, and the space of
//! module maps from the trivial stratified line bundle into the torsor bundle
//! has dimension 1 exactly when the torsor is saturated.
//!
//! The crate computes everything over an explicit finite coefficient field
//! F_q (q = p^e).  This loses no generality: the solution space of the
//! descent-matrix membership system is cut out by F_q-linear equations whose
//! coefficients lie in F_q, and the rank of a matrix over F_q equals its rank
//! over any extension field, in particular over an algebraic closure.  The
//! dimension reported here therefore equals the geometric hom dimension.
//!
//! Modules:
//! - [`algebra`]: finite fields F_{p^e}, sparse multivariate (Laurent)
//!   polynomials, the radicial cover ring and p-th-root transport.
//! - [`frobspace`]: the coefficient space k[x]/k[x^p] of Frobenius classes
//!   and exact span dimensions inside it.
//! - [`descent`]: torsor families (μ_p, α_p powers, GL₂ and SL₂ Frobenius
//!   kernels in characteristic 2) and their descent matrices.
//! - [`homsolver`]: the hom-space dimension from a descent matrix.
//! - [`saturation`]: closed-form saturation criteria, the combined verdict,
//!   and searches for saturated specimens.
//! - [`bertini`]: explicit hypersurface substitutions reducing saturated
//!   torsors over 𝔸ⁿ to 𝔸ⁿ⁻¹ while preserving saturation.
//! - [`bounds`]: cohomological size bounds and quotient-embedding checks.

pub mod algebra;
pub mod bertini;
pub mod bounds;
pub mod descent;
pub mod frobspace;
pub mod homsolver;
mod linalg;
pub mod saturation;

use std::fmt;

/// Crate-wide error type.
///
/// `InvalidInput` carries a diagnostic naming the violated requirement; it is
/// the variant surfaced to CLI users with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A field specification is unusable (p not prime, e = 0, q too large).
    InvalidField(String),
    /// Two operands live over different fields or different variable sets.
    RingMismatch(String),
    /// A negative exponent appeared in a variable without Laurent support.
    NegativeExponent(String),
    /// A torsor specification violates a family invariant.
    InvalidTorsor(String),
    /// A requested matrix size exceeds the configured cap.
    CapExceeded { size: u128, cap: u128 },
    /// Malformed or inconsistent user input (JSON shape, parameter ranges).
    InvalidInput(String),
    /// A reduction step was invoked on a torsor that is not saturated.
    NotSaturated,
    /// An internal consistency check failed; indicates a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField(msg) => write!(f, "invalid field: {msg}"),
            Error::RingMismatch(msg) => write!(f, "ring mismatch: {msg}"),
            Error::NegativeExponent(msg) => {
                write!(f, "negative exponent in non-Laurent variable: {msg}")
            }
            Error::InvalidTorsor(msg) => write!(f, "invalid torsor specification: {msg}"),
            Error::CapExceeded { size, cap } => {
                write!(
                    f,
                    "matrix size {size} exceeds cap {cap} (set FROBTORSOR_CAP to override)"
                )
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotSaturated => {
                write!(f, "precondition failed: torsor is not saturated")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
