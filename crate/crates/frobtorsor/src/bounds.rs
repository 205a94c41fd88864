//! Cohomological shape bounds for affine curves: the sizes of the
//! diagonalizable and α-type torsor inventories, and the character-group
//! embedding test that is necessary for a finite group scheme to be
//! realized by a torsor at all.
//!
//! For an affine curve U = X ∖ {n points} over an algebraically closed
//! field of characteristic p, with γ the p-rank of the Jacobian of X:
//!
//! - H¹(U, μ_{p^m}) ≅ (ℤ/p^mℤ)^{γ+n−1}, computed by [`h1_mu`];
//! - H¹(𝔸¹, α_p) ≅ ⊕_{p∤j} k·tʲ, a basis of which [`h1_alpha_basis`]
//!   enumerates up to a degree bound;
//! - a finite diagonalizable character group 𝕏 can arise from a torsor
//!   only if 𝕏 embeds into (ℚ_p/ℤ_p)^{γ+n−1}, tested by
//!   [`embedding_check`].
//!
//! The p-rank γ is an input: computing Jacobians is out of scope.

use serde::{Deserialize, Serialize};

use crate::algebra::{FieldSpec, MultiPoly, PolyRing};
use crate::{Error, Result};

/// Numerical invariants of an affine curve U = X ∖ {punctures}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    /// Characteristic of the base field (prime).
    pub p: u64,
    /// p-rank of the Jacobian of the compactification X.
    pub gamma: u64,
    /// Number of punctures; ≥ 1 because U is affine.
    pub n: u64,
}

impl CurveData {
    /// Validates p prime and n ≥ 1.
    pub fn new(p: u64, gamma: u64, n: u64) -> Result<Self> {
        // Primality via the field constructor's own check.
        FieldSpec::new(p, 1)?;
        if n == 0 {
            return Err(Error::InvalidInput(
                "an affine curve has at least one puncture (n ≥ 1)".into(),
            ));
        }
        Ok(CurveData { p, gamma, n })
    }

    /// The recurring exponent γ + n − 1.
    pub fn rank(&self) -> u64 {
        self.gamma + self.n - 1
    }
}

/// A finite abelian p-group presented by its cyclic factor orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterGroup {
    /// Multiset of cyclic orders, each ≥ 2; empty means the trivial group.
    pub orders: Vec<u128>,
}

impl CharacterGroup {
    /// Validates all orders ≥ 2 and sorts them into canonical form.
    pub fn new(mut orders: Vec<u128>) -> Result<Self> {
        if orders.iter().any(|&o| o < 2) {
            return Err(Error::InvalidInput(
                "cyclic factor orders must be at least 2".into(),
            ));
        }
        orders.sort_unstable();
        Ok(CharacterGroup { orders })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        CharacterGroup { orders: Vec::new() }
    }

    /// Number of cyclic factors = minimal generator count.
    pub fn factor_count(&self) -> usize {
        self.orders.len()
    }
}

/// The group (ℤ/p^mℤ)^rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Mu {
    /// p^m, the order of each cyclic factor.
    pub modulus: u128,
    /// Number of cyclic factors, γ + n − 1.
    pub rank: u64,
}

/// Computes H¹(U, μ_{p^m}) ≅ (ℤ/p^mℤ)^{γ+n−1}.
pub fn h1_mu(curve: &CurveData, m: u32) -> Result<H1Mu> {
    if m == 0 {
        return Err(Error::InvalidInput("h1_mu needs m ≥ 1".into()));
    }
    let modulus = (curve.p as u128).checked_pow(m).ok_or_else(|| {
        Error::InvalidInput(format!("modulus {}^{m} overflows", curve.p))
    })?;
    Ok(H1Mu {
        modulus,
        rank: curve.rank(),
    })
}

/// Enumerates the basis monomials tʲ, p ∤ j, 1 ≤ j ≤ `degree_bound`, of
/// H¹(𝔸¹, α_p).
pub fn h1_alpha_basis(p: u64, degree_bound: u32) -> Result<Vec<MultiPoly>> {
    let field = FieldSpec::new(p, 1)?;
    let ring = PolyRing::univar(field, "t", false)?;
    let mut basis = Vec::new();
    for j in 1..=degree_bound as i64 {
        if j % p as i64 != 0 {
            basis.push(ring.monomial(&[j], field.one())?);
        }
    }
    Ok(basis)
}

/// Tests whether `x` embeds into (ℚ_p/ℤ_p)^{γ+n−1} for the curve's p.
///
/// A finite abelian p-group G embeds into (ℚ_p/ℤ_p)^r exactly when its
/// minimal generator count is ≤ r: the p-torsion of (ℚ_p/ℤ_p)^r is
/// (ℤ/pℤ)^r, so G[p] ≅ (ℤ/pℤ)^{#factors} forces #factors ≤ r; and
/// conversely each cyclic factor ℤ/p^kℤ sits inside its own ℚ_p/ℤ_p
/// summand.  Errors when an order is not a power of the curve's p.
pub fn embedding_check(x: &CharacterGroup, curve: &CurveData) -> Result<bool> {
    for &order in &x.orders {
        let mut o = order;
        while o % curve.p as u128 == 0 {
            o /= curve.p as u128;
        }
        if o != 1 {
            return Err(Error::InvalidInput(format!(
                "cyclic factor order {order} is not a power of p = {}",
                curve.p
            )));
        }
    }
    Ok(x.factor_count() as u64 <= curve.rank())
}
