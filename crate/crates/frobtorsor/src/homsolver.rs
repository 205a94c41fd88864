//! The hom-space dimension of a descent matrix.
//!
//! A constant vector a over F_q determines a module map from the trivial
//! stratified line bundle into the torsor bundle exactly when the
//! combination Σᵢ aᵢ·rowᵢ of descent-matrix rows lands componentwise in the
//! base subring k[u^p].  Membership is a linear condition: every monomial
//! with some exponent not divisible by p must cancel.  Collecting one
//! F_q-linear equation per offending monomial per column and taking the
//! exact nullspace yields a canonical basis of the solution space.
//!
//! The torsor is saturated exactly when the dimension is 1 — the solution
//! space always contains the unit coordinate vector (the algebra unit maps
//! to itself), so the dimension is at least 1, and any extra solution
//! factors the classifying map through a proper subgroup.
//!
//! Solving over F_q loses nothing relative to an algebraically closed
//! field: the equations have F_q coefficients and matrix rank does not
//! change under field extension, so the dimension computed here is the
//! geometric one.

use crate::algebra::{Fq, Monomial};
use crate::descent::DescentMatrix;
use crate::{linalg, Result};

/// A basis of the admissible constant vectors of a descent matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSolution {
    /// Dimension of the solution space over F_q.
    pub dimension: usize,
    /// Canonical nullspace basis; each vector has one entry per matrix row
    /// (one coordinate per e-basis element).
    pub basis: Vec<Vec<Fq>>,
}

/// Computes the admissible-vector space {a : Σᵢ aᵢ·rowᵢ ∈ k[u^p]^size}.
pub fn solve_hom(matrix: &DescentMatrix) -> Result<HomSolution> {
    let size = matrix.size();
    let field = matrix.field();
    let p = field.p() as i64;
    let mut equations: Vec<Vec<Fq>> = Vec::new();
    for col in 0..size {
        // Offending monomials appearing in this column across all rows.
        let mut offending: Vec<Monomial> = Vec::new();
        {
            let mut seen = std::collections::BTreeSet::new();
            for row in 0..size {
                for (mono, _) in matrix.entry(row, col).terms() {
                    if mono.0.iter().any(|&k| k.rem_euclid(p) != 0) && seen.insert(mono.clone()) {
                        offending.push(mono.clone());
                    }
                }
            }
            offending.sort();
        }
        for mono in offending {
            let eq: Vec<Fq> = (0..size)
                .map(|row| matrix.entry(row, col).coeff(&mono.0))
                .collect();
            equations.push(eq);
        }
    }
    let basis = linalg::nullspace(equations, size, field);
    Ok(HomSolution {
        dimension: basis.len(),
        basis,
    })
}

/// True when the hom dimension is exactly 1, i.e. the torsor is saturated.
pub fn is_saturated_dim(matrix: &DescentMatrix) -> Result<bool> {
    Ok(solve_hom(matrix)?.dimension == 1)
}
