//! The Frobenius coefficient quotient k[x]/k[x^p] and exact span dimensions.
//!
//! In characteristic p the p-th powers form the subring k[x₁^p,…,xₙ^p] (with
//! Laurent variables, the subring generated by all xᵢ^{±p}).  The quotient
//! vector space k[x]/k[x^p] controls every saturation criterion in this
//! crate: a class is zero exactly when all of its monomials have every
//! exponent divisible by p, so each class has a canonical representative
//! obtained by deleting those monomials.  Linear independence of classes is
//! then finite linear algebra over the coefficient field on the surviving
//! monomials, and ranks over F_q agree with ranks over any extension field.

use crate::algebra::{Monomial, MultiPoly, PolyRing};
use crate::{linalg, Error, Result};

/// A residue class in k[x]/k[x^p], stored by its canonical representative
/// (no monomial with all exponents divisible by p).
///
/// Two classes are equal exactly when their canonical representatives are
/// equal, so derived equality is class equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobClass {
    rep: MultiPoly,
}

impl FrobClass {
    /// The canonical representative.
    pub fn rep(&self) -> &MultiPoly {
        &self.rep
    }

    /// The ambient ring.
    pub fn ring(&self) -> &PolyRing {
        self.rep.ring()
    }

    /// True for the zero class.
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Class addition (classes of f and g sum to the class of f + g).
    pub fn add(&self, other: &FrobClass) -> Result<FrobClass> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(
                "cannot add classes from different rings".into(),
            ));
        }
        Ok(class_of(&self.rep.add(&other.rep)))
    }
}

/// The class of a polynomial in k[x]/k[x^p]: the canonical representative
/// keeps exactly the monomials with some exponent not divisible by p
/// (negative exponents via Euclidean remainder).
pub fn class_of(f: &MultiPoly) -> FrobClass {
    let p = f.field().p() as i64;
    let mut rep = f.ring().zero();
    for (m, c) in f.terms() {
        if m.0.iter().any(|&k| k.rem_euclid(p) != 0) {
            rep.add_term(&m.0, c.clone());
        }
    }
    FrobClass { rep }
}

/// The dimension of the span of a family of classes, by exact Gaussian
/// elimination on the coefficient matrix over the surviving monomials.
///
/// An empty family has span dimension 0.  All classes must share one ring.
pub fn span_dim(classes: &[FrobClass]) -> Result<usize> {
    let Some(first) = classes.first() else {
        return Ok(0);
    };
    let ring = first.ring();
    for c in classes {
        if c.ring() != ring {
            return Err(Error::RingMismatch(
                "span_dim requires classes from one ring".into(),
            ));
        }
    }
    let mut support: Vec<Monomial> = Vec::new();
    {
        let mut seen = std::collections::BTreeSet::new();
        for c in classes {
            for (m, _) in c.rep.terms() {
                if seen.insert(m.clone()) {
                    support.push(m.clone());
                }
            }
        }
        support.sort();
    }
    let rows: Vec<Vec<_>> = classes
        .iter()
        .map(|c| support.iter().map(|m| c.rep.coeff(&m.0)).collect())
        .collect();
    Ok(linalg::rank(rows, support.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldSpec, PolyRing};

    fn ring(p: u64, laurent: bool) -> PolyRing {
        PolyRing::univar(FieldSpec::new(p, 1).expect("field"), "x", laurent).expect("ring")
    }

    #[test]
    fn class_keeps_only_non_p_power_monomials() {
        let r = ring(2, false);
        let f = r
            .from_int_terms(&[(&[0], 1), (&[2], 1), (&[3], 1)])
            .expect("1+x^2+x^3");
        assert_eq!(
            class_of(&f).rep(),
            &r.from_int_terms(&[(&[3], 1)]).expect("x^3")
        );
    }

    #[test]
    fn class_of_pth_power_vanishes() {
        for p in [2u64, 3, 5] {
            let r = ring(p, false);
            let f = r.from_int_terms(&[(&[p as i64], 1)]).expect("x^p");
            assert!(class_of(&f).is_zero());
        }
    }

    #[test]
    fn laurent_class_uses_euclidean_divisibility() {
        let r = ring(2, true);
        let f = r
            .from_int_terms(&[(&[-4], 1), (&[-1], 1)])
            .expect("x^-4+x^-1");
        assert_eq!(
            class_of(&f).rep(),
            &r.from_int_terms(&[(&[-1], 1)]).expect("x^-1")
        );
    }

    #[test]
    fn span_of_independent_classes() {
        let r = ring(2, false);
        let x = class_of(&r.from_int_terms(&[(&[1], 1)]).expect("x"));
        let x3 = class_of(&r.from_int_terms(&[(&[3], 1)]).expect("x^3"));
        assert_eq!(span_dim(&[x, x3]).expect("span"), 2);
    }

    #[test]
    fn span_of_zero_class_is_zero() {
        let r = ring(3, false);
        let zero = class_of(&r.zero());
        assert_eq!(span_dim(&[zero]).expect("span"), 0);
        assert_eq!(span_dim(&[]).expect("span"), 0);
    }

    #[test]
    fn span_collapses_dependent_classes() {
        let r = ring(2, false);
        let x = class_of(&r.from_int_terms(&[(&[1], 1)]).expect("x"));
        let x_plus_sq = class_of(&r.from_int_terms(&[(&[1], 1), (&[2], 1)]).expect("x+x^2"));
        assert_eq!(span_dim(&[x, x_plus_sq]).expect("span"), 1);
    }

    #[test]
    fn class_addition_matches_polynomial_addition() {
        let r = ring(3, false);
        let f = r.from_int_terms(&[(&[1], 2), (&[3], 1)]).expect("f");
        let g = r.from_int_terms(&[(&[1], 1), (&[2], 2)]).expect("g");
        let lhs = class_of(&f).add(&class_of(&g)).expect("class sum");
        let rhs = class_of(&f.add(&g));
        assert_eq!(lhs, rhs);
    }
}
