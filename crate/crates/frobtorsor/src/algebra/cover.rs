//! The degree-p radicial cover ring and p-th-root transport.
//!
//! For a base ring k[x₁,…,xₙ] (with optional Laurent variables) in
//! characteristic p, the cover ring is k[u₁,…,uₙ] with uᵢ^p = xᵢ.  Since k
//! is perfect and the Frobenius is additive, every base element f has a
//! unique p-th root in the cover: term by term, c·x^E ↦ c^{1/p}·u^E, because
//! (c^{1/p}·u^E)^p = c·u^{pE} = c·x^E.  The base subring k[u₁^p,…,uₙ^p]
//! inside the cover consists exactly of the elements all of whose exponents
//! are divisible by p in every variable (negative exponents included, via
//! Euclidean remainders).

use super::field::FieldSpec;
use super::poly::{MultiPoly, PolyRing};
use crate::{Error, Result};

/// A base ring together with its degree-p radicial cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRing {
    base: PolyRing,
    cover: PolyRing,
}

impl CoverRing {
    /// Builds the cover of a base ring.  Cover variables are named `u` for a
    /// one-variable base and `u1`, `u2`, … otherwise.
    pub fn new(base: PolyRing) -> Result<Self> {
        let n = base.nvars();
        let cover_names: Vec<String> = if n == 1 {
            vec!["u".to_string()]
        } else {
            (1..=n).map(|i| format!("u{i}")).collect()
        };
        let cover = PolyRing::new(base.field(), &cover_names, base.laurent())?;
        Ok(CoverRing { base, cover })
    }

    /// The base ring descriptor.
    pub fn base(&self) -> &PolyRing {
        &self.base
    }

    /// The cover ring descriptor.
    pub fn cover(&self) -> &PolyRing {
        &self.cover
    }

    /// The characteristic p.
    pub fn p(&self) -> u64 {
        self.base.field().p()
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldSpec {
        self.base.field()
    }

    /// The unique p-th root of a base element, expressed in the cover ring:
    /// c·x^E ↦ c^{1/p}·u^E, so that the result raised to the p-th power is
    /// the image of f under x ↦ u^p.
    pub fn pth_root_to_cover(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.ring() != &self.base {
            return Err(Error::RingMismatch(
                "pth_root_to_cover expects an element of the base ring".into(),
            ));
        }
        let mut out = self.cover.zero();
        for (m, c) in f.terms() {
            out.add_term(&m.0, c.pth_root());
        }
        Ok(out)
    }

    /// The image of a base element under x ↦ u^p (the subring inclusion).
    pub fn embed_base(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.ring() != &self.base {
            return Err(Error::RingMismatch(
                "embed_base expects an element of the base ring".into(),
            ));
        }
        let p = self.p() as i64;
        let mut out = self.cover.zero();
        for (m, c) in f.terms() {
            let exps: Vec<i64> = m.0.iter().map(|&k| k * p).collect();
            out.add_term(&exps, c.clone());
        }
        Ok(out)
    }

    /// Whether a cover element lies in the base subring k[u^p] — i.e. every
    /// exponent of every variable is divisible by p.
    pub fn is_in_base_subring(&self, g: &MultiPoly) -> Result<bool> {
        if g.ring() != &self.cover {
            return Err(Error::RingMismatch(
                "is_in_base_subring expects an element of the cover ring".into(),
            ));
        }
        let p = self.p() as i64;
        Ok(g.terms()
            .all(|(m, _)| m.0.iter().all(|&k| k.rem_euclid(p) == 0)))
    }

    /// The p-th root of a base-subring element, expressed in the cover ring
    /// (exponents divided by p, coefficients rooted).  Errors if the element
    /// is not in the base subring.
    pub fn pth_root_in_cover(&self, g: &MultiPoly) -> Result<MultiPoly> {
        if !self.is_in_base_subring(g)? {
            return Err(Error::InvalidInput(
                "pth_root_in_cover requires an element of the base subring".into(),
            ));
        }
        let p = self.p() as i64;
        let mut out = self.cover.zero();
        for (m, c) in g.terms() {
            let exps: Vec<i64> = m.0.iter().map(|&k| k / p).collect();
            out.add_term(&exps, c.pth_root());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(p: u64, e: u32, laurent: bool) -> CoverRing {
        let field = FieldSpec::new(p, e).expect("field");
        let base = PolyRing::univar(field, "x", laurent).expect("base");
        CoverRing::new(base).expect("cover")
    }

    #[test]
    fn root_of_additive_polynomial_mod_2() {
        // p = 2: the root of 1 + x² + x³ is 1 + u + u·u^... textually 1 + u^2... —
        // coefficients are all 1, exponents transfer unchanged: 1 + u² + u³,
        // whose square is 1 + u⁴ + u⁶ = (1 + x² + x³) with x = u².
        let cr = cover(2, 1, false);
        let f = cr
            .base()
            .from_int_terms(&[(&[0], 1), (&[2], 1), (&[3], 1)])
            .expect("f");
        let root = cr.pth_root_to_cover(&f).expect("root");
        assert_eq!(
            root,
            cr.cover()
                .from_int_terms(&[(&[0], 1), (&[2], 1), (&[3], 1)])
                .expect("expected")
        );
        assert_eq!(root.pow(2), cr.embed_base(&f).expect("embed"));
    }

    #[test]
    fn root_of_pth_power_variable() {
        for p in [2u64, 3, 5] {
            let cr = cover(p, 1, false);
            let f = cr
                .base()
                .from_int_terms(&[(&[p as i64], 1)])
                .expect("x^p");
            let root = cr.pth_root_to_cover(&f).expect("root");
            assert_eq!(
                root,
                cr.cover().from_int_terms(&[(&[p as i64], 1)]).expect("u^p")
            );
        }
    }

    #[test]
    fn root_takes_coefficient_roots_in_f4() {
        // In F₄, the square root of w is w², so root(w·x) = w²·u.
        let cr = cover(2, 2, false);
        let field = cr.field();
        let w = field.from_coeffs(&[0, 1]).expect("w");
        let w2 = w.mul(&w);
        let f = cr.base().monomial(&[1], w).expect("w*x");
        let root = cr.pth_root_to_cover(&f).expect("root");
        assert_eq!(root, cr.cover().monomial(&[1], w2).expect("w^2*u"));
    }

    #[test]
    fn base_subring_membership_mod_2() {
        let cr = cover(2, 1, false);
        let yes = cr
            .cover()
            .from_int_terms(&[(&[4], 1), (&[0], 1)])
            .expect("u^4+1");
        let no = cr.cover().from_int_terms(&[(&[3], 1)]).expect("u^3");
        assert!(cr.is_in_base_subring(&yes).expect("check"));
        assert!(!cr.is_in_base_subring(&no).expect("check"));
    }

    #[test]
    fn base_subring_membership_needs_all_variables_divisible() {
        // p = 3, two variables: u³v⁶ qualifies, u²v³ does not.
        let field = FieldSpec::new(3, 1).expect("F3");
        let base = PolyRing::new(field, &["x1", "x2"], &[false, false]).expect("base");
        let cr = CoverRing::new(base).expect("cover");
        let g = cr
            .cover()
            .from_int_terms(&[(&[3, 6], 1), (&[2, 3], 1)])
            .expect("g");
        assert!(!cr.is_in_base_subring(&g).expect("check"));
        let h = cr.cover().from_int_terms(&[(&[3, 6], 1)]).expect("h");
        assert!(cr.is_in_base_subring(&h).expect("check"));
    }

    #[test]
    fn laurent_membership_uses_euclidean_remainders() {
        let cr = cover(2, 1, true);
        let g = cr.cover().from_int_terms(&[(&[-4], 1)]).expect("u^-4");
        assert!(cr.is_in_base_subring(&g).expect("check"));
        let h = cr.cover().from_int_terms(&[(&[-1], 1)]).expect("u^-1");
        assert!(!cr.is_in_base_subring(&h).expect("check"));
    }

    #[test]
    fn root_then_power_round_trips() {
        let cr = cover(3, 1, false);
        let f = cr
            .base()
            .from_int_terms(&[(&[0], 2), (&[1], 1), (&[4], 2)])
            .expect("f");
        let root = cr.pth_root_to_cover(&f).expect("root");
        assert_eq!(root.pow(3), cr.embed_base(&f).expect("embed"));
        // And the subring root splits the embedding.
        let embedded = cr.embed_base(&f).expect("embed");
        let back = cr.pth_root_in_cover(&embedded).expect("in-cover root");
        assert_eq!(back.pow(3), embedded);
    }
}
