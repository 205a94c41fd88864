//! Dimension reduction for α-power torsors over affine n-space.
//!
//! A saturated α-power torsor over 𝔸ⁿ can be restricted along a closed
//! immersion 𝔸^{n−1} ↪ 𝔸ⁿ of graph type x_n ↦ g(x₁, …, x_{n−1}) so that
//! the restriction is still saturated.  The substitution polynomial
//!
//!   g = ∏_{i=1}^{n−1} (xᵢ^{p^N} + xᵢ^M)
//!
//! works whenever M > d with p ∤ M and p^N > d(M+1), where d bounds every
//! per-variable exponent appearing in the relevant Frobenius classes.  The
//! inequalities force the three monomial families produced by the
//! substitution — the untouched x_n-free monomials, the M-corner images
//! ∏ xᵢ^{mᵢ+mₙM}, and the p^N-corner images ∏ xᵢ^{mᵢ+mₙp^N} — to stay
//! pairwise disjoint, so no cancellation can lower the span of any of the
//! tracked class subspaces.  Rather than trusting the inequality argument,
//! [`substitute_and_verify`] recomputes every span after substitution, and
//! [`reduce_torsor`] re-runs the solver on the reduced spec.

use serde::Serialize;

use crate::algebra::{MultiPoly, PolyRing};
use crate::descent::{self, TorsorSpec};
use crate::frobspace::{class_of, span_dim, FrobClass};
use crate::homsolver::solve_hom;
use crate::{Error, Result};

/// Parameters of a graph-type dimension-reduction substitution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BertiniPlan {
    /// Bound on every per-variable exponent in the tracked classes.
    pub d: i64,
    /// Smallest M > d with p ∤ M.
    #[serde(rename = "M")]
    pub big_m: i64,
    /// Smallest N ≥ 1 with p^N > d(M+1).
    #[serde(rename = "N")]
    pub big_n: u32,
    /// The substitution polynomial ∏_{i=1}^{n−1}(xᵢ^{p^N} + xᵢ^M), in the
    /// first n−1 variables of the ring the plan was made for.
    pub g: MultiPoly,
}

impl BertiniPlan {
    /// p^N as an integer exponent.
    pub fn p_pow_n(&self, p: u64) -> i64 {
        (p as i64).pow(self.big_n)
    }
}

/// Result of reducing a torsor to one fewer variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// The substitution plan that was applied.
    pub plan: BertiniPlan,
    /// The reduced spec, over one fewer variable, still saturated.
    pub reduced: TorsorSpec,
}

/// Builds ∏_{i=1}^{nvars}(xᵢ^{p^N} + xᵢ^M) in `ring`.
fn substitution_poly(ring: &PolyRing, big_m: i64, p_pow_n: i64) -> Result<MultiPoly> {
    let one = ring.field().one();
    let mut g = ring.one();
    for i in 0..ring.nvars() {
        let mut exp_hi = vec![0i64; ring.nvars()];
        let mut exp_lo = vec![0i64; ring.nvars()];
        exp_hi[i] = p_pow_n;
        exp_lo[i] = big_m;
        let factor = ring
            .monomial(&exp_hi, one.clone())?
            .add(&ring.monomial(&exp_lo, one.clone())?);
        g = g.mul(&factor);
    }
    Ok(g)
}

/// Chooses the smallest admissible substitution parameters for the class
/// subspaces `v` over `ring` (which must have n ≥ 2 variables): d is the
/// largest per-variable exponent over all canonical representatives, M the
/// smallest integer > d prime to p, and N the smallest positive integer
/// with p^N > d(M+1).
pub fn plan(ring: &PolyRing, v: &[Vec<FrobClass>]) -> Result<BertiniPlan> {
    let n = ring.nvars();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "dimension reduction needs at least 2 variables, found {n}"
        )));
    }
    if ring.laurent().iter().any(|&b| b) {
        return Err(Error::InvalidInput(
            "dimension reduction is defined over polynomial rings, not Laurent rings".into(),
        ));
    }
    let mut d: i64 = 0;
    for subspace in v {
        for class in subspace {
            if class.ring() != ring {
                return Err(Error::RingMismatch(
                    "class subspace ring differs from the plan ring".into(),
                ));
            }
            for e in class.rep().max_exponent_per_var() {
                d = d.max(e);
            }
        }
    }
    let p = ring.field().p() as i64;
    let mut big_m = d + 1;
    while big_m % p == 0 {
        big_m += 1;
    }
    let mut big_n: u32 = 1;
    while p.checked_pow(big_n).ok_or_else(|| {
        Error::InvalidInput("substitution exponent p^N overflows".into())
    })? <= d * (big_m + 1)
    {
        big_n += 1;
    }
    let g = substitution_poly(&ring.prefix_ring(n - 1), big_m, p.pow(big_n))?;
    Ok(BertiniPlan {
        d,
        big_m,
        big_n,
        g,
    })
}

/// Applies x_n ↦ g to every representative and checks that each subspace's
/// span dimension is preserved.  True for every plan produced by [`plan`];
/// false detects a bad substitution (for example g = x₁^p, which kills
/// the class of x_n).
pub fn substitute_and_verify(v: &[Vec<FrobClass>], plan: &BertiniPlan) -> Result<bool> {
    for subspace in v {
        let before = span_dim(subspace)?;
        let images: Vec<FrobClass> = subspace
            .iter()
            .map(|class| Ok(class_of(&class.rep().substitute_last(&plan.g)?)))
            .collect::<Result<_>>()?;
        if span_dim(&images)? != before {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reduces a saturated α-power spec over 𝔸ⁿ (n ≥ 2) to a saturated spec
/// over 𝔸^{n−1}: reads the class subspaces off the constraint view of the
/// descent matrix, plans the substitution at cover level, verifies span
/// preservation, substitutes x_n ↦ g into the classifying polynomials,
/// and re-runs the solver on the result.
pub fn reduce_torsor(spec: &TorsorSpec) -> Result<Reduction> {
    let TorsorSpec::AlphaPowers { f } = spec else {
        return Err(Error::InvalidInput(format!(
            "dimension reduction applies to alpha_powers specs, not {}",
            spec.family_name()
        )));
    };
    spec.validate()?;
    let base_ring = f[0].ring().clone();
    if base_ring.nvars() < 2 {
        return Err(Error::InvalidInput(format!(
            "dimension reduction needs at least 2 variables, found {}",
            base_ring.nvars()
        )));
    }
    let matrix = descent::build(spec)?;
    let solution = solve_hom(&matrix)?;
    if solution.dimension != 1 {
        return Err(Error::NotSaturated);
    }
    // One subspace per constraint row: the classes of the coefficients
    // multiplying the hom vector in that row's membership condition.
    let size = matrix.size();
    let v: Vec<Vec<FrobClass>> = (0..size)
        .map(|row| {
            (0..size)
                .map(|col| class_of(matrix.constraint_entry(row, col)))
                .collect()
        })
        .collect();
    let cover_plan = plan(matrix.cover().cover(), &v)?;
    if !substitute_and_verify(&v, &cover_plan)? {
        return Err(Error::Internal(
            "substitution failed to preserve the constraint class spans".into(),
        ));
    }
    // The same (M, N) works at base level: substitution commutes with
    // taking p-th roots because g has prime-field coefficients.
    let p = base_ring.field().p() as i64;
    let g_base = substitution_poly(
        &base_ring.prefix_ring(base_ring.nvars() - 1),
        cover_plan.big_m,
        p.pow(cover_plan.big_n),
    )?;
    let reduced_f: Vec<MultiPoly> = f
        .iter()
        .map(|fi| fi.substitute_last(&g_base))
        .collect::<Result<_>>()?;
    let reduced = TorsorSpec::AlphaPowers { f: reduced_f };
    let reduced_dim = solve_hom(&descent::build(&reduced)?)?.dimension;
    if reduced_dim != 1 {
        return Err(Error::Internal(format!(
            "reduced spec has hom dimension {reduced_dim}, expected 1"
        )));
    }
    Ok(Reduction {
        plan: cover_plan,
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn ring2(p: u64) -> PolyRing {
        PolyRing::new(
            FieldSpec::new(p, 1).expect("field"),
            &["x1", "x2"],
            &[false, false],
        )
        .expect("ring")
    }

    fn var(ring: &PolyRing, i: usize) -> MultiPoly {
        ring.var(i)
    }

    #[test]
    fn plan_smallest_parameters_char_2() {
        let ring = ring2(2);
        let v = vec![vec![class_of(&var(&ring, 0)), class_of(&var(&ring, 1))]];
        let plan = plan(&ring, &v).expect("plan");
        assert_eq!((plan.d, plan.big_m, plan.big_n), (1, 3, 3));
        let prefix = ring.prefix_ring(1);
        let expected = prefix
            .from_int_terms(&[(&[8], 1), (&[3], 1)])
            .expect("x1^8+x1^3");
        assert_eq!(plan.g, expected);
    }

    #[test]
    fn plan_smallest_parameters_char_3() {
        let ring = ring2(3);
        let v = vec![vec![class_of(&var(&ring, 0))]];
        let plan = plan(&ring, &v).expect("plan");
        assert_eq!((plan.d, plan.big_m, plan.big_n), (1, 2, 2));
        let prefix = ring.prefix_ring(1);
        let expected = prefix
            .from_int_terms(&[(&[9], 1), (&[2], 1)])
            .expect("x1^9+x1^2");
        assert_eq!(plan.g, expected);
    }

    #[test]
    fn plan_empty_subspaces_gives_frobenius_minus_identity() {
        let ring = PolyRing::new(
            FieldSpec::new(2, 1).expect("field"),
            &["x1", "x2", "x3"],
            &[false, false, false],
        )
        .expect("ring");
        let plan = plan(&ring, &[]).expect("plan");
        assert_eq!((plan.d, plan.big_m, plan.big_n), (0, 1, 1));
        // g = (x1^2+x1)(x2^2+x2).
        let prefix = ring.prefix_ring(2);
        let f1 = prefix
            .from_int_terms(&[(&[2, 0], 1), (&[1, 0], 1)])
            .expect("poly");
        let f2 = prefix
            .from_int_terms(&[(&[0, 2], 1), (&[0, 1], 1)])
            .expect("poly");
        assert_eq!(plan.g, f1.mul(&f2));
    }

    #[test]
    fn plan_rejects_univariate_rings() {
        let ring = PolyRing::univar(FieldSpec::new(2, 1).expect("field"), "x", false)
            .expect("ring");
        assert!(plan(&ring, &[]).is_err());
    }

    #[test]
    fn substitution_preserves_the_worked_example_spans() {
        let ring = ring2(2);
        let v = vec![vec![class_of(&var(&ring, 0)), class_of(&var(&ring, 1))]];
        let plan = plan(&ring, &v).expect("plan");
        assert!(substitute_and_verify(&v, &plan).expect("verify"));
        // The images are x̄₁ and the class of x₁⁸+x₁³ = x̄₁³: dimension 2.
        let image = class_of(
            &v[0][1]
                .rep()
                .substitute_last(&plan.g)
                .expect("substitute"),
        );
        let prefix = ring.prefix_ring(1);
        assert_eq!(
            image.rep(),
            &prefix.from_int_terms(&[(&[3], 1)]).expect("x1^3")
        );
    }

    #[test]
    fn substitution_preserves_zero_classes_trivially() {
        let ring = ring2(2);
        let v = vec![vec![class_of(&ring.zero())]];
        let plan = plan(&ring, &v).expect("plan");
        assert!(substitute_and_verify(&v, &plan).expect("verify"));
    }

    #[test]
    fn adversarial_frobenius_substitution_is_detected() {
        let ring = ring2(2);
        let v = vec![vec![class_of(&var(&ring, 1))]];
        let good = plan(&ring, &v).expect("plan");
        let prefix = ring.prefix_ring(1);
        let bad = BertiniPlan {
            g: prefix.from_int_terms(&[(&[2], 1)]).expect("x1^2"),
            ..good
        };
        // x₂ ↦ x₁² kills the class of x₂.
        assert!(!substitute_and_verify(&v, &bad).expect("verify"));
    }

    #[test]
    fn reduce_two_variable_pair_to_the_line() {
        let ring = ring2(2);
        let spec = TorsorSpec::AlphaPowers {
            f: vec![var(&ring, 0), var(&ring, 1)],
        };
        let reduction = reduce_torsor(&spec).expect("reduce");
        let prefix = ring.prefix_ring(1);
        let expected = TorsorSpec::AlphaPowers {
            f: vec![
                prefix.var(0),
                prefix
                    .from_int_terms(&[(&[8], 1), (&[3], 1)])
                    .expect("x1^8+x1^3"),
            ],
        };
        assert_eq!(reduction.reduced, expected);
        assert_eq!((reduction.plan.big_m, reduction.plan.big_n), (3, 3));
    }

    #[test]
    fn reduce_single_last_variable_class() {
        let ring = ring2(2);
        let spec = TorsorSpec::AlphaPowers {
            f: vec![var(&ring, 1)],
        };
        let reduction = reduce_torsor(&spec).expect("reduce");
        let prefix = ring.prefix_ring(1);
        let expected = TorsorSpec::AlphaPowers {
            f: vec![prefix
                .from_int_terms(&[(&[8], 1), (&[3], 1)])
                .expect("x1^8+x1^3")],
        };
        assert_eq!(reduction.reduced, expected);
    }

    #[test]
    fn reduce_rejects_unsaturated_input() {
        let ring = ring2(2);
        // x₁² has zero class: hom dimension 2.
        let f = ring.from_int_terms(&[(&[2, 0], 1)]).expect("x1^2");
        let spec = TorsorSpec::AlphaPowers { f: vec![f] };
        assert!(matches!(
            reduce_torsor(&spec),
            Err(Error::NotSaturated)
        ));
    }

    #[test]
    fn reduce_rejects_univariate_input() {
        let ring = PolyRing::univar(FieldSpec::new(2, 1).expect("field"), "x", false)
            .expect("ring");
        let spec = TorsorSpec::AlphaPowers {
            f: vec![ring.var(0)],
        };
        assert!(reduce_torsor(&spec).is_err());
    }

    #[test]
    fn reduce_iterates_from_three_variables_to_the_line() {
        let ring = PolyRing::new(
            FieldSpec::new(2, 1).expect("field"),
            &["x1", "x2", "x3"],
            &[false, false, false],
        )
        .expect("ring");
        let spec = TorsorSpec::AlphaPowers {
            f: vec![ring.var(0), ring.var(2)],
        };
        let first = reduce_torsor(&spec).expect("first reduction");
        let second = reduce_torsor(&first.reduced).expect("second reduction");
        let TorsorSpec::AlphaPowers { f } = &second.reduced else {
            panic!("reduction must stay in the alpha family");
        };
        assert_eq!(f[0].ring().nvars(), 1);
        assert!(
            solve_hom(&descent::build(&second.reduced).expect("matrix"))
                .expect("solve")
                .dimension
                == 1
        );
    }
}
