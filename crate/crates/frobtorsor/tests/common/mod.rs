//! Shared helpers for the integration suites: seeded random generators for
//! polynomials and torsor specs, and the independently-built expected block
//! layout of the 16×16 matrix for the char-2 GL₂ kernel family.

#![allow(dead_code)]

use rand::Rng;

use frobtorsor::algebra::{CoverRing, FieldSpec, MultiPoly, PolyRing};
use frobtorsor::descent::TorsorSpec;

/// A random polynomial over `ring` with per-variable degree ≤ `deg` and at
/// most `max_terms` monomials (possibly zero).
pub fn random_poly<R: Rng>(
    rng: &mut R,
    ring: &PolyRing,
    deg: i64,
    max_terms: usize,
) -> MultiPoly {
    let field = ring.field();
    let nterms = rng.gen_range(0..=max_terms);
    let mut poly = ring.zero();
    for _ in 0..nterms {
        let exps: Vec<i64> = (0..ring.nvars()).map(|_| rng.gen_range(0..=deg)).collect();
        let coeff = field.element_by_index(rng.gen_range(0..field.order()));
        let term = ring.monomial(&exps, coeff).expect("random monomial");
        poly = poly.add(&term);
    }
    poly
}

/// A nonzero random polynomial (rejection sampling).
pub fn random_nonzero_poly<R: Rng>(
    rng: &mut R,
    ring: &PolyRing,
    deg: i64,
    max_terms: usize,
) -> MultiPoly {
    loop {
        let poly = random_poly(rng, ring, deg, max_terms);
        if !poly.is_zero() {
            return poly;
        }
    }
}

/// A random α-power spec: `npolys` random polynomials over `nvars`
/// variables x1..xk, coefficients in 𝔽_p.
pub fn random_alpha_spec<R: Rng>(
    rng: &mut R,
    p: u64,
    nvars: usize,
    npolys: usize,
    deg: i64,
) -> TorsorSpec {
    let field = FieldSpec::new(p, 1).expect("field");
    let names: Vec<String> = if nvars == 1 {
        vec!["x".into()]
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    };
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let ring = PolyRing::new(field, &name_refs, &vec![false; nvars]).expect("ring");
    let f = (0..npolys)
        .map(|_| random_poly(rng, &ring, deg, 4))
        .collect();
    TorsorSpec::AlphaPowers { f }
}

/// 2×2 polynomial matrices with the usual product.
pub type Mat2 = [[MultiPoly; 2]; 2];

/// Product of 2×2 polynomial matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let entry = |i: usize, j: usize| {
        a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]))
    };
    [
        [entry(0, 0), entry(0, 1)],
        [entry(1, 0), entry(1, 1)],
    ]
}

/// A random admissible GL₂ spec over 𝔽₂[x]: a product of elementary
/// matrices around diag(x^{m₁}, x^{m₂}), optionally left-translated by a
/// constant invertible matrix, so det = x^{m₁+m₂} exactly.
pub fn random_gl2_spec<R: Rng>(rng: &mut R, deg: i64, max_power: i64) -> TorsorSpec {
    let field = FieldSpec::new(2, 1).expect("field");
    let ring = PolyRing::univar(field, "x", false).expect("ring");
    let one = ring.one();
    let zero = ring.zero();
    let m1 = rng.gen_range(0..=max_power);
    let m2 = rng.gen_range(0..=max_power);
    let diag: Mat2 = [
        [
            ring.monomial(&[m1], field.one()).expect("x^m1"),
            zero.clone(),
        ],
        [
            zero.clone(),
            ring.monomial(&[m2], field.one()).expect("x^m2"),
        ],
    ];
    let mut mat = diag;
    for _ in 0..rng.gen_range(0..=3u32) {
        let a = random_poly(rng, &ring, deg, 3);
        let factor: Mat2 = if rng.gen_bool(0.5) {
            [[one.clone(), a], [zero.clone(), one.clone()]]
        } else {
            [[one.clone(), zero.clone()], [a, one.clone()]]
        };
        if rng.gen_bool(0.5) {
            mat = mat2_mul(&factor, &mat);
        } else {
            mat = mat2_mul(&mat, &factor);
        }
    }
    if rng.gen_bool(0.5) {
        // Swap rows: determinant −1 = 1 in characteristic 2.
        mat.swap(0, 1);
    }
    TorsorSpec::Gl2Char2 {
        f11: mat[0][0].clone(),
        f12: mat[0][1].clone(),
        f21: mat[1][0].clone(),
        f22: mat[1][1].clone(),
        m: (m1 + m2) as u32,
    }
}

/// A random SL₂ spec over 𝔽₂[x]: a product of elementary matrices, so
/// det = 1 exactly.
pub fn random_sl2_spec<R: Rng>(rng: &mut R, deg: i64) -> TorsorSpec {
    let spec = random_gl2_spec(rng, deg, 0);
    let TorsorSpec::Gl2Char2 { f11, f12, f21, f22, .. } = spec else {
        unreachable!("random_gl2_spec returns gl2 specs");
    };
    TorsorSpec::Sl2Char2 { f11, f12, f21, f22 }
}

/// The six invertible constant 2×2 matrices over 𝔽₂.
pub fn gl2_f2_constants(ring: &PolyRing) -> Vec<Mat2> {
    let o = ring.one();
    let z = ring.zero();
    let m = |a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly| -> Mat2 {
        [[a.clone(), b.clone()], [c.clone(), d.clone()]]
    };
    vec![
        m(&o, &z, &z, &o),
        m(&z, &o, &o, &z),
        m(&o, &o, &z, &o),
        m(&o, &z, &o, &o),
        m(&o, &o, &o, &z),
        m(&z, &o, &o, &o),
    ]
}

// ---------------------------------------------------------------------------
// Expected GL₂ block layout, built independently of the descent module.
// ---------------------------------------------------------------------------

/// Kronecker product of polynomial matrices, row-major, both factors in
/// listed index order.
pub fn kron(a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut out =
        vec![vec![a[0][0].ring().zero(); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j].mul(&b[k][l]);
                }
            }
        }
    }
    out
}

/// The expected constraint-view 16×16 matrix for a GL₂ spec, with `None`
/// at the one corner entry that is computed rather than displayed.
///
/// Basis quartets, in order: Q0 = (1, e₁₁e₂₁, e₁₂e₂₂, e₁₁e₁₂e₂₁e₂₂),
/// Q1 = (e₁₁, e₁₂, e₂₁, e₂₂), Q2 = (e₁₁e₁₂, e₁₁e₂₂, e₁₂e₂₁, e₂₁e₂₂),
/// Q3 = (e₁₁e₁₂e₂₁, e₁₁e₁₂e₂₂, e₁₁e₂₁e₂₂, e₁₂e₂₁e₂₂).  The layout is
/// block-diagonal C ⊕ B⊗E ⊕ B⊗B ⊕ B⊗x^m·E with one off-diagonal block
/// B⊗D in rows Q1 × columns Q3, where B is the entrywise p-th root of f
/// transposed, D couples the two column-product classes, and C is the
/// invariant-subalgebra block.
pub fn expected_gl2_constraint_view(
    cover: &CoverRing,
    f11: &MultiPoly,
    f12: &MultiPoly,
    f21: &MultiPoly,
    f22: &MultiPoly,
    m: u32,
) -> Vec<Vec<Option<MultiPoly>>> {
    let root = |f: &MultiPoly| {
        let in_base = f.map_to_ring(cover.base()).expect("map to base");
        cover.pth_root_to_cover(&in_base).expect("p-th root")
    };
    let (g11, g12, g21, g22) = (root(f11), root(f12), root(f21), root(f22));
    let ring = cover.cover();
    let one = ring.one();
    let zero = ring.zero();
    let um = ring
        .monomial(&[m as i64], ring.field().one())
        .expect("u^m");
    let u2m = um.mul(&um);
    let b = vec![
        vec![g11.clone(), g21.clone()],
        vec![g12.clone(), g22.clone()],
    ];
    let e = vec![
        vec![one.clone(), zero.clone()],
        vec![zero.clone(), one.clone()],
    ];
    let d = vec![
        vec![zero.clone(), g12.mul(&g22)],
        vec![g11.mul(&g21), zero.clone()],
    ];
    let um_e = vec![
        vec![um.clone(), zero.clone()],
        vec![zero.clone(), um.clone()],
    ];
    let c = vec![
        vec![one.clone(), g11.mul(&g21), g12.mul(&g22), zero.clone()],
        vec![zero.clone(), um.clone(), zero.clone(), g12.mul(&g22).mul(&um)],
        vec![zero.clone(), zero.clone(), um.clone(), g11.mul(&g21).mul(&um)],
        vec![zero.clone(), zero.clone(), zero.clone(), u2m.clone()],
    ];
    let mut expected: Vec<Vec<Option<MultiPoly>>> =
        vec![vec![Some(zero.clone()); 16]; 16];
    let mut place = |block: &[Vec<MultiPoly>], r0: usize, c0: usize| {
        for (i, row) in block.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                expected[r0 + i][c0 + j] = Some(entry.clone());
            }
        }
    };
    place(&c, 0, 0);
    place(&kron(&b, &e), 4, 4);
    place(&kron(&b, &d), 4, 12);
    place(&kron(&b, &b), 8, 8);
    place(&kron(&b, &um_e), 12, 12);
    // The quartic-row corner of C is computed by the expansion, not
    // asserted against a displayed value.
    expected[0][3] = None;
    expected
}
