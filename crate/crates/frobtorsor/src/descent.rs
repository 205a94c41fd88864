//! Torsor families and their descent matrices on the radicial cover.
//!
//! Each supported torsor P over the base X trivializes on the degree-p cover
//! u ↦ u^p = x.  Writing k[P ×_X Cover] on its monomial basis in the torsor
//! coordinates, the trivialization expresses every twisted basis monomial
//! (an "e-monomial") as a cover-ring combination of untwisted monomials
//! ("z-monomials").  The [`DescentMatrix`] records those expansions:
//!
//! > `entries[i][j]` = coefficient of column-basis element j in the
//! > expansion of row-basis element i.
//!
//! The hom solver consumes rows: a constant vector a is admissible when
//! Σᵢ aᵢ·rowᵢ has all its entries in the base subring k[u^p].  Equivalently,
//! the transpose of the stored layout — one row per z-monomial — is the
//! constraint matrix A of the linear system A·a ∈ k[u^p]^size; displayed
//! block decompositions of descent data conventionally use that transposed,
//! constraint-side orientation.  Block-comparison helpers therefore read
//! blocks from the transpose; the stored orientation itself is pinned by the
//! requirement that μ_p and α_p matrices be (lower-)triangular with
//! e-monomial rows.
//!
//! Families:
//! - `mu_p`: μ_p-torsors over the torus, classified by an integer m (the
//!   torsor x ↦ x^m); the matrix is diag(u^{mj}).
//! - `alpha_powers`: (α_p)^⊕n-torsors over affine space, classified by an
//!   n-tuple of polynomials (yᵢ^p = fᵢ); the matrix is unipotent lower
//!   triangular of size p^n.
//! - `gl2_char2` (and `sl2_char2` via m = 0): the height-one Frobenius
//!   kernel of GL₂ in characteristic 2, classified by a 2×2 polynomial
//!   matrix f with determinant x^m.  The 16×16 matrix expands products of
//!   twisted matrix coordinates through e_{ab} ↦ Σ_c f'_{ac}(u)·z_{cb},
//!   where f'(u) is the p-th root of f transported to the cover, reduced in
//!   the commutative quotient with z_{cb}² = δ_{cb} (and e_{ab}² = δ_{ab}).

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{CoverRing, FieldSpec, Fq, Monomial, MultiPoly, PolyRing};
use crate::{Error, Result};

/// Default cap on descent-matrix size (number of rows).
pub const DEFAULT_SIZE_CAP: u64 = 4096;

/// Environment variable overriding [`DEFAULT_SIZE_CAP`].
pub const SIZE_CAP_ENV: &str = "FROBTORSOR_CAP";

/// The effective matrix-size cap: `FROBTORSOR_CAP` when set (a positive
/// integer), otherwise [`DEFAULT_SIZE_CAP`].
pub fn size_cap() -> Result<u64> {
    match std::env::var(SIZE_CAP_ENV) {
        Ok(raw) => match raw.trim().parse::<u64>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(Error::InvalidInput(format!(
                "{SIZE_CAP_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SIZE_CAP),
        Err(e) => Err(Error::InvalidInput(format!("cannot read {SIZE_CAP_ENV}: {e}"))),
    }
}

// ---------------------------------------------------------------------------
// Torsor specifications.
// ---------------------------------------------------------------------------

/// A torsor specification: the family plus its classifying data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsorSpec {
    /// μ_p-torsor over the torus given by x ↦ x^m.
    MuP {
        /// Coefficient field.
        field: FieldSpec,
        /// The classifying exponent; the torsor is y^p = x^m.
        m: i64,
    },
    /// (α_p)^⊕n-torsor over affine space given by yᵢ^p = fᵢ.
    AlphaPowers {
        /// The classifying polynomial tuple (shared non-Laurent ring, n ≥ 1).
        f: Vec<MultiPoly>,
    },
    /// GL₂-Frobenius-kernel torsor in characteristic 2 over the torus,
    /// classified by a polynomial matrix with determinant x^m.
    Gl2Char2 {
        /// Entry (1,1) of the classifying matrix.
        f11: MultiPoly,
        /// Entry (1,2).
        f12: MultiPoly,
        /// Entry (2,1).
        f21: MultiPoly,
        /// Entry (2,2).
        f22: MultiPoly,
        /// Exponent of the determinant: det f = x^m.
        m: u32,
    },
    /// SL₂-Frobenius-kernel torsor in characteristic 2 over the affine
    /// line, classified by a polynomial matrix with determinant 1.
    Sl2Char2 {
        /// Entry (1,1) of the classifying matrix.
        f11: MultiPoly,
        /// Entry (1,2).
        f12: MultiPoly,
        /// Entry (2,1).
        f21: MultiPoly,
        /// Entry (2,2).
        f22: MultiPoly,
    },
}

impl TorsorSpec {
    /// The family name used in JSON.
    pub fn family_name(&self) -> &'static str {
        match self {
            TorsorSpec::MuP { .. } => "mu_p",
            TorsorSpec::AlphaPowers { .. } => "alpha_powers",
            TorsorSpec::Gl2Char2 { .. } => "gl2_char2",
            TorsorSpec::Sl2Char2 { .. } => "sl2_char2",
        }
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldSpec {
        match self {
            TorsorSpec::MuP { field, .. } => *field,
            TorsorSpec::AlphaPowers { f } => f[0].field(),
            TorsorSpec::Gl2Char2 { f11, .. } => f11.field(),
            TorsorSpec::Sl2Char2 { f11, .. } => f11.field(),
        }
    }

    /// Checks the family invariants, returning a diagnostic naming the
    /// violated requirement.
    pub fn validate(&self) -> Result<()> {
        match self {
            TorsorSpec::MuP { .. } => Ok(()),
            TorsorSpec::AlphaPowers { f } => {
                if f.is_empty() {
                    return Err(Error::InvalidTorsor(
                        "alpha_powers requires n ≥ 1 classifying polynomials".into(),
                    ));
                }
                let ring = f[0].ring();
                if f.iter().any(|g| g.ring() != ring) {
                    return Err(Error::InvalidTorsor(
                        "alpha_powers polynomials must share one ring".into(),
                    ));
                }
                if ring.laurent().iter().any(|&l| l) {
                    return Err(Error::InvalidTorsor(
                        "alpha_powers lives over affine space: no Laurent variables".into(),
                    ));
                }
                Ok(())
            }
            TorsorSpec::Gl2Char2 { f11, f12, f21, f22, m } => {
                let quad = [f11, f12, f21, f22];
                validate_char2_matrix(&quad)?;
                let det = det2(f11, f12, f21, f22);
                let ring = f11.ring();
                let xm = ring
                    .monomial(&[*m as i64], ring.field().one())
                    .expect("monomial x^m");
                if det != xm {
                    return Err(Error::InvalidTorsor(format!(
                        "gl2_char2 requires det f = x^{m}, got {det}"
                    )));
                }
                Ok(())
            }
            TorsorSpec::Sl2Char2 { f11, f12, f21, f22 } => {
                let quad = [f11, f12, f21, f22];
                validate_char2_matrix(&quad)?;
                let det = det2(f11, f12, f21, f22);
                if !det.is_one() {
                    return Err(Error::InvalidTorsor(format!(
                        "sl2_char2 requires det f = 1, got {det}"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn validate_char2_matrix(quad: &[&MultiPoly; 4]) -> Result<()> {
    let ring = quad[0].ring();
    if ring.field().p() != 2 {
        return Err(Error::InvalidTorsor(
            "this family requires characteristic 2".into(),
        ));
    }
    if ring.nvars() != 1 {
        return Err(Error::InvalidTorsor(
            "classifying matrix entries must be one-variable polynomials".into(),
        ));
    }
    for g in quad {
        if g.ring() != ring {
            return Err(Error::InvalidTorsor(
                "classifying matrix entries must share one ring".into(),
            ));
        }
        if g.terms().any(|(mono, _)| mono.0[0] < 0) {
            return Err(Error::InvalidTorsor(
                "classifying matrix entries must be polynomials (no negative exponents)".into(),
            ));
        }
    }
    Ok(())
}

/// The 2×2 determinant f11·f22 − f12·f21.
pub fn det2(f11: &MultiPoly, f12: &MultiPoly, f21: &MultiPoly, f22: &MultiPoly) -> MultiPoly {
    f11.mul(f22).sub(&f12.mul(f21))
}

// ---------------------------------------------------------------------------
// The descent matrix.
// ---------------------------------------------------------------------------

/// A square matrix over the cover ring recording the trivialization of a
/// torsor on the radicial cover; see the module docs for the orientation
/// convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentMatrix {
    family: String,
    cover: CoverRing,
    entries: Vec<Vec<MultiPoly>>,
    row_basis: Vec<String>,
    col_basis: Vec<String>,
}

impl DescentMatrix {
    fn new(
        family: &str,
        cover: CoverRing,
        entries: Vec<Vec<MultiPoly>>,
        row_basis: Vec<String>,
        col_basis: Vec<String>,
    ) -> Self {
        let size = entries.len();
        debug_assert!(entries.iter().all(|r| r.len() == size));
        debug_assert_eq!(row_basis.len(), size);
        debug_assert_eq!(col_basis.len(), size);
        DescentMatrix {
            family: family.to_string(),
            cover,
            entries,
            row_basis,
            col_basis,
        }
    }

    /// The family name this matrix was built from.
    pub fn family(&self) -> &str {
        &self.family
    }

    /// Number of rows (= columns) = dim_k k[G].
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// The base/cover ring pair.
    pub fn cover(&self) -> &CoverRing {
        &self.cover
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldSpec {
        self.cover.field()
    }

    /// All entries, row-major.
    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    /// A single entry.
    pub fn entry(&self, row: usize, col: usize) -> &MultiPoly {
        &self.entries[row][col]
    }

    /// Row labels (e-monomials, the twisted basis).
    pub fn row_basis(&self) -> &[String] {
        &self.row_basis
    }

    /// Column labels (z-monomials, the untwisted basis).
    pub fn col_basis(&self) -> &[String] {
        &self.col_basis
    }

    /// The constraint-side view: entry (i, j) of the transpose.  Block
    /// comparisons against displayed descent data use this orientation.
    pub fn constraint_entry(&self, row: usize, col: usize) -> &MultiPoly {
        &self.entries[col][row]
    }

    /// True when all entries strictly above the diagonal vanish.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.size()).all(|i| (i + 1..self.size()).all(|j| self.entries[i][j].is_zero()))
    }

    /// True when the diagonal is identically 1.
    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.size()).all(|i| self.entries[i][i].is_one())
    }

    /// The exact determinant.
    ///
    /// Computed as the diagonal product for triangular matrices and by
    /// fraction-free (Bareiss) elimination with exact division for
    /// one-variable matrices.
    pub fn det(&self) -> Result<MultiPoly> {
        let n = self.size();
        let ring = self.cover.cover();
        if self.is_lower_triangular() || self.is_upper_triangular() {
            let mut acc = ring.one();
            for i in 0..n {
                acc = acc.mul(&self.entries[i][i]);
            }
            return Ok(acc);
        }
        if ring.nvars() != 1 {
            return Err(Error::InvalidInput(
                "determinant is supported for triangular or one-variable matrices".into(),
            ));
        }
        let mut m = self.entries.clone();
        let mut negate = false;
        let mut prev = ring.one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(ring.zero());
                };
                m.swap(k, swap);
                negate = !negate;
            }
            if k + 1 == n {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num.exact_div_univar(&prev)?;
                }
                m[i][k] = ring.zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }

    fn is_upper_triangular(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.entries[i][j].is_zero()))
    }

    /// True when the determinant is a unit of the cover ring: a single term
    /// whose exponents are invertible (any monomial for Laurent variables,
    /// constants otherwise).
    pub fn det_is_unit(&self) -> Result<bool> {
        let det = self.det()?;
        Ok(poly_is_unit_monomial(&det))
    }
}

/// True when the polynomial is a single nonzero term that is a unit of its
/// ring (nonzero exponents only in Laurent variables).
pub fn poly_is_unit_monomial(f: &MultiPoly) -> bool {
    if f.nterms() != 1 {
        return false;
    }
    let (mono, _) = f.terms().next().expect("single term");
    mono.0
        .iter()
        .zip(f.ring().laurent())
        .all(|(&k, &laurent)| laurent || k == 0)
}

// ---------------------------------------------------------------------------
// Builders.
// ---------------------------------------------------------------------------

/// Builds the descent matrix for any supported family.  `sl2_char2` routes
/// through the GL₂ builder with m = 0 (its criterion-side derivation
/// restricts the torsor to the torus).
pub fn build(spec: &TorsorSpec) -> Result<DescentMatrix> {
    spec.validate()?;
    match spec {
        TorsorSpec::MuP { field, m } => build_mu_p(*field, *m),
        TorsorSpec::AlphaPowers { f } => build_alpha(f),
        TorsorSpec::Gl2Char2 { f11, f12, f21, f22, m } => {
            build_gl2_char2(f11, f12, f21, f22, *m)
        }
        TorsorSpec::Sl2Char2 { f11, f12, f21, f22 } => build_gl2_char2(f11, f12, f21, f22, 0),
    }
}

/// The μ_p matrix diag(u^{mj}), j = 0..p−1, with row labels (ȳz̄)^j and
/// column labels z̄^j.
pub fn build_mu_p(field: FieldSpec, m: i64) -> Result<DescentMatrix> {
    let p = field.p();
    let cap = size_cap()?;
    if p > cap {
        return Err(Error::CapExceeded {
            size: p as u128,
            cap: cap as u128,
        });
    }
    let base = PolyRing::univar(field, "x", true)?;
    let cover = CoverRing::new(base)?;
    let n = p as usize;
    let mut entries = vec![vec![cover.cover().zero(); n]; n];
    let mut row_basis = Vec::with_capacity(n);
    let mut col_basis = Vec::with_capacity(n);
    for j in 0..n {
        entries[j][j] = cover
            .cover()
            .monomial(&[m * j as i64], field.one())
            .expect("Laurent monomial");
        row_basis.push(crate::algebra::power_string("(y*z)", j as i64));
        col_basis.push(crate::algebra::power_string("z", j as i64));
    }
    Ok(DescentMatrix::new("mu_p", cover, entries, row_basis, col_basis))
}

/// The (α_p)^⊕n matrix of size p^n: row J is the expansion of
/// ∏ᵢ (yᵢ + zᵢ)^{jᵢ} with yᵢ = f'ᵢ(u), over the graded-lexicographically
/// ordered exponent tuples J ∈ [0, p)^n.  Unipotent lower triangular.
pub fn build_alpha(f: &[MultiPoly]) -> Result<DescentMatrix> {
    let spec = TorsorSpec::AlphaPowers { f: f.to_vec() };
    spec.validate()?;
    let field = f[0].field();
    let p = field.p();
    let n = f.len();
    let cap = size_cap()?;
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(p as u128);
        if size > cap as u128 {
            return Err(Error::CapExceeded { size, cap: cap as u128 });
        }
    }
    let size = size as usize;
    let cover = CoverRing::new(f[0].ring().clone())?;
    let roots: Vec<MultiPoly> = f
        .iter()
        .map(|g| cover.pth_root_to_cover(g))
        .collect::<Result<_>>()?;
    // Powers f'ᵢ^k for k < p.
    let powers: Vec<Vec<MultiPoly>> = roots
        .iter()
        .map(|r| {
            let mut v = vec![cover.cover().one()];
            for k in 1..p as usize {
                v.push(v[k - 1].mul(r));
            }
            v
        })
        .collect();
    let binom = pascal_mod_p(p);
    // Exponent tuples in graded-lexicographic order.
    let mut tuples: Vec<Vec<i64>> = Vec::with_capacity(size);
    let mut counter = vec![0i64; n];
    loop {
        tuples.push(counter.clone());
        let mut i = n;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < p as i64 {
                break;
            }
            counter[i] = 0;
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
        if tuples.len() == size {
            break;
        }
    }
    tuples.sort_by(|a, b| Monomial(a.clone()).cmp(&Monomial(b.clone())));
    let index: BTreeMap<Vec<i64>, usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut entries = vec![vec![cover.cover().zero(); size]; size];
    for (row, j_tuple) in tuples.iter().enumerate() {
        // Expand ∏ (yᵢ + zᵢ)^{jᵢ}: the coefficient of z^L is
        // ∏ C(jᵢ, lᵢ)·f'ᵢ^{jᵢ−lᵢ}.
        let mut l_tuple = vec![0i64; n];
        loop {
            let mut coeff = field.one();
            let mut poly = cover.cover().one();
            for i in 0..n {
                coeff = coeff.mul(&binom[j_tuple[i] as usize][l_tuple[i] as usize]);
                poly = poly.mul(&powers[i][(j_tuple[i] - l_tuple[i]) as usize]);
            }
            let col = index[&l_tuple];
            entries[row][col] = poly.scale(&coeff);
            // Next L ≤ J componentwise.
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                l_tuple[i] += 1;
                if l_tuple[i] <= j_tuple[i] {
                    break;
                }
                l_tuple[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    let row_basis = tuples.iter().map(|t| alpha_label(t, n, true)).collect();
    let col_basis = tuples.iter().map(|t| alpha_label(t, n, false)).collect();
    Ok(DescentMatrix::new(
        "alpha_powers",
        cover,
        entries,
        row_basis,
        col_basis,
    ))
}

fn alpha_label(tuple: &[i64], n: usize, twisted: bool) -> String {
    let parts: Vec<String> = tuple
        .iter()
        .enumerate()
        .filter(|&(_, &j)| j != 0)
        .map(|(i, &j)| {
            let name = match (twisted, n) {
                (true, 1) => "(y+z)".to_string(),
                (true, _) => format!("(y{0}+z{0})", i + 1),
                (false, 1) => "z".to_string(),
                (false, _) => format!("z{}", i + 1),
            };
            crate::algebra::power_string(&name, j)
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn pascal_mod_p(p: u64) -> Vec<Vec<Fq>> {
    let field = FieldSpec::new(p, 1).expect("prime field");
    let n = p as usize;
    let mut rows = vec![vec![field.zero(); n]; n];
    for a in 0..n {
        rows[a][0] = field.one();
        for b in 1..=a {
            let up = rows[a - 1][b - 1].clone();
            let left = if b <= a - 1 {
                rows[a - 1][b].clone()
            } else {
                field.zero()
            };
            rows[a][b] = up.add(&left);
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// GL₂ kernel in characteristic 2.
// ---------------------------------------------------------------------------

/// Bit index of matrix position (a, b) ∈ {1,2}², in the order 11, 12, 21, 22.
fn pos_bit(a: usize, b: usize) -> u8 {
    (((a - 1) << 1) | (b - 1)) as u8
}

/// The 16 square-free monomial masks in display order: the unit, the two
/// column-pair quadratics, the quartic; the four linear monomials; the four
/// remaining quadratics; the four cubics.
const GL2_BASIS_ORDER: [u8; 16] = [
    0b0000, 0b0101, 0b1010, 0b1111, // 1, ν11ν21, ν12ν22, ν11ν12ν21ν22
    0b0001, 0b0010, 0b0100, 0b1000, // ν11, ν12, ν21, ν22
    0b0011, 0b1001, 0b0110, 0b1100, // ν11ν12, ν11ν22, ν12ν21, ν21ν22
    0b0111, 0b1011, 0b1101, 0b1110, // ν11ν12ν21, ν11ν12ν22, ν11ν21ν22, ν12ν21ν22
];

fn gl2_position_of(mask: u8) -> usize {
    GL2_BASIS_ORDER
        .iter()
        .position(|&m| m == mask)
        .expect("mask in basis")
}

fn gl2_label(mask: u8, letter: char) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for (bit, name) in [(0u8, "11"), (1, "12"), (2, "21"), (3, "22")] {
        if mask & (1 << bit) != 0 {
            parts.push(format!("{letter}{name}"));
        }
    }
    parts.join("*")
}

/// The 16×16 descent matrix of the GL₂ Frobenius-kernel torsor classified
/// by f (det f = x^m) in characteristic 2.
///
/// Row M (a square-free product of twisted coordinates e_{ab}) is expanded
/// through e_{ab} ↦ Σ_c f'_{ac}(u)·z_{cb} and reduced with z_{cb}² = δ_{cb};
/// the identity f'₁₁f'₂₂ + f'₁₂f'₂₁ = u^m (the p-th root of det f = x^m)
/// makes the result invertible over the Laurent cover ring.
pub fn build_gl2_char2(
    f11: &MultiPoly,
    f12: &MultiPoly,
    f21: &MultiPoly,
    f22: &MultiPoly,
    m: u32,
) -> Result<DescentMatrix> {
    let spec = TorsorSpec::Gl2Char2 {
        f11: f11.clone(),
        f12: f12.clone(),
        f21: f21.clone(),
        f22: f22.clone(),
        m,
    };
    spec.validate()?;
    let field = f11.field();
    // Normalize to a Laurent base ring (the family lives over the torus).
    let var = f11.ring().vars()[0].clone();
    let base = PolyRing::univar(field, &var, true)?;
    let cover = CoverRing::new(base.clone())?;
    let root = |g: &MultiPoly| -> Result<MultiPoly> {
        cover.pth_root_to_cover(&g.map_to_ring(&base)?)
    };
    // roots[a-1][c-1] = f'_{ac}.
    let roots = [
        [root(f11)?, root(f12)?],
        [root(f21)?, root(f22)?],
    ];
    let zero = cover.cover().zero();
    let mut entries = vec![vec![zero.clone(); 16]; 16];
    for (row, &mask) in GL2_BASIS_ORDER.iter().enumerate() {
        // Expand the product of e_{ab} over the set bits of the mask inside
        // the z-algebra: map from z-mask to cover-ring coefficient.
        let mut expansion: BTreeMap<u8, MultiPoly> = BTreeMap::new();
        expansion.insert(0, cover.cover().one());
        for a in 1..=2usize {
            for b in 1..=2usize {
                if mask & (1 << pos_bit(a, b)) == 0 {
                    continue;
                }
                let mut next: BTreeMap<u8, MultiPoly> = BTreeMap::new();
                for (&zmask, coeff) in &expansion {
                    for c in 1..=2usize {
                        let gen_bit = 1u8 << pos_bit(c, b);
                        let term = coeff.mul(&roots[a - 1][c - 1]);
                        if zmask & gen_bit == 0 {
                            add_into(&mut next, zmask | gen_bit, term);
                        } else if c == b {
                            // z_{cc}² = 1: the generator bit cancels.
                            add_into(&mut next, zmask & !gen_bit, term);
                        }
                        // z_{cb}² = 0 for c ≠ b: the term dies.
                    }
                }
                expansion = next;
            }
        }
        for (zmask, poly) in expansion {
            if !poly.is_zero() {
                entries[row][gl2_position_of(zmask)] = poly;
            }
        }
    }
    let row_basis = GL2_BASIS_ORDER.iter().map(|&m| gl2_label(m, 'e')).collect();
    let col_basis = GL2_BASIS_ORDER.iter().map(|&m| gl2_label(m, 'z')).collect();
    Ok(DescentMatrix::new(
        "gl2_char2",
        cover,
        entries,
        row_basis,
        col_basis,
    ))
}

fn add_into(map: &mut BTreeMap<u8, MultiPoly>, key: u8, value: MultiPoly) {
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&value);
            *o.get_mut() = sum;
        }
    }
}

// ---------------------------------------------------------------------------
// JSON for TorsorSpec.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TorsorSpecJson {
    format: u32,
    family: String,
    p: u64,
    e: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<Vec<MultiPoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f11: Option<MultiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f12: Option<MultiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f21: Option<MultiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f22: Option<MultiPoly>,
}

impl Serialize for TorsorSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let field = self.field();
        let mut json = TorsorSpecJson {
            format: 1,
            family: self.family_name().to_string(),
            p: field.p(),
            e: field.e(),
            m: None,
            f: None,
            f11: None,
            f12: None,
            f21: None,
            f22: None,
        };
        match self {
            TorsorSpec::MuP { m, .. } => json.m = Some(*m),
            TorsorSpec::AlphaPowers { f } => json.f = Some(f.clone()),
            TorsorSpec::Gl2Char2 { f11, f12, f21, f22, m } => {
                json.m = Some(*m as i64);
                json.f11 = Some(f11.clone());
                json.f12 = Some(f12.clone());
                json.f21 = Some(f21.clone());
                json.f22 = Some(f22.clone());
            }
            TorsorSpec::Sl2Char2 { f11, f12, f21, f22 } => {
                json.f11 = Some(f11.clone());
                json.f12 = Some(f12.clone());
                json.f21 = Some(f21.clone());
                json.f22 = Some(f22.clone());
            }
        }
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TorsorSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TorsorSpecJson::deserialize(deserializer)?;
        if raw.format != 1 {
            return Err(D::Error::custom(format!(
                "unsupported torsor spec format {}",
                raw.format
            )));
        }
        let field = FieldSpec::new(raw.p, raw.e).map_err(D::Error::custom)?;
        let check_field = |poly: &MultiPoly| -> std::result::Result<(), D::Error> {
            if poly.field() != field {
                return Err(D::Error::custom(
                    "polynomial field does not match the torsor spec's p and e",
                ));
            }
            Ok(())
        };
        let quad = |raw: &TorsorSpecJson| -> std::result::Result<[MultiPoly; 4], D::Error> {
            match (&raw.f11, &raw.f12, &raw.f21, &raw.f22) {
                (Some(a), Some(b), Some(c), Some(d)) => {
                    for g in [a, b, c, d] {
                        check_field(g)?;
                    }
                    Ok([a.clone(), b.clone(), c.clone(), d.clone()])
                }
                _ => Err(D::Error::custom(
                    "this family requires fields f11, f12, f21, f22",
                )),
            }
        };
        let spec = match raw.family.as_str() {
            "mu_p" => {
                let m = raw
                    .m
                    .ok_or_else(|| D::Error::custom("mu_p requires an integer m"))?;
                TorsorSpec::MuP { field, m }
            }
            "alpha_powers" => {
                let f = raw
                    .f
                    .clone()
                    .ok_or_else(|| D::Error::custom("alpha_powers requires a polynomial list f"))?;
                for g in &f {
                    check_field(g)?;
                }
                TorsorSpec::AlphaPowers { f }
            }
            "gl2_char2" => {
                let [f11, f12, f21, f22] = quad(&raw)?;
                let m = raw
                    .m
                    .ok_or_else(|| D::Error::custom("gl2_char2 requires an integer m"))?;
                let m = u32::try_from(m)
                    .map_err(|_| D::Error::custom("gl2_char2 requires m ≥ 0"))?;
                TorsorSpec::Gl2Char2 { f11, f12, f21, f22, m }
            }
            "sl2_char2" => {
                let [f11, f12, f21, f22] = quad(&raw)?;
                TorsorSpec::Sl2Char2 { f11, f12, f21, f22 }
            }
            other => {
                return Err(D::Error::custom(format!("unknown torsor family {other:?}")));
            }
        };
        spec.validate().map_err(D::Error::custom)?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// JSON for DescentMatrix.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    format: u32,
    family: String,
    p: u64,
    e: u32,
    size: usize,
    base_vars: Vec<String>,
    cover_vars: Vec<String>,
    laurent: Vec<bool>,
    row_basis: Vec<String>,
    col_basis: Vec<String>,
    entries: Vec<Vec<MultiPoly>>,
}

impl Serialize for DescentMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            format: 1,
            family: self.family.clone(),
            p: self.field().p(),
            e: self.field().e(),
            size: self.size(),
            base_vars: self.cover.base().vars().to_vec(),
            cover_vars: self.cover.cover().vars().to_vec(),
            laurent: self.cover.base().laurent().to_vec(),
            row_basis: self.row_basis.clone(),
            col_basis: self.col_basis.clone(),
            entries: self.entries.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DescentMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.format != 1 {
            return Err(D::Error::custom(format!(
                "unsupported matrix format {}",
                raw.format
            )));
        }
        let field = FieldSpec::new(raw.p, raw.e).map_err(D::Error::custom)?;
        let base = PolyRing::new(field, &raw.base_vars, &raw.laurent).map_err(D::Error::custom)?;
        let cover = CoverRing::new(base).map_err(D::Error::custom)?;
        if cover.cover().vars() != raw.cover_vars.as_slice() {
            return Err(D::Error::custom(format!(
                "cover variables must be {:?} for this base",
                cover.cover().vars()
            )));
        }
        if raw.entries.len() != raw.size
            || raw.entries.iter().any(|r| r.len() != raw.size)
            || raw.row_basis.len() != raw.size
            || raw.col_basis.len() != raw.size
        {
            return Err(D::Error::custom(
                "matrix entries and basis labels must all have the declared size",
            ));
        }
        for row in &raw.entries {
            for poly in row {
                if poly.ring() != cover.cover() {
                    return Err(D::Error::custom(
                        "matrix entries must live in the declared cover ring",
                    ));
                }
            }
        }
        Ok(DescentMatrix {
            family: raw.family,
            cover,
            entries: raw.entries,
            row_basis: raw.row_basis,
            col_basis: raw.col_basis,
        })
    }
}
