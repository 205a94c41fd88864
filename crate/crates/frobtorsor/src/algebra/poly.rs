//! Sparse multivariate polynomials and Laurent polynomials over F_{p^e}.
//!
//! A [`MultiPoly`] is a map from exponent vectors to nonzero coefficients,
//! kept in a canonical graded-lexicographic order (total degree first, then
//! lexicographic comparison of exponent vectors).  Each variable carries an
//! individual Laurent flag; negative exponents are accepted exactly in the
//! flagged variables.  All operations preserve canonical form: no zero
//! coefficients are ever stored.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{power_string, FieldSpec, Fq};
use crate::{Error, Result};

/// An exponent vector with graded-lexicographic ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    /// Sum of exponents (the grade).
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial ring descriptor: coefficient field, ordered variable names,
/// and per-variable Laurent flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldSpec,
    vars: Vec<String>,
    laurent: Vec<bool>,
}

impl PolyRing {
    /// Creates a ring descriptor; variable names must be distinct and
    /// non-empty, and the Laurent flag list must match the variable list.
    pub fn new<S: AsRef<str>>(field: FieldSpec, vars: &[S], laurent: &[bool]) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        if names.iter().any(String::is_empty) {
            return Err(Error::InvalidInput("empty variable name".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[i + 1..].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate variable name {a:?}")));
            }
        }
        if names.len() != laurent.len() {
            return Err(Error::InvalidInput(format!(
                "{} variables but {} Laurent flags",
                names.len(),
                laurent.len()
            )));
        }
        Ok(PolyRing {
            field,
            vars: names,
            laurent: laurent.to_vec(),
        })
    }

    /// Convenience constructor for a one-variable ring.
    pub fn univar(field: FieldSpec, name: &str, laurent: bool) -> Result<Self> {
        PolyRing::new(field, &[name], &[laurent])
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Variable names, in order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Per-variable Laurent flags.
    pub fn laurent(&self) -> &[bool] {
        &self.laurent
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// The zero polynomial.
    pub fn zero(&self) -> MultiPoly {
        MultiPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The unit polynomial.
    pub fn one(&self) -> MultiPoly {
        self.constant(self.field.one())
    }

    /// A constant polynomial.
    pub fn constant(&self, c: Fq) -> MultiPoly {
        let mut poly = self.zero();
        poly.add_term(&vec![0; self.nvars()], c);
        poly
    }

    /// The constant n·1.
    pub fn constant_int(&self, n: u64) -> MultiPoly {
        self.constant(self.field.from_int(n))
    }

    /// The i-th variable as a polynomial.
    pub fn var(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars(), "variable index {i} out of range");
        let mut exps = vec![0i64; self.nvars()];
        exps[i] = 1;
        let mut poly = self.zero();
        poly.add_term(&exps, self.field.one());
        poly
    }

    /// A single term c·x^exps; validates exponent signs against the Laurent
    /// flags.
    pub fn monomial(&self, exps: &[i64], c: Fq) -> Result<MultiPoly> {
        self.check_exps(exps)?;
        let mut poly = self.zero();
        poly.add_term(exps, c);
        Ok(poly)
    }

    /// Builds a polynomial from (exponent vector, integer coefficient)
    /// pairs; convenient for prime fields.
    pub fn from_int_terms(&self, terms: &[(&[i64], u64)]) -> Result<MultiPoly> {
        let mut poly = self.zero();
        for (exps, c) in terms {
            self.check_exps(exps)?;
            poly.add_term(exps, self.field.from_int(*c));
        }
        Ok(poly)
    }

    fn check_exps(&self, exps: &[i64]) -> Result<()> {
        if exps.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "exponent vector of length {} in a {}-variable ring",
                exps.len(),
                self.nvars()
            )));
        }
        for (i, &k) in exps.iter().enumerate() {
            if k < 0 && !self.laurent[i] {
                return Err(Error::NegativeExponent(format!(
                    "exponent {k} of variable {}",
                    self.vars[i]
                )));
            }
        }
        Ok(())
    }

    /// The restriction of this ring to its first `k` variables.
    pub fn prefix_ring(&self, k: usize) -> PolyRing {
        PolyRing {
            field: self.field,
            vars: self.vars[..k].to_vec(),
            laurent: self.laurent[..k].to_vec(),
        }
    }
}

/// A sparse multivariate (Laurent) polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, Fq>,
}

impl MultiPoly {
    /// The ambient ring descriptor.
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    /// Term iterator in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fq)> {
        self.terms.iter()
    }

    /// Number of stored (nonzero) terms.
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the unit polynomial.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.0.iter().all(|&k| k == 0) && c.is_one())
                .unwrap_or(false)
    }

    /// True when the polynomial is a single term.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// The coefficient of an exponent vector (zero when absent).
    pub fn coeff(&self, exps: &[i64]) -> Fq {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Adds c·x^exps in place, dropping the term if it cancels.
    pub(crate) fn add_term(&mut self, exps: &[i64], c: Fq) {
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps.to_vec());
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &MultiPoly) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: vars {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    /// Sum of two polynomials in the same ring.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(&m.0, c.clone());
        }
        out
    }

    /// Additive inverse.
    pub fn neg(&self) -> MultiPoly {
        let mut out = self.ring.zero();
        for (m, c) in self.terms.iter() {
            out.add_term(&m.0, c.neg());
        }
        out
    }

    /// Difference of two polynomials in the same ring.
    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    /// Product of two polynomials in the same ring.
    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.ring.zero();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                let exps: Vec<i64> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(&exps, ca.mul(cb));
            }
        }
        out
    }

    /// Product with a scalar.
    pub fn scale(&self, c: &Fq) -> MultiPoly {
        let mut out = self.ring.zero();
        for (m, coeff) in self.terms.iter() {
            out.add_term(&m.0, coeff.mul(c));
        }
        out
    }

    /// Product with a single term.
    pub fn mul_term(&self, exps: &[i64], c: &Fq) -> MultiPoly {
        let mut out = self.ring.zero();
        for (m, coeff) in self.terms.iter() {
            let e: Vec<i64> = m.0.iter().zip(exps).map(|(a, b)| a + b).collect();
            out.add_term(&e, coeff.mul(c));
        }
        out
    }

    /// Nonnegative power by binary exponentiation.
    pub fn pow(&self, mut n: u64) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Largest exponent of each variable over all terms (zero for the zero
    /// polynomial).
    pub fn max_exponent_per_var(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.ring.nvars()];
        for (m, _) in self.terms.iter() {
            for (slot, &k) in out.iter_mut().zip(&m.0) {
                *slot = (*slot).max(k);
            }
        }
        out
    }

    /// Total degree (maximal grade; zero for the zero polynomial).
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Transplants the polynomial into a ring with the same number of
    /// variables (renaming variables and possibly changing Laurent flags);
    /// exponent signs are re-validated against the target flags.
    pub fn map_to_ring(&self, target: &PolyRing) -> Result<MultiPoly> {
        if target.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch(format!(
                "cannot map a {}-variable polynomial into a {}-variable ring",
                self.ring.nvars(),
                target.nvars()
            )));
        }
        if target.field() != self.ring.field {
            return Err(Error::RingMismatch(
                "cannot map between different coefficient fields".into(),
            ));
        }
        let mut out = target.zero();
        for (m, c) in self.terms.iter() {
            target.check_exps(&m.0)?;
            out.add_term(&m.0, c.clone());
        }
        Ok(out)
    }

    /// Substitutes a polynomial `g` (over the first n−1 variables) for the
    /// last variable, returning the result over the smaller ring.
    ///
    /// Negative exponents of the substituted variable are rejected, since
    /// `g` need not be invertible.
    pub fn substitute_last(&self, g: &MultiPoly) -> Result<MultiPoly> {
        let n = self.ring.nvars();
        if n == 0 {
            return Err(Error::RingMismatch(
                "cannot substitute in a 0-variable ring".into(),
            ));
        }
        let small = self.ring.prefix_ring(n - 1);
        if g.ring != small {
            return Err(Error::RingMismatch(format!(
                "substituent must live over the first {} variables {:?}",
                n - 1,
                small.vars
            )));
        }
        let mut powers: BTreeMap<i64, MultiPoly> = BTreeMap::new();
        let mut out = small.zero();
        for (m, c) in self.terms.iter() {
            let k = m.0[n - 1];
            if k < 0 {
                return Err(Error::InvalidInput(
                    "cannot substitute into a negative power of the last variable".into(),
                ));
            }
            let gk = powers
                .entry(k)
                .or_insert_with(|| g.pow(k as u64))
                .clone();
            let prefix = m.0[..n - 1].to_vec();
            out = out.add(&gk.mul_term(&prefix, c));
        }
        Ok(out)
    }

    /// Exact division for one-variable (Laurent) polynomials; errors if the
    /// division leaves a remainder or the divisor is zero.
    pub fn exact_div_univar(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        self.assert_same_ring(divisor);
        if self.ring.nvars() != 1 {
            return Err(Error::Internal(
                "exact_div_univar requires a one-variable ring".into(),
            ));
        }
        if divisor.is_zero() {
            return Err(Error::Internal("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let field = self.ring.field;
        let a_min = self.terms.keys().map(|m| m.0[0]).min().expect("nonzero");
        let a_max = self.terms.keys().map(|m| m.0[0]).max().expect("nonzero");
        let d_min = divisor.terms.keys().map(|m| m.0[0]).min().expect("nonzero");
        let d_max = divisor.terms.keys().map(|m| m.0[0]).max().expect("nonzero");
        let mut rem: Vec<Fq> = vec![field.zero(); (a_max - a_min + 1) as usize];
        for (m, c) in self.terms.iter() {
            rem[(m.0[0] - a_min) as usize] = c.clone();
        }
        let dlen = (d_max - d_min + 1) as usize;
        let mut div: Vec<Fq> = vec![field.zero(); dlen];
        for (m, c) in divisor.terms.iter() {
            div[(m.0[0] - d_min) as usize] = c.clone();
        }
        let lead_inv = div[dlen - 1].inv().expect("nonzero leading coefficient");
        let mut quot = self.ring.zero();
        let mut top = rem.len();
        while top >= dlen {
            let lead = rem[top - 1].clone();
            if !lead.is_zero() {
                let q = lead.mul(&lead_inv);
                let shift = top - dlen;
                for (j, dc) in div.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].sub(&q.mul(dc));
                }
                let exp = a_min + shift as i64 - d_min;
                if exp < 0 && !self.ring.laurent[0] {
                    return Err(Error::Internal(
                        "exact division produced a negative exponent in a non-Laurent ring".into(),
                    ));
                }
                quot.add_term(&[exp], q);
            }
            top -= 1;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(quot)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|&(_, &k)| k != 0)
                .map(|(i, &k)| power_string(&self.ring.vars[i], k))
                .collect();
            let coeff = format!("{c}");
            let coeff = if coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            let part = if mono.is_empty() {
                coeff
            } else if c.is_one() {
                mono.join("*")
            } else {
                format!("{coeff}*{}", mono.join("*"))
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// The arithmetic entry point used by tests and tools.
// ---------------------------------------------------------------------------

/// Binary polynomial operations exposed as a single entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    /// Addition.
    Add,
    /// Multiplication.
    Mul,
}

/// Adds or multiplies two polynomials, checking ring compatibility and
/// returning a diagnostic error on mismatched fields or variable sets.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly> {
    if a.field() != b.field() {
        return Err(Error::RingMismatch(format!(
            "coefficient fields differ: F_{}^{} vs F_{}^{}",
            a.field().p(),
            a.field().e(),
            b.field().p(),
            b.field().e()
        )));
    }
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(format!(
            "variable sets differ: {:?} vs {:?}",
            a.ring().vars(),
            b.ring().vars()
        )));
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Mul => a.mul(b),
    })
}

// ---------------------------------------------------------------------------
// JSON serialization (versioned polynomial format).
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u64,
    e: u32,
    vars: Vec<String>,
    laurent: Vec<bool>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeff: CoeffJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Int(u64),
    Vec(Vec<u64>),
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let e = self.ring.field.e();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                exp: m.0.clone(),
                coeff: if e == 1 {
                    CoeffJson::Int(c.coeffs()[0])
                } else {
                    CoeffJson::Vec(c.coeffs().to_vec())
                },
            })
            .collect();
        PolyJson {
            p: self.ring.field.p(),
            e,
            vars: self.ring.vars.clone(),
            laurent: self.ring.laurent.clone(),
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        let field = FieldSpec::new(raw.p, raw.e).map_err(D::Error::custom)?;
        let ring = PolyRing::new(field, &raw.vars, &raw.laurent).map_err(D::Error::custom)?;
        let mut poly = ring.zero();
        let mut seen = std::collections::BTreeSet::new();
        for term in &raw.terms {
            if !seen.insert(term.exp.clone()) {
                return Err(D::Error::custom(format!(
                    "duplicate exponent vector {:?} in polynomial terms",
                    term.exp
                )));
            }
            ring.check_exps(&term.exp).map_err(D::Error::custom)?;
            let coeff = match &term.coeff {
                CoeffJson::Int(n) => field.from_int(*n),
                CoeffJson::Vec(v) => field.from_coeffs(v).map_err(D::Error::custom)?,
            };
            poly.add_term(&term.exp, coeff);
        }
        Ok(poly)
    }
}
