//! Exact arithmetic in finite fields F_{p^e}.
//!
//! Prime fields are plain modular arithmetic.  Extension fields use the
//! polynomial basis 1, w, …, w^{e−1} modulo a fixed monic irreducible of
//! degree e over F_p: the lexicographically smallest one, where coefficient
//! tuples are compared constant coefficient first.  For F₄ this selects
//! w² + w + 1, so w·w = w + 1 and (w²)² = w.
//!
//! The field order is capped at 2²⁰ so that inverses by Fermat powering and
//! the irreducible search stay trivially cheap; every computation in this
//! crate uses tiny coefficient fields.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::{Error, Result};

/// Largest permitted field order p^e.
pub const MAX_FIELD_ORDER: u128 = 1 << 20;

/// A finite coefficient field F_{p^e}, identified by characteristic and
/// extension degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: u32,
}

impl FieldSpec {
    /// Creates a field specification, checking that `p` is prime, `e ≥ 1`,
    /// and the order p^e does not exceed [`MAX_FIELD_ORDER`].
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree e must be ≥ 1".into()));
        }
        let mut order: u128 = 1;
        for _ in 0..e {
            order = order.saturating_mul(p as u128);
            if order > MAX_FIELD_ORDER {
                return Err(Error::InvalidField(format!(
                    "field order p^e = {p}^{e} exceeds cap {MAX_FIELD_ORDER}"
                )));
            }
        }
        Ok(FieldSpec { p, e })
    }

    /// The characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The extension degree e.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// The field order q = p^e.
    pub fn order(&self) -> u64 {
        let mut q = 1u64;
        for _ in 0..self.e {
            q *= self.p;
        }
        q
    }

    /// Coefficients (constant first, without the leading 1) of the modulus
    /// polynomial used for the polynomial basis.  Empty for prime fields.
    pub fn modulus_tail(&self) -> Vec<u64> {
        if self.e == 1 {
            return Vec::new();
        }
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("modulus cache poisoned");
        guard
            .entry((self.p, self.e))
            .or_insert_with(|| smallest_irreducible_tail(self.p, self.e))
            .clone()
    }

    /// Renders the modulus polynomial, e.g. `"w^2 + w + 1"` for F₄.
    pub fn modulus_string(&self) -> String {
        if self.e == 1 {
            return format!("w - w (prime field F_{})", self.p);
        }
        let tail = self.modulus_tail();
        let mut parts = vec![power_string("w", self.e as i64)];
        for (i, &c) in tail.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = power_string("w", i as i64);
            if c == 1 && i > 0 {
                parts.push(mono);
            } else if i == 0 {
                parts.push(format!("{c}"));
            } else {
                parts.push(format!("{c}*{mono}"));
            }
        }
        parts.join(" + ")
    }

    /// The zero element.
    pub fn zero(&self) -> Fq {
        Fq {
            field: *self,
            c: vec![0; self.e as usize],
        }
    }

    /// The unit element.
    pub fn one(&self) -> Fq {
        let mut c = vec![0; self.e as usize];
        c[0] = 1;
        Fq { field: *self, c }
    }

    /// The element n·1 (the image of an integer).
    pub fn from_int(&self, n: u64) -> Fq {
        let mut c = vec![0; self.e as usize];
        c[0] = n % self.p;
        Fq { field: *self, c }
    }

    /// Builds an element from basis coordinates (constant first); shorter
    /// vectors are zero-padded, entries are reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq> {
        if coeffs.len() > self.e as usize {
            return Err(Error::InvalidInput(format!(
                "coefficient vector of length {} for field of degree {}",
                coeffs.len(),
                self.e
            )));
        }
        let mut c = vec![0; self.e as usize];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = x % self.p;
        }
        Ok(Fq { field: *self, c })
    }

    /// Enumerates all q field elements in a fixed order (coordinate counter,
    /// constant coordinate fastest).
    pub fn all_elements(&self) -> Vec<Fq> {
        let q = self.order();
        (0..q).map(|i| self.element_by_index(i)).collect()
    }

    /// The i-th element of the fixed enumeration, i < q.
    pub fn element_by_index(&self, mut i: u64) -> Fq {
        let mut c = vec![0; self.e as usize];
        for slot in c.iter_mut() {
            *slot = i % self.p;
            i /= self.p;
        }
        Fq { field: *self, c }
    }

    /// The index of an element in the fixed enumeration.
    pub fn index_of(&self, x: &Fq) -> u64 {
        let mut idx = 0u64;
        for &c in x.c.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }
}

/// An element of F_{p^e}, stored as basis coordinates (constant first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fq {
    field: FieldSpec,
    c: Vec<u64>,
}

impl Fq {
    /// The ambient field.
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Basis coordinates, constant coefficient first, length e.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// True for the unit element.
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    fn assert_same_field(&self, other: &Fq) {
        assert!(
            self.field == other.field,
            "field mismatch: F_{}^{} vs F_{}^{}",
            self.field.p,
            self.field.e,
            other.field.p,
            other.field.e
        );
    }

    /// Addition.
    pub fn add(&self, other: &Fq) -> Fq {
        self.assert_same_field(other);
        let p = self.field.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Fq {
            field: self.field,
            c,
        }
    }

    /// Additive inverse.
    pub fn neg(&self) -> Fq {
        let p = self.field.p;
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        Fq {
            field: self.field,
            c,
        }
    }

    /// Subtraction.
    pub fn sub(&self, other: &Fq) -> Fq {
        self.add(&other.neg())
    }

    /// Multiplication (schoolbook convolution, reduced by the modulus).
    pub fn mul(&self, other: &Fq) -> Fq {
        self.assert_same_field(other);
        let p = self.field.p;
        let e = self.field.e as usize;
        if e == 1 {
            return Fq {
                field: self.field,
                c: vec![(self.c[0] * other.c[0]) % p],
            };
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // Reduce: w^e = -(tail), folding degrees from the top down.
        let tail = self.field.modulus_tail();
        for i in (e..prod.len()).rev() {
            let a = prod[i];
            if a == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &t) in tail.iter().enumerate() {
                if t != 0 {
                    let sub = (a * t) % p;
                    prod[i - e + j] = (prod[i - e + j] + p - sub) % p;
                }
            }
        }
        prod.truncate(e);
        Fq {
            field: self.field,
            c: prod,
        }
    }

    /// Raises to a nonnegative power by binary exponentiation.
    pub fn pow(&self, mut n: u64) -> Fq {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// The unique p-th root, computed as c^{p^{e−1}} (Frobenius is bijective
    /// on a finite field).
    pub fn pth_root(&self) -> Fq {
        let e = self.field.e;
        if e == 1 {
            return self.clone();
        }
        let mut exp = 1u64;
        for _ in 0..(e - 1) {
            exp *= self.field.p;
        }
        self.pow(exp)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.e == 1 {
            return write!(f, "{}", self.c[0]);
        }
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = if i == 0 {
                format!("{c}")
            } else if c == 1 {
                power_string("w", i as i64)
            } else {
                format!("{c}*{}", power_string("w", i as i64))
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Renders `name^k`, eliding `^1` and mapping k = 0 to `"1"`.
pub(crate) fn power_string(name: &str, k: i64) -> String {
    match k {
        0 => "1".to_string(),
        1 => name.to_string(),
        _ => format!("{name}^{k}"),
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Irreducible modulus search (dense univariate arithmetic over F_p).
// ---------------------------------------------------------------------------

/// Finds the lexicographically smallest monic irreducible of degree e over
/// F_p and returns its non-leading coefficients, constant first.
fn smallest_irreducible_tail(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let mut tail = vec![0u64; e];
    loop {
        if is_irreducible(p, &tail) {
            return tail;
        }
        // Advance the tuple in lexicographic order, constant coefficient
        // most significant, so the first hit is the lex-smallest tuple.
        let mut i = e;
        loop {
            assert!(i > 0, "no irreducible of degree {e} over F_{p}");
            i -= 1;
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// Tests irreducibility of the monic polynomial w^e + tail by trial division
/// with every monic polynomial of degree 1..=e/2.
fn is_irreducible(p: u64, tail: &[u64]) -> bool {
    let e = tail.len();
    let mut poly = tail.to_vec();
    poly.push(1);
    for d in 1..=(e / 2) {
        // Enumerate monic divisor candidates of degree d.
        let mut dtail = vec![0u64; d];
        loop {
            let mut div = dtail.clone();
            div.push(1);
            if poly_rem_is_zero(p, &poly, &div) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                dtail[i] += 1;
                if dtail[i] < p {
                    break;
                }
                dtail[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

/// True when `divisor` (monic) divides `poly` exactly over F_p.
fn poly_rem_is_zero(p: u64, poly: &[u64], divisor: &[u64]) -> bool {
    let mut rem = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().expect("nonempty remainder");
        let deg = rem.len() - 1;
        if lead != 0 {
            for (j, &c) in divisor.iter().enumerate() {
                let idx = deg - dd + j;
                rem[idx] = (rem[idx] + p - (lead * c) % p) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().expect("nonempty") == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}
