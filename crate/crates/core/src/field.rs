//! Finite fields GF(p^k) for odd p.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_i` are the coefficients of the polynomial representative modulo
//! the field's defining polynomial. With this encoding GF(p) sits inside every
//! GF(p^k) as the integers `0..p`, so prime-field data (structure constants,
//! characters) can be used unchanged over any extension.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Raw element of a [`Field`]; only meaningful together with its field.
pub type Elem = u32;

/// Largest field order for which log/antilog tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Parameters of GF(p^k): characteristic, degree, and the defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, coefficients from the constant term upward (length k+1).
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    /// exp[i] = g^i for 0 <= i < q-1.
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] unused.
    log: Vec<u32>,
    /// Addition table for small non-prime fields.
    add: Option<Vec<u16>>,
}

/// Handle to a finite field. Cheap to clone; equal iff the specs are equal.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.k())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// GF(p^k) with the lexicographically least primitive modulus. Results are
    /// cached, so repeated calls return the same tables.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER || p >= 1 << 15 {
            return Err(Error::FieldTooLarge { p, k });
        }
        if let Some(f) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let field = Field::build(p, k, q as u32)?;
        cache()
            .lock()
            .unwrap()
            .entry((p, k))
            .or_insert(field.clone());
        Ok(field)
    }

    fn build(p: u32, k: u32, q: u32) -> Result<Field> {
        // Candidate moduli x^k + (low part) enumerated by the integer encoding
        // of the low part; the first one for which x has order q-1 wins.
        for low in 1..q {
            let mut modulus: Vec<u32> = digits(low, p, k as usize);
            if k == 1 {
                // x - g for a primitive root g.
                let g = low;
                modulus = vec![(p - g) % p];
            }
            modulus.push(1);
            if let Some(tables) = primitive_tables(p, k, q, &modulus) {
                return Field::from_tables(FieldSpec { p, k, modulus }, q, tables);
            }
        }
        Err(Error::ReducibleModulus(p))
    }

    fn from_tables(spec: FieldSpec, q: u32, (exp, log): (Vec<u32>, Vec<u32>)) -> Result<Field> {
        let (p, k) = (spec.p, spec.k);
        let base = Field::prime_unchecked(p);
        let poly = Poly::new(&base, spec.modulus.clone());
        if !poly.is_irreducible() {
            return Err(Error::ReducibleModulus(p));
        }
        let add = if k > 1 && q <= 1024 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b, p, k) as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Field(Arc::new(Tables {
            spec,
            q,
            exp,
            log,
            add,
        })))
    }

    /// Fixes the modulus used for GF(p^k) from now on. The modulus must be
    /// monic and primitive. Fails if the field was already built with a
    /// different modulus; re-registering the same spec is a no-op.
    pub fn register(spec: &FieldSpec) -> Result<Field> {
        let (p, k) = (spec.p, spec.k);
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || spec.modulus.len() != k as usize + 1 || spec.modulus[k as usize] != 1 {
            return Err(Error::InvalidInput(format!(
                "modulus for GF({p}^{k}) must be monic of degree {k}"
            )));
        }
        if spec.modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus coefficients must be residues mod p".into()));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER || p >= 1 << 15 {
            return Err(Error::FieldTooLarge { p, k });
        }
        let mut cache = cache().lock().unwrap();
        if let Some(f) = cache.get(&(p, k)) {
            if f.spec() == spec {
                return Ok(f.clone());
            }
            return Err(Error::InvalidInput(format!(
                "GF({p}^{k}) is already in use with modulus {:?}",
                f.spec().modulus
            )));
        }
        let tables = primitive_tables(p, k, q as u32, &spec.modulus).ok_or_else(|| {
            Error::InvalidInput(format!("modulus {:?} is not primitive over GF({p})", spec.modulus))
        })?;
        let field = Field::from_tables(spec.clone(), q as u32, tables)?;
        cache.insert((p, k), field.clone());
        Ok(field)
    }

    /// Minimal GF(p) handle used while bootstrapping tables (no log tables
    /// needed by the irreducibility test beyond inversion of small residues).
    fn prime_unchecked(p: u32) -> Field {
        let q = p;
        let mut g = 2 % p;
        let mut tables = None;
        while g < p {
            if let Some(t) = primitive_tables(p, 1, q, &[(p - g) % p, 1]) {
                tables = Some(t);
                break;
            }
            g += 1;
        }
        let (exp, log) = tables.expect("every prime field has a primitive root");
        Field(Arc::new(Tables {
            spec: FieldSpec {
                p,
                k: 1,
                modulus: vec![(p - g) % p, 1],
            },
            q,
            exp,
            log,
            add: None,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.0.spec.k
    }
    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }
    pub fn is_prime_field(&self) -> bool {
        self.k() == 1
    }

    /// The prime subfield GF(p).
    pub fn prime_subfield(&self) -> Field {
        Field::prime(self.p()).expect("p already validated")
    }

    /// Whether `other` embeds into `self` (same p, degree dividing ours).
    pub fn contains_field(&self, other: &Field) -> bool {
        self.p() == other.p() && (other.k() == 1 || self == other)
    }

    /// A generator of the multiplicative group (the class of x).
    pub fn generator(&self) -> Elem {
        self.0.exp[1 % self.0.exp.len()]
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }
    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_i64(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    /// Builds an element from polynomial coefficients (constant term first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Elem {
        let p = self.p() as i64;
        let mut acc = 0i64;
        for c in coeffs.iter().take(self.k() as usize).rev() {
            acc = acc * p + c.rem_euclid(p);
        }
        acc as Elem
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a, self.p(), self.k() as usize)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.spec.k == 1 {
            let s = a + b;
            let p = self.0.spec.p;
            if s >= p {
                s - p
            } else {
                s
            }
        } else if let Some(t) = &self.0.add {
            t[(a * self.0.q + b) as usize] as Elem
        } else {
            add_digits(a, b, self.p(), self.k())
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.spec.k == 1 {
            if a == 0 {
                0
            } else {
                self.0.spec.p - a
            }
        } else {
            let p = self.p();
            let mut out = 0u32;
            let mut place = 1u32;
            let mut x = a;
            for _ in 0..self.k() {
                let d = x % p;
                x /= p;
                out += ((p - d) % p) * place;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.spec.k == 1 {
            ((a as u64 * b as u64) % self.0.spec.p as u64) as Elem
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = self.0.q - 1;
            let s = self.0.log[a as usize] + self.0.log[b as usize];
            self.0.exp[(if s >= n { s - n } else { s }) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        Some(self.0.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % n)) % n) as usize]
    }

    /// The Frobenius automorphism x -> x^p.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p() as u64)
    }

    /// Inverse of Frobenius, x -> x^(q/p).
    pub fn frobenius_inv(&self, a: Elem) -> Elem {
        self.pow(a, self.order() as u64 / self.p() as u64)
    }

    /// dst += c * src, elementwise.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        if c == 0 {
            return;
        }
        if self.0.spec.k == 1 {
            let p = self.0.spec.p as u64;
            let c = c as u64;
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = ((*d as u64 + c * s as u64) % p) as Elem;
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = self.add(*d, self.mul(c, s));
                }
            }
        }
    }

    pub fn scale_in_place(&self, v: &mut [Elem], c: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        if self.0.spec.k == 1 {
            let p = self.0.spec.p as u64;
            let mut acc = 0u64;
            for (&x, &y) in a.iter().zip(b) {
                acc += x as u64 * y as u64;
                if acc >= 1 << 62 {
                    acc %= p;
                }
            }
            (acc % p) as Elem
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.order())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.order())
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order()
    }

    /// Wraps a raw element for operator-style arithmetic.
    pub fn elem(&self, a: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }

    /// Renders an element: plain integer over GF(p), `a+b*g+...` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.k() == 1 {
            return a.to_string();
        }
        let cs = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &c) in cs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c == 1 => "g".to_string(),
                1 => format!("{c}g"),
                _ if c == 1 => format!("g^{i}"),
                _ => format!("{c}g^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn digits(mut a: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

fn add_digits(mut a: u32, mut b: u32, p: u32, k: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Builds exp/log tables for x modulo `modulus` if x is primitive.
fn primitive_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    if modulus[0] == 0 {
        return None;
    }
    let n = (q - 1) as usize;
    let mut exp = Vec::with_capacity(n);
    let mut log = vec![u32::MAX; q as usize];
    // the class of x: for k = 1 this is the root of x - g, i.e. g.
    let x = if k == 1 { (p - modulus[0]) % p } else { p };
    let mut cur = 1u32;
    for i in 0..n {
        if log[cur as usize] != u32::MAX {
            return None;
        }
        log[cur as usize] = i as u32;
        exp.push(cur);
        cur = if k == 1 {
            ((cur as u64 * x as u64) % p as u64) as u32
        } else {
            mul_by_x(cur, p, k as usize, modulus)
        };
    }
    if cur != 1 {
        return None;
    }
    Some((exp, log))
}

fn mul_by_x(a: u32, p: u32, k: usize, modulus: &[u32]) -> u32 {
    let d = digits(a, p, k);
    let top = d[k - 1];
    let mut out = vec![0u32; k];
    for i in (1..k).rev() {
        out[i] = d[i - 1];
    }
    for i in 0..k {
        out[i] = (out[i] + (p - top) * modulus[i] % p) % p;
    }
    out.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// An element bundled with its field, for operator-style use.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.elem(self.field.pow(self.value, e))
    }
    pub fn frobenius(&self) -> FieldElement {
        self.field.elem(self.field.frobenius(self.value))
    }
    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(self.value).map(|v| self.field.elem(v))
    }
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "field mismatch");
                let v = $f(&self.field, self.value, rhs.value);
                FieldElement {
                    field: self.field,
                    value: v,
                }
            }
        }
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.clone().$m(rhs.clone())
            }
        }
    };
}

binop!(Add, add, |f: &Field, a, b| f.add(a, b));
binop!(Sub, sub, |f: &Field, a, b| f.sub(a, b));
binop!(Mul, mul, |f: &Field, a, b| f.mul(a, b));
binop!(Div, div, |f: &Field, a, b| f
    .div(a, b)
    .expect("division by zero"));

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let v = self.field.neg(self.value);
        FieldElement {
            field: self.field,
            value: v,
        }
    }
}
