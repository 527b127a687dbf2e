//! Univariate polynomials over a finite field: enough arithmetic for
//! irreducibility testing of field moduli and for splitting characteristic
//! polynomials in the module toolkit.

use rand::Rng;

use crate::field::{Elem, Field};

/// Dense polynomial, coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![1])
    }

    /// x
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                )
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.sub(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                )
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                f.axpy(&mut out[i..i + other.coeffs.len()], a, &other.coeffs);
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        if r.len() < dl {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead()).unwrap();
        let mut q = vec![0; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dl - 1], inv);
            q[i] = c;
            if c != 0 {
                let nc = f.neg(c);
                f.axpy(&mut r[i..i + dl], nc, &d.coeffs);
            }
        }
        r.truncate(dl - 1);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_i64(i as i64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Irreducibility over the coefficient field GF(q): f of degree k is
    /// irreducible iff gcd(f, x^{q^j} - x) = 1 for every 1 <= j < k.
    pub fn is_irreducible(&self) -> bool {
        let k = self.degree();
        if k <= 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let q = self.field.order() as u128;
        let x = Poly::x(&self.field);
        let mut xq = x.clone();
        for _ in 1..k {
            xq = xq.powmod(q, self);
            if xq.sub(&x).gcd(self).degree() != 0 {
                return false;
            }
        }
        true
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&a| f.frobenius_inv(a))
            .collect();
        Poly::new(f, c)
    }

    /// Square-free decomposition: pairs (g, m) with self = lead * prod g^m.
    pub fn squarefree(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        self.squarefree_into(1, &mut out);
        out
    }

    fn squarefree_into(&self, mult: u32, out: &mut Vec<(Poly, u32)>) {
        let p = self.field.p();
        let f = self.monic();
        if f.degree() <= 0 {
            return;
        }
        let d = f.derivative();
        if d.is_zero() {
            f.pth_root().squarefree_into(mult * p, out);
            return;
        }
        let mut c = f.gcd(&d);
        let mut w = f.divrem(&c).0;
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree() > 0 {
                out.push((z, i * mult));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree() > 0 {
            c.pth_root().squarefree_into(mult * p, out);
        }
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let q = self.field.order() as u128;
        let x = Poly::x(&self.field);
        let mut out = Vec::new();
        let mut f = self.monic();
        let mut xq = x.clone();
        let mut d = 1usize;
        while f.degree() >= 2 * d as isize {
            xq = xq.powmod(q, &f);
            let g = xq.sub(&x).gcd(&f);
            if g.degree() > 0 {
                out.push((g.clone(), d));
                f = f.divrem(&g).0;
                xq = xq.rem(&f);
            }
            d += 1;
        }
        if f.degree() > 0 {
            let deg = f.degree() as usize;
            out.push((f, deg));
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a product of distinct degree-d irreducibles.
    fn equal_degree<R: Rng + ?Sized>(&self, d: usize, rng: &mut R, out: &mut Vec<Poly>) {
        let n = self.degree() as usize;
        if n == d {
            out.push(self.monic());
            return;
        }
        let q = self.field.order() as u128;
        let e = (q.pow(d as u32) - 1) / 2;
        loop {
            let a = Poly::new(
                &self.field,
                (0..n).map(|_| self.field.random(rng)).collect(),
            );
            if a.degree() < 1 {
                continue;
            }
            let b = a.powmod(e, self).sub(&Poly::one(&self.field));
            let g = b.gcd(self);
            if g.degree() > 0 && g.degree() < self.degree() {
                let h = self.divrem(&g).0;
                g.equal_degree(d, rng, out);
                h.equal_degree(d, rng, out);
                return;
            }
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree then coefficients.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        for (sf, m) in self.squarefree() {
            for (g, d) in sf.distinct_degree() {
                let mut parts = Vec::new();
                g.equal_degree(d, rng, &mut parts);
                out.extend(parts.into_iter().map(|f| (f, m)));
            }
        }
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        out
    }
}
