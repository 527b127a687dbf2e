//! Reduced enveloping algebras U_chi(l) in the PBW basis.
//!
//! A PBW monomial x_0^{a_0} x_1^{a_1} ... x_{N-1}^{a_{N-1}} with 0 <= a_i < p
//! is encoded as the integer sum a_i p^i. Products are straightened by
//! right-multiplying one generator at a time, using
//! `x_k x_j = x_j x_k + [x_k, x_j]` and `x_k^p = x_k^[p] + chi(x_k)^p`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::liealg::{Functional, LieElement, RestrictedLieAlgebra};
use crate::sparse::add_scaled;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Largest PBW dimension p^N the encoding accepts.
pub const MAX_PBW_DIM: u128 = 1 << 62;

pub type Monomial = u64;

type Terms = Arc<Vec<(Monomial, Elem)>>;

pub struct ReducedEnvAlgebra {
    id: u64,
    lie: Arc<RestrictedLieAlgebra>,
    chi: Functional,
    field: Field,
    n: usize,
    p: u64,
    powers: Vec<u64>,
    chi_p: Vec<Elem>,
    pbasis: Vec<Vec<(usize, Elem)>>,
    memo: RwLock<HashMap<(Monomial, usize), Terms>>,
}

impl fmt::Debug for ReducedEnvAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_chi({}) over {:?}", self.lie.name(), self.field)
    }
}

/// A sparse linear combination of PBW monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct EnvElement {
    algebra: u64,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EnvElement{:?}", self.terms)
    }
}

impl EnvElement {
    pub fn terms(&self) -> &BTreeMap<Monomial, Elem> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, m: Monomial) -> Elem {
        self.terms.get(&m).copied().unwrap_or(0)
    }
}

impl ReducedEnvAlgebra {
    /// U_chi(l) over `field`, which must contain the values of chi.
    pub fn new(lie: &Arc<RestrictedLieAlgebra>, chi: &Functional, field: &Field) -> Result<ReducedEnvAlgebra> {
        if chi.algebra_id() != lie.id() {
            return Err(Error::ParentMismatch);
        }
        if !field.contains_field(chi.field()) {
            return Err(Error::FieldMismatch);
        }
        let n = lie.dim();
        let p = lie.p() as u64;
        let dim = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > MAX_PBW_DIM {
            return Err(Error::SizeGuard {
                what: "PBW dimension",
                size: dim,
                limit: MAX_PBW_DIM,
            });
        }
        let powers = (0..=n as u32).map(|i| p.pow(i)).collect();
        let chi = chi.lift(field);
        let chi_p = chi.coeffs().iter().map(|&c| field.pow(c, p)).collect();
        let pbasis = (0..n)
            .map(|i| {
                lie.pbasis(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(m, &c)| (m, c))
                    .collect()
            })
            .collect();
        Ok(ReducedEnvAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            lie: lie.clone(),
            chi,
            field: field.clone(),
            n,
            p,
            powers,
            chi_p,
            pbasis,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// The restricted enveloping algebra u(l) = U_0(l) over GF(p).
    pub fn restricted(lie: &Arc<RestrictedLieAlgebra>) -> Result<ReducedEnvAlgebra> {
        ReducedEnvAlgebra::new(lie, &lie.zero_functional(), lie.field())
    }

    pub fn lie(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.lie
    }
    pub fn chi(&self) -> &Functional {
        &self.chi
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn generators(&self) -> usize {
        self.n
    }
    /// p^N.
    pub fn dim(&self) -> u64 {
        self.powers[self.n]
    }

    pub fn exponent(&self, m: Monomial, i: usize) -> u64 {
        (m / self.powers[i]) % self.p
    }

    pub fn exponents(&self, m: Monomial) -> Vec<u64> {
        (0..self.n).map(|i| self.exponent(m, i)).collect()
    }

    pub fn monomial_index(&self, exps: &[u64]) -> Result<Monomial> {
        if exps.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: exps.len(),
            });
        }
        if exps.iter().any(|&a| a >= self.p) {
            return Err(Error::InvalidInput("PBW exponents must be below p".into()));
        }
        Ok(exps.iter().zip(&self.powers).map(|(a, w)| a * w).sum())
    }

    pub fn degree(&self, m: Monomial) -> u64 {
        (0..self.n).map(|i| self.exponent(m, i)).sum()
    }

    fn top(&self, m: Monomial) -> Option<usize> {
        (0..self.n).rev().find(|&i| self.exponent(m, i) > 0)
    }

    pub fn zero(&self) -> EnvElement {
        EnvElement {
            algebra: self.id,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(&self, c: Elem) -> EnvElement {
        let mut e = self.zero();
        if c != 0 {
            e.terms.insert(0, c);
        }
        e
    }

    pub fn one(&self) -> EnvElement {
        self.scalar(1)
    }

    pub fn monomial(&self, m: Monomial) -> EnvElement {
        assert!(m < self.dim());
        let mut e = self.zero();
        e.terms.insert(m, 1);
        e
    }

    pub fn generator(&self, i: usize) -> EnvElement {
        self.monomial(self.powers[i])
    }

    /// The image of a Lie algebra element.
    pub fn from_lie(&self, x: &LieElement) -> Result<EnvElement> {
        if x.algebra_id() != self.lie.id() {
            return Err(Error::ParentMismatch);
        }
        if !self.field.contains_field(x.field()) {
            return Err(Error::FieldMismatch);
        }
        let mut e = self.zero();
        for (i, &c) in x.coeffs().iter().enumerate() {
            if c != 0 {
                e.terms.insert(self.powers[i], c);
            }
        }
        Ok(e)
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> EnvElement {
        let mut e = self.zero();
        for (m, c) in terms {
            self.accumulate(&mut e.terms, m, c);
        }
        e
    }

    fn accumulate(&self, acc: &mut BTreeMap<Monomial, Elem>, m: Monomial, c: Elem) {
        if c == 0 {
            return;
        }
        let e = acc.entry(m).or_insert(0);
        *e = self.field.add(*e, c);
        if *e == 0 {
            acc.remove(&m);
        }
    }

    fn owns(&self, u: &EnvElement) -> Result<()> {
        if u.algebra != self.id {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    /// Straightened product m * x_j.
    fn mono_times_gen(&self, m: Monomial, j: usize) -> Terms {
        if let Some(t) = self.memo.read().unwrap().get(&(m, j)) {
            return t.clone();
        }
        let f = &self.field;
        let mut acc = BTreeMap::new();
        match self.top(m) {
            Some(k) if k > j => {
                // m = m1 x_k, so m x_j = (m1 x_j) x_k + m1 [x_k, x_j]
                let m1 = m - self.powers[k];
                for &(u, c) in self.mono_times_gen(m1, j).iter() {
                    for &(v, d) in self.mono_times_gen(u, k).iter() {
                        self.accumulate(&mut acc, v, f.mul(c, d));
                    }
                }
                for &(t, s) in self.lie.bracket_terms(k, j) {
                    for &(v, d) in self.mono_times_gen(m1, t).iter() {
                        self.accumulate(&mut acc, v, f.mul(s, d));
                    }
                }
            }
            Some(k) if k == j && self.exponent(m, j) == self.p - 1 => {
                // m x_j = m2 x_j^p = m2 (x_j^[p] + chi(x_j)^p)
                let m2 = m - (self.p - 1) * self.powers[j];
                self.accumulate(&mut acc, m2, self.chi_p[j]);
                for &(t, s) in &self.pbasis[j] {
                    for &(v, d) in self.mono_times_gen(m2, t).iter() {
                        self.accumulate(&mut acc, v, f.mul(s, d));
                    }
                }
            }
            _ => {
                acc.insert(m + self.powers[j], 1);
            }
        }
        let t: Terms = Arc::new(acc.into_iter().collect());
        self.memo.write().unwrap().insert((m, j), t.clone());
        t
    }

    /// u * x_j.
    pub fn mul_generator(&self, u: &EnvElement, j: usize) -> EnvElement {
        let f = &self.field;
        let mut acc = BTreeMap::new();
        for (&m, &c) in &u.terms {
            for &(v, d) in self.mono_times_gen(m, j).iter() {
                self.accumulate(&mut acc, v, f.mul(c, d));
            }
        }
        EnvElement {
            algebra: self.id,
            terms: acc,
        }
    }

    /// x_j * u.
    pub fn generator_mul(&self, j: usize, u: &EnvElement) -> EnvElement {
        self.mul(&self.generator(j), u).unwrap()
    }

    /// Generator word of a PBW monomial, in order.
    pub fn word(&self, m: Monomial) -> Vec<usize> {
        let mut w = Vec::new();
        for i in 0..self.n {
            for _ in 0..self.exponent(m, i) {
                w.push(i);
            }
        }
        w
    }

    /// u * m for a single PBW monomial m.
    pub fn mul_monomial(&self, u: &EnvElement, m: Monomial) -> EnvElement {
        self.word(m)
            .into_iter()
            .fold(u.clone(), |acc, j| self.mul_generator(&acc, j))
    }

    pub fn mul(&self, u: &EnvElement, v: &EnvElement) -> Result<EnvElement> {
        self.owns(u)?;
        self.owns(v)?;
        let f = &self.field;
        let mut acc = BTreeMap::new();
        for (&m, &c) in &v.terms {
            let part = self.mul_monomial(u, m);
            add_scaled(f, &mut acc, c, &part.terms);
        }
        Ok(EnvElement {
            algebra: self.id,
            terms: acc,
        })
    }

    pub fn add(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let mut t = u.terms.clone();
        add_scaled(&self.field, &mut t, 1, &v.terms);
        EnvElement {
            algebra: self.id,
            terms: t,
        }
    }

    pub fn sub(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let mut t = u.terms.clone();
        add_scaled(&self.field, &mut t, self.field.neg(1), &v.terms);
        EnvElement {
            algebra: self.id,
            terms: t,
        }
    }

    pub fn scale(&self, u: &EnvElement, c: Elem) -> EnvElement {
        let mut t = BTreeMap::new();
        add_scaled(&self.field, &mut t, c, &u.terms);
        EnvElement {
            algebra: self.id,
            terms: t,
        }
    }

    pub fn commutator(&self, u: &EnvElement, v: &EnvElement) -> Result<EnvElement> {
        Ok(self.sub(&self.mul(u, v)?, &self.mul(v, u)?))
    }

    pub fn pow(&self, u: &EnvElement, e: u64) -> Result<EnvElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, u)?;
        }
        Ok(acc)
    }

    /// A random element with at most `terms` monomials of degree at most `max_degree`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, max_degree: u64) -> EnvElement {
        let mut acc = BTreeMap::new();
        for _ in 0..terms {
            let mut exps = vec![0; self.n];
            let mut budget = rng.gen_range(0..=max_degree);
            while budget > 0 {
                let i = rng.gen_range(0..self.n);
                if exps[i] + 1 < self.p {
                    exps[i] += 1;
                }
                budget -= 1;
            }
            let m = self.monomial_index(&exps).unwrap();
            self.accumulate(&mut acc, m, self.field.random(rng));
        }
        EnvElement {
            algebra: self.id,
            terms: acc,
        }
    }

    /// Canonical text form: terms in increasing monomial order, e.g. `2*E21^2*H1 + 1`.
    pub fn format(&self, u: &EnvElement) -> String {
        if u.terms.is_empty() {
            return "0".into();
        }
        let names = self.lie.basis_names();
        u.terms
            .iter()
            .map(|(&m, &c)| {
                let mut factors = Vec::new();
                for (i, name) in names.iter().enumerate().take(self.n) {
                    match self.exponent(m, i) {
                        0 => {}
                        1 => factors.push(name.clone()),
                        a => factors.push(format!("{name}^{a}")),
                    }
                }
                let coeff = self.field.format(c);
                match (factors.is_empty(), c == 1) {
                    (true, _) => coeff,
                    (false, true) => factors.join("*"),
                    (false, false) => format!("{coeff}*{}", factors.join("*")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Number of memoized generator products (for diagnostics).
    pub fn memo_size(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{sl, trace_dual};
    use crate::matrix::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sl2_commutation() {
        let g = sl(2, 5).unwrap();
        let u = ReducedEnvAlgebra::restricted(&g).unwrap();
        let e = u.from_lie(&g.named("E12").unwrap()).unwrap();
        let f = u.from_lie(&g.named("E21").unwrap()).unwrap();
        let h = u.from_lie(&g.named("H1").unwrap()).unwrap();
        let ef = u.mul(&e, &f).unwrap();
        let fe = u.mul(&f, &e).unwrap();
        assert_eq!(ef, u.add(&fe, &h));
        assert_eq!(u.format(&ef), "H1 + E21*E12");
    }

    #[test]
    fn reduction_relation() {
        let g = sl(2, 3).unwrap();
        let u0 = ReducedEnvAlgebra::restricted(&g).unwrap();
        let e = u0.from_lie(&g.named("E12").unwrap()).unwrap();
        assert!(u0.pow(&e, 3).unwrap().is_zero());
        let fld = g.field().clone();
        let chi = trace_dual(&g, &Matrix::unit(&fld, 2, 0, 1)).unwrap();
        let u = ReducedEnvAlgebra::new(&g, &chi, &fld).unwrap();
        let f = u.from_lie(&g.named("E21").unwrap()).unwrap();
        assert_eq!(u.pow(&f, 3).unwrap(), u.one());
    }

    #[test]
    fn exponents_stay_below_p() {
        let g = sl(2, 3).unwrap();
        let u = ReducedEnvAlgebra::restricted(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = u.random_element(&mut rng, 4, 6);
            let b = u.random_element(&mut rng, 4, 6);
            for &m in u.mul(&a, &b).unwrap().terms().keys() {
                assert!(m < u.dim());
            }
        }
    }
}
