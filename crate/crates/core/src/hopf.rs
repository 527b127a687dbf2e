//! The Hopf structure of u(l): coproduct through u(l + l) = u(l) (x) u(l),
//! counit, and the space of primitive elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::env::{EnvElement, Monomial, ReducedEnvAlgebra};
use crate::error::{Error, Result};
use crate::liealg::RestrictedLieAlgebra;
use crate::sparse::SparseEchelon;
use crate::subspace::Subspace;

/// Largest p^N for which `primitives` will run.
pub const PRIMITIVES_GUARD: u64 = 3000;

/// l + l with the left copy first.
pub fn direct_square(l: &RestrictedLieAlgebra) -> Result<RestrictedLieAlgebra> {
    let n = l.dim();
    let m = 2 * n;
    let mut consts = vec![0; m * m * m];
    let mut pbasis = vec![vec![0; m]; m];
    for shift in [0, n] {
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in l.bracket_terms(i, j) {
                    consts[((i + shift) * m + j + shift) * m + k + shift] = c;
                }
            }
            for (k, &c) in l.pbasis(i).iter().enumerate() {
                pbasis[i + shift][k + shift] = c;
            }
        }
    }
    let names = l
        .basis_names()
        .iter()
        .map(|s| format!("{s}(1)"))
        .chain(l.basis_names().iter().map(|s| format!("{s}(2)")))
        .collect();
    RestrictedLieAlgebra::new(format!("{0}+{0}", l.name()), l.field(), names, consts, pbasis)
}

/// u(l) together with its tensor square.
pub struct HopfAlgebra {
    base: ReducedEnvAlgebra,
    square: ReducedEnvAlgebra,
}

impl HopfAlgebra {
    /// Requires chi = 0: only u(l) carries the Hopf structure.
    pub fn new(base: ReducedEnvAlgebra) -> Result<HopfAlgebra> {
        if !base.chi().is_zero() {
            return Err(Error::InvalidInput("the coproduct needs a zero p-character".into()));
        }
        let sq = Arc::new(direct_square(base.lie())?);
        let square = ReducedEnvAlgebra::new(&sq, &sq.zero_functional(), base.field())?;
        Ok(HopfAlgebra { base, square })
    }

    pub fn base(&self) -> &ReducedEnvAlgebra {
        &self.base
    }
    pub fn square(&self) -> &ReducedEnvAlgebra {
        &self.square
    }

    /// a (x) b as an element of the tensor square.
    pub fn tensor(&self, a: Monomial, b: Monomial) -> Monomial {
        a + self.base.dim() * b
    }

    pub fn split(&self, t: Monomial) -> (Monomial, Monomial) {
        (t % self.base.dim(), t / self.base.dim())
    }

    /// Delta(x^a), multiplying Delta(x_i) = x_i (x) 1 + 1 (x) x_i along the
    /// PBW word with straightening in the tensor square.
    pub fn coproduct_monomial(&self, m: Monomial) -> EnvElement {
        let n = self.base.generators();
        let mut acc = self.square.one();
        for i in self.base.word(m) {
            let left = self.square.mul_generator(&acc, i);
            let right = self.square.mul_generator(&acc, i + n);
            acc = self.square.add(&left, &right);
        }
        acc
    }

    pub fn coproduct(&self, u: &EnvElement) -> EnvElement {
        let mut acc = self.square.zero();
        for (&m, &c) in u.terms() {
            acc = self.square.add(&acc, &self.square.scale(&self.coproduct_monomial(m), c));
        }
        acc
    }

    pub fn counit(&self, u: &EnvElement) -> u32 {
        u.coefficient(0)
    }

    /// (eps (x) id) t.
    pub fn counit_left(&self, t: &EnvElement) -> EnvElement {
        self.base.from_terms(t.terms().iter().filter_map(|(&m, &c)| {
            let (a, b) = self.split(m);
            (a == 0).then_some((b, c))
        }))
    }

    /// (id (x) eps) t.
    pub fn counit_right(&self, t: &EnvElement) -> EnvElement {
        self.base.from_terms(t.terms().iter().filter_map(|(&m, &c)| {
            let (a, b) = self.split(m);
            (b == 0).then_some((a, c))
        }))
    }

    /// Both sides of coassociativity, as maps into the triple tensor encoded
    /// by a + p^N b + p^{2N} c.
    pub fn coassociativity_sides(&self, u: &EnvElement) -> (BTreeMap<u128, u32>, BTreeMap<u128, u32>) {
        let f = self.base.field();
        let d = self.base.dim() as u128;
        let delta = self.coproduct(u);
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        let put = |acc: &mut BTreeMap<u128, u32>, k: u128, c: u32| {
            let e = acc.entry(k).or_insert(0);
            *e = f.add(*e, c);
            if *e == 0 {
                acc.remove(&k);
            }
        };
        for (&t, &c) in delta.terms() {
            let (a, b) = self.split(t);
            for (&s, &e) in self.coproduct_monomial(a).terms() {
                let (a1, a2) = self.split(s);
                put(&mut left, a1 as u128 + d * a2 as u128 + d * d * b as u128, f.mul(c, e));
            }
            for (&s, &e) in self.coproduct_monomial(b).terms() {
                let (b1, b2) = self.split(s);
                put(&mut right, a as u128 + d * b1 as u128 + d * d * b2 as u128, f.mul(c, e));
            }
        }
        (left, right)
    }

    /// Kernel of u -> Delta(u) - u (x) 1 - 1 (x) u in the PBW coordinates of u(l).
    pub fn primitives(&self) -> Result<Subspace> {
        let dim = self.base.dim();
        if dim > PRIMITIVES_GUARD {
            return Err(Error::SizeGuard {
                what: "primitive-element search",
                size: dim as u128,
                limit: PRIMITIVES_GUARD as u128,
            });
        }
        let f = self.base.field();
        let mut ech = SparseEchelon::new(f);
        for m in 0..dim {
            let mut row = self.coproduct_monomial(m).terms().clone();
            for t in [self.tensor(m, 0), self.tensor(0, m)] {
                let e = row.entry(t).or_insert(0);
                *e = f.sub(*e, 1);
                if *e == 0 {
                    row.remove(&t);
                }
            }
            ech.push(row);
        }
        Ok(ech.left_kernel())
    }
}
