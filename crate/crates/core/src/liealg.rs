//! Restricted Lie algebras given by structure constants and a p-map on a basis.
//!
//! The p-map is extended off the basis by Jacobson's formula
//! `(x + y)^[p] = x^[p] + y^[p] + sum_{n=1}^{p-1} s_n(x, y)` together with
//! p-semilinearity `(a x)^[p] = a^p x^[p]`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::report::CheckReport;
use crate::subspace::Subspace;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Which classical family a matrix-realized algebra belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    Sl,
}

/// Role of a basis vector of gl_n / sl_n (indices 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// E_ij with i != j.
    Root(usize, usize),
    /// H_i = E_ii - E_{i+1,i+1} for sl_n, or E_ii for gl_n.
    Cartan(usize),
}

impl BasisKind {
    pub fn is_negative(&self) -> bool {
        matches!(self, BasisKind::Root(i, j) if i > j)
    }
    pub fn is_positive(&self) -> bool {
        matches!(self, BasisKind::Root(i, j) if i < j)
    }
}

/// Matrix realization of a classical algebra.
#[derive(Clone, Debug)]
pub struct ClassicalData {
    pub family: Family,
    pub n: usize,
    pub matrices: Vec<Matrix>,
    pub kinds: Vec<BasisKind>,
}

pub struct RestrictedLieAlgebra {
    id: u64,
    name: String,
    field: Field,
    dim: usize,
    names: Vec<String>,
    /// consts[(i*N + j)*N + m] = c_ij^m
    consts: Vec<Elem>,
    /// sparse view of consts per ordered pair
    table: Vec<Vec<(usize, Elem)>>,
    pbasis: Vec<Vec<Elem>>,
    classical: Option<ClassicalData>,
}

impl fmt::Debug for RestrictedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, p = {})", self.name, self.dim, self.p())
    }
}

/// An element of a restricted Lie algebra, possibly over an extension of its
/// base field.
#[derive(Clone, PartialEq, Eq)]
pub struct LieElement {
    algebra: u64,
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement{:?}", self.coeffs)
    }
}

impl LieElement {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    fn same_parent(&self, other: &LieElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::ParentMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        assert_eq!(self.algebra, other.algebra);
        let f = &self.field;
        LieElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: Elem) -> LieElement {
        let f = &self.field;
        LieElement {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    /// The same element viewed over a larger field.
    pub fn lift(&self, field: &Field) -> LieElement {
        assert!(field.contains_field(&self.field));
        LieElement {
            field: field.clone(),
            ..self.clone()
        }
    }
}

/// A linear functional on a restricted Lie algebra, given on its basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Functional {
    algebra: u64,
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional{:?}", self.coeffs)
    }
}

impl Functional {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Evaluates on an element; the result lives in the larger of the two fields.
    pub fn eval(&self, x: &LieElement) -> Elem {
        assert_eq!(self.algebra, x.algebra, "functional and element from different algebras");
        let f = if x.field.k() >= self.field.k() { &x.field } else { &self.field };
        f.dot(&self.coeffs, &x.coeffs)
    }

    pub fn scale(&self, c: Elem) -> Functional {
        let f = &self.field;
        Functional {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn lift(&self, field: &Field) -> Functional {
        assert!(field.contains_field(&self.field));
        Functional {
            field: field.clone(),
            ..self.clone()
        }
    }

    /// Whether every coefficient lies in the prime field.
    pub fn is_over_prime_field(&self) -> bool {
        let p = self.field.p();
        self.coeffs.iter().all(|&c| c < p)
    }

    /// Whether the functional vanishes on a subspace of the algebra.
    pub fn vanishes_on(&self, s: &Subspace) -> bool {
        let f = if s.field().k() >= self.field.k() { s.field().clone() } else { self.field.clone() };
        s.basis_vectors().iter().all(|v| f.dot(&self.coeffs, v) == 0)
    }
}

/// Serializable form of an algebra: structure constants plus the p-map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescription {
    pub name: String,
    pub p: u32,
    pub basis: Vec<String>,
    /// Nonzero structure constants `[i, j, m, c]` with `[e_i, e_j] = ... + c e_m`, i < j.
    pub brackets: Vec<(usize, usize, usize, u32)>,
    /// `pmap[i]` = coordinates of `e_i^[p]`.
    pub pmap: Vec<Vec<u32>>,
}

impl RestrictedLieAlgebra {
    /// Builds an algebra from dense structure constants (`consts[(i*N+j)*N+m]`)
    /// and the p-map on the basis. Axioms are not checked here; see
    /// [`RestrictedLieAlgebra::verify_restricted`].
    pub fn new(
        name: impl Into<String>,
        field: &Field,
        names: Vec<String>,
        consts: Vec<Elem>,
        pbasis: Vec<Vec<Elem>>,
    ) -> Result<RestrictedLieAlgebra> {
        let n = names.len();
        if !field.is_prime_field() {
            return Err(Error::InvalidInput(
                "structure constants must live over the prime field".into(),
            ));
        }
        if consts.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: consts.len(),
            });
        }
        if pbasis.len() != n || pbasis.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: pbasis.len(),
            });
        }
        let p = field.p();
        if consts.iter().chain(pbasis.iter().flatten()).any(|&c| c >= p) {
            return Err(Error::InvalidInput("entries must be residues mod p".into()));
        }
        let table = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|m| {
                        let c = consts[ij * n + m];
                        (c != 0).then_some((m, c))
                    })
                    .collect()
            })
            .collect();
        Ok(RestrictedLieAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            field: field.clone(),
            dim: n,
            names,
            consts,
            table,
            pbasis,
            classical: None,
        })
    }

    pub(crate) fn with_classical(mut self, data: ClassicalData) -> Self {
        self.classical = Some(data);
        self
    }

    /// The abelian one-dimensional algebra with c^[p] = c.
    pub fn multiplicative(p: u32) -> Result<RestrictedLieAlgebra> {
        let f = Field::prime(p)?;
        RestrictedLieAlgebra::new("g_m", &f, vec!["c".into()], vec![0], vec![vec![1]])
    }

    /// Abelian algebra of dimension n with the given p-map on the basis.
    pub fn abelian(p: u32, pbasis: Vec<Vec<Elem>>) -> Result<RestrictedLieAlgebra> {
        let f = Field::prime(p)?;
        let n = pbasis.len();
        let names = (0..n).map(|i| format!("x{}", i + 1)).collect();
        RestrictedLieAlgebra::new(format!("abelian_{n}"), &f, names, vec![0; n * n * n], pbasis)
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn basis_names(&self) -> &[String] {
        &self.names
    }
    pub fn classical(&self) -> Option<&ClassicalData> {
        self.classical.as_ref()
    }
    pub fn structure_constant(&self, i: usize, j: usize, m: usize) -> Elem {
        self.consts[(i * self.dim + j) * self.dim + m]
    }
    /// Nonzero terms of [e_i, e_j].
    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(usize, Elem)] {
        &self.table[i * self.dim + j]
    }
    /// Coordinates of e_i^[p].
    pub fn pbasis(&self, i: usize) -> &[Elem] {
        &self.pbasis[i]
    }

    pub fn element(&self, field: &Field, coeffs: Vec<Elem>) -> Result<LieElement> {
        if coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coeffs.len(),
            });
        }
        if !field.contains_field(&self.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(LieElement {
            algebra: self.id,
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero(&self, field: &Field) -> LieElement {
        self.element(field, vec![0; self.dim]).unwrap()
    }

    pub fn basis_element(&self, i: usize, field: &Field) -> LieElement {
        let mut c = vec![0; self.dim];
        c[i] = 1;
        self.element(field, c).unwrap()
    }

    /// Basis element by name, over the base field.
    pub fn named(&self, name: &str) -> Option<LieElement> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.basis_element(i, &self.field))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, field: &Field, rng: &mut R) -> LieElement {
        let c = (0..self.dim).map(|_| field.random(rng)).collect();
        self.element(field, c).unwrap()
    }

    pub fn functional(&self, field: &Field, coeffs: Vec<Elem>) -> Result<Functional> {
        if coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coeffs.len(),
            });
        }
        Ok(Functional {
            algebra: self.id,
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero_functional(&self) -> Functional {
        self.functional(&self.field, vec![0; self.dim]).unwrap()
    }

    fn owns(&self, x: &LieElement) -> Result<()> {
        if x.algebra != self.id {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    fn bracket_raw(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.dim];
        self.bracket_acc(f, x, y, &mut out);
        out
    }

    /// out += [x, y]
    fn bracket_acc(&self, f: &Field, x: &[Elem], y: &[Elem], out: &mut [Elem]) {
        let n = self.dim;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || i == j {
                    continue;
                }
                let c = f.mul(xi, yj);
                for &(m, s) in &self.table[i * n + j] {
                    out[m] = f.add(out[m], f.mul(c, s));
                }
            }
        }
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.owns(x)?;
        x.same_parent(y)?;
        Ok(LieElement {
            coeffs: self.bracket_raw(&x.field, &x.coeffs, &y.coeffs),
            ..x.clone()
        })
    }

    /// Matrix of ad(x) on the basis: column j holds [x, e_j].
    pub fn ad_matrix(&self, x: &LieElement) -> Matrix {
        let f = &x.field;
        let n = self.dim;
        let mut m = Matrix::zeros(f, n, n);
        for (i, &xi) in x.coeffs.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..n {
                for &(k, s) in &self.table[i * n + j] {
                    m.set(k, j, f.add(m.get(k, j), f.mul(xi, s)));
                }
            }
        }
        m
    }

    /// Jacobson's s_n(a, b) for n = 1..p-1, read off from the expansion of
    /// (ad(aT + b))^{p-1}(a) as a polynomial in T: the T^{n-1} coefficient is
    /// n s_n(a, b).
    pub fn s_coefficients(&self, a: &LieElement, b: &LieElement) -> Result<Vec<LieElement>> {
        self.owns(a)?;
        a.same_parent(b)?;
        let raw = self.s_coefficients_raw(&a.field, &a.coeffs, &b.coeffs);
        Ok(raw
            .into_iter()
            .map(|c| LieElement {
                coeffs: c,
                ..a.clone()
            })
            .collect())
    }

    /// Flat coefficients: entry d*n + m is the T^d coefficient of
    /// ad(Ta + b)^{p-1}(a) on e_m, for d < p - 1.
    fn s_poly(&self, f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let p = self.p() as usize;
        let n = self.dim;
        let mut cur = vec![0; p * n];
        let mut next = vec![0; p * n];
        cur[..n].copy_from_slice(a);
        for t in 0..p - 1 {
            next[..(t + 2) * n].fill(0);
            for d in 0..=t {
                let c = &cur[d * n..(d + 1) * n];
                if c.iter().all(|&x| x == 0) {
                    continue;
                }
                self.bracket_acc(f, b, c, &mut next[d * n..(d + 1) * n]);
                self.bracket_acc(f, a, c, &mut next[(d + 1) * n..(d + 2) * n]);
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    fn s_coefficients_raw(&self, f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Vec<Elem>> {
        let p = self.p() as usize;
        let n = self.dim;
        let poly = self.s_poly(f, a, b);
        (1..p)
            .map(|k| {
                let inv = f.inv(f.from_i64(k as i64)).unwrap();
                poly[(k - 1) * n..k * n].iter().map(|&c| f.mul(c, inv)).collect()
            })
            .collect()
    }

    /// out += s_1(a, b) + ... + s_{p-1}(a, b)
    fn s_sum_acc(&self, f: &Field, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
        let p = self.p() as usize;
        let n = self.dim;
        let poly = self.s_poly(f, a, b);
        for k in 1..p {
            let inv = f.inv(f.from_i64(k as i64)).unwrap();
            f.axpy(out, inv, &poly[(k - 1) * n..k * n]);
        }
    }

    /// x^[p] by Jacobson's formula, peeling the lowest basis index first.
    pub fn p_power(&self, x: &LieElement) -> LieElement {
        let order: Vec<usize> = (0..self.dim).collect();
        self.p_power_ordered(x, &order)
    }

    /// x^[p] peeling support indices in the given order. The result does not
    /// depend on the order when the algebra is restricted.
    pub fn p_power_ordered(&self, x: &LieElement, order: &[usize]) -> LieElement {
        assert_eq!(x.algebra, self.id);
        let support: Vec<usize> = order.iter().copied().filter(|&i| x.coeffs[i] != 0).collect();
        LieElement {
            coeffs: self.p_power_rec(&x.field, &x.coeffs, &support),
            ..x.clone()
        }
    }

    fn p_power_rec(&self, f: &Field, x: &[Elem], support: &[usize]) -> Vec<Elem> {
        let n = self.dim;
        match support {
            [] => vec![0; n],
            [i] => {
                let ap = f.pow(x[*i], self.p() as u64);
                self.pbasis[*i].iter().map(|&c| f.mul(ap, c)).collect()
            }
            [i, rest @ ..] => {
                let mut first = vec![0; n];
                first[*i] = x[*i];
                let mut tail = x.to_vec();
                tail[*i] = 0;
                let mut out = self.p_power_rec(f, &first, &[*i]);
                let tp = self.p_power_rec(f, &tail, rest);
                for m in 0..n {
                    out[m] = f.add(out[m], tp[m]);
                }
                self.s_sum_acc(f, &first, &tail, &mut out);
                out
            }
        }
    }

    /// Checks antisymmetry, Jacobi, ad-compatibility of the p-map on the basis
    /// and consistency of the Jacobson extension on basis pairs.
    pub fn verify_restricted(&self) -> CheckReport {
        let mut report = CheckReport::new();
        let n = self.dim;
        let f = &self.field;
        let name = |i: usize| self.names[i].clone();

        let mut witness = None;
        'anti: for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    let a = self.structure_constant(i, j, m);
                    let b = self.structure_constant(j, i, m);
                    if f.add(a, b) != 0 {
                        witness = Some(format!("[{}, {}]", name(i), name(j)));
                        break 'anti;
                    }
                }
            }
        }
        report.record("antisymmetry", witness);

        let mut witness = None;
        let mut inner = vec![0; n];
        let mut sum = vec![0; n];
        'jac: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    sum.fill(0);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        // sum += [e_a, [e_b, e_c]]
                        inner.fill(0);
                        for &(m, s) in &self.table[b * n + c] {
                            inner[m] = s;
                        }
                        for (l, &v) in inner.iter().enumerate() {
                            if v != 0 {
                                for &(m, s) in &self.table[a * n + l] {
                                    sum[m] = f.add(sum[m], f.mul(v, s));
                                }
                            }
                        }
                    }
                    if sum.iter().any(|&x| x != 0) {
                        witness = Some(format!("({}, {}, {})", name(i), name(j), name(k)));
                        break 'jac;
                    }
                }
            }
        }
        report.record("jacobi", witness);

        let p = self.p() as u64;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_matrix(&self.basis_element(i, f))).collect();
        let mut witness = None;
        for (i, ad) in ads.iter().enumerate() {
            let x = self.basis_element(i, f);
            let lhs = self.ad_matrix(&self.p_power(&x));
            if lhs != ad.pow(p) {
                witness = Some(name(i));
                break;
            }
        }
        report.record("ad-compatibility", witness);

        let mut witness = None;
        'pairs: for i in 0..n {
            for j in i + 1..n {
                let mut c = vec![0; n];
                c[i] = 1;
                c[j] = 1;
                let x = self.element(f, c).unwrap();
                let forward = self.p_power_ordered(&x, &[i, j]);
                let backward = self.p_power_ordered(&x, &[j, i]);
                if forward != backward
                    || self.ad_matrix(&forward) != ads[i].add(&ads[j]).pow(p)
                {
                    witness = Some(format!("{} + {}", name(i), name(j)));
                    break 'pairs;
                }
            }
        }
        report.record("jacobson-consistency", witness);
        report
    }

    /// Derived algebra [l, l] as a subspace over the base field.
    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim;
        let vecs: Vec<Vec<Elem>> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut v = vec![0; n];
                for &(m, c) in self.bracket_terms(i, j) {
                    v[m] = c;
                }
                v
            })
            .collect();
        Subspace::from_vectors(&self.field, n, &vecs)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().is_full()
    }

    pub fn describe(&self) -> AlgebraDescription {
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for &(m, c) in self.bracket_terms(i, j) {
                    brackets.push((i, j, m, c));
                }
            }
        }
        AlgebraDescription {
            name: self.name.clone(),
            p: self.p(),
            basis: self.names.clone(),
            brackets,
            pmap: self.pbasis.clone(),
        }
    }

    pub fn from_description(d: &AlgebraDescription) -> Result<RestrictedLieAlgebra> {
        let f = Field::prime(d.p)?;
        let n = d.basis.len();
        let mut consts = vec![0; n * n * n];
        for &(i, j, m, c) in &d.brackets {
            if i >= n || j >= n || m >= n {
                return Err(Error::InvalidInput(format!("bracket index out of range: {i},{j},{m}")));
            }
            let c = c % d.p;
            consts[(i * n + j) * n + m] = c;
            consts[(j * n + i) * n + m] = f.neg(c);
        }
        RestrictedLieAlgebra::new(d.name.clone(), &f, d.basis.clone(), consts, d.pmap.clone())
    }

    /// Copy of the algebra with one p-map value replaced (for negative tests).
    pub fn with_pbasis(&self, i: usize, value: Vec<Elem>) -> Result<RestrictedLieAlgebra> {
        let mut pb = self.pbasis.clone();
        pb[i] = value;
        let mut a = RestrictedLieAlgebra::new(
            self.name.clone(),
            &self.field,
            self.names.clone(),
            self.consts.clone(),
            pb,
        )?;
        a.classical = self.classical.clone();
        Ok(a)
    }

    /// The algebra in a new basis given by the rows of `basis` (over GF(p)).
    /// Returns the rebased algebra; the matrix realization is carried along.
    pub fn rebased(&self, basis: &Matrix, names: Vec<String>) -> Result<RestrictedLieAlgebra> {
        let n = self.dim;
        if basis.rows() != n || basis.cols() != n || basis.field() != &self.field {
            return Err(Error::InvalidInput("rebasing needs an invertible N x N matrix over GF(p)".into()));
        }
        let inv = basis.inverse()?;
        let f = &self.field;
        let rows = basis.row_vectors();
        // coordinates in the new basis: v = c . B  =>  c = v . B^{-1}
        let coords = |v: &[Elem]| inv.vec_mul(v);
        let mut consts = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let c = coords(&self.bracket_raw(f, &rows[i], &rows[j]));
                consts[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&c);
            }
        }
        let pbasis = rows
            .iter()
            .map(|r| {
                let x = self.element(f, r.clone()).unwrap();
                coords(&self.p_power(&x).coeffs)
            })
            .collect();
        let mut a = RestrictedLieAlgebra::new(format!("{}'", self.name), f, names, consts, pbasis)?;
        if let Some(cl) = &self.classical {
            let matrices = rows
                .iter()
                .map(|r| {
                    let mut m = Matrix::zeros(f, cl.n, cl.n);
                    for (k, &c) in r.iter().enumerate() {
                        if c != 0 {
                            m.axpy(c, &cl.matrices[k]);
                        }
                    }
                    m
                })
                .collect();
            a.classical = Some(ClassicalData {
                matrices,
                kinds: vec![],
                ..cl.clone()
            });
        }
        Ok(a)
    }
}

/// A subalgebra of a restricted Lie algebra, closed under bracket and [p].
#[derive(Clone, Debug)]
pub struct SubalgebraDatum {
    algebra: Arc<RestrictedLieAlgebra>,
    basis: Subspace,
}

impl SubalgebraDatum {
    /// Verifies bracket- and [p]-closure of the span.
    pub fn new(algebra: &Arc<RestrictedLieAlgebra>, basis: Subspace) -> Result<SubalgebraDatum> {
        if basis.ambient() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: basis.ambient(),
            });
        }
        let f = basis.field().clone();
        let elems: Vec<LieElement> = basis
            .basis_vectors()
            .into_iter()
            .map(|v| algebra.element(&f, v).unwrap())
            .collect();
        for (a, x) in elems.iter().enumerate() {
            for y in &elems[a + 1..] {
                let b = algebra.bracket(x, y)?;
                if !basis.contains_vector(&b.coeffs) {
                    return Err(Error::Invariant("subspace is not closed under the bracket".into()));
                }
            }
            if !basis.contains_vector(&algebra.p_power(x).coeffs) {
                return Err(Error::Invariant("subspace is not closed under the p-map".into()));
            }
        }
        Ok(SubalgebraDatum {
            algebra: algebra.clone(),
            basis,
        })
    }

    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.algebra
    }
    pub fn subspace(&self) -> &Subspace {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
    pub fn elements(&self) -> Vec<LieElement> {
        let f = self.basis.field().clone();
        self.basis
            .basis_vectors()
            .into_iter()
            .map(|v| self.algebra.element(&f, v).unwrap())
            .collect()
    }
    pub fn contains(&self, x: &LieElement) -> bool {
        self.basis.contains_vector(&x.coeffs)
    }

    /// The subalgebra as a restricted Lie algebra in its echelon basis.
    /// Basis vectors that are standard basis vectors keep their names.
    pub fn structure(&self) -> Result<RestrictedLieAlgebra> {
        let g = &self.algebra;
        let f = self.basis.field();
        if !f.is_prime_field() {
            return Err(Error::InvalidInput("subalgebra structure needs a basis over GF(p)".into()));
        }
        let rows = self.basis.basis_vectors();
        let d = rows.len();
        let coords = |v: &[Elem]| -> Result<Vec<Elem>> {
            self.basis
                .coordinates(v)
                .ok_or_else(|| Error::Invariant("subalgebra not closed".into()))
        };
        let mut consts = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let b = g.bracket_raw(f, &rows[i], &rows[j]);
                consts[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&coords(&b)?);
            }
        }
        let pbasis = rows
            .iter()
            .map(|r| coords(&g.p_power(&g.element(f, r.clone()).unwrap()).coeffs))
            .collect::<Result<Vec<_>>>()?;
        let names = rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let support: Vec<usize> = (0..r.len()).filter(|&i| r[i] != 0).collect();
                match support.as_slice() {
                    [i] if r[*i] == 1 => g.basis_names()[*i].clone(),
                    _ => format!("b{}", k + 1),
                }
            })
            .collect();
        RestrictedLieAlgebra::new(format!("sub({})", g.name()), f, names, consts, pbasis)
    }
}

/// C_l(chi) = { y : chi([y, -]) = 0 }.
pub fn centralizer(algebra: &Arc<RestrictedLieAlgebra>, chi: &Functional) -> Result<SubalgebraDatum> {
    if chi.algebra != algebra.id() {
        return Err(Error::ParentMismatch);
    }
    let n = algebra.dim();
    let f = chi.field().clone();
    // row j, column i: chi([e_i, e_j])
    let mut m = Matrix::zeros(&f, n, n);
    for i in 0..n {
        for j in 0..n {
            let v = algebra
                .bracket_terms(i, j)
                .iter()
                .fold(0, |acc, &(k, c)| f.add(acc, f.mul(c, chi.coeffs[k])));
            m.set(j, i, v);
        }
    }
    SubalgebraDatum::new(algebra, m.kernel())
}

/// chi is nilpotent when its centralizer lies in its kernel.
pub fn is_nilpotent_functional(algebra: &Arc<RestrictedLieAlgebra>, chi: &Functional) -> Result<bool> {
    let c = centralizer(algebra, chi)?;
    Ok(chi.vanishes_on(c.subspace()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gm_is_restricted() {
        let gm = RestrictedLieAlgebra::multiplicative(5).unwrap();
        assert!(gm.verify_restricted().all_passed());
        let c = gm.basis_element(0, gm.field());
        assert_eq!(gm.p_power(&c), c);
    }

    #[test]
    fn abelian_algebras_have_vanishing_s() {
        let a = RestrictedLieAlgebra::abelian(5, vec![vec![0, 1], vec![0, 0]]).unwrap();
        let f = a.field().clone();
        let x = a.element(&f, vec![1, 2]).unwrap();
        let y = a.element(&f, vec![3, 4]).unwrap();
        assert!(a.s_coefficients(&x, &y).unwrap().iter().all(|s| s.is_zero()));
        assert!(a.verify_restricted().all_passed());
    }

    #[test]
    fn parent_mismatch_is_reported() {
        let a = RestrictedLieAlgebra::multiplicative(3).unwrap();
        let b = RestrictedLieAlgebra::multiplicative(3).unwrap();
        let x = a.basis_element(0, a.field());
        let y = b.basis_element(0, b.field());
        assert_eq!(a.bracket(&x, &y).unwrap_err(), Error::ParentMismatch);
    }

    #[test]
    fn description_round_trip() {
        let a = RestrictedLieAlgebra::abelian(3, vec![vec![1, 0], vec![1, 1]]).unwrap();
        let d = a.describe();
        let b = RestrictedLieAlgebra::from_description(&d).unwrap();
        assert_eq!(b.describe(), d);
    }
}
