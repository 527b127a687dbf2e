//! Submodule machinery: spinning, the MeatAxe splitting test (Holt-Rees with
//! Norton's irreducibility criterion), homomorphisms from simple modules,
//! socles, radicals and composition factors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::module::FdModule;
use crate::poly::Poly;
use crate::subspace::Subspace;

const MAX_ATTEMPTS: usize = 400;
const DEFAULT_SEED: u64 = 0x6d65_6174;

/// Incremental echelon basis for spinning.
pub(crate) struct Echelon {
    field: Field,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub(crate) fn new(field: &Field) -> Echelon {
        Echelon {
            field: field.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let x = v[p];
            if x != 0 {
                f.axpy(v, f.neg(x), row);
            }
        }
    }

    /// Adds `v` if independent; returns whether it was.
    pub(crate) fn push(&mut self, mut v: Vec<Elem>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]).unwrap();
        self.field.scale_in_place(&mut v, inv);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// A spun basis with, for each vector, the (parent, generator) it came from.
struct Spun {
    vectors: Vec<Vec<Elem>>,
    tree: Vec<Option<(usize, usize)>>,
}

fn spin_tracked(field: &Field, mats: &[Matrix], seeds: &[Vec<Elem>]) -> Spun {
    let mut ech = Echelon::new(field);
    let mut spun = Spun {
        vectors: Vec::new(),
        tree: Vec::new(),
    };
    for s in seeds {
        if ech.push(s.clone()) {
            spun.vectors.push(s.clone());
            spun.tree.push(None);
        }
    }
    let dim = seeds.first().map(|s| s.len()).unwrap_or(0);
    let mut k = 0;
    while k < spun.vectors.len() && ech.rank() < dim {
        for (g, m) in mats.iter().enumerate() {
            let w = m.mul_vec(&spun.vectors[k]);
            if ech.push(w.clone()) {
                spun.vectors.push(w);
                spun.tree.push(Some((k, g)));
            }
        }
        k += 1;
    }
    spun
}

pub(crate) fn spin_mats(field: &Field, dim: usize, mats: &[Matrix], vectors: &[Vec<Elem>]) -> Subspace {
    let spun = spin_tracked(field, mats, vectors);
    Subspace::from_vectors(field, dim, &spun.vectors)
}

/// The smallest submodule containing the given vectors.
pub fn spin(m: &FdModule, vectors: &[Vec<Elem>]) -> Subspace {
    spin_mats(m.field(), m.dim(), m.action(), vectors)
}

#[derive(Clone, Debug)]
enum Step {
    /// pool[a] * pool[b]
    Mul(usize, usize),
    /// pool[a] + c pool[b]
    Lin(usize, Elem, usize),
}

/// A recipe for an element of the enveloping matrix algebra, replayable on
/// any module over the same Lie algebra.
#[derive(Clone, Debug)]
pub struct AlgebraWord {
    gens: usize,
    steps: Vec<Step>,
}

impl AlgebraWord {
    fn random<R: Rng + ?Sized>(gens: usize, field: &Field, len: usize, rng: &mut R) -> AlgebraWord {
        let mut steps = Vec::new();
        let mut pool = gens;
        for _ in 0..len {
            steps.push(Step::Mul(rng.gen_range(0..pool), rng.gen_range(0..pool)));
            pool += 1;
            steps.push(Step::Lin(pool - 1, field.random_nonzero(rng), rng.gen_range(0..pool)));
            pool += 1;
        }
        for g in 0..gens {
            steps.push(Step::Lin(pool - 1, field.random(rng), g));
            pool += 1;
        }
        AlgebraWord { gens, steps }
    }

    pub fn eval(&self, mats: &[Matrix]) -> Matrix {
        assert_eq!(mats.len(), self.gens);
        let mut pool: Vec<Matrix> = mats.to_vec();
        for s in &self.steps {
            let m = match *s {
                Step::Mul(a, b) => pool[a].mul(&pool[b]),
                Step::Lin(a, c, b) => {
                    let mut m = pool[a].clone();
                    m.axpy(c, &pool[b]);
                    m
                }
            };
            pool.push(m);
        }
        pool.pop().unwrap()
    }
}

/// Certificate of irreducibility: an algebra element A, an irreducible
/// factor q of its characteristic polynomial with dim ker q(A) = deg q, and
/// a nonzero seed vector in ker q(A).
#[derive(Clone, Debug)]
pub struct Certificate {
    pub word: AlgebraWord,
    pub factor: Poly,
    pub seed: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct SimpleModule {
    pub module: FdModule,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub enum Split {
    Irreducible(Certificate),
    Proper(Subspace),
}

pub struct MeatAxe {
    rng: ChaCha8Rng,
}

impl Default for MeatAxe {
    fn default() -> Self {
        MeatAxe::new(DEFAULT_SEED)
    }
}

impl MeatAxe {
    pub fn new(seed: u64) -> MeatAxe {
        MeatAxe {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Finds a proper nonzero submodule or certifies irreducibility.
    pub fn split(&mut self, m: &FdModule) -> Result<Split> {
        if m.dim() == 0 {
            return Err(Error::InvalidInput("the zero module has no composition factors".into()));
        }
        let f = m.field().clone();
        let transposed: Vec<Matrix> = m.action().iter().map(|a| a.transpose()).collect();
        for attempt in 0..MAX_ATTEMPTS {
            let word = AlgebraWord::random(m.action().len(), &f, 1 + attempt % 4, &mut self.rng);
            let a = word.eval(m.action());
            let mut factors: Vec<Poly> = a.charpoly().factor(&mut self.rng).into_iter().map(|(q, _)| q).collect();
            factors.sort_by_key(|q| q.degree());
            for q in factors.into_iter().take(3) {
                let qa = a.eval_poly(&q);
                let ker = qa.kernel();
                let v = ker.basis_vectors().swap_remove(0);
                let w = spin(m, std::slice::from_ref(&v));
                if !w.is_full() {
                    return Ok(Split::Proper(w));
                }
                if ker.dim() as isize == q.degree() {
                    let u = qa.transpose().kernel().basis_vectors().swap_remove(0);
                    let wt = spin_mats(&f, m.dim(), &transposed, &[u]);
                    if !wt.is_full() {
                        return Ok(Split::Proper(wt.annihilator()));
                    }
                    return Ok(Split::Irreducible(Certificate {
                        word,
                        factor: q,
                        seed: v,
                    }));
                }
            }
        }
        Err(Error::Invariant(format!(
            "MeatAxe found no splitting or certificate after {MAX_ATTEMPTS} attempts"
        )))
    }

    /// Composition factors, each with an irreducibility certificate.
    pub fn composition_factors(&mut self, m: &FdModule) -> Result<Vec<SimpleModule>> {
        let mut out = Vec::new();
        let mut stack = vec![m.clone()];
        while let Some(x) = stack.pop() {
            if x.dim() == 0 {
                continue;
            }
            match self.split(&x)? {
                Split::Irreducible(certificate) => out.push(SimpleModule { module: x, certificate }),
                Split::Proper(w) => {
                    stack.push(x.quotient(&w)?);
                    stack.push(x.submodule(&w)?);
                }
            }
        }
        Ok(out)
    }

    /// Sum of all simple submodules.
    pub fn socle(&mut self, m: &FdModule) -> Result<Subspace> {
        let f = m.field();
        if m.dim() == 0 {
            return Ok(Subspace::zero(f, 0));
        }
        let classes = distinct_classes(&self.composition_factors(m)?)?;
        let mut soc = Subspace::zero(f, m.dim());
        for s in &classes {
            for images in hom_images(s, m)? {
                soc = soc.sum(&Subspace::from_vectors(f, m.dim(), &images))?;
            }
        }
        Ok(soc)
    }

    /// Intersection of the maximal submodules, as the annihilator of the
    /// socle of the dual.
    pub fn radical(&mut self, m: &FdModule) -> Result<Subspace> {
        if m.dim() == 0 {
            return Ok(Subspace::zero(m.field(), 0));
        }
        Ok(self.socle(&m.dual())?.annihilator())
    }
}

/// For each homomorphism in a basis of Hom(S, N), the images of S's spun basis.
pub fn hom_images(s: &SimpleModule, n: &FdModule) -> Result<Vec<Vec<Vec<Elem>>>> {
    if s.module.algebra().id() != n.algebra().id() {
        return Err(Error::ParentMismatch);
    }
    let f = n.field();
    let cert = &s.certificate;
    let k_n = cert.word.eval(n.action()).eval_poly(&cert.factor).kernel();
    if k_n.is_zero() {
        return Ok(vec![]);
    }
    let spun = spin_tracked(f, s.module.action(), std::slice::from_ref(&cert.seed));
    let ds = s.module.dim();
    if spun.vectors.len() != ds {
        return Err(Error::Invariant("certificate seed does not generate the simple module".into()));
    }
    let binv = Matrix::from_rows(f, &spun.vectors, ds).inverse()?;
    // images[i][k] = word_k applied to the i-th kernel vector
    let kappa: Vec<Vec<Vec<Elem>>> = k_n
        .basis_vectors()
        .into_iter()
        .map(|v| {
            let mut imgs: Vec<Vec<Elem>> = Vec::with_capacity(ds);
            for node in &spun.tree {
                let w = match node {
                    None => v.clone(),
                    Some((parent, g)) => n.generator(*g).mul_vec(&imgs[*parent]),
                };
                imgs.push(w);
            }
            imgs
        })
        .collect();
    let kk = kappa.len();
    let mut constraints = Echelon::new(f);
    'outer: for (g, ms) in s.module.action().iter().enumerate() {
        for k in 0..ds {
            let coords = binv.vec_mul(&ms.mul_vec(&spun.vectors[k]));
            // rho_N(g) n_k - sum_l coords_l n_l, one column per kernel vector
            let cols: Vec<Vec<Elem>> = kappa
                .iter()
                .map(|imgs| {
                    let mut c = n.generator(g).mul_vec(&imgs[k]);
                    for (l, &x) in coords.iter().enumerate() {
                        if x != 0 {
                            f.axpy(&mut c, f.neg(x), &imgs[l]);
                        }
                    }
                    c
                })
                .collect();
            for r in 0..n.dim() {
                constraints.push(cols.iter().map(|c| c[r]).collect());
            }
            if constraints.rank() == kk {
                break 'outer;
            }
        }
    }
    let rows: Vec<Vec<Elem>> = constraints.rows.clone();
    let sol = if rows.is_empty() {
        Subspace::full(f, kk)
    } else {
        Matrix::from_rows(f, &rows, kk).kernel()
    };
    Ok(sol
        .basis_vectors()
        .into_iter()
        .map(|t| {
            (0..ds)
                .map(|k| {
                    let mut v = vec![0; n.dim()];
                    for (i, &ti) in t.iter().enumerate() {
                        if ti != 0 {
                            f.axpy(&mut v, ti, &kappa[i][k]);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect())
}

pub fn hom_dim(s: &SimpleModule, n: &FdModule) -> Result<usize> {
    Ok(hom_images(s, n)?.len())
}

pub fn isomorphic(s: &SimpleModule, t: &SimpleModule) -> Result<bool> {
    Ok(s.module.dim() == t.module.dim() && hom_dim(s, &t.module)? > 0)
}

/// Isomorphism-class ids (0, 1, ...) by first occurrence.
pub fn classify(simples: &[SimpleModule]) -> Result<Vec<usize>> {
    let mut reps: Vec<usize> = Vec::new();
    let mut ids = Vec::with_capacity(simples.len());
    for (i, s) in simples.iter().enumerate() {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate() {
            if isomorphic(&simples[r], s)? {
                found = Some(c);
                break;
            }
        }
        ids.push(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    Ok(ids)
}

fn distinct_classes(simples: &[SimpleModule]) -> Result<Vec<SimpleModule>> {
    let ids = classify(simples)?;
    let mut out = Vec::new();
    for (c, s) in ids.iter().zip(simples) {
        if *c == out.len() {
            out.push(s.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::sl;
    use crate::liealg::RestrictedLieAlgebra;
    use std::sync::Arc;

    /// The simple restricted sl_2-module L(m): f v_j = v_{j+1}, e v_j = j(m-j+1) v_{j-1}.
    fn simple_sl2(g: &Arc<RestrictedLieAlgebra>, m: usize) -> FdModule {
        let f = g.field().clone();
        let d = m + 1;
        let mut e = Matrix::zeros(&f, d, d);
        let mut fm = Matrix::zeros(&f, d, d);
        let mut h = Matrix::zeros(&f, d, d);
        for j in 0..d {
            h.set(j, j, f.from_i64(m as i64 - 2 * j as i64));
            if j + 1 < d {
                fm.set(j + 1, j, 1);
            }
            if j > 0 {
                e.set(j - 1, j, f.from_i64((j * (m - j + 1)) as i64));
            }
        }
        let mut action = vec![Matrix::zeros(&f, d, d); 3];
        action[g.index_of("E21").unwrap()] = fm;
        action[g.index_of("H1").unwrap()] = h;
        action[g.index_of("E12").unwrap()] = e;
        FdModule::new(g, &g.zero_functional(), &f, action).unwrap()
    }

    #[test]
    fn simple_modules_are_certified() {
        let mut ma = MeatAxe::default();
        let g = sl(2, 5).unwrap();
        for m in 0..5 {
            let l = simple_sl2(&g, m);
            assert!(matches!(ma.split(&l).unwrap(), Split::Irreducible(_)));
            assert!(ma.radical(&l).unwrap().is_zero());
        }
    }

    #[test]
    fn direct_sum_factors_and_socle() {
        let mut ma = MeatAxe::default();
        let g = sl(2, 5).unwrap();
        let a = simple_sl2(&g, 1);
        let b = simple_sl2(&g, 2);
        let s = a.direct_sum(&b).unwrap().direct_sum(&a).unwrap();
        let factors = ma.composition_factors(&s).unwrap();
        let mut dims: Vec<usize> = factors.iter().map(|x| x.module.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 2, 3]);
        let ids = classify(&factors).unwrap();
        let distinct: std::collections::BTreeSet<_> = ids.iter().collect();
        assert_eq!(distinct.len(), 2);
        assert!(ma.socle(&s).unwrap().is_full());
        assert!(ma.radical(&s).unwrap().is_zero());
        let hom = hom_dim(&factors[0], &s).unwrap();
        assert_eq!(hom, if factors[0].module.dim() == 2 { 2 } else { 1 });
    }

    #[test]
    fn spin_basics() {
        let l = simple_sl2(&sl(2, 5).unwrap(), 3);
        let f = l.field().clone();
        assert!(spin(&l, &[vec![1, 0, 0, 0]]).is_full());
        assert!(spin(&l, &[vec![0, 0, 0, 0]]).is_zero());
        let full: Vec<Vec<Elem>> = Matrix::identity(&f, 4).row_vectors();
        assert!(spin(&l, &full).is_full());
    }
}
