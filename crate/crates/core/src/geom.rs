//! Borel subalgebras of classical matrix algebras as flag stabilizers over
//! GF(p^k), Springer-fiber membership, the pointwise chi-nice tests and
//! deterministic sampling of fiber points.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::liealg::{Family, Functional, LieElement, RestrictedLieAlgebra, SubalgebraDatum};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// The stabilizer of the flag of leading column spans of `flag`.
#[derive(Clone, Debug)]
pub struct BorelDatum {
    g: Arc<RestrictedLieAlgebra>,
    flag: Matrix,
    subalgebra: SubalgebraDatum,
}

impl BorelDatum {
    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.g
    }
    pub fn flag(&self) -> &Matrix {
        &self.flag
    }
    pub fn subalgebra(&self) -> &SubalgebraDatum {
        &self.subalgebra
    }
    pub fn field(&self) -> &Field {
        self.flag.field()
    }
    pub fn subspace(&self) -> &Subspace {
        self.subalgebra.subspace()
    }
}

fn matrices(g: &RestrictedLieAlgebra) -> Result<(Family, usize, &[Matrix])> {
    let cl = g
        .classical()
        .ok_or_else(|| Error::InvalidInput("flags need a matrix algebra".into()))?;
    Ok((cl.family, cl.n, &cl.matrices))
}

fn common_field(a: &Field, b: &Field) -> Result<Field> {
    if a.contains_field(b) {
        Ok(a.clone())
    } else if b.contains_field(a) {
        Ok(b.clone())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// {y in g : y V_i in V_i for all i}, V_i the span of the first i columns.
pub fn borel_from_flag(g: &Arc<RestrictedLieAlgebra>, flag: &Matrix) -> Result<BorelDatum> {
    let (family, n, mats) = matrices(g)?;
    if flag.rows() != n || flag.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: flag.rows(),
        });
    }
    let f = flag.field().clone();
    let inv = flag.inverse()?;
    // y stabilizes the flag iff M^{-1} y M is upper triangular
    let conj: Vec<Matrix> = mats.iter().map(|x| inv.mul(&x.lift(&f)).mul(flag)).collect();
    let lower: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut sys = Matrix::zeros(&f, lower.len(), g.dim());
    for (r, &(i, j)) in lower.iter().enumerate() {
        for (k, c) in conj.iter().enumerate() {
            sys.set(r, k, c.get(i, j));
        }
    }
    let sub = SubalgebraDatum::new(g, sys.kernel())?;
    let expect = n * (n + 1) / 2 - usize::from(family == Family::Sl);
    if sub.dim() != expect {
        return Err(Error::Invariant(format!(
            "flag stabilizer has dimension {}, expected {expect}",
            sub.dim()
        )));
    }
    Ok(BorelDatum {
        g: g.clone(),
        flag: flag.clone(),
        subalgebra: sub,
    })
}

/// Whether chi vanishes on b.
pub fn in_springer_fiber(b: &BorelDatum, chi: &Functional) -> Result<bool> {
    vanishes(chi, b.subspace())
}

fn vanishes(chi: &Functional, s: &Subspace) -> Result<bool> {
    let f = common_field(chi.field(), s.field())?;
    Ok(chi.lift(&f).vanishes_on(&s.lift(&f)))
}

/// An h in `s` with chi([y, h]) = chi(y) for every y in g, if one exists.
pub fn test3_on(g: &RestrictedLieAlgebra, s: &Subspace, chi: &Functional) -> Result<Option<LieElement>> {
    let f = common_field(chi.field(), s.field())?;
    let chi = chi.lift(&f);
    if chi.is_zero() {
        return Ok(Some(g.zero(&f)));
    }
    let n = g.dim();
    let basis: Vec<LieElement> = s
        .lift(&f)
        .basis_vectors()
        .into_iter()
        .map(|v| g.element(&f, v))
        .collect::<Result<_>>()?;
    let mut sys = Matrix::zeros(&f, n, basis.len());
    let mut rhs = vec![0; n];
    for (y, r) in rhs.iter_mut().enumerate() {
        let ey = g.basis_element(y, &f);
        for (k, h) in basis.iter().enumerate() {
            sys.set(y, k, chi.eval(&g.bracket(&ey, h)?));
        }
        *r = chi.coeffs()[y];
    }
    let (sol, _) = sys.solve(&rhs)?;
    Ok(match sol {
        None => None,
        Some(t) => {
            let mut h = g.zero(&f);
            for (c, b) in t.iter().zip(&basis) {
                h = h.add(&b.scale(*c));
            }
            Some(h)
        }
    })
}

/// The stabilizer criterion at a Borel: some h in b with ad*(h) chi = chi,
/// where (ad*(h) chi)(y) = chi([y, h]).
pub fn test3_at(b: &BorelDatum, chi: &Functional) -> Result<Option<LieElement>> {
    test3_on(&b.g, b.subspace(), chi)
}

/// Coordinates of v in g/b, indexed by the non-pivot positions of b.
pub fn quotient_coords(b: &BorelDatum, v: &[Elem]) -> Vec<Elem> {
    let s = b.subspace();
    let f = s.field();
    let mut v = v.to_vec();
    for (row, &piv) in s.basis_vectors().iter().zip(s.pivots()) {
        let x = v[piv];
        if x != 0 {
            f.axpy(&mut v, f.neg(x), row);
        }
    }
    s.complement_indices().iter().map(|&c| v[c]).collect()
}

/// Whether the full preimage of S in g lies in ker chi.
pub fn tangency_splitting_check(b: &BorelDatum, chi: &Functional, s: &Subspace) -> Result<bool> {
    if !in_springer_fiber(b, chi)? {
        return Err(Error::NotInFiber);
    }
    let comp = b.subspace().complement_indices();
    if s.ambient() != comp.len() {
        return Err(Error::DimensionMismatch {
            expected: comp.len(),
            found: s.ambient(),
        });
    }
    let f = common_field(b.field(), s.field())?;
    let n = b.g.dim();
    let lifted: Vec<Vec<Elem>> = s
        .lift(&f)
        .basis_vectors()
        .into_iter()
        .map(|q| {
            let mut v = vec![0; n];
            for (&c, x) in comp.iter().zip(q) {
                v[c] = x;
            }
            v
        })
        .collect();
    let pre = b.subspace().lift(&f).sum(&Subspace::from_vectors(&f, n, &lifted))?;
    vanishes(chi, &pre)
}

/// The tangent directions Ad(M)(p) / b_M of the orbit P_M . b_M, where p is
/// a standard parabolic and M the flag of b.
pub fn parabolic_tangent(b: &BorelDatum, p_sub: &SubalgebraDatum) -> Result<Subspace> {
    let g = &b.g;
    let (_, _, mats) = matrices(g)?;
    let f = b.field().clone();
    let m = &b.flag;
    let inv = m.inverse()?;
    let cl = g.classical().unwrap();
    let mut vecs = Vec::new();
    for v in p_sub.subspace().lift(&f).basis_vectors() {
        let mut x = Matrix::zeros(&f, cl.n, cl.n);
        for (c, mm) in v.iter().zip(mats) {
            if *c != 0 {
                x.axpy(*c, &mm.lift(&f));
            }
        }
        let y = m.mul(&x).mul(&inv);
        let coords = cl
            .coordinates(&y)
            .ok_or_else(|| Error::Invariant("conjugate left the algebra".into()))?;
        vecs.push(quotient_coords(b, &coords));
    }
    let r = b.subspace().complement_indices().len();
    Ok(Subspace::from_vectors(&f, r, &vecs))
}

/// Whether chi vanishes on the parabolic, which makes every orbit P . b chi-nice.
pub fn parabolic_nice(g: &Arc<RestrictedLieAlgebra>, p_sub: &SubalgebraDatum, chi: &Functional) -> Result<bool> {
    if p_sub.algebra().id() != g.id() || chi.algebra_id() != g.id() {
        return Err(Error::ParentMismatch);
    }
    vanishes(chi, p_sub.subspace())
}

/// How a fiber point was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// The permutation flag of w (w[i] = image of column i).
    Weyl { w: Vec<usize> },
    /// exp(t_1 z_1) ... exp(t_s z_s) applied to a Weyl seed.
    Translate {
        seed: Vec<usize>,
        steps: Vec<TranslateStep>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslateStep {
    pub t: u32,
    pub z: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct FiberSample {
    pub chi: Functional,
    pub points: Vec<BorelDatum>,
    pub provenance: Vec<Provenance>,
    /// Translates attempted (duplicates are dropped).
    pub attempts: usize,
}

/// Serializable form of a sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSampleExport {
    pub chi: Vec<u32>,
    pub flags: Vec<Vec<Vec<u32>>>,
    pub provenance: Vec<Provenance>,
    pub attempts: usize,
}

impl FiberSample {
    pub fn export(&self) -> FiberSampleExport {
        FiberSampleExport {
            chi: self.chi.coeffs().to_vec(),
            flags: self.points.iter().map(|b| b.flag.row_vectors()).collect(),
            provenance: self.provenance.clone(),
            attempts: self.attempts,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn permutation_matrix(f: &Field, w: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(f, w.len(), w.len());
    for (c, &r) in w.iter().enumerate() {
        m.set(r, c, 1);
    }
    m
}

/// exp(z) = sum_{i < p} z^i / i! for z with z^{p-1} = 0.
pub fn truncated_exp(z: &Matrix) -> Matrix {
    let f = z.field();
    let n = z.rows();
    let mut out = Matrix::identity(f, n);
    let mut term = Matrix::identity(f, n);
    for i in 1..f.p() as i64 {
        term = term.mul(z).scale(f.inv(f.from_i64(i)).unwrap());
        out = out.add(&term);
    }
    out
}

/// The matrix e with tr(e y) = chi(y) for y in g.
pub fn trace_dual_matrix(g: &RestrictedLieAlgebra, chi: &Functional) -> Result<Matrix> {
    let (_, n, mats) = matrices(g)?;
    let f = chi.field().clone();
    let d = g.dim();
    let mut gram = Matrix::zeros(&f, d, d);
    for i in 0..d {
        for j in 0..d {
            gram.set(i, j, mats[i].mul(&mats[j]).trace());
        }
    }
    let (sol, _) = gram.solve(chi.coeffs())?;
    let a = sol.ok_or_else(|| Error::InvalidInput("chi is not a trace functional".into()))?;
    let mut e = Matrix::zeros(&f, n, n);
    for (c, m) in a.iter().zip(mats) {
        if *c != 0 {
            e.axpy(*c, &m.lift(&f));
        }
    }
    Ok(e)
}

fn is_nilpotent_of_order_below_p(z: &Matrix) -> bool {
    z.pow(z.field().p() as u64 - 1).is_zero()
}

/// Fiber points over GF(p^k): all Weyl-translate Borels killing chi, then
/// `count` random translates exp(t_1 z_1) ... exp(t_3 z_3) of those seeds with
/// z_i nilpotent and commuting with the trace dual e of chi. Duplicates are
/// dropped; every point is checked to lie in the fiber.
pub fn sample_fiber(
    g: &Arc<RestrictedLieAlgebra>,
    chi: &Functional,
    count: usize,
    k: u32,
    seed: u64,
) -> Result<FiberSample> {
    let (_, n, _) = matrices(g)?;
    let f = Field::new(g.p(), k)?;
    let f = common_field(&f, chi.field())?;
    let chi = chi.lift(&f);
    let e = trace_dual_matrix(g, &chi)?;
    if !e.pow(n as u64).is_zero() {
        return Err(Error::InvalidInput("chi is not the trace dual of a nilpotent matrix".into()));
    }

    let mut points: Vec<BorelDatum> = Vec::new();
    let mut provenance = Vec::new();
    let push = |b: BorelDatum, prov: Provenance, points: &mut Vec<BorelDatum>, provenance: &mut Vec<Provenance>| -> Result<()> {
        if !in_springer_fiber(&b, &chi)? {
            return Err(Error::Invariant("sampled Borel left the Springer fiber".into()));
        }
        if points.iter().all(|q| q.subspace() != b.subspace()) {
            points.push(b);
            provenance.push(prov);
        }
        Ok(())
    };

    let mut seeds = Vec::new();
    for w in permutations(n) {
        let b = borel_from_flag(g, &permutation_matrix(&f, &w))?;
        if in_springer_fiber(&b, &chi)? {
            seeds.push((w.clone(), b.clone()));
            push(b, Provenance::Weyl { w }, &mut points, &mut provenance)?;
        }
    }
    if seeds.is_empty() {
        return Err(Error::NoWeylSeed);
    }

    // nilpotent pieces of the centralizer: for each permutation flag P, the
    // X with Xe = eX and P^{-1} X P strictly upper triangular
    let mut pieces: Vec<Vec<Matrix>> = Vec::new();
    for w in permutations(n) {
        let pm = permutation_matrix(&f, &w);
        let pinv = pm.inverse()?;
        let lower_or_diag: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let mut sys = Matrix::zeros(&f, n * n + lower_or_diag.len(), n * n);
        for a in 0..n * n {
            let x = Matrix::unit(&f, n, a / n, a % n);
            let c = x.mul(&e).sub(&e.mul(&x));
            for r in 0..n * n {
                sys.set(r, a, c.data()[r]);
            }
            let conj = pinv.mul(&x).mul(&pm);
            for (r, &(i, j)) in lower_or_diag.iter().enumerate() {
                sys.set(n * n + r, a, conj.get(i, j));
            }
        }
        let basis: Vec<Matrix> = sys
            .kernel()
            .basis_vectors()
            .into_iter()
            .map(|v| Matrix::from_vec(&f, n, n, v))
            .collect();
        if !basis.is_empty() {
            pieces.push(basis);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_nilpotent = |rng: &mut ChaCha8Rng| -> Option<Matrix> {
        if pieces.is_empty() {
            return None;
        }
        let piece = &pieces[rng.gen_range(0..pieces.len())];
        let mut z = Matrix::zeros(&f, n, n);
        for b in piece {
            z.axpy(f.random(rng), b);
        }
        is_nilpotent_of_order_below_p(&z).then_some(z)
    };
    for _ in 0..count {
        let (w, seed_b) = &seeds[rng.gen_range(0..seeds.len())];
        let mut flag = seed_b.flag.clone();
        let mut steps = Vec::new();
        for _ in 0..3 {
            let Some(z) = random_nilpotent(&mut rng) else {
                continue;
            };
            let t = f.random(&mut rng);
            flag = truncated_exp(&z.scale(t)).mul(&flag);
            steps.push(TranslateStep { t, z: z.row_vectors() });
        }
        let b = borel_from_flag(g, &flag)?;
        push(b, Provenance::Translate { seed: w.clone(), steps }, &mut points, &mut provenance)?;
    }
    Ok(FiberSample {
        chi,
        points,
        provenance,
        attempts: count,
    })
}

/// Nilpotent matrix in Jordan form with the given block sizes (superdiagonal ones).
pub fn jordan_nilpotent(f: &Field, blocks: &[usize]) -> Matrix {
    let n = blocks.iter().sum();
    let mut m = Matrix::zeros(f, n, n);
    let mut start = 0;
    for &b in blocks {
        for i in start..start + b - 1 {
            m.set(i, i + 1, 1);
        }
        start += b;
    }
    m
}

/// Partitions of n in decreasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{borel_and_parabolic, sl, trace_dual};

    #[test]
    fn standard_and_weyl_borels() {
        let g = sl(3, 5).unwrap();
        let f = g.field().clone();
        let b = borel_from_flag(&g, &Matrix::identity(&f, 3)).unwrap();
        let std = borel_and_parabolic(&g, &[]).unwrap();
        assert_eq!(b.subspace(), std.subspace());
        assert_eq!(permutations(3).len(), 6);
        for w in permutations(3) {
            assert_eq!(borel_from_flag(&g, &permutation_matrix(&f, &w)).unwrap().subalgebra().dim(), 5);
        }
        assert!(borel_from_flag(&g, &Matrix::zeros(&f, 3, 3)).is_err());
    }

    #[test]
    fn borel_over_extension_field() {
        let g = sl(2, 3).unwrap();
        let f = Field::new(3, 2).unwrap();
        let a = f.generator();
        let m = Matrix::from_rows(&f, &[vec![1, 0], vec![a, 1]], 2);
        let b = borel_from_flag(&g, &m).unwrap();
        assert_eq!(b.subalgebra().dim(), 2);
        assert!(b.subspace().basis_vectors().iter().flatten().any(|&x| x >= 3));
    }

    #[test]
    fn sl2_fiber_and_witness() {
        let g = sl(2, 5).unwrap();
        let f = g.field().clone();
        let chi = trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap();
        let b = borel_from_flag(&g, &Matrix::identity(&f, 2)).unwrap();
        assert!(in_springer_fiber(&b, &chi).unwrap());
        let opp = borel_from_flag(&g, &permutation_matrix(&f, &[1, 0])).unwrap();
        assert!(!in_springer_fiber(&opp, &chi).unwrap());
        let h = test3_at(&b, &chi).unwrap().unwrap();
        assert_eq!(h, g.named("H1").unwrap().scale(3));
        assert!(test3_on(&g, &Subspace::zero(&f, 3), &chi).unwrap().is_none());
        let sample = sample_fiber(&g, &chi, 20, 1, 7).unwrap();
        assert_eq!(sample.points.len(), 1);
    }

    #[test]
    fn tangency_extremes() {
        let g = sl(3, 5).unwrap();
        let f = g.field().clone();
        let chi = trace_dual(&g, &Matrix::unit(&f, 3, 0, 2)).unwrap();
        let b = borel_from_flag(&g, &Matrix::identity(&f, 3)).unwrap();
        assert!(tangency_splitting_check(&b, &chi, &Subspace::zero(&f, 3)).unwrap());
        assert!(!tangency_splitting_check(&b, &chi, &Subspace::full(&f, 3)).unwrap());
        for s in [1, 2] {
            let p = borel_and_parabolic(&g, &[s]).unwrap();
            assert!(parabolic_nice(&g, &p, &chi).unwrap());
            let t = parabolic_tangent(&b, &p).unwrap();
            assert_eq!(t.dim(), 1);
            assert!(tangency_splitting_check(&b, &chi, &t).unwrap());
        }
        let full = SubalgebraDatum::new(&g, Subspace::full(&f, 8)).unwrap();
        assert!(!parabolic_nice(&g, &full, &chi).unwrap());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4).len(), 5);
        assert!(jordan_nilpotent(&Field::prime(5).unwrap(), &[2, 1]).pow(2).is_zero());
    }
}
