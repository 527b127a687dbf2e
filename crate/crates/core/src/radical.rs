//! Module radicals by two independent routes: the Jacobson radical of the
//! enveloping matrix algebra (Ronyai's trace criterion in characteristic p),
//! and a brute-force scan of cyclic submodules.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::meataxe::{spin, Echelon, MeatAxe};
use crate::module::FdModule;
use crate::subspace::Subspace;

/// Largest dim * [F : GF(p)] handled by the matrix-algebra method.
pub const ALGEBRA_RADICAL_MAX: usize = 24;
/// Largest module dimension for the brute-force oracle.
pub const BRUTE_FORCE_MAX_DIM: usize = 12;
/// Largest number of projective points the oracle will spin.
pub const BRUTE_FORCE_MAX_POINTS: u128 = 2_000_000;

/// Matrix of multiplication by `a` on GF(p^k) in the basis 1, x, ..., x^{k-1}.
fn mult_block(f: &Field, a: Elem) -> Vec<Vec<u32>> {
    let k = f.k() as usize;
    let p = f.p();
    // column j = coefficients of a * x^j
    let cols: Vec<Vec<u32>> = (0..k).map(|j| f.coeffs(f.mul(a, p.pow(j as u32)))).collect();
    (0..k).map(|r| (0..k).map(|j| cols[j][r]).collect()).collect()
}

/// A matrix over GF(p^k) as a matrix over GF(p) of k times the size.
fn restrict_scalars(m: &Matrix, prime: &Field) -> Matrix {
    let f = m.field();
    let k = f.k() as usize;
    let n = m.rows();
    let mut out = Matrix::zeros(prime, n * k, m.cols() * k);
    for r in 0..n {
        for c in 0..m.cols() {
            let b = mult_block(f, m.get(r, c));
            for (i, row) in b.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    out.set(r * k + i, c * k + j, x);
                }
            }
        }
    }
    out
}

/// Basis of the unital GF(p)-algebra generated by the matrices.
fn enveloping_algebra(prime: &Field, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let mut ech = Echelon::new(prime);
    let mut basis = vec![Matrix::identity(prime, n)];
    ech.push(basis[0].data().to_vec());
    let mut k = 0;
    while k < basis.len() {
        for g in gens {
            let m = basis[k].mul(g);
            if ech.push(m.data().to_vec()) {
                basis.push(m);
            }
        }
        k += 1;
    }
    basis
}

/// g_i(a) = Tr(a~^{p^i}) / p^i mod p for an integer lift a~ of a.
fn trace_functional(a: &Matrix, i: u32) -> Result<Elem> {
    let p = a.field().p() as u64;
    let modulus = p.pow(i + 1);
    let n = a.rows();
    let lift: Vec<u64> = a.data().iter().map(|&x| x as u64).collect();
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = x[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = (out[r * n + c] + a * y[k * n + c]) % modulus;
                }
            }
        }
        out
    };
    let mut acc = lift.clone();
    for _ in 0..i {
        // raise to the p-th power
        let base = acc.clone();
        for _ in 1..p {
            acc = mul(&acc, &base);
        }
    }
    let tr = (0..n).map(|d| acc[d * n + d]).sum::<u64>() % modulus;
    let pi = p.pow(i);
    if !tr.is_multiple_of(pi) {
        return Err(Error::Invariant("trace functional not divisible by p^i".into()));
    }
    Ok(((tr / pi) % p) as Elem)
}

/// Jacobson radical of the GF(p)-algebra spanned by `basis`, a subalgebra of M_n(GF(p)).
fn jacobson_radical(prime: &Field, n: usize, basis: &[Matrix]) -> Result<Vec<Matrix>> {
    let p = prime.p() as usize;
    let mut ell = 0u32;
    while p.pow(ell + 1) <= n {
        ell += 1;
    }
    let mut ideal: Vec<Matrix> = basis.to_vec();
    for i in 0..=ell {
        if ideal.is_empty() {
            break;
        }
        let mut g = Matrix::zeros(prime, ideal.len(), basis.len());
        for (r, a) in ideal.iter().enumerate() {
            for (c, b) in basis.iter().enumerate() {
                g.set(r, c, trace_functional(&a.mul(b), i)?);
            }
        }
        let kernel = g.left_kernel();
        ideal = kernel
            .basis_vectors()
            .into_iter()
            .map(|t| {
                let mut m = Matrix::zeros(prime, n, n);
                for (c, a) in t.iter().zip(&ideal) {
                    if *c != 0 {
                        m.axpy(*c, a);
                    }
                }
                m
            })
            .collect();
    }
    Ok(ideal)
}

/// rad(M) = J(A) M for A the enveloping matrix algebra of the action.
pub fn radical_algebra(m: &FdModule) -> Result<Subspace> {
    let f = m.field();
    let n = m.dim();
    let k = f.k() as usize;
    if n * k > ALGEBRA_RADICAL_MAX {
        return Err(Error::SizeGuard {
            what: "matrix-algebra radical",
            size: (n * k) as u128,
            limit: ALGEBRA_RADICAL_MAX as u128,
        });
    }
    if n == 0 {
        return Ok(Subspace::zero(f, 0));
    }
    let prime = f.prime_subfield();
    let mut gens: Vec<Matrix> = m.action().iter().map(|a| restrict_scalars(a, &prime)).collect();
    if k > 1 {
        gens.push(restrict_scalars(&Matrix::identity(f, n).scale(f.generator()), &prime));
    }
    let basis = enveloping_algebra(&prime, n * k, &gens);
    let j = jacobson_radical(&prime, n * k, &basis)?;
    // J M over GF(p), spanned by the columns of the radical's basis matrices
    let mut vectors = Vec::new();
    for a in &j {
        for c in 0..n * k {
            let col = a.column(c);
            if col.iter().any(|&x| x != 0) {
                vectors.push(col);
            }
        }
    }
    // back to GF(p^k)^n
    let lifted: Vec<Vec<Elem>> = vectors
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| {
                    let c: Vec<i64> = v[i * k..(i + 1) * k].iter().map(|&x| x as i64).collect();
                    f.from_coeffs(&c)
                })
                .collect()
        })
        .collect();
    Ok(Subspace::from_vectors(f, n, &lifted))
}

fn projective_points(f: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = f.order() as u64;
    (0..n).rev().flat_map(move |lead| {
        // vectors whose first nonzero entry is a 1 at position `lead`
        let tail = n - lead - 1;
        (0..q.pow(tail as u32)).map(move |mut x| {
            let mut v = vec![0; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (x % q) as Elem;
                x /= q;
            }
            v
        })
    })
}

/// Socle by exhaustion: the sum of the minimal cyclic submodules.
pub fn socle_brute_force(m: &FdModule) -> Result<Subspace> {
    let f = m.field();
    let n = m.dim();
    let q = f.order() as u128;
    let points = (q.pow(n as u32) - 1) / (q - 1);
    if n > BRUTE_FORCE_MAX_DIM || points > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::SizeGuard {
            what: "brute-force submodule scan",
            size: points,
            limit: BRUTE_FORCE_MAX_POINTS,
        });
    }
    let mut cyclic: HashSet<Subspace> = HashSet::new();
    for v in projective_points(f, n) {
        cyclic.insert(spin(m, &[v]));
    }
    let all: Vec<Subspace> = cyclic.into_iter().collect();
    let mut soc = Subspace::zero(f, n);
    for s in &all {
        let minimal = all
            .iter()
            .all(|t| t.dim() >= s.dim() || !s.contains(t).unwrap());
        if minimal {
            soc = soc.sum(s)?;
        }
    }
    Ok(soc)
}

/// Radical by exhaustion: the annihilator of the socle of the dual.
pub fn radical_brute_force(m: &FdModule) -> Result<Subspace> {
    if m.dim() == 0 {
        return Ok(Subspace::zero(m.field(), 0));
    }
    Ok(socle_brute_force(&m.dual())?.annihilator())
}

/// Radical by the matrix-algebra method when small enough, else via the MeatAxe.
pub fn radical(m: &FdModule) -> Result<Subspace> {
    if m.dim() * m.field().k() as usize <= ALGEBRA_RADICAL_MAX {
        radical_algebra(m)
    } else {
        MeatAxe::default().radical(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_triangular_radical() {
        // the algebra of upper triangular 3x3 matrices has radical of dim 3
        let f = Field::prime(3).unwrap();
        let gens = vec![
            Matrix::unit(&f, 3, 0, 0),
            Matrix::unit(&f, 3, 1, 1),
            Matrix::unit(&f, 3, 0, 1),
            Matrix::unit(&f, 3, 1, 2),
        ];
        let basis = enveloping_algebra(&f, 3, &gens);
        assert_eq!(basis.len(), 6);
        let j = jacobson_radical(&f, 3, &basis).unwrap();
        assert_eq!(j.len(), 3);
    }

    #[test]
    fn semisimple_in_large_dimension() {
        // M_4(GF(3)) is simple: trace-form arguments must return 0 even with p <= n
        let f = Field::prime(3).unwrap();
        let mut gens = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                gens.push(Matrix::unit(&f, 4, i, j));
            }
        }
        let basis = enveloping_algebra(&f, 4, &gens);
        assert_eq!(basis.len(), 16);
        assert!(jacobson_radical(&f, 4, &basis).unwrap().is_empty());
    }

    #[test]
    fn scalar_extension_blocks_multiply() {
        let f = Field::new(3, 2).unwrap();
        let prime = f.prime_subfield();
        let a = f.generator();
        let b = f.add(a, 1);
        let lhs = restrict_scalars(&Matrix::identity(&f, 1).scale(f.mul(a, b)), &prime);
        let ra = restrict_scalars(&Matrix::identity(&f, 1).scale(a), &prime);
        let rb = restrict_scalars(&Matrix::identity(&f, 1).scale(b), &prime);
        assert_eq!(lhs, ra.mul(&rb));
    }
}
