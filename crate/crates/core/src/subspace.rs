//! Subspaces of F^n in canonical reduced echelon form.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

/// A subspace of F^n stored as the reduced row echelon basis, so two
/// subspaces are equal iff their representations are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.data().hash(state);
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: vec![],
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn from_vectors(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Subspace {
        let m = Matrix::from_rows(field, vectors, ambient);
        Subspace::from_matrix_rows(&m)
    }

    /// Span of the rows of a matrix.
    pub fn from_matrix_rows(m: &Matrix) -> Subspace {
        let e = m.rref();
        let r = e.pivots.len();
        Subspace {
            ambient: m.cols(),
            basis: e.matrix.submatrix(0..r, 0..m.cols()),
            pivots: e.pivots,
        }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_vectors(&self) -> Vec<Vec<Elem>> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<Elem> = self.pivots.iter().map(|&c| v[c]).collect();
        let recon = self.combine(&coords);
        (recon == v).then_some(coords)
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coords: &[Elem]) -> Vec<Elem> {
        self.basis.vec_mul(coords)
    }

    pub fn contains_vector(&self, v: &[Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis_vectors().iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix_rows(&self.basis.vstack(&other.basis)))
    }

    /// Zassenhaus: row-reduce [[U, U], [V, 0]]; rows with zero left half span
    /// the intersection in their right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(self.field(), other.dim(), n));
        let e = top.vstack(&bottom).rref();
        let vecs: Vec<Vec<Elem>> = e
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= n)
            .map(|(i, _)| e.matrix.row(i)[n..].to_vec())
            .collect();
        Ok(Subspace::from_vectors(self.field(), n, &vecs))
    }

    /// Annihilator {w : w . v = 0 for all v in self} under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.field(), self.ambient);
        }
        self.basis.kernel()
    }

    /// Indices of standard basis vectors complementing this subspace
    /// (the non-pivot columns).
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// The same subspace viewed over a larger field of the same characteristic.
    pub fn lift(&self, field: &Field) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.lift(field),
            pivots: self.pivots.clone(),
        }
    }
}

/// Sum, intersection and containment of two subspaces in one call.
#[derive(Clone, Debug)]
pub struct SubspaceOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    pub contains: bool,
}

pub fn subspace_ops(u: &Subspace, v: &Subspace) -> Result<SubspaceOps> {
    Ok(SubspaceOps {
        sum: u.sum(v)?,
        intersection: u.intersection(v)?,
        contains: u.contains(v)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vectors(f: &Field, n: usize) -> Vec<Vec<Elem>> {
        let q = f.order() as usize;
        (0..q.pow(n as u32))
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let d = (x % q) as Elem;
                        x /= q;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn coordinate_axes() {
        let f = Field::prime(5).unwrap();
        let u = Subspace::from_vectors(&f, 2, &[vec![1, 0]]);
        let v = Subspace::from_vectors(&f, 2, &[vec![0, 1]]);
        let ops = subspace_ops(&u, &v).unwrap();
        assert!(ops.sum.is_full());
        assert!(ops.intersection.is_zero());
        assert!(!ops.contains);
        let same = subspace_ops(&u, &u).unwrap();
        assert_eq!(same.sum, u);
        assert_eq!(same.intersection, u);
        assert!(same.contains);
    }

    #[test]
    fn ambient_mismatch() {
        let f = Field::prime(3).unwrap();
        let u = Subspace::zero(&f, 2);
        let v = Subspace::zero(&f, 3);
        assert!(subspace_ops(&u, &v).is_err());
    }

    /// Every subspace of GF(3)^n, built by repeatedly adjoining vectors.
    fn all_subspaces(f: &Field, n: usize) -> Vec<Subspace> {
        let vs = all_vectors(f, n);
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![Subspace::zero(f, n)];
        seen.insert(frontier[0].clone());
        while let Some(s) = frontier.pop() {
            for v in &vs {
                let t = s.sum(&Subspace::from_vectors(f, n, std::slice::from_ref(v))).unwrap();
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    #[test]
    fn grassmann_formula_exhaustive() {
        let f = Field::prime(3).unwrap();
        for n in 1..=4 {
            let spaces = all_subspaces(&f, n);
            if n == 4 {
                // 1 + 40 + 130 + 40 + 1 subspaces of GF(3)^4
                assert_eq!(spaces.len(), 212);
            }
            for u in &spaces {
                for v in &spaces {
                    let s = u.sum(v).unwrap();
                    let i = u.intersection(v).unwrap();
                    assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
                    assert!(s.contains(u).unwrap() && s.contains(v).unwrap());
                    assert!(u.contains(&i).unwrap() && v.contains(&i).unwrap());
                }
            }
        }
    }

    #[test]
    fn membership_and_annihilator() {
        let f = Field::prime(7).unwrap();
        let u = Subspace::from_vectors(&f, 3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let w = u.combine(&[3, 5]);
        assert!(u.contains_vector(&w));
        let ann = u.annihilator();
        assert_eq!(ann.dim(), 1);
        let a = &ann.basis_vectors()[0];
        for v in u.basis_vectors() {
            assert_eq!(f.dot(a, &v), 0);
        }
    }
}
