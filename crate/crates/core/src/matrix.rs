//! Dense matrices over a finite field and the elimination kernel.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;
use crate::subspace::Subspace;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&a| self.field.format(a)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of row reduction: the reduced matrix and its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>], cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix::from_vec(field, rows.len(), cols, data)
    }

    /// Integer entries reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| field.from_i64(x))
            })
            .collect();
        Matrix::from_vec(field, rows.len(), cols, data)
    }

    /// The elementary matrix E_ij (0-based).
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        m.set(i, j, 1);
        m
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix::from_vec(field, rows, cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn row_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Same entries viewed over a larger field with the same characteristic.
    pub fn lift(&self, field: &Field) -> Matrix {
        assert!(field.contains_field(&self.field) || self.data.iter().all(|&x| x < field.p()));
        Matrix {
            field: field.clone(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix::from_vec(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix::from_vec(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix::from_vec(f, self.rows, self.cols, data)
    }

    /// self += c * other
    pub fn axpy(&mut self, c: Elem, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field.clone();
        f.axpy(&mut self.data, c, &other.data);
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        if f.is_prime_field() {
            // products stay below p^2 < 2^30, so rows accumulate without reduction
            let p = f.p() as u64;
            let mut acc = vec![0u64; other.cols];
            for i in 0..self.rows {
                acc.fill(0);
                for k in 0..self.cols {
                    let a = self.data[i * self.cols + k] as u64;
                    if a != 0 {
                        for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                            *s += a * b as u64;
                        }
                    }
                }
                for (d, s) in out.data[i * other.cols..(i + 1) * other.cols].iter_mut().zip(&acc) {
                    *d = (s % p) as Elem;
                }
            }
            return out;
        }
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            self.field.axpy(&mut out, c, self.row(i));
        }
        out
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Elem {
        assert!(self.is_square());
        (0..self.rows).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    /// Stacks rows of `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::from_vec(&self.field, self.rows + other.rows, self.cols, data)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix::from_vec(&self.field, self.rows, cols, data)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            data.extend_from_slice(&self.row(i)[cols.clone()]);
        }
        Matrix::from_vec(&self.field, rows.len(), cols.len(), data)
    }

    /// Reduced row echelon form. Pivots are taken column by column, using the
    /// first row at or below the current pivot row with a nonzero entry.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Echelon { matrix: m, pivots }
    }

    /// Row-reduces in place, pivoting only within the first `limit` columns.
    pub fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).unwrap();
            if inv != 1 {
                f.scale_in_place(&mut self.data[r * cols..(r + 1) * cols], inv);
            }
            let pivot_row = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i != r {
                    let a = self.data[i * cols + c];
                    if a != 0 {
                        f.axpy(&mut self.data[i * cols..(i + 1) * cols], f.neg(a), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel {x : A x = 0}, one vector per free column.
    pub fn kernel_vectors(&self) -> Vec<Vec<Elem>> {
        let e = self.rref();
        kernel_from_echelon(&e, self.cols)
    }

    /// The right kernel as a canonical subspace.
    pub fn kernel(&self) -> Subspace {
        Subspace::from_vectors(&self.field, self.cols, &self.kernel_vectors())
    }

    /// Left kernel {y : y A = 0}.
    pub fn left_kernel(&self) -> Subspace {
        self.transpose().kernel()
    }

    /// One particular solution of A x = b (free variables set to zero) and
    /// the kernel of A.
    pub fn solve(&self, b: &[Elem]) -> Result<(Option<Vec<Elem>>, Subspace)> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let col = Matrix::from_vec(&self.field, self.rows, 1, b.to_vec());
        let mut aug = self.hstack(&col);
        let pivots = aug.rref_in_place(self.cols);
        let kernel = Subspace::from_vectors(
            &self.field,
            self.cols,
            &kernel_from_echelon(
                &Echelon {
                    matrix: aug.clone(),
                    pivots: pivots.clone(),
                },
                self.cols,
            ),
        );
        let r = pivots.len();
        for i in r..self.rows {
            if aug.get(i, self.cols) != 0 {
                return Ok((None, kernel));
            }
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols);
        }
        Ok((Some(x), kernel))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(&self.field, n));
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        Ok(aug.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Characteristic polynomial det(xI - A) via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            if pr != c + 1 {
                for j in 0..n {
                    h.data.swap(pr * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + pr, i * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).unwrap();
            for i in c + 2..n {
                let m = f.mul(h.get(i, c), inv);
                if m == 0 {
                    continue;
                }
                // row_i -= m row_{c+1}; col_{c+1} += m col_i
                let src = h.row(c + 1).to_vec();
                f.axpy(h.row_mut(i), f.neg(m), &src);
                for r in 0..n {
                    let v = f.add(h.get(r, c + 1), f.mul(m, h.get(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        // p_m(x) = (x - h_mm) p_{m-1} - sum_{i<m} (prod_{j=i+1}^{m} h_{j,j-1}) h_{i,m} p_{i-1}
        let mut ps: Vec<Poly> = vec![Poly::one(&f)];
        for m in 0..n {
            let mut pm = Poly::new(&f, vec![f.neg(h.get(m, m)), 1]).mul(&ps[m]);
            let mut prod = 1;
            for i in (0..m).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                if prod == 0 {
                    break;
                }
                let c = f.mul(prod, h.get(i, m));
                if c != 0 {
                    pm = pm.sub(&ps[i].scale(c));
                }
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }

    /// Evaluates a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, poly: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }
}

fn kernel_from_echelon(e: &Echelon, ncols: usize) -> Vec<Vec<Elem>> {
    let f = e.matrix.field.clone();
    let mut is_pivot = vec![false; ncols];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (i, &pc) in e.pivots.iter().enumerate() {
            v[pc] = f.neg(e.matrix.get(i, free));
        }
        out.push(v);
    }
    out
}

/// Standalone form of the solver: particular solution (if any) plus kernel.
pub fn solve_linear(a: &Matrix, b: &[Elem]) -> Result<(Option<Vec<Elem>>, Subspace)> {
    a.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_product_matches_extension_product() {
        let f = Field::prime(7).unwrap();
        let big = Field::new(7, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = Matrix::random(&f, 4, 6, &mut rng);
            let b = Matrix::random(&f, 6, 3, &mut rng);
            assert_eq!(a.mul(&b).lift(&big), a.lift(&big).mul(&b.lift(&big)));
        }
    }

    #[test]
    fn identity_solve() {
        let f = Field::prime(5).unwrap();
        let (x, k) = Matrix::identity(&f, 2).solve(&[1, 2]).unwrap();
        assert_eq!(x, Some(vec![1, 2]));
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn zero_solve() {
        let f = Field::prime(5).unwrap();
        let (x, k) = Matrix::zeros(&f, 2, 2).solve(&[0, 0]).unwrap();
        assert_eq!(x, Some(vec![0, 0]));
        assert_eq!(k.dim(), 2);
        let (x, _) = Matrix::zeros(&f, 2, 2).solve(&[1, 0]).unwrap();
        assert_eq!(x, None);
    }

    #[test]
    fn rank_one_solve() {
        let f = Field::prime(5).unwrap();
        let a = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        let (x, k) = a.solve(&[1, 2]).unwrap();
        let x = x.expect("consistent system");
        assert_eq!(a.mul_vec(&x), vec![1, 2]);
        assert_eq!(k.dim(), 1);
        for v in k.basis_vectors() {
            assert_eq!(a.mul_vec(&v), vec![0, 0]);
        }
        assert!(matches!(
            a.solve(&[1, 2, 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_solves_are_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [1, 2] {
            let f = Field::new(3, k).unwrap();
            for _ in 0..50 {
                let r = rng.gen_range(1..6);
                let c = rng.gen_range(1..6);
                let a = Matrix::random(&f, r, c, &mut rng);
                let x0: Vec<Elem> = (0..c).map(|_| f.random(&mut rng)).collect();
                let b = a.mul_vec(&x0);
                let (x, ker) = a.solve(&b).unwrap();
                assert_eq!(a.mul_vec(&x.unwrap()), b);
                assert_eq!(ker.dim() + a.rank(), c);
                for v in ker.basis_vectors() {
                    assert!(a.mul_vec(&v).iter().all(|&e| e == 0));
                }
            }
        }
    }

    #[test]
    fn inverse_and_charpoly() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Field::prime(7).unwrap();
        for _ in 0..20 {
            let a = Matrix::random(&f, 5, 5, &mut rng);
            if let Ok(inv) = a.inverse() {
                assert_eq!(a.mul(&inv), Matrix::identity(&f, 5));
            } else {
                assert!(a.rank() < 5);
            }
            // Cayley-Hamilton
            let cp = a.charpoly();
            assert_eq!(cp.degree(), 5);
            assert!(a.eval_poly(&cp).is_zero());
        }
    }
}
