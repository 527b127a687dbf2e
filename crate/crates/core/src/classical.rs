//! gl_n and sl_n as restricted Lie algebras, with standard Borels and parabolics.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::liealg::{BasisKind, ClassicalData, Family, Functional, LieElement, RestrictedLieAlgebra, SubalgebraDatum};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "gl" => Ok(Family::Gl),
            "sl" => Ok(Family::Sl),
            other => Err(Error::InvalidInput(format!("unsupported family `{other}`"))),
        }
    }
}

/// Basis order: negative root vectors E_ij (i > j), then the Cartan part,
/// then positive root vectors E_ij (i < j), each group in lexicographic order.
fn basis_kinds(family: Family, n: usize) -> Vec<BasisKind> {
    let mut kinds = Vec::new();
    for i in 0..n {
        for j in 0..i {
            kinds.push(BasisKind::Root(i, j));
        }
    }
    let cartan = match family {
        Family::Gl => n,
        Family::Sl => n - 1,
    };
    kinds.extend((0..cartan).map(BasisKind::Cartan));
    for i in 0..n {
        for j in i + 1..n {
            kinds.push(BasisKind::Root(i, j));
        }
    }
    kinds
}

fn kind_matrix(f: &Field, family: Family, n: usize, kind: BasisKind) -> Matrix {
    match kind {
        BasisKind::Root(i, j) => Matrix::unit(f, n, i, j),
        BasisKind::Cartan(i) => match family {
            Family::Gl => Matrix::unit(f, n, i, i),
            Family::Sl => Matrix::unit(f, n, i, i).sub(&Matrix::unit(f, n, i + 1, i + 1)),
        },
    }
}

fn kind_name(family: Family, kind: BasisKind) -> String {
    match (family, kind) {
        (_, BasisKind::Root(i, j)) => format!("E{}{}", i + 1, j + 1),
        (Family::Gl, BasisKind::Cartan(i)) => format!("E{}{}", i + 1, i + 1),
        (Family::Sl, BasisKind::Cartan(i)) => format!("H{}", i + 1),
    }
}

impl ClassicalData {
    /// Coordinates of a matrix in the basis, or `None` if it is not in the span.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Elem>> {
        let f = m.field();
        let base = self.matrices[0].field();
        let rows: Vec<Vec<Elem>> = self.matrices.iter().map(|b| b.data().to_vec()).collect();
        let b = Matrix::from_rows(base, &rows, self.n * self.n).lift(f);
        // c . B = vec(m)
        let (sol, _) = b.transpose().solve(m.data()).ok()?;
        sol
    }

    /// The matrix of an element.
    pub fn matrix_of(&self, coeffs: &[Elem], field: &Field) -> Matrix {
        let mut out = Matrix::zeros(field, self.n, self.n);
        for (c, b) in coeffs.iter().zip(&self.matrices) {
            if *c != 0 {
                out.axpy(*c, &b.lift(field));
            }
        }
        out
    }
}

/// gl_n or sl_n over GF(p) with the matrix p-th power as p-map.
pub fn construct_classical(family: Family, n: usize, p: u32) -> Result<RestrictedLieAlgebra> {
    let f = Field::prime(p)?;
    if n == 0 || (family == Family::Sl && n < 2) {
        return Err(Error::InvalidInput(format!("n = {n} too small")));
    }
    let kinds = basis_kinds(family, n);
    let matrices: Vec<Matrix> = kinds.iter().map(|&k| kind_matrix(&f, family, n, k)).collect();
    let names = kinds.iter().map(|&k| kind_name(family, k)).collect();
    let data = ClassicalData {
        family,
        n,
        matrices: matrices.clone(),
        kinds,
    };
    let dim = matrices.len();
    let mut consts = vec![0; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = matrices[i].commutator(&matrices[j]);
            let coords = data.coordinates(&c).expect("commutator leaves the algebra");
            consts[(i * dim + j) * dim..(i * dim + j + 1) * dim].copy_from_slice(&coords);
        }
    }
    let pbasis = matrices
        .iter()
        .map(|m| data.coordinates(&m.pow(p as u64)).expect("p-th power leaves the algebra"))
        .collect();
    let prefix = match family {
        Family::Gl => "gl",
        Family::Sl => "sl",
    };
    Ok(RestrictedLieAlgebra::new(format!("{prefix}_{n}"), &f, names, consts, pbasis)?.with_classical(data))
}

pub fn sl(n: usize, p: u32) -> Result<Arc<RestrictedLieAlgebra>> {
    construct_classical(Family::Sl, n, p).map(Arc::new)
}

pub fn gl(n: usize, p: u32) -> Result<Arc<RestrictedLieAlgebra>> {
    construct_classical(Family::Gl, n, p).map(Arc::new)
}

fn classical_data(g: &RestrictedLieAlgebra) -> Result<&ClassicalData> {
    g.classical()
        .ok_or_else(|| Error::InvalidInput(format!("{} has no matrix realization", g.name())))
}

/// The matrix of an element of a classical algebra.
pub fn to_matrix(g: &RestrictedLieAlgebra, x: &LieElement) -> Result<Matrix> {
    Ok(classical_data(g)?.matrix_of(x.coeffs(), x.field()))
}

/// The element with the given matrix, over the matrix's field.
pub fn from_matrix(g: &RestrictedLieAlgebra, m: &Matrix) -> Result<LieElement> {
    let data = classical_data(g)?;
    if m.rows() != data.n || m.cols() != data.n {
        return Err(Error::DimensionMismatch {
            expected: data.n,
            found: m.rows(),
        });
    }
    let c = data
        .coordinates(m)
        .ok_or_else(|| Error::InvalidInput("matrix is not in the algebra".into()))?;
    g.element(m.field(), c)
}

/// Standard parabolic of sl_n containing the upper triangular Borel, with
/// Levi generated by the simple roots in `simple` (1-based indices).
pub fn borel_and_parabolic(g: &Arc<RestrictedLieAlgebra>, simple: &[usize]) -> Result<SubalgebraDatum> {
    let data = classical_data(g)?;
    if data.family != Family::Sl || data.kinds.is_empty() {
        return Err(Error::InvalidInput("parabolics are defined for standard sl_n".into()));
    }
    let n = data.n;
    if let Some(&bad) = simple.iter().find(|&&a| a == 0 || a >= n) {
        return Err(Error::InvalidInput(format!("simple root index {bad} out of range 1..{}", n - 1)));
    }
    let f = g.field();
    let vecs: Vec<Vec<Elem>> = data
        .kinds
        .iter()
        .enumerate()
        .filter(|(_, k)| match **k {
            BasisKind::Cartan(_) => true,
            BasisKind::Root(i, j) if i < j => true,
            // E_ij with i > j spans the root -(alpha_{j+1} + ... + alpha_i)
            BasisKind::Root(i, j) => (j + 1..=i).all(|a| simple.contains(&a)),
        })
        .map(|(idx, _)| {
            let mut v = vec![0; g.dim()];
            v[idx] = 1;
            v
        })
        .collect();
    SubalgebraDatum::new(g, Subspace::from_vectors(f, g.dim(), &vecs))
}

/// chi(y) = tr(e y), for a matrix e over any extension of GF(p).
pub fn trace_dual(g: &Arc<RestrictedLieAlgebra>, e: &Matrix) -> Result<Functional> {
    let data = classical_data(g)?;
    let p = g.p() as usize;
    if data.family == Family::Sl && data.n % p == 0 {
        return Err(Error::TraceFormDegenerate {
            p: g.p(),
            n: data.n,
        });
    }
    if e.rows() != data.n || e.cols() != data.n {
        return Err(Error::DimensionMismatch {
            expected: data.n,
            found: e.rows(),
        });
    }
    let f = e.field();
    let coeffs = data.matrices.iter().map(|m| e.mul(&m.lift(f)).trace()).collect();
    g.functional(f, coeffs)
}

/// Number of positive roots of sl_n.
pub fn positive_roots(n: usize) -> usize {
    n * (n - 1) / 2
}
