//! Finite-dimensional modules over reduced enveloping algebras, given by the
//! action matrices of the Lie algebra basis (acting on column vectors).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::liealg::{Functional, RestrictedLieAlgebra};
use crate::matrix::Matrix;
use crate::report::CheckReport;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct FdModule {
    algebra: Arc<RestrictedLieAlgebra>,
    chi: Functional,
    field: Field,
    dim: usize,
    action: Vec<Matrix>,
}

/// JSON form of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleExport {
    pub algebra: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub generators: Vec<String>,
    pub chi: Vec<u32>,
    /// action[i][r][c]
    pub action: Vec<Vec<Vec<u32>>>,
}

impl FdModule {
    /// Builds a module and asserts the bracket relations and the p-character
    /// equation rho(x)^p - rho(x^[p]) = chi(x)^p on the basis.
    pub fn new(
        algebra: &Arc<RestrictedLieAlgebra>,
        chi: &Functional,
        field: &Field,
        action: Vec<Matrix>,
    ) -> Result<FdModule> {
        let m = FdModule::new_unchecked(algebra, chi, field, action)?;
        let report = m.check_invariants();
        if let Some(bad) = report.failures().next() {
            return Err(Error::Invariant(format!(
                "module relation `{}` fails at {}",
                bad.name,
                bad.witness.clone().unwrap_or_default()
            )));
        }
        Ok(m)
    }

    /// Builds a module without checking relations (for negative tests and
    /// trusted internal constructions).
    pub fn new_unchecked(
        algebra: &Arc<RestrictedLieAlgebra>,
        chi: &Functional,
        field: &Field,
        action: Vec<Matrix>,
    ) -> Result<FdModule> {
        if chi.algebra_id() != algebra.id() {
            return Err(Error::ParentMismatch);
        }
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: action.len(),
            });
        }
        if !field.contains_field(chi.field()) {
            return Err(Error::FieldMismatch);
        }
        let dim = action.first().map(|a| a.rows()).unwrap_or(0);
        for a in &action {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.rows(),
                });
            }
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(FdModule {
            algebra: algebra.clone(),
            chi: chi.lift(field),
            field: field.clone(),
            dim,
            action,
        })
    }

    /// The zero module.
    pub fn zero(algebra: &Arc<RestrictedLieAlgebra>, chi: &Functional, field: &Field) -> Result<FdModule> {
        let action = (0..algebra.dim()).map(|_| Matrix::zeros(field, 0, 0)).collect();
        FdModule::new_unchecked(algebra, chi, field, action)
    }

    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.algebra
    }
    pub fn chi(&self) -> &Functional {
        &self.chi
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn action(&self) -> &[Matrix] {
        &self.action
    }
    pub fn generator(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// rho(x) for an arbitrary element given by coordinates.
    pub fn act(&self, coeffs: &[Elem]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.dim, self.dim);
        for (c, a) in coeffs.iter().zip(&self.action) {
            if *c != 0 {
                out.axpy(*c, a);
            }
        }
        out
    }

    pub fn check_invariants(&self) -> CheckReport {
        let mut report = CheckReport::new();
        let g = &self.algebra;
        let n = g.dim();
        let names = g.basis_names();
        let mut witness = None;
        'br: for i in 0..n {
            for j in i + 1..n {
                let lhs = self.action[i].commutator(&self.action[j]);
                let mut c = vec![0; n];
                for &(m, s) in g.bracket_terms(i, j) {
                    c[m] = s;
                }
                if lhs != self.act(&c) {
                    witness = Some(format!("[{}, {}]", names[i], names[j]));
                    break 'br;
                }
            }
        }
        report.record("bracket-relations", witness);
        let p = g.p() as u64;
        let mut witness = None;
        for (i, name) in names.iter().enumerate().take(n) {
            let lhs = self.action[i].pow(p).sub(&self.act(g.pbasis(i)));
            let s = self.field.pow(self.chi.coeffs()[i], p);
            if lhs != Matrix::identity(&self.field, self.dim).scale(s) {
                witness = Some(name.clone());
                break;
            }
        }
        report.record("p-character", witness);
        report
    }

    /// The dual module, rho*(x) = -rho(x)^T, with p-character -chi.
    pub fn dual(&self) -> FdModule {
        let f = &self.field;
        let action = self.action.iter().map(|a| a.transpose().scale(f.neg(1))).collect();
        FdModule {
            algebra: self.algebra.clone(),
            chi: self.chi.scale(f.neg(1)),
            field: f.clone(),
            dim: self.dim,
            action,
        }
    }

    /// Whether a subspace is invariant under every generator.
    pub fn is_submodule(&self, w: &Subspace) -> bool {
        w.basis_vectors()
            .iter()
            .all(|v| self.action.iter().all(|a| w.contains_vector(&a.mul_vec(v))))
    }

    /// The submodule on an invariant subspace, in its echelon basis.
    pub fn submodule(&self, w: &Subspace) -> Result<FdModule> {
        let rows = w.basis_vectors();
        let d = rows.len();
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let mut m = Matrix::zeros(&self.field, d, d);
            for (k, v) in rows.iter().enumerate() {
                let c = w
                    .coordinates(&a.mul_vec(v))
                    .ok_or_else(|| Error::Invariant("subspace is not a submodule".into()))?;
                for (r, x) in c.into_iter().enumerate() {
                    m.set(r, k, x);
                }
            }
            action.push(m);
        }
        FdModule::new_unchecked(&self.algebra, &self.chi, &self.field, action)
    }

    /// The quotient by an invariant subspace, in the basis of the non-pivot
    /// standard vectors.
    pub fn quotient(&self, w: &Subspace) -> Result<FdModule> {
        let comp = w.complement_indices();
        let d = comp.len();
        let rows = w.basis_vectors();
        let f = &self.field;
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let mut m = Matrix::zeros(f, d, d);
            for (k, &c) in comp.iter().enumerate() {
                let mut v = a.column(c);
                for (row, &piv) in rows.iter().zip(w.pivots()) {
                    let x = v[piv];
                    if x != 0 {
                        f.axpy(&mut v, f.neg(x), row);
                    }
                }
                for (r, &cc) in comp.iter().enumerate() {
                    m.set(r, k, v[cc]);
                }
            }
            action.push(m);
        }
        if !self.is_submodule(w) {
            return Err(Error::Invariant("subspace is not a submodule".into()));
        }
        FdModule::new_unchecked(&self.algebra, &self.chi, &self.field, action)
    }

    pub fn direct_sum(&self, other: &FdModule) -> Result<FdModule> {
        if self.algebra.id() != other.algebra.id() {
            return Err(Error::ParentMismatch);
        }
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(&self.field, d, d);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..other.dim {
                    for c in 0..other.dim {
                        m.set(self.dim + r, self.dim + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        FdModule::new_unchecked(&self.algebra, &self.chi, &self.field, action)
    }

    /// The same module over a larger field.
    pub fn lift(&self, field: &Field) -> FdModule {
        FdModule {
            algebra: self.algebra.clone(),
            chi: self.chi.lift(field),
            field: field.clone(),
            dim: self.dim,
            action: self.action.iter().map(|a| a.lift(field)).collect(),
        }
    }

    pub fn export(&self) -> ModuleExport {
        ModuleExport {
            algebra: self.algebra.name().to_string(),
            field: self.field.spec().clone(),
            dim: self.dim,
            generators: self.algebra.basis_names().to_vec(),
            chi: self.chi.coeffs().to_vec(),
            action: self.action.iter().map(|a| (0..a.rows()).map(|r| a.row(r).to_vec()).collect()).collect(),
        }
    }
}
