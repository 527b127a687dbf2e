//! Induced modules over reduced enveloping algebras: baby Verma modules,
//! parabolic induction from Levi modules, and the derived invariants
//! (composition factors, simple quotients, divisibility audits).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::env::ReducedEnvAlgebra;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::liealg::{centralizer, is_nilpotent_functional, BasisKind, Family, Functional, RestrictedLieAlgebra, SubalgebraDatum};
use crate::matrix::Matrix;
use crate::meataxe::{classify, MeatAxe, SimpleModule, Split};
use crate::module::FdModule;
use crate::radical::radical;
use crate::subspace::Subspace;

/// An integral weight; the integers are kept for dot-action arithmetic and
/// reduced mod p when a module is built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Weight {
        Weight { coords }
    }

    pub fn reduced(&self, p: u32) -> Vec<u32> {
        self.coords.iter().map(|c| c.rem_euclid(p as i64) as u32).collect()
    }
}

/// Rank of the weight lattice used for `Weight` on a classical algebra:
/// n - 1 for sl_n (fundamental-weight coordinates), n for gl_n.
pub fn weight_rank(g: &RestrictedLieAlgebra) -> Result<usize> {
    let cl = classical(g)?;
    Ok(match cl.family {
        Family::Sl => cl.n - 1,
        Family::Gl => cl.n,
    })
}

fn classical(g: &RestrictedLieAlgebra) -> Result<&crate::liealg::ClassicalData> {
    g.classical()
        .filter(|c| !c.kinds.is_empty())
        .ok_or_else(|| Error::InvalidInput("needs a standard classical algebra".into()))
}

fn same_structure(a: &RestrictedLieAlgebra, b: &RestrictedLieAlgebra) -> bool {
    let n = a.dim();
    n == b.dim()
        && a.p() == b.p()
        && (0..n).all(|i| a.pbasis(i) == b.pbasis(i) && (0..n).all(|j| a.bracket_terms(i, j) == b.bracket_terms(i, j)))
}

/// Ind from U_chi(p_sub) to U_chi(g) of a module over `p_sub.structure()`.
///
/// The induced basis is y^a (x) m_v with y the standard basis vectors of g
/// outside p_sub (in basis order) and a < p^r; vector (a, v) sits at index
/// a * dim M + v.
pub fn induce(
    g: &Arc<RestrictedLieAlgebra>,
    p_sub: &SubalgebraDatum,
    chi: &Functional,
    m: &FdModule,
) -> Result<FdModule> {
    if p_sub.algebra().id() != g.id() || chi.algebra_id() != g.id() {
        return Err(Error::ParentMismatch);
    }
    if !chi.vanishes_on(p_sub.subspace()) {
        return Err(Error::CharacterNonzeroOnSubalgebra);
    }
    let sub = p_sub.structure()?;
    if !same_structure(&sub, m.algebra()) {
        return Err(Error::InvalidInput(
            "the module must be over the subalgebra in its echelon basis".into(),
        ));
    }
    if !m.chi().is_zero() {
        return Err(Error::Invariant("the inducing module must have zero p-character".into()));
    }
    let report = m.check_invariants();
    if let Some(bad) = report.failures().next() {
        return Err(Error::Invariant(format!("inducing module fails `{}`", bad.name)));
    }
    let f = m.field().clone();
    if !f.contains_field(chi.field()) {
        return Err(Error::FieldMismatch);
    }
    let n = g.dim();
    let prime = g.field().clone();
    let comp = p_sub.subspace().complement_indices();
    let r = comp.len();
    let dm = m.dim();
    let p = g.p() as u64;
    let top = p.pow(r as u32);
    let dim = (top as u128) * dm as u128;
    if dim > INDUCE_GUARD as u128 {
        return Err(Error::SizeGuard {
            what: "induced module dimension",
            size: dim,
            limit: INDUCE_GUARD as u128,
        });
    }
    let dim = dim as usize;
    if dm == 0 {
        return FdModule::zero(g, &chi.lift(&f), &f);
    }

    // g rebased: complement vectors first, then the subalgebra's echelon rows
    let mut rows: Vec<Vec<Elem>> = comp
        .iter()
        .map(|&c| {
            let mut v = vec![0; n];
            v[c] = 1;
            v
        })
        .collect();
    rows.extend(p_sub.subspace().basis_vectors());
    let basis = Matrix::from_rows(&prime, &rows, n);
    let names = comp
        .iter()
        .map(|&c| g.basis_names()[c].clone())
        .chain(sub.basis_names().iter().cloned())
        .collect();
    let gp = Arc::new(g.rebased(&basis, names)?);
    let chi_f = chi.lift(&f);
    let chi_new: Vec<Elem> = rows
        .iter()
        .map(|row| row.iter().zip(chi_f.coeffs()).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect();
    let chi_p = gp.functional(&f, chi_new)?;
    let u = ReducedEnvAlgebra::new(&gp, &chi_p, &f)?;

    // rho'(x'_j) for each new basis vector
    let mut new_action = Vec::with_capacity(n);
    for j in 0..n {
        let mut mat = Matrix::zeros(&f, dim, dim);
        for a in 0..top {
            let prod = u.generator_mul(j, &u.monomial(a));
            for (&mono, &c) in prod.terms() {
                let a2 = mono % top;
                let b = u.exponents(mono);
                // apply s^b to every m_v: rightmost factor first
                for v in 0..dm {
                    let mut w = vec![0; dm];
                    w[v] = 1;
                    for i in (r..n).rev() {
                        for _ in 0..b[i] {
                            w = m.generator(i - r).mul_vec(&w);
                        }
                    }
                    for (t, &x) in w.iter().enumerate() {
                        if x != 0 {
                            let row = a2 as usize * dm + t;
                            let col = a as usize * dm + v;
                            mat.set(row, col, f.add(mat.get(row, col), f.mul(c, x)));
                        }
                    }
                }
            }
        }
        new_action.push(mat);
    }
    // e_i = sum_j (B^{-1})_{ij} x'_j
    let inv = basis.inverse()?;
    let action = (0..n)
        .map(|i| {
            let mut mat = Matrix::zeros(&f, dim, dim);
            for (j, nm) in new_action.iter().enumerate() {
                let c = inv.get(i, j);
                if c != 0 {
                    mat.axpy(c, nm);
                }
            }
            mat
        })
        .collect();
    FdModule::new(g, &chi_f, &f, action)
}

/// Largest induced dimension `induce` will build.
pub const INDUCE_GUARD: usize = 4096;

/// The one-dimensional module K_lambda of a subalgebra spanned by standard
/// basis vectors containing the Cartan: Cartan elements act by lambda, root
/// vectors by 0.
pub fn weight_module(b: &SubalgebraDatum, lambda: &Weight, field: &Field) -> Result<FdModule> {
    let g = b.algebra();
    let cl = classical(g)?;
    if lambda.coords.len() != weight_rank(g)? {
        return Err(Error::DimensionMismatch {
            expected: weight_rank(g)?,
            found: lambda.coords.len(),
        });
    }
    let lam = lambda.reduced(g.p());
    let sub = Arc::new(b.structure()?);
    let mut action = Vec::with_capacity(b.dim());
    for row in b.subspace().basis_vectors() {
        let support: Vec<usize> = (0..row.len()).filter(|&i| row[i] != 0).collect();
        let mut val = 0;
        for &i in &support {
            if let BasisKind::Cartan(k) = cl.kinds[i] {
                val = field.add(val, field.mul(row[i], lam[k]));
            }
        }
        action.push(Matrix::from_rows(field, &[vec![val]], 1));
    }
    FdModule::new(&sub, &sub.zero_functional(), field, action)
}

/// Z_{chi,b}(lambda) = U_chi(g) (x)_{u(b)} K_lambda.
pub fn baby_verma(
    g: &Arc<RestrictedLieAlgebra>,
    b: &SubalgebraDatum,
    chi: &Functional,
    lambda: &Weight,
) -> Result<FdModule> {
    if !chi.vanishes_on(b.subspace()) {
        return Err(Error::CharacterNonzeroOnSubalgebra);
    }
    let k = weight_module(b, lambda, chi.field())?;
    induce(g, b, chi, &k)
}

/// The simple module of an A_1 Levi together with the dot-action weight.
#[derive(Clone, Debug)]
pub struct LeviModule {
    pub parabolic: SubalgebraDatum,
    pub module: FdModule,
    /// -w0 . lambda = -lambda + (m + 1) alpha, with w0 = s_alpha.
    pub dot_weight: Weight,
}

/// Simple root alpha_s in the coordinates used by `Weight`.
fn simple_root(family: Family, n: usize, s: usize) -> Vec<i64> {
    match family {
        Family::Sl => (1..n)
            .map(|k| match (k as i64 - s as i64).abs() {
                0 => 2,
                1 => -1,
                _ => 0,
            })
            .collect(),
        Family::Gl => (1..=n)
            .map(|k| if k == s { 1 } else if k == s + 1 { -1 } else { 0 })
            .collect(),
    }
}

/// (Ind_B^P K_{-w0 . lambda})^* for the standard parabolic of sl_n with Levi
/// root alpha_s (1-based): the (m+1)-dimensional simple module of highest
/// weight lambda for the Levi, m = <lambda, alpha_s^vee> <= p - 2, with the
/// nilradical acting by 0. Basis v_0..v_m with f v_j = v_{j+1}.
pub fn levi_dual_weyl(g: &Arc<RestrictedLieAlgebra>, s: usize, lambda: &Weight) -> Result<LeviModule> {
    let cl = classical(g)?;
    let n = cl.n;
    if cl.family != Family::Sl {
        return Err(Error::InvalidInput("Levi modules are built for sl_n".into()));
    }
    if lambda.coords.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: lambda.coords.len(),
        });
    }
    let parabolic = crate::classical::borel_and_parabolic(g, &[s])?;
    let p = g.p() as i64;
    let m = lambda.coords[s - 1];
    if m < 0 || m > p - 2 {
        return Err(Error::InvalidInput(format!(
            "<lambda, alpha_{s}> = {m} outside the lowest alcove range 0..={}",
            p - 2
        )));
    }
    let alpha = simple_root(cl.family, n, s);
    let f = g.field().clone();
    let d = m as usize + 1;
    let sub = Arc::new(parabolic.structure()?);
    let mut action = Vec::with_capacity(parabolic.dim());
    for row in parabolic.subspace().basis_vectors() {
        let i = (0..row.len()).find(|&i| row[i] != 0).unwrap();
        let mut mat = Matrix::zeros(&f, d, d);
        match cl.kinds[i] {
            BasisKind::Cartan(k) => {
                for j in 0..d {
                    mat.set(j, j, f.from_i64(lambda.coords[k] - j as i64 * alpha[k]));
                }
            }
            BasisKind::Root(a, b) if a == s && b == s - 1 => {
                for j in 0..d - 1 {
                    mat.set(j + 1, j, 1);
                }
            }
            BasisKind::Root(a, b) if a == s - 1 && b == s => {
                for j in 1..d {
                    mat.set(j - 1, j, f.from_i64(j as i64 * (m - j as i64 + 1)));
                }
            }
            BasisKind::Root(..) => {}
        }
        action.push(mat);
    }
    let module = FdModule::new(&sub, &sub.zero_functional(), &f, action)?;
    let dot_weight = Weight::new(
        lambda
            .coords
            .iter()
            .zip(&alpha)
            .map(|(l, a)| -l + (m + 1) * a)
            .collect(),
    );
    Ok(LeviModule {
        parabolic,
        module,
        dot_weight,
    })
}

/// Composition factors with isomorphism-class ids.
pub fn composition_factors(m: &FdModule) -> Result<Vec<(SimpleModule, usize)>> {
    let factors = MeatAxe::default().composition_factors(m)?;
    let ids = classify(&factors)?;
    Ok(factors.into_iter().zip(ids).collect())
}

/// Multiset of (dim, class id), sorted.
pub fn factor_summary(m: &FdModule) -> Result<Vec<(usize, usize)>> {
    let mut out: Vec<(usize, usize)> = composition_factors(m)?
        .iter()
        .map(|(s, id)| (s.module.dim(), *id))
        .collect();
    out.sort();
    Ok(out)
}

/// The head M / rad M split into its simple summands.
#[derive(Clone, Debug)]
pub struct SimpleQuotients {
    pub radical: Subspace,
    pub quotients: Vec<SimpleModule>,
    /// Isomorphism-class id for each quotient.
    pub classes: Vec<usize>,
}

impl SimpleQuotients {
    pub fn distinct(&self) -> usize {
        let mut c = self.classes.clone();
        c.sort();
        c.dedup();
        c.len()
    }
}

pub fn simple_quotients(m: &FdModule) -> Result<SimpleQuotients> {
    let rad = radical(m)?;
    let head = m.quotient(&rad)?;
    let mut ma = MeatAxe::default();
    let mut quotients = Vec::new();
    let mut stack = vec![head];
    while let Some(x) = stack.pop() {
        if x.dim() == 0 {
            continue;
        }
        match ma.split(&x)? {
            Split::Irreducible(certificate) => quotients.push(SimpleModule { module: x, certificate }),
            Split::Proper(w) => {
                // the head is semisimple, so both sides are again semisimple
                stack.push(x.quotient(&w)?);
                stack.push(x.submodule(&w)?);
            }
        }
    }
    let classes = classify(&quotients)?;
    Ok(SimpleQuotients {
        radical: rad,
        quotients,
        classes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KwReport {
    pub orbit_dim: usize,
    /// p^{orbit_dim / 2}
    pub divisor: u64,
    pub factor_dims: Vec<usize>,
    pub divisible: bool,
}

/// Checks p^{dim(G chi)/2} | dim L for every composition factor L of M.
pub fn kw_check(m: &FdModule, chi: &Functional, g: &Arc<RestrictedLieAlgebra>) -> Result<KwReport> {
    if !is_nilpotent_functional(g, chi)? {
        return Err(Error::InvalidInput("chi is not nilpotent".into()));
    }
    let orbit_dim = g.dim() - centralizer(g, chi)?.dim();
    if orbit_dim % 2 == 1 {
        return Err(Error::Invariant(format!("odd coadjoint orbit dimension {orbit_dim}")));
    }
    let divisor = (g.p() as u64).pow(orbit_dim as u32 / 2);
    let mut factor_dims: Vec<usize> = factor_summary(m)?.into_iter().map(|(d, _)| d).collect();
    factor_dims.sort();
    let divisible = factor_dims.iter().all(|&d| (d as u64).is_multiple_of(divisor));
    Ok(KwReport {
        orbit_dim,
        divisor,
        factor_dims,
        divisible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationReport {
    pub dim: usize,
    pub chi_factor_dims: Vec<usize>,
    pub restricted_factor_dims: Vec<usize>,
    pub totals_agree: bool,
    /// Whether the two action tables coincide (always when chi = 0).
    pub modules_coincide: bool,
}

/// Z_{chi,b}(lambda) against Z_{0,b}(lambda) on the same PBW basis.
pub fn compare_deformation(
    g: &Arc<RestrictedLieAlgebra>,
    b: &SubalgebraDatum,
    lambda: &Weight,
    chi: &Functional,
) -> Result<DeformationReport> {
    let zc = baby_verma(g, b, chi, lambda)?;
    let z0 = baby_verma(g, b, &g.zero_functional().lift(chi.field()), lambda)?;
    let dims = |m: &FdModule| -> Result<Vec<usize>> {
        let mut d: Vec<usize> = factor_summary(m)?.into_iter().map(|(d, _)| d).collect();
        d.sort();
        Ok(d)
    };
    let chi_factor_dims = dims(&zc)?;
    let restricted_factor_dims = dims(&z0)?;
    let totals_agree = chi_factor_dims.iter().sum::<usize>() == zc.dim()
        && restricted_factor_dims.iter().sum::<usize>() == z0.dim()
        && zc.dim() == z0.dim();
    Ok(DeformationReport {
        dim: zc.dim(),
        chi_factor_dims,
        restricted_factor_dims,
        totals_agree,
        modules_coincide: zc.action() == z0.action(),
    })
}

/// Dimension multiset of composition factors grouped by class.
pub fn class_table(factors: &[(SimpleModule, usize)]) -> BTreeMap<usize, (usize, usize)> {
    let mut t = BTreeMap::new();
    for (s, id) in factors {
        let e = t.entry(*id).or_insert((s.module.dim(), 0));
        e.1 += 1;
    }
    t
}
