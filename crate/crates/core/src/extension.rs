//! The twisted central extension l_chi = l + Kc with
//! `(a + alpha c)^[p] = a^[p] + (chi(a)^p + alpha^p) c`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::liealg::{centralizer, is_nilpotent_functional, Functional, LieElement, RestrictedLieAlgebra};
use crate::report::CheckReport;

/// Upper bound on the number of candidates `find_splittings` will enumerate.
pub const SPLITTING_SEARCH_LIMIT: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub struct CentralExtensionAlgebra {
    base: Arc<RestrictedLieAlgebra>,
    chi: Functional,
    carrier: Arc<RestrictedLieAlgebra>,
}

/// Builds l_chi. The character must take values in GF(p).
pub fn central_extension(l: &Arc<RestrictedLieAlgebra>, chi: &Functional) -> Result<CentralExtensionAlgebra> {
    if chi.algebra_id() != l.id() {
        return Err(Error::ParentMismatch);
    }
    if !chi.is_over_prime_field() {
        return Err(Error::InvalidInput("the character of l_chi must be defined over GF(p)".into()));
    }
    let n = l.dim();
    let m = n + 1;
    let mut consts = vec![0; m * m * m];
    for i in 0..n {
        for j in 0..n {
            for &(k, c) in l.bracket_terms(i, j) {
                consts[(i * m + j) * m + k] = c;
            }
        }
    }
    let f = l.field();
    let mut pbasis: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut v = l.pbasis(i).to_vec();
            v.push(f.pow(chi.coeffs()[i], l.p() as u64));
            v
        })
        .collect();
    let mut c = vec![0; m];
    c[n] = 1;
    pbasis.push(c);
    let mut names = l.basis_names().to_vec();
    names.push("c".into());
    let carrier = RestrictedLieAlgebra::new(format!("{}_chi", l.name()), f, names, consts, pbasis)?;
    Ok(CentralExtensionAlgebra {
        base: l.clone(),
        chi: chi.lift(f),
        carrier: Arc::new(carrier),
    })
}

impl CentralExtensionAlgebra {
    pub fn base(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.base
    }
    pub fn chi(&self) -> &Functional {
        &self.chi
    }
    pub fn carrier(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.carrier
    }
    /// Index of c in the carrier basis.
    pub fn c_index(&self) -> usize {
        self.base.dim()
    }

    /// a + alpha c.
    pub fn embed(&self, a: &LieElement, alpha: Elem) -> Result<LieElement> {
        if a.algebra_id() != self.base.id() {
            return Err(Error::ParentMismatch);
        }
        let mut v = a.coeffs().to_vec();
        v.push(alpha);
        self.carrier.element(a.field(), v)
    }

    /// Splits a carrier element into (a, alpha).
    pub fn project(&self, x: &LieElement) -> Result<(LieElement, Elem)> {
        if x.algebra_id() != self.carrier.id() {
            return Err(Error::ParentMismatch);
        }
        let n = self.base.dim();
        let a = self.base.element(x.field(), x.coeffs()[..n].to_vec())?;
        Ok((a, x.coeffs()[n]))
    }

    /// The section y -> y + beta(y) c.
    pub fn section(&self, beta: &Functional, y: &LieElement) -> Result<LieElement> {
        let f = if beta.field().k() > y.field().k() { beta.field() } else { y.field() };
        let y = y.lift(f);
        self.embed(&y, beta.eval(&y))
    }

    /// Checks that y -> y + beta(y)c preserves brackets and p-th powers on
    /// `samples` random pairs over the field of beta.
    pub fn verify_section(&self, beta: &Functional, samples: usize, seed: u64) -> CheckReport {
        let mut report = CheckReport::new();
        let f = beta.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bracket_witness = None;
        let mut power_witness = None;
        for _ in 0..samples {
            let x = self.base.random_element(&f, &mut rng);
            let y = self.base.random_element(&f, &mut rng);
            let sx = self.section(beta, &x).unwrap();
            let sy = self.section(beta, &y).unwrap();
            let lhs = self.carrier.bracket(&sx, &sy).unwrap();
            let rhs = self.section(beta, &self.base.bracket(&x, &y).unwrap()).unwrap();
            if bracket_witness.is_none() && lhs != rhs {
                bracket_witness = Some(format!("{:?}, {:?}", x.coeffs(), y.coeffs()));
            }
            let lhs = self.carrier.p_power(&sx);
            let rhs = self.section(beta, &self.base.p_power(&x)).unwrap();
            if power_witness.is_none() && lhs != rhs {
                power_witness = Some(format!("{:?}", x.coeffs()));
            }
        }
        report.record("section-bracket", bracket_witness);
        report.record("section-p-power", power_witness);
        report
    }
}

/// Whether all of `v` lies in one proper subfield GF(p^d), d | k, d < k.
fn in_proper_subfield(f: &Field, v: &[Elem]) -> bool {
    let k = f.k();
    (1..k).filter(|&d| k.is_multiple_of(d)).any(|d| {
        v.iter().all(|&a| {
            let mut x = a;
            for _ in 0..d {
                x = f.frobenius(x);
            }
            x == a
        })
    })
}

/// All beta over GF(p^k), 1 <= k <= k_max, with beta([l,l]) = 0 and
/// beta(y^[p]) = chi(y)^p + beta(y)^p. Each solution is reported over the
/// smallest GF(p^k) in the range that contains it. An empty answer only
/// means no splitting is defined over these fields.
pub fn find_splittings(e: &CentralExtensionAlgebra, k_max: u32) -> Result<Vec<Functional>> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let l = e.base();
    let p = l.p();
    let n = l.dim();
    // beta vanishes on [l,l]: parameterize the annihilator over GF(p)
    let ann = l.derived_subalgebra().annihilator();
    let r = ann.dim();
    let params = ann.basis_vectors();
    let mut out = Vec::new();
    for k in 1..=k_max {
        let f = Field::new(p, k)?;
        let q = f.order() as u128;
        let total = q.checked_pow(r as u32).unwrap_or(u128::MAX);
        if total > SPLITTING_SEARCH_LIMIT {
            return Err(Error::SizeGuard {
                what: "splitting candidates",
                size: total,
                limit: SPLITTING_SEARCH_LIMIT,
            });
        }
        let chi = e.chi().lift(&f);
        let basis: Vec<LieElement> = (0..n).map(|i| l.basis_element(i, &f)).collect();
        let pmaps: Vec<LieElement> = basis.iter().map(|x| l.p_power(x)).collect();
        let chi_p: Vec<Elem> = basis.iter().map(|x| f.pow(chi.eval(x), p as u64)).collect();
        let mut digits = vec![0 as Elem; r];
        for idx in 0..total {
            let mut t = idx;
            for d in digits.iter_mut() {
                *d = (t % q) as Elem;
                t /= q;
            }
            let mut coeffs = vec![0; n];
            for (d, v) in digits.iter().zip(&params) {
                if *d != 0 {
                    f.axpy(&mut coeffs, *d, v);
                }
            }
            if k > 1 && in_proper_subfield(&f, &coeffs) {
                continue;
            }
            let beta = l.functional(&f, coeffs)?;
            let ok = (0..n).all(|i| {
                beta.eval(&pmaps[i]) == f.add(chi_p[i], f.pow(beta.eval(&basis[i]), p as u64))
            });
            if ok && random_p_condition(e, &beta, 100) {
                out.push(beta);
            }
        }
    }
    Ok(out)
}

fn random_p_condition(e: &CentralExtensionAlgebra, beta: &Functional, samples: usize) -> bool {
    let f = beta.field();
    let l = e.base();
    let p = l.p() as u64;
    let chi = e.chi().lift(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..samples).all(|_| {
        let y = l.random_element(f, &mut rng);
        beta.eval(&l.p_power(&y)) == f.add(f.pow(chi.eval(&y), p), f.pow(beta.eval(&y), p))
    })
}

/// Lie-level Harish-Chandra checks: chi nilpotent, and a -> a + 0c restricted
/// on the centralizer.
pub fn harish_chandra_check(g: &Arc<RestrictedLieAlgebra>, chi: &Functional) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let c = centralizer(g, chi)?;
    let nilpotent = is_nilpotent_functional(g, chi)?;
    report.record(
        "chi-nilpotent",
        (!nilpotent).then(|| {
            let bad = c
                .elements()
                .into_iter()
                .find(|y| chi.eval(y) != 0)
                .map(|y| format!("{:?}", y.coeffs()))
                .unwrap_or_default();
            format!("centralizer element outside ker chi: {bad}")
        }),
    );
    let e = central_extension(g, chi)?;
    let mut witness = None;
    for a in c.elements() {
        let lhs = e.carrier().p_power(&e.embed(&a, 0)?);
        let rhs = e.embed(&g.p_power(&a), 0)?;
        if lhs != rhs {
            witness = Some(format!("{:?}", a.coeffs()));
            break;
        }
    }
    report.record("centralizer-embedding-restricted", witness);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{sl, trace_dual};
    use crate::matrix::Matrix;

    fn sl2_chi(p: u32) -> (Arc<RestrictedLieAlgebra>, Functional) {
        let g = sl(2, p).unwrap();
        let f = g.field().clone();
        let chi = trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap();
        (g, chi)
    }

    #[test]
    fn twisted_p_map_values() {
        let (g, chi) = sl2_chi(3);
        let e = central_extension(&g, &chi).unwrap();
        assert!(e.carrier().verify_restricted().all_passed());
        let x = e.embed(&g.named("E12").unwrap(), 0).unwrap();
        assert!(e.carrier().p_power(&x).is_zero());
        let y = e.embed(&g.named("E21").unwrap(), 0).unwrap();
        let c = e.carrier().basis_element(e.c_index(), g.field());
        assert_eq!(e.carrier().p_power(&y), c);
        assert_eq!(e.carrier().p_power(&c), c);
    }

    #[test]
    fn sl2_has_no_splitting_for_nonzero_chi() {
        let (g, chi) = sl2_chi(3);
        let e = central_extension(&g, &chi).unwrap();
        assert!(find_splittings(&e, 3).unwrap().is_empty());
        let e0 = central_extension(&g, &g.zero_functional()).unwrap();
        let sols = find_splittings(&e0, 3).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].is_zero());
        assert!(e0.verify_section(&sols[0], 50, 1).all_passed());
    }

    #[test]
    fn artin_schreier_splitting() {
        let l = Arc::new(RestrictedLieAlgebra::abelian(5, vec![vec![0]]).unwrap());
        let chi = l.functional(l.field(), vec![1]).unwrap();
        let e = central_extension(&l, &chi).unwrap();
        let sols = find_splittings(&e, 1).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].coeffs(), &[4]);
        assert!(e.verify_section(&sols[0], 100, 2).all_passed());
    }

    #[test]
    fn harish_chandra() {
        let (g, chi) = sl2_chi(5);
        assert!(harish_chandra_check(&g, &chi).unwrap().all_passed());
        let f = g.field().clone();
        let h = trace_dual(&g, &Matrix::from_ints(&f, &[&[1, 0], &[0, -1]])).unwrap();
        let r = harish_chandra_check(&g, &h).unwrap();
        assert!(!r.get("chi-nilpotent").unwrap().passed);
        assert!(harish_chandra_check(&g, &g.zero_functional()).unwrap().all_passed());
    }
}
