//! Block decomposition of u(l_chi) by the Nielsen idempotents of c, and the
//! canonical central element c = (x^p - x^[p]) / chi(x)^p.

use serde::{Deserialize, Serialize};

use crate::env::{EnvElement, ReducedEnvAlgebra};
use crate::error::{Error, Result};
use crate::extension::CentralExtensionAlgebra;
use crate::field::Elem;
use crate::liealg::LieElement;
use crate::nielsen::nielsen;
use crate::report::CheckReport;
use crate::sparse::SparseEchelon;

/// Largest p^{N+1} for which blocks are materialized and the isomorphisms checked.
pub const BLOCK_GUARD: u64 = 3000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub eta: u32,
    /// Dimension of u(l_chi) Ni_eta, when materialized.
    pub dim: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub total_dim: u64,
    pub blocks: Vec<Block>,
    pub full_verification: bool,
    pub checks: CheckReport,
}

/// u(l_chi) over GF(p).
pub fn extension_env(e: &CentralExtensionAlgebra) -> Result<ReducedEnvAlgebra> {
    ReducedEnvAlgebra::restricted(e.carrier())
}

/// Ni_eta(c) in u(l_chi).
pub fn nielsen_in_env(e: &CentralExtensionAlgebra, env: &ReducedEnvAlgebra, eta: Elem) -> Result<EnvElement> {
    let ni = nielsen(eta, env.p() as u32)?;
    let c = env.generator(e.c_index());
    let mut acc = env.zero();
    let mut power = env.one();
    for &coef in &ni.coeffs {
        acc = env.add(&acc, &env.scale(&power, coef));
        power = env.mul(&power, &c)?;
    }
    Ok(acc)
}

/// u(l_chi) = sum over eta of U_{eta chi}(l), realized by x -> x Ni_eta(c).
pub fn block_decompose(e: &CentralExtensionAlgebra) -> Result<BlockDecomposition> {
    let env = extension_env(e)?;
    let l = e.base();
    let p = env.p();
    let f = env.field().clone();
    let n = l.dim();
    let total_dim = env.dim();
    let full = total_dim <= BLOCK_GUARD;
    let mut checks = CheckReport::new();
    let nis: Vec<EnvElement> = (0..p as u32).map(|eta| nielsen_in_env(e, &env, eta)).collect::<Result<_>>()?;

    let mut sum = env.zero();
    for ni in &nis {
        sum = env.add(&sum, ni);
    }
    checks.record("idempotents-sum-to-one", (sum != env.one()).then(|| env.format(&sum)));

    let mut witness = None;
    'pairs: for (a, x) in nis.iter().enumerate() {
        for (b, y) in nis.iter().enumerate() {
            let prod = env.mul(x, y)?;
            let expect = if a == b { x.clone() } else { env.zero() };
            if prod != expect {
                witness = Some(format!("eta = {a}, {b}"));
                break 'pairs;
            }
        }
    }
    checks.record("orthogonal-idempotents", witness);

    let mut witness = None;
    'central: for (eta, ni) in nis.iter().enumerate() {
        for j in 0..=n {
            let x = env.generator(j);
            if !env.commutator(&x, ni)?.is_zero() {
                witness = Some(format!("eta = {eta}, generator {}", e.carrier().basis_names()[j]));
                break 'central;
            }
        }
    }
    checks.record("idempotents-central", witness);

    // x^p Ni - x^[p] Ni = (eta chi(x))^p Ni for x in a basis of l
    let mut witness = None;
    'rel: for (eta, ni) in nis.iter().enumerate() {
        for i in 0..n {
            let x = env.generator(i);
            let xp = env.pow(&x, p)?;
            let bracket_p = e.embed(&l.p_power(&l.basis_element(i, &f)), 0)?;
            let lhs = env.mul(&env.sub(&xp, &env.from_lie(&bracket_p)?), ni)?;
            let scalar = f.pow(f.mul(eta as Elem, e.chi().coeffs()[i]), p);
            if lhs != env.scale(ni, scalar) {
                witness = Some(format!("eta = {eta}, x = {}", l.basis_names()[i]));
                break 'rel;
            }
        }
    }
    checks.record("block-relations", witness);

    let mut blocks = Vec::new();
    if full {
        let base_dim = env.p().pow(n as u32);
        let mut iso_witness = None;
        for (eta, ni) in nis.iter().enumerate() {
            let mut ech = SparseEchelon::new(&f);
            // monomials of l sit below p^N in the carrier encoding
            let images: Vec<EnvElement> = (0..base_dim)
                .map(|m| env.mul(&env.monomial(m), ni))
                .collect::<Result<_>>()?;
            for img in &images {
                ech.push(img.terms().clone());
            }
            blocks.push(Block {
                eta: eta as u32,
                dim: Some(ech.rank() as u64),
            });
            if iso_witness.is_none() {
                iso_witness = check_block_isomorphism(e, &env, eta as Elem, &images)?;
            }
        }
        checks.record("block-isomorphisms", iso_witness);
        let dims: u64 = blocks.iter().map(|b| b.dim.unwrap()).sum();
        checks.record(
            "block-dimensions",
            (dims != total_dim || blocks.iter().any(|b| b.dim != Some(base_dim)))
                .then(|| format!("{:?}", blocks.iter().map(|b| b.dim).collect::<Vec<_>>())),
        );
    } else {
        blocks.extend((0..p as u32).map(|eta| Block { eta, dim: None }));
    }
    Ok(BlockDecomposition {
        total_dim,
        blocks,
        full_verification: full,
        checks,
    })
}

/// phi: U_{eta chi}(l) -> u(l_chi) Ni_eta, x^a -> x^a Ni_eta, is multiplicative:
/// phi(m x_j) = phi(m) phi(x_j) for every PBW monomial m and generator x_j.
fn check_block_isomorphism(
    e: &CentralExtensionAlgebra,
    env: &ReducedEnvAlgebra,
    eta: Elem,
    images: &[EnvElement],
) -> Result<Option<String>> {
    let l = e.base();
    let f = env.field();
    let chi = e.chi().scale(eta);
    let u = ReducedEnvAlgebra::new(l, &chi, f)?;
    let phi = |x: &EnvElement| {
        let mut acc = env.zero();
        for (&m, &c) in x.terms() {
            acc = env.add(&acc, &env.scale(&images[m as usize], c));
        }
        acc
    };
    for m in 0..u.dim() {
        for j in 0..l.dim() {
            let lhs = phi(&u.mul_generator(&u.monomial(m), j));
            let rhs = env.mul(&images[m as usize], &images[u.p().pow(j as u32) as usize])?;
            if lhs != rhs {
                let mono = u.format(&u.monomial(m));
                return Ok(Some(format!("eta = {eta}, monomial {mono}, generator {}", l.basis_names()[j])));
            }
        }
    }
    Ok(None)
}

/// (x^p - x^[p]) / chi(x)^p in u(l_chi), over the field of x.
pub fn central_c(e: &CentralExtensionAlgebra, x: &LieElement) -> Result<EnvElement> {
    let f = x.field().clone();
    let carrier = e.carrier();
    let env = ReducedEnvAlgebra::new(carrier, &carrier.zero_functional(), &f)?;
    central_c_in(e, &env, x)
}

/// As [`central_c`], in a given copy of u(l_chi).
pub fn central_c_in(e: &CentralExtensionAlgebra, env: &ReducedEnvAlgebra, x: &LieElement) -> Result<EnvElement> {
    let l = e.base();
    let f = env.field();
    let chi_x = e.chi().lift(f).eval(x);
    if chi_x == 0 {
        return Err(Error::InvalidInput("central_c needs chi(x) != 0".into()));
    }
    let x = x.lift(f);
    let xe = env.from_lie(&e.embed(&x, 0)?)?;
    let xp = env.pow(&xe, env.p())?;
    let bp = env.from_lie(&e.embed(&l.p_power(&x), 0)?)?;
    let inv = f.inv(f.pow(chi_x, env.p())).unwrap();
    Ok(env.scale(&env.sub(&xp, &bp), inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{sl, trace_dual};
    use crate::extension::central_extension;
    use crate::matrix::Matrix;

    #[test]
    fn c_from_f() {
        let g = sl(2, 3).unwrap();
        let fld = g.field().clone();
        let chi = trace_dual(&g, &Matrix::unit(&fld, 2, 0, 1)).unwrap();
        let e = central_extension(&g, &chi).unwrap();
        let env = extension_env(&e).unwrap();
        let c = env.generator(e.c_index());
        let f = g.named("E21").unwrap();
        assert_eq!(central_c_in(&e, &env, &f).unwrap(), c);
        assert_eq!(central_c_in(&e, &env, &f.scale(2)).unwrap(), c);
        let ef = f.add(&g.named("E12").unwrap());
        assert_eq!(central_c_in(&e, &env, &ef).unwrap(), c);
        assert!(central_c_in(&e, &env, &g.named("E12").unwrap()).is_err());
    }
}
