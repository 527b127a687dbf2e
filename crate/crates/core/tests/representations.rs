use reslie_core::classical::{borel_and_parabolic, positive_roots, sl, trace_dual};
use reslie_core::liealg::Functional;
use reslie_core::module::FdModule;
use reslie_core::radical::{radical, radical_algebra, radical_brute_force, socle_brute_force};
use reslie_core::repn::{
    baby_verma, compare_deformation, composition_factors, factor_summary, induce, kw_check, levi_dual_weyl,
    simple_quotients, weight_module, Weight,
};
use reslie_core::{Error, Matrix};
use std::sync::Arc;

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

#[test]
fn induced_dimensions_over_standard_parabolics() {
    let g = sl(3, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 3, 0, 2)).unwrap();
    for simple in subsets(2) {
        let p = borel_and_parabolic(&g, &simple).unwrap();
        let sub = Arc::new(p.structure().unwrap());
        let trivial = FdModule::new(
            &sub,
            &sub.zero_functional(),
            &f,
            (0..p.dim()).map(|_| Matrix::zeros(&f, 1, 1)).collect(),
        )
        .unwrap();
        let c = if chi.vanishes_on(p.subspace()) { chi.clone() } else { g.zero_functional() };
        let ind = induce(&g, &p, &c, &trivial).unwrap();
        assert_eq!(ind.dim(), 5usize.pow((8 - p.dim()) as u32), "parabolic {simple:?}");
        let zero = FdModule::zero(&sub, &sub.zero_functional(), &f).unwrap();
        assert_eq!(induce(&g, &p, &c, &zero).unwrap().dim(), 0);
    }
}

#[test]
fn induction_from_borel_is_baby_verma() {
    let g = sl(3, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 3, 0, 2)).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let lambda = Weight::new(vec![1, 1]);
    let k = weight_module(&b, &lambda, &f).unwrap();
    let ind = induce(&g, &b, &chi, &k).unwrap();
    let z = baby_verma(&g, &b, &chi, &lambda).unwrap();
    assert_eq!(ind.action(), z.action());
    assert_eq!(z.dim(), 5usize.pow(positive_roots(3) as u32));
}

#[test]
fn levi_induction_has_expected_dimension() {
    let g = sl(3, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 3, 0, 2)).unwrap();
    let lm = levi_dual_weyl(&g, 1, &Weight::new(vec![1, 1])).unwrap();
    let ind = induce(&g, &lm.parabolic, &chi, &lm.module).unwrap();
    assert_eq!(ind.dim(), 50);
    assert!(ind.check_invariants().all_passed());
    let e = lm.module.generator(lm.module.algebra().index_of("E12").unwrap());
    let fm = lm.module.generator(lm.module.algebra().index_of("E21").unwrap());
    assert_eq!(e, &Matrix::from_ints(&f, &[&[0, 1], &[0, 0]]));
    assert_eq!(fm, &Matrix::from_ints(&f, &[&[0, 0], &[1, 0]]));
}

#[test]
fn induce_rejects_nonvanishing_character() {
    let g = sl(3, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 3, 1, 0)).unwrap();
    let lm = levi_dual_weyl(&g, 1, &Weight::new(vec![1, 0])).unwrap();
    assert!(matches!(
        induce(&g, &lm.parabolic, &chi, &lm.module),
        Err(Error::CharacterNonzeroOnSubalgebra)
    ));
}

#[test]
fn steinberg_and_direct_sums() {
    let g = sl(2, 5).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let zero = g.zero_functional();
    let st = baby_verma(&g, &b, &zero, &Weight::new(vec![4])).unwrap();
    assert_eq!(factor_summary(&st).unwrap().len(), 1);
    assert!(radical(&st).unwrap().is_zero());
    let z1 = baby_verma(&g, &b, &zero, &Weight::new(vec![1])).unwrap();
    let single: Vec<usize> = factor_summary(&z1).unwrap().iter().map(|x| x.0).collect();
    let double: Vec<usize> = factor_summary(&z1.direct_sum(&z1).unwrap()).unwrap().iter().map(|x| x.0).collect();
    let mut expect: Vec<usize> = single.iter().chain(&single).copied().collect();
    expect.sort();
    assert_eq!(double, expect);
}

#[test]
fn restricted_baby_verma_head_and_socle() {
    let g = sl(2, 3).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let z = baby_verma(&g, &b, &g.zero_functional(), &Weight::new(vec![0])).unwrap();
    let factors = composition_factors(&z).unwrap();
    let mut dims: Vec<usize> = factors.iter().map(|(s, _)| s.module.dim()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
    let sq = simple_quotients(&z).unwrap();
    assert_eq!(sq.quotients.len(), 1);
    assert_eq!(sq.quotients[0].module.dim(), 1);
    assert_eq!(radical_algebra(&z).unwrap().dim(), 2);
    assert_eq!(socle_brute_force(&z).unwrap().dim(), 2);
}

#[test]
fn deformation_examples() {
    let g = sl(2, 3).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let r = compare_deformation(&g, &b, &Weight::new(vec![1]), &chi).unwrap();
    assert_eq!(r.chi_factor_dims, vec![3]);
    assert_eq!(r.restricted_factor_dims, vec![1, 2]);
    assert!(r.totals_agree && !r.modules_coincide);
    let st = compare_deformation(&g, &b, &Weight::new(vec![2]), &chi).unwrap();
    assert_eq!((st.chi_factor_dims, st.restricted_factor_dims), (vec![3], vec![3]));
}

#[test]
fn kac_weisfeiler_examples() {
    let g = sl(2, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let z = baby_verma(&g, &b, &chi, &Weight::new(vec![0])).unwrap();
    let r = kw_check(&z, &chi, &g).unwrap();
    assert_eq!((r.orbit_dim, r.divisor, r.divisible), (2, 5, true));
    let zero: Functional = g.zero_functional();
    let z0 = baby_verma(&g, &b, &zero, &Weight::new(vec![0])).unwrap();
    let r0 = kw_check(&z0, &zero, &g).unwrap();
    assert_eq!((r0.divisor, r0.divisible), (1, true));
    let semisimple = trace_dual(&g, &Matrix::from_ints(&f, &[&[1, 0], &[0, -1]])).unwrap();
    assert!(kw_check(&z0, &semisimple, &g).is_err());
}

#[test]
fn brute_force_oracle_agrees_on_duals() {
    let g = sl(2, 3).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    for l in 0..3 {
        let z = baby_verma(&g, &b, &g.zero_functional(), &Weight::new(vec![l])).unwrap();
        let d = z.dual();
        assert_eq!(radical_algebra(&d).unwrap(), radical_brute_force(&d).unwrap());
    }
}
