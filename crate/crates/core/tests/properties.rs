use std::sync::Arc;

use proptest::prelude::*;

use reslie_core::classical::{borel_and_parabolic, gl, sl, to_matrix, trace_dual};
use reslie_core::env::ReducedEnvAlgebra;
use reslie_core::hopf::HopfAlgebra;
use reslie_core::liealg::{LieElement, RestrictedLieAlgebra};
use reslie_core::meataxe::spin;
use reslie_core::repn::{baby_verma, Weight};
use reslie_core::{Field, Matrix, Subspace};

fn element(g: &RestrictedLieAlgebra, raw: &[u32]) -> LieElement {
    let f = g.field();
    let p = f.p();
    g.element(f, raw.iter().take(g.dim()).map(|x| x % p).collect()).unwrap()
}

fn algebra(which: u8, p: u32) -> Arc<RestrictedLieAlgebra> {
    match which % 3 {
        0 => sl(2, p).unwrap(),
        1 => sl(3, p).unwrap(),
        _ => gl(2, p).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverse_and_distributivity(k in 1u32..=3, a in 0u32..343, b in 0u32..343, c in 0u32..343) {
        let f = Field::new(7, k).unwrap();
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn jacobson_sum_formula(which in 0u8..3, pi in 0usize..3, x in prop::collection::vec(0u32..7, 9), y in prop::collection::vec(0u32..7, 9)) {
        let p = [3, 5, 7][pi];
        let g = algebra(which, p);
        let (x, y) = (element(&g, &x), element(&g, &y));
        let mut rhs = g.p_power(&x).add(&g.p_power(&y));
        for s in g.s_coefficients(&x, &y).unwrap() {
            rhs = rhs.add(&s);
        }
        prop_assert_eq!(g.p_power(&x.add(&y)), rhs);
    }

    #[test]
    fn p_map_is_semilinear_matrix_power(which in 0u8..3, a in 1u32..5, x in prop::collection::vec(0u32..5, 9)) {
        let g = algebra(which, 5);
        let f = g.field().clone();
        let x = element(&g, &x);
        prop_assert_eq!(g.p_power(&x.scale(a)), g.p_power(&x).scale(f.pow(a, 5)));
        prop_assert_eq!(to_matrix(&g, &g.p_power(&x)).unwrap(), to_matrix(&g, &x).unwrap().pow(5));
        let ad = g.ad_matrix(&g.p_power(&x));
        prop_assert_eq!(ad, g.ad_matrix(&x).pow(5));
    }

    #[test]
    fn bracket_antisymmetric(which in 0u8..3, x in prop::collection::vec(0u32..3, 9), y in prop::collection::vec(0u32..3, 9)) {
        let g = algebra(which, 3);
        let f = g.field().clone();
        let (x, y) = (element(&g, &x), element(&g, &y));
        let xy = g.bracket(&x, &y).unwrap();
        prop_assert_eq!(xy.add(&g.bracket(&y, &x).unwrap()), g.zero(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_enveloping_multiplication_is_associative(seed in any::<u64>(), regular in any::<bool>()) {
        use rand::SeedableRng;
        let g = sl(2, 3).unwrap();
        let f = g.field().clone();
        let chi = if regular { trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap() } else { g.zero_functional() };
        let u = ReducedEnvAlgebra::new(&g, &chi, &f).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = u.random_element(&mut rng, 3, 4);
        let b = u.random_element(&mut rng, 3, 4);
        let c = u.random_element(&mut rng, 3, 4);
        let left = u.mul(&u.mul(&a, &b).unwrap(), &c).unwrap();
        let right = u.mul(&a, &u.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        // the reduced relation on e
        let e = u.generator(2);
        let ep = u.pow(&e, 3).unwrap();
        prop_assert_eq!(ep, u.scalar(f.pow(chi.coeffs()[2], 3)));
    }

    #[test]
    fn coproduct_is_coassociative_and_counital(seed in any::<u64>()) {
        use rand::SeedableRng;
        let g = sl(2, 3).unwrap();
        let h = HopfAlgebra::new(ReducedEnvAlgebra::restricted(&g).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = h.base().random_element(&mut rng, 4, 5);
        let (l, r) = h.coassociativity_sides(&u);
        prop_assert_eq!(l, r);
        let d = h.coproduct(&u);
        prop_assert_eq!(h.counit_left(&d), u.clone());
        prop_assert_eq!(h.counit_right(&d), u);
    }

    #[test]
    fn spin_is_monotone_and_idempotent(l in 0i64..5, v in prop::collection::vec(0u32..5, 5), w in prop::collection::vec(0u32..5, 5)) {
        let g = sl(2, 5).unwrap();
        let b = borel_and_parabolic(&g, &[]).unwrap();
        let z = baby_verma(&g, &b, &g.zero_functional(), &Weight::new(vec![l])).unwrap();
        let s1 = spin(&z, std::slice::from_ref(&v));
        let s2 = spin(&z, &[v, w]);
        prop_assert!(s2.contains(&s1).unwrap());
        prop_assert_eq!(spin(&z, &s1.basis_vectors()), s1.clone());
        prop_assert!(z.is_submodule(&s1));
        let q = z.quotient(&s1).unwrap();
        prop_assert_eq!(q.dim() + s1.dim(), z.dim());
        prop_assert!(q.check_invariants().all_passed());
        prop_assert!(z.submodule(&s1).unwrap().check_invariants().all_passed());
    }
}

#[test]
fn double_dual_is_identity() {
    let g = sl(2, 5).unwrap();
    let f = g.field().clone();
    let chi = trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)).unwrap();
    let b = borel_and_parabolic(&g, &[]).unwrap();
    let z = baby_verma(&g, &b, &chi, &Weight::new(vec![2])).unwrap();
    let dd = z.dual().dual();
    assert_eq!(dd.action(), z.action());
    assert!(z.dual().check_invariants().all_passed());
    assert_eq!(spin(&z, &[vec![0; 5]]), Subspace::zero(&f, 5));
}
