//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reslie_core::blocks::{block_decompose, central_c_in, extension_env};
use reslie_core::classical::{borel_and_parabolic, gl, positive_roots, sl, to_matrix, trace_dual};
use reslie_core::env::ReducedEnvAlgebra;
use reslie_core::extension::{central_extension, find_splittings};
use reslie_core::geom::{
    borel_from_flag, in_springer_fiber, jordan_nilpotent, parabolic_nice, parabolic_tangent, partitions,
    sample_fiber, tangency_splitting_check, test3_at, truncated_exp,
};
use reslie_core::hopf::HopfAlgebra;
use reslie_core::liealg::{is_nilpotent_functional, Functional, RestrictedLieAlgebra};
use reslie_core::module::FdModule;
use reslie_core::nielsen::{nielsen_system, mul_mod_cp};
use reslie_core::radical::{radical_algebra, radical_brute_force, BRUTE_FORCE_MAX_POINTS};
use reslie_core::repn::{
    baby_verma, compare_deformation, factor_summary, kw_check, levi_dual_weyl, simple_quotients, Weight,
};
use reslie_core::{Field, Matrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

/// Every n x n nilpotent matrix over GF(p).
/// Nilpotent iff the characteristic polynomial is x^n, i.e. every sum of
/// principal k-minors vanishes. Entries are residues mod p, n <= 3.
fn charpoly_nilpotent(a: &[i64], n: usize, p: i64) -> bool {
    let at = |i: usize, j: usize| a[i * n + j];
    let minor2 = |i: usize, j: usize| at(i, i) * at(j, j) - at(i, j) * at(j, i);
    let e2: i64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| minor2(i, j)).sum();
    let e3 = match n {
        3 => {
            at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
                + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0))
        }
        _ => 0,
    };
    e2.rem_euclid(p) == 0 && e3.rem_euclid(p) == 0
}

fn all_nilpotent(f: &Field, n: usize) -> Vec<Matrix> {
    assert!(f.k() == 1 && n <= 3);
    let q = f.order() as u64;
    let total = q.pow((n * n) as u32);
    let mut data = vec![0i64; n * n];
    (0..total)
        .filter_map(|mut idx| {
            for d in data.iter_mut() {
                *d = (idx % q) as i64;
                idx /= q;
            }
            let trace: i64 = (0..n).map(|i| data[i * n + i]).sum();
            if trace % q as i64 != 0 || !charpoly_nilpotent(&data, n, q as i64) {
                return None;
            }
            let m = Matrix::from_vec(f, n, n, data.iter().map(|&x| x as u32).collect());
            debug_assert!(m.pow(n as u64).is_zero());
            Some(m)
        })
        .collect()
}

/// y -> tr(e y), also when p | n (where `trace_dual` refuses the degenerate form).
fn trace_functional(g: &RestrictedLieAlgebra, e: &Matrix) -> Result<Functional, String> {
    let mats = &g.classical().ok_or("not a matrix algebra")?.matrices;
    ok(g.functional(e.field(), mats.iter().map(|m| e.mul(m).trace()).collect()), "functional")
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut algebras = 0;
    for p in [3, 5, 7] {
        for g in [ok(sl(2, p), "sl2")?, ok(sl(3, p), "sl3")?, ok(gl(2, p), "gl2")?] {
            let report = g.verify_restricted();
            ensure(report.all_passed(), || format!("{} p={p}: {:?}", g.name(), report.failures().next()))?;
            let f = g.field().clone();
            for _ in 0..200 {
                let x = g.random_element(&f, &mut rng);
                let y = g.random_element(&f, &mut rng);
                let mut rhs = g.p_power(&x).add(&g.p_power(&y));
                for s in ok(g.s_coefficients(&x, &y), "s_n")? {
                    rhs = rhs.add(&s);
                }
                let lhs = g.p_power(&x.add(&y));
                ensure(lhs == rhs, || format!("{} p={p}: Jacobson sum fails", g.name()))?;
                let mx = ok(to_matrix(&g, &x), "matrix")?;
                ensure(ok(to_matrix(&g, &g.p_power(&x)), "matrix")? == mx.pow(p as u64), || {
                    format!("{} p={p}: p-map differs from matrix power", g.name())
                })?;
            }
            algebras += 1;
        }
    }
    Ok(format!("{algebras} algebras, 200 random pairs each"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for (n, p) in [(2, 3), (2, 5), (3, 3), (3, 5)] {
        let g = ok(sl(n, p), "sl")?;
        let f = g.field().clone();
        let chis: Vec<Functional> = all_nilpotent(&f, n)
            .iter()
            .map(|e| trace_functional(&g, e))
            .collect::<Result<_, _>>()?;
        let failures = std::thread::scope(|s| {
            let handles: Vec<_> = chis
                .chunks(chis.len().div_ceil(8))
                .map(|chunk| {
                    let g = &g;
                    s.spawn(move || {
                        chunk.iter().find_map(|chi| {
                            let e = match central_extension(g, chi) {
                                Ok(e) => e,
                                Err(err) => return Some(format!("{:?}: {err}", chi.coeffs())),
                            };
                            let report = e.carrier().verify_restricted();
                            let c = e.carrier().basis_element(e.c_index(), e.carrier().field());
                            let cp = e.carrier().p_power(&c);
                            (!report.all_passed() || cp != c).then(|| format!("{:?}", chi.coeffs()))
                        })
                    })
                })
                .collect();
            handles.into_iter().filter_map(|h| h.join().unwrap()).collect::<Vec<_>>()
        });
        ensure(failures.is_empty(), || format!("sl{n} p={p}: chi = {}", failures[0]))?;
        count += chis.len();
    }
    Ok(format!("{count} nilpotent trace-dual characters over sl2, sl3 at p = 3, 5"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (n, p) in [(2, 3), (2, 5), (3, 3), (3, 5)] {
        let g = ok(sl(n, p), "sl")?;
        ensure(g.is_perfect(), || format!("sl{n} p={p} not perfect"))?;
        let f = g.field().clone();
        for blocks in partitions(n) {
            let chi = trace_functional(&g, &jordan_nilpotent(&f, &blocks))?;
            let e = ok(central_extension(&g, &chi), "extension")?;
            let found = ok(find_splittings(&e, 3), "find_splittings")?;
            if chi.is_zero() {
                ensure(found.len() == 1 && found[0].is_zero(), || {
                    format!("sl{n} p={p} chi=0: {} splittings", found.len())
                })?;
            } else {
                ensure(found.is_empty(), || format!("sl{n} p={p} {blocks:?}: splitting found"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} characters, k_max = 3"))
}

fn criterion_4() -> Outcome {
    for p in [3u32, 5, 7] {
        let sys = ok(nielsen_system(p), "nielsen")?;
        let mut sum = vec![0; p as usize];
        for (a, x) in sys.iter().enumerate() {
            for (b, y) in sys.iter().enumerate() {
                let prod = mul_mod_cp(p, &x.coeffs, &y.coeffs);
                let expect = if a == b { x.coeffs.clone() } else { vec![0; p as usize] };
                ensure(prod == expect, || format!("p={p}: Ni_{a} Ni_{b} wrong"))?;
            }
            for (s, c) in sum.iter_mut().zip(&x.coeffs) {
                *s = (*s + c) % p;
            }
        }
        let mut one = vec![0; p as usize];
        one[0] = 1;
        ensure(sum == one, || format!("p={p}: idempotents do not sum to 1"))?;
    }
    let g = ok(sl(2, 3), "sl2")?;
    let f = g.field().clone();
    let chi = ok(trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)), "chi")?;
    let e = ok(central_extension(&g, &chi), "extension")?;
    let d = ok(block_decompose(&e), "blocks")?;
    ensure(d.checks.all_passed(), || format!("{:?}", d.checks.failures().next()))?;
    let dims: Vec<u64> = d.blocks.iter().map(|b| b.dim.unwrap_or(0)).collect();
    ensure(d.total_dim == 81 && dims == vec![27, 27, 27], || format!("{} = {dims:?}", d.total_dim))?;
    Ok("Nielsen systems p = 3, 5, 7; sl2 p=3 blocks 81 = 27 + 27 + 27".into())
}

fn criterion_5() -> Outcome {
    let mut dims = Vec::new();
    for p in [3, 5] {
        let g = ok(sl(2, p), "sl2")?;
        let h = ok(HopfAlgebra::new(ok(ReducedEnvAlgebra::restricted(&g), "env")?), "hopf")?;
        let d = ok(h.primitives(), "primitives")?.dim();
        ensure(d == 3, || format!("u(sl2) p={p}: dim P = {d}"))?;
        dims.push(d);
    }
    let g = ok(sl(2, 3), "sl2")?;
    let f = g.field().clone();
    let chi = ok(trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)), "chi")?;
    let e = ok(central_extension(&g, &chi), "extension")?;
    let h = ok(HopfAlgebra::new(ok(extension_env(&e), "env")?), "hopf")?;
    let d = ok(h.primitives(), "primitives")?.dim();
    ensure(d == 4, || format!("u(sl2_chi): dim P = {d}"))?;
    dims.push(d);
    Ok(format!("dims {dims:?}"))
}

fn criterion_6() -> Outcome {
    let g = ok(sl(2, 3), "sl2")?;
    let f = g.field().clone();
    let chi = ok(trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)), "chi")?;
    let e = ok(central_extension(&g, &chi), "extension")?;
    let env = ok(extension_env(&e), "env")?;
    let c = env.generator(e.c_index());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut tried = 0;
    while tried < 10 {
        let x = g.random_element(&f, &mut rng);
        if chi.eval(&x) == 0 {
            continue;
        }
        let cx = ok(central_c_in(&e, &env, &x), "central_c")?;
        ensure(cx == c, || format!("central_c differs at {:?}", x.coeffs()))?;
        for j in 0..=g.dim() {
            ensure(ok(env.commutator(&cx, &env.generator(j)), "commutator")?.is_zero(), || {
                format!("c does not commute with generator {j}")
            })?;
        }
        tried += 1;
    }
    Ok("10 random x agree and commute with all generators".into())
}

struct Suite7 {
    /// (module, chi, algebra) for the KW audit
    audited: Vec<(FdModule, Functional, Arc<RestrictedLieAlgebra>)>,
}

fn regular_sl2(p: u32) -> Result<(Arc<RestrictedLieAlgebra>, Functional), String> {
    let g = ok(sl(2, p), "sl2")?;
    let f = g.field().clone();
    let chi = ok(trace_dual(&g, &Matrix::unit(&f, 2, 0, 1)), "chi")?;
    Ok((g, chi))
}

fn subregular_sl3() -> Result<(Arc<RestrictedLieAlgebra>, Functional), String> {
    let g = ok(sl(3, 5), "sl3")?;
    let f = g.field().clone();
    let chi = ok(trace_dual(&g, &Matrix::unit(&f, 3, 0, 2)), "chi")?;
    Ok((g, chi))
}

fn run_suite7() -> Result<(Suite7, String), String> {
    let mut audited = Vec::new();
    let mut built = 0;
    for p in [3, 5] {
        let (g, chi) = regular_sl2(p)?;
        let b = ok(borel_and_parabolic(&g, &[]), "borel")?;
        for c in [g.zero_functional(), chi.clone()] {
            for l in 0..p as i64 {
                let z = ok(baby_verma(&g, &b, &c, &Weight::new(vec![l])), "baby verma")?;
                ensure(z.dim() == p as usize, || format!("sl2 p={p}: dim {}", z.dim()))?;
                ensure(z.check_invariants().all_passed(), || "p-character equation fails".into())?;
                if p == 5 && !c.is_zero() {
                    ensure(ok(radical_algebra(&z), "radical")?.is_zero(), || format!("rad Z({l}) != 0"))?;
                    ensure(ok(radical_brute_force(&z), "oracle")?.is_zero(), || format!("oracle rad Z({l}) != 0"))?;
                }
                audited.push((z, c.clone(), g.clone()));
                built += 1;
            }
        }
    }
    let (g, chi) = subregular_sl3()?;
    let b = ok(borel_and_parabolic(&g, &[]), "borel")?;
    let mut quotient_counts = Vec::new();
    for lambda in [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [0, 2]] {
        let z = ok(baby_verma(&g, &b, &chi, &Weight::new(lambda.to_vec())), "baby verma")?;
        ensure(z.dim() == 5usize.pow(positive_roots(3) as u32), || format!("sl3 dim {}", z.dim()))?;
        ensure(z.check_invariants().all_passed(), || "p-character equation fails".into())?;
        let sq = ok(simple_quotients(&z), "simple quotients")?;
        ensure(sq.distinct() >= 2, || format!("lambda {lambda:?}: {} simple quotient classes", sq.distinct()))?;
        quotient_counts.push(sq.distinct());
        audited.push((z, chi.clone(), g.clone()));
        built += 1;
    }
    Ok((
        Suite7 { audited },
        format!("{built} baby Vermas; sl3 subregular simple-quotient classes {quotient_counts:?}"),
    ))
}

fn criterion_7_and_8() -> (Outcome, Outcome) {
    let (suite, detail) = match run_suite7() {
        Ok(x) => x,
        Err(e) => return (Err(e), Err("criterion 7 did not complete".into())),
    };
    let eight = (|| {
        let mut audited = 0;
        for (m, chi, g) in &suite.audited {
            let r = ok(kw_check(m, chi, g), "kw_check")?;
            ensure(r.divisible, || format!("{:?} not divisible by {}", r.factor_dims, r.divisor))?;
            let total: usize = r.factor_dims.iter().sum();
            ensure(total == m.dim(), || "factor dims do not sum to dim".into())?;
            audited += 1;
        }
        Ok(format!("{audited} modules audited"))
    })();
    (Ok(detail), eight)
}

fn criterion_9() -> Outcome {
    let mut cases = 0;
    for p in [3, 5] {
        let (g, chi) = regular_sl2(p)?;
        let b = ok(borel_and_parabolic(&g, &[]), "borel")?;
        for l in 0..p as i64 {
            let r = ok(compare_deformation(&g, &b, &Weight::new(vec![l]), &chi), "deformation")?;
            ensure(r.totals_agree && r.dim == p as usize, || format!("p={p} lambda={l}: {r:?}"))?;
            let r0 = ok(compare_deformation(&g, &b, &Weight::new(vec![l]), &g.zero_functional()), "deformation")?;
            ensure(r0.modules_coincide, || "chi = 0 modules differ".into())?;
            cases += 1;
        }
    }
    Ok(format!("{cases} weights"))
}

fn criterion_10() -> Outcome {
    let (g, chi) = subregular_sl3()?;
    let f = g.field().clone();
    let b0 = ok(borel_from_flag(&g, &Matrix::identity(&f, 3)), "borel")?;
    for s in [1, 2] {
        let p = ok(borel_and_parabolic(&g, &[s]), "parabolic")?;
        ensure(ok(parabolic_nice(&g, &p, &chi), "nice")?, || format!("Y_{s} not certified"))?;
        // orbit points exp(t f_s) . b with the parabolic tangent directions
        let fs = Matrix::unit(&f, 3, s, s - 1);
        for t in 0..5 {
            let m = truncated_exp(&fs.scale(t));
            let b = ok(borel_from_flag(&g, &m), "orbit point")?;
            let tangent = ok(parabolic_tangent(&b, &p), "tangent")?;
            ensure(ok(tangency_splitting_check(&b, &chi, &tangent), "tangency")?, || {
                format!("Y_{s}: tangency fails at t = {t}")
            })?;
        }
    }
    ensure(ok(test3_at(&b0, &chi), "test3")?.is_some(), || "no witness at the standard Borel".into())?;
    let mut points = 0;
    let mut types = 0;
    for n in 2..=4 {
        let g = ok(sl(n, 5), "sl")?;
        let f = g.field().clone();
        for blocks in partitions(n) {
            let chi = ok(trace_dual(&g, &jordan_nilpotent(&f, &blocks)), "chi")?;
            ensure(ok(is_nilpotent_functional(&g, &chi), "nilpotent")?, || "chi not nilpotent".into())?;
            let sample = ok(sample_fiber(&g, &chi, 100, 2, 10), "sample")?;
            for b in &sample.points {
                ensure(ok(in_springer_fiber(b, &chi), "fiber")?, || format!("sl{n} {blocks:?}: point off fiber"))?;
                ensure(ok(test3_at(b, &chi), "test3")?.is_some(), || {
                    format!("sl{n} {blocks:?}: no test3 witness at {:?}", b.flag().row_vectors())
                })?;
            }
            points += sample.points.len();
            types += 1;
        }
    }
    Ok(format!(
        "Y_1, Y_2 certified; {types} Jordan types, {points} distinct fiber points over GF(25) (no counterexample among samples)"
    ))
}

fn criterion_11() -> Outcome {
    let mut modules: Vec<FdModule> = Vec::new();
    for p in [3, 5] {
        let (g, chi) = regular_sl2(p)?;
        let b = ok(borel_and_parabolic(&g, &[]), "borel")?;
        let mut zs = Vec::new();
        for c in [g.zero_functional(), chi.clone()] {
            for l in 0..p as i64 {
                let z = ok(baby_verma(&g, &b, &c, &Weight::new(vec![l])), "baby verma")?;
                modules.push(z.dual());
                zs.push(z.clone());
                modules.push(z);
            }
        }
        // restricted sums up to the size the oracle can exhaust
        let restricted = &zs[..p as usize];
        for a in restricted {
            for c in restricted {
                let s = ok(a.direct_sum(c), "sum")?;
                let points = ((p as u128).pow(s.dim() as u32) - 1) / (p as u128 - 1);
                if points <= BRUTE_FORCE_MAX_POINTS {
                    modules.push(s);
                }
            }
        }
    }
    // gl2 restricted baby Vermas and sl3 Levi modules
    let g = ok(gl(2, 3), "gl2")?;
    let b = ok(reslie_core::liealg::SubalgebraDatum::new(&g, upper_gl2(&g)), "borel")?;
    for l in [[0, 0], [1, 0], [2, 1], [1, 2]] {
        modules.push(ok(baby_verma(&g, &b, &g.zero_functional(), &Weight::new(l.to_vec())), "gl2 verma")?);
    }
    let g3 = ok(sl(3, 5), "sl3")?;
    for lambda in [[0, 0], [1, 1], [3, 0]] {
        modules.push(ok(levi_dual_weyl(&g3, 1, &Weight::new(lambda.to_vec())), "levi")?.module);
    }
    // a module over GF(9)
    let (g, _) = regular_sl2(3)?;
    let f9 = ok(Field::new(3, 2), "GF(9)")?;
    let b = ok(borel_and_parabolic(&g, &[]), "borel")?;
    let z = ok(baby_verma(&g, &b, &g.zero_functional(), &Weight::new(vec![0])), "verma")?;
    modules.push(z.lift(&f9));

    let mut checked = 0;
    for m in &modules {
        if m.dim() > 12 {
            continue;
        }
        let a = ok(radical_algebra(m), "algebra radical")?;
        let o = ok(radical_brute_force(m), "oracle")?;
        ensure(a == o, || format!("dim {} module: {} vs {}", m.dim(), a.dim(), o.dim()))?;
        let dims: usize = ok(factor_summary(m), "factors")?.iter().map(|x| x.0).sum();
        ensure(dims == m.dim(), || "composition factors do not sum to dim".into())?;
        checked += 1;
    }
    Ok(format!("{checked} modules of dim <= 12"))
}

fn upper_gl2(g: &RestrictedLieAlgebra) -> reslie_core::Subspace {
    let f = g.field();
    let vecs: Vec<Vec<u32>> = ["E11", "E22", "E12"]
        .iter()
        .map(|n| {
            let mut v = vec![0; g.dim()];
            v[g.index_of(n).unwrap()] = 1;
            v
        })
        .collect();
    reslie_core::Subspace::from_vectors(f, g.dim(), &vecs)
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(e) => Err(format!(
            "panic: {}",
            e.downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default()
        )),
    }
}

fn main() {
    let names = [
        "restricted axioms",
        "twisted extension",
        "splitting dichotomy",
        "Nielsen idempotents and blocks",
        "primitive elements",
        "central element c",
        "baby Verma modules",
        "Kac-Weisfeiler divisibility",
        "deformation to the restricted structure",
        "geometry",
        "radical oracle agreement",
    ];
    let mut results: Vec<(Outcome, Option<std::time::Duration>)> = Vec::new();
    let singles: [fn() -> Outcome; 6] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6];
    for c in singles {
        let t = Instant::now();
        results.push((guarded(c), Some(t.elapsed())));
    }
    let t = Instant::now();
    let (seven, eight) = match catch_unwind(criterion_7_and_8) {
        Ok(x) => x,
        Err(_) => (Err("panic".into()), Err("panic".into())),
    };
    let el = t.elapsed();
    results.push((seven, Some(el)));
    results.push((eight, None));
    for c in [criterion_9 as fn() -> Outcome, criterion_10, criterion_11] {
        let t = Instant::now();
        results.push((guarded(c), Some(t.elapsed())));
    }
    let mut failed = 0;
    for (i, ((r, el), name)) in results.iter().zip(names).enumerate() {
        let time = el.map_or("with criterion 7".to_string(), |d| format!("{d:.2?}"));
        match r {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{time}]", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e} [{time}]", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
