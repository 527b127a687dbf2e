//! Dispatch from a scenario to the library computations.

use std::sync::Arc;

use serde_json::{json, Value};

use reslie_core::blocks::block_decompose;
use reslie_core::classical::{borel_and_parabolic, gl, sl};
use reslie_core::extension::{central_extension, find_splittings, harish_chandra_check};
use reslie_core::geom::{
    borel_from_flag, in_springer_fiber, jordan_nilpotent, parabolic_nice, parabolic_tangent, sample_fiber,
    tangency_splitting_check, test3_at, truncated_exp,
};
use reslie_core::liealg::{is_nilpotent_functional, Functional, RestrictedLieAlgebra, SubalgebraDatum};
use reslie_core::module::FdModule;
use reslie_core::repn::{
    baby_verma, compare_deformation, factor_summary, induce, kw_check, levi_dual_weyl, simple_quotients,
    weight_rank, Weight,
};
use reslie_core::{CheckReport, Field, FieldSpec, Matrix};

use crate::error::{CliError, Result};
use crate::scenario::{AlgebraSpec, ChiSpec, FamilySpec, Scenario, Task};

/// What a task produced, before it is wrapped into a report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub field: FieldSpec,
    pub results: Value,
    pub checks: CheckReport,
}

pub fn build_algebra(a: &AlgebraSpec) -> Result<Arc<RestrictedLieAlgebra>> {
    Ok(match a.family {
        FamilySpec::Sl => sl(a.n.unwrap_or(0), a.p)?,
        FamilySpec::Gl => gl(a.n.unwrap_or(0), a.p)?,
        FamilySpec::Custom => {
            let d = a
                .description
                .as_ref()
                .ok_or_else(|| CliError::Schema("algebra.description is required for custom".into()))?;
            Arc::new(RestrictedLieAlgebra::from_description(d)?)
        }
    })
}

fn trace_pairing(g: &RestrictedLieAlgebra, e: &Matrix) -> Result<Functional> {
    let cl = g
        .classical()
        .ok_or_else(|| CliError::Schema("trace pairing needs sl or gl".into()))?;
    let coeffs = cl.matrices.iter().map(|m| e.mul(m).trace()).collect();
    Ok(g.functional(g.field(), coeffs)?)
}

pub fn build_chi(g: &RestrictedLieAlgebra, spec: &ChiSpec) -> Result<Functional> {
    let f = g.field();
    match spec {
        ChiSpec::Zero => Ok(g.zero_functional()),
        ChiSpec::TraceDual { matrix } => {
            let rows: Vec<&[i64]> = matrix.iter().map(|r| r.as_slice()).collect();
            trace_pairing(g, &Matrix::from_ints(f, &rows))
        }
        ChiSpec::Jordan { blocks } => trace_pairing(g, &jordan_nilpotent(f, blocks)),
        ChiSpec::Covector { coeffs } => {
            if coeffs.len() != g.dim() {
                return Err(CliError::Schema(format!(
                    "chi.coeffs has length {}, the algebra has dimension {}",
                    coeffs.len(),
                    g.dim()
                )));
            }
            Ok(g.functional(f, coeffs.iter().map(|&c| f.from_i64(c)).collect())?)
        }
    }
}

fn guard(what: &str, size: u128, limit: usize) -> Result<()> {
    if size > limit as u128 {
        return Err(CliError::Guard {
            what: what.to_string(),
            size,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn fmt_functional(chi: &Functional) -> Vec<String> {
    let f = chi.field();
    chi.coeffs().iter().map(|&c| f.format(c)).collect()
}

struct Context {
    g: Arc<RestrictedLieAlgebra>,
    field: Field,
    /// chi over GF(p)
    chi0: Functional,
    /// chi over GF(p^k)
    chi: Functional,
}

pub fn execute(s: &mut Scenario) -> Result<Outcome> {
    s.validate()?;
    let g = build_algebra(&s.algebra)?;
    let field = Field::new(s.algebra.p, s.k)?;
    let chi0 = build_chi(&g, &s.chi)?;
    let chi = chi0.lift(&field);
    if s.task.needs_classical() && s.task != Task::NiceCheck {
        let rank = weight_rank(&g)?;
        let lambda = s.lambda.get_or_insert_with(|| vec![0; rank]);
        if lambda.len() != rank {
            return Err(CliError::Schema(format!(
                "lambda has length {}, expected {rank}",
                lambda.len()
            )));
        }
    } else if s.lambda.is_some() {
        return Err(CliError::Schema(format!("task {} takes no lambda", s.task.name())));
    }
    let cx = Context { g, field, chi0, chi };
    let mut checks = CheckReport::new();
    let results = match s.task {
        Task::VerifyAlgebra => verify_algebra(&cx, &mut checks),
        Task::Extension => extension(&cx, &mut checks)?,
        Task::Splittings => splittings(&cx, s, &mut checks)?,
        Task::Blocks => blocks(&cx, &mut checks)?,
        Task::Verma => verma(&cx, s, &mut checks)?,
        Task::Induce => induced(&cx, s, &mut checks)?,
        Task::NiceCheck => nice_check(&cx, s, &mut checks)?,
        Task::KwAudit => kw_audit(&cx, s, &mut checks)?,
        Task::Deformation => deformation(&cx, s, &mut checks)?,
    };
    Ok(Outcome {
        field: cx.field.spec().clone(),
        results,
        checks,
    })
}

fn verify_algebra(cx: &Context, checks: &mut CheckReport) -> Value {
    checks.extend(cx.g.verify_restricted());
    json!({
        "name": cx.g.name(),
        "dim": cx.g.dim(),
        "basis": cx.g.basis_names(),
        "perfect": cx.g.is_perfect(),
        "description": cx.g.describe(),
    })
}

fn extension(cx: &Context, checks: &mut CheckReport) -> Result<Value> {
    let e = central_extension(&cx.g, &cx.chi0)?;
    for c in e.carrier().verify_restricted().checks {
        checks.record(format!("extension: {}", c.name), c.witness.filter(|_| !c.passed));
    }
    let nilpotent = match cx.g.classical() {
        Some(_) => Some(is_nilpotent_functional(&cx.g, &cx.chi0)?),
        None => None,
    };
    if nilpotent == Some(true) {
        checks.extend(harish_chandra_check(&cx.g, &cx.chi0)?);
    }
    Ok(json!({
        "dim": e.carrier().dim(),
        "basis": e.carrier().basis_names(),
        "c_index": e.c_index(),
        "chi": fmt_functional(&cx.chi0),
        "chi_nilpotent": nilpotent,
    }))
}

fn splittings(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let e = central_extension(&cx.g, &cx.chi0)?;
    let found = find_splittings(&e, s.options.k_max)?;
    let mut list = Vec::new();
    for beta in &found {
        let k = beta.field().k();
        let report = e.verify_section(beta, 50, s.options.seed);
        checks.record(
            format!("section over GF({}^{k}) is a restricted splitting", cx.g.p()),
            report.failures().next().map(|c| format!("{}: {:?}", c.name, c.witness)),
        );
        list.push(json!({ "k": k, "beta": fmt_functional(beta) }));
    }
    let perfect = cx.g.is_perfect();
    if perfect {
        let expect = usize::from(cx.chi0.is_zero());
        checks.record(
            "perfect algebra splits iff chi = 0",
            (found.len() != expect).then(|| format!("{} splittings found", found.len())),
        );
    }
    Ok(json!({
        "k_max": s.options.k_max,
        "perfect": perfect,
        "count": found.len(),
        "splittings": list,
    }))
}

fn block_table(total: u64, dims: &[Option<u64>]) -> String {
    match dims.first() {
        Some(Some(d)) if dims.iter().all(|x| *x == Some(*d)) => {
            format!("{total} = {} \u{d7} {d}", dims.len())
        }
        _ => {
            let parts: Vec<String> = dims
                .iter()
                .map(|d| d.map_or("?".to_string(), |d| d.to_string()))
                .collect();
            format!("{total} = {}", parts.join(" + "))
        }
    }
}

fn blocks(cx: &Context, checks: &mut CheckReport) -> Result<Value> {
    let e = central_extension(&cx.g, &cx.chi0)?;
    let d = block_decompose(&e)?;
    checks.extend(d.checks.clone());
    let dims: Vec<Option<u64>> = d.blocks.iter().map(|b| b.dim).collect();
    if dims.iter().all(Option::is_some) {
        let sum: u64 = dims.iter().flatten().sum();
        checks.record(
            "block dimensions sum to the total",
            (sum != d.total_dim).then(|| format!("{sum} != {}", d.total_dim)),
        );
    }
    Ok(json!({
        "total_dim": d.total_dim,
        "blocks": d.blocks,
        "full_verification": d.full_verification,
        "table": block_table(d.total_dim, &dims),
    }))
}

fn standard_borel(g: &Arc<RestrictedLieAlgebra>) -> Result<SubalgebraDatum> {
    let b = borel_from_flag(g, &Matrix::identity(g.field(), g.classical().map_or(0, |c| c.n)))?;
    Ok(b.subalgebra().clone())
}

fn weight(s: &Scenario) -> Weight {
    Weight::new(s.lambda.clone().unwrap_or_default())
}

fn p_pow(p: u32, e: usize) -> u128 {
    (p as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

fn module_summary(m: &FdModule, checks: &mut CheckReport) -> Result<Value> {
    for c in m.check_invariants().checks {
        checks.record(format!("module: {}", c.name), c.witness.filter(|_| !c.passed));
    }
    let factors = factor_summary(m)?;
    let mut dims: Vec<usize> = factors.iter().map(|x| x.0).collect();
    dims.sort_unstable();
    let sq = simple_quotients(m)?;
    let mut qdims: Vec<usize> = sq.quotients.iter().map(|q| q.module.dim()).collect();
    qdims.sort_unstable();
    checks.record(
        "composition factors exhaust the module",
        (dims.iter().sum::<usize>() != m.dim()).then(|| format!("{dims:?} vs {}", m.dim())),
    );
    let head: usize = qdims.iter().sum();
    checks.record(
        "simple quotients exhaust the head",
        (head + sq.radical.dim() != m.dim()).then(|| format!("{head} + {} != {}", sq.radical.dim(), m.dim())),
    );
    Ok(json!({
        "dim": m.dim(),
        "factor_dims": dims,
        "composition_length": dims.len(),
        "radical_dim": sq.radical.dim(),
        "simple_quotient_dims": qdims,
        "distinct_simple_quotients": sq.distinct(),
    }))
}

fn verma(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let b = standard_borel(&cx.g)?;
    guard("baby Verma module", p_pow(cx.g.p(), cx.g.dim() - b.dim()), s.options.guard_dim)?;
    let z = baby_verma(&cx.g, &b, &cx.chi, &weight(s))?;
    module_summary(&z, checks)
}

fn induced(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let levi = levi_dual_weyl(&cx.g, s.options.levi_root, &weight(s))?;
    let codim = cx.g.dim() - levi.parabolic.dim();
    let expect = (levi.module.dim() as u128).saturating_mul(p_pow(cx.g.p(), codim));
    guard("induced module", expect, s.options.guard_dim)?;
    let m = induce(&cx.g, &levi.parabolic, &cx.chi, &levi.module)?;
    checks.record(
        "induced dimension is dim M times p^codim",
        (m.dim() as u128 != expect).then(|| format!("{} != {expect}", m.dim())),
    );
    let mut out = module_summary(&m, checks)?;
    out["levi_module_dim"] = json!(levi.module.dim());
    out["dot_weight"] = json!(levi.dot_weight.coords);
    out["parabolic_dim"] = json!(levi.parabolic.dim());
    Ok(out)
}

fn kw_audit(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let b = standard_borel(&cx.g)?;
    guard("baby Verma module", p_pow(cx.g.p(), cx.g.dim() - b.dim()), s.options.guard_dim)?;
    let z = baby_verma(&cx.g, &b, &cx.chi, &weight(s))?;
    let r = kw_check(&z, &cx.chi, &cx.g)?;
    checks.record(
        "p^(orbit dim / 2) divides every composition factor",
        (!r.divisible).then(|| format!("divisor {} vs {:?}", r.divisor, r.factor_dims)),
    );
    Ok(json!({
        "module_dim": z.dim(),
        "orbit_dim": r.orbit_dim,
        "divisor": r.divisor,
        "factor_dims": r.factor_dims,
    }))
}

fn deformation(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let b = standard_borel(&cx.g)?;
    guard("baby Verma module", p_pow(cx.g.p(), cx.g.dim() - b.dim()), s.options.guard_dim)?;
    let r = compare_deformation(&cx.g, &b, &weight(s), &cx.chi)?;
    checks.record(
        "total factor dimensions agree",
        (!r.totals_agree).then(|| format!("{:?} vs {:?}", r.chi_factor_dims, r.restricted_factor_dims)),
    );
    Ok(json!({
        "dim": r.dim,
        "chi_factor_dims": r.chi_factor_dims,
        "restricted_factor_dims": r.restricted_factor_dims,
        "modules_coincide": r.modules_coincide,
    }))
}

fn nice_check(cx: &Context, s: &Scenario, checks: &mut CheckReport) -> Result<Value> {
    let g = &cx.g;
    if !is_nilpotent_functional(g, &cx.chi0)? {
        return Err(CliError::Schema("nice-check needs a nilpotent chi".into()));
    }
    let n = g.classical().map_or(0, |c| c.n);
    let f0 = g.field().clone();
    // standard parabolic orbits through the standard Borel
    let mut certified = Vec::new();
    if g.classical().map(|c| c.family) == Some(reslie_core::liealg::Family::Sl) {
        for r in 1..n {
            let p = borel_and_parabolic(g, &[r])?;
            if !parabolic_nice(g, &p, &cx.chi0)? {
                continue;
            }
            let fs = Matrix::unit(&f0, n, r, r - 1);
            let mut bad = None;
            for t in 0..g.p() {
                let b = borel_from_flag(g, &truncated_exp(&fs.scale(t)))?;
                let tangent = parabolic_tangent(&b, &p)?;
                if !tangency_splitting_check(&b, &cx.chi0, &tangent)? {
                    bad = Some(format!("t = {t}"));
                    break;
                }
            }
            checks.record(format!("orbit of parabolic {r} is tangent to ker chi"), bad);
            certified.push(r);
        }
    }
    let sample = sample_fiber(g, &cx.chi0, s.options.samples, s.k, s.options.seed)?;
    let mut off_fiber = None;
    let mut no_witness = None;
    for b in &sample.points {
        if off_fiber.is_none() && !in_springer_fiber(b, &cx.chi)? {
            off_fiber = Some(format!("{:?}", b.flag().row_vectors()));
        }
        if no_witness.is_none() && test3_at(b, &cx.chi)?.is_none() {
            no_witness = Some(format!("{:?}", b.flag().row_vectors()));
        }
    }
    checks.record("sampled points lie in the Springer fiber", off_fiber);
    checks.record("stabilizer witness at every sampled point", no_witness);
    Ok(json!({
        "certified_parabolics": certified,
        "points": sample.points.len(),
        "sample": sample.export(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_formats() {
        assert_eq!(block_table(81, &[Some(27); 3]), "81 = 3 \u{d7} 27");
        assert_eq!(block_table(10, &[Some(4), Some(6)]), "10 = 4 + 6");
        assert_eq!(block_table(9, &[None, None, None]), "9 = ? + ? + ?");
    }

    #[test]
    fn trace_pairing_matches_the_library_when_defined() {
        let g = sl(3, 5).unwrap();
        let e = Matrix::unit(g.field(), 3, 0, 2);
        let ours = trace_pairing(&g, &e).unwrap();
        let theirs = reslie_core::classical::trace_dual(&g, &e).unwrap();
        assert_eq!(ours.coeffs(), theirs.coeffs());
        // p | n is allowed here
        let g3 = sl(3, 3).unwrap();
        assert!(!trace_pairing(&g3, &jordan_nilpotent(g3.field(), &[2, 1])).unwrap().is_zero());
    }

    #[test]
    fn guard_trips() {
        assert!(guard("m", 10, 10).is_ok());
        assert_eq!(guard("m", 11, 10).unwrap_err().exit_code(), 3);
    }
}
