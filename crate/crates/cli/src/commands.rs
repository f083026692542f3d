//! Subcommand implementations: each builds a serializable report from the
//! core operations. All numeric payloads are decimal-string residues.

use crate::dto::*;
use serde::Serialize;
use serde_json::json;
use sharpflat_core::admissible;
use sharpflat_core::coleman;
use sharpflat_core::error::{Error, Result};
use sharpflat_core::euler;
use sharpflat_core::logmatrix;
use sharpflat_core::oracle::HOracle;
use sharpflat_core::ring::{struct_poly, IwasawaElem, StructKind};
use sharpflat_core::scalar::PadicCtx;
use sharpflat_core::selftest::{run_selftest, SelftestConfig};
use sharpflat_core::sprung::{self, in_kernel};
use sharpflat_core::theta::{self, LambdaChoice};

fn display_poly(coeffs: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let term = match (i, c.as_str()) {
            (0, _) => c.clone(),
            (1, "1") => "X".into(),
            (1, _) => format!("{c}X"),
            (_, "1") => format!("X^{i}"),
            _ => format!("{c}X^{i}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Serialize)]
pub struct RingReport {
    pub op: String,
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub coeffs: Vec<String>,
    pub display: String,
}

pub fn ring_struct(p: u64, n: u32, kind: StructKind, m: u32) -> Result<serde_json::Value> {
    let ctx = PadicCtx::new(p, n)?;
    let sp = struct_poly(ctx, kind, m)?;
    let coeffs: Vec<String> = sp.poly.coeffs().iter().map(|c| c.value().to_string()).collect();
    let display = display_poly(&coeffs);
    Ok(serde_json::to_value(RingReport {
        op: format!("{kind:?}"),
        p,
        n,
        m,
        coeffs,
        display,
    })
    .expect("report serializes"))
}

pub enum ElemOp {
    Project(u32),
    Norm,
    Involute,
    EvalChar(u32),
}

pub fn ring_elem_op(input: &IwasawaElemDto, op: ElemOp) -> Result<serde_json::Value> {
    let e = input.to_core()?;
    let (name, out): (String, IwasawaElemDto) = match op {
        ElemOp::Project(t) => ("project".into(), IwasawaElemDto::from_core(&e.project(t)?)),
        ElemOp::Norm => ("norm".into(), IwasawaElemDto::from_core(&e.norm_to_next()?)),
        ElemOp::Involute => ("involute".into(), IwasawaElemDto::from_core(&e.involute()?)),
        ElemOp::EvalChar(j) => {
            let v = e.eval_char(j)?;
            let coeffs: Vec<String> =
                v.value.coeffs().iter().map(|c| c.value().to_string()).collect();
            return Ok(json!({
                "op": "eval_char",
                "j": j,
                "coeffs": coeffs,
                "display": display_poly(&coeffs),
            }));
        }
    };
    Ok(json!({
        "op": name,
        "result": out,
    }))
}

pub fn decompose(seq_dto: &NormSeqDto) -> Result<serde_json::Value> {
    let seq = seq_dto.to_core()?;
    let out = sprung::decompose(&seq)?;
    // cross-check against the linear-solver oracle
    let oracle = HOracle::new(seq.ap(), seq.horizon())?;
    let slow = oracle.solve_decompose(&seq)?;
    let oracle_ok = in_kernel(&seq.ap(), &out.pair().sub(&slow))?;
    if !oracle_ok {
        return Err(Error::Contract("oracle disagreement in decompose".into()));
    }
    Ok(json!({
        "p": seq.ctx().p(),
        "n": seq.ctx().prec(),
        "ap": seq.ap().value().to_string(),
        "horizon": seq.horizon(),
        "sharp": render_elem(&out.sharp),
        "flat": render_elem(&out.flat),
        "kernel_rank": out.kernel_rank(),
        "kernel_basis": out.kernel.iter().map(|g| json!({
            "fst": render_elem(&g.fst),
            "snd": render_elem(&g.snd),
        })).collect::<Vec<_>>(),
        "checks": {
            "norm_relation": "ok",
            "postcondition": "ok",
            "oracle_agreement": "ok",
        },
    }))
}

pub fn logmatrix_cmd(
    p: u64,
    ap: u64,
    m: u32,
    working_prec: u32,
    target_n: u32,
    x_trunc: Option<usize>,
) -> Result<serde_json::Value> {
    let ctx = PadicCtx::new(p, working_prec)?;
    let apv = ctx.from_u64(ap);
    let sm = logmatrix::mat_m(ctx, &apv, m, target_n, x_trunc)?;
    let defect = logmatrix::convergence_defect(ctx, &apv, m)?;
    let det_ok = logmatrix::det_contract(ctx, &apv, m)?;
    let render_poly = |p: &sharpflat_core::poly::Poly| -> Vec<String> {
        p.coeffs().iter().map(|c| c.value().to_string()).collect()
    };
    Ok(json!({
        "p": p,
        "ap": ap.to_string(),
        "m": m,
        "working_precision": working_prec,
        "denom_exp": sm.denom_exp,
        "effective_precision": sm.effective_precision(),
        "body": {
            "a": render_poly(&sm.body.a),
            "b": render_poly(&sm.body.b),
            "c": render_poly(&sm.body.c),
            "d": render_poly(&sm.body.d),
        },
        "convergence_defect_zero": defect.iter().all(|e| e.is_zero()),
        "det_contract": det_ok,
    }))
}

pub fn pstab(seq_dto: &NormSeqDto, lambda: LambdaChoice, target_n: u32) -> Result<serde_json::Value> {
    let seq = seq_dto.to_core()?;
    let bm = seq.horizon();
    let n_avail = seq.ctx().prec();
    if n_avail < target_n + bm + 2 {
        return Err(Error::Precision(format!(
            "working precision {n_avail} below n + M + 2 = {}",
            target_n + bm + 2
        )));
    }
    let stab = theta::pstabilize(&seq, lambda)?;
    let other = theta::pstabilize(
        &seq,
        match lambda {
            LambdaChoice::Alpha => LambdaChoice::Beta,
            LambdaChoice::Beta => LambdaChoice::Alpha,
        },
    )?;
    let (sa, sb) = match lambda {
        LambdaChoice::Alpha => (&stab, &other),
        LambdaChoice::Beta => (&other, &stab),
    };
    let mut identity_ok = Vec::new();
    for m in 1..=bm {
        identity_ok.push(theta::verify_stab_identity(&seq, sa, sb, m)?.is_ok());
    }
    Ok(json!({
        "lambda": match lambda { LambdaChoice::Alpha => "alpha", LambdaChoice::Beta => "beta" },
        "projection_compatible": true,
        "stab_identity_per_level": identity_ok,
        "terms": (0..=bm).map(|m| json!({
            "m": m,
            "denom_exp": stab.denom_exp(m),
            "denom_exp_half_units": stab.denom_exp_half_units(m),
            "body": render_quad_elem(stab.body(m)),
        })).collect::<Vec<_>>(),
    }))
}

pub fn theta_cmd(input: &ThetaSeqDto) -> Result<serde_json::Value> {
    let ctx = PadicCtx::new(input.p, input.n)?;
    let ap = ctx.from_u64(parse_residue(&input.ap, ctx)?);
    let tables = input
        .tables
        .iter()
        .map(|t| t.to_core())
        .collect::<Result<Vec<_>>>()?;
    let seq = theta::assemble_seq(&tables, ap)?;
    let relation = theta::check_theta_norm(&seq);
    let lp = if relation.is_ok() && seq.horizon() >= 1 {
        let pair = sprung::decompose_class(&seq)?;
        Some(json!({
            "sharp": render_elem(&pair.fst),
            "flat": render_elem(&pair.snd),
            "lp_sharp": render_elem(&theta::lp_product(&pair.fst)?),
            "lp_flat": render_elem(&theta::lp_product(&pair.snd)?),
        }))
    } else {
        None
    };
    Ok(json!({
        "assembled": seq.terms().iter().map(render_elem).collect::<Vec<_>>(),
        "norm_relation": match relation {
            Ok(()) => json!("ok"),
            Err(m) => json!({"first_failure": m}),
        },
        "factorization": lp,
    }))
}

pub fn mock(input: &QSystemDto) -> Result<serde_json::Value> {
    let model = input.to_core()?;
    let check = coleman::qsystem_check(&model)?;
    let check_json = match &check {
        coleman::QCheck::Ok { .. } => json!({
            "status": "ok",
            "membership": "not-applicable",
        }),
        coleman::QCheck::Violated { axiom, index } => json!({
            "status": "violated",
            "axiom": format!("{axiom:?}"),
            "index": index,
        }),
    };
    if !matches!(check, coleman::QCheck::Ok { .. }) {
        return Ok(json!({ "qsystem_check": check_json }));
    }
    let rows = coleman::coleman_sharp_flat(&model)?;
    let horizon = model.horizon();
    let mut rank_one = Vec::new();
    for m in 1..=horizon.min(2) {
        rank_one.push(json!({
            "m": m,
            "sharp": coleman::kernel_rank_one_check(&rows.sharp, m)?,
            "flat": coleman::kernel_rank_one_check(&rows.flat, m)?,
        }));
    }
    Ok(json!({
        "qsystem_check": check_json,
        "sharp_row": rows.sharp.iter().map(render_elem).collect::<Vec<_>>(),
        "flat_row": rows.flat.iter().map(render_elem).collect::<Vec<_>>(),
        "surjective": {
            "sharp": coleman::surjectivity_check(&rows.sharp),
            "flat": coleman::surjectivity_check(&rows.flat),
        },
        "kernel_rank_one": rank_one,
        "mod_x_identities": coleman::mod_x_identities(&model, &rows)?,
    }))
}

pub fn admissible_scan(
    table: &EigenTableDto,
    p: u64,
    n: u32,
    dk: i64,
    bound: u64,
) -> Result<serde_json::Value> {
    let t = table.to_core()?;
    let reports = admissible::scan(&t, p, n, dk, bound)?;
    Ok(json!({
        "p": p,
        "n": n,
        "dk": dk,
        "bound": bound,
        "count": reports.len(),
        "reports": reports.iter().map(|r| {
            let frob: Vec<_> = r.epsilons.iter().map(|&e| {
                let f = admissible::frobenius_eigs(r.ell, e, p, n).expect("admissible input");
                json!({
                    "epsilon": e,
                    "unit_eig": f.unit_eig.to_string(),
                    "ell_eig": f.ell_eig.to_string(),
                    "twist": f.twist.to_string(),
                })
            }).collect();
            json!({
                "ell": r.ell,
                "a_ell": r.a_ell,
                "epsilons": r.epsilons,
                "conditions": {
                    "coprime_to_level": r.coprime_to_level,
                    "inert": r.inert,
                    "order": r.order_condition,
                    "congruence": r.congruence,
                },
                "frobenius": frob,
            })
        }).collect::<Vec<_>>(),
    }))
}

pub fn eigen_table(coeffs: [i64; 5], n0: u64, bound: u64) -> Result<serde_json::Value> {
    let t = admissible::eigen_table_from_curve(coeffs, n0, bound)?;
    Ok(serde_json::to_value(EigenTableDto::from_core(&t)).expect("table serializes"))
}

pub fn euler_decompose(input: &CoordSeqDto) -> Result<serde_json::Value> {
    let coords = input.to_core()?;
    let out = euler::vector_decompose(&coords)?;
    Ok(json!({
        "rank": out.rank(),
        "sharp": out.sharp.iter().map(render_elem).collect::<Vec<_>>(),
        "flat": out.flat.iter().map(render_elem).collect::<Vec<_>>(),
        "verified": true,
    }))
}

pub fn euler_rec1(input: &Rec1InputDto) -> Result<serde_json::Value> {
    let coords = input.coords.to_core()?;
    let func = input.functional.to_core()?;
    let ctx = coords.ctx();
    let level = func.level();
    let lp = input.lp.to_core(ctx, level)?;
    let vec = euler::vector_decompose(&coords)?;
    let ap = coords.ap();
    match &input.unit {
        Some(u) => {
            let unit = IwasawaElem::from_residues(ctx, level, &parse_residues(u, ctx)?)?;
            let outcome = euler::first_reciprocity_check(&vec, &func, &lp, &unit, &ap)?;
            Ok(json!({
                "mode": "verify",
                "ok": outcome.is_ok(),
                "defects": outcome.err().map(|d| d.iter().map(|x| json!({
                    "row": x.row, "coefficient": x.coefficient
                })).collect::<Vec<_>>()),
            }))
        }
        None => {
            let unit = euler::solve_first_reciprocity_unit(&vec, &func, &lp, &ap)?;
            Ok(json!({
                "mode": "solve",
                "ok": true,
                "unit": render_elem(&unit),
            }))
        }
    }
}

pub fn euler_rec2(input: &Rec2InputDto) -> Result<serde_json::Value> {
    let c1 = input.side1.coords.to_core()?;
    let f2 = input.side1.functional.to_core()?;
    let c2 = input.side2.coords.to_core()?;
    let f1 = input.side2.functional.to_core()?;
    let ctx = c1.ctx();
    let level = f2.level();
    let lp = input.lp_congruent.to_core(ctx, level)?;
    let mk_unit = |u: &GammaUnitDto| -> Result<euler::GammaUnit> {
        euler::GammaUnit::new(ctx.from_u64(parse_residue(&u.c, ctx)?), u.k)
    };
    let u1 = mk_unit(&input.units[0])?;
    let u2 = mk_unit(&input.units[1])?;
    let v1 = euler::vector_decompose(&c1)?;
    let v2 = euler::vector_decompose(&c2)?;
    let outcome =
        euler::second_reciprocity_check(&v1, &f2, &v2, &f1, &lp, (&u1, &u2), &c1.ap())?;
    Ok(json!({
        "ok": outcome.is_ok(),
        "defect_side": outcome.err().map(|d| format!("{d:?}").to_lowercase()),
    }))
}

pub fn selftest(seed: u64, sweep: Option<(u64, u32, u32)>) -> Result<(serde_json::Value, bool)> {
    let cfg = SelftestConfig { seed, extra_sweep: sweep };
    let report = run_selftest(&cfg)?;
    let all = report.all_passed();
    Ok((
        json!({
            "seed": report.seed,
            "all_passed": all,
            "criteria": report.outcomes.iter().map(|o| json!({
                "id": o.id,
                "name": o.name,
                "passed": o.passed,
                "cases": o.cases,
                "detail": o.detail,
            })).collect::<Vec<_>>(),
        }),
        all,
    ))
}
