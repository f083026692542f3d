//! Finite-level logarithm matrices B^{-m-1} C_m ... C_1 with tracked
//! p-power denominators, their level-to-level convergence defect, and the
//! finite-level linear-combination identity connecting the sharp/flat pair
//! to the alpha/beta-stabilized pair through the diagonalizer Q.

use crate::error::{input_err, precision_err, Result};
use crate::mat::{poly_mat_b_adj, poly_mat_c, PolyMat2};
use crate::poly::Poly;
use crate::ring::{omega, IwasawaElem};
use crate::scalar::{PAdicScalar, PadicCtx, QuadScalar};
use crate::sprung::ElemPair;
use crate::theta::{Defect, LambdaChoice, StabSeq};
use alloc::vec::Vec;

/// A 2x2 polynomial matrix with a global p-denominator exponent: the value
/// represented is p^{-denom_exp} * body.
#[derive(Clone, Debug)]
pub struct ScaledMat2 {
    pub body: PolyMat2<PAdicScalar>,
    pub denom_exp: u32,
    pub level: u32,
}

impl ScaledMat2 {
    /// Trusted p-adic digits of the represented value.
    pub fn effective_precision(&self) -> i64 {
        let ctx = self.body.a.ctx();
        ctx.prec() as i64 - self.denom_exp as i64
    }
}

/// M_{h,m} = B^{-m-1} C_m ... C_1, stored as adj(B)^{m+1} C_m ... C_1 with
/// denominator exponent m+1. Requires working precision N > m + 1 + target_n
/// so the represented value retains `target_n` trusted digits. An optional
/// X-truncation bound can shorten the stored entries; it must not cut below
/// the degree of omega_m, where the convergence contract lives.
pub fn mat_m(
    ctx: PadicCtx,
    ap: &PAdicScalar,
    m: u32,
    target_n: u32,
    x_trunc: Option<usize>,
) -> Result<ScaledMat2> {
    if ctx.prec() <= m + 1 + target_n {
        return Err(precision_err!(
            "need N > m+1+n = {} to track p^{{-{}}} denominators, have N = {}",
            m + 1 + target_n,
            m + 1,
            ctx.prec()
        ));
    }
    let mut cprod = PolyMat2::identity(ctx);
    for j in 1..=m {
        cprod = poly_mat_c(ctx, ap, j)?.mul(&cprod);
    }
    let mut body = poly_mat_b_adj(ctx, ap).pow(m + 1).mul(&cprod);
    if let Some(d) = x_trunc {
        let om_deg = omega(ctx, m)?.degree().unwrap_or(0);
        if d < om_deg {
            return Err(input_err!(
                "X-truncation bound {d} below deg(omega_m) = {om_deg}"
            ));
        }
        body = PolyMat2 {
            a: body.a.truncate_deg(d),
            b: body.b.truncate_deg(d),
            c: body.c.truncate_deg(d),
            d: body.d.truncate_deg(d),
        };
    }
    Ok(ScaledMat2 { body, denom_exp: m + 1, level: m })
}

/// The convergence defect p^{m+2}(M_{h,m+1} - M_{h,m}) reduced mod omega_m,
/// computed integrally as adj(B)^{m+2} C_{m+1}...C_1 - p * adj(B)^{m+1}
/// C_m...C_1. The contract is that it vanishes identically.
pub fn convergence_defect(ctx: PadicCtx, ap: &PAdicScalar, m: u32) -> Result<[IwasawaElem; 4]> {
    let hi = mat_m(ctx, ap, m + 1, 0, None)?;
    let lo = mat_m(ctx, ap, m, 0, None)?;
    let p_poly = Poly::from_residues(ctx, &[ctx.p()]);
    let diff = hi.body.sub(&lo.body.scale(&p_poly));
    Ok([
        IwasawaElem::new(diff.a, m)?,
        IwasawaElem::new(diff.b, m)?,
        IwasawaElem::new(diff.c, m)?,
        IwasawaElem::new(diff.d, m)?,
    ])
}

/// Determinant contract: det(M_{h,m}) = p^{-m-1} Phi_1...Phi_m, i.e. the
/// integral body has determinant p^{m+1} Phi_1...Phi_m.
pub fn det_contract(ctx: PadicCtx, ap: &PAdicScalar, m: u32) -> Result<bool> {
    let sm = mat_m(ctx, ap, m, 0, None)?;
    let mut want = Poly::one(ctx);
    for j in 1..=m {
        want = want.mul(&crate::ring::phi(ctx, j)?);
    }
    for _ in 0..=m {
        want = want.scale(&ctx.from_u64(ctx.p()));
    }
    Ok(sm.body.det() == want)
}

/// Finite-level linear-combination identity: with (sharp, flat) a
/// factorization at level m and (body^alpha, body^beta) the cleared
/// stabilized pair, verify
///     [[p, beta], [p, alpha]] * adj(B)^{m+1} C_m...C_1 (sharp, flat)^T
///       = (body^alpha_m, body^beta_m)^T   mod omega_m,
/// both sides being the p^{m+2}-fold multiple of the uncleared identity
/// Q^{-1} M_{h,m} (sharp, flat)^T = (L^alpha_m, L^beta_m)^T.
pub fn linear_combo_check(
    pair: &ElemPair,
    stab_alpha: &StabSeq,
    stab_beta: &StabSeq,
    m: u32,
    ap: &PAdicScalar,
) -> Result<core::result::Result<(), Vec<Defect>>> {
    if stab_alpha.lambda() != LambdaChoice::Alpha || stab_beta.lambda() != LambdaChoice::Beta {
        return Err(input_err!("stabilizations must be along alpha and beta respectively"));
    }
    if m == 0 || m > pair.level() || m > stab_alpha.horizon() {
        return Err(input_err!("level {m} out of range"));
    }
    let qctx = stab_alpha.qctx();
    let ctx = ap.ctx();
    let p_quad = qctx.from_base(&ctx.from_u64(ctx.p()));
    let alpha = qctx.alpha();
    let beta = qctx.beta();

    // adj(B)^{m+1} C_m ... C_1 applied to the lifted pair at level m
    let sharp = IwasawaElem::new(pair.fst.project(m)?.poly().lift_quad(qctx), m)?;
    let flat = IwasawaElem::new(pair.snd.project(m)?.poly().lift_quad(qctx), m)?;
    let mut v = (sharp, flat);
    let apq = qctx.from_base(ap);
    for j in 1..=m {
        let cj = poly_mat_c(qctx, &apq, j)?;
        v = (
            IwasawaElem::new(cj.a.mul(v.0.poly()).add(&cj.b.mul(v.1.poly())), m)?,
            IwasawaElem::new(cj.c.mul(v.0.poly()).add(&cj.d.mul(v.1.poly())), m)?,
        );
    }
    let badj = poly_mat_b_adj(qctx, &apq);
    for _ in 0..=m {
        v = (
            IwasawaElem::new(badj.a.mul(v.0.poly()).add(&badj.b.mul(v.1.poly())), m)?,
            IwasawaElem::new(badj.c.mul(v.0.poly()).add(&badj.d.mul(v.1.poly())), m)?,
        );
    }
    // left-multiply by p * Q^{-1} = [[p, beta], [p, alpha]]
    let lhs = (
        v.0.scale(&p_quad).add(&v.1.scale(&beta)),
        v.0.scale(&p_quad).add(&v.1.scale(&alpha)),
    );
    let rhs = (stab_alpha.body(m).clone(), stab_beta.body(m).clone());

    let mut defects = Vec::new();
    for (row, (l, r)) in [(&lhs.0, &rhs.0), (&lhs.1, &rhs.1)].into_iter().enumerate() {
        let diff = l.sub(r);
        for (i, c) in diff.poly().coeffs().iter().enumerate() {
            if !c.is_zero() {
                defects.push(Defect { row: row as u8, coefficient: i });
            }
        }
    }
    Ok(if defects.is_empty() { Ok(()) } else { Err(defects) })
}

/// The diagonalizer pair (cleared forms): (alpha-beta) Q = [[alpha, -beta],
/// [-p, p]] and p Q^{-1} = [[p, beta], [p, alpha]].
pub fn mat_q_cleared(qctx: crate::scalar::QuadCtx) -> ([[QuadScalar; 2]; 2], [[QuadScalar; 2]; 2]) {
    let ctx = qctx.base();
    let p = qctx.from_base(&ctx.from_u64(ctx.p()));
    let alpha = qctx.alpha();
    let beta = qctx.beta();
    (
        [[alpha, beta.neg()], [p.neg(), p]],
        [[p, beta], [p, alpha]],
    )
}
