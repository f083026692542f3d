//! Norm-compatible sequences and their constructive sharp/flat factorization.
//!
//! A sequence (F_0, ..., F_M) with F_m in Lambda_{m,n} satisfying
//! pi(F_{m+1}) = ap*F_m - xi(F_{m-1}) factors through the matrices
//! C_m = [[ap, 1], [-Phi_m, 0]]: there is a pair (sharp, flat), unique up to
//! ker(C_M...C_1), with C_M...C_1 (sharp, flat)^T = (F_M, -xi F_{M-1})^T.
//! The factorization is computed by the adjugate route: the vector
//! adj(C_1)...adj(C_M) (F_M, -Phi_M F_{M-1})^T is exactly divisible by the
//! monic product Phi_1...Phi_M, and the quotient is the answer.

use crate::error::{contract_err, input_err, Result};
use crate::howell::{kernel_basis, ZpnMatrix};
use crate::mat::{poly_mat_c, poly_mat_c_adj};
use crate::poly::{Poly, Scalar};
use crate::ring::{phi_in, ring_degree, IwasawaElem};
use crate::scalar::{PAdicScalar, PadicCtx};
use alloc::vec;
use alloc::vec::Vec;

/// A pair of ring elements at a common level (a module element of rank 2).
#[derive(Clone, PartialEq, Debug)]
pub struct ElemPair<S: Scalar = PAdicScalar> {
    pub fst: IwasawaElem<S>,
    pub snd: IwasawaElem<S>,
}

impl<S: Scalar> ElemPair<S> {
    pub fn new(fst: IwasawaElem<S>, snd: IwasawaElem<S>) -> Self {
        assert_eq!(fst.level(), snd.level(), "pair components at mixed levels");
        ElemPair { fst, snd }
    }

    pub fn zero(ctx: S::Ctx, level: u32) -> Self {
        ElemPair { fst: IwasawaElem::zero(ctx, level), snd: IwasawaElem::zero(ctx, level) }
    }

    pub fn level(&self) -> u32 {
        self.fst.level()
    }

    pub fn add(&self, o: &Self) -> Self {
        ElemPair { fst: self.fst.add(&o.fst), snd: self.snd.add(&o.snd) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ElemPair { fst: self.fst.sub(&o.fst), snd: self.snd.sub(&o.snd) }
    }

    pub fn is_zero(&self) -> bool {
        self.fst.is_zero() && self.snd.is_zero()
    }

    pub fn project(&self, target: u32) -> Result<Self> {
        Ok(ElemPair { fst: self.fst.project(target)?, snd: self.snd.project(target)? })
    }

    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        Ok(ElemPair { fst: self.fst.reduce_prec(prec)?, snd: self.snd.reduce_prec(prec)? })
    }
}

/// Apply H_{h,m} = C_m ... C_1 to a pair at level m, reducing mod omega_m at
/// each step. The empty product (m = 0) is the identity.
pub fn apply_h<S: Scalar>(ap: &S, v: &ElemPair<S>) -> Result<ElemPair<S>> {
    let m = v.level();
    let ctx = v.fst.ctx();
    let mut cur = (v.fst.clone(), v.snd.clone());
    for j in 1..=m {
        let cj = poly_mat_c(ctx, ap, j)?;
        let f = cj.a.mul(cur.0.poly()).add(&cj.b.mul(cur.1.poly()));
        let s = cj.c.mul(cur.0.poly()).add(&cj.d.mul(cur.1.poly()));
        cur = (IwasawaElem::new(f, m)?, IwasawaElem::new(s, m)?);
    }
    Ok(ElemPair { fst: cur.0, snd: cur.1 })
}

/// Kernel membership for H_{h,m}, the uniqueness class of the factorization.
pub fn in_kernel<S: Scalar>(ap: &S, v: &ElemPair<S>) -> Result<bool> {
    Ok(apply_h(ap, v)?.is_zero())
}

/// A finite sequence (F_0, ..., F_M) subject to the three-term norm relation.
#[derive(Clone, PartialEq, Debug)]
pub struct NormSeq {
    terms: Vec<IwasawaElem>,
    ap: PAdicScalar,
}

/// Index of the first violated relation, when any.
pub type RelationCheck = core::result::Result<(), u32>;

impl NormSeq {
    /// Strict constructor: rejects sequences violating the norm relation.
    pub fn new_strict(terms: Vec<IwasawaElem>, ap: PAdicScalar) -> Result<Self> {
        let seq = Self::new_lenient(terms, ap)?;
        if let Err(m) = seq.verify_norm_relation() {
            return Err(contract_err!("norm relation violated at index {m}"));
        }
        Ok(seq)
    }

    /// Lenient constructor: stores the sequence and lets
    /// `verify_norm_relation` diagnose.
    pub fn new_lenient(terms: Vec<IwasawaElem>, ap: PAdicScalar) -> Result<Self> {
        if terms.is_empty() {
            return Err(input_err!("empty sequence"));
        }
        if ap.is_unit() {
            return Err(input_err!("ap must have positive valuation"));
        }
        for (m, t) in terms.iter().enumerate() {
            if t.level() != m as u32 {
                return Err(input_err!("term {m} not at level {m}"));
            }
            if t.ctx() != ap.ctx() {
                return Err(input_err!("term {m} precision differs from ap"));
            }
        }
        Ok(NormSeq { terms, ap })
    }

    pub fn horizon(&self) -> u32 {
        (self.terms.len() - 1) as u32
    }

    pub fn ap(&self) -> PAdicScalar {
        self.ap
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ap.ctx()
    }

    pub fn term(&self, m: u32) -> &IwasawaElem {
        &self.terms[m as usize]
    }

    pub fn terms(&self) -> &[IwasawaElem] {
        &self.terms
    }

    /// Check pi(F_{m+1}) = ap*F_m - xi(F_{m-1}) for 1 <= m <= M-1; report the
    /// first failing m.
    pub fn verify_norm_relation(&self) -> RelationCheck {
        for m in 1..self.horizon() {
            let lhs = self
                .term(m + 1)
                .project(m)
                .expect("projection within range");
            let xi = self
                .term(m - 1)
                .norm_to_next()
                .expect("norm within cap");
            let rhs = self.term(m).scale(&self.ap).sub(&xi);
            if lhs != rhs {
                return Err(m);
            }
        }
        Ok(())
    }

    /// The target vector (F_M, -xi(F_{M-1})) of the factorization equation.
    pub fn target(&self) -> Result<ElemPair> {
        let bm = self.horizon();
        if bm == 0 {
            return Err(input_err!("factorization target needs horizon >= 1"));
        }
        let xi = self.term(bm - 1).norm_to_next()?;
        Ok(ElemPair::new(self.term(bm).clone(), xi.neg()))
    }

    /// The same sequence read at lower precision (ap reduces along).
    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        let terms: Result<Vec<_>> = self.terms.iter().map(|t| t.reduce_prec(prec)).collect();
        Ok(NormSeq { terms: terms?, ap: self.ap.reduce_prec(prec)? })
    }

    /// Truncate to a lower horizon.
    pub fn truncate(&self, horizon: u32) -> Result<Self> {
        if horizon >= self.terms.len() as u32 {
            return Err(input_err!("truncation horizon above sequence length"));
        }
        Ok(NormSeq { terms: self.terms[..=horizon as usize].to_vec(), ap: self.ap })
    }
}

/// Forward generator: F_m := first component of H_{h,m} applied to the
/// level-m projection of (sharp, flat). The output satisfies the norm
/// relation by the telescoping of the matrix product.
pub fn generate_seq(sharp: &IwasawaElem, flat: &IwasawaElem, ap: PAdicScalar) -> Result<NormSeq> {
    let bm = sharp.level();
    if flat.level() != bm {
        return Err(input_err!("seed components at mixed levels"));
    }
    let mut terms = Vec::with_capacity(bm as usize + 1);
    for m in 0..=bm {
        let v = ElemPair::new(sharp.project(m)?, flat.project(m)?);
        terms.push(apply_h(&ap, &v)?.fst);
    }
    NormSeq::new_strict(terms, ap)
}

/// The factorization output: the level-M class together with the kernel of
/// H_{h,M}, which is exactly its ambiguity.
#[derive(Clone, Debug)]
pub struct SharpFlatPair {
    pub sharp: IwasawaElem,
    pub flat: IwasawaElem,
    pub kernel: Vec<ElemPair>,
}

impl SharpFlatPair {
    pub fn pair(&self) -> ElemPair {
        ElemPair::new(self.sharp.clone(), self.flat.clone())
    }

    pub fn kernel_rank(&self) -> usize {
        self.kernel.len()
    }
}

/// The inductive factorization algorithm. Lifts the top two terms, applies
/// the adjugates adj(C_1)...adj(C_M), asserts exact divisibility by the
/// monic product Phi_1...Phi_M and divides once.
pub fn decompose(seq: &NormSeq) -> Result<SharpFlatPair> {
    if let Err(m) = seq.verify_norm_relation() {
        return Err(contract_err!("norm relation violated at index {m}"));
    }
    let pair = decompose_class(seq)?;
    let kernel = kernel_h(seq.ap(), seq.horizon())?;
    // postcondition: H * (sharp, flat) = (F_M, -xi F_{M-1})
    let got = apply_h(&seq.ap(), &pair)?;
    if got != seq.target()? {
        return Err(contract_err!("factorization postcondition failed"));
    }
    Ok(SharpFlatPair { sharp: pair.fst, flat: pair.snd, kernel })
}

/// The factorization without the kernel computation, for callers that only
/// need the class representative.
pub fn decompose_class(seq: &NormSeq) -> Result<ElemPair> {
    let bm = seq.horizon();
    if bm == 0 {
        return Err(input_err!("decomposition needs horizon M >= 1"));
    }
    let ctx = seq.ctx();
    let ap = seq.ap();
    // lifts of the top two terms
    let f_top = seq.term(bm).poly().clone();
    let f_prev = seq.term(bm - 1).poly().clone();
    let phim = phi_in::<PAdicScalar>(ctx, bm)?;
    let mut v = (f_top, phim.mul(&f_prev).neg());
    // adj(C_1) ... adj(C_M) applied right-to-left
    let mut divisor = Poly::one(ctx);
    for j in (1..=bm).rev() {
        v = poly_mat_c_adj(ctx, &ap, j)?.apply(&v);
        divisor = divisor.mul(&phi_in::<PAdicScalar>(ctx, j)?);
    }
    let (qs, rs) = v.0.monic_divide(&divisor)?;
    let (qf, rf) = v.1.monic_divide(&divisor)?;
    if !rs.is_zero() || !rf.is_zero() {
        return Err(contract_err!(
            "adjugate vector not divisible by Phi_1...Phi_{bm}: corrupted input or misconfigured precision"
        ));
    }
    Ok(ElemPair::new(IwasawaElem::new(qs, bm)?, IwasawaElem::new(qf, bm)?))
}

/// The p^m x p^m matrix of multiplication by an element on Lambda_{m,n} in
/// the X-power basis.
pub fn mult_matrix(e: &IwasawaElem) -> Result<ZpnMatrix> {
    let ctx = e.ctx();
    let d = ring_degree(ctx, e.level())?;
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut shifted = e.clone();
    let x = IwasawaElem::new(Poly::x(ctx), e.level())?;
    for _ in 0..d {
        let mut col = vec![0u64; d];
        for (i, c) in shifted.poly().coeffs().iter().enumerate() {
            col[i] = c.value();
        }
        cols.push(col);
        shifted = shifted.mul(&x);
    }
    // transpose columns into rows
    let rows = (0..d)
        .map(|r| (0..d).map(|c| cols[c][r]).collect())
        .collect();
    ZpnMatrix::new(ctx, d, rows)
}

/// The 2p^m x 2p^m matrix of H_{h,m} on Lambda_{m,n}^2.
pub fn h_matrix(ap: PAdicScalar, m: u32) -> Result<ZpnMatrix> {
    let ctx = ap.ctx();
    let d = ring_degree(ctx, m)?;
    // entries of the 2x2 product over the ring
    let e = |poly: Poly| IwasawaElem::new(poly, m);
    let mut h = [
        [e(Poly::one(ctx))?, e(Poly::zero(ctx))?],
        [e(Poly::zero(ctx))?, e(Poly::one(ctx))?],
    ];
    for j in 1..=m {
        let cj = poly_mat_c(ctx, &ap, j)?;
        let cj = [
            [e(cj.a.clone())?, e(cj.b.clone())?],
            [e(cj.c.clone())?, e(cj.d.clone())?],
        ];
        h = [
            [
                cj[0][0].mul(&h[0][0]).add(&cj[0][1].mul(&h[1][0])),
                cj[0][0].mul(&h[0][1]).add(&cj[0][1].mul(&h[1][1])),
            ],
            [
                cj[1][0].mul(&h[0][0]).add(&cj[1][1].mul(&h[1][0])),
                cj[1][0].mul(&h[0][1]).add(&cj[1][1].mul(&h[1][1])),
            ],
        ];
    }
    let blocks = [
        [mult_matrix(&h[0][0])?, mult_matrix(&h[0][1])?],
        [mult_matrix(&h[1][0])?, mult_matrix(&h[1][1])?],
    ];
    let mut rows = Vec::with_capacity(2 * d);
    for bi in 0..2 {
        for r in 0..d {
            let mut row = Vec::with_capacity(2 * d);
            for bj in 0..2 {
                row.extend(blocks[bi][bj].rows()[r].iter().copied());
            }
            rows.push(row);
        }
    }
    ZpnMatrix::new(ctx, 2 * d, rows)
}

/// Kernel generators of H_{h,m} over Lambda_{m,n}^2, by Howell reduction of
/// the full multiplication matrix.
pub fn kernel_h(ap: PAdicScalar, m: u32) -> Result<Vec<ElemPair>> {
    let ctx = ap.ctx();
    let d = ring_degree(ctx, m)?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let hm = h_matrix(ap, m)?;
    let gens = kernel_basis(&hm);
    gens.into_iter()
        .map(|g| {
            Ok(ElemPair::new(
                IwasawaElem::from_residues(ctx, m, &g[..d])?,
                IwasawaElem::from_residues(ctx, m, &g[d..])?,
            ))
        })
        .collect()
}

/// Coefficient positions where two pairs differ, for mismatch reports.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub component: u8,
    pub coefficient: usize,
}

/// Congruence-invariance check: factoring at precision n' then reducing to
/// n <= n' agrees, modulo (p^n, ker H at precision n), with reducing first
/// and factoring at precision n.
pub fn congruence_check(seq: &NormSeq, n: u32) -> Result<core::result::Result<(), Vec<Mismatch>>> {
    let nprime = seq.ctx().prec();
    if n > nprime {
        return Err(input_err!("target precision {n} above sequence precision {nprime}"));
    }
    let hi = decompose_class(seq)?;
    let reduced = hi.reduce_prec(n)?;
    let lo_seq = seq.reduce_prec(n)?;
    let lo = decompose_class(&lo_seq)?;
    check_kernel_congruence(&reduced, &lo, lo_seq.ap())
}

/// Same check for two congruent sequences with congruent eigenvalues: the
/// first lives at precision n', the second at n <= n' with ap' = ap mod p^n.
pub fn congruence_check_paired(
    seq_hi: &NormSeq,
    seq_lo: &NormSeq,
) -> Result<core::result::Result<(), Vec<Mismatch>>> {
    let n = seq_lo.ctx().prec();
    if seq_hi.ctx().prec() < n {
        return Err(input_err!("first sequence must carry at least the precision of the second"));
    }
    if seq_hi.ap().reduce_prec(n)? != seq_lo.ap() {
        return Err(input_err!("eigenvalues not congruent mod p^n"));
    }
    for m in 0..=seq_hi.horizon().min(seq_lo.horizon()) {
        if seq_hi.term(m).reduce_prec(n)? != *seq_lo.term(m) {
            return Err(input_err!("sequences not congruent mod p^n at index {m}"));
        }
    }
    let hi = decompose_class(seq_hi)?.reduce_prec(n)?;
    let lo = decompose_class(seq_lo)?;
    check_kernel_congruence(&hi, &lo, seq_lo.ap())
}

fn check_kernel_congruence(
    a: &ElemPair,
    b: &ElemPair,
    ap: PAdicScalar,
) -> Result<core::result::Result<(), Vec<Mismatch>>> {
    let diff = a.sub(b);
    let image = apply_h(&ap, &diff)?;
    if image.is_zero() {
        return Ok(Ok(()));
    }
    let mut mismatches = Vec::new();
    for (ci, comp) in [&image.fst, &image.snd].into_iter().enumerate() {
        for (i, c) in comp.poly().coeffs().iter().enumerate() {
            if !c.is_zero() {
                mismatches.push(Mismatch { component: ci as u8, coefficient: i });
            }
        }
    }
    Ok(Err(mismatches))
}
