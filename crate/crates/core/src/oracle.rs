//! Independent brute-force reference routes. Everything here deliberately
//! avoids the adjugate-division path: factorizations are recomputed as plain
//! linear solves against the full multiplication matrix, and the
//! admissible-prime predicate is re-decided from first principles. The main
//! algorithms are validated against these routes, never the other way round.

use crate::error::{input_err, Result};
use crate::howell::LinSolver;
use crate::ring::{ring_degree, IwasawaElem};
use crate::scalar::PAdicScalar;
use crate::sprung::{h_matrix, ElemPair, NormSeq};
use alloc::vec;
use alloc::vec::Vec;

/// A cached linear-solver view of H_{h,M} for one (p, n, ap, M); solving the
/// factorization equation is then a single echelon substitution per instance.
pub struct HOracle {
    solver: LinSolver,
    ap: PAdicScalar,
    level: u32,
    dim: usize,
}

impl HOracle {
    pub fn new(ap: PAdicScalar, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(input_err!("oracle needs level >= 1"));
        }
        let dim = ring_degree(ap.ctx(), level)?;
        let solver = LinSolver::new(&h_matrix(ap, level)?);
        Ok(HOracle { solver, ap, level, dim })
    }

    pub fn ap(&self) -> PAdicScalar {
        self.ap
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Solve H * x = (F_M, -xi F_{M-1}) directly.
    pub fn solve_decompose(&self, seq: &NormSeq) -> Result<ElemPair> {
        if seq.horizon() != self.level || seq.ap() != self.ap {
            return Err(input_err!("oracle configured for a different (ap, M)"));
        }
        let target = seq.target()?;
        let b = pair_to_vec(&target, self.dim);
        let x = self
            .solver
            .solve(&b)
            .ok_or_else(|| input_err!("factorization system unsolvable: input violates the norm relation"))?;
        vec_to_pair(seq.ctx(), self.level, self.dim, &x)
    }

    /// Kernel generators from the same echelon.
    pub fn kernel(&self) -> Result<Vec<ElemPair>> {
        let ctx = self.ap.ctx();
        self.solver
            .kernel()
            .iter()
            .map(|g| vec_to_pair(ctx, self.level, self.dim, g))
            .collect()
    }
}

pub(crate) fn pair_to_vec(pair: &ElemPair, dim: usize) -> Vec<u64> {
    let mut v = vec![0u64; 2 * dim];
    for (i, c) in pair.fst.poly().coeffs().iter().enumerate() {
        v[i] = c.value();
    }
    for (i, c) in pair.snd.poly().coeffs().iter().enumerate() {
        v[dim + i] = c.value();
    }
    v
}

pub(crate) fn vec_to_pair(
    ctx: crate::scalar::PadicCtx,
    level: u32,
    dim: usize,
    v: &[u64],
) -> Result<ElemPair> {
    Ok(ElemPair::new(
        IwasawaElem::from_residues(ctx, level, &v[..dim])?,
        IwasawaElem::from_residues(ctx, level, &v[dim..])?,
    ))
}

/// From-scratch re-evaluation of the admissible-prime conditions, coded
/// independently of the classifier: inertness through an explicit Euler
/// criterion and the congruence condition by direct remainder arithmetic.
pub fn admissible_recheck(ell: u64, a_ell: i64, p: u64, n: u32, n0: u64, dk: i64) -> (bool, Vec<i8>) {
    // (i) ell coprime to p*N0
    if ell == 0 || p % ell == 0 || n0 % ell == 0 {
        return (false, Vec::new());
    }
    // (ii) inert: chi_K(ell) = -1 via Euler's criterion for odd ell, and the
    // discriminant-mod-8 rule for ell = 2
    let inert = if ell == 2 {
        // 2 is inert iff DK = 5 mod 8
        dk.rem_euclid(8) == 5
    } else {
        let d = dk.rem_euclid(ell as i64) as u64;
        if d == 0 {
            false
        } else {
            // d^((ell-1)/2) mod ell
            let mut acc = 1u64;
            let mut base = d % ell;
            let mut e = (ell - 1) / 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % ell;
                }
                base = base * base % ell;
                e >>= 1;
            }
            acc == ell - 1
        }
    };
    if !inert {
        return (false, Vec::new());
    }
    // (iii) p does not divide ell^2 - 1
    if (ell * ell - 1) % p == 0 {
        return (false, Vec::new());
    }
    // (iv) p^n | ell + 1 + eps * a_ell
    let mut pn = 1i64;
    for _ in 0..n {
        pn *= p as i64;
    }
    let mut eps = Vec::new();
    if (ell as i64 + 1 + a_ell).rem_euclid(pn) == 0 {
        eps.push(1);
    }
    if (ell as i64 + 1 - a_ell).rem_euclid(pn) == 0 {
        eps.push(-1);
    }
    (!eps.is_empty(), eps)
}
