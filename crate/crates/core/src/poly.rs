//! Dense univariate polynomials over an exact coefficient ring, with the
//! exact monic division that underpins every factorization step.

use crate::error::{contract_err, Result};
use crate::scalar::{PAdicScalar, PadicCtx, QuadCtx, QuadScalar};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Coefficient rings for polynomial arithmetic. Implemented by `PAdicScalar`
/// and `QuadScalar`; both carry their modulus context inline.
pub trait Scalar: Clone + PartialEq {
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    /// Embed a plain residue (used to lift integer-coefficient structural
    /// polynomials into any coefficient ring).
    fn from_residue(ctx: Self::Ctx, v: u64) -> Self;
    /// The underlying Z/p^N context.
    fn padic_ctx(ctx: Self::Ctx) -> PadicCtx;
    /// The same context at lower precision.
    fn reduce_ctx(ctx: Self::Ctx, prec: u32) -> Result<Self::Ctx>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    fn reduce_prec(&self, prec: u32) -> Result<Self>;
}

impl Scalar for PAdicScalar {
    type Ctx = PadicCtx;

    fn ctx(&self) -> PadicCtx {
        PAdicScalar::ctx(self)
    }
    fn zero(ctx: PadicCtx) -> Self {
        ctx.zero()
    }
    fn one(ctx: PadicCtx) -> Self {
        ctx.one()
    }
    fn from_residue(ctx: PadicCtx, v: u64) -> Self {
        ctx.from_u64(v)
    }
    fn padic_ctx(ctx: PadicCtx) -> PadicCtx {
        ctx
    }
    fn reduce_ctx(ctx: PadicCtx, prec: u32) -> Result<PadicCtx> {
        ctx.reduce(prec)
    }
    fn add(&self, rhs: &Self) -> Self {
        PAdicScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        PAdicScalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        PAdicScalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        PAdicScalar::neg(self)
    }
    fn is_zero(&self) -> bool {
        PAdicScalar::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        PAdicScalar::is_unit(self)
    }
    fn inverse(&self) -> Option<Self> {
        PAdicScalar::inverse(self)
    }
    fn reduce_prec(&self, prec: u32) -> Result<Self> {
        PAdicScalar::reduce_prec(self, prec)
    }
}

impl Scalar for QuadScalar {
    type Ctx = QuadCtx;

    fn ctx(&self) -> QuadCtx {
        QuadScalar::ctx(self)
    }
    fn zero(ctx: QuadCtx) -> Self {
        ctx.zero()
    }
    fn one(ctx: QuadCtx) -> Self {
        ctx.one()
    }
    fn from_residue(ctx: QuadCtx, v: u64) -> Self {
        ctx.from_base(&ctx.base().from_u64(v))
    }
    fn padic_ctx(ctx: QuadCtx) -> PadicCtx {
        ctx.base()
    }
    fn reduce_ctx(ctx: QuadCtx, prec: u32) -> Result<QuadCtx> {
        ctx.reduce(prec)
    }
    fn add(&self, rhs: &Self) -> Self {
        QuadScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        QuadScalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        QuadScalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        QuadScalar::neg(self)
    }
    fn is_zero(&self) -> bool {
        QuadScalar::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        QuadScalar::is_unit(self)
    }
    fn inverse(&self) -> Option<Self> {
        QuadScalar::inverse(self)
    }
    fn reduce_prec(&self, prec: u32) -> Result<Self> {
        QuadScalar::reduce_prec(self, prec)
    }
}

/// Dense polynomial in X, coefficients ascending, trailing zeros trimmed.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar = PAdicScalar> {
    ctx: S::Ctx,
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(ctx: S::Ctx) -> Self {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: S::Ctx) -> Self {
        Poly { ctx, coeffs: vec![S::one(ctx)] }
    }

    pub fn constant(c: S) -> Self {
        let ctx = c.ctx();
        let mut p = Poly { ctx, coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial X.
    pub fn x(ctx: S::Ctx) -> Self {
        Poly { ctx, coeffs: vec![S::zero(ctx), S::one(ctx)] }
    }

    pub fn monomial(ctx: S::Ctx, c: S, deg: usize) -> Self {
        let mut coeffs = vec![S::zero(ctx); deg];
        coeffs.push(c);
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    pub fn from_coeffs(ctx: S::Ctx, coeffs: Vec<S>) -> Self {
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    pub fn from_residues(ctx: S::Ctx, residues: &[u64]) -> Self {
        let coeffs = residues.iter().map(|&v| S::from_residue(ctx, v)).collect();
        Self::from_coeffs(ctx, coeffs)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        match self.leading() {
            Some(c) => {
                let one = S::one(self.ctx);
                *c == one
            }
            None => false,
        }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn assert_ctx(&self, other: &Self) {
        assert!(self.ctx == other.ctx, "mixed polynomial contexts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx);
        }
        let mut out = vec![S::zero(self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.ctx, out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.mul(s)).collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Division with remainder by a monic divisor: f = q*g + r, deg r < deg g.
    /// Exact and unique over Z/p^N precisely because g is monic.
    pub fn monic_divide(&self, g: &Self) -> Result<(Self, Self)> {
        self.assert_ctx(g);
        if !g.is_monic() {
            return Err(contract_err!("division requires a monic divisor"));
        }
        let dg = g.degree().expect("monic divisor is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(self.ctx), self.clone()));
        }
        let mut quot = vec![S::zero(self.ctx); rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - dg] = c.clone();
            // rem -= c * X^{i-dg} * g ; leading term cancels exactly
            for (j, gj) in g.coeffs.iter().enumerate() {
                let idx = i - dg + j;
                rem[idx] = rem[idx].sub(&c.mul(gj));
            }
            debug_assert!(rem[i].is_zero());
        }
        rem.truncate(dg);
        Ok((Self::from_coeffs(self.ctx, quot), Self::from_coeffs(self.ctx, rem)))
    }

    /// Remainder mod a monic divisor.
    pub fn rem_monic(&self, g: &Self) -> Result<Self> {
        Ok(self.monic_divide(g)?.1)
    }

    /// Truncate to degree < d (reduction mod X^d).
    pub fn truncate_deg(&self, d: usize) -> Self {
        let coeffs = self.coeffs.iter().take(d).cloned().collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    /// Substitute X -> gamma - 1: the coefficient vector on the group-element
    /// basis {gamma^j}. Inverse of `from_gamma_basis`.
    pub fn to_gamma_basis(&self) -> Vec<S> {
        // Horner in (gamma - 1): result starts at the top coefficient and is
        // repeatedly multiplied by (gamma - 1) in the gamma-power basis.
        let n = self.coeffs.len();
        let mut acc: Vec<S> = Vec::new();
        for i in (0..n).rev() {
            // acc = acc * (gamma - 1) + c_i
            let mut next = vec![S::zero(self.ctx); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                next[j + 1] = next[j + 1].add(a);
                next[j] = next[j].sub(a);
            }
            if next.is_empty() {
                next.push(S::zero(self.ctx));
            }
            next[0] = next[0].add(&self.coeffs[i]);
            acc = next;
        }
        acc
    }

    /// Rebuild from gamma-basis coefficients: sum c_j (1+X)^j.
    pub fn from_gamma_basis(ctx: S::Ctx, gcoeffs: &[S]) -> Self {
        let mut acc = Self::zero(ctx);
        for c in gcoeffs.iter().rev() {
            // acc = acc * (1 + X) + c
            let shifted = {
                let mut v = vec![S::zero(ctx)];
                v.extend(acc.coeffs.iter().cloned());
                Self::from_coeffs(ctx, v)
            };
            acc = acc.add(&shifted).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        let ctx = S::reduce_ctx(self.ctx, prec)?;
        let coeffs: Result<Vec<S>> = self.coeffs.iter().map(|c| c.reduce_prec(prec)).collect();
        Ok(Self::from_coeffs(ctx, coeffs?))
    }

    pub fn map_coeffs<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_coeffs(ctx, self.coeffs.iter().map(f).collect())
    }
}

impl Poly<PAdicScalar> {
    /// Lift into the quadratic extension.
    pub fn lift_quad(&self, qctx: QuadCtx) -> Poly<QuadScalar> {
        assert!(qctx.base() == self.ctx(), "quadratic context base mismatch");
        self.map_coeffs(qctx, |c| qctx.from_base(c))
    }
}

impl<S: Scalar + fmt::Debug> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{:?}", c)?,
                1 => write!(f, "({:?})*X", c)?,
                _ => write!(f, "({:?})*X^{}", c, i)?,
            }
        }
        Ok(())
    }
}
