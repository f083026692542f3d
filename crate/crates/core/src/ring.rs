//! The truncated Iwasawa algebra `Lambda_{m,n} = (Z/p^n)[X]/(omega_m)`, its
//! structural polynomials omega_m, Phi_m and the signed products
//! omega-tilde^{+/-}, together with projection, norm, involution and
//! evaluation at finite-order characters.
//!
//! Elements are stored in the X-power basis with degree < p^m; gamma = 1 + X
//! is the distinguished group generator, so the gamma-power basis is the
//! group-ring basis and the two are exchanged by a binomial transform.

use crate::error::{input_err, Result};
use crate::poly::{Poly, Scalar};
use crate::scalar::{PAdicScalar, PadicCtx};
use alloc::vec::Vec;

/// Levels are capped so that ring degrees stay desk-sized.
pub const LEVEL_CAP: u64 = 3125;

/// p^m as usize, guarded by the level cap.
pub fn ring_degree(ctx: PadicCtx, m: u32) -> Result<usize> {
    let mut d = 1u64;
    for _ in 0..m {
        d = d.saturating_mul(ctx.p());
        if d > LEVEL_CAP {
            return Err(input_err!(
                "level {m} exceeds the ring-degree cap ({} > {LEVEL_CAP})",
                d
            ));
        }
    }
    Ok(d as usize)
}

/// omega_m = (1+X)^{p^m} - 1, monic of degree p^m.
pub fn omega(ctx: PadicCtx, m: u32) -> Result<Poly> {
    let d = ring_degree(ctx, m)? as u64;
    let gamma = Poly::from_residues(ctx, &[1, 1]);
    Ok(gamma.pow(d).sub(&Poly::one(ctx)))
}

/// Phi_m = omega_m / omega_{m-1}, the p^m-th cyclotomic polynomial in 1+X.
pub fn phi(ctx: PadicCtx, m: u32) -> Result<Poly> {
    if m == 0 {
        return Err(input_err!("Phi_m requires m >= 1"));
    }
    let (q, r) = omega(ctx, m)?.monic_divide(&omega(ctx, m - 1)?)?;
    debug_assert!(r.is_zero());
    Ok(q)
}

/// The six structural polynomial kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructKind {
    Omega,
    Phi,
    OmegaPlus,
    OmegaMinus,
    TildePlus,
    TildeMinus,
}

/// A named monic structural polynomial at a level.
#[derive(Debug, Clone)]
pub struct StructPoly {
    pub kind: StructKind,
    pub level: u32,
    pub poly: Poly,
}

/// omega-tilde^+ = prod of Phi_j over even j <= m, omega-tilde^- over odd j;
/// omega^{+/-} = X * omega-tilde^{+/-}.
pub fn struct_poly(ctx: PadicCtx, kind: StructKind, m: u32) -> Result<StructPoly> {
    let poly = match kind {
        StructKind::Omega => omega(ctx, m)?,
        StructKind::Phi => phi(ctx, m)?,
        StructKind::TildePlus | StructKind::TildeMinus | StructKind::OmegaPlus
        | StructKind::OmegaMinus => {
            let want_even = matches!(kind, StructKind::TildePlus | StructKind::OmegaPlus);
            let mut acc = Poly::one(ctx);
            for j in 1..=m {
                if (j % 2 == 0) == want_even {
                    acc = acc.mul(&phi(ctx, j)?);
                }
            }
            if matches!(kind, StructKind::OmegaPlus | StructKind::OmegaMinus) {
                acc = acc.mul(&Poly::x(ctx));
            }
            acc
        }
    };
    Ok(StructPoly { kind, level: m, poly })
}

/// An element of Lambda_{m,n}, canonical form of degree < p^m.
#[derive(Clone, PartialEq, Debug)]
pub struct IwasawaElem<S: Scalar = PAdicScalar> {
    poly: Poly<S>,
    level: u32,
}

impl<S: Scalar> IwasawaElem<S> {
    /// Reduce an arbitrary polynomial into the level-m quotient.
    pub fn new(poly: Poly<S>, level: u32) -> Result<Self> {
        let om = omega_in::<S>(poly.ctx(), level)?;
        let reduced = poly.rem_monic(&om)?;
        Ok(IwasawaElem { poly: reduced, level })
    }

    pub fn zero(ctx: S::Ctx, level: u32) -> Self {
        IwasawaElem { poly: Poly::zero(ctx), level }
    }

    pub fn one(ctx: S::Ctx, level: u32) -> Self {
        IwasawaElem { poly: Poly::one(ctx), level }
    }

    /// gamma = 1 + X.
    pub fn gamma(ctx: S::Ctx, level: u32) -> Result<Self> {
        Self::new(Poly::from_residues(ctx, &[1, 1]), level)
    }

    pub fn from_residues(ctx: S::Ctx, level: u32, residues: &[u64]) -> Result<Self> {
        Self::new(Poly::from_residues(ctx, residues), level)
    }

    pub fn poly(&self) -> &Poly<S> {
        &self.poly
    }

    pub fn into_poly(self) -> Poly<S> {
        self.poly
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ctx(&self) -> S::Ctx {
        self.poly.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn assert_level(&self, other: &Self) {
        assert_eq!(self.level, other.level, "mixed ring levels");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_level(other);
        IwasawaElem { poly: self.poly.add(&other.poly), level: self.level }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_level(other);
        IwasawaElem { poly: self.poly.sub(&other.poly), level: self.level }
    }

    pub fn neg(&self) -> Self {
        IwasawaElem { poly: self.poly.neg(), level: self.level }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_level(other);
        let prod = self.poly.mul(&other.poly);
        Self::new(prod, self.level).expect("reduction of a product cannot fail")
    }

    pub fn scale(&self, s: &S) -> Self {
        IwasawaElem { poly: self.poly.scale(s), level: self.level }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx(), self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Natural projection to a lower level: reduction mod omega_target.
    pub fn project(&self, target: u32) -> Result<Self> {
        if target > self.level {
            return Err(input_err!(
                "projection target {target} above current level {}",
                self.level
            ));
        }
        Self::new(self.poly.clone(), target)
    }

    /// Norm map to the next level: xi(x) = Phi_{m+1} * lift(x) mod
    /// omega_{m+1}; independent of the lift since Phi_{m+1} * omega_m =
    /// omega_{m+1}.
    pub fn norm_to_next(&self) -> Result<Self> {
        let target = self.level + 1;
        let phi_t = phi_in::<S>(self.ctx(), target)?;
        Self::new(self.poly.mul(&phi_t), target)
    }

    /// The ring involution gamma -> gamma^{-1} = gamma^{p^m - 1}, fixing
    /// coefficients. Implemented by index reversal on the group basis.
    pub fn involute(&self) -> Result<Self> {
        let d = ring_degree(S::padic_ctx(self.ctx()), self.level)?;
        let mut g = self.poly.to_gamma_basis();
        g.resize(d, S::zero(self.ctx()));
        let mut rev = alloc::vec![S::zero(self.ctx()); d];
        for (j, c) in g.into_iter().enumerate() {
            let k = if j == 0 { 0 } else { d - j };
            rev[k] = rev[k].add(&c);
        }
        Self::new(Poly::from_gamma_basis(self.ctx(), &rev), self.level)
    }

    /// Group-basis coefficients (length p^m).
    pub fn gamma_coeffs(&self) -> Result<Vec<S>> {
        let d = ring_degree(S::padic_ctx(self.ctx()), self.level)?;
        let mut g = self.poly.to_gamma_basis();
        g.resize(d, S::zero(self.ctx()));
        Ok(g)
    }

    pub fn from_gamma_coeffs(ctx: S::Ctx, level: u32, gcoeffs: &[S]) -> Result<Self> {
        Self::new(Poly::from_gamma_basis(ctx, gcoeffs), level)
    }

    /// Image under gamma -> primitive p^j-th root of unity, i.e. reduction
    /// mod Phi_j (mod X for j = 0).
    pub fn eval_char(&self, j: u32) -> Result<CharValue<S>> {
        if j > self.level {
            return Err(input_err!("character level {j} above element level {}", self.level));
        }
        let modulus = if j == 0 { Poly::x(self.ctx()) } else { phi_in::<S>(self.ctx(), j)? };
        let value = self.poly.rem_monic(&modulus)?;
        Ok(CharValue { j, value, modulus })
    }

    /// Units of the local ring Lambda_{m,n} are detected mod (p, X).
    pub fn is_unit(&self) -> bool {
        self.poly.coeff(0).is_unit()
    }

    /// Newton iteration against the nilpotent part; `None` for non-units.
    pub fn unit_inverse(&self) -> Option<Self> {
        let c0 = self.poly.coeff(0);
        let c0inv = c0.inverse()?;
        let mut x = Self::new(Poly::constant(c0inv), self.level).ok()?;
        let two = Self::new(Poly::from_residues(self.ctx(), &[2]), self.level).ok()?;
        // x_{k+1} = x_k (2 - u x_k); quadratic convergence in the (p, X)-adic
        // filtration, which is nilpotent in the finite quotient.
        loop {
            let next = x.mul(&two.sub(&self.mul(&x)));
            if next == x {
                break;
            }
            x = next;
        }
        if self.mul(&x) == Self::one(self.ctx(), self.level) {
            Some(x)
        } else {
            None
        }
    }

    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        Ok(IwasawaElem { poly: self.poly.reduce_prec(prec)?, level: self.level })
    }

    /// Minimum coefficient valuation (the content), as plumbing for
    /// order-of-vanishing bookkeeping on quotient images.
    pub fn content_valuation(&self) -> crate::scalar::Valuation {
        use crate::scalar::Valuation;
        let pctx = S::padic_ctx(self.ctx());
        let mut best = Valuation::Infinity;
        for c in self.poly.coeffs() {
            // valuation of a coefficient via repeated divisibility of its
            // residue representation in the base ring
            let v = scalar_content_val::<S>(c, pctx);
            if v < best {
                best = v;
            }
        }
        best
    }
}

/// p-valuation of a scalar in either coefficient ring: the largest v with
/// c in p^v * R, detected via annihilation by the complementary p-power.
fn scalar_content_val<S: Scalar>(c: &S, pctx: PadicCtx) -> crate::scalar::Valuation {
    use crate::scalar::Valuation;
    if c.is_zero() {
        return Valuation::Infinity;
    }
    let mut v = 0u32;
    while v < pctx.prec() {
        // c divisible by p^{v+1} iff p^{prec-v-1} * c == 0
        let cof = S::from_residue(c.ctx(), pow_mod(pctx.p(), pctx.prec() - v - 1, pctx.modulus()));
        if !cof.mul(c).is_zero() {
            break;
        }
        v += 1;
    }
    Valuation::Finite(v)
}

fn pow_mod(b: u64, e: u32, m: u64) -> u64 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc = acc * b as u128 % m as u128;
    }
    acc as u64
}

/// The image of an element under evaluation at a finite-order character:
/// a residue in `(Z/p^n)[X]/(Phi_j(1+X))` (j = 0: in Z/p^n).
#[derive(Clone, PartialEq, Debug)]
pub struct CharValue<S: Scalar = PAdicScalar> {
    pub j: u32,
    pub value: Poly<S>,
    modulus: Poly<S>,
}

impl<S: Scalar> CharValue<S> {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.j, other.j, "mixed character levels");
        let prod = self.value.mul(&other.value);
        let value = prod.rem_monic(&self.modulus).expect("modulus is monic");
        CharValue { j: self.j, value, modulus: self.modulus.clone() }
    }

    /// Multiplicative order, by iterated multiplication; `None` when no power
    /// reaches 1 within the searched bound.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let one = CharValue {
            j: self.j,
            value: Poly::one(self.value.ctx()),
            modulus: self.modulus.clone(),
        };
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc == one {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

/// omega_m lifted into an arbitrary coefficient ring.
pub fn omega_in<S: Scalar>(ctx: S::Ctx, m: u32) -> Result<Poly<S>> {
    let base = omega(S::padic_ctx(ctx), m)?;
    Ok(lift_base_poly::<S>(ctx, &base))
}

/// Phi_m lifted into an arbitrary coefficient ring.
pub fn phi_in<S: Scalar>(ctx: S::Ctx, m: u32) -> Result<Poly<S>> {
    let base = phi(S::padic_ctx(ctx), m)?;
    Ok(lift_base_poly::<S>(ctx, &base))
}

pub(crate) fn lift_base_poly<S: Scalar>(ctx: S::Ctx, base: &Poly<PAdicScalar>) -> Poly<S> {
    Poly::from_coeffs(
        ctx,
        base.coeffs().iter().map(|c| S::from_residue(ctx, c.value())).collect(),
    )
}

/// Exact monic division exposed at the spec surface, with the exactness flag.
pub fn monic_divide(f: &Poly, g: &Poly) -> Result<(Poly, Poly, bool)> {
    let (q, r) = f.monic_divide(g)?;
    let exact = r.is_zero();
    Ok((q, r, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PadicCtx;
    use alloc::vec;

    type Elem = IwasawaElem<PAdicScalar>;

    fn ctx(p: u64, n: u32) -> PadicCtx {
        PadicCtx::new(p, n).unwrap()
    }

    fn poly_values(p: &Poly) -> Vec<u64> {
        p.coeffs().iter().map(|c| c.value()).collect()
    }

    #[test]
    fn omega_small_cases() {
        let c = ctx(5, 3);
        assert_eq!(poly_values(&omega(c, 0).unwrap()), vec![0, 1]); // X
        assert_eq!(poly_values(&omega(c, 1).unwrap()), vec![0, 5, 10, 10, 5, 1]);
        let c3 = ctx(3, 4);
        // (1+X)^9 - 1
        let om2 = omega(c3, 2).unwrap();
        assert_eq!(om2.degree(), Some(9));
        assert_eq!(poly_values(&om2), vec![0, 9, 36, 3, 45, 45, 3, 36, 9, 1]);
    }

    #[test]
    fn phi_small_cases() {
        let c3 = ctx(3, 2);
        assert_eq!(poly_values(&phi(c3, 1).unwrap()), vec![3, 3, 1]); // X^2+3X+3
        let c5 = ctx(5, 2);
        assert_eq!(poly_values(&phi(c5, 1).unwrap()), vec![5, 10, 10, 5, 1]);
    }

    #[test]
    fn phi_congruent_to_p_mod_lower_omega() {
        // Phi_{m} mod omega_{m-1} = p
        for (p, n, m) in [(5u64, 2u32, 2u32), (3, 3, 1), (3, 3, 2)] {
            let c = ctx(p, n);
            let f = phi(c, m).unwrap();
            let r = f.rem_monic(&omega(c, m - 1).unwrap()).unwrap();
            assert_eq!(poly_values(&r), alloc::vec![p % c.modulus()]);
        }
    }

    #[test]
    fn omega_pm_product_identity() {
        // X * tilde+ * tilde- = omega_m
        for (p, m) in [(3u64, 2u32), (3, 3), (5, 2)] {
            let c = ctx(p, 2);
            let tp = struct_poly(c, StructKind::TildePlus, m).unwrap().poly;
            let tm = struct_poly(c, StructKind::TildeMinus, m).unwrap().poly;
            let lhs = Poly::x(c).mul(&tp).mul(&tm);
            assert_eq!(lhs, omega(c, m).unwrap());
        }
    }

    #[test]
    fn omega_pm_small_cases() {
        let c = ctx(3, 2);
        let tm = struct_poly(c, StructKind::TildeMinus, 2).unwrap();
        assert_eq!(poly_values(&tm.poly), vec![3, 3, 1]); // Phi_1
        let tp = struct_poly(c, StructKind::TildePlus, 2).unwrap();
        assert_eq!(tp.poly, phi(c, 2).unwrap());
    }

    #[test]
    fn project_examples() {
        let c = ctx(3, 2);
        // project(omega_m viewed at level m+1) = 0
        let om1 = Elem::new(omega(c, 1).unwrap(), 2).unwrap();
        assert!(om1.project(1).unwrap().is_zero());
        // project(1) = 1
        let one = Elem::one(c, 2);
        assert_eq!(one.project(1).unwrap(), Elem::one(c, 1));
    }

    #[test]
    fn project_after_norm_is_mult_by_p() {
        let c = ctx(3, 2);
        for m in 0..=2u32 {
            for seed in 0..5u64 {
                let x = Elem::from_residues(
                    c,
                    m,
                    &alloc::vec::Vec::from_iter((0..3u64.pow(m)).map(|i| (seed + 2 * i) % 9)),
                )
                .unwrap();
                let lifted = x.norm_to_next().unwrap();
                let back = lifted.project(m).unwrap();
                assert_eq!(back, x.scale(&c.from_u64(3)));
            }
        }
    }

    #[test]
    fn norm_of_unit_is_phi() {
        let c = ctx(3, 2);
        let one = Elem::one(c, 0);
        let xi1 = one.norm_to_next().unwrap();
        assert_eq!(xi1.poly(), &phi(c, 1).unwrap());
        let zero = Elem::zero(c, 0);
        assert!(zero.norm_to_next().unwrap().is_zero());
    }

    #[test]
    fn norm_is_lift_independent() {
        let c = ctx(3, 2);
        let x = Elem::from_residues(c, 0, &[4]).unwrap();
        // two lifts of x to level-0 polynomials differing by omega_0 * X^3
        let lift1 = x.poly().clone();
        let lift2 = lift1.add(&omega(c, 0).unwrap().mul(&Poly::x(c).pow(3)));
        let a = Elem::new(lift1.mul(&phi(c, 1).unwrap()), 1).unwrap();
        let b = Elem::new(lift2.mul(&phi(c, 1).unwrap()), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn involution_examples() {
        let c = ctx(3, 2);
        let g = Elem::gamma(c, 1).unwrap();
        // involute(gamma) = gamma^2 at p=3, m=1
        assert_eq!(g.involute().unwrap(), g.mul(&g));
        // involution is an involution and fixes constants
        for seed in 0..6u64 {
            let x = Elem::from_residues(c, 2, &[seed, 3 * seed % 9, 7, 1, 2, seed])
                .unwrap();
            assert_eq!(x.involute().unwrap().involute().unwrap(), x);
        }
        let k = Elem::from_residues(c, 2, &[5]).unwrap();
        assert_eq!(k.involute().unwrap(), k);
    }

    #[test]
    fn involution_matches_direct_substitution() {
        // second route: substitute gamma -> gamma^{p^m - 1} directly, i.e.
        // X -> (1+X)^{p^m - 1} - 1 reduced mod omega_m
        let c = ctx(3, 2);
        let m = 2u32;
        let d = ring_degree(c, m).unwrap() as u64;
        let gamma_inv = Elem::gamma(c, m).unwrap().pow(d - 1);
        for seed in 0..6u64 {
            let x = Elem::from_residues(c, m, &[seed, 1, 4, 0, seed % 3, 2, 8, 0, 1]).unwrap();
            let mut direct = Elem::zero(c, m);
            for (i, co) in x.poly().coeffs().iter().enumerate() {
                let xi = gamma_inv.sub(&Elem::one(c, m)).pow(i as u64);
                direct = direct.add(&xi.scale(co));
            }
            assert_eq!(x.involute().unwrap(), direct, "seed {seed}");
        }
    }

    #[test]
    fn eval_char_examples() {
        let c = ctx(3, 2);
        // eval_char(X, 0) = 0
        let x = Elem::new(Poly::x(c), 1).unwrap();
        assert!(x.eval_char(0).unwrap().is_zero());
        // eval_char(xi_1(1), 1) = 0: Phi_1 dies in its own quotient
        let xi1 = Elem::one(c, 0).norm_to_next().unwrap();
        assert!(xi1.eval_char(1).unwrap().is_zero());
        // eval_char(gamma, j) has multiplicative order p^j
        for j in 0..=2u32 {
            let g = Elem::gamma(c, 2).unwrap();
            let v = g.eval_char(j).unwrap();
            assert_eq!(v.multiplicative_order(100), Some(3u64.pow(j)));
        }
    }

    #[test]
    fn monic_divide_examples() {
        let c = ctx(3, 2);
        let (q, r, exact) = monic_divide(&omega(c, 2).unwrap(), &omega(c, 1).unwrap()).unwrap();
        assert!(exact);
        assert_eq!(q, phi(c, 2).unwrap());
        assert!(r.is_zero());
        let (q, r, exact) = monic_divide(&omega(c, 1).unwrap(), &phi(c, 1).unwrap()).unwrap();
        assert!(exact);
        assert_eq!(q, Poly::x(c));
        assert!(r.is_zero());
        let f = Poly::from_residues(c, &[1, 1]); // X + 1
        let (q, r, exact) = monic_divide(&f, &Poly::x(c)).unwrap();
        assert!(!exact);
        assert_eq!(q, Poly::one(c));
        assert_eq!(r, Poly::one(c));
    }

    #[test]
    fn gamma_basis_roundtrip() {
        let c = ctx(5, 2);
        let f: Poly = Poly::from_residues(c, &[3, 0, 24, 1, 7]);
        let g = f.to_gamma_basis();
        assert_eq!(Poly::from_gamma_basis(c, &g), f);
    }

    #[test]
    fn unit_inverse_works() {
        let c = ctx(3, 3);
        let u = Elem::from_residues(c, 1, &[2, 3, 5]).unwrap();
        assert!(u.is_unit());
        let inv = u.unit_inverse().unwrap();
        assert_eq!(u.mul(&inv), Elem::one(c, 1));
        let nu = Elem::from_residues(c, 1, &[3, 1]).unwrap();
        assert!(!nu.is_unit());
        assert!(nu.unit_inverse().is_none());
    }

    #[test]
    fn level_cap_enforced() {
        let c = ctx(5, 1);
        assert!(omega(c, 6).is_err()); // 5^6 > 3125
        assert!(omega(c, 5).is_ok()); // 5^5 = 3125
    }
}
