//! Exact scalar arithmetic: residues in Z/p^N with p-adic valuation, the
//! quadratic extension by a root of the Hecke polynomial x^2 - ap*x + p, and
//! denominator-tracked scaled scalars.
//!
//! All values are immutable; binary operations require matching contexts and
//! panic on mismatch (mixing moduli is a programming error, not a data error).

use crate::error::{input_err, precision_err, Error, Result};
use core::fmt;

/// p-adic valuation, with a separate marker for the zero class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinity, Infinity) => core::cmp::Ordering::Equal,
            (Infinity, Finite(_)) => core::cmp::Ordering::Greater,
            (Finite(_), Infinity) => core::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// Shared context for Z/p^N arithmetic: an odd prime p >= 3 and the working
/// precision exponent N >= 1.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PadicCtx {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl fmt::Debug for PadicCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.prec)
    }
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicCtx {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p < 3 || !is_small_prime(p) {
            return Err(input_err!("p must be an odd prime >= 3, got {p}"));
        }
        if prec == 0 {
            return Err(input_err!("precision exponent must be >= 1"));
        }
        let mut modulus = 1u64;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .ok_or_else(|| input_err!("p^N = {p}^{prec} overflows the scalar width"))?;
        }
        if modulus >= (1u64 << 62) {
            return Err(input_err!("p^N = {p}^{prec} exceeds the supported range"));
        }
        Ok(PadicCtx { p, prec, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, lower precision.
    pub fn reduce(&self, prec: u32) -> Result<Self> {
        if prec == 0 || prec > self.prec {
            return Err(input_err!(
                "cannot reduce Z/{}^{} to precision {prec}",
                self.p,
                self.prec
            ));
        }
        PadicCtx::new(self.p, prec)
    }

    pub fn zero(&self) -> PAdicScalar {
        PAdicScalar { value: 0, ctx: *self }
    }

    pub fn one(&self) -> PAdicScalar {
        PAdicScalar { value: 1 % self.modulus, ctx: *self }
    }

    pub fn from_u64(&self, v: u64) -> PAdicScalar {
        PAdicScalar { value: v % self.modulus, ctx: *self }
    }

    pub fn from_i64(&self, v: i64) -> PAdicScalar {
        let m = self.modulus as i128;
        let r = ((v as i128 % m) + m) % m;
        PAdicScalar { value: r as u64, ctx: *self }
    }
}

/// A residue class in Z/p^N. The canonical representative is stored.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PAdicScalar {
    value: u64,
    ctx: PadicCtx,
}

impl fmt::Debug for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.ctx.p, self.ctx.prec)
    }
}

impl PAdicScalar {
    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn assert_ctx(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "mixed Z/p^N contexts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let s = self.value + other.value;
        let m = self.ctx.modulus;
        PAdicScalar { value: if s >= m { s - m } else { s }, ctx: self.ctx }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let m = self.ctx.modulus;
        let s = self.value + m - other.value;
        PAdicScalar { value: if s >= m { s - m } else { s }, ctx: self.ctx }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let prod = (self.value as u128 * other.value as u128) % self.ctx.modulus as u128;
        PAdicScalar { value: prod as u64, ctx: self.ctx }
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.modulus;
        PAdicScalar { value: if self.value == 0 { 0 } else { m - self.value }, ctx: self.ctx }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Largest k <= N with p^k | value; the zero class returns the infinity
    /// marker.
    pub fn valuation(&self) -> Valuation {
        if self.value == 0 {
            return Valuation::Infinity;
        }
        let mut v = 0u32;
        let mut x = self.value;
        while x % self.ctx.p == 0 {
            x /= self.ctx.p;
            v += 1;
        }
        Valuation::Finite(v)
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.ctx.p != 0
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        // extended Euclid on (value, p^N)
        let (mut r0, mut r1) = (self.ctx.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.ctx.modulus as i128;
        let inv = ((t0 % m) + m) % m;
        Some(PAdicScalar { value: inv as u64, ctx: self.ctx })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// The same residue read at lower precision.
    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        let ctx = self.ctx.reduce(prec)?;
        Ok(ctx.from_u64(self.value))
    }

    /// Exact division by p; fails unless p | value. The result lives one
    /// precision level down.
    pub fn div_p_exact(&self) -> Result<Self> {
        if self.value % self.ctx.p != 0 {
            return Err(precision_err!("residue {} not divisible by p", self.value));
        }
        let ctx = self.ctx.reduce(self.ctx.prec - 1).map_err(|_| {
            Error::Precision(alloc::string::String::from("division by p at precision 1 exhausts the value"))
        })?;
        Ok(ctx.from_u64(self.value / self.ctx.p))
    }
}

/// Context for the quadratic extension `Z/p^N[alpha]`, alpha^2 = ap*alpha - p.
/// Requires val(ap) >= 1 (the supersingular case).
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct QuadCtx {
    base: PadicCtx,
    ap: u64,
}

impl fmt::Debug for QuadCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}[x]/(x^2-{}x+{})", self.base.p(), self.base.prec(), self.ap, self.base.p())
    }
}

impl QuadCtx {
    pub fn new(ap: PAdicScalar) -> Result<Self> {
        if ap.is_unit() {
            return Err(input_err!(
                "ap = {} is a p-adic unit; the ordinary case is unsupported",
                ap.value()
            ));
        }
        Ok(QuadCtx { base: ap.ctx(), ap: ap.value() })
    }

    pub fn base(&self) -> PadicCtx {
        self.base
    }

    pub fn ap(&self) -> PAdicScalar {
        self.base.from_u64(self.ap)
    }

    pub fn reduce(&self, prec: u32) -> Result<Self> {
        let base = self.base.reduce(prec)?;
        Ok(QuadCtx { base, ap: self.ap % base.modulus() })
    }

    pub fn zero(&self) -> QuadScalar {
        QuadScalar { re: 0, im: 0, ctx: *self }
    }

    pub fn one(&self) -> QuadScalar {
        QuadScalar { re: 1 % self.base.modulus(), im: 0, ctx: *self }
    }

    pub fn from_base(&self, s: &PAdicScalar) -> QuadScalar {
        assert_eq!(s.ctx(), self.base, "mixed contexts");
        QuadScalar { re: s.value(), im: 0, ctx: *self }
    }

    pub fn from_parts(&self, re: PAdicScalar, im: PAdicScalar) -> QuadScalar {
        assert_eq!(re.ctx(), self.base);
        assert_eq!(im.ctx(), self.base);
        QuadScalar { re: re.value(), im: im.value(), ctx: *self }
    }

    /// The distinguished root alpha of x^2 - ap*x + p.
    pub fn alpha(&self) -> QuadScalar {
        QuadScalar { re: 0, im: 1 % self.base.modulus(), ctx: *self }
    }

    /// The conjugate root beta = ap - alpha.
    pub fn beta(&self) -> QuadScalar {
        self.alpha().conj()
    }

    /// The extension uniformizer pi_E = alpha - beta = 2*alpha - ap;
    /// pi_E^2 = ap^2 - 4p has p-valuation exactly 1.
    pub fn pi_e(&self) -> QuadScalar {
        self.alpha().sub(&self.beta())
    }

    /// The unit w = (4p - ap^2)/p, so that pi_E^2 = -p*w. Computed by exact
    /// integer division of canonical representatives.
    fn unit_w(&self) -> u64 {
        let p = self.base.p();
        let m = self.base.modulus();
        let k = self.ap / p; // exact: val(ap) >= 1
        // 4 - p*k^2 mod p^N
        let pk2 = (p as u128 * k as u128 % m as u128) as u64;
        let pk2 = (pk2 as u128 * k as u128 % m as u128) as u64;
        (4 % m + m - pk2) % m
    }
}

/// Element u + v*alpha of `Z/p^N[alpha]`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct QuadScalar {
    re: u64,
    im: u64,
    ctx: QuadCtx,
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}a", self.re, self.im)
    }
}

impl QuadScalar {
    pub fn ctx(&self) -> QuadCtx {
        self.ctx
    }

    pub fn re(&self) -> PAdicScalar {
        self.ctx.base.from_u64(self.re)
    }

    pub fn im(&self) -> PAdicScalar {
        self.ctx.base.from_u64(self.im)
    }

    fn assert_ctx(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "mixed quadratic contexts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let m = self.ctx.base.modulus();
        QuadScalar {
            re: (self.re + other.re) % m,
            im: (self.im + other.im) % m,
            ctx: self.ctx,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let m = self.ctx.base.modulus();
        QuadScalar {
            re: (self.re + m - other.re) % m,
            im: (self.im + m - other.im) % m,
            ctx: self.ctx,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.base.modulus();
        QuadScalar {
            re: if self.re == 0 { 0 } else { m - self.re },
            im: if self.im == 0 { 0 } else { m - self.im },
            ctx: self.ctx,
        }
    }

    /// (u1 + v1 a)(u2 + v2 a) with a^2 = ap*a - p.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let m = self.ctx.base.modulus() as u128;
        let (u1, v1) = (self.re as u128, self.im as u128);
        let (u2, v2) = (other.re as u128, other.im as u128);
        let p = self.ctx.base.p() as u128;
        let ap = self.ctx.ap as u128;
        let v1v2 = v1 * v2 % m;
        let re = (u1 * u2 % m + (m - p % m) * v1v2 % m) % m;
        let im = (u1 * v2 % m + u2 * v1 % m + ap * v1v2 % m) % m;
        QuadScalar { re: re as u64, im: im as u64, ctx: self.ctx }
    }

    /// The nontrivial ring automorphism alpha -> beta.
    pub fn conj(&self) -> Self {
        let m = self.ctx.base.modulus() as u128;
        let re = (self.re as u128 + self.ctx.ap as u128 * self.im as u128) % m;
        let im = if self.im == 0 { 0 } else { m as u64 - self.im };
        QuadScalar { re: re as u64, im, ctx: self.ctx }
    }

    /// Norm to the base ring: x * conj(x) = u^2 + ap*u*v + p*v^2.
    pub fn norm(&self) -> PAdicScalar {
        let prod = self.mul(&self.conj());
        debug_assert_eq!(prod.im, 0);
        self.ctx.base.from_u64(prod.re)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Units are exactly the elements whose norm is a p-adic unit; with
    /// val(ap) >= 1 this reduces to the re part being a unit.
    pub fn is_unit(&self) -> bool {
        self.re % self.ctx.base.p() != 0
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        let ninv = n.inverse()?;
        Some(self.conj().scale(&ninv))
    }

    pub fn scale(&self, s: &PAdicScalar) -> Self {
        self.mul(&self.ctx.from_base(s))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        let ctx = self.ctx.reduce(prec)?;
        let m = ctx.base.modulus();
        Ok(QuadScalar { re: self.re % m, im: self.im % m, ctx })
    }

    /// pi_E-adic valuation in half-units of p: val(p) = 2, val(alpha) = 1.
    pub fn pi_valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let mut v = 0u32;
        let mut x = *self;
        loop {
            match x.div_pi_exact() {
                Ok(y) => {
                    v += 1;
                    x = y;
                    if x.is_zero() {
                        // divided down to the zero class at reduced precision
                        return Valuation::Finite(v);
                    }
                }
                Err(_) => return Valuation::Finite(v),
            }
        }
    }

    /// Whether multiplication by pi_E reaches this element.
    pub fn divisible_by_pi(&self) -> bool {
        self.re % self.ctx.base.p() == 0
    }

    /// Exact division by pi_E = 2*alpha - ap. The quotient is well defined
    /// one precision level down.
    pub fn div_pi_exact(&self) -> Result<Self> {
        let p = self.ctx.base.p();
        if self.re % p != 0 {
            return Err(precision_err!("quadratic value not divisible by pi_E"));
        }
        if self.ctx.base.prec() == 1 {
            return Err(precision_err!("division by pi_E at precision 1 exhausts the value"));
        }
        let ctx1 = self.ctx.reduce(self.ctx.base.prec() - 1)?;
        let m1 = ctx1.base.modulus();
        // pi_E*(u + v a) = (-ap*u - 2p*v) + (2u + ap*v) a; invert the 2x2 map.
        // With ap = p*k and w = 4 - p*k^2 (a unit): u = (k*b_re + 2*b_im)/w,
        // v = -((b_re/p)*2... solved below with exact integer steps.
        let k = self.ctx.ap / p;
        let w = self.ctx.unit_w() % m1;
        let winv = ctx1.base.from_u64(w).inverse().expect("w is a unit").value();
        let b_re = self.re;
        let b_im = self.im;
        // u = (k*b_re + 2*b_im) * w^{-1}
        let num_u = (k as u128 * b_re as u128 + 2 * b_im as u128) % m1 as u128;
        let u = (num_u * winv as u128 % m1 as u128) as u64;
        // v = -( (2*b_re)/p + k*b_im ) * w^{-1}
        let two_bre_over_p = 2 * (b_re / p) % m1; // exact: p | b_re
        let num_v = (two_bre_over_p as u128 + k as u128 * b_im as u128) % m1 as u128;
        let v = ((m1 as u128 - num_v * winv as u128 % m1 as u128) % m1 as u128) as u64;
        let q = QuadScalar { re: u, im: v, ctx: ctx1 };
        debug_assert_eq!(q.mul(&ctx1.pi_e()), self.reduce_prec(ctx1.base.prec())?);
        Ok(q)
    }

    /// Exact division by p (both coordinates), one precision level down.
    pub fn div_p_exact(&self) -> Result<Self> {
        let p = self.ctx.base.p();
        if self.re % p != 0 || self.im % p != 0 {
            return Err(precision_err!("quadratic value not divisible by p"));
        }
        if self.ctx.base.prec() == 1 {
            return Err(precision_err!("division by p at precision 1 exhausts the value"));
        }
        let ctx1 = self.ctx.reduce(self.ctx.base.prec() - 1)?;
        let m1 = ctx1.base.modulus();
        Ok(QuadScalar { re: (self.re / p) % m1, im: (self.im / p) % m1, ctx: ctx1 })
    }
}

/// The roots (alpha, beta) of x^2 - ap*x + p for a non-unit ap.
pub fn quad_roots(ap: PAdicScalar) -> Result<(QuadScalar, QuadScalar)> {
    let ctx = QuadCtx::new(ap)?;
    Ok((ctx.alpha(), ctx.beta()))
}

/// A quadratic value together with a tracked denominator exponent d >= 0 in
/// half-units of pi_E: the value represented is body * pi_E^{-d}. Integral
/// p-power denominators correspond to even d.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ScaledScalar {
    body: QuadScalar,
    denom: u32,
}

impl ScaledScalar {
    pub fn from_quad(body: QuadScalar) -> Self {
        ScaledScalar { body, denom: 0 }.normalized()
    }

    pub fn with_denom(body: QuadScalar, denom: u32) -> Self {
        ScaledScalar { body, denom }.normalized()
    }

    /// 1/p = -w * pi_E^{-2} where w = (4p - ap^2)/p.
    pub fn p_inverse(ctx: QuadCtx) -> Self {
        let w = ctx.base().from_u64(ctx.unit_w());
        ScaledScalar { body: ctx.from_base(&w.neg()), denom: 2 }
    }

    /// 1/(alpha - beta) = pi_E^{-1}.
    pub fn pi_inverse(ctx: QuadCtx) -> Self {
        ScaledScalar { body: ctx.one(), denom: 1 }
    }

    pub fn body(&self) -> QuadScalar {
        self.body
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom
    }

    /// N_body - ceil(d/2); the number of trusted p-adic digits of the value.
    pub fn effective_precision(&self) -> i64 {
        self.body.ctx().base().prec() as i64 - self.denom.div_ceil(2) as i64
    }

    pub fn is_exhausted(&self) -> bool {
        self.effective_precision() <= 0
    }

    /// Strip denominator factors that can be removed without losing effective
    /// precision: p-steps while d >= 2, then a single pi_E-step when d is odd.
    fn normalized(mut self) -> Self {
        loop {
            if self.body.is_zero() {
                self.denom = 0;
                return self;
            }
            if self.denom >= 2 {
                if let Ok(q) = self.body.div_p_exact() {
                    // body/p at one lower precision; pi_E^2 = -p*w, so
                    // stripping p^1 from the denominator multiplies by -w^{-1}.
                    let ctx1 = q.ctx();
                    let w = ctx1.base().from_u64(ctx1.unit_w());
                    let winv = w.inverse().expect("w is a unit");
                    self.body = q.scale(&winv).neg();
                    self.denom -= 2;
                    continue;
                }
            }
            if self.denom % 2 == 1 {
                if let Ok(q) = self.body.div_pi_exact() {
                    self.body = q;
                    self.denom -= 1;
                    continue;
                }
            }
            return self;
        }
    }

    fn align(a: &Self, b: &Self) -> Result<(QuadScalar, QuadScalar, u32)> {
        // bring both to a common precision, then to a common denominator
        let prec = a.body.ctx().base().prec().min(b.body.ctx().base().prec());
        let ab = a.body.reduce_prec(prec)?;
        let bb = b.body.reduce_prec(prec)?;
        let d = a.denom.max(b.denom);
        let pie = ab.ctx().pi_e();
        let ab = ab.mul(&pie.pow((d - a.denom) as u64));
        let bb = bb.mul(&pie.pow((d - b.denom) as u64));
        Ok((ab, bb, d))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b, d) = Self::align(self, other)?;
        let out = ScaledScalar { body: a.add(&b), denom: d }.normalized();
        out.check_precision()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let prec = self.body.ctx().base().prec().min(other.body.ctx().base().prec());
        let a = self.body.reduce_prec(prec)?;
        let b = other.body.reduce_prec(prec)?;
        let out = ScaledScalar { body: a.mul(&b), denom: self.denom + other.denom }.normalized();
        out.check_precision()
    }

    pub fn neg(&self) -> Self {
        ScaledScalar { body: self.body.neg(), denom: self.denom }
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    fn check_precision(self) -> Result<Self> {
        if self.is_exhausted() && !self.body.is_zero() {
            Err(precision_err!(
                "effective precision {} <= 0 (denominator exponent {})",
                self.effective_precision(),
                self.denom
            ))
        } else {
            Ok(self)
        }
    }
}

/// Product of two scaled scalars (spec-level entry point).
pub fn scaled_mul(a: &ScaledScalar, b: &ScaledScalar) -> Result<ScaledScalar> {
    a.mul(b)
}
