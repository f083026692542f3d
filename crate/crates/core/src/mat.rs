//! 2x2 matrices over the Iwasawa truncations: the eigenvalue matrix B, the
//! level matrices C_m with their adjugates, and untruncated polynomial
//! matrices for symbolic product identities.

use crate::error::{contract_err, input_err, Result};
use crate::poly::{Poly, Scalar};
use crate::ring::{phi_in, IwasawaElem};
use crate::scalar::PAdicScalar;

/// Untruncated 2x2 polynomial matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMat2<S: Scalar = PAdicScalar> {
    pub a: Poly<S>,
    pub b: Poly<S>,
    pub c: Poly<S>,
    pub d: Poly<S>,
}

impl<S: Scalar> PolyMat2<S> {
    pub fn identity(ctx: S::Ctx) -> Self {
        PolyMat2 {
            a: Poly::one(ctx),
            b: Poly::zero(ctx),
            c: Poly::zero(ctx),
            d: Poly::one(ctx),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        PolyMat2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn apply(&self, v: &(Poly<S>, Poly<S>)) -> (Poly<S>, Poly<S>) {
        (
            self.a.mul(&v.0).add(&self.b.mul(&v.1)),
            self.c.mul(&v.0).add(&self.d.mul(&v.1)),
        )
    }

    pub fn det(&self) -> Poly<S> {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn scale(&self, s: &Poly<S>) -> Self {
        PolyMat2 {
            a: self.a.mul(s),
            b: self.b.mul(s),
            c: self.c.mul(s),
            d: self.d.mul(s),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyMat2 {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            c: self.c.sub(&o.c),
            d: self.d.sub(&o.d),
        }
    }

    pub fn entries(&self) -> [&Poly<S>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn pow(&self, e: u32) -> Self {
        let ctx = self.a.ctx();
        let mut acc = Self::identity(ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// B = [[ap, 1], [-p, 0]], det = p.
pub fn poly_mat_b<S: Scalar>(ctx: S::Ctx, ap: &S) -> PolyMat2<S> {
    let p = S::padic_ctx(ctx).p();
    PolyMat2 {
        a: Poly::constant(ap.clone()),
        b: Poly::one(ctx),
        c: Poly::constant(S::from_residue(ctx, p).neg()),
        d: Poly::zero(ctx),
    }
}

/// adj(B) = [[0, -1], [p, ap]]; B * adj(B) = p * I.
pub fn poly_mat_b_adj<S: Scalar>(ctx: S::Ctx, ap: &S) -> PolyMat2<S> {
    let p = S::padic_ctx(ctx).p();
    PolyMat2 {
        a: Poly::zero(ctx),
        b: Poly::one(ctx).neg(),
        c: Poly::constant(S::from_residue(ctx, p)),
        d: Poly::constant(ap.clone()),
    }
}

/// C_m = [[ap, 1], [-Phi_m, 0]], det = Phi_m.
pub fn poly_mat_c<S: Scalar>(ctx: S::Ctx, ap: &S, m: u32) -> Result<PolyMat2<S>> {
    if m == 0 {
        return Err(input_err!("C_m requires m >= 1"));
    }
    Ok(PolyMat2 {
        a: Poly::constant(ap.clone()),
        b: Poly::one(ctx),
        c: phi_in::<S>(ctx, m)?.neg(),
        d: Poly::zero(ctx),
    })
}

/// adj(C_m) = [[0, -1], [Phi_m, ap]]; C_m * adj(C_m) = Phi_m * I.
pub fn poly_mat_c_adj<S: Scalar>(ctx: S::Ctx, ap: &S, m: u32) -> Result<PolyMat2<S>> {
    if m == 0 {
        return Err(input_err!("adj(C_m) requires m >= 1"));
    }
    Ok(PolyMat2 {
        a: Poly::zero(ctx),
        b: Poly::one(ctx).neg(),
        c: phi_in::<S>(ctx, m)?,
        d: Poly::constant(ap.clone()),
    })
}

/// 2x2 matrix over Lambda_{m,n}; all entries share level and precision.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat2<S: Scalar = PAdicScalar> {
    pub a: IwasawaElem<S>,
    pub b: IwasawaElem<S>,
    pub c: IwasawaElem<S>,
    pub d: IwasawaElem<S>,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(a: IwasawaElem<S>, b: IwasawaElem<S>, c: IwasawaElem<S>, d: IwasawaElem<S>) -> Result<Self> {
        let lv = a.level();
        if b.level() != lv || c.level() != lv || d.level() != lv {
            return Err(input_err!("matrix entries at mixed levels"));
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn from_poly(m: &PolyMat2<S>, level: u32) -> Result<Self> {
        Self::new(
            IwasawaElem::new(m.a.clone(), level)?,
            IwasawaElem::new(m.b.clone(), level)?,
            IwasawaElem::new(m.c.clone(), level)?,
            IwasawaElem::new(m.d.clone(), level)?,
        )
    }

    pub fn level(&self) -> u32 {
        self.a.level()
    }

    pub fn apply(&self, v: &(IwasawaElem<S>, IwasawaElem<S>)) -> (IwasawaElem<S>, IwasawaElem<S>) {
        (
            self.a.mul(&v.0).add(&self.b.mul(&v.1)),
            self.c.mul(&v.0).add(&self.d.mul(&v.1)),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn det(&self) -> IwasawaElem<S> {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }
}

/// The level-m matrix B with its determinant contract checked.
pub fn mat_b(ctx: <PAdicScalar as Scalar>::Ctx, ap: &PAdicScalar, level: u32) -> Result<Mat2> {
    let m = Mat2::from_poly(&poly_mat_b(ctx, ap), level)?;
    let p_elem = IwasawaElem::from_residues(ctx, level, &[ctx.p()])?;
    if m.det() != p_elem {
        return Err(contract_err!("det(B) != p"));
    }
    Ok(m)
}

/// The level matrix C_m with det C_m = Phi_m checked on construction.
pub fn mat_c(ctx: <PAdicScalar as Scalar>::Ctx, ap: &PAdicScalar, m: u32, level: u32) -> Result<Mat2> {
    let cm = Mat2::from_poly(&poly_mat_c(ctx, ap, m)?, level)?;
    let phim = IwasawaElem::new(crate::ring::phi(ctx, m)?, level)?;
    if cm.det() != phim {
        return Err(contract_err!("det(C_{m}) != Phi_{m}"));
    }
    Ok(cm)
}

/// The adjugate C'_m at a level, with C_m * C'_m = Phi_m * I checked.
pub fn adjugate_c(ctx: <PAdicScalar as Scalar>::Ctx, ap: &PAdicScalar, m: u32, level: u32) -> Result<Mat2> {
    let cm = mat_c(ctx, ap, m, level)?;
    let adj = Mat2::from_poly(&poly_mat_c_adj(ctx, ap, m)?, level)?;
    let prod = cm.mul(&adj);
    let phim = IwasawaElem::new(crate::ring::phi(ctx, m)?, level)?;
    let want = Mat2 {
        a: phim.clone(),
        b: IwasawaElem::zero(ctx, level),
        c: IwasawaElem::zero(ctx, level),
        d: phim,
    };
    if prod != want {
        return Err(contract_err!("C_m * adj(C_m) != Phi_m * I"));
    }
    Ok(adj)
}
