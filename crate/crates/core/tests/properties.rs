//! Randomized algebraic invariants: ring axioms for the scalar towers,
//! valuation additivity, homomorphism laws for the involution and character
//! evaluation, exactness of monic division, and the projection/norm
//! interplay.

use proptest::prelude::*;
use sharpflat_core::poly::Poly;
use sharpflat_core::ring::{omega, phi, IwasawaElem};
use sharpflat_core::scalar::{quad_roots, PAdicScalar, PadicCtx, QuadCtx, Valuation};

type Elem = IwasawaElem<PAdicScalar>;

fn ctx35() -> impl Strategy<Value = PadicCtx> {
    (prop_oneof![Just(3u64), Just(5u64)], 1u32..=3).prop_map(|(p, n)| PadicCtx::new(p, n).unwrap())
}

fn scalar(ctx: PadicCtx) -> impl Strategy<Value = PAdicScalar> {
    (0u64..ctx.modulus()).prop_map(move |v| ctx.from_u64(v))
}

proptest! {
    #[test]
    fn padic_ring_axioms((a, b, c) in ctx35().prop_flat_map(|ctx| {
        (scalar(ctx), scalar(ctx), scalar(ctx))
    })) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&a.neg()), a.ctx().zero());
    }

    #[test]
    fn valuation_additive_under_product((a, b) in ctx35().prop_flat_map(|ctx| {
        (scalar(ctx), scalar(ctx))
    })) {
        if let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) {
            if va + vb < a.ctx().prec() {
                prop_assert_eq!(a.mul(&b).valuation(), Valuation::Finite(va + vb));
            }
        }
    }

    #[test]
    fn quad_ring_axioms((ctx, k, u1, v1, u2, v2, u3, v3) in ctx35().prop_flat_map(|ctx| {
        let m = ctx.modulus();
        (Just(ctx), 0u64..3, 0..m, 0..m, 0..m, 0..m, 0..m, 0..m)
    })) {
        let ap = ctx.from_u64((k * ctx.p()) % ctx.modulus());
        let q = QuadCtx::new(ap).unwrap();
        let x = q.from_parts(ctx.from_u64(u1), ctx.from_u64(v1));
        let y = q.from_parts(ctx.from_u64(u2), ctx.from_u64(v2));
        let z = q.from_parts(ctx.from_u64(u3), ctx.from_u64(v3));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        // conjugation is a ring homomorphism
        prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        // minimal polynomial annihilates both roots
        let (alpha, beta) = quad_roots(ap).unwrap();
        for r in [alpha, beta] {
            let lhs = r.mul(&r).sub(&r.scale(&ap)).add(&q.from_base(&ctx.from_u64(ctx.p())));
            prop_assert!(lhs.is_zero());
        }
    }

    #[test]
    fn monic_division_reconstructs((ctx, m, coeffs) in ctx35().prop_flat_map(|ctx| {
        (Just(ctx), 1u32..=2, proptest::collection::vec(0u64..ctx.modulus(), 1..20))
    })) {
        let f = Poly::from_residues(ctx, &coeffs);
        let g = phi(ctx, m).unwrap();
        let (q, r) = f.monic_divide(&g).unwrap();
        prop_assert!(r.degree().map_or(true, |d| d < g.degree().unwrap()));
        prop_assert_eq!(q.mul(&g).add(&r), f);
    }

    #[test]
    fn involution_is_ring_involution((ctx, m, ca, cb) in ctx35().prop_flat_map(|ctx| {
        (Just(ctx), 1u32..=2, proptest::collection::vec(0u64..ctx.modulus(), 1..9),
         proptest::collection::vec(0u64..ctx.modulus(), 1..9))
    })) {
        let a = Elem::from_residues(ctx, m, &ca).unwrap();
        let b = Elem::from_residues(ctx, m, &cb).unwrap();
        prop_assert_eq!(a.involute().unwrap().involute().unwrap(), a.clone());
        prop_assert_eq!(
            a.mul(&b).involute().unwrap(),
            a.involute().unwrap().mul(&b.involute().unwrap())
        );
        prop_assert_eq!(
            a.add(&b).involute().unwrap(),
            a.involute().unwrap().add(&b.involute().unwrap())
        );
    }

    #[test]
    fn eval_char_is_multiplicative((ctx, m, j, ca, cb) in ctx35().prop_flat_map(|ctx| {
        (Just(ctx), 2u32..=2, 0u32..=2, proptest::collection::vec(0u64..ctx.modulus(), 1..9),
         proptest::collection::vec(0u64..ctx.modulus(), 1..9))
    })) {
        let a = Elem::from_residues(ctx, m, &ca).unwrap();
        let b = Elem::from_residues(ctx, m, &cb).unwrap();
        let lhs = a.mul(&b).eval_char(j).unwrap();
        let rhs = a.eval_char(j).unwrap().mul(&b.eval_char(j).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn project_norm_is_mult_by_p((ctx, m, coeffs) in ctx35().prop_flat_map(|ctx| {
        (Just(ctx), 0u32..=2, proptest::collection::vec(0u64..ctx.modulus(), 1..9))
    })) {
        let x = Elem::from_residues(ctx, m, &coeffs).unwrap();
        let back = x.norm_to_next().unwrap().project(m).unwrap();
        prop_assert_eq!(back, x.scale(&ctx.from_u64(ctx.p())));
    }

    #[test]
    fn omega_factors_through_phi((ctx, m) in ctx35().prop_flat_map(|ctx| (Just(ctx), 1u32..=3))) {
        prop_assume!(sharpflat_core::ring::ring_degree(ctx, m).is_ok());
        let (q, r) = omega(ctx, m).unwrap().monic_divide(&omega(ctx, m - 1).unwrap()).unwrap();
        prop_assert!(r.is_zero());
        prop_assert_eq!(q, phi(ctx, m).unwrap());
    }

    #[test]
    fn factorization_roundtrip_property((ctx, k, m, cs, cf) in ctx35().prop_flat_map(|ctx| {
        (Just(ctx), 0u64..2, 1u32..=2,
         proptest::collection::vec(0u64..ctx.modulus(), 1..9),
         proptest::collection::vec(0u64..ctx.modulus(), 1..9))
    })) {
        use sharpflat_core::sprung::{decompose_class, generate_seq, in_kernel, ElemPair};
        let ap = ctx.from_u64(k * ctx.p());
        let s = Elem::from_residues(ctx, m, &cs).unwrap();
        let f = Elem::from_residues(ctx, m, &cf).unwrap();
        let seq = generate_seq(&s, &f, ap).unwrap();
        prop_assert!(seq.verify_norm_relation().is_ok());
        let out = decompose_class(&seq).unwrap();
        let diff = out.sub(&ElemPair::new(s, f));
        prop_assert!(in_kernel(&ap, &diff).unwrap());
    }
}
