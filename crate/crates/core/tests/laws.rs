//! Property-based checks of the algebraic laws the engine relies on.

use autalg::coeffs::{FieldSpec, Scalar};
use autalg::endo::Endo;
use autalg::poly::{Flavor, Mono, Poly, PolyCtx};
use autalg::text::{format_poly, parse_expr};
use autalg::word::{GenWord, Generator};
use proptest::prelude::*;

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Q),
        Just(FieldSpec::Fp(7)),
        Just(FieldSpec::Fp(101)),
    ]
}

fn arb_scalar(field: FieldSpec) -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9).prop_map(move |(n, d)| match field {
        FieldSpec::Q => Scalar::from_ratio(field, n, d).unwrap(),
        _ => Scalar::from_int(field, n),
    })
}

fn arb_mono(flavor: Flavor, n: usize) -> impl Strategy<Value = Mono> {
    prop::collection::vec(0..n, 0..=4).prop_map(move |vars| match flavor {
        Flavor::Comm => {
            let mut exps = vec![0u16; n];
            for v in vars {
                exps[v] += 1;
            }
            Mono::Comm(exps)
        }
        Flavor::Free => Mono::Free(vars.into_iter().map(|v| v as u8).collect()),
    })
}

fn arb_poly(flavor: Flavor, field: FieldSpec, n: usize) -> impl Strategy<Value = Poly<Scalar>> {
    let ctx = match flavor {
        Flavor::Comm => PolyCtx::comm(n, field),
        Flavor::Free => PolyCtx::free(n, field),
    };
    prop::collection::vec((arb_mono(flavor, n), arb_scalar(field)), 0..=4)
        .prop_map(move |terms| Poly::from_terms(ctx, terms))
}

fn arb_flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Comm), Just(Flavor::Free)]
}

proptest! {
    #[test]
    fn scalar_field_laws(field in arb_field(), tuple in arb_field().prop_flat_map(|f| (arb_scalar(f), arb_scalar(f), arb_scalar(f), Just(f)))) {
        let _ = field;
        let (a, b, c, f) = tuple;
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&a.neg()), Scalar::zero(f));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one(f));
        }
    }

    #[test]
    fn poly_ring_laws((f, g, h) in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        (arb_poly(fl, fd, 3), arb_poly(fl, fd, 3), arb_poly(fl, fd, 3))
    })) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(
            f.add(&g).unwrap().add(&h).unwrap(),
            f.add(&g.add(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g).unwrap().mul(&h).unwrap(),
            f.mul(&g.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert!(f.add(&f.neg()).unwrap().is_zero());
        if f.ctx().flavor == Flavor::Comm {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        }
    }

    #[test]
    fn truncated_products_agree((f, g, m) in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        (arb_poly(fl, fd, 3), arb_poly(fl, fd, 3), 1usize..6)
    })) {
        let full = f.mul(&g).unwrap().truncate(m);
        let capped = f.truncate(m).mul_capped(&g.truncate(m), Some(m)).unwrap();
        prop_assert_eq!(full, capped);
    }

    #[test]
    fn substitution_is_a_ring_map((f, g, a, b) in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        (arb_poly(fl, fd, 2), arb_poly(fl, fd, 2), arb_poly(fl, fd, 2), arb_poly(fl, fd, 2))
    })) {
        let images = vec![a, b];
        let sum = f.add(&g).unwrap().substitute(&images, None).unwrap();
        let sum2 = f
            .substitute(&images, None)
            .unwrap()
            .add(&g.substitute(&images, None).unwrap())
            .unwrap();
        prop_assert_eq!(sum, sum2);
        let prod = f.mul(&g).unwrap().substitute(&images, None).unwrap();
        let prod2 = f
            .substitute(&images, None)
            .unwrap()
            .mul(&g.substitute(&images, None).unwrap())
            .unwrap();
        prop_assert_eq!(prod, prod2);
    }

    #[test]
    fn derivations_satisfy_leibniz((f, g, d0, d1) in arb_field().prop_flat_map(|fd| {
        (
            arb_poly(Flavor::Free, fd, 2),
            arb_poly(Flavor::Free, fd, 2),
            arb_poly(Flavor::Free, fd, 2),
            arb_poly(Flavor::Free, fd, 2),
        )
    })) {
        let images = vec![d0, d1];
        let lhs = f.mul(&g).unwrap().derivation_apply(&images).unwrap();
        let rhs = f
            .derivation_apply(&images)
            .unwrap()
            .mul(&g)
            .unwrap()
            .add(&f.mul(&g.derivation_apply(&images).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_text_round_trips((p,) in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        (arb_poly(fl, fd, 3),)
    })) {
        let text = format_poly(&p);
        let back = parse_expr(&text, p.ctx()).unwrap();
        prop_assert_eq!(back, p);
    }
}

fn arb_elementary(ctx: PolyCtx) -> impl Strategy<Value = Endo<Scalar>> {
    (0..ctx.n, arb_poly(ctx.flavor, ctx.field, ctx.n)).prop_filter_map(
        "addend must avoid the target and constants",
        move |(target, p)| {
            let cleaned = Poly::from_terms(
                ctx,
                p.terms()
                    .filter(|(m, _)| !m.contains_var(target) && m.degree() >= 1)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect::<Vec<_>>(),
            );
            Endo::elementary(ctx, target, cleaned).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative((f, g, h) in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        let ctx = match fl {
            Flavor::Comm => PolyCtx::comm(3, fd),
            Flavor::Free => PolyCtx::free(3, fd),
        };
        (arb_elementary(ctx), arb_elementary(ctx), arb_elementary(ctx))
    })) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = Endo::identity(*f.ctx());
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
        prop_assert_eq!(id.compose(&f).unwrap(), f);
    }

    #[test]
    fn words_cancel_against_their_inverses(ws in (arb_flavor(), arb_field()).prop_flat_map(|(fl, fd)| {
        let ctx = match fl {
            Flavor::Comm => PolyCtx::comm(3, fd),
            Flavor::Free => PolyCtx::free(3, fd),
        };
        prop::collection::vec((arb_elementary(ctx), any::<bool>()), 1..=3)
            .prop_map(move |gens| {
                let mut w = GenWord::empty(ctx);
                for (e, inv) in gens {
                    // promote the elementary endo back into a generator
                    let target = (0..ctx.n)
                        .find(|&i| !e.deviation(i).is_zero());
                    if let Some(t) = target {
                        w.push(
                            Generator::elementary(&ctx, t, e.deviation(t)).unwrap(),
                            inv,
                        );
                    }
                }
                w
            })
    })) {
        let round = ws.concat(&ws.invert());
        prop_assert!(round.expand().unwrap().is_identity());
        let expanded = ws.expand().unwrap();
        let again = ws.expand().unwrap();
        prop_assert_eq!(expanded, again);
    }
}
