//! End-to-end acceptance battery: ten criteria, one printed pass/fail line
//! each.  Every check is exact; the randomized ones are seeded.

use autalg::coeffs::{FieldSpec, Scalar};
use autalg::endo::Endo;
use autalg::poly::{Mono, Poly, PolyCtx, StarProduct};
use autalg::synth::{height, synth_nc_elementary};
use autalg::text::{format_endo, format_word, parse_endo, parse_word};
use autalg::word::{GenWord, Generator};
use autalg_cli::suites::{run_suite, SuiteResult};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SEED: u64 = 20260826;

fn report(n: usize, label: &str, ok: bool) {
    println!("criterion {:2} ({}): {}", n, label, if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {} ({}) failed", n, label);
}

fn suite_ok(n: usize, label: &str, result: &SuiteResult, limit_secs: u64) {
    for c in &result.checks {
        if c.status == autalg_cli::suites::Status::Fail {
            eprintln!("  failing check {}: {}", c.name, c.detail);
        }
    }
    let ok = result.failed() == 0 && result.millis < (limit_secs as u128) * 1000;
    if result.millis >= (limit_secs as u128) * 1000 {
        eprintln!("  suite {} took {} ms (budget {} s)", result.suite, result.millis, limit_secs);
    }
    report(n, label, ok);
}

#[test]
fn criterion_01_star_calculus() {
    let result = run_suite("star", SEED).unwrap();
    suite_ok(1, "star calculus", &result, 10);
}

#[test]
fn criterion_02_commutator_filtration() {
    let result = run_suite("commutators", SEED).unwrap();
    suite_ok(2, "commutator filtration", &result, 30);
}

#[test]
fn criterion_03_commutative_synthesis() {
    let result = run_suite("synthesis-comm", SEED).unwrap();
    suite_ok(3, "commutative synthesis", &result, 20);
}

#[test]
fn criterion_04_noncommutative_synthesis() {
    let start = Instant::now();
    let ctx = PolyCtx::free(4, FieldSpec::Q);
    let mut ok = true;
    for len in 1..=6usize {
        for bits in 0..(1u32 << len) {
            let w: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
            if height(&w) > 4 {
                continue;
            }
            let p = Poly::monomial(ctx, Mono::Free(w.clone()), Scalar::one(FieldSpec::Q));
            let word = synth_nc_elementary(&ctx, 3, &p, 64).unwrap();
            let got = word.expand().unwrap();
            let want = Endo::elementary(ctx, 3, p).unwrap();
            if got != want {
                eprintln!("  expansion mismatch for word {:?}", w);
                ok = false;
            }
        }
    }
    ok = ok && start.elapsed().as_secs() < 60;
    report(4, "noncommutative synthesis", ok);
}

#[test]
fn criterion_05_torus() {
    let result = run_suite("torus", SEED).unwrap();
    suite_ok(5, "torus conjugation and valuations", &result, 30);
}

#[test]
fn criterion_06_inclusion_exclusion() {
    let result = run_suite("inclexcl", SEED).unwrap();
    suite_ok(6, "inclusion-exclusion", &result, 5);
}

#[test]
fn criterion_07_hiking() {
    let result = run_suite("hiking", SEED).unwrap();
    suite_ok(7, "hiking", &result, 30);
}

#[test]
fn criterion_08_nagata() {
    let result = run_suite("nagata", SEED).unwrap();
    suite_ok(8, "nagata approximation", &result, 60);
}

#[test]
fn criterion_09_degree_four_identities() {
    let ctx = PolyCtx::free(3, FieldSpec::Q);
    let x = Poly::var(ctx, 0).unwrap();
    let y = Poly::var(ctx, 1).unwrap();
    let z = Poly::var(ctx, 2).unwrap();
    let mut ok = true;

    // commutator of x -> x + yz with z -> z + yx, modulo degree 4:
    // x -> x - y^2 x, y -> y, z -> z + y^2 z
    let p1 = Endo::elementary(ctx, 0, y.mul(&z).unwrap()).unwrap();
    let p2 = Endo::elementary(ctx, 2, y.mul(&x).unwrap()).unwrap();
    let phi = Endo::group_commutator_capped(&p2, &p1, 4).unwrap();
    let yyx = Poly::monomial(ctx, Mono::Free(vec![1, 1, 0]), Scalar::one(FieldSpec::Q));
    let yyz = Poly::monomial(ctx, Mono::Free(vec![1, 1, 2]), Scalar::one(FieldSpec::Q));
    if phi.deviation(0) != yyx.neg() || !phi.deviation(1).is_zero() || phi.deviation(2) != yyz {
        eprintln!("  twisted commutator has the wrong degree-3 jet");
        ok = false;
    }

    // commutator of x -> x + y^2 with z -> z + x^2, modulo degree 4:
    // z -> z + y^2 x + x y^2
    let s1 = Endo::elementary(ctx, 0, y.mul(&y).unwrap()).unwrap();
    let s2 = Endo::elementary(ctx, 2, x.mul(&x).unwrap()).unwrap();
    let k = Endo::group_commutator_capped(&s2, &s1, 4).unwrap();
    let xyy = Poly::monomial(ctx, Mono::Free(vec![0, 1, 1]), Scalar::one(FieldSpec::Q));
    if !k.deviation(0).is_zero()
        || !k.deviation(1).is_zero()
        || k.deviation(2) != yyx.add(&xyy).unwrap()
    {
        eprintln!("  square commutator has the wrong degree-3 jet");
        ok = false;
    }

    // dividing out the two one-sided elementaries leaves the identity
    // modulo degree 4
    let el_inv = Endo::elementary(ctx, 2, y.mul(&y).unwrap().mul(&x).unwrap().neg()).unwrap();
    let er_inv = Endo::elementary(ctx, 2, x.mul(&y).unwrap().mul(&y).unwrap().neg()).unwrap();
    let t = Endo::chain_capped(&[&k, &er_inv, &el_inv], Some(4)).unwrap();
    if !t.is_identity() {
        eprintln!("  residual is not the identity modulo degree 4");
        ok = false;
    }

    // the deformed-product combination (y*y)*x + x*(y*y) - (x*y)*y - y*(y*x)
    // collapses to 2*lambda*[y,[y,x]]
    for l in [-3i64, -1, 1, 2, 5] {
        let lambda = Scalar::from_int(FieldSpec::Q, l);
        let sp = StarProduct::new(Scalar::one(FieldSpec::Q), lambda.clone());
        let yy = y.star(&y, &sp).unwrap();
        let combo = yy
            .star(&x, &sp)
            .unwrap()
            .add(&x.star(&yy, &sp).unwrap())
            .unwrap()
            .sub(&x.star(&y, &sp).unwrap().star(&y, &sp).unwrap())
            .unwrap()
            .sub(&y.star(&y.star(&x, &sp).unwrap(), &sp).unwrap())
            .unwrap();
        let closed = y
            .commutator(&y.commutator(&x).unwrap())
            .unwrap()
            .scale(&lambda)
            .scale(&Scalar::from_int(FieldSpec::Q, 2));
        if combo != closed {
            eprintln!("  deformed combination disagrees for lambda = {}", l);
            ok = false;
        }
    }

    report(9, "degree-4 identities", ok);
}

fn rand_scalar_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = if field == FieldSpec::Q && rng.gen_bool(0.3) {
            Scalar::from_ratio(field, rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9)).unwrap()
        } else {
            Scalar::from_int(field, rng.gen_range(-9i64..=9))
        };
        if !s.is_zero() {
            return s;
        }
    }
}

fn rand_poly(rng: &mut ChaCha8Rng, ctx: &PolyCtx, max_deg: usize) -> Poly<Scalar> {
    let nterms = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let d = rng.gen_range(1..=max_deg);
        let m = match ctx.flavor {
            autalg::poly::Flavor::Comm => {
                let mut exps = vec![0u16; ctx.n];
                for _ in 0..d {
                    exps[rng.gen_range(0..ctx.n)] += 1;
                }
                Mono::Comm(exps)
            }
            autalg::poly::Flavor::Free => {
                Mono::Free((0..d).map(|_| rng.gen_range(0..ctx.n as u8)).collect())
            }
        };
        terms.push((m, rand_scalar_nonzero(rng, ctx.field)));
    }
    Poly::from_terms(*ctx, terms)
}

fn rand_endo(rng: &mut ChaCha8Rng, ctx: &PolyCtx) -> Endo<Scalar> {
    loop {
        let images: Vec<Poly<Scalar>> = (0..ctx.n)
            .map(|i| {
                let base = Poly::var(*ctx, i).unwrap();
                if rng.gen_bool(0.7) {
                    base.add(&rand_poly(rng, ctx, 3)).unwrap()
                } else {
                    base
                }
            })
            .collect();
        if let Ok(f) = Endo::new(*ctx, images) {
            return f;
        }
    }
}

fn rand_word(rng: &mut ChaCha8Rng, ctx: &PolyCtx) -> GenWord {
    let mut w = GenWord::empty(*ctx);
    for _ in 0..rng.gen_range(1..=4) {
        let inverted = rng.gen_bool(0.4);
        if rng.gen_bool(0.4) {
            // a transvection: one off-diagonal entry over the identity
            let mut mat = autalg::linalg::identity(ctx.field, ctx.n);
            let i = rng.gen_range(0..ctx.n);
            let j = (i + rng.gen_range(1..ctx.n)) % ctx.n;
            mat[i][j] = rand_scalar_nonzero(rng, ctx.field);
            w.push(Generator::linear(mat).unwrap(), inverted);
        } else {
            let target = rng.gen_range(0..ctx.n);
            let others: Vec<usize> = (0..ctx.n).filter(|&v| v != target).collect();
            let sub = match ctx.flavor {
                autalg::poly::Flavor::Comm => PolyCtx::comm(ctx.n, ctx.field),
                autalg::poly::Flavor::Free => PolyCtx::free(ctx.n, ctx.field),
            };
            // addend built from non-target variables only
            let mut addend = Poly::zero(sub);
            for _ in 0..rng.gen_range(1..=2) {
                let d = rng.gen_range(1..=3);
                let m = match ctx.flavor {
                    autalg::poly::Flavor::Comm => {
                        let mut exps = vec![0u16; ctx.n];
                        for _ in 0..d {
                            exps[others[rng.gen_range(0..others.len())]] += 1;
                        }
                        Mono::Comm(exps)
                    }
                    autalg::poly::Flavor::Free => Mono::Free(
                        (0..d)
                            .map(|_| others[rng.gen_range(0..others.len())] as u8)
                            .collect(),
                    ),
                };
                addend = addend
                    .add(&Poly::monomial(sub, m, rand_scalar_nonzero(rng, ctx.field)))
                    .unwrap();
            }
            if addend.is_zero() {
                continue;
            }
            w.push(Generator::elementary(ctx, target, addend).unwrap(), inverted);
        }
    }
    w
}

#[test]
fn criterion_10_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    let contexts = [
        PolyCtx::comm(3, FieldSpec::Q),
        PolyCtx::comm(4, FieldSpec::Fp(7)),
        PolyCtx::free(3, FieldSpec::Q),
        PolyCtx::free(3, FieldSpec::Fp(101)),
    ];
    for i in 0..500 {
        let ctx = contexts[i % contexts.len()];
        let f = rand_endo(&mut rng, &ctx);
        match parse_endo(&format_endo(&f)) {
            Ok(back) if back == f => {}
            other => {
                eprintln!("  endo round trip {} failed: {:?}", i, other.err());
                ok = false;
            }
        }
    }
    for i in 0..200 {
        let ctx = contexts[i % contexts.len()];
        let w = rand_word(&mut rng, &ctx);
        match parse_word(&format_word(&w)) {
            Ok(back) if back == w => {}
            other => {
                eprintln!("  word round trip {} failed: {:?}", i, other.err());
                ok = false;
            }
        }
    }
    report(10, "text round trip", ok);
}
