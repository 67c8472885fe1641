//! Named verification suites.  Each suite runs a fixed battery of exact
//! checks against the engine and reports one status per check; randomized
//! checks draw from a seeded generator so output is reproducible.

use autalg::approx::{
    hiking_product, hiking_solve, inclusion_exclusion_check, nagata, tame_approximate, HikingPlan,
};
use autalg::coeffs::{FieldSpec, LaurentScalar, Scalar};
use autalg::endo::Endo;
use autalg::poly::{Mono, Poly, PolyCtx};
use autalg::synth::{synth_monomial, synth_nc_elementary};
use autalg::torus::{limit_at_zero, singularity_valuation, torus_conjugate};
use autalg::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub millis: u128,
}

impl SuiteResult {
    pub fn passed(&self) -> usize {
        self.count(Status::Pass)
    }
    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }
    pub fn inconclusive(&self) -> usize {
        self.count(Status::Inconclusive)
    }
    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "filtration",
    "commutators",
    "torus",
    "synthesis-comm",
    "synthesis-nc",
    "star",
    "hiking",
    "nagata",
    "inclexcl",
];

/// Run one named suite with a fixed seed.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteResult> {
    let start = Instant::now();
    let checks = match name {
        "filtration" => suite_filtration(seed),
        "commutators" => suite_commutators(seed),
        "torus" => suite_torus(seed),
        "synthesis-comm" => suite_synthesis_comm(seed),
        "synthesis-nc" => suite_synthesis_nc(seed),
        "star" => suite_star(seed),
        "hiking" => suite_hiking(seed),
        "nagata" => suite_nagata(seed),
        "inclexcl" => suite_inclexcl(seed),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteResult {
        suite: name.to_string(),
        seed,
        checks,
        millis: start.elapsed().as_millis(),
    })
}

type CheckResult = std::result::Result<(), String>;

fn record(checks: &mut Vec<Check>, name: impl Into<String>, r: CheckResult) {
    let name = name.into();
    match r {
        Ok(()) => checks.push(Check {
            name,
            status: Status::Pass,
            detail: String::new(),
        }),
        Err(detail) => checks.push(Check {
            name,
            status: Status::Fail,
            detail,
        }),
    }
}

fn skip(checks: &mut Vec<Check>, name: impl Into<String>, detail: impl Into<String>) {
    checks.push(Check {
        name: name.into(),
        status: Status::Inconclusive,
        detail: detail.into(),
    });
}

fn expect<T, E: std::fmt::Debug>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{:?}", e))
}

fn require(cond: bool, msg: impl Into<String>) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------
// Randomized building blocks

fn rand_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    Scalar::from_int(field, rng.gen_range(-4i64..=4))
}

fn rand_scalar_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = rand_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random homogeneous commutative polynomial of degree `d` in the listed
/// variables (one or two terms).
fn rand_homog(rng: &mut ChaCha8Rng, ctx: &PolyCtx, vars: &[usize], d: usize) -> Poly<Scalar> {
    let nterms = rng.gen_range(1..=2);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let mut exps = vec![0u16; ctx.n];
        for _ in 0..d {
            exps[vars[rng.gen_range(0..vars.len())]] += 1;
        }
        terms.push((Mono::Comm(exps), rand_scalar_nonzero(rng, ctx.field)));
    }
    Poly::from_terms(*ctx, terms)
}

/// A random tame map whose deviation starts in degree >= `level`: a product
/// of two random elementaries with homogeneous addends.
fn rand_tame_in_level(
    rng: &mut ChaCha8Rng,
    ctx: &PolyCtx,
    level: usize,
) -> std::result::Result<Endo<Scalar>, String> {
    let mut f = Endo::identity(*ctx);
    for _ in 0..2 {
        let target = rng.gen_range(0..ctx.n);
        let others: Vec<usize> = (0..ctx.n).filter(|&i| i != target).collect();
        let d = level + rng.gen_range(0..=1);
        let addend = rand_homog(rng, ctx, &others, d);
        if addend.is_zero() {
            continue;
        }
        let e = expect(Endo::elementary(*ctx, target, addend))?;
        f = expect(f.compose(&e))?;
    }
    Ok(f)
}

/// A random free polynomial with terms of degree 1..=3 (no constant term).
fn rand_free_poly(rng: &mut ChaCha8Rng, ctx: &PolyCtx) -> Poly<Scalar> {
    let nterms = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let len = rng.gen_range(1..=3);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..ctx.n as u8)).collect();
        terms.push((Mono::Free(word), rand_scalar_nonzero(rng, ctx.field)));
    }
    Poly::from_terms(*ctx, terms)
}

// ---------------------------------------------------------------------------
// filtration

fn suite_filtration(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PolyCtx::comm(3, FieldSpec::Q);

    // an elementary with a homogeneous degree-d addend sits at level exactly d
    for d in 2..=5 {
        let name = format!("elementary-level-{}", d);
        let r = (|| -> CheckResult {
            let target = rng.gen_range(0..3);
            let others: Vec<usize> = (0..3).filter(|&i| i != target).collect();
            let addend = rand_homog(&mut rng, &ctx, &others, d);
            let f = expect(Endo::elementary(ctx, target, addend))?;
            let rep = f.filtration(8);
            require(
                rep.level == d && rep.witness.is_some(),
                format!("level {} (expected {})", rep.level, d),
            )
        })();
        record(&mut checks, name, r);
    }

    // jet inversion really inverts modulo the requested degree
    for i in 0..20 {
        let name = format!("jet-inverse-{}", i);
        let r = (|| -> CheckResult {
            let f = rand_tame_in_level(&mut rng, &ctx, 2)?;
            let finv = expect(f.jet_invert(6))?;
            let h = expect(f.compose_capped(&finv, Some(6)))?;
            require(
                h.filtration(6).level >= 6,
                format!("residual level {}", h.filtration(6).level),
            )
        })();
        record(&mut checks, name, r);
    }

    // the scalar-linear-part flag tracks diagonal shape
    let r = (|| -> CheckResult {
        let two = Scalar::from_int(FieldSpec::Q, 2);
        let scalar_diag = expect(Endo::linear(
            ctx,
            &autalg::linalg::diag(&[two.clone(), two.clone(), two.clone()]),
        ))?;
        require(scalar_diag.filtration(4).scalar_flag, "2*id not flagged")?;
        let mixed = expect(Endo::linear(
            ctx,
            &autalg::linalg::diag(&[
                Scalar::one(FieldSpec::Q),
                two.clone(),
                Scalar::one(FieldSpec::Q),
            ]),
        ))?;
        require(!mixed.filtration(4).scalar_flag, "diag(1,2,1) flagged")
    })();
    record(&mut checks, "scalar-linear-part-flag", r);

    checks
}

// ---------------------------------------------------------------------------
// commutators

fn suite_commutators(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PolyCtx::comm(3, FieldSpec::Q);

    // the sharp pair: commutator of x -> x + y^n and y -> y + x^k lands at
    // level exactly n + k - 1
    for n in 2..=4usize {
        for k in 2..=4usize {
            let name = format!("sharp-pair-{}-{}", n, k);
            let r = (|| -> CheckResult {
                let y = expect(Poly::var(ctx, 1))?;
                let x = expect(Poly::var(ctx, 0))?;
                let f = expect(Endo::elementary(ctx, 0, expect(y.pow_capped(n, None))?))?;
                let g = expect(Endo::elementary(ctx, 1, expect(x.pow_capped(k, None))?))?;
                let c = expect(Endo::group_commutator_capped(&f, &g, n + k))?;
                let rep = c.filtration(n + k);
                require(
                    rep.level == n + k - 1,
                    format!("level {} (expected {})", rep.level, n + k - 1),
                )
            })();
            record(&mut checks, name, r);
        }
    }

    // random pairs: a deviation starting in degree n against one in degree k
    // commutes up to degree n + k - 1
    for i in 0..100 {
        let name = format!("containment-{}", i);
        let r = (|| -> CheckResult {
            let n = rng.gen_range(2..=4);
            let k = rng.gen_range(2..=4);
            let f = rand_tame_in_level(&mut rng, &ctx, n)?;
            let g = rand_tame_in_level(&mut rng, &ctx, k)?;
            let c = expect(Endo::group_commutator_capped(&f, &g, n + k - 1))?;
            let rep = c.filtration(n + k - 1);
            require(
                rep.level >= n + k - 1,
                format!("level {} < {} (n={}, k={})", rep.level, n + k - 1, n, k),
            )
        })();
        record(&mut checks, name, r);
    }

    checks
}

// ---------------------------------------------------------------------------
// torus

fn laurent_sandwich(
    ctx: &PolyCtx,
    phi: &Endo<Scalar>,
    weights: &[i64],
) -> std::result::Result<Endo<LaurentScalar>, String> {
    let phi_l = phi.map_coeffs(|sc| LaurentScalar::monomial(sc.clone(), 0));
    let diag = |sign: i64| -> std::result::Result<Endo<LaurentScalar>, String> {
        let images: Vec<_> = (0..ctx.n)
            .map(|i| {
                Poly::monomial(
                    *ctx,
                    Mono::var(ctx, i),
                    LaurentScalar::t_pow(ctx.field, sign * weights[i]),
                )
            })
            .collect();
        expect(Endo::new(*ctx, images))
    };
    expect(Endo::chain_capped(&[&diag(1)?, &phi_l, &diag(-1)?], None))
}

fn suite_torus(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PolyCtx::comm(3, FieldSpec::Q);

    // closed formula against genuine composition with the diagonal family
    for i in 0..100 {
        let name = format!("conjugation-formula-{}", i);
        let r = (|| -> CheckResult {
            let f = rand_tame_in_level(&mut rng, &ctx, 2)?;
            let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            let direct = expect(torus_conjugate(&f, &weights))?;
            let sandwich = laurent_sandwich(&ctx, &f, &weights)?;
            require(direct == sandwich, "formula disagrees with composition")
        })();
        record(&mut checks, name, r);
    }

    // valuation of a single off-diagonal linear entry x_i -> x_i + x_j is
    // w_j - w_i
    for i in 0..10 {
        let name = format!("valuation-linear-{}", i);
        let r = (|| -> CheckResult {
            let vi = rng.gen_range(0..3);
            let vj = (vi + rng.gen_range(1..3)) % 3;
            let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
            let f = expect(Endo::elementary(ctx, vi, expect(Poly::var(ctx, vj))?))?;
            let val = expect(singularity_valuation(&f, &weights))?;
            require(
                val == weights[vj] - weights[vi],
                format!("valuation {} (expected {})", val, weights[vj] - weights[vi]),
            )
        })();
        record(&mut checks, name, r);
    }

    // valuation of y -> y + c x^k is k*w1 - w2
    for i in 0..10 {
        let name = format!("valuation-power-{}", i);
        let r = (|| -> CheckResult {
            let k = rng.gen_range(1..=5);
            let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
            let c = rand_scalar_nonzero(&mut rng, FieldSpec::Q);
            let x = expect(Poly::var(ctx, 0))?;
            let f = expect(Endo::elementary(ctx, 1, expect(x.pow_capped(k, None))?.scale(&c)))?;
            let val = expect(singularity_valuation(&f, &weights))?;
            let want = k as i64 * weights[0] - weights[1];
            require(val == want, format!("valuation {} (expected {})", val, want))
        })();
        record(&mut checks, name, r);
    }

    // limits at t = 0 agree with the valuation sign
    for i in 0..10 {
        let name = format!("limit-{}", i);
        let r = (|| -> CheckResult {
            let k = rng.gen_range(1..=4);
            let weights: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            let x = expect(Poly::var(ctx, 0))?;
            let f = expect(Endo::elementary(ctx, 1, expect(x.pow_capped(k, None))?))?;
            let val = expect(singularity_valuation(&f, &weights))?;
            match limit_at_zero(&f, &weights) {
                Ok(lim) if val > 0 => require(lim.is_identity(), "limit not identity"),
                Ok(lim) if val == 0 => require(lim == f, "limit changed a flat family"),
                Ok(_) => Err("no pole despite negative valuation".into()),
                Err(Error::PoleAtZero(v)) => {
                    require(val < 0 && v == val, format!("pole {} vs valuation {}", v, val))
                }
                Err(e) => Err(format!("{:?}", e)),
            }
        })();
        record(&mut checks, name, r);
    }

    checks
}

// ---------------------------------------------------------------------------
// synthesis

fn suite_synthesis_comm(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [
        FieldSpec::Q,
        FieldSpec::Fp(5),
        FieldSpec::Fp(7),
        FieldSpec::Fp(101),
    ];
    for field in fields {
        let ctx = PolyCtx::comm(3, field);
        for d in 1..=6usize {
            for k in 0..=d {
                let l = d - k;
                let name = format!("monomial-{}-x{}y{}", field, k, l);
                let mut skipped = None;
                let r = (|| -> CheckResult {
                    for _ in 0..5 {
                        let c = rand_scalar_nonzero(&mut rng, field);
                        let word = match synth_monomial(&ctx, &c, k, l) {
                            Ok(w) => w,
                            Err(Error::SmallField { .. }) | Err(Error::CharTwo(_)) => {
                                skipped = Some("precondition not met for this field");
                                continue;
                            }
                            Err(e) => return Err(format!("{:?}", e)),
                        };
                        let got = expect(word.expand())?;
                        let x = expect(Poly::var(ctx, 0))?;
                        let y = expect(Poly::var(ctx, 1))?;
                        let addend = expect(expect(x.pow_capped(k, None))?
                            .mul(&expect(y.pow_capped(l, None))?))?
                        .scale(&c);
                        let want = expect(Endo::elementary(ctx, 2, addend))?;
                        require(got == want, format!("expansion mismatch for coeff {}", c))?;
                    }
                    Ok(())
                })();
                match (r, skipped) {
                    (Ok(()), Some(msg)) => skip(&mut checks, name, msg),
                    (r, _) => record(&mut checks, name, r),
                }
            }
        }
    }
    checks
}

fn suite_synthesis_nc(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PolyCtx::free(4, FieldSpec::Q);
    // all binary words in x, y up to degree 5 (height bounded by the degree)
    let mut words: Vec<Vec<u8>> = Vec::new();
    for len in 1..=5usize {
        for bits in 0..(1u32 << len) {
            let w: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
            if autalg::synth::height(&w) <= 4 {
                words.push(w);
            }
        }
    }
    for w in words {
        let name: String = w.iter().map(|&v| if v == 0 { 'x' } else { 'y' }).collect();
        let r = (|| -> CheckResult {
            let c = rand_scalar_nonzero(&mut rng, FieldSpec::Q);
            let p = Poly::monomial(ctx, Mono::Free(w.clone()), c);
            let word = expect(synth_nc_elementary(&ctx, 3, &p, 64))?;
            let got = expect(word.expand())?;
            let want = expect(Endo::elementary(ctx, 3, p.clone()))?;
            require(got == want, "expansion mismatch")
        })();
        record(&mut checks, format!("monomial-{}", name), r);
    }
    checks
}

// ---------------------------------------------------------------------------
// star

fn suite_star(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for field in [FieldSpec::Q, FieldSpec::Fp(101)] {
        let ctx = PolyCtx::free(3, field);
        for i in 0..100 {
            let name = format!("associator-{}-{}", field, i);
            let r = (|| -> CheckResult {
                let f = rand_free_poly(&mut rng, &ctx);
                let g = rand_free_poly(&mut rng, &ctx);
                let h = rand_free_poly(&mut rng, &ctx);
                let lambda = rand_scalar(&mut rng, field);
                let sp = autalg::poly::StarProduct::new(Scalar::one(field), lambda.clone());
                let assoc = expect(f.associator(&g, &h, &sp))?;
                let closed =
                    expect(g.commutator(&expect(f.commutator(&h))?))?.scale(&lambda);
                require(assoc == closed, "associator differs from the closed form")
            })();
            record(&mut checks, name, r);
        }
    }
    // associativity holds precisely when one of the two structure constants
    // vanishes
    let ctx = PolyCtx::free(3, FieldSpec::Q);
    for a in 0..5i64 {
        for b in 0..5i64 {
            let name = format!("associativity-grid-{}-{}", a, b);
            let r = (|| -> CheckResult {
                let x = expect(Poly::var(ctx, 0))?;
                let y = expect(Poly::var(ctx, 1))?;
                let z = expect(Poly::var(ctx, 2))?;
                let sp = autalg::poly::StarProduct::new(
                    Scalar::from_int(FieldSpec::Q, a),
                    Scalar::from_int(FieldSpec::Q, b),
                );
                let assoc = expect(x.associator(&y, &z, &sp))?;
                require(
                    assoc.is_zero() == (a * b == 0),
                    format!("a={}, b={}: associator zero = {}", a, b, assoc.is_zero()),
                )
            })();
            record(&mut checks, name, r);
        }
    }
    checks
}

// ---------------------------------------------------------------------------
// hiking

fn suite_hiking(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for targets in [vec![1u32], vec![1, 2], vec![1, 2, 3]] {
        let name = format!("plan-q-{:?}", targets);
        let r = (|| -> CheckResult {
            let plan = expect(hiking_solve(&targets, FieldSpec::Q))?;
            require(plan.verify(FieldSpec::Q), "plan fails its constraints")
        })();
        record(&mut checks, name, r);
        let name = format!("plan-fp101-{:?}", targets);
        let r = (|| -> CheckResult {
            let plan = expect(hiking_solve(&targets, FieldSpec::Fp(101)))?;
            require(plan.verify(FieldSpec::Fp(101)), "plan fails its constraints")
        })();
        record(&mut checks, name, r);
    }

    // products kill the targeted z-degree slices of the y-image
    let ctx = PolyCtx::free(3, FieldSpec::Q);
    for (i, targets) in [vec![1u32], vec![1, 2], vec![2]].iter().enumerate() {
        let name = format!("product-kills-slices-{}", i);
        let r = (|| -> CheckResult {
            let z = expect(Poly::var(ctx, 2))?;
            let x = expect(Poly::var(ctx, 0))?;
            // y -> y + sum over targeted degrees of z^j * x, plus an
            // untargeted z^4-term that must survive
            let mut addend = Poly::zero(ctx);
            for &j in targets.iter() {
                let term = expect(expect(z.pow_capped(j as usize, None))?.mul(&x))?
                    .scale(&rand_scalar_nonzero(&mut rng, FieldSpec::Q));
                addend = expect(addend.add(&term))?;
            }
            let survivor = expect(expect(z.pow_capped(4, None))?.mul(&x))?;
            addend = expect(addend.add(&survivor))?;
            let f = expect(Endo::elementary(ctx, 1, addend))?;
            let plan = expect(hiking_solve(targets, FieldSpec::Q))?;
            let g = expect(hiking_product(&f, &plan, 2, 6))?;
            // targeted slices vanish, checked via z-degree of each term
            for (m, _) in g.deviation(1).terms() {
                let zdeg = m.degree_in(2) as u32;
                require(
                    !targets.contains(&zdeg),
                    format!("surviving term with z-degree {}", zdeg),
                )?;
            }
            require(!g.deviation(1).is_zero(), "untargeted slice was destroyed")
        })();
        record(&mut checks, name, r);
    }

    // a trivial plan reproduces the input
    let r = (|| -> CheckResult {
        let z = expect(Poly::var(ctx, 2))?;
        let x = expect(Poly::var(ctx, 0))?;
        let f = expect(Endo::elementary(ctx, 1, expect(z.mul(&x))?))?;
        let trivial = HikingPlan {
            weights: vec![1],
            scales: vec![Scalar::one(FieldSpec::Q)],
            targets: vec![],
        };
        let g = expect(hiking_product(&f, &trivial, 2, 8))?;
        require(g == f.truncate(8), "trivial plan altered the map")
    })();
    record(&mut checks, "trivial-plan-identity", r);

    checks
}

// ---------------------------------------------------------------------------
// nagata

fn suite_nagata(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let ctx = PolyCtx::comm(3, FieldSpec::Q);

    let r = (|| -> CheckResult {
        let f = expect(nagata(&ctx))?;
        let det = expect(f.jacobian_det(None))?;
        require(
            det == Poly::constant(ctx, Scalar::one(FieldSpec::Q)),
            format!("jacobian {:?}", det),
        )
    })();
    record(&mut checks, "jacobian-det-one", r);

    let r = (|| -> CheckResult {
        let f = expect(nagata(&ctx))?;
        let finv = expect(autalg::approx::nagata_inverse(&ctx))?;
        let a = expect(f.compose(&finv))?;
        let b = expect(finv.compose(&f))?;
        require(
            a.is_identity() && b.is_identity(),
            "inverse fails the two-sided composition check",
        )
    })();
    record(&mut checks, "exact-inverse", r);

    let r = (|| -> CheckResult {
        let f = expect(nagata(&ctx))?;
        let trace = expect(tame_approximate(&f, 6, 200, seed))?;
        require(expect(trace.verify(&f))?, "trace does not recompose")?;
        require(
            trace.residual.filtration(6).level >= 6,
            format!("residual level {}", trace.residual.filtration(6).level),
        )
    })();
    record(&mut checks, "tame-approximation-to-6", r);

    checks
}

// ---------------------------------------------------------------------------
// inclexcl

fn suite_inclexcl(_seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 1..=5usize {
        for m in 1..=n {
            let name = format!("grid-n{}-m{}", n, m);
            let r = (|| -> CheckResult {
                let p = expect(inclusion_exclusion_check(n, m))?;
                if m < n {
                    require(p.is_zero(), "nonzero below the variable count")
                } else {
                    let ctx = PolyCtx::comm(n, FieldSpec::Q);
                    let mut fact = 1i64;
                    for i in 2..=n as i64 {
                        fact *= i;
                    }
                    let mut want = Poly::constant(ctx, Scalar::from_int(FieldSpec::Q, fact));
                    for i in 0..n {
                        want = expect(want.mul(&expect(Poly::var(ctx, i))?))?;
                    }
                    require(p == want, "does not equal n! times the product")
                }
            })();
            record(&mut checks, name, r);
        }
    }
    checks
}
