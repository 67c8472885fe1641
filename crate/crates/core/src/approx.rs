//! Augmentation-adic approximation: divergence checks, degree-by-degree
//! peeling of tame factors, jet-level classification, the Nagata map, the
//! hiking cancellation procedure, and the inclusion-exclusion identity.


use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{FieldSpec, Scalar};
use crate::endo::Endo;
use crate::linalg::{self, Mat};
use crate::poly::{Flavor, Mono, Poly, PolyCtx};
use crate::word::{Generator, GenWord};
use crate::{Error, Result};

/// Sum of the partials of the degree-k deviation parts: Sigma_i d(dev_i)/dx_i.
/// A map whose Jacobian determinant is 1 has divergence-free leading
/// deviation, which is what makes the peeling search space adequate.
pub fn divergence(f: &Endo<Scalar>, k: usize) -> Result<Poly<Scalar>> {
    let ctx = *f.ctx();
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor("divergence needs commuting variables".into()));
    }
    let mut acc = Poly::zero(ctx);
    for i in 0..ctx.n {
        let dev = f.deviation(i);
        if let Some(low) = dev.low_degree() {
            if low < k {
                return Err(Error::BadShape(format!(
                    "image {} deviates already at degree {} < {}",
                    i, low, k
                )));
            }
        }
        acc = acc.add(&dev.homogeneous(k).partial(i)?)?;
    }
    Ok(acc)
}

fn monomials_of_degree(n: usize, k: usize) -> Vec<Vec<u16>> {
    fn rec(n: usize, k: usize, pos: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos + 1 == n {
            cur.push(k as u16);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=k {
            cur.push(e as u16);
            rec(n, k - e, pos + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// One basis candidate for peeling: an elementary generator, possibly
/// conjugated by an invertible linear map.  Scaling the addend scales the
/// degree-k deviation linearly, so a single exact linear solve suffices.
struct PeelCand {
    word_for: Box<dyn Fn(&Scalar) -> Result<GenWord>>,
    deviation: Vec<Poly<Scalar>>,
}

fn elementary_cand(ctx: &PolyCtx, target: usize, mono: &Mono) -> PeelCand {
    let c = *ctx;
    let m = mono.clone();
    let mut dev = vec![Poly::zero(c); c.n];
    dev[target] = Poly::monomial(c, m.clone(), Scalar::one(c.field));
    PeelCand {
        word_for: Box::new(move |s: &Scalar| {
            Ok(GenWord::single(
                c,
                Generator::elementary(&c, target, Poly::monomial(c, m.clone(), s.clone()))?,
            ))
        }),
        deviation: dev,
    }
}

fn conjugated_cand(ctx: &PolyCtx, mat: Mat, target: usize, mono: &Mono) -> Result<PeelCand> {
    let c = *ctx;
    let m = mono.clone();
    let lin = Generator::linear(mat)?;
    let base = GenWord::single(
        c,
        Generator::elementary(&c, target, Poly::monomial(c, m.clone(), Scalar::one(c.field)))?,
    )
    .conjugate_by(&lin);
    let expanded = base.expand()?;
    let dev: Vec<Poly<Scalar>> = (0..c.n).map(|i| expanded.deviation(i)).collect();
    Ok(PeelCand {
        word_for: Box::new(move |s: &Scalar| {
            Ok(GenWord::single(
                c,
                Generator::elementary(&c, target, Poly::monomial(c, m.clone(), s.clone()))?,
            )
            .conjugate_by(&lin))
        }),
        deviation: dev,
    })
}

fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Mat {
    loop {
        let mat: Mat = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Scalar::from_int(field, rng.gen_range(-3i64..=3)))
                    .collect()
            })
            .collect();
        if linalg::mat_inv(&mat).is_ok() {
            return mat;
        }
    }
}

/// Find a tame word whose leading deviation matches the degree-k deviation
/// of `f`, so that undoing it pushes the residual into the next filtration
/// level.  The search space is the span of leading terms of elementary
/// generators together with `basis_budget` seeded-random linear conjugates
/// of elementaries; failure to span is a reported outcome.
pub fn peel_step(
    f: &Endo<Scalar>,
    k: usize,
    basis_budget: usize,
    seed: u64,
    cap: Option<usize>,
) -> Result<(GenWord, Endo<Scalar>)> {
    let ctx = *f.ctx();
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor("peeling is implemented for commuting variables".into()));
    }
    if ctx.field.characteristic() != 0 {
        return Err(Error::ContextMismatch("peeling needs characteristic zero".into()));
    }
    if k < 2 {
        return Err(Error::BadShape("peel degree must be at least 2".into()));
    }
    let mut target_dev = Vec::with_capacity(ctx.n);
    for i in 0..ctx.n {
        let dev = f.deviation(i);
        if let Some(low) = dev.low_degree() {
            if low < k {
                return Err(Error::BadShape(format!(
                    "input deviates at degree {} < {}",
                    low, k
                )));
            }
        }
        target_dev.push(dev.homogeneous(k));
    }
    if target_dev.iter().all(|p| p.is_zero()) {
        return Ok((GenWord::empty(ctx), f.clone()));
    }
    let monos = monomials_of_degree(ctx.n, k);
    let slot_of = |i: usize, m: &Mono| -> usize {
        let exps = match m {
            Mono::Comm(e) => e.clone(),
            Mono::Free(_) => unreachable!(),
        };
        i * monos.len() + monos.iter().position(|c| *c == exps).unwrap()
    };
    let dim = ctx.n * monos.len();
    let vectorize = |dev: &[Poly<Scalar>]| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(ctx.field); dim];
        for (i, p) in dev.iter().enumerate() {
            for (m, c) in p.terms() {
                let s = slot_of(i, m);
                v[s] = v[s].add(c);
            }
        }
        v
    };
    let tvec = vectorize(&target_dev);

    // pure elementaries first: each degree-k monomial free of the target
    let mut cands: Vec<PeelCand> = Vec::new();
    for i in 0..ctx.n {
        for exps in &monos {
            if exps[i] != 0 {
                continue;
            }
            cands.push(elementary_cand(&ctx, i, &Mono::Comm(exps.clone())));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0usize;
    let solution = loop {
        let cols: Vec<Vec<Scalar>> = cands.iter().map(|c| vectorize(&c.deviation)).collect();
        if let Some(sol) = linalg::solve_columns(&cols, &tvec) {
            break sol;
        }
        if spent >= basis_budget {
            return Err(Error::SpanDeficiency(format!(
                "degree-{} deviation not matched after {} sampled conjugates",
                k, spent
            )));
        }
        let batch = (basis_budget - spent).min(8);
        for _ in 0..batch {
            let mat = random_invertible(&mut rng, ctx.field, ctx.n);
            let i = rng.gen_range(0..ctx.n);
            let choices: Vec<&Vec<u16>> = monos.iter().filter(|e| e[i] == 0).collect();
            let exps = choices[rng.gen_range(0..choices.len())].clone();
            cands.push(conjugated_cand(&ctx, mat, i, &Mono::Comm(exps))?);
        }
        spent += batch;
    };
    let mut word = GenWord::empty(ctx);
    for (c, cand) in solution.iter().zip(&cands) {
        if c.is_zero() {
            continue;
        }
        word = word.concat(&(cand.word_for)(c)?);
    }
    // undo the peeled word in front: the residual deviates one level deeper
    let tau_inv = word.invert().expand_capped(cap)?;
    let residual = tau_inv.compose_capped(f, cap)?;
    Ok((word, residual))
}

/// One stage of an approximation trace.
#[derive(Clone, Debug)]
pub struct ApproxStage {
    pub degree: usize,
    pub word: GenWord,
    pub residual_level: usize,
}

/// Record of a completed approximation: the concatenated stage words,
/// composed with the residual, reproduce the input modulo degree `cap`.
#[derive(Clone, Debug)]
pub struct ApproxTrace {
    pub stages: Vec<ApproxStage>,
    pub residual: Endo<Scalar>,
    pub cap: usize,
}

impl ApproxTrace {
    pub fn word(&self) -> GenWord {
        let mut w = GenWord::empty(*self.residual.ctx());
        for s in &self.stages {
            w = w.concat(&s.word);
        }
        w
    }

    /// Check the defining invariant against the original input.
    pub fn verify(&self, f: &Endo<Scalar>) -> Result<bool> {
        let lhs = self
            .word()
            .expand_capped(Some(self.cap))?
            .compose_capped(&self.residual, Some(self.cap))?;
        Ok(lhs == f.truncate(self.cap))
    }
}

/// Peel tame factors degree by degree until the residual lies in H_m, i.e.
/// agrees with the identity modulo degree m.  The linear part, if not the
/// identity, is peeled first by its exact inverse.
pub fn tame_approximate(
    f: &Endo<Scalar>,
    m: usize,
    basis_budget: usize,
    seed: u64,
) -> Result<ApproxTrace> {
    let ctx = *f.ctx();
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor("approximation is implemented for commuting variables".into()));
    }
    if ctx.field.characteristic() != 0 {
        return Err(Error::ContextMismatch("approximation needs characteristic zero".into()));
    }
    if m < 2 {
        return Err(Error::BadShape("approximation level must be at least 2".into()));
    }
    let mut stages: Vec<ApproxStage> = Vec::new();
    let mut r = f.truncate(m);
    let lin = r.linear_part();
    if lin != linalg::identity(ctx.field, ctx.n) {
        let lin_gen = Generator::linear(lin.clone())?;
        let inv_endo = Endo::linear(ctx, &linalg::mat_inv(&lin)?)?;
        r = inv_endo.compose_capped(&r, Some(m))?;
        stages.push(ApproxStage {
            degree: 1,
            word: GenWord::single(ctx, lin_gen),
            residual_level: r.filtration(m).level,
        });
    }
    loop {
        let level = r.filtration(m).level;
        if level >= m || r.is_identity() {
            break;
        }
        let (tau, next) = peel_step(&r, level, basis_budget, seed.wrapping_add(level as u64), Some(m))?;
        let next_level = next.filtration(m).level;
        if !(next_level > level || next.is_identity()) {
            return Err(Error::BadShape(
                "internal: peeled residual did not advance a level".into(),
            ));
        }
        stages.push(ApproxStage {
            degree: level,
            word: tau,
            residual_level: next_level,
        });
        r = next;
    }
    let trace = ApproxTrace {
        stages,
        residual: r,
        cap: m,
    };
    if !trace.verify(f)? {
        return Err(Error::BadShape("internal: trace failed to recompose".into()));
    }
    Ok(trace)
}

/// Jet-level classification of an endomorphism.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// A tame word approximates the map with residual in H_m; `good`
    /// records whether the jet-inverse cross-check of the factorization
    /// also succeeded.
    Nice { good: bool, trace: ApproxTrace },
    /// The engine does not decide (positive characteristic, or the sampled
    /// span was insufficient).
    Unknown { reason: String },
}

/// Decide "nice to level m" via peeling and cross-check "good to level m"
/// by jet-inverting the expanded tame word.
pub fn classify_nice(f: &Endo<Scalar>, m: usize, basis_budget: usize, seed: u64) -> Result<Verdict> {
    let ctx = *f.ctx();
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor("classification is implemented for commuting variables".into()));
    }
    if ctx.field.characteristic() != 0 {
        return Ok(Verdict::Unknown {
            reason: "positive characteristic: approximation status not decided".into(),
        });
    }
    let trace = match tame_approximate(f, m, basis_budget, seed) {
        Ok(t) => t,
        Err(Error::SpanDeficiency(msg)) => {
            return Ok(Verdict::Unknown {
                reason: format!("sampled span insufficient: {}", msg),
            })
        }
        Err(e) => return Err(e),
    };
    // cross-check: psi = (expanded word)^-1 then f must sit in H_m
    let phi_m = trace.word().expand_capped(Some(m))?;
    let good = match phi_m.jet_invert(m) {
        Ok(inv) => {
            let psi = inv.compose_capped(f, Some(m))?;
            let level = psi.filtration(m).level;
            psi.is_identity() || level >= m
        }
        Err(_) => false,
    };
    Ok(Verdict::Nice { good, trace })
}

/// The Nagata automorphism in three commuting variables.
pub fn nagata(ctx: &PolyCtx) -> Result<Endo<Scalar>> {
    if ctx.flavor != Flavor::Comm || ctx.n != 3 || ctx.field.characteristic() == 2 {
        return Err(Error::ContextMismatch(
            "the Nagata map lives in three commuting variables, characteristic != 2".into(),
        ));
    }
    let c = *ctx;
    let x = Poly::var(c, 0)?;
    let y = Poly::var(c, 1)?;
    let z = Poly::var(c, 2)?;
    let two = Scalar::from_int(c.field, 2);
    let w = y.mul(&y)?.add(&x.mul(&z)?)?; // y^2 + xz
    let img_x = x
        .sub(&y.mul(&w)?.scale(&two))?
        .sub(&w.mul(&w)?.mul(&z)?)?;
    let img_y = y.add(&w.mul(&z)?)?;
    Endo::new(c, vec![img_x, img_y, z])
}

/// The exact polynomial inverse of the Nagata map, recovered by jet
/// inversion and then verified by exact composition on both sides.
pub fn nagata_inverse(ctx: &PolyCtx) -> Result<Endo<Scalar>> {
    let n = nagata(ctx)?;
    let inv = n.jet_invert(9)?;
    let id = Endo::identity(*ctx);
    if n.compose(&inv)? != id || inv.compose(&n)? != id {
        return Err(Error::BadShape("internal: jet inverse is not an exact inverse".into()));
    }
    Ok(inv)
}

/// A cancellation plan: integer weights k_i and nonzero scales lambda_i with
/// Sigma k_i = 1 (in the prime ring) and Sigma_i k_i * lambda_i^n_j = 0 for
/// every targeted exponent n_j.
#[derive(Clone, Debug)]
pub struct HikingPlan {
    pub weights: Vec<i64>,
    pub scales: Vec<Scalar>,
    pub targets: Vec<u32>,
}

impl HikingPlan {
    /// Re-verify both constraint families by direct substitution.
    pub fn verify(&self, field: FieldSpec) -> bool {
        if self.weights.len() != self.scales.len() || self.weights.is_empty() {
            return false;
        }
        let mut ksum = Scalar::zero(field);
        for &k in &self.weights {
            ksum = ksum.add(&Scalar::from_int(field, k));
        }
        if !ksum.is_one() {
            return false;
        }
        for &t in &self.targets {
            let mut acc = Scalar::zero(field);
            for (&k, l) in self.weights.iter().zip(&self.scales) {
                if l.is_zero() {
                    return false;
                }
                let lp = l.pow(t as i64).expect("nonzero base");
                acc = acc.add(&Scalar::from_int(field, k).mul(&lp));
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }
}

const FP_PLAN_SIZE_LIMIT: usize = 6;

fn binom_i64(n: usize, k: usize) -> Option<i64> {
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i64)?;
        acc /= (i + 1) as i64;
    }
    Some(acc)
}

/// Solve for a hiking plan killing all the targeted exponents.  Over the
/// rationals the closed form uses consecutive scales 1..M+1 with alternating
/// binomial weights (a finite-difference identity of order M+1 annihilates
/// every power sum of degree <= M); over a finite field an exact linear
/// system is solved with plan size at most 6.
pub fn hiking_solve(targets: &[u32], field: FieldSpec) -> Result<HikingPlan> {
    let mut ts: Vec<u32> = targets.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.iter().any(|&t| t == 0) {
        return Err(Error::BadShape("targeted exponents must be positive".into()));
    }
    if ts.is_empty() {
        return Ok(HikingPlan {
            weights: vec![1],
            scales: vec![Scalar::one(field)],
            targets: ts,
        });
    }
    match field {
        FieldSpec::Q => {
            let m = *ts.last().unwrap() as usize;
            let plan = HikingPlan {
                weights: (1..=m + 1)
                    .map(|i| {
                        let b = binom_i64(m + 1, i).ok_or(Error::NoPlan(
                            "binomial weights overflow for this target".into(),
                        ))?;
                        Ok(if i % 2 == 1 { b } else { -b })
                    })
                    .collect::<Result<Vec<i64>>>()?,
                scales: (1..=m + 1).map(|i| Scalar::from_int(field, i as i64)).collect(),
                targets: ts,
            };
            if !plan.verify(field) {
                return Err(Error::NoPlan("internal: closed form failed verification".into()));
            }
            Ok(plan)
        }
        FieldSpec::Fp(p) => {
            let max_s = FP_PLAN_SIZE_LIMIT.min(p as usize - 1);
            for s in (ts.len() + 1)..=max_s {
                let scales: Vec<Scalar> =
                    (1..=s as i64).map(|i| Scalar::from_int(field, i)).collect();
                // rows: Sigma k_i = 1; Sigma k_i lambda_i^t = 0 per target
                let mut cols: Vec<Vec<Scalar>> = Vec::new();
                for l in &scales {
                    let mut col = vec![Scalar::one(field)];
                    for &t in &ts {
                        col.push(l.pow(t as i64).expect("nonzero base"));
                    }
                    cols.push(col);
                }
                let mut rhs = vec![Scalar::zero(field); ts.len() + 1];
                rhs[0] = Scalar::one(field);
                if let Some(sol) = linalg::solve_columns(&cols, &rhs) {
                    let weights: Vec<i64> = sol
                        .iter()
                        .map(|k| match k {
                            Scalar::Fp { r, .. } => *r as i64,
                            Scalar::Q(_) => unreachable!(),
                        })
                        .collect();
                    let plan = HikingPlan {
                        weights,
                        scales,
                        targets: ts.clone(),
                    };
                    if plan.verify(field) {
                        return Ok(plan);
                    }
                }
            }
            Err(Error::NoPlan(format!(
                "no plan of size <= {} over F_{}",
                max_s, p
            )))
        }
    }
}

fn scale_slot_conjugate(
    f: &Endo<Scalar>,
    slot: usize,
    lambda: &Scalar,
) -> Result<Endo<Scalar>> {
    let ctx = *f.ctx();
    let mut scales = vec![Scalar::one(ctx.field); ctx.n];
    scales[slot] = lambda.clone();
    let d = Endo::linear(ctx, &linalg::diag(&scales))?;
    let mut inv_scales = vec![Scalar::one(ctx.field); ctx.n];
    inv_scales[slot] = lambda.inv()?;
    let d_inv = Endo::linear(ctx, &linalg::diag(&inv_scales))?;
    Endo::chain(&[&d, f, &d_inv])
}

fn slot_degree_slices(p: &Poly<Scalar>, slot: usize) -> Vec<(usize, Poly<Scalar>)> {
    let ctx = *p.ctx();
    let mut by_deg: std::collections::BTreeMap<usize, Vec<(Mono, Scalar)>> = Default::default();
    for (m, c) in p.terms() {
        by_deg
            .entry(m.degree_in(slot))
            .or_default()
            .push((m.clone(), c.clone()));
    }
    by_deg
        .into_iter()
        .map(|(d, terms)| (d, Poly::from_terms(ctx, terms)))
        .collect()
}

/// Form the product of conjugates of `f` by scalings of one variable slot,
/// with the plan's integer multiplicities, computed modulo degree `cap`.
/// The conjugation scales each slice of slot-degree i by lambda^i (checked
/// exactly against the slice decomposition for every factor), so at the
/// leading deviation degree the targeted slot-degree slices cancel.
pub fn hiking_product(
    f: &Endo<Scalar>,
    plan: &HikingPlan,
    z_scale_slot: usize,
    cap: usize,
) -> Result<Endo<Scalar>> {
    let ctx = *f.ctx();
    if ctx.flavor != Flavor::Free || ctx.n != 3 {
        return Err(Error::ContextMismatch(
            "hiking runs in the free algebra on three variables".into(),
        ));
    }
    if z_scale_slot >= ctx.n {
        return Err(Error::VarOutOfRange(z_scale_slot, ctx.n));
    }
    if !plan.verify(ctx.field) {
        return Err(Error::NoPlan("plan fails its own constraints".into()));
    }
    // shape: the first variable is fixed
    if *f.image(0) != Poly::var(ctx, 0)? {
        return Err(Error::BadShape("expected the first variable to be fixed".into()));
    }
    let y_dev = f.deviation(1);
    let mut factors: Vec<Endo<Scalar>> = Vec::new();
    for (&k, lambda) in plan.weights.iter().zip(&plan.scales) {
        let conj = scale_slot_conjugate(f, z_scale_slot, lambda)?;
        // verify the scaling law on the y-image, slice by slot degree
        let mut expect = Poly::var(ctx, 1)?;
        for (d, slice) in slot_degree_slices(&y_dev, z_scale_slot) {
            expect = expect.add(&slice.scale(&lambda.pow(d as i64)?))?;
        }
        if conj.image(1) != &expect {
            return Err(Error::BadShape(
                "internal: conjugate violates the slice scaling law".into(),
            ));
        }
        let base = if k >= 0 { conj.clone() } else { conj.jet_invert(cap)? };
        let mut pow = Endo::identity(ctx);
        for _ in 0..k.unsigned_abs() {
            pow = pow.compose_capped(&base, Some(cap))?;
        }
        factors.push(pow);
    }
    // product written left to right applies right to left
    let refs: Vec<&Endo<Scalar>> = factors.iter().rev().collect();
    Endo::chain_capped(&refs, Some(cap))
}

/// The alternating monomial x^{k_1} y^{k_2} x^{k_3} ... (blocks alternate
/// starting with x).
pub fn alternating_monomial(ctx: &PolyCtx, ks: &[usize]) -> Result<Mono> {
    if ctx.flavor != Flavor::Free {
        return Err(Error::WrongFlavor("block monomials live in the free algebra".into()));
    }
    if ks.is_empty() || ks.iter().any(|&k| k == 0) {
        return Err(Error::BadShape("block sizes must be positive".into()));
    }
    let mut word: Vec<u8> = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let v = (i % 2) as u8; // x, y, x, ...
        word.extend(std::iter::repeat(v).take(k));
    }
    Ok(Mono::Free(word))
}

/// An elementary map together with its exact inverse (the addend is free of
/// the target variable, so negating it inverts the map).
fn elem_pair(
    ctx: &PolyCtx,
    target: usize,
    addend: Poly<Scalar>,
) -> Result<(Endo<Scalar>, Endo<Scalar>)> {
    let fwd = Endo::elementary(*ctx, target, addend.clone())?;
    let bwd = Endo::elementary(*ctx, target, addend.neg())?;
    Ok((fwd, bwd))
}

/// Which variable carries the block monomial: the trailing block sits on x
/// for odd block counts and on y for even ones, so the twist targets the
/// other letter.
pub fn block_carrier(s: usize) -> usize {
    if s % 2 == 1 {
        1 // trailing x-block: twist y -> y + z x^k, deviation lands on y
    } else {
        0 // trailing y-block: twist x -> x + z y^k, deviation lands on x
    }
}

/// The commutator of the block elementary z -> z + M_{k_1..k_{s-1}} with
/// the twist on the carrier variable (y -> y + z x^{k_s} for odd s,
/// x -> x + z y^{k_s} for even s).  Its deviation starts with the full
/// block monomial on the carrier, minus the twist derivation applied to the
/// prefix on z; everything else is strictly deeper.
pub fn build_u(ctx: &PolyCtx, ks: &[usize], cap: Option<usize>) -> Result<Endo<Scalar>> {
    if ctx.flavor != Flavor::Free || ctx.n != 3 {
        return Err(Error::ContextMismatch(
            "the block pipeline runs in the free algebra on three variables".into(),
        ));
    }
    let s = ks.len();
    if s < 2 {
        return Err(Error::BadShape("need at least two blocks".into()));
    }
    let prefix = alternating_monomial(ctx, &ks[..s - 1])?;
    let (phi_m, phi_m_inv) =
        elem_pair(ctx, 2, Poly::monomial(*ctx, prefix, Scalar::one(ctx.field)))?;
    let z = Poly::var(*ctx, 2)?;
    let k_last = ks[s - 1];
    let carrier = block_carrier(s);
    let block_var = Poly::var(*ctx, 1 - carrier)?;
    let (twist, twist_inv) =
        elem_pair(ctx, carrier, z.mul(&block_var.pow_capped(k_last, None)?)?)?;
    Endo::chain_capped(&[&phi_m, &twist, &phi_m_inv, &twist_inv], cap)
}

/// The twisted conjugate v of u by the full block elementary and the shear
/// y -> y - z (even s) or x -> x - z (odd s).  Its deviation on the twisted
/// variable consists entirely of terms of positive z-degree: the block
/// monomial itself cancels.
pub fn build_v(ctx: &PolyCtx, ks: &[usize], cap: Option<usize>) -> Result<Endo<Scalar>> {
    let u = build_u(ctx, ks, cap)?;
    let full = alternating_monomial(ctx, ks)?;
    let (psi, psi_inv) =
        elem_pair(ctx, 2, Poly::monomial(*ctx, full, Scalar::one(ctx.field)))?;
    let s = ks.len();
    let z = Poly::var(*ctx, 2)?;
    // shear the carrier variable by -z
    let (shear, shear_inv) = elem_pair(ctx, block_carrier(s), z.neg())?;
    // written psi^-1 . shear . psi . u . shear^-1, applied right to left
    Endo::chain_capped(&[&shear_inv, &u, &psi, &shear, &psi_inv], cap)
}

/// The alternating sum Sigma_{S nonempty} (-1)^(n-|S|) (Sigma_{i in S} x_i)^m
/// in n commuting variables: zero for m < n and n! x_1...x_n for m = n.
pub fn inclusion_exclusion_check(n: usize, m: usize) -> Result<Poly<Scalar>> {
    if n == 0 || m == 0 {
        return Err(Error::BadShape("need n >= 1 and m >= 1".into()));
    }
    if n > 20 {
        return Err(Error::BadShape("too many variables".into()));
    }
    let ctx = PolyCtx::comm(n, FieldSpec::Q);
    let mut acc = Poly::zero(ctx);
    for mask in 1u32..(1 << n) {
        let mut sum = Poly::zero(ctx);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                sum = sum.add(&Poly::var(ctx, i)?)?;
            }
        }
        let term = sum.pow_capped(m, None)?;
        let sign = (n as i64 - mask.count_ones() as i64) % 2 == 0;
        acc = if sign { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}
