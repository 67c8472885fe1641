//! Synthesis of elementary automorphisms as words over a fixed tame
//! generator set: invertible linear maps plus the single quadratic
//! elementary z -> z + x*y.
//!
//! The variable roles are fixed by index: 0 = x, 1 = y, 2 = z (and 3 = t in
//! the free algebra on four variables).  Commutative synthesis expresses any
//! two-variable addend through powers of linear forms; the noncommutative
//! recursion peels power blocks off the target monomial, trading each block
//! for a conjugation by an already-synthesized word.

use num_rational::BigRational;
use num_traits::Zero;

use crate::coeffs::{FieldSpec, Scalar};
use crate::linalg::{self, Mat};
use crate::poly::{Flavor, Mono, Poly, PolyCtx};
use crate::word::{perm_gen, swap_gen, xy_gen, GenWord, Generator};
use crate::{Error, Result};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;

fn check_workspace(ctx: &PolyCtx) -> Result<()> {
    if ctx.n < 3 {
        return Err(Error::ContextMismatch(
            "synthesis needs at least variables x, y, z".into(),
        ));
    }
    Ok(())
}

/// A word expanding to z -> z + b*x^k.  Works in both flavors; the
/// construction is characteristic-free.
///
/// The recursion: given w for z -> z + b*x^(k-1), conjugate by the y/z swap
/// to move the addend onto y, conjugate the xy generator by that, and cancel
/// the leftover xy term.
pub fn synth_power(ctx: &PolyCtx, b: &Scalar, k: usize) -> Result<GenWord> {
    check_workspace(ctx)?;
    if b.is_zero() {
        return Ok(GenWord::empty(*ctx));
    }
    if k == 0 {
        return Err(Error::ConstantTerm("cannot synthesize a constant addend".into()));
    }
    if k == 1 {
        let mut mat = linalg::identity(ctx.field, ctx.n);
        mat[Z][X] = b.clone();
        return Ok(GenWord::single(*ctx, Generator::Linear(mat)));
    }
    let prev = synth_power(ctx, b, k - 1)?;
    // tau: y -> y + b*x^(k-1)
    let tau = prev.conjugate_by(&swap_gen(ctx, Y, Z));
    let psi = GenWord::single(*ctx, xy_gen(ctx, Z));
    // tau . psi . tau^-1 expands to z -> z + x*y + b*x^k; cancel the x*y.
    Ok(tau
        .concat(&psi)
        .concat(&tau.invert())
        .concat(&psi.invert()))
}

/// A word expanding to z -> z + b*y*x^k (commutative, characteristic != 2).
///
/// Uses the doubling trick: conjugating z -> z + (b/2)*y^2 by y -> y + x^k
/// produces (b/2)*(y + x^k)^2; subtracting the pure squares leaves b*y*x^k.
pub fn synth_edge(ctx: &PolyCtx, b: &Scalar, k: usize) -> Result<GenWord> {
    check_workspace(ctx)?;
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor(
            "the edge construction squares a binomial, so it is commutative-only".into(),
        ));
    }
    if ctx.field.characteristic() == 2 {
        return Err(Error::CharTwo("edge synthesis divides by 2".into()));
    }
    if b.is_zero() {
        return Ok(GenWord::empty(*ctx));
    }
    if k == 0 {
        // z -> z + b*y is linear
        let mut mat = linalg::identity(ctx.field, ctx.n);
        mat[Z][Y] = b.clone();
        return Ok(GenWord::single(*ctx, Generator::Linear(mat)));
    }
    let half = b.div(&Scalar::from_int(ctx.field, 2))?;
    // z -> z + (b/2) * y^2
    let y2 = synth_power(ctx, &half, 2)?.conjugate_by(&swap_gen(ctx, X, Y));
    // y -> y + x^k
    let tau = synth_power(ctx, &Scalar::one(ctx.field), k)?.conjugate_by(&swap_gen(ctx, Y, Z));
    // z -> z + (b/2)*(y + x^k)^2, then strip (b/2)*y^2 and (b/2)*x^(2k)
    let conj = tau.concat(&y2).concat(&tau.invert());
    let x2k = synth_power(ctx, &half, 2 * k)?;
    Ok(conj.concat(&y2.invert()).concat(&x2k.invert()))
}

/// One summand of a power-basis expression: `coeff * form^d`, where `form`
/// is the first row of the invertible 2x2 matrix `mat` (acting on x, y).
#[derive(Clone, Debug)]
pub struct PowerPiece {
    pub coeff: Scalar,
    pub mat: [[Scalar; 2]; 2],
}

fn form_column(a: &Scalar, b: &Scalar, d: usize, field: FieldSpec) -> Vec<Scalar> {
    // coefficients of (a*x + b*y)^d in the basis x^d, x^(d-1)y, ..., y^d
    let mut col = Vec::with_capacity(d + 1);
    let mut binom = Scalar::one(field);
    for j in 0..=d {
        // binom = C(d, j) built incrementally over Z, mapped into the field
        let apow = a.pow((d - j) as i64).expect("nonneg power");
        let bpow = b.pow(j as i64).expect("nonneg power");
        col.push(binom.mul(&apow).mul(&bpow));
        if j < d {
            // over F_p the incremental division can hit zero denominators for
            // p <= d; compute the next binomial over the integers instead
            let next = binomial_scalar(field, d, j + 1);
            binom = next;
        }
    }
    col
}

fn binomial_scalar(field: FieldSpec, n: usize, k: usize) -> Scalar {
    let mut num = num_bigint::BigInt::from(1);
    for i in 0..k {
        num *= num_bigint::BigInt::from((n - i) as u64);
    }
    let mut den = num_bigint::BigInt::from(1);
    for i in 1..=k {
        den *= num_bigint::BigInt::from(i as u64);
    }
    let q = num / den;
    Scalar::from_bigint(field, q)
}

fn homogeneous_xy_vector(p: &Poly<Scalar>, d: usize) -> Result<Vec<Scalar>> {
    let ctx = p.ctx();
    let field = ctx.field;
    let mut v = vec![Scalar::zero(field); d + 1];
    for (m, c) in p.terms() {
        if m.degree() != d {
            return Err(Error::BadShape(format!(
                "expected a homogeneous polynomial of degree {}",
                d
            )));
        }
        for i in 2..ctx.n {
            if m.contains_var(i) {
                return Err(Error::BadShape("support must be contained in x, y".into()));
            }
        }
        let j = m.degree_in(Y);
        v[j] = v[j].add(c);
    }
    Ok(v)
}

/// Express a homogeneous degree-d polynomial in x, y as a combination of
/// d-th powers of linear forms.  Over F_p this needs p > d distinct slopes;
/// an unexpressible target reports a span deficiency with the prime.
pub fn express_in_power_basis(target: &Poly<Scalar>, d: usize) -> Result<Vec<PowerPiece>> {
    let ctx = *target.ctx();
    let field = ctx.field;
    if let FieldSpec::Fp(p) = field {
        if (p as usize) <= d {
            return Err(Error::SmallField {
                p,
                needed: format!("more than {} distinct slopes for degree {}", d, d),
            });
        }
    }
    let tvec = homogeneous_xy_vector(target, d)?;
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    // candidate forms: x, y, and x + s*y for s = 1..d
    let mut mats: Vec<[[Scalar; 2]; 2]> = Vec::new();
    mats.push([[one.clone(), zero.clone()], [zero.clone(), one.clone()]]); // x
    mats.push([[zero.clone(), one.clone()], [one.clone(), zero.clone()]]); // y
    for s in 1..=d as i64 {
        let sv = Scalar::from_int(field, s);
        mats.push([[one.clone(), sv], [zero.clone(), one.clone()]]); // x + s*y
    }
    let cols: Vec<Vec<Scalar>> = mats
        .iter()
        .map(|m| form_column(&m[0][0], &m[0][1], d, field))
        .collect();
    let sol = linalg::solve_columns(&cols, &tvec).ok_or_else(|| {
        Error::SpanDeficiency(format!(
            "degree-{} powers of linear forms do not span the target over {}",
            d, field
        ))
    })?;
    Ok(sol
        .into_iter()
        .zip(mats)
        .filter(|(c, _)| !c.is_zero())
        .map(|(coeff, mat)| PowerPiece { coeff, mat })
        .collect())
}

/// Extend a 2x2 matrix on (x, y) to the full variable set.
fn extend_mat(ctx: &PolyCtx, m2: &[[Scalar; 2]; 2]) -> Mat {
    let mut mat = linalg::identity(ctx.field, ctx.n);
    for i in 0..2 {
        for j in 0..2 {
            mat[i][j] = m2[i][j].clone();
        }
    }
    mat
}

/// Word for z -> z + c * x^k * y^l (commutative), choosing the power-basis
/// route when the characteristic does not divide k+l and the edge route
/// otherwise.
pub fn synth_monomial(ctx: &PolyCtx, c: &Scalar, k: usize, l: usize) -> Result<GenWord> {
    check_workspace(ctx)?;
    if ctx.flavor != Flavor::Comm {
        return Err(Error::WrongFlavor("monomial synthesis is commutative".into()));
    }
    if c.is_zero() {
        return Ok(GenWord::empty(*ctx));
    }
    let d = k + l;
    if d == 0 {
        return Err(Error::ConstantTerm("cannot synthesize a constant addend".into()));
    }
    if l == 0 {
        return synth_power(ctx, c, k);
    }
    if k == 0 {
        return Ok(synth_power(ctx, c, l)?.conjugate_by(&swap_gen(ctx, X, Y)));
    }
    if !ctx.field.char_divides(d as u64) {
        // route through d-th powers of linear forms
        let target = Poly::monomial(
            *ctx,
            {
                let mut e = vec![0u16; ctx.n];
                e[X] = k as u16;
                e[Y] = l as u16;
                Mono::Comm(e)
            },
            c.clone(),
        );
        if target.is_zero() {
            return Ok(GenWord::empty(*ctx));
        }
        let pieces = express_in_power_basis(&target, d)?;
        let mut word = GenWord::empty(*ctx);
        for piece in pieces {
            let base = synth_power(ctx, &piece.coeff, d)?;
            let lin = Generator::linear(extend_mat(ctx, &piece.mat))?;
            word = word.concat(&base.conjugate_by(&lin));
        }
        // the pieces all commute (same target variable), so order is free
        Ok(word)
    } else {
        // characteristic divides d, so it cannot divide d-1: route through
        // products (second form) * (first form)^(d-1)
        synth_via_edge_basis(ctx, c, k, l)
    }
}

fn synth_via_edge_basis(ctx: &PolyCtx, c: &Scalar, k: usize, l: usize) -> Result<GenWord> {
    let d = k + l;
    let field = ctx.field;
    if field.characteristic() == 2 {
        return Err(Error::CharTwo("edge synthesis divides by 2".into()));
    }
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    // candidate (form1, form2) pairs with form2*form1^(d-1) as generators;
    // the matrix rows are (form1; form2) and must be independent
    let max_s: usize = match field {
        FieldSpec::Q => d + 1,
        FieldSpec::Fp(p) => (p as usize - 1).min(d + 1),
    };
    let mut mats: Vec<[[Scalar; 2]; 2]> = Vec::new();
    for s in 0..=max_s as i64 {
        let sv = Scalar::from_int(field, s);
        mats.push([[one.clone(), sv.clone()], [zero.clone(), one.clone()]]); // (x+s*y, y)
        if s != 0 {
            mats.push([[one.clone(), sv], [one.clone(), zero.clone()]]); // (x+s*y, x)
        }
    }
    mats.push([[zero.clone(), one.clone()], [one.clone(), zero.clone()]]); // (y, x)
    let cols: Vec<Vec<Scalar>> = mats
        .iter()
        .map(|m| {
            // column of form2 * form1^(d-1)
            let l1 = form_column(&m[0][0], &m[0][1], d - 1, field);
            let mut col = vec![Scalar::zero(field); d + 1];
            for (j, cf) in l1.iter().enumerate() {
                // multiply x^(d-1-j) y^j by form2 = a*x + b*y
                col[j] = col[j].add(&cf.mul(&m[1][0]));
                col[j + 1] = col[j + 1].add(&cf.mul(&m[1][1]));
            }
            col
        })
        .collect();
    let mut tvec = vec![Scalar::zero(field); d + 1];
    tvec[l] = c.clone();
    let sol = linalg::solve_columns(&cols, &tvec).ok_or_else(|| {
        Error::SpanDeficiency(format!(
            "form*form^{} products do not span the target over {}",
            d - 1,
            field
        ))
    })?;
    let mut word = GenWord::empty(*ctx);
    for (coeff, mat) in sol.into_iter().zip(mats) {
        if coeff.is_zero() {
            continue;
        }
        let base = synth_edge(ctx, &coeff, d - 1)?;
        let lin = Generator::linear(extend_mat(ctx, &mat))?;
        word = word.concat(&base.conjugate_by(&lin));
    }
    Ok(word)
}

/// Word for the commutative elementary z -> z + P(x, y), one monomial at a
/// time.
pub fn synth_elementary(ctx: &PolyCtx, p: &Poly<Scalar>) -> Result<GenWord> {
    check_workspace(ctx)?;
    if !p.coeff(&Mono::one(ctx)).is_zero() {
        return Err(Error::ConstantTerm("elementary addend has a constant term".into()));
    }
    let mut word = GenWord::empty(*ctx);
    for (m, c) in p.terms() {
        for i in 2..ctx.n {
            if m.contains_var(i) {
                return Err(Error::BadShape("addend must involve only x and y".into()));
            }
        }
        word = word.concat(&synth_monomial(ctx, c, m.degree_in(X), m.degree_in(Y))?);
    }
    Ok(word)
}

/// Number of maximal power blocks of a word in x, y: the "height".
pub fn height(word: &[u8]) -> usize {
    let mut h = 0;
    let mut prev: Option<u8> = None;
    for &v in word {
        if prev != Some(v) {
            h += 1;
            prev = Some(v);
        }
    }
    h
}

/// Relabel a word's variables through the permutation `perm` (variable i
/// becomes variable perm[i]) by conjugation.
fn relabel(word: &GenWord, ctx: &PolyCtx, perm: &[usize]) -> GenWord {
    word.conjugate_by(&perm_gen(ctx, perm))
}

/// Word for t -> t + c * x_v * x^k (free algebra, four variables), the
/// noncommutative edge step.
fn nc_edge_word(ctx: &PolyCtx, c: &Scalar, k: usize) -> Result<GenWord> {
    // canonical: t -> t + c*z*x^k
    // beta: t -> t + c*z*y, a relabeling of z -> z + c*x*y
    let x = Poly::var(*ctx, X)?;
    let y = Poly::var(*ctx, Y)?;
    let base = GenWord::single(
        *ctx,
        Generator::elementary(ctx, Z, x.mul(&y)?.scale(c))?,
    );
    let beta = relabel(&base, ctx, &[Z, Y, T, X]);
    if k == 0 {
        return Ok(beta);
    }
    // alpha: y -> y + x^k
    let alpha = synth_power(ctx, &Scalar::one(ctx.field), k)?.conjugate_by(&swap_gen(ctx, Y, Z));
    // alpha . beta . alpha^-1 : t -> t + c*z*x^k + c*z*y; strip the tail
    Ok(alpha
        .concat(&beta)
        .concat(&alpha.invert())
        .concat(&beta.invert()))
}

/// Recursive synthesis of z -> z + c*M for a word M in x, y: peel the
/// trailing power block, which lowers the height by one.
fn nc_word_for(ctx: &PolyCtx, c: &Scalar, m: &[u8], depth: usize, limit: usize) -> Result<GenWord> {
    if depth > limit {
        return Err(Error::DepthExceeded(limit));
    }
    if m.is_empty() {
        return Err(Error::ConstantTerm("cannot synthesize a constant addend".into()));
    }
    if m.iter().any(|&v| v as usize >= 2) {
        return Err(Error::BadShape("monomial must involve only x and y".into()));
    }
    let last = *m.last().unwrap();
    if m.iter().all(|&v| v == last) {
        // a pure power block
        let w = synth_power(ctx, c, m.len())?;
        return Ok(if last == X as u8 {
            w
        } else {
            w.conjugate_by(&swap_gen(ctx, X, Y))
        });
    }
    let k = m.iter().rev().take_while(|&&v| v == last).count();
    let prefix = &m[..m.len() - k];
    // phi: z -> z + c*M' (recursively), alpha: t -> t + z*(last)^k
    let phi = nc_word_for(ctx, c, prefix, depth + 1, limit)?;
    let alpha = {
        let w = nc_edge_word(ctx, &Scalar::one(ctx.field), k)?;
        if last == X as u8 {
            w
        } else {
            // swap the roles of x and y in the trailing block
            w.conjugate_by(&swap_gen(ctx, X, Y))
        }
    };
    // phi . alpha . phi^-1 : t -> t + c*M + z*(last)^k; strip, then move t to z
    let u = phi
        .concat(&alpha)
        .concat(&phi.invert())
        .concat(&alpha.invert());
    Ok(u.conjugate_by(&swap_gen(ctx, Z, T)))
}

/// Word over {linear, z -> z + x*y} expanding to the elementary map
/// `x_target -> x_target + P(x, y)` in the free algebra on four variables.
pub fn synth_nc_elementary(
    ctx: &PolyCtx,
    target: usize,
    p: &Poly<Scalar>,
    depth_limit: usize,
) -> Result<GenWord> {
    if ctx.flavor != Flavor::Free || ctx.n < 4 {
        return Err(Error::ContextMismatch(
            "noncommutative synthesis needs the free algebra on four variables".into(),
        ));
    }
    if target < 2 || target >= ctx.n {
        return Err(Error::VarOutOfRange(target, ctx.n));
    }
    if !p.coeff(&Mono::one(ctx)).is_zero() {
        return Err(Error::ConstantTerm("elementary addend has a constant term".into()));
    }
    let mut word = GenWord::empty(*ctx);
    for (m, c) in p.terms() {
        word = word.concat(&nc_word_for(ctx, c, m.word(), 0, depth_limit)?);
    }
    if target != Z {
        word = word.conjugate_by(&swap_gen(ctx, Z, target));
    }
    Ok(word)
}

/// Result of normalizing a chain of torus relations: a particular exponent
/// solution plus the lattice of homogeneous solutions.
#[derive(Clone, Debug)]
pub struct TorusNormalization {
    /// exponents[i][j]: the exponent of beta_j in alpha_{i+1} (n rows).
    pub exponents: Vec<Vec<BigRational>>,
    /// Basis of the homogeneous solution space (each vector has n entries,
    /// shared across all beta coordinates).
    pub kernel: Vec<Vec<BigRational>>,
}

fn scalar_to_rational(s: &Scalar) -> BigRational {
    match s {
        Scalar::Q(r) => r.clone(),
        Scalar::Fp { r, .. } => BigRational::from(num_bigint::BigInt::from(*r)),
    }
}

/// Solve the cyclic relations `beta_i * alpha_{i+1}^-1 * alpha_{i+2}^-1 *
/// alpha_i = 1` (i = 1..n-1, indices mod n) for alpha_1..alpha_n in the
/// multiplicative span of the beta_j, working additively in exponent space.
/// The system is underdetermined; the full solution lattice is returned.
pub fn torus_normalize(betas: &[Scalar]) -> Result<TorusNormalization> {
    let m = betas.len(); // = n - 1 relations
    let n = m + 1;
    if m == 0 {
        return Err(Error::BadShape("need at least one relation".into()));
    }
    for b in betas {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
    }
    let field = FieldSpec::Q;
    // rows of the relation matrix in exponent space: u_i - u_{i+1} - u_{i+2}
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..m {
        let mut row = vec![Scalar::zero(field); n];
        row[i] = row[i].add(&Scalar::one(field));
        row[(i + 1) % n] = row[(i + 1) % n].sub(&Scalar::one(field));
        row[(i + 2) % n] = row[(i + 2) % n].sub(&Scalar::one(field));
        rows.push(row);
    }
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    // one right-hand side per beta coordinate: -delta_{ij}
    let mut exponents = vec![vec![BigRational::zero(); m]; n];
    for j in 0..m {
        let mut rhs = vec![Scalar::zero(field); m];
        rhs[j] = Scalar::from_int(field, -1);
        let sol = linalg::solve_columns(&cols, &rhs)
            .ok_or_else(|| Error::SpanDeficiency("torus relation system inconsistent".into()))?;
        for i in 0..n {
            exponents[i][j] = scalar_to_rational(&sol[i]);
        }
    }
    let kernel = linalg::kernel(&rows, n, field)
        .into_iter()
        .map(|v| v.iter().map(scalar_to_rational).collect())
        .collect();
    Ok(TorusNormalization { exponents, kernel })
}

impl TorusNormalization {
    /// Formal check that the exponents satisfy every relation.
    pub fn verify(&self) -> bool {
        let n = self.exponents.len();
        let m = n - 1;
        for i in 0..m {
            for j in 0..m {
                let mut acc = self.exponents[i][j].clone();
                acc -= &self.exponents[(i + 1) % n][j];
                acc -= &self.exponents[(i + 2) % n][j];
                if i == j {
                    acc += BigRational::from(num_bigint::BigInt::from(1));
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
