//! Polynomial endomorphisms of the algebra: tuples of images of the
//! variables, with composition, jet inversion, conjugation, commutators, and
//! the augmentation filtration.
//!
//! Composition convention, used everywhere: `compose(f, g)` substitutes the
//! images of `f` into the formulas of `g`, i.e. `(f then g)` as maps on
//! points.  Products written in group notation `a^{-1} m a` are evaluated
//! left to right via [`Endo::chain`].

use crate::coeffs::{Coeff, Scalar};
use crate::linalg::{self, Mat};
use crate::poly::{Flavor, Mono, Poly, PolyCtx};
use crate::{Error, Result};

/// An endomorphism given by the images of the variables.  Constant terms are
/// rejected by [`Endo::new`] (augmentation-preserving maps only); nothing
/// about invertibility is assumed — that is a verified property, not a type.
#[derive(Clone, PartialEq, Debug)]
pub struct Endo<C: Coeff> {
    ctx: PolyCtx,
    images: Vec<Poly<C>>,
}

impl<C: Coeff> Endo<C> {
    pub fn new(ctx: PolyCtx, images: Vec<Poly<C>>) -> Result<Self> {
        if images.len() != ctx.n {
            return Err(Error::ContextMismatch(format!(
                "{} images for {} variables",
                images.len(),
                ctx.n
            )));
        }
        for (i, im) in images.iter().enumerate() {
            if *im.ctx() != ctx {
                return Err(Error::ContextMismatch(format!("image {} has foreign context", i)));
            }
            if !im.coeff(&Mono::one(&ctx)).is_zero() {
                return Err(Error::ConstantTerm(format!("image {}", i)));
            }
        }
        Ok(Endo { ctx, images })
    }

    pub fn identity(ctx: PolyCtx) -> Self {
        let images = (0..ctx.n)
            .map(|i| Poly::var(ctx, i).expect("index in range"))
            .collect();
        Endo { ctx, images }
    }

    /// The elementary map sending `target` to `target + addend`, where the
    /// addend must not involve the target variable.
    pub fn elementary(ctx: PolyCtx, target: usize, addend: Poly<C>) -> Result<Self> {
        if target >= ctx.n {
            return Err(Error::VarOutOfRange(target, ctx.n));
        }
        if addend.terms().any(|(m, _)| m.contains_var(target)) {
            return Err(Error::NotElementary(format!(
                "addend involves the target variable x{}",
                target + 1
            )));
        }
        let mut e = Endo::identity(ctx);
        e.images[target] = e.images[target].add(&addend)?;
        Endo::new(ctx, e.images)
    }

    pub fn ctx(&self) -> &PolyCtx {
        &self.ctx
    }

    pub fn images(&self) -> &[Poly<C>] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Poly<C> {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == Endo::identity(self.ctx)
    }

    fn check_ctx(&self, other: &Endo<C>) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    /// `(f then g)`: substitute the images of `self` into the formulas of
    /// `g`, optionally modulo total degree `cap`.
    pub fn compose_capped(&self, g: &Endo<C>, cap: Option<usize>) -> Result<Endo<C>> {
        self.check_ctx(g)?;
        let images = g
            .images
            .iter()
            .map(|p| p.substitute(&self.images, cap))
            .collect::<Result<Vec<_>>>()?;
        Endo::new(self.ctx, images)
    }

    pub fn compose(&self, g: &Endo<C>) -> Result<Endo<C>> {
        self.compose_capped(g, None)
    }

    /// Apply a sequence of maps in the order written: `chain([a, b, c])` is
    /// "a, then b, then c".
    pub fn chain_capped(endos: &[&Endo<C>], cap: Option<usize>) -> Result<Endo<C>> {
        let first = endos
            .first()
            .ok_or_else(|| Error::BadShape("empty chain".into()))?;
        let mut acc = (*first).clone();
        for e in &endos[1..] {
            acc = acc.compose_capped(e, cap)?;
        }
        Ok(acc)
    }

    pub fn chain(endos: &[&Endo<C>]) -> Result<Endo<C>> {
        Endo::chain_capped(endos, None)
    }

    pub fn truncate(&self, m: usize) -> Endo<C> {
        Endo {
            ctx: self.ctx,
            images: self.images.iter().map(|p| p.truncate(m)).collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Endo<D> {
        Endo {
            ctx: self.ctx,
            images: self.images.iter().map(|p| p.map_coeffs(&f)).collect(),
        }
    }

    /// The matrix of the linear part: row i holds the coefficients of the
    /// variables in image i.
    pub fn linear_part_gen(&self) -> Vec<Vec<C>> {
        (0..self.ctx.n)
            .map(|i| {
                (0..self.ctx.n)
                    .map(|j| self.images[i].coeff(&Mono::var(&self.ctx, j)))
                    .collect()
            })
            .collect()
    }

    /// Deviation from the identity: image i minus x_i.
    pub fn deviation(&self, i: usize) -> Poly<C> {
        self.images[i]
            .sub(&Poly::var(self.ctx, i).expect("index in range"))
            .expect("same context")
    }
}

/// Where an endomorphism sits in the augmentation filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationReport {
    /// Largest n (up to the cap) with images congruent to the variables
    /// modulo the n-th power of the augmentation ideal; 0 when even the
    /// linear part differs from the identity.
    pub level: usize,
    /// Whether the linear part is a nonzero scalar multiple of the identity
    /// (the scalar-linear-part variant of the filtration).
    pub scalar_flag: bool,
    /// Lowest deviating term, absent iff the map is the identity up to the
    /// degree cap.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub image: usize,
    pub mono: Mono,
    pub coeff: String,
}

impl Endo<Scalar> {
    pub fn linear_part(&self) -> Mat {
        self.linear_part_gen()
    }

    /// A (not necessarily invertible) linear endomorphism from a matrix:
    /// image i is `sum_j mat[i][j] x_j`.
    pub fn linear(ctx: PolyCtx, mat: &Mat) -> Result<Self> {
        if mat.len() != ctx.n || mat.iter().any(|r| r.len() != ctx.n) {
            return Err(Error::ContextMismatch("matrix size vs variable count".into()));
        }
        let images = (0..ctx.n)
            .map(|i| {
                let mut p = Poly::zero(ctx);
                for j in 0..ctx.n {
                    p = p.add(&Poly::monomial(ctx, Mono::var(&ctx, j), mat[i][j].clone()))?;
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Endo::new(ctx, images)
    }

    /// Position in the augmentation filtration, computed up to degree `cap`.
    pub fn filtration(&self, cap: usize) -> FiltrationReport {
        let lin = self.linear_part();
        let field = self.ctx.field;
        let id = linalg::identity(field, self.ctx.n);
        let scalar_flag = {
            let lambda = lin[0][0].clone();
            !lambda.is_zero()
                && (0..self.ctx.n).all(|i| {
                    (0..self.ctx.n).all(|j| {
                        if i == j {
                            lin[i][j] == lambda
                        } else {
                            lin[i][j].is_zero()
                        }
                    })
                })
        };
        // lowest deviating term across all images
        let mut lowest: Option<(usize, Mono, Scalar)> = None;
        for i in 0..self.ctx.n {
            let dev = self.deviation(i);
            for (m, c) in dev.terms() {
                let better = match &lowest {
                    None => true,
                    Some((_, bm, _)) => m < bm,
                };
                if better {
                    lowest = Some((i, m.clone(), c.clone()));
                }
            }
        }
        if lin != id {
            let w = lowest.map(|(i, m, c)| Witness {
                image: i,
                mono: m,
                coeff: c.to_string(),
            });
            return FiltrationReport {
                level: 0,
                scalar_flag,
                witness: w,
            };
        }
        match lowest {
            Some((i, m, c)) => {
                let d = m.degree();
                if d > cap {
                    FiltrationReport {
                        level: cap,
                        scalar_flag,
                        witness: None,
                    }
                } else {
                    FiltrationReport {
                        level: d,
                        scalar_flag,
                        witness: Some(Witness {
                            image: i,
                            mono: m,
                            coeff: c.to_string(),
                        }),
                    }
                }
            }
            None => FiltrationReport {
                level: cap,
                scalar_flag,
                witness: None,
            },
        }
    }

    /// Degree-by-degree inverse: returns g with `compose(self, g)` equal to
    /// the identity modulo total degree `m` (and symmetrically, since the
    /// linear part is inverted exactly).  Errors when the linear part is
    /// singular.
    pub fn jet_invert(&self, m: usize) -> Result<Endo<Scalar>> {
        let lin = self.linear_part();
        let linv_mat = linalg::mat_inv(&lin)?;
        let linv = Endo::linear(self.ctx, &linv_mat)?;
        let mut g = linv.clone();
        loop {
            let e = self.compose_capped(&g, Some(m))?;
            // lowest deviation degree of e
            let mut k: Option<usize> = None;
            for i in 0..self.ctx.n {
                if let Some(d) = e.deviation(i).low_degree() {
                    k = Some(k.map_or(d, |cur| cur.min(d)));
                }
            }
            let k = match k {
                None => return Ok(g),
                Some(k) => k,
            };
            debug_assert!(k >= 2, "linear part already inverted");
            // subtract E_k(L^{-1} x) from g
            let images = (0..self.ctx.n)
                .map(|i| {
                    let ek = e.deviation(i).homogeneous(k);
                    let corr = ek.substitute(linv.images(), Some(m))?;
                    g.images[i].sub(&corr)
                })
                .collect::<Result<Vec<_>>>()?;
            g = Endo::new(self.ctx, images)?;
        }
    }

    /// Conjugation `a^{-1} m a`, evaluated left to right as written.  With a
    /// degree cap the inverse of `a` is a jet inverse; without one, `a` must
    /// be linear so the inverse is exact.
    pub fn conjugate(a: &Endo<Scalar>, m: &Endo<Scalar>, cap: Option<usize>) -> Result<Endo<Scalar>> {
        let a_inv = match cap {
            Some(c) => a.jet_invert(c)?,
            None => {
                let lin = a.linear_part();
                if *a != Endo::linear(a.ctx, &lin)? {
                    return Err(Error::NotInvertible(
                        "exact conjugation needs a linear conjugator or a degree cap".into(),
                    ));
                }
                Endo::linear(a.ctx, &linalg::mat_inv(&lin)?)?
            }
        };
        Endo::chain_capped(&[a, m, &a_inv], cap)
    }

    /// Group commutator `f^{-1} g^{-1} f g` (written left to right), modulo
    /// degree `cap`.
    pub fn group_commutator_capped(
        f: &Endo<Scalar>,
        g: &Endo<Scalar>,
        cap: usize,
    ) -> Result<Endo<Scalar>> {
        let finv = f.jet_invert(cap)?;
        let ginv = g.jet_invert(cap)?;
        Endo::chain_capped(&[g, f, &ginv, &finv], Some(cap))
    }

    /// Decompose an elementary map into one elementary per addend monomial.
    /// Errors unless exactly one image differs from its variable by a
    /// polynomial free of that variable.
    pub fn elementary_split(&self) -> Result<Vec<Endo<Scalar>>> {
        let mut target: Option<usize> = None;
        for i in 0..self.ctx.n {
            if !self.deviation(i).is_zero() {
                if target.is_some() {
                    return Err(Error::NotElementary("more than one image deviates".into()));
                }
                target = Some(i);
            }
        }
        let t = target.ok_or_else(|| Error::NotElementary("identity map".into()))?;
        let dev = self.deviation(t);
        if dev.terms().any(|(m, _)| m.contains_var(t)) {
            return Err(Error::NotElementary(
                "addend involves the target variable".into(),
            ));
        }
        dev.terms()
            .map(|(m, c)| {
                Endo::elementary(
                    self.ctx,
                    t,
                    Poly::monomial(self.ctx, m.clone(), c.clone()),
                )
            })
            .collect()
    }

    /// Determinant of the Jacobian matrix, modulo degree `cap`; commutative
    /// maps only.
    pub fn jacobian_det(&self, cap: Option<usize>) -> Result<Poly<Scalar>> {
        if self.ctx.flavor != Flavor::Comm {
            return Err(Error::WrongFlavor("jacobian needs commutative images".into()));
        }
        let n = self.ctx.n;
        let mut jac = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(self.images[i].partial(j)?);
            }
            jac.push(row);
        }
        poly_det(&jac, self.ctx, cap)
    }
}

/// Cofactor-expansion determinant of a small polynomial matrix.
fn poly_det(m: &[Vec<Poly<Scalar>>], ctx: PolyCtx, cap: Option<usize>) -> Result<Poly<Scalar>> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut det = Poly::zero(ctx);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<Scalar>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let sub = poly_det(&minor, ctx, cap)?;
        let signed = if col % 2 == 0 { sub } else { sub.neg() };
        det = det.add(&m[0][col].mul_capped(&signed, cap)?)?;
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;

    fn ctx3() -> PolyCtx {
        PolyCtx::comm(3, FieldSpec::Q)
    }
    fn s(v: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Q, v)
    }
    fn var(ctx: PolyCtx, i: usize) -> Poly<Scalar> {
        Poly::var(ctx, i).unwrap()
    }

    /// x -> x + y^2 on two variables (and friends) pin the composition
    /// convention.
    #[test]
    fn composition_convention() {
        let ctx = PolyCtx::comm(2, FieldSpec::Q);
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let f = Endo::new(ctx, vec![x.add(&y.mul(&y).unwrap()).unwrap(), y.clone()]).unwrap();
        let g = Endo::new(ctx, vec![x.clone(), y.add(&x.mul(&x).unwrap()).unwrap()]).unwrap();
        let fg = f.compose(&g).unwrap();
        // x -> x + y^2, y -> y + (x + y^2)^2
        let xy2 = x.add(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(fg.image(0), &xy2);
        assert_eq!(fg.image(1), &y.add(&xy2.mul(&xy2).unwrap()).unwrap());
    }

    #[test]
    fn constant_terms_rejected() {
        let ctx = ctx3();
        let bad = var(ctx, 0).add(&Poly::one(ctx)).unwrap();
        assert!(matches!(
            Endo::new(ctx, vec![bad, var(ctx, 1), var(ctx, 2)]),
            Err(Error::ConstantTerm(_))
        ));
    }

    #[test]
    fn filtration_levels() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let z = var(ctx, 2);
        // x -> x + y^3: level 3
        let f = Endo::new(
            ctx,
            vec![x.add(&y.pow_capped(3, None).unwrap()).unwrap(), y.clone(), z.clone()],
        )
        .unwrap();
        let rep = f.filtration(10);
        assert_eq!(rep.level, 3);
        assert!(rep.scalar_flag); // identity linear part is scalar
        let w = rep.witness.unwrap();
        assert_eq!(w.image, 0);
        assert_eq!(w.mono, Mono::Comm(vec![0, 3, 0]));
        // non-identity linear part: level 0
        let g = Endo::new(ctx, vec![x.add(&y).unwrap(), y.clone(), z.clone()]).unwrap();
        let rep = g.filtration(10);
        assert_eq!(rep.level, 0);
        assert!(!rep.scalar_flag);
        assert!(rep.witness.is_some());
        // scalar linear part 2*id
        let h = Endo::new(
            ctx,
            vec![x.scale(&s(2)), y.scale(&s(2)), z.scale(&s(2))],
        )
        .unwrap();
        let rep = h.filtration(10);
        assert_eq!(rep.level, 0);
        assert!(rep.scalar_flag);
        // identity: witness absent, level = cap
        let rep = Endo::identity(ctx).filtration(7);
        assert_eq!(rep.level, 7);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn jet_inverse_of_triangular_map() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let z = var(ctx, 2);
        let f = Endo::new(
            ctx,
            vec![
                x.add(&y.mul(&z).unwrap()).unwrap(),
                y.add(&z.pow_capped(2, None).unwrap()).unwrap(),
                z.clone(),
            ],
        )
        .unwrap();
        let m = 9;
        let g = f.jet_invert(m).unwrap();
        let both = f.compose_capped(&g, Some(m)).unwrap();
        assert_eq!(both, Endo::identity(ctx).truncate(m));
        let other = g.compose_capped(&f, Some(m)).unwrap();
        assert_eq!(other, Endo::identity(ctx).truncate(m));
    }

    #[test]
    fn jet_inverse_needs_invertible_linear_part() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let f = Endo::new(ctx, vec![x.clone(), y.clone(), x.mul(&y).unwrap()]).unwrap();
        assert_eq!(f.jet_invert(4), Err(Error::SingularLinearPart));
    }

    /// The commutator of x -> x + y^2 and y -> y + x^2 starts with
    /// x + 2yx^2, in line with the closed formula for such pairs.
    #[test]
    fn group_commutator_matches_closed_form() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let z = var(ctx, 2);
        let psi1 = Endo::new(
            ctx,
            vec![x.add(&y.pow_capped(2, None).unwrap()).unwrap(), y.clone(), z.clone()],
        )
        .unwrap();
        let psi2 = Endo::new(
            ctx,
            vec![x.clone(), y.add(&x.pow_capped(2, None).unwrap()).unwrap(), z.clone()],
        )
        .unwrap();
        let c = Endo::group_commutator_capped(&psi1, &psi2, 4).unwrap();
        // modulo degree 4: x -> x + 2*y*x^2, y -> y - 2*x*y^2, z fixed
        let expect_x = x
            .add(&Poly::monomial(ctx, Mono::Comm(vec![2, 1, 0]), s(2)))
            .unwrap();
        let expect_y = y
            .add(&Poly::monomial(ctx, Mono::Comm(vec![1, 2, 0]), s(-2)))
            .unwrap();
        assert_eq!(c.image(0), &expect_x);
        assert_eq!(c.image(1), &expect_y);
        assert_eq!(c.image(2), &z);
        assert_eq!(c.filtration(4).level, 3);
    }

    #[test]
    fn elementary_split_and_errors() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let addend = y
            .pow_capped(2, None)
            .unwrap()
            .add(&y.mul(&var(ctx, 2)).unwrap())
            .unwrap();
        let e = Endo::elementary(ctx, 0, addend).unwrap();
        let parts = e.elementary_split().unwrap();
        assert_eq!(parts.len(), 2);
        let recombined = parts[0].compose(&parts[1]).unwrap();
        assert_eq!(recombined, e);
        // x -> x + x*y is not elementary
        assert!(Endo::elementary(ctx, 0, x.mul(&y).unwrap()).is_err());
        // two deviating images is not elementary either
        let two = Endo::new(
            ctx,
            vec![
                x.add(&y.pow_capped(2, None).unwrap()).unwrap(),
                y.add(&var(ctx, 2).pow_capped(2, None).unwrap()).unwrap(),
                var(ctx, 2),
            ],
        )
        .unwrap();
        assert!(two.elementary_split().is_err());
    }

    #[test]
    fn jacobian_of_triangular_map_is_constant() {
        let ctx = ctx3();
        let x = var(ctx, 0);
        let y = var(ctx, 1);
        let z = var(ctx, 2);
        let f = Endo::new(
            ctx,
            vec![
                x.add(&y.mul(&z).unwrap()).unwrap(),
                y.add(&z.pow_capped(2, None).unwrap()).unwrap(),
                z.scale(&s(3)),
            ],
        )
        .unwrap();
        let det = f.jacobian_det(None).unwrap();
        assert_eq!(det, Poly::constant(ctx, s(3)));
    }
}
