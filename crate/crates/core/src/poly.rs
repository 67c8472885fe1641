//! Sparse multivariate polynomials, commutative and free (noncommutative),
//! over any [`Coeff`] ring.
//!
//! A polynomial carries its context (flavor, number of variables, field);
//! operations across different contexts are errors.  Monomials are stored in
//! a `BTreeMap` under a fixed degree-then-lex order, which makes printing and
//! leading/trailing term queries canonical.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::coeffs::{Coeff, FieldSpec, Scalar};
use crate::{Error, Result};

/// Commutative polynomial algebra or free associative algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Flavor {
    Comm,
    Free,
}

/// The ambient algebra: flavor, variable count, coefficient field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PolyCtx {
    pub flavor: Flavor,
    pub n: usize,
    pub field: FieldSpec,
}

impl PolyCtx {
    pub fn comm(n: usize, field: FieldSpec) -> Self {
        PolyCtx {
            flavor: Flavor::Comm,
            n,
            field,
        }
    }
    pub fn free(n: usize, field: FieldSpec) -> Self {
        PolyCtx {
            flavor: Flavor::Free,
            n,
            field,
        }
    }
}

/// A monomial: exponent vector (commutative) or word of variable indices
/// (free).  The two variants never mix inside one polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Mono {
    Comm(Vec<u16>),
    Free(Vec<u8>),
}

impl Mono {
    pub fn one(ctx: &PolyCtx) -> Self {
        match ctx.flavor {
            Flavor::Comm => Mono::Comm(vec![0; ctx.n]),
            Flavor::Free => Mono::Free(vec![]),
        }
    }

    pub fn var(ctx: &PolyCtx, i: usize) -> Self {
        match ctx.flavor {
            Flavor::Comm => {
                let mut e = vec![0u16; ctx.n];
                e[i] = 1;
                Mono::Comm(e)
            }
            Flavor::Free => Mono::Free(vec![i as u8]),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Mono::Comm(e) => e.iter().map(|&x| x as usize).sum(),
            Mono::Free(w) => w.len(),
        }
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> usize {
        match self {
            Mono::Comm(e) => e[i] as usize,
            Mono::Free(w) => w.iter().filter(|&&v| v as usize == i).count(),
        }
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.degree_in(i) > 0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        match (self, other) {
            (Mono::Comm(a), Mono::Comm(b)) => {
                Mono::Comm(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Mono::Free(a), Mono::Free(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Mono::Free(w)
            }
            _ => panic!("mixed monomial flavors"),
        }
    }

    /// The commutative exponent vector; panics on free monomials.
    pub fn exps(&self) -> &[u16] {
        match self {
            Mono::Comm(e) => e,
            Mono::Free(_) => panic!("free monomial has no exponent vector"),
        }
    }

    /// The free word; panics on commutative monomials.
    pub fn word(&self) -> &[u8] {
        match self {
            Mono::Free(w) => w,
            Mono::Comm(_) => panic!("commutative monomial has no word"),
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Mono::Comm(a), Mono::Comm(b)) => {
                let da: usize = a.iter().map(|&x| x as usize).sum();
                let db: usize = b.iter().map(|&x| x as usize).sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
            (Mono::Free(a), Mono::Free(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Mono::Comm(_), Mono::Free(_)) => Ordering::Less,
            (Mono::Free(_), Mono::Comm(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial over the coefficient ring `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C: Coeff> {
    ctx: PolyCtx,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(ctx: PolyCtx) -> Self {
        Poly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: PolyCtx, c: C) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Mono::one(&ctx), c);
        }
        p
    }

    pub fn one(ctx: PolyCtx) -> Self {
        Poly::constant(ctx, C::one(ctx.field))
    }

    pub fn var(ctx: PolyCtx, i: usize) -> Result<Self> {
        if i >= ctx.n {
            return Err(Error::VarOutOfRange(i, ctx.n));
        }
        let mut p = Poly::zero(ctx);
        p.terms.insert(Mono::var(&ctx, i), C::one(ctx.field));
        Ok(p)
    }

    pub fn monomial(ctx: PolyCtx, m: Mono, c: C) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ctx: PolyCtx, terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Poly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &PolyCtx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| C::zero(self.ctx.field))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest total degree among nonzero terms; `None` for zero.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(cur) => {
                let s = cur.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_ctx(&self, other: &Poly<C>) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly<C>) -> Result<Poly<C>> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly<C>) -> Result<Poly<C>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Poly<C> {
        let mut out = Poly::zero(self.ctx);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    /// Product, optionally dropping all terms of total degree >= `cap`.
    pub fn mul_capped(&self, other: &Poly<C>, cap: Option<usize>) -> Result<Poly<C>> {
        self.check_ctx(other)?;
        let mut out = Poly::zero(self.ctx);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if let Some(cap) = cap {
                    if da + mb.degree() >= cap {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Poly<C>) -> Result<Poly<C>> {
        self.mul_capped(other, None)
    }

    pub fn pow_capped(&self, k: usize, cap: Option<usize>) -> Result<Poly<C>> {
        let mut acc = Poly::one(self.ctx);
        for _ in 0..k {
            acc = acc.mul_capped(self, cap)?;
        }
        Ok(acc)
    }

    /// Drop every term of total degree >= `m`.
    pub fn truncate(&self, m: usize) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(mo, _)| mo.degree() < m)
                .map(|(mo, c)| (mo.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous(&self, d: usize) -> Poly<C> {
        Poly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(mo, _)| mo.degree() == d)
                .map(|(mo, c)| (mo.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitute `images[i]` for variable i, optionally modulo degree `cap`.
    /// Works in both flavors; in the free algebra factor order is preserved.
    pub fn substitute(&self, images: &[Poly<C>], cap: Option<usize>) -> Result<Poly<C>> {
        if images.len() != self.ctx.n {
            return Err(Error::ContextMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.ctx.n
            )));
        }
        for im in images {
            if im.ctx != self.ctx {
                return Err(Error::ContextMismatch(
                    "substitution image context differs".into(),
                ));
            }
        }
        let mut out = Poly::zero(self.ctx);
        // memoize powers of each image in the commutative case
        let mut powers: HashMap<(usize, u16), Poly<C>> = HashMap::new();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(self.ctx, c.clone());
            match m {
                Mono::Comm(exps) => {
                    for (i, &e) in exps.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        let pw = match powers.get(&(i, e)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = images[i].pow_capped(e as usize, cap)?;
                                powers.insert((i, e), p.clone());
                                p
                            }
                        };
                        acc = acc.mul_capped(&pw, cap)?;
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
                Mono::Free(wrd) => {
                    for &v in wrd {
                        acc = acc.mul_capped(&images[v as usize], cap)?;
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Ring commutator f*g - g*f (identically zero in the commutative case).
    pub fn commutator(&self, other: &Poly<C>) -> Result<Poly<C>> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Split into (part supported only on `vars`, rest).
    pub fn split_by_support(&self, vars: &[usize]) -> (Poly<C>, Poly<C>) {
        let mut inside = Poly::zero(self.ctx);
        let mut outside = Poly::zero(self.ctx);
        for (m, c) in &self.terms {
            let ok = (0..self.ctx.n).all(|i| vars.contains(&i) || !m.contains_var(i));
            if ok {
                inside.add_term(m.clone(), c.clone());
            } else {
                outside.add_term(m.clone(), c.clone());
            }
        }
        (inside, outside)
    }

    /// In the top-degree homogeneous component, the lexicographically minimal
    /// term under the variable precedence given by `order` (first entry is
    /// the smallest variable).  Errors on the zero polynomial.
    pub fn lex_min_term(&self, order: &[usize]) -> Result<(Mono, C)> {
        let d = self
            .degree()
            .ok_or_else(|| Error::BadShape("lex_min_term of zero polynomial".into()))?;
        let mut rank = vec![0usize; self.ctx.n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        // compare monomials as sorted words of variable ranks
        let key = |m: &Mono| -> Vec<usize> {
            match m {
                Mono::Comm(e) => {
                    let mut w = Vec::new();
                    let mut idx: Vec<usize> = (0..e.len()).collect();
                    idx.sort_by_key(|&i| rank[i]);
                    for i in idx {
                        for _ in 0..e[i] {
                            w.push(rank[i]);
                        }
                    }
                    w
                }
                Mono::Free(wrd) => wrd.iter().map(|&v| rank[v as usize]).collect(),
            }
        };
        let best = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .min_by_key(|(m, _)| key(m))
            .expect("degree attained");
        Ok((best.0.clone(), best.1.clone()))
    }

    /// Convert coefficients to another ring (injectively, e.g. into Laurent
    /// scalars).
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }
}

impl<C: Coeff> Poly<C> {
    /// Formal partial derivative with respect to variable `i`; commutative
    /// polynomials only.
    pub fn partial(&self, i: usize) -> Result<Poly<C>> {
        if self.ctx.flavor != Flavor::Comm {
            return Err(Error::WrongFlavor(
                "partial derivative needs a commutative polynomial".into(),
            ));
        }
        let mut out = Poly::zero(self.ctx);
        for (m, c) in &self.terms {
            let e = m.exps();
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.to_vec();
            e2[i] -= 1;
            let factor = C::from_scalar(Scalar::from_int(self.ctx.field, e[i] as i64));
            out.add_term(Mono::Comm(e2), c.mul(&factor));
        }
        Ok(out)
    }
}

/// A deformed product `x * y = a*xy + b*yx` on a free algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct {
    pub a: Scalar,
    pub b: Scalar,
}

impl StarProduct {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        StarProduct { a, b }
    }
}

impl Poly<Scalar> {
    /// The star product f * g = a*(fg) + b*(gf); free algebra only.
    pub fn star(&self, other: &Poly<Scalar>, s: &StarProduct) -> Result<Poly<Scalar>> {
        if self.ctx.flavor != Flavor::Free {
            return Err(Error::WrongFlavor("star product needs the free algebra".into()));
        }
        self.check_ctx(other)?;
        let fg = self.mul(other)?.scale(&s.a);
        let gf = other.mul(self)?.scale(&s.b);
        fg.add(&gf)
    }

    /// The star associator {f,g,h} = (f*g)*h - f*(g*h).
    pub fn associator(
        &self,
        g: &Poly<Scalar>,
        h: &Poly<Scalar>,
        s: &StarProduct,
    ) -> Result<Poly<Scalar>> {
        let left = self.star(g, s)?.star(h, s)?;
        let right = self.star(&g.star(h, s)?, s)?;
        left.sub(&right)
    }

    /// The derivation of the free algebra with D(x_i) = images[i], extended
    /// by the Leibniz rule, applied to `self`.
    pub fn derivation_apply(&self, images: &[Poly<Scalar>]) -> Result<Poly<Scalar>> {
        if self.ctx.flavor != Flavor::Free {
            return Err(Error::WrongFlavor("derivation needs the free algebra".into()));
        }
        if images.len() != self.ctx.n {
            return Err(Error::ContextMismatch(format!(
                "{} derivation images for {} variables",
                images.len(),
                self.ctx.n
            )));
        }
        let mut out = Poly::zero(self.ctx);
        for (m, c) in &self.terms {
            let w = m.word();
            for pos in 0..w.len() {
                // prefix * D(x_{w[pos]}) * suffix
                let mut piece = Poly::monomial(
                    self.ctx,
                    Mono::Free(w[..pos].to_vec()),
                    c.clone(),
                );
                piece = piece.mul(&images[w[pos] as usize])?;
                piece = piece.mul(&Poly::monomial(
                    self.ctx,
                    Mono::Free(w[pos + 1..].to_vec()),
                    Scalar::one(self.ctx.field),
                ))?;
                out = out.add(&piece)?;
            }
        }
        Ok(out)
    }
}
