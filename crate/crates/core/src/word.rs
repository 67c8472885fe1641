//! Words in tame generators: invertible linear maps and elementary maps,
//! with formal inverse markers.  Expansion multiplies the word out into an
//! explicit endomorphism; results are cached by a hash of the word, since
//! synthesized words reuse large identical subwords.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::coeffs::Scalar;
use crate::endo::Endo;
use crate::linalg::{self, Mat};
use crate::poly::{Mono, Poly, PolyCtx};
use crate::{Error, Result};

/// A tame generator.
#[derive(Clone, PartialEq, Debug)]
pub enum Generator {
    /// An invertible linear change of variables (row i = image of x_i).
    Linear(Mat),
    /// x_target -> x_target + addend, the addend free of the target variable.
    Elementary { target: usize, addend: Poly<Scalar> },
}

impl Generator {
    /// Validated linear generator: the matrix must be invertible.
    pub fn linear(mat: Mat) -> Result<Self> {
        linalg::mat_inv(&mat)?;
        Ok(Generator::Linear(mat))
    }

    pub fn elementary(ctx: &PolyCtx, target: usize, addend: Poly<Scalar>) -> Result<Self> {
        // constructing the endomorphism performs all the shape checks
        Endo::elementary(*ctx, target, addend.clone())?;
        Ok(Generator::Elementary { target, addend })
    }

    pub fn to_endo(&self, ctx: &PolyCtx, inverted: bool) -> Result<Endo<Scalar>> {
        match self {
            Generator::Linear(mat) => {
                let m = if inverted {
                    linalg::mat_inv(mat)?
                } else {
                    mat.clone()
                };
                Endo::linear(*ctx, &m)
            }
            Generator::Elementary { target, addend } => {
                let a = if inverted { addend.neg() } else { addend.clone() };
                Endo::elementary(*ctx, *target, a)
            }
        }
    }
}

/// One letter of a word: a generator or its formal inverse.
#[derive(Clone, PartialEq, Debug)]
pub struct Letter {
    pub gen: Generator,
    pub inverted: bool,
}

/// A word in tame generators over a fixed context.
#[derive(Clone, PartialEq, Debug)]
pub struct GenWord {
    pub ctx: PolyCtx,
    pub letters: Vec<Letter>,
}

impl GenWord {
    pub fn empty(ctx: PolyCtx) -> Self {
        GenWord {
            ctx,
            letters: Vec::new(),
        }
    }

    pub fn single(ctx: PolyCtx, gen: Generator) -> Self {
        GenWord {
            ctx,
            letters: vec![Letter {
                gen,
                inverted: false,
            }],
        }
    }

    pub fn push(&mut self, gen: Generator, inverted: bool) {
        self.letters.push(Letter { gen, inverted });
    }

    /// Concatenation: apply `self`, then `other`.
    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GenWord {
            ctx: self.ctx,
            letters,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The formal inverse: letters reversed, inversion flags flipped.
    pub fn invert(&self) -> GenWord {
        GenWord {
            ctx: self.ctx,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen.clone(),
                    inverted: !l.inverted,
                })
                .collect(),
        }
    }

    /// Conjugate by a single generator g: the word g . self . g^{-1}, which
    /// expands to conj_g of the expansion.
    pub fn conjugate_by(&self, g: &Generator) -> GenWord {
        let mut out = GenWord::single(self.ctx, g.clone());
        out.letters.extend(self.letters.iter().cloned());
        out.push(g.clone(), true);
        out
    }

    /// Collision-free cache key: the full structural debug form.  A 64-bit
    /// hash would risk (however unlikely) silent wrong answers.
    fn cache_key(&self, cap: Option<usize>) -> String {
        format!("{:?}|{:?}|{:?}", self.ctx, cap, self)
    }

    /// Multiply the word out, applying letters in the order written,
    /// optionally modulo total degree `cap`.
    pub fn expand_capped(&self, cap: Option<usize>) -> Result<Endo<Scalar>> {
        static CACHE: Lazy<Mutex<HashMap<String, Endo<Scalar>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        let key = self.cache_key(cap);
        if let Some(hit) = CACHE.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mut acc = Endo::identity(self.ctx);
        for l in &self.letters {
            let e = l.gen.to_endo(&self.ctx, l.inverted)?;
            acc = acc.compose_capped(&e, cap)?;
        }
        let mut cache = CACHE.lock().unwrap();
        if cache.len() > 4096 {
            cache.clear();
        }
        cache.insert(key, acc.clone());
        Ok(acc)
    }

    pub fn expand(&self) -> Result<Endo<Scalar>> {
        self.expand_capped(None)
    }
}

/// The word for a permutation of two variables.
pub fn swap_gen(ctx: &PolyCtx, i: usize, j: usize) -> Generator {
    let field = ctx.field;
    let mut mat = linalg::identity(field, ctx.n);
    mat[i][i] = Scalar::zero(field);
    mat[j][j] = Scalar::zero(field);
    mat[i][j] = Scalar::one(field);
    mat[j][i] = Scalar::one(field);
    Generator::Linear(mat)
}

/// The linear generator for an arbitrary permutation: variable i is mapped
/// to variable `perm[i]` (image of x_i is x_{perm[i]}).
pub fn perm_gen(ctx: &PolyCtx, perm: &[usize]) -> Generator {
    let field = ctx.field;
    let mut mat = vec![vec![Scalar::zero(field); ctx.n]; ctx.n];
    for (i, &p) in perm.iter().enumerate() {
        mat[i][p] = Scalar::one(field);
    }
    Generator::Linear(mat)
}

/// Diagonal scaling generator.
pub fn diag_gen(ctx: &PolyCtx, scales: &[Scalar]) -> Result<Generator> {
    let field = ctx.field;
    let mut mat = vec![vec![Scalar::zero(field); ctx.n]; ctx.n];
    for (i, s) in scales.iter().enumerate() {
        if s.is_zero() {
            return Err(Error::SingularLinearPart);
        }
        mat[i][i] = s.clone();
    }
    Ok(Generator::Linear(mat))
}

/// The defining elementary generator z -> z + x*y (variables 0, 1 into
/// variable `target`), in either flavor.
pub fn xy_gen(ctx: &PolyCtx, target: usize) -> Generator {
    let x = Poly::var(*ctx, 0).expect("x in range");
    let y = Poly::var(*ctx, 1).expect("y in range");
    Generator::Elementary {
        target,
        addend: x.mul(&y).expect("same context"),
    }
}

/// Hash helper so polynomials can key the expansion cache via Debug; also
/// used by tests that want structural hashes of monomials.
pub fn mono_hash(m: &Mono) -> u64 {
    let mut h = DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;

    fn ctx3() -> PolyCtx {
        PolyCtx::comm(3, FieldSpec::Q)
    }

    #[test]
    fn empty_word_is_identity() {
        let w = GenWord::empty(ctx3());
        assert!(w.expand().unwrap().is_identity());
    }

    #[test]
    fn inverse_word_expands_to_inverse() {
        let ctx = ctx3();
        let y = Poly::var(ctx, 1).unwrap();
        let mut w = GenWord::single(ctx, xy_gen(&ctx, 2));
        w.push(
            Generator::elementary(&ctx, 0, y.mul(&y).unwrap()).unwrap(),
            false,
        );
        w.push(swap_gen(&ctx, 0, 1), false);
        let e = w.expand().unwrap();
        let einv = w.invert().expand().unwrap();
        assert!(e.compose(&einv).unwrap().is_identity());
        assert!(einv.compose(&e).unwrap().is_identity());
    }

    #[test]
    fn single_letter_words() {
        let ctx = ctx3();
        let w = GenWord::single(ctx, xy_gen(&ctx, 2));
        let e = w.expand().unwrap();
        let x = Poly::var(ctx, 0).unwrap();
        let y = Poly::var(ctx, 1).unwrap();
        let z = Poly::var(ctx, 2).unwrap();
        assert_eq!(e.image(2), &z.add(&x.mul(&y).unwrap()).unwrap());
        // non-invertible linear letter is rejected up front
        let field = FieldSpec::Q;
        let mat = vec![vec![Scalar::zero(field); 3]; 3];
        assert!(Generator::linear(mat).is_err());
    }

    #[test]
    fn permutation_and_diag_generators() {
        let ctx = ctx3();
        let p = perm_gen(&ctx, &[1, 2, 0]);
        let e = p.to_endo(&ctx, false).unwrap();
        assert_eq!(e.image(0), &Poly::var(ctx, 1).unwrap());
        assert_eq!(e.image(2), &Poly::var(ctx, 0).unwrap());
        let back = p.to_endo(&ctx, true).unwrap();
        assert!(e.compose(&back).unwrap().is_identity());
        assert!(diag_gen(&ctx, &vec![Scalar::zero(FieldSpec::Q); 3]).is_err());
    }

    #[test]
    fn expansion_respects_caps() {
        let ctx = ctx3();
        let y = Poly::var(ctx, 1).unwrap();
        let mut w = GenWord::single(ctx, xy_gen(&ctx, 2));
        w.push(
            Generator::elementary(&ctx, 1, Poly::var(ctx, 0).unwrap().mul(&Poly::var(ctx, 0).unwrap()).unwrap()).unwrap(),
            false,
        );
        w.push(
            Generator::elementary(&ctx, 0, y.mul(&y).unwrap()).unwrap(),
            true,
        );
        let full = w.expand().unwrap();
        let capped = w.expand_capped(Some(3)).unwrap();
        assert_eq!(capped, full.truncate(3));
    }
}
