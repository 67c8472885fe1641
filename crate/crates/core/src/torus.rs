//! Diagonal one-parameter torus actions on polynomial endomorphisms.
//!
//! A weight vector w assigns x_i the weight w_i; the associated diagonal
//! family d(t): x_i -> t^(w_i) x_i conjugates an endomorphism termwise,
//! scaling the coefficient of x^J in the i-th image by t^(J.w - w_i).  The
//! valuation of that exponent over all terms decides whether the conjugated
//! family extends to t = 0.

use crate::coeffs::{LaurentScalar, Scalar};
use crate::endo::Endo;
use crate::poly::{Mono, Poly};
use crate::{Error, Result};

fn mono_weight(m: &Mono, weights: &[i64]) -> i64 {
    match m {
        Mono::Comm(exps) => exps
            .iter()
            .enumerate()
            .map(|(j, &e)| weights[j] * e as i64)
            .sum(),
        Mono::Free(word) => word.iter().map(|&v| weights[v as usize]).sum(),
    }
}

fn check_weights(phi: &Endo<Scalar>, weights: &[i64]) -> Result<()> {
    if weights.len() != phi.ctx().n {
        return Err(Error::BadShape(format!(
            "expected {} weights, got {}",
            phi.ctx().n,
            weights.len()
        )));
    }
    Ok(())
}

/// Conjugate `phi` by the diagonal family d(t): x_i -> t^(w_i) x_i, i.e.
/// compute d(t)^-1 . phi . d(t) with coefficients in Laurent polynomials
/// over the base field.
pub fn torus_conjugate(phi: &Endo<Scalar>, weights: &[i64]) -> Result<Endo<LaurentScalar>> {
    check_weights(phi, weights)?;
    let ctx = *phi.ctx();
    let mut images = Vec::with_capacity(ctx.n);
    for i in 0..ctx.n {
        let mut terms: Vec<(Mono, LaurentScalar)> = Vec::new();
        for (m, c) in phi.image(i).terms() {
            let val = mono_weight(m, weights) - weights[i];
            terms.push((m.clone(), LaurentScalar::monomial(c.clone(), val)));
        }
        images.push(Poly::from_terms(ctx, terms));
    }
    Endo::new(ctx, images)
}

/// Minimum exponent of t over all terms of the conjugated family, i.e.
/// min over terms (i, x^J) of J.w - w_i.  Negative means the family has a
/// pole at t = 0.  The identity map has no terms to measure.
pub fn singularity_valuation(phi: &Endo<Scalar>, weights: &[i64]) -> Result<i64> {
    check_weights(phi, weights)?;
    let mut best: Option<i64> = None;
    for i in 0..phi.ctx().n {
        let xi = Mono::var(phi.ctx(), i);
        for (m, _) in phi.image(i).terms() {
            if *m == xi {
                // the diagonal term is fixed by the conjugation
                continue;
            }
            let val = mono_weight(m, weights) - weights[i];
            best = Some(best.map_or(val, |b| b.min(val)));
        }
    }
    best.ok_or_else(|| Error::BadShape("no off-diagonal terms to measure".into()))
}

/// Specialize the conjugated family at t = 0.  Fails with the offending
/// valuation when some term has a pole.
pub fn limit_at_zero(phi: &Endo<Scalar>, weights: &[i64]) -> Result<Endo<Scalar>> {
    let conj = torus_conjugate(phi, weights)?;
    let ctx = *phi.ctx();
    let mut images = Vec::with_capacity(ctx.n);
    for i in 0..ctx.n {
        let mut terms: Vec<(Mono, Scalar)> = Vec::new();
        for (m, c) in conj.image(i).terms() {
            let at0 = c.at_zero()?;
            if !at0.is_zero() {
                terms.push((m.clone(), at0));
            }
        }
        images.push(Poly::from_terms(ctx, terms));
    }
    Endo::new(ctx, images)
}

/// True iff `phi` commutes with every diagonal family in the list: each
/// term of each image must be weight-homogeneous (J.w = w_i) for every
/// weight row.
pub fn centralizer_check(phi: &Endo<Scalar>, weight_rows: &[Vec<i64>]) -> Result<bool> {
    for row in weight_rows {
        check_weights(phi, row)?;
        for i in 0..phi.ctx().n {
            for (m, _) in phi.image(i).terms() {
                if mono_weight(m, row) != row[i] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Coeff, FieldSpec};
    use crate::poly::PolyCtx;

    fn ctx() -> PolyCtx {
        PolyCtx::comm(3, FieldSpec::Q)
    }
    fn s(v: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Q, v)
    }

    fn elem_y_xk(k: usize) -> Endo<Scalar> {
        let c = ctx();
        let x = Poly::var(c, 0).unwrap();
        Endo::elementary(c, 1, x.pow_capped(k, None).unwrap()).unwrap()
    }

    #[test]
    fn valuation_of_power_elementary() {
        // y -> y + x^k under weights (w1, w2, w3): deviation exponent k*w1 - w2
        let phi = elem_y_xk(2);
        assert_eq!(singularity_valuation(&phi, &[1, 3, 0]).unwrap(), -1);
        assert_eq!(singularity_valuation(&phi, &[2, 1, 0]).unwrap(), 3);
        assert_eq!(singularity_valuation(&phi, &[1, 2, 0]).unwrap(), 0);
    }

    #[test]
    fn conjugate_matches_actual_composition() {
        let c = ctx();
        let x = Poly::var(c, 0).unwrap();
        let y = Poly::var(c, 1).unwrap();
        let phi_sc = Endo::elementary(
            c,
            2,
            x.mul(&y).unwrap().scale(&s(4)).add(&x.pow_capped(3, None).unwrap()).unwrap(),
        )
        .unwrap();
        let weights = [2i64, -1, 3];
        // lift phi into Laurent coefficients and sandwich between the
        // diagonal family and its inverse
        let phi_l = phi_sc.map_coeffs(|sc| LaurentScalar::from_scalar(sc.clone()));
        let diag = |sign: i64| {
            let images: Vec<_> = (0..3)
                .map(|i| {
                    Poly::monomial(
                        c,
                        Mono::var(&c, i),
                        LaurentScalar::t_pow(FieldSpec::Q, sign * weights[i]),
                    )
                })
                .collect();
            Endo::new(c, images).unwrap()
        };
        let composed = Endo::chain_capped(&[&diag(1), &phi_l, &diag(-1)], None).unwrap();
        assert_eq!(composed, torus_conjugate(&phi_sc, &weights).unwrap());
    }

    #[test]
    fn limit_kills_positive_valuations_and_reports_poles() {
        let phi = elem_y_xk(2);
        // valuation 3 > 0: the deviation vanishes in the limit
        let lim = limit_at_zero(&phi, &[2, 1, 0]).unwrap();
        assert!(lim.is_identity());
        // valuation 0: the deviation survives unchanged
        let lim = limit_at_zero(&phi, &[1, 2, 0]).unwrap();
        assert_eq!(lim, phi);
        // negative valuation: pole
        assert!(matches!(
            limit_at_zero(&phi, &[1, 3, 0]),
            Err(Error::PoleAtZero(-1))
        ));
    }

    #[test]
    fn centralizer_detects_weight_homogeneity() {
        let c = ctx();
        let x = Poly::var(c, 0).unwrap();
        let y = Poly::var(c, 1).unwrap();
        let e_z_xy = Endo::elementary(c, 2, x.mul(&y).unwrap()).unwrap();
        // z -> z + x*y commutes with weights (1,1,2) but not (1,1,1)
        assert!(centralizer_check(&e_z_xy, &[vec![1, 1, 2]]).unwrap());
        assert!(!centralizer_check(&e_z_xy, &[vec![1, 1, 1]]).unwrap());
        // the scalar torus (all weights 1) centralizes exactly the linear maps
        let lin = Endo::linear(c, &crate::linalg::identity(FieldSpec::Q, 3)).unwrap();
        assert!(centralizer_check(&lin, &[vec![1, 1, 1]]).unwrap());
        assert!(!centralizer_check(&e_z_xy, &[vec![1, 1, 1]]).unwrap());
        // and both rows of a two-parameter family must pass
        assert!(centralizer_check(&e_z_xy, &[vec![1, 1, 2], vec![1, 0, 1]]).unwrap());
        assert!(!centralizer_check(&e_z_xy, &[vec![1, 1, 2], vec![1, 1, 3]]).unwrap());
        let _ = y;
    }
}
