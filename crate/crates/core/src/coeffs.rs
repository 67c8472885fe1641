//! Scalar rings: the rationals, prime fields, and Laurent polynomials in a
//! central parameter `t` over either.
//!
//! `LaurentScalar` deliberately implements the same [`Coeff`] interface as
//! [`Scalar`], so all polynomial and endomorphism code can be reused verbatim
//! with one-parameter diagonal weights as coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// The coefficient field: Q or F_p for a prime p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.checked_mul(d).map_or(false, |s| s <= p) {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// A prime field, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Q => 0,
            FieldSpec::Fp(p) => *p,
        }
    }

    /// Does the characteristic divide `k`?  Always false over Q.
    pub fn char_divides(&self, k: u64) -> bool {
        match self {
            FieldSpec::Q => false,
            FieldSpec::Fp(p) => k % p == 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "q"),
            FieldSpec::Fp(p) => write!(f, "fp:{}", p),
        }
    }
}

/// An exact field element.  The field is carried with the value so that
/// mixing fields is detectable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, r: u64 },
}

fn fp_add(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn fp_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse by the extended Euclidean algorithm.
fn fp_inv(p: u64, a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::DivisionByZero);
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime");
    Ok(s0.rem_euclid(p as i128) as u64)
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Q,
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn from_int(field: FieldSpec, v: i64) -> Self {
        match field {
            FieldSpec::Q => Scalar::Q(BigRational::from(BigInt::from(v))),
            FieldSpec::Fp(p) => Scalar::Fp {
                p,
                r: (v as i128).rem_euclid(p as i128) as u64,
            },
        }
    }

    pub fn from_bigint(field: FieldSpec, v: BigInt) -> Self {
        match field {
            FieldSpec::Q => Scalar::Q(BigRational::from(v)),
            FieldSpec::Fp(p) => {
                let m = (v % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                let (_, digits) = m.to_u64_digits();
                Scalar::Fp {
                    p,
                    r: digits.first().copied().unwrap_or(0),
                }
            }
        }
    }

    /// num/den as a field element; over F_p this divides residues.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Scalar::from_int(field, num).div(&Scalar::from_int(field, den))
    }

    pub fn zero(field: FieldSpec) -> Self {
        Scalar::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Scalar::from_int(field, 1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { r, .. } => *r == 1,
        }
    }

    fn expect_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, r: a }, Scalar::Fp { r: b, .. }) => Scalar::Fp {
                p: *p,
                r: fp_add(*p, *a, *b),
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, r: a }, Scalar::Fp { r: b, .. }) => Scalar::Fp {
                p: *p,
                r: fp_mul(*p, *a, *b),
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, r } => Scalar::Fp {
                p: *p,
                r: if *r == 0 { 0 } else { p - r },
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Q(a) => {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Q(a.recip()))
                }
            }
            Scalar::Fp { p, r } => Ok(Scalar::Fp {
                p: *p,
                r: fp_inv(*p, *r)?,
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power, with negative exponents going through the inverse.
    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { r, .. } => write!(f, "{}", r),
        }
    }
}

/// The four field operations as data, for the checked entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked scalar arithmetic: errors (instead of panicking) on mixed fields
/// and on division by zero.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Sub => Ok(a.sub(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

/// The coefficient-ring interface shared by [`Scalar`] and [`LaurentScalar`].
///
/// Arithmetic across different underlying fields is a programming error and
/// panics; public entry points validate contexts before getting here.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero(field: FieldSpec) -> Self;
    fn one(field: FieldSpec) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn field(&self) -> FieldSpec;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse where one exists in the ring.
    fn try_inv(&self) -> Result<Self>;
}

impl Coeff for Scalar {
    fn zero(field: FieldSpec) -> Self {
        Scalar::zero(field)
    }
    fn one(field: FieldSpec) -> Self {
        Scalar::one(field)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn field(&self) -> FieldSpec {
        Scalar::field(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn try_inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
}

/// A Laurent polynomial in one central parameter `t` with [`Scalar`]
/// coefficients.  Used as a *scalar ring*: diagonal weights `t^k` live here,
/// and all polynomial code is generic over it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentScalar {
    field: FieldSpec,
    /// exponent of t -> nonzero coefficient
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentScalar {
    pub fn new(field: FieldSpec) -> Self {
        LaurentScalar {
            field,
            terms: BTreeMap::new(),
        }
    }

    /// c * t^k
    pub fn monomial(c: Scalar, k: i64) -> Self {
        let mut l = LaurentScalar::new(c.field());
        if !c.is_zero() {
            l.terms.insert(k, c);
        }
        l
    }

    pub fn t_pow(field: FieldSpec, k: i64) -> Self {
        LaurentScalar::monomial(Scalar::one(field), k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.terms.iter()
    }

    /// Lowest exponent of t with a nonzero coefficient.
    pub fn valuation(&self) -> Result<i64> {
        self.terms
            .keys()
            .next()
            .copied()
            .ok_or(Error::ZeroValuation)
    }

    /// Evaluation at t = 0: the constant term, or a pole error if any
    /// negative exponent survives.
    pub fn at_zero(&self) -> Result<Scalar> {
        if let Some((&k, _)) = self.terms.iter().next() {
            if k < 0 {
                return Err(Error::PoleAtZero(k));
            }
        }
        Ok(self
            .terms
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field)))
    }
}

impl Coeff for LaurentScalar {
    fn zero(field: FieldSpec) -> Self {
        LaurentScalar::new(field)
    }
    fn one(field: FieldSpec) -> Self {
        LaurentScalar::monomial(Scalar::one(field), 0)
    }
    fn from_scalar(s: Scalar) -> Self {
        LaurentScalar::monomial(s, 0)
    }
    fn field(&self) -> FieldSpec {
        self.field
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "laurent arithmetic across fields");
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            let cur = out
                .terms
                .remove(&k)
                .unwrap_or_else(|| Scalar::zero(self.field));
            let s = cur.add(c);
            if !s.is_zero() {
                out.terms.insert(k, s);
            }
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "laurent arithmetic across fields");
        let mut out = LaurentScalar::new(self.field);
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &other.terms {
                let k = ka + kb;
                let prod = ca.mul(cb);
                let cur = out
                    .terms
                    .remove(&k)
                    .unwrap_or_else(|| Scalar::zero(self.field));
                let s = cur.add(&prod);
                if !s.is_zero() {
                    out.terms.insert(k, s);
                }
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LaurentScalar {
            field: self.field,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }
    fn try_inv(&self) -> Result<Self> {
        // Only monomials c * t^k are units here.
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(format!(
                "laurent scalar {} is not a monomial",
                self
            )));
        }
        let (&k, c) = self.terms.iter().next().unwrap();
        Ok(LaurentScalar::monomial(c.inv()?, -k))
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power first
        let mut first = true;
        for (&k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => {
                    if c.is_one() {
                        write!(f, "t")?
                    } else {
                        write!(f, "{}*t", c)?
                    }
                }
                _ => {
                    if c.is_one() {
                        write!(f, "t^{}", k)?
                    } else {
                        write!(f, "{}*t^{}", c, k)?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Helper used by tests and the Q-only linear algebra in torus normalization.
pub fn big_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar {
    /// Sign information for display purposes: true when the canonical form
    /// starts with a minus sign (only meaningful over Q).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}
