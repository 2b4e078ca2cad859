//! Exact coefficient fields: `GF(p)` for a configurable prime, or rationals.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// Largest admissible prime; keeps `a * b` for canonical `a, b < p` inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Default prime modulus.
pub const DEFAULT_PRIME: u64 = 32003;

/// The active coefficient field of a ring context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// Prime field `GF(p)`, elements canonical in `[0, p)`.
    Fp(u64),
    /// Exact rationals, fully reduced with positive denominator.
    Rational,
}

/// A field element. `Fp` values are canonical representatives in `[0, p)`;
/// the modulus lives in the ambient [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u64),
    Rat(Box<BigRational>),
}

impl FieldSpec {
    pub fn gf(p: u64) -> Result<Self> {
        if p < 2 || p > MAX_PRIME {
            return Err(Error::Parse(format!("modulus {p} out of range [2, {MAX_PRIME}]")));
        }
        if !is_prime(p) {
            return Err(Error::Parse(format!("modulus {p} is not prime")));
        }
        Ok(FieldSpec::Fp(p))
    }

    /// Parses `gf <p>`, `gf:<p>` or `rational`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "rational" {
            return Ok(FieldSpec::Rational);
        }
        let rest = t
            .strip_prefix("gf")
            .map(|r| r.trim_start_matches([':', ' ']))
            .ok_or_else(|| Error::Parse(format!("bad field spec `{text}`")))?;
        let p: u64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec `{text}`")))?;
        FieldSpec::gf(p)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Fp(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Fp(_) => Scalar::Fp(0),
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Fp(_) => Scalar::Fp(1),
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::one())),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Fp(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp(r)
            }
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            FieldSpec::Fp(_) => {
                let d = self.from_i64(den);
                if self.is_zero(&d) {
                    return Err(Error::Parse(format!("denominator {den} vanishes mod p")));
                }
                Ok(self.mul(&self.from_i64(num), &self.inv(&d)?))
            }
            FieldSpec::Rational => Ok(Scalar::Rat(Box::new(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                let s = x + y;
                Scalar::Fp(if s >= *p { s - p } else { s })
            }
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() + y.as_ref()))
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Fp(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Rational, Scalar::Rat(x)) => Scalar::Rat(Box::new(-x.as_ref())),
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(x * y % p),
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() * y.as_ref()))
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::Inconsistency("inverse of zero".into()));
        }
        match (self, a) {
            (FieldSpec::Fp(p), Scalar::Fp(x)) => Ok(Scalar::Fp(mod_inv(*x, *p))),
            (FieldSpec::Rational, Scalar::Rat(x)) => Ok(Scalar::Rat(Box::new(x.recip()))),
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Reduces a rational scalar mod `p`; fails when the denominator vanishes.
    pub fn rat_to_fp(a: &Scalar, p: u64) -> Result<Scalar> {
        match a {
            Scalar::Rat(r) => {
                let fp = FieldSpec::Fp(p);
                let pb = BigInt::from(p);
                let nm = ((r.numer() % &pb) + &pb) % &pb;
                let dm = ((r.denom() % &pb) + &pb) % &pb;
                let n = Scalar::Fp(u64::try_from(&nm).expect("residue fits u64"));
                let d = Scalar::Fp(u64::try_from(&dm).expect("residue fits u64"));
                if fp.is_zero(&d) {
                    return Err(Error::Precondition(format!("denominator divisible by {p}")));
                }
                fp.div(&n, &d)
            }
            Scalar::Fp(_) => Err(Error::RingMismatch("rat_to_fp on GF(p) scalar".into())),
        }
    }

    pub fn fmt_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Fp(v) => v.to_string(),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// True when the canonical printed form starts with a minus sign.
    pub fn is_display_negative(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(_) => false,
            Scalar::Rat(r) => r.is_negative(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Fp(p) => write!(f, "gf {p}"),
            FieldSpec::Rational => write!(f, "rational"),
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime, a in (0, p)
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus not prime or element zero");
    (t.rem_euclid(p as i128)) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
