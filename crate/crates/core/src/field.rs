//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Field`] is a small copyable descriptor; elements are [`Scalar`]s and all
//! arithmetic goes through the descriptor so that prime-field residues stay
//! canonical (`0..p`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SeriesError;

/// Largest prime accepted for `F_p`; products of two residues must fit in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// An element of a [`Field`]. Residues are always reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

pub fn is_prime(n: u64) -> bool {
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

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Field {
    /// `F_p`, checking that `p` is a prime small enough for `u64` products.
    pub fn prime(p: u64) -> Result<Self, SeriesError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(SeriesError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Residue(n.rem_euclid(*p as i64) as u64),
        }
    }

    /// Image of a rational number; fails in `F_p` when `p` divides the denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, SeriesError> {
        match self {
            Field::Rationals => Ok(Scalar::Rational(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = r.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(SeriesError::Parse(format!(
                        "denominator of {r} vanishes in F_{p}"
                    )));
                }
                Ok(Scalar::Residue(num * pow_mod(den, p - 2, *p) % p))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(v) => *v == 0,
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Residue(v)) => v < p,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + y) % p),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Field::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(x * y % p),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            (Field::Prime(p), Scalar::Residue(x)) => Some(Scalar::Residue(pow_mod(*x, p - 2, *p))),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u32) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The integer `n` viewed in the field (used for formal derivatives).
    pub fn mul_int(&self, a: &Scalar, n: i64) -> Scalar {
        self.mul(a, &self.from_i64(n))
    }

    /// Every element of a prime field in canonical order; `None` for the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(Scalar::Residue).collect()),
        }
    }

    /// Parses a coefficient string: a fraction `a/b` (or integer) for the
    /// rationals, an integer for `F_p` (reduced mod `p`).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, SeriesError> {
        let s = s.trim();
        match self {
            Field::Rationals => parse_rational(s).map(Scalar::Rational),
            Field::Prime(p) => {
                let v: i128 = s
                    .parse()
                    .map_err(|_| SeriesError::Parse(format!("bad residue `{s}`")))?;
                Ok(Scalar::Residue(v.rem_euclid(*p as i128) as u64))
            }
        }
    }

    pub fn format_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => format_rational(r),
            Scalar::Residue(v) => v.to_string(),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, SeriesError> {
    let bad = || SeriesError::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Reduced `a/b`, or just `a` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar {
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| SeriesError::Parse(format!("bad field `{s}`")))?;
            return Field::prime(p);
        }
        Err(SeriesError::Parse(format!("bad field `{s}` (expected Q or Fp:<p>)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(-2);
        assert_eq!(b, Scalar::Residue(5));
        assert_eq!(f.add(&a, &b), Scalar::Residue(1));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.pow(&a, 6), f.one());
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(Field::prime(9), Err(SeriesError::NotPrime(9))));
        assert!(Field::prime(1).is_err());
        assert!("Fp:15".parse::<Field>().is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let q = Field::Rationals;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(q.format_scalar(&x), "-3/2");
        assert_eq!(q.format_scalar(&q.parse_scalar("8/4").unwrap()), "2");
        let f5: Field = "Fp:5".parse().unwrap();
        assert_eq!(f5.format_scalar(&f5.parse_scalar("-1").unwrap()), "4");
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
    }

    #[test]
    fn rational_into_prime_field() {
        let f5 = Field::prime(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f5.from_rational(&half).unwrap(), Scalar::Residue(3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(f5.from_rational(&fifth).is_err());
    }
}
