//! Hilbert symbols over the rationals and the norm group `N_1` of a conic
//! `z^2 = a x^2 + b y^2`: local tests, the global decision, witness search.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::LocalGlobalError;
use crate::field::is_prime;

pub type Rat = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Real,
}

impl Place {
    pub fn finite(p: u64) -> Result<Self, LocalGlobalError> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(LocalGlobalError::NotPrime(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => write!(f, "real"),
        }
    }
}

impl FromStr for Place {
    type Err = LocalGlobalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "real" | "inf" | "R" => Ok(Place::Real),
            t => Place::finite(t.parse().map_err(|_| LocalGlobalError::Parse(format!("bad place {t:?}")))?),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, LocalGlobalError> {
    let bad = || LocalGlobalError::Parse(format!("bad rational {s:?}"));
    match s.trim().split_once('/') {
        None => s.trim().parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ser_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

/// `num * den`, which lies in the same square class as `num / den`.
fn square_class_rep(a: &Rat) -> i128 {
    *a.numer() as i128 * *a.denom() as i128
}

fn split_valuation(mut n: i128, p: i128) -> (u32, i128) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol of a unit `u` modulo an odd prime `p`.
fn legendre(u: i128, p: u64) -> i32 {
    let m = p as i128;
    let r = u.rem_euclid(m) as u128;
    if pow_mod(r, (p as u128 - 1) / 2, p as u128) == 1 {
        1
    } else {
        -1
    }
}

/// Local Hilbert symbol `(a, b)_v` by the classical explicit formulas.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: Place) -> Result<i32, LocalGlobalError> {
    if a.is_zero() || b.is_zero() {
        return Err(LocalGlobalError::ZeroArgument);
    }
    Ok(match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => hilbert_int(square_class_rep(a), square_class_rep(b), p),
    })
}

fn hilbert_int(a: i128, b: i128, p: u64) -> i32 {
    let (alpha, u) = split_valuation(a, p as i128);
    let (beta, v) = split_valuation(b, p as i128);
    if p == 2 {
        let eps = |x: i128| ((x.rem_euclid(8) - 1) / 2) % 2;
        let omega = |x: i128| {
            let r = x.rem_euclid(8);
            ((r * r - 1) / 8) % 2
        };
        let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
        if beta % 2 == 1 {
            s *= legendre(u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

/// Prime factors of `n > 0` by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// Real place and every prime dividing `2 * prod(num * den)`.
pub fn relevant_places(values: &[Rat]) -> Vec<Place> {
    let mut primes = vec![2u64];
    for x in values {
        for n in [x.numer().unsigned_abs(), x.denom().unsigned_abs()] {
            if n > 1 {
                primes.extend(prime_factors(n as u128));
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Real);
    out
}

/// The conic `z^2 = a x^2 + b y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Conic {
    #[serde(serialize_with = "ser_rat")]
    pub a: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub b: Rat,
}

impl Conic {
    pub fn new(a: Rat, b: Rat) -> Result<Self, LocalGlobalError> {
        if a.is_zero() || b.is_zero() {
            return Err(LocalGlobalError::ZeroArgument);
        }
        Ok(Conic { a, b })
    }

    /// Places where the conic has no local point.
    pub fn bad_places(&self) -> Vec<Place> {
        relevant_places(&[self.a, self.b])
            .into_iter()
            .filter(|&v| !conic_local_solvable(self, v))
            .collect()
    }
}

pub fn conic_local_solvable(c: &Conic, v: Place) -> bool {
    hilbert_symbol(&c.a, &c.b, v).expect("conic coefficients are nonzero") == 1
}

/// Finite places never obstruct; at the real place a pointless conic only has
/// points over the complex numbers, whose norms are the positive reals.
pub fn local_norm_membership(x: &Rat, c: &Conic, v: Place) -> Result<bool, LocalGlobalError> {
    if x.is_zero() {
        return Err(LocalGlobalError::ZeroArgument);
    }
    Ok(match v {
        Place::Finite(_) => true,
        Place::Real => conic_local_solvable(c, Place::Real) || x.is_positive(),
    })
}

pub fn global_membership_decide(x: &Rat, c: &Conic) -> Result<bool, LocalGlobalError> {
    local_norm_membership(x, c, Place::Real)
}

/// `x = prod y_i`, each `y_i` a norm from `Q(sqrt d_i)`, each field splitting the conic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormWitness {
    #[serde(serialize_with = "ser_rat")]
    pub x: Rat,
    pub factors: Vec<WitnessFactor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFactor {
    pub d: i64,
    #[serde(serialize_with = "ser_rat")]
    pub y: Rat,
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Whether the squarefree integer `d` is a square in `Q_v`.
fn is_local_square(d: i64, v: Place) -> bool {
    match v {
        Place::Real => d > 0,
        Place::Finite(p) => {
            let d = d as i128;
            if d % p as i128 == 0 {
                false
            } else if p == 2 {
                d.rem_euclid(8) == 1
            } else {
                legendre(d, p) == 1
            }
        }
    }
}

/// `Q(sqrt d)` carries a point of the conic iff it is a field at every place
/// where the conic has none.
pub fn splits(d: i64, c: &Conic) -> bool {
    is_squarefree(d) && d != 1 && c.bad_places().into_iter().all(|v| !is_local_square(d, v))
}

fn splits_given(d: i64, bad: &[Place]) -> bool {
    is_squarefree(d) && d != 1 && bad.iter().all(|&v| !is_local_square(d, v))
}

/// Hasse norm theorem: `y` is a norm from `Q(sqrt d)` iff `(y, d)_v = 1` everywhere.
pub fn is_global_norm(y: &Rat, d: i64) -> bool {
    if y.is_zero() || d == 0 {
        return false;
    }
    let dd = Rat::from_integer(d);
    relevant_places(&[*y, dd]).into_iter().all(|v| hilbert_symbol(y, &dd, v) == Ok(1))
}

pub fn verify_witness(w: &NormWitness, c: &Conic) -> bool {
    let product = w.factors.iter().fold(Rat::one(), |acc, f| acc * f.y);
    product == w.x && w.factors.iter().all(|f| splits(f.d, c) && is_global_norm(&f.y, f.d))
}

/// Squarefree `d != 1`, `|d| <= bound`, ordered by `|d|` then by value.
fn candidate_fields(bound: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for n in 1..=bound as i64 {
        for d in [-n, n] {
            if d != 1 && is_squarefree(d) {
                out.push(d);
            }
        }
    }
    out
}

/// Nonzero rationals of height `|num| * den <= bound`, by height, then value.
fn rationals_by_height(bound: u64) -> Vec<Rat> {
    let mut out = Vec::new();
    for h in 1..=bound as i64 {
        let mut level = Vec::new();
        for den in 1..=h {
            if h % den == 0 {
                let num = h / den;
                if num.gcd(&den) == 1 {
                    level.push(Rat::new(num, den));
                    level.push(Rat::new(-num, den));
                }
            }
        }
        level.sort();
        out.extend(level);
    }
    out
}

/// Search without the membership precondition; used to check that
/// non-members admit no witness.
pub fn witness_search_unchecked(x: &Rat, c: &Conic, bound: u64) -> Option<NormWitness> {
    if *x == Rat::one() {
        return Some(NormWitness { x: *x, factors: Vec::new() });
    }
    let bad = c.bad_places();
    let fields: Vec<i64> = candidate_fields(bound).into_iter().filter(|&d| splits_given(d, &bad)).collect();
    if let Some(&d) = fields.iter().find(|&&d| is_global_norm(x, d)) {
        return Some(NormWitness { x: *x, factors: vec![WitnessFactor { d, y: *x }] });
    }
    for y1 in rationals_by_height(bound) {
        let y2 = x / y1;
        let Some(&d1) = fields.iter().find(|&&d| is_global_norm(&y1, d)) else { continue };
        let Some(&d2) = fields.iter().find(|&&d| is_global_norm(&y2, d)) else { continue };
        return Some(NormWitness { x: *x, factors: vec![WitnessFactor { d: d1, y: y1 }, WitnessFactor { d: d2, y: y2 }] });
    }
    None
}

pub fn witness_search(x: &Rat, c: &Conic, bound: u64) -> Result<NormWitness, LocalGlobalError> {
    if !global_membership_decide(x, c)? {
        return Err(LocalGlobalError::RefusedNonMember { x: format_rat(x) });
    }
    witness_search_unchecked(x, c, bound).ok_or(LocalGlobalError::NotFoundWithinBound { bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Finite(2)), Ok(-1));
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Finite(3)), Ok(1));
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Real), Ok(-1));
        assert_eq!(hilbert_symbol(&r(3), &r(-1), Place::Finite(3)), Ok(-1));
        assert_eq!(hilbert_symbol(&r(2), &r(-1), Place::Finite(2)), Ok(1));
        assert_eq!(hilbert_symbol(&r(0), &r(1), Place::Real), Err(LocalGlobalError::ZeroArgument));
    }

    #[test]
    fn local_conditions() {
        let c = Conic::new(r(-1), r(-1)).unwrap();
        assert!(!conic_local_solvable(&c, Place::Real));
        assert!(!conic_local_solvable(&Conic::new(r(-1), r(3)).unwrap(), Place::Finite(3)));
        assert_eq!(local_norm_membership(&r(-2), &c, Place::Real), Ok(false));
        assert_eq!(local_norm_membership(&r(-2), &c, Place::Finite(7)), Ok(true));
        assert_eq!(c.bad_places(), vec![Place::Finite(2), Place::Real]);
    }

    #[test]
    fn witnesses() {
        let c = Conic::new(r(-1), r(-1)).unwrap();
        let w = witness_search(&r(2), &c, 50).unwrap();
        assert_eq!(w.factors, vec![WitnessFactor { d: -1, y: r(2) }]);
        assert!(verify_witness(&w, &c));
        let bad = NormWitness { x: r(2), factors: vec![WitnessFactor { d: -1, y: r(3) }] };
        assert!(!verify_witness(&bad, &c));
        assert!(matches!(witness_search(&r(-2), &c, 50), Err(LocalGlobalError::RefusedNonMember { .. })));
        let one = NormWitness { x: r(1), factors: vec![] };
        assert!(verify_witness(&one, &c));
        let w3 = witness_search(&r(3), &c, 50).unwrap();
        assert!(verify_witness(&w3, &c));
    }

    #[test]
    fn parse_place_and_rat() {
        assert_eq!("real".parse::<Place>().unwrap(), Place::Real);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(7));
        assert!("8".parse::<Place>().is_err());
        assert_eq!(parse_rat("-3/6").unwrap(), Rat::new(-1, 2));
        assert!(parse_rat("1/0").is_err());
    }
}
