//! Truncated Puiseux series `sum c_k t^(k/q) + O(t^mu)` over an exact field.
//!
//! Exponents are stored as integer numerators over an explicit ramification
//! index `q`, so membership in `R_q` is a stored fact rather than something
//! recomputed from reduced fractions. A precision of `None` means the series
//! is known exactly (a polynomial in `t^(1/q)`, possibly with negative powers).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::SeriesError;
use crate::field::{Field, Scalar};

/// Rational exponent / precision.
pub type Exp = Ratio<i64>;

pub fn exp(n: i64, d: i64) -> Exp {
    Ratio::new(n, d)
}

pub fn exp_int(n: i64) -> Exp {
    Ratio::from_integer(n)
}

pub fn min_prec(a: Option<Exp>, b: Option<Exp>) -> Option<Exp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub fn parse_exp(s: &str) -> Result<Exp, SeriesError> {
    let bad = || SeriesError::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

pub fn format_exp(e: &Exp) -> String {
    if *e.denom() == 1 {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(Exp),
    /// No nonzero term below the stored precision; the true valuation is at least this.
    ZeroSoFar(Exp),
    /// The exact zero series.
    Infinite,
}

impl Val {
    /// Certified lower bound on the true valuation, `None` for exact zero.
    pub fn lower_bound(&self) -> Option<Exp> {
        match self {
            Val::Finite(v) | Val::ZeroSoFar(v) => Some(*v),
            Val::Infinite => None,
        }
    }

    pub fn finite(&self) -> Option<Exp> {
        match self {
            Val::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// True when the true valuation is provably at least `bound`.
    pub fn at_least(&self, bound: Exp) -> bool {
        self.lower_bound().map_or(true, |v| v >= bound)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{}", format_exp(v)),
            Val::ZeroSoFar(m) => write!(f, ">={} (zero so far)", format_exp(m)),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    field: Field,
    ram: i64,
    terms: BTreeMap<i64, Scalar>,
    prec: Option<Exp>,
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

impl PuiseuxSeries {
    /// Builds a series, dropping zero coefficients and terms at or above `prec`.
    pub fn new(
        field: Field,
        ram: i64,
        terms: impl IntoIterator<Item = (i64, Scalar)>,
        prec: Option<Exp>,
    ) -> Result<Self, SeriesError> {
        if ram < 1 {
            return Err(SeriesError::InvalidRamification(ram));
        }
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            if !field.contains(&c) {
                return Err(SeriesError::FieldMismatch {
                    left: field.to_string(),
                    right: format!("{c:?}"),
                });
            }
            let slot = map.entry(k).or_insert_with(|| field.zero());
            *slot = field.add(slot, &c);
        }
        let mut s = PuiseuxSeries { field, ram, terms: map, prec };
        s.clean();
        Ok(s)
    }

    pub fn exact(field: Field, ram: i64, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Result<Self, SeriesError> {
        Self::new(field, ram, terms, None)
    }

    pub fn zero(field: Field) -> Self {
        PuiseuxSeries { field, ram: 1, terms: BTreeMap::new(), prec: None }
    }

    /// `0 + O(t^prec)`.
    pub fn zero_mod(field: Field, prec: Exp) -> Self {
        PuiseuxSeries { field, ram: *prec.denom(), terms: BTreeMap::new(), prec: Some(prec) }
    }

    pub fn constant(field: Field, c: Scalar) -> Self {
        let mut s = PuiseuxSeries::zero(field);
        if !field.is_zero(&c) {
            s.terms.insert(0, c);
        }
        s
    }

    pub fn from_i64(field: Field, n: i64) -> Self {
        Self::constant(field, field.from_i64(n))
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    /// `c * t^e`, exact.
    pub fn monomial(field: Field, c: Scalar, e: Exp) -> Self {
        let q = *e.denom();
        let mut s = PuiseuxSeries { field, ram: q, terms: BTreeMap::new(), prec: None };
        if !field.is_zero(&c) {
            s.terms.insert(*e.numer(), c);
        }
        s
    }

    pub fn t_pow(field: Field, e: Exp) -> Self {
        Self::monomial(field, field.one(), e)
    }

    fn clean(&mut self) {
        let field = self.field;
        self.terms.retain(|_, c| !field.is_zero(c));
        if let Some(mu) = self.prec {
            let q = self.ram;
            self.terms.retain(|k, _| Ratio::new(*k, q) < mu);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ram(&self) -> i64 {
        self.ram
    }

    pub fn precision(&self) -> Option<Exp> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Stored terms as `(numerator, coefficient)` over [`Self::ram`].
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponent, coefficient)`.
    pub fn exp_terms(&self) -> impl Iterator<Item = (Exp, &Scalar)> + '_ {
        let q = self.ram;
        self.terms.iter().map(move |(k, c)| (Ratio::new(*k, q), c))
    }

    pub fn val(&self) -> Val {
        match self.terms.iter().next() {
            Some((k, _)) => Val::Finite(Ratio::new(*k, self.ram)),
            None => match self.prec {
                Some(m) => Val::ZeroSoFar(m),
                None => Val::Infinite,
            },
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// No nonzero term is known (exact zero or zero so far).
    pub fn is_zero_so_far(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Exp, &Scalar)> {
        self.terms.iter().next().map(|(k, c)| (Ratio::new(*k, self.ram), c))
    }

    pub fn coeff(&self, e: Exp) -> Scalar {
        let scaled = e * self.ram;
        if !scaled.is_integer() {
            return self.field.zero();
        }
        self.terms.get(&scaled.to_integer()).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(exp_int(0))
    }

    /// Largest exponent denominator actually used (the minimal ramification).
    pub fn minimal_ram(&self) -> i64 {
        let g = self.terms.keys().fold(self.ram, |g, k| g.gcd(k));
        self.ram / g
    }

    fn check_field(&self, other: &Self) -> Result<(), SeriesError> {
        if self.field != other.field {
            return Err(SeriesError::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        Ok(())
    }

    /// Same element with exponent numerators over `q_new`.
    pub fn reramify(&self, q_new: i64) -> Result<Self, SeriesError> {
        if q_new < 1 {
            return Err(SeriesError::InvalidRamification(q_new));
        }
        if q_new % self.ram != 0 {
            return Err(SeriesError::NotAMultiple { q: self.ram, q_new });
        }
        let f = q_new / self.ram;
        Ok(PuiseuxSeries {
            field: self.field,
            ram: q_new,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            prec: self.prec,
        })
    }

    /// Re-expresses the series over its minimal ramification index.
    pub fn normalize(&self) -> Self {
        let q = self.minimal_ram();
        let f = self.ram / q;
        PuiseuxSeries {
            field: self.field,
            ram: q,
            terms: self.terms.iter().map(|(k, c)| (k / f, c.clone())).collect(),
            prec: self.prec,
        }
    }

    fn rescaled(&self, q: i64) -> impl Iterator<Item = (i64, &Scalar)> + '_ {
        let f = q / self.ram;
        self.terms.iter().map(move |(k, c)| (k * f, c))
    }

    /// Drops terms at or above `mu` and caps the precision at `mu`.
    pub fn truncate(&self, mu: Exp) -> Self {
        let mut s = self.clone();
        s.prec = min_prec(s.prec, Some(mu));
        s.clean();
        s
    }

    /// Forgets the precision: the stored terms are taken as an exact element.
    pub fn to_exact(&self) -> Self {
        let mut s = self.clone();
        s.prec = None;
        s
    }

    /// Terms with exponent strictly below `mu`, as an exact element.
    pub fn head(&self, mu: Exp) -> Self {
        self.truncate(mu).to_exact()
    }

    /// Caps precision without touching the known terms beyond what the cap removes.
    pub fn with_precision(&self, prec: Option<Exp>) -> Self {
        let mut s = self.clone();
        s.prec = prec;
        s.clean();
        s
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_field(other)?;
        let q = lcm(self.ram, other.ram);
        let field = self.field;
        let mut terms: BTreeMap<i64, Scalar> = self.rescaled(q).map(|(k, c)| (k, c.clone())).collect();
        for (k, c) in other.rescaled(q) {
            match terms.get_mut(&k) {
                Some(slot) => *slot = field.add(slot, c),
                None => {
                    terms.insert(k, c.clone());
                }
            }
        }
        let mut s = PuiseuxSeries { field, ram: q, terms, prec: min_prec(self.prec, other.prec) };
        s.clean();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let field = self.field;
        PuiseuxSeries {
            field,
            ram: self.ram,
            terms: self.terms.iter().map(|(k, c)| (*k, field.neg(c))).collect(),
            prec: self.prec,
        }
    }

    /// Precision of a product: `min(mu_a + v_b, mu_b + v_a)` with `v` the
    /// certified lower bound on each factor's valuation.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_field(other)?;
        let field = self.field;
        let (va, vb) = match (self.val().lower_bound(), other.val().lower_bound()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(PuiseuxSeries::zero(field)),
        };
        let pa = self.prec.map(|m| m + vb);
        let pb = other.prec.map(|m| m + va);
        let prec = min_prec(pa, pb);
        let q = lcm(self.ram, other.ram);
        let cutoff = prec.map(|p| p * q);
        let mut terms: BTreeMap<i64, Scalar> = BTreeMap::new();
        let rhs: Vec<(i64, &Scalar)> = other.rescaled(q).collect();
        for (ka, ca) in self.rescaled(q) {
            for (kb, cb) in &rhs {
                let k = ka + kb;
                if let Some(cut) = cutoff {
                    if Ratio::from_integer(k) >= cut {
                        break;
                    }
                }
                let prod = field.mul(ca, cb);
                match terms.get_mut(&k) {
                    Some(slot) => *slot = field.add(slot, &prod),
                    None => {
                        terms.insert(k, prod);
                    }
                }
            }
        }
        let mut s = PuiseuxSeries { field, ram: q, terms, prec };
        s.clean();
        Ok(s)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let field = self.field;
        if field.is_zero(c) {
            return PuiseuxSeries::zero(field);
        }
        PuiseuxSeries {
            field,
            ram: self.ram,
            terms: self.terms.iter().map(|(k, x)| (*k, field.mul(x, c))).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by `t^e`; shifts the precision as well.
    pub fn shift(&self, e: Exp) -> Self {
        let q = lcm(self.ram, *e.denom());
        let off = (e * q).to_integer();
        PuiseuxSeries {
            field: self.field,
            ram: q,
            terms: self.rescaled(q).map(|(k, c)| (k + off, c.clone())).collect(),
            prec: self.prec.map(|m| m + e),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PuiseuxSeries::one(self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a series with finite valuation `v`, such that
    /// `self * result == 1 mod t^target`. The result has precision `target - v`.
    pub fn invert_unit(&self, target: Exp) -> Result<Self, SeriesError> {
        let v = match self.val() {
            Val::Finite(v) => v,
            _ => return Err(SeriesError::ZeroSeries),
        };
        if let Some(mu) = self.prec {
            if mu - v < target {
                return Err(SeriesError::InsufficientPrecision { needed: target + v, available: mu });
            }
        }
        let field = self.field;
        let q = self.ram;
        let (&k0, lead) = self.terms.iter().next().expect("finite valuation");
        let lead_inv = field.inv(lead).expect("nonzero leading coefficient");
        if self.prec.is_none() && self.terms.len() == 1 {
            let mut s = PuiseuxSeries::zero(field);
            s.ram = q;
            s.terms.insert(-k0, lead_inv);
            return Ok(s);
        }
        // normalized unit 1 + h, h_i at numerator k0 + i
        let h: BTreeMap<i64, Scalar> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, c)| (k - k0, field.mul(c, &lead_inv)))
            .collect();
        let kmax = (target * q).ceil().to_integer() - 1;
        let mut s: Vec<Scalar> = Vec::new();
        for k in 0..=kmax.max(-1) {
            if k == 0 {
                s.push(field.one());
                continue;
            }
            let mut acc = field.zero();
            for (i, hi) in h.range(1..=k) {
                let prev = &s[(k - i) as usize];
                if !field.is_zero(prev) {
                    acc = field.add(&acc, &field.mul(hi, prev));
                }
            }
            s.push(field.neg(&acc));
        }
        let terms = s
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 - k0, field.mul(&c, &lead_inv)));
        PuiseuxSeries::new(field, q, terms, Some(target - v))
    }

    /// True when the two series agree modulo `t^mu` and both are known that far.
    pub fn agrees_mod(&self, other: &Self, mu: Exp) -> bool {
        if self.field != other.field {
            return false;
        }
        let known = |p: Option<Exp>| p.map_or(true, |p| p >= mu);
        if !known(self.prec) || !known(other.prec) {
            return false;
        }
        match self.head(mu).try_sub(&other.head(mu)) {
            Ok(d) => d.is_exact_zero(),
            Err(_) => false,
        }
    }

    /// Equality as abstract elements: same known terms and same precision,
    /// regardless of the ramification index used to store them.
    pub fn same_element(&self, other: &Self) -> bool {
        self.field == other.field && self.prec == other.prec && self.normalize().terms == other.normalize().terms
    }

    /// True when the class modulo `t^mu` is the same, where `mu` is the common precision.
    pub fn eq_at_common_precision(&self, other: &Self) -> bool {
        match min_prec(self.prec, other.prec) {
            Some(mu) => self.agrees_mod_lenient(other, mu),
            None => self.same_element(other),
        }
    }

    fn agrees_mod_lenient(&self, other: &Self, mu: Exp) -> bool {
        match self.head(mu).try_sub(&other.head(mu)) {
            Ok(d) => d.is_exact_zero(),
            Err(_) => false,
        }
    }

    /// Human-readable rendering, e.g. `1 + 1/2*t - 1/8*t^2 + O(t^3)`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.exp_terms() {
            let cs = self.field.format_scalar(c);
            let neg = cs.starts_with('-');
            let mag = cs.trim_start_matches('-');
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let zero = exp_int(0);
            let one = exp_int(1);
            match e.cmp(&zero) {
                Ordering::Equal => out.push_str(mag),
                _ => {
                    if mag != "1" {
                        out.push_str(mag);
                        out.push('*');
                    }
                    out.push('t');
                    if e != one {
                        if e.is_integer() && e > zero {
                            out.push_str(&format!("^{}", e.numer()));
                        } else {
                            out.push_str(&format!("^({})", format_exp(&e)));
                        }
                    }
                }
            }
        }
        match self.prec {
            Some(m) => {
                if out.is_empty() {
                    format!("O(t^{})", format_exp(&m))
                } else {
                    format!("{out} + O(t^{})", format_exp(&m))
                }
            }
            None if out.is_empty() => "0".to_string(),
            None => out,
        }
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.try_add(rhs).expect("series field mismatch")
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.try_sub(rhs).expect("series field mismatch")
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.try_mul(rhs).expect("series field mismatch")
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn s(terms: &[(i64, i64)], ram: i64, prec: Option<Exp>) -> PuiseuxSeries {
        let f = q();
        PuiseuxSeries::new(f, ram, terms.iter().map(|&(k, c)| (k, f.from_i64(c))), prec).unwrap()
    }

    #[test]
    fn additive_inverse_is_zero_mod_precision() {
        let a = s(&[(0, 1), (1, 1)], 1, Some(exp_int(5)));
        let b = s(&[(0, -1), (1, -1)], 1, Some(exp_int(5)));
        let z = &a + &b;
        assert_eq!(z.val(), Val::ZeroSoFar(exp_int(5)));
    }

    #[test]
    fn add_takes_lcm_of_ramification() {
        let a = PuiseuxSeries::t_pow(q(), exp(1, 2));
        let b = PuiseuxSeries::t_pow(q(), exp(1, 3));
        let c = &a + &b;
        assert_eq!(c.ram(), 6);
        let keys: Vec<i64> = c.terms().map(|(k, _)| k).collect();
        assert_eq!(keys, vec![2, 3]);
    }

    #[test]
    fn add_precision_is_min() {
        let a = s(&[(0, 1), (1, 1)], 1, Some(exp_int(3)));
        let b = s(&[(0, 1), (2, 1)], 1, Some(exp_int(2)));
        let c = &a + &b;
        assert!(c.same_element(&s(&[(0, 2), (1, 1)], 1, Some(exp_int(2)))));
    }

    #[test]
    fn mul_examples() {
        let a = s(&[(0, 1), (1, 1)], 1, Some(exp_int(5)));
        let b = s(&[(0, 1), (1, -1)], 1, Some(exp_int(5)));
        assert!((&a * &b).same_element(&s(&[(0, 1), (2, -1)], 1, Some(exp_int(5)))));
        let h = PuiseuxSeries::t_pow(q(), exp(1, 2));
        assert!((&h * &h).same_element(&PuiseuxSeries::t_pow(q(), exp_int(1))));
        let f = q();
        let x = s(&[(0, 2), (1, 3)], 1, None);
        let half = PuiseuxSeries::constant(f, f.parse_scalar("1/2").unwrap());
        let y = &x * &half;
        assert_eq!(y.coeff(exp_int(0)), f.one());
        assert_eq!(y.coeff(exp_int(1)), f.parse_scalar("3/2").unwrap());
    }

    #[test]
    fn mul_precision_uses_valuations() {
        // (t + O(t^3)) * (t^2 + O(t^4)) = t^3 + O(t^5)
        let a = s(&[(1, 1)], 1, Some(exp_int(3)));
        let b = s(&[(2, 1)], 1, Some(exp_int(4)));
        assert_eq!((&a * &b).precision(), Some(exp_int(5)));
    }

    #[test]
    fn invert_examples() {
        let a = s(&[(0, 1), (1, -1)], 1, None);
        let inv = a.invert_unit(exp_int(4)).unwrap();
        assert!(inv.head(exp_int(4)).same_element(&s(&[(0, 1), (1, 1), (2, 1), (3, 1)], 1, None)));
        let t = PuiseuxSeries::t_pow(q(), exp_int(1));
        let ti = t.invert_unit(exp_int(2)).unwrap();
        assert!(ti.same_element(&PuiseuxSeries::t_pow(q(), exp_int(-1))));
        let z = PuiseuxSeries::zero_mod(q(), exp_int(3));
        assert_eq!(z.invert_unit(exp_int(2)), Err(SeriesError::ZeroSeries));
    }

    #[test]
    fn invert_needs_precision() {
        let a = s(&[(0, 1), (1, 1)], 1, Some(exp_int(2)));
        assert!(matches!(a.invert_unit(exp_int(3)), Err(SeriesError::InsufficientPrecision { .. })));
        let r = a.invert_unit(exp_int(2)).unwrap();
        let prod = &a * &r;
        assert!(prod.agrees_mod(&PuiseuxSeries::one(q()), exp_int(2)));
    }

    #[test]
    fn valuation_examples() {
        let f = q();
        let a = (&PuiseuxSeries::t_pow(f, exp(3, 2))) + &PuiseuxSeries::t_pow(f, exp_int(2));
        assert_eq!(a.val(), Val::Finite(exp(3, 2)));
        assert_eq!(PuiseuxSeries::from_i64(f, 5).val(), Val::Finite(exp_int(0)));
        assert_eq!(PuiseuxSeries::zero_mod(f, exp_int(7)).val(), Val::ZeroSoFar(exp_int(7)));
    }

    #[test]
    fn reramify_examples() {
        let a = s(&[(0, 1), (1, 1)], 1, None);
        let b = a.reramify(3).unwrap();
        assert_eq!(b.ram(), 3);
        assert_eq!(b.terms().map(|(k, _)| k).collect::<Vec<_>>(), vec![0, 3]);
        let h = PuiseuxSeries::t_pow(q(), exp(1, 2)).reramify(6).unwrap();
        assert_eq!(h.terms().next().unwrap().0, 3);
        let t2 = s(&[(2, 1)], 2, None);
        assert_eq!(t2.reramify(3), Err(SeriesError::NotAMultiple { q: 2, q_new: 3 }));
    }

    #[test]
    fn pretty_printing() {
        let a = s(&[(0, 1), (1, -2), (3, 1)], 2, Some(exp_int(4)));
        assert_eq!(a.pretty(), "1 - 2*t^(1/2) + t^(3/2) + O(t^4)");
    }
}
