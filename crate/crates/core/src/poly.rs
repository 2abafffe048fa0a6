//! Multivariate polynomials with Puiseux-series coefficients, and their
//! residue images over the coefficient field.

use std::collections::BTreeMap;

use crate::error::SeriesError;
use crate::field::{Field, Scalar};
use crate::series::{exp_int, Exp, PuiseuxSeries, Val};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    field: Field,
    n_vars: usize,
    terms: BTreeMap<Monomial, PuiseuxSeries>,
    homogeneous_degree: Option<u32>,
}

fn degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

impl SeriesPoly {
    pub fn zero(field: Field, n_vars: usize) -> Self {
        SeriesPoly { field, n_vars, terms: BTreeMap::new(), homogeneous_degree: None }
    }

    /// Sums duplicate monomials; drops exactly-zero coefficients but keeps
    /// zero-so-far ones, since they still carry precision information.
    pub fn from_terms(
        field: Field,
        n_vars: usize,
        terms: impl IntoIterator<Item = (Monomial, PuiseuxSeries)>,
    ) -> Result<Self, SeriesError> {
        let mut p = SeriesPoly::zero(field, n_vars);
        for (m, c) in terms {
            if m.len() != n_vars {
                return Err(SeriesError::DimensionMismatch { expected: n_vars, found: m.len() });
            }
            if c.field() != field {
                return Err(SeriesError::FieldMismatch { left: field.to_string(), right: c.field().to_string() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: PuiseuxSeries) {
        let merged = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_exact_zero() {
            self.terms.insert(m, merged);
        }
    }

    /// The `i`-th coordinate function.
    pub fn var(field: Field, n_vars: usize, i: usize) -> Self {
        let mut m = vec![0; n_vars];
        m[i] = 1;
        let mut p = SeriesPoly::zero(field, n_vars);
        p.terms.insert(m, PuiseuxSeries::one(field));
        p
    }

    pub fn constant(field: Field, n_vars: usize, c: PuiseuxSeries) -> Self {
        let mut p = SeriesPoly::zero(field, n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    /// Univariate polynomial from coefficients `c_0, c_1, ...`.
    pub fn from_univariate(field: Field, coeffs: &[PuiseuxSeries]) -> Self {
        let mut p = SeriesPoly::zero(field, 1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }

    /// Marks the polynomial homogeneous of degree `d` after checking every monomial.
    pub fn with_homogeneous_degree(mut self, d: u32) -> Result<Self, SeriesError> {
        if self.terms.keys().any(|m| degree(m) != d) {
            return Err(SeriesError::NotHomogeneous(d));
        }
        self.homogeneous_degree = Some(d);
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        self.homogeneous_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PuiseuxSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> PuiseuxSeries {
        self.terms.get(m).cloned().unwrap_or_else(|| PuiseuxSeries::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Infers whether every monomial has the same total degree.
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Least common multiple of the coefficient ramification indices.
    pub fn ram(&self) -> i64 {
        use num_integer::Integer;
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.ram()))
    }

    /// Smallest coefficient precision (`None` if every coefficient is exact).
    pub fn precision(&self) -> Option<Exp> {
        self.terms.values().filter_map(|c| c.precision()).min()
    }

    /// Minimum certified valuation of the coefficients.
    pub fn min_val(&self) -> Option<Exp> {
        self.terms.values().filter_map(|c| c.val().lower_bound()).min()
    }

    pub fn map_coeffs(&self, f: impl Fn(&PuiseuxSeries) -> PuiseuxSeries) -> Self {
        let mut p = SeriesPoly::zero(self.field, self.n_vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p.homogeneous_degree = self.homogeneous_degree;
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.homogeneous_degree = None;
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = SeriesPoly::zero(self.field, self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                p.add_term(m, ca * cb);
            }
        }
        p
    }

    pub fn scale(&self, c: &PuiseuxSeries) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = SeriesPoly::constant(self.field, self.n_vars, PuiseuxSeries::one(self.field));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[PuiseuxSeries]) -> Result<PuiseuxSeries, SeriesError> {
        if x.len() != self.n_vars {
            return Err(SeriesError::DimensionMismatch { expected: self.n_vars, found: x.len() });
        }
        if let Some(bad) = x.iter().find(|s| s.field() != self.field) {
            return Err(SeriesError::FieldMismatch { left: self.field.to_string(), right: bad.field().to_string() });
        }
        // cache powers per variable
        let mut powers: Vec<Vec<PuiseuxSeries>> = Vec::with_capacity(self.n_vars);
        for (i, xi) in x.iter().enumerate() {
            let top = self.degree_in(i) as usize;
            let mut v = vec![PuiseuxSeries::one(self.field)];
            for k in 1..=top {
                let next = &v[k - 1] * xi;
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = PuiseuxSeries::zero(self.field);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = SeriesPoly::zero(self.field, self.n_vars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            p.add_term(dm, c.scale(&self.field.from_i64(m[i] as i64)));
        }
        p
    }

    /// Substitutes variable `i` by `subs[i]` (all in a common ring of `n` variables).
    pub fn compose(&self, subs: &[SeriesPoly]) -> Result<Self, SeriesError> {
        if subs.len() != self.n_vars {
            return Err(SeriesError::DimensionMismatch { expected: self.n_vars, found: subs.len() });
        }
        let n = subs.first().map_or(0, |s| s.n_vars);
        let mut powers: Vec<Vec<SeriesPoly>> = Vec::new();
        for (i, s) in subs.iter().enumerate() {
            let top = self.degree_in(i) as usize;
            let mut v = vec![SeriesPoly::constant(self.field, n, PuiseuxSeries::one(self.field))];
            for k in 1..=top {
                let next = v[k - 1].mul(s);
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = SeriesPoly::zero(self.field, n);
        for (m, c) in &self.terms {
            let mut term = SeriesPoly::constant(self.field, n, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Restriction to the line `x + Z * e_i`, as a univariate polynomial in `Z`.
    pub fn line_section(&self, x: &[PuiseuxSeries], i: usize) -> Result<Self, SeriesError> {
        if x.len() != self.n_vars {
            return Err(SeriesError::DimensionMismatch { expected: self.n_vars, found: x.len() });
        }
        let subs: Vec<SeriesPoly> = x
            .iter()
            .enumerate()
            .map(|(j, xj)| {
                let c = SeriesPoly::constant(self.field, 1, xj.clone());
                if j == i {
                    c.add(&SeriesPoly::var(self.field, 1, 0))
                } else {
                    c
                }
            })
            .collect();
        self.compose(&subs)
    }

    /// Coefficients `c_0..c_deg` of a univariate polynomial.
    pub fn univariate_coeffs(&self) -> Result<Vec<PuiseuxSeries>, SeriesError> {
        if self.n_vars != 1 {
            return Err(SeriesError::DimensionMismatch { expected: 1, found: self.n_vars });
        }
        let deg = self.degree_in(0) as usize;
        Ok((0..=deg).map(|i| self.coeff(&vec![i as u32])).collect())
    }

    /// Image modulo `t`: constant terms of the coefficients, which must be integral
    /// and known past exponent 0.
    pub fn residue(&self) -> Result<FieldPoly, SeriesError> {
        let mut r = FieldPoly::zero(self.field, self.n_vars);
        for (m, c) in &self.terms {
            match c.val() {
                Val::Finite(v) if v < exp_int(0) => return Err(SeriesError::NotIntegral),
                Val::ZeroSoFar(mu) if mu <= exp_int(0) => {
                    return Err(SeriesError::PrecisionTooLow(format!("coefficient known only mod t^{mu}")))
                }
                _ => {}
            }
            if let Some(mu) = c.precision() {
                if mu <= exp_int(0) {
                    return Err(SeriesError::PrecisionTooLow(format!("coefficient known only mod t^{mu}")));
                }
            }
            r.add_term(m.clone(), c.constant_term());
        }
        Ok(r)
    }

    /// Multiplies every coefficient by `t^e`.
    pub fn shift(&self, e: Exp) -> Self {
        self.map_coeffs(|c| c.shift(e))
    }
}

/// Polynomial over the coefficient field itself (the residue level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoly {
    field: Field,
    n_vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl FieldPoly {
    pub fn zero(field: Field, n_vars: usize) -> Self {
        FieldPoly { field, n_vars, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        field: Field,
        n_vars: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, SeriesError> {
        let mut p = FieldPoly::zero(field, n_vars);
        for (m, c) in terms {
            if m.len() != n_vars {
                return Err(SeriesError::DimensionMismatch { expected: n_vars, found: m.len() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        let field = self.field;
        let merged = match self.terms.remove(&m) {
            Some(old) => field.add(&old, &c),
            None => c,
        };
        if !field.is_zero(&merged) {
            self.terms.insert(m, merged);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                if e > 0 {
                    term = f.mul(&term, &f.pow(xi, e));
                }
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = FieldPoly::zero(self.field, self.n_vars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            p.add_term(dm, self.field.mul_int(c, m[i] as i64));
        }
        p
    }

    /// Dense coefficients of a univariate polynomial.
    pub fn univariate_coeffs(&self) -> Vec<Scalar> {
        let deg = if self.n_vars == 1 { self.degree_in(0) as usize } else { 0 };
        let mut v = vec![self.field.zero(); deg + 1];
        for (m, c) in &self.terms {
            let i = m.first().copied().unwrap_or(0) as usize;
            v[i] = c.clone();
        }
        v
    }

    /// Lifts to a series polynomial with constant exact coefficients.
    pub fn to_series_poly(&self) -> SeriesPoly {
        let mut p = SeriesPoly::zero(self.field, self.n_vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), PuiseuxSeries::constant(self.field, c.clone()));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp;

    fn q() -> Field {
        Field::Rationals
    }

    fn x_sq_minus(c: PuiseuxSeries) -> SeriesPoly {
        SeriesPoly::from_terms(q(), 1, vec![(vec![2], PuiseuxSeries::one(q())), (vec![0], -&c)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = x_sq_minus(PuiseuxSeries::t_pow(q(), exp_int(1)));
        let r = f.eval(&[PuiseuxSeries::t_pow(q(), exp(1, 2))]).unwrap();
        assert!(r.is_exact_zero());

        let g = SeriesPoly::var(q(), 2, 0).add(&SeriesPoly::var(q(), 2, 1));
        let y = &PuiseuxSeries::from_i64(q(), -1) + &PuiseuxSeries::t_pow(q(), exp_int(1));
        let r = g.eval(&[PuiseuxSeries::one(q()), y]).unwrap();
        assert!(r.same_element(&PuiseuxSeries::t_pow(q(), exp_int(1))));

        let h = SeriesPoly::from_terms(q(), 1, vec![(vec![2], PuiseuxSeries::one(q()))]).unwrap();
        let x = (&PuiseuxSeries::one(q()) + &PuiseuxSeries::t_pow(q(), exp_int(1))).truncate(exp_int(2));
        let r = h.eval(&[x]).unwrap();
        assert_eq!(r.precision(), Some(exp_int(2)));
        assert_eq!(r.coeff(exp_int(1)), q().from_i64(2));
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        let g = SeriesPoly::var(q(), 2, 0);
        assert!(matches!(g.eval(&[PuiseuxSeries::one(q())]), Err(SeriesError::DimensionMismatch { .. })));
    }

    #[test]
    fn homogeneity_checked() {
        let f = SeriesPoly::var(q(), 2, 0).mul(&SeriesPoly::var(q(), 2, 1));
        assert!(f.clone().with_homogeneous_degree(2).is_ok());
        assert!(f.add(&SeriesPoly::var(q(), 2, 0)).with_homogeneous_degree(2).is_err());
    }

    #[test]
    fn line_section_shifts() {
        // (x + Z)^2 - t at x = 1
        let f = x_sq_minus(PuiseuxSeries::t_pow(q(), exp_int(1)));
        let g = f.line_section(&[PuiseuxSeries::one(q())], 0).unwrap();
        let c = g.univariate_coeffs().unwrap();
        assert_eq!(c.len(), 3);
        assert!(c[1].same_element(&PuiseuxSeries::from_i64(q(), 2)));
        assert_eq!(c[0].coeff(exp_int(1)), q().from_i64(-1));
    }

    #[test]
    fn residue_requires_integrality() {
        let f = x_sq_minus(PuiseuxSeries::t_pow(q(), exp_int(-1)));
        assert_eq!(f.residue(), Err(SeriesError::NotIntegral));
        let g = x_sq_minus(PuiseuxSeries::one(q()));
        let r = g.residue().unwrap();
        assert!(q().is_zero(&r.eval(&[q().one()])));
    }
}
