//! Solvers for the residue-level systems (polynomials over the coefficient field).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Field, Scalar};
use crate::poly::FieldPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueOutcome {
    /// Solutions in search order (possibly not all of them).
    Points(Vec<Vec<Scalar>>),
    /// Definitely no solution over the field.
    NoPoints,
    Unknown(String),
}

pub trait ResidueSolver: Sync {
    fn solve(&self, system: &[FieldPoly], n_vars: usize) -> ResidueOutcome;

    /// Distinct roots of `sum c_i X^i`, or `None` if they cannot be determined.
    fn roots(&self, coeffs: &[Scalar]) -> Option<Vec<Scalar>>;
}

/// Exhaustive search over `F_p^n`, complete when `p^n <= budget`.
#[derive(Clone, Debug)]
pub struct FiniteFieldSolver {
    pub p: u64,
    pub budget: u128,
    pub max_points: usize,
}

impl FiniteFieldSolver {
    pub fn new(p: u64) -> Self {
        FiniteFieldSolver { p, budget: 1 << 22, max_points: 256 }
    }
}

impl ResidueSolver for FiniteFieldSolver {
    fn solve(&self, system: &[FieldPoly], n_vars: usize) -> ResidueOutcome {
        let total = (self.p as u128).checked_pow(n_vars as u32).unwrap_or(u128::MAX);
        if total > self.budget {
            return ResidueOutcome::Unknown(format!("{total} residue tuples exceed budget {}", self.budget));
        }
        let mut found = Vec::new();
        let mut x = vec![0u64; n_vars];
        for _ in 0..total {
            let pt: Vec<Scalar> = x.iter().map(|&v| Scalar::Residue(v)).collect();
            if system.iter().all(|f| f.field().is_zero(&f.eval(&pt))) {
                found.push(pt);
                if found.len() >= self.max_points {
                    break;
                }
            }
            for d in x.iter_mut().rev() {
                *d += 1;
                if *d < self.p {
                    break;
                }
                *d = 0;
            }
        }
        if found.is_empty() {
            ResidueOutcome::NoPoints
        } else {
            ResidueOutcome::Points(found)
        }
    }

    fn roots(&self, coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.p as u128 > self.budget {
            return None;
        }
        let field = Field::Prime(self.p);
        if coeffs.iter().all(|c| field.is_zero(c)) {
            return None;
        }
        Some((0..self.p).map(Scalar::Residue).filter(|x| field.is_zero(&horner(field, coeffs, x))).collect())
    }
}

fn horner(field: Field, coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

/// Rational residue solver: complete for one variable (rational root theorem),
/// a bounded height search otherwise.
#[derive(Clone, Debug)]
pub struct RationalSolver {
    pub height: i64,
    pub max_points: usize,
}

impl Default for RationalSolver {
    fn default() -> Self {
        RationalSolver { height: 6, max_points: 64 }
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

/// Distinct rational roots of a polynomial with rational coefficients, ordered
/// by height and then positive before negative.
pub(crate) fn rational_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut c: Vec<BigRational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.is_empty() {
        return None;
    }
    let mut roots = Vec::new();
    let low = c.iter().position(|x| !x.is_zero()).unwrap();
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let c = &c[low..];
    if c.len() == 1 {
        return Some(roots);
    }
    let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let a0 = divisors(&ints[0])?;
    let an = divisors(ints.last().unwrap())?;
    let mut cands: Vec<BigRational> = Vec::new();
    for p in &a0 {
        for q in &an {
            let r = BigRational::new(p.clone(), q.clone());
            for s in [r.clone(), -r] {
                if !cands.contains(&s) {
                    cands.push(s);
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        let ha = a.numer().abs() * a.denom();
        let hb = b.numer().abs() * b.denom();
        ha.cmp(&hb).then(b.cmp(a))
    });
    for r in cands {
        let v = c.iter().rev().fold(BigRational::zero(), |acc, x| acc * &r + x);
        if v.is_zero() {
            roots.push(r);
        }
    }
    Some(roots)
}

fn small_rationals(h: i64) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero()];
    for height in 1..=h {
        for den in 1..=height {
            if height % den != 0 {
                continue;
            }
            let num = height / den;
            if num.gcd(&den) != 1 {
                continue;
            }
            let r = BigRational::new(BigInt::from(num), BigInt::from(den));
            v.push(r.clone());
            v.push(-r);
        }
    }
    v
}

impl ResidueSolver for RationalSolver {
    fn solve(&self, system: &[FieldPoly], n_vars: usize) -> ResidueOutcome {
        let field = Field::Rationals;
        let nonzero: Vec<&FieldPoly> = system.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return ResidueOutcome::Points(vec![vec![field.zero(); n_vars]]);
        }
        if n_vars == 1 {
            let coeffs: Vec<BigRational> = nonzero[0]
                .univariate_coeffs()
                .into_iter()
                .map(|s| match s {
                    Scalar::Rational(r) => r,
                    Scalar::Residue(_) => unreachable!("rational solver on a prime field"),
                })
                .collect();
            let Some(roots) = rational_roots(&coeffs) else {
                return ResidueOutcome::Unknown("coefficients too large for the rational root test".into());
            };
            let pts: Vec<Vec<Scalar>> = roots
                .into_iter()
                .map(|r| vec![Scalar::Rational(r)])
                .filter(|pt| nonzero.iter().all(|f| field.is_zero(&f.eval(pt))))
                .collect();
            return if pts.is_empty() { ResidueOutcome::NoPoints } else { ResidueOutcome::Points(pts) };
        }
        let vals = small_rationals(self.height);
        let total = (vals.len() as u128).checked_pow(n_vars as u32).unwrap_or(u128::MAX);
        if total > 1 << 22 {
            return ResidueOutcome::Unknown("height search space too large".into());
        }
        let mut found = Vec::new();
        let mut idx = vec![0usize; n_vars];
        for _ in 0..total {
            let pt: Vec<Scalar> = idx.iter().map(|&i| Scalar::Rational(vals[i].clone())).collect();
            if nonzero.iter().all(|f| field.is_zero(&f.eval(&pt))) {
                found.push(pt);
                if found.len() >= self.max_points {
                    break;
                }
            }
            for d in idx.iter_mut().rev() {
                *d += 1;
                if *d < vals.len() {
                    break;
                }
                *d = 0;
            }
        }
        if found.is_empty() {
            ResidueOutcome::Unknown(format!("no rational point of height <= {}", self.height))
        } else {
            ResidueOutcome::Points(found)
        }
    }

    fn roots(&self, coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
        let rs: Vec<BigRational> = coeffs
            .iter()
            .map(|s| match s {
                Scalar::Rational(r) => r.clone(),
                Scalar::Residue(_) => unreachable!("rational solver on a prime field"),
            })
            .collect();
        rational_roots(&rs).map(|v| v.into_iter().map(Scalar::Rational).collect())
    }
}

pub fn default_solver(field: Field) -> Box<dyn ResidueSolver> {
    match field {
        Field::Rationals => Box::new(RationalSolver::default()),
        Field::Prime(p) => Box::new(FiniteFieldSolver::new(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots_found_in_order() {
        // (x - 1)(x + 1)(2x - 3) = 2x^3 - 3x^2 - 2x + 3
        let roots = rational_roots(&[r(3, 1), r(-2, 1), r(-3, 1), r(2, 1)]).unwrap();
        assert_eq!(roots, vec![r(1, 1), r(-1, 1), r(3, 2)]);
        assert_eq!(rational_roots(&[r(1, 1), r(0, 1), r(1, 1)]).unwrap(), vec![]);
        assert_eq!(rational_roots(&[r(0, 1), r(0, 1), r(1, 1)]).unwrap(), vec![r(0, 1)]);
    }

    #[test]
    fn finite_field_exhaustive() {
        let f = Field::Prime(5);
        // x^2 + 1 over F_5 has roots 2, 3
        let p = FieldPoly::from_terms(f, 1, vec![(vec![2], f.one()), (vec![0], f.one())]).unwrap();
        let s = FiniteFieldSolver::new(5);
        assert_eq!(
            s.solve(&[p], 1),
            ResidueOutcome::Points(vec![vec![Scalar::Residue(2)], vec![Scalar::Residue(3)]])
        );
        let f3 = Field::Prime(3);
        let p = FieldPoly::from_terms(f3, 1, vec![(vec![2], f3.one()), (vec![0], f3.one())]).unwrap();
        assert_eq!(FiniteFieldSolver::new(3).solve(&[p], 1), ResidueOutcome::NoPoints);
    }

    #[test]
    fn rational_univariate_is_complete() {
        let f = Field::Rationals;
        let p = FieldPoly::from_terms(f, 1, vec![(vec![2], f.one()), (vec![0], f.one())]).unwrap();
        assert_eq!(RationalSolver::default().solve(&[p], 1), ResidueOutcome::NoPoints);
    }
}
