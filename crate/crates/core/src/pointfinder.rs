//! Points on projective hypersurfaces: exhaustive Chevalley–Warning search
//! over `F_p`, and the truncate–solve–lift loop over `k((t))` and its tower.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PointError, SeriesError};
use crate::field::{Field, Scalar};
use crate::lifting::{
    default_solver, smooth_lift, ApproxSolution, Minor, PolySystem, PuiseuxSearch, Residual, ResidueOutcome,
};
use crate::localglobal::{hilbert_symbol, relevant_places, Rat};
use crate::poly::{FieldPoly, SeriesPoly};
use crate::serial::{series_to_json, SeriesJson};
use crate::series::{format_exp, Exp, PuiseuxSeries, Val};

/// A degree-`d` hypersurface in `P^n`, given by a form in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    form: SeriesPoly,
    d: u32,
    n: usize,
}

impl Hypersurface {
    pub fn new(form: SeriesPoly) -> Result<Self, PointError> {
        let d = form.is_homogeneous().ok_or(PointError::NotHomogeneous)?;
        if form.n_vars() < 2 || form.is_zero() {
            return Err(PointError::Unsupported("need a nonzero form in at least two variables".into()));
        }
        let n = form.n_vars() - 1;
        Ok(Hypersurface { form, d, n })
    }

    pub fn form(&self) -> &SeriesPoly {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn c1_regime(&self) -> bool {
        self.d as usize <= self.n
    }
}

/// Coordinates with a distinguished unit coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub coords: Vec<PuiseuxSeries>,
    pub normalization: usize,
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            coords: Vec<SeriesJson>,
            normalization: usize,
        }
        Repr { coords: self.coords.iter().map(series_to_json).collect(), normalization: self.normalization }
            .serialize(s)
    }
}

fn form_degree(form: &FieldPoly) -> Result<u32, PointError> {
    let mut degs = form.terms().map(|(m, _)| m.iter().sum::<u32>());
    let d = degs.next().unwrap_or(0);
    if degs.all(|e| e == d) {
        Ok(d)
    } else {
        Err(PointError::NotHomogeneous)
    }
}

/// A form over `F_p` flattened for fast evaluation.
struct CompiledForm {
    p: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl CompiledForm {
    fn new(form: &FieldPoly) -> Result<Self, PointError> {
        let Field::Prime(p) = form.field() else {
            return Err(PointError::Unsupported("exhaustive search needs a prime field".into()));
        };
        form_degree(form)?;
        let terms = form
            .terms()
            .map(|(m, c)| match c {
                Scalar::Residue(v) => (m.clone(), *v),
                Scalar::Rational(_) => unreachable!("prime field coefficient"),
            })
            .collect();
        Ok(CompiledForm { p, terms })
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for (m, c) in &self.terms {
            let mut t = *c as u128;
            for (xi, &e) in x.iter().zip(m) {
                for _ in 0..e {
                    t = t * *xi as u128 % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc as u64
    }
}

/// Projective points of `P^(k-1)(F_p)` in search order: charts by the position
/// of the leading `1`, later coordinates as base-`p` digits mapped to
/// `1, 2, ..., p-1, 0`.
struct ProjectiveEnumeration {
    p: u64,
    k: usize,
    chart_sizes: Vec<u64>,
    total: u64,
}

impl ProjectiveEnumeration {
    fn new(p: u64, k: usize) -> Option<Self> {
        let chart_sizes: Vec<u64> = (0..k).map(|i| p.checked_pow((k - 1 - i) as u32)).collect::<Option<_>>()?;
        let total = chart_sizes.iter().try_fold(0u64, |a, &b| a.checked_add(b))?;
        Some(ProjectiveEnumeration { p, k, chart_sizes, total })
    }

    fn decode(&self, mut idx: u64) -> Vec<u64> {
        let mut x = vec![0u64; self.k];
        let mut chart = 0;
        while idx >= self.chart_sizes[chart] {
            idx -= self.chart_sizes[chart];
            chart += 1;
        }
        x[chart] = 1;
        for pos in (chart + 1..self.k).rev() {
            let digit = idx % self.p;
            idx /= self.p;
            x[pos] = (digit + 1) % self.p;
        }
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwMode {
    Exhaustive,
    Random { seed: u64 },
}

/// A nontrivial zero of a form over `F_p`. In exhaustive mode the first zero in
/// search order is returned and `None` is definitive; random mode draws up to
/// `budget` points and reports `BudgetExceeded` when none vanishes.
pub fn cw_search(form: &FieldPoly, mode: CwMode, budget: u128) -> Result<Option<Vec<u64>>, PointError> {
    let f = CompiledForm::new(form)?;
    let k = form.n_vars();
    let needed = (f.p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    match mode {
        CwMode::Exhaustive => {
            if needed > budget {
                return Err(PointError::BudgetExceeded { needed, budget });
            }
            let en = ProjectiveEnumeration::new(f.p, k).expect("within budget");
            Ok((0..en.total).into_par_iter().find_first(|&i| f.eval(&en.decode(i)) == 0).map(|i| en.decode(i)))
        }
        CwMode::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = budget.min(u64::MAX as u128) as u64;
            for _ in 0..draws {
                let mut x: Vec<u64> = (0..k).map(|_| rng.gen_range(0..f.p)).collect();
                let Some(lead) = x.iter().position(|&v| v != 0) else { continue };
                let inv = Field::Prime(f.p).inv(&Scalar::Residue(x[lead])).unwrap();
                let Scalar::Residue(inv) = inv else { unreachable!() };
                for v in x.iter_mut() {
                    *v = (*v as u128 * inv as u128 % f.p as u128) as u64;
                }
                if f.eval(&x) == 0 {
                    return Ok(Some(x));
                }
            }
            Err(PointError::BudgetExceeded { needed, budget })
        }
    }
}

fn cw_all_zeros(form: &FieldPoly, budget: u128, max_points: usize) -> Result<Vec<Vec<u64>>, PointError> {
    let f = CompiledForm::new(form)?;
    let k = form.n_vars();
    let needed = (f.p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(PointError::BudgetExceeded { needed, budget });
    }
    let en = ProjectiveEnumeration::new(f.p, k).expect("within budget");
    Ok((0..en.total).map(|i| en.decode(i)).filter(|x| f.eval(x) == 0).take(max_points).collect())
}

/// `f = f_nu + t^nu g_nu` with `f_nu` supported strictly below `t^nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSplit {
    pub f_nu: SeriesPoly,
    pub g_nu: SeriesPoly,
    pub nu: Exp,
}

pub fn truncate_split(f: &SeriesPoly, nu: Exp) -> Result<TruncationSplit, SeriesError> {
    let field = f.field();
    let mut low = Vec::new();
    let mut high = Vec::new();
    for (m, c) in f.terms() {
        if let Some(prec) = c.precision() {
            if prec < nu {
                return Err(SeriesError::PrecisionTooLow(format!(
                    "coefficient known mod t^{}, split at t^{}",
                    format_exp(&prec),
                    format_exp(&nu)
                )));
            }
        }
        let head = c.head(nu);
        let tail = (c - &head).shift(-nu);
        low.push((m.clone(), head));
        high.push((m.clone(), tail));
    }
    let mut f_nu = SeriesPoly::from_terms(field, f.n_vars(), low)?;
    let mut g_nu = SeriesPoly::from_terms(field, f.n_vars(), high)?;
    if let Some(d) = f.homogeneous_degree() {
        f_nu = f_nu.with_homogeneous_degree(d)?;
        g_nu = g_nu.with_homogeneous_degree(d)?;
    }
    Ok(TruncationSplit { f_nu, g_nu, nu })
}

impl TruncationSplit {
    pub fn recompose(&self) -> SeriesPoly {
        self.f_nu.add(&self.g_nu.shift(self.nu))
    }
}

/// Nontrivial projective zeros of a residue form.
pub trait ProjectiveSolver: Sync {
    fn zeros(&self, form: &FieldPoly) -> ResidueOutcome;
}

/// Complete enumeration over `F_p`.
#[derive(Clone, Debug)]
pub struct CwSolver {
    pub budget: u128,
    pub max_points: usize,
}

impl Default for CwSolver {
    fn default() -> Self {
        CwSolver { budget: 1 << 22, max_points: 64 }
    }
}

impl ProjectiveSolver for CwSolver {
    fn zeros(&self, form: &FieldPoly) -> ResidueOutcome {
        match cw_all_zeros(form, self.budget, self.max_points) {
            Ok(pts) if pts.is_empty() => ResidueOutcome::NoPoints,
            Ok(pts) => ResidueOutcome::Points(
                pts.into_iter().map(|x| x.into_iter().map(Scalar::Residue).collect()).collect(),
            ),
            Err(e) => ResidueOutcome::Unknown(e.to_string()),
        }
    }
}

/// Rational zeros: decided for quadratic forms in at most three variables
/// (diagonalization plus Hilbert symbols), a height search otherwise.
#[derive(Clone, Debug)]
pub struct RationalFormSolver {
    pub height: i64,
}

impl Default for RationalFormSolver {
    fn default() -> Self {
        RationalFormSolver { height: 60 }
    }
}

fn rat(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        Scalar::Residue(_) => unreachable!("rational solver on a prime field"),
    }
}

fn to_small(r: &BigRational) -> Option<Rat> {
    Some(Rat::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Congruence diagonalization: returns diagonal entries and basis columns `b_i`
/// with `Q(sum y_i b_i) = sum d_i y_i^2`.
fn diagonalize(gram: &[Vec<BigRational>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let k = gram.len();
    let mut m = gram.to_vec();
    let mut basis: Vec<Vec<BigRational>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    // b_j += lambda * b_i, applied to the Gram matrix as well
    let add = |m: &mut Vec<Vec<BigRational>>, basis: &mut Vec<Vec<BigRational>>, j: usize, i: usize, l: &BigRational| {
        for r in 0..k {
            let v = &m[r][i] * l;
            m[r][j] += v;
        }
        for c in 0..k {
            let v = &m[i][c] * l;
            m[j][c] += v;
        }
        let bi = basis[i].clone();
        for (x, y) in basis[j].iter_mut().zip(bi) {
            *x += y * l;
        }
    };
    for i in 0..k {
        if m[i][i].is_zero() {
            if let Some(j) = (i + 1..k).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
                basis.swap(i, j);
            } else if let Some(j) = (i + 1..k).find(|&j| !m[i][j].is_zero()) {
                add(&mut m, &mut basis, i, j, &BigRational::one());
            }
        }
        if m[i][i].is_zero() {
            continue;
        }
        for j in i + 1..k {
            if !m[i][j].is_zero() {
                let l = -(&m[i][j] / &m[i][i]);
                add(&mut m, &mut basis, j, i, &l);
            }
        }
    }
    ((0..k).map(|i| m[i][i].clone()).collect(), basis)
}

fn combine(basis: &[Vec<BigRational>], y: &[BigRational]) -> Vec<BigRational> {
    let k = basis.len();
    (0..k).map(|c| basis.iter().zip(y).fold(BigRational::zero(), |acc, (b, yi)| acc + &b[c] * yi)).collect()
}

fn primitive_projective(v: Vec<BigRational>) -> Vec<Scalar> {
    let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigRational::one);
    v.into_iter().map(|x| Scalar::Rational(x / &lead)).collect()
}

impl RationalFormSolver {
    fn quadratic(&self, form: &FieldPoly) -> ResidueOutcome {
        let k = form.n_vars();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut gram = vec![vec![BigRational::zero(); k]; k];
        for (m, c) in form.terms() {
            let idx: Vec<usize> = m.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                gram[i][i] = rat(c);
            } else {
                gram[i][j] = rat(c) * &half;
                gram[j][i] = rat(c) * &half;
            }
        }
        let (d, basis) = diagonalize(&gram);
        if let Some(i) = d.iter().position(|x| x.is_zero()) {
            let mut y = vec![BigRational::zero(); k];
            y[i] = BigRational::one();
            return ResidueOutcome::Points(vec![primitive_projective(combine(&basis, &y))]);
        }
        match k {
            1 => ResidueOutcome::NoPoints,
            2 => match rational_sqrt(&(-&d[1] / &d[0])) {
                Some(s) => ResidueOutcome::Points(vec![primitive_projective(combine(&basis, &[s, BigRational::one()]))]),
                None => ResidueOutcome::NoPoints,
            },
            _ => {
                // d0 X^2 + d1 Y^2 + d2 Z^2 = 0  <=>  Z^2 = a X^2 + b Y^2
                let a = -&d[0] / &d[2];
                let b = -&d[1] / &d[2];
                let (Some(sa), Some(sb)) = (to_small(&a), to_small(&b)) else {
                    return ResidueOutcome::Unknown("coefficients too large for the Hilbert symbol test".into());
                };
                let isotropic = relevant_places(&[sa, sb]).into_iter().all(|v| hilbert_symbol(&sa, &sb, v) == Ok(1));
                if !isotropic {
                    return ResidueOutcome::NoPoints;
                }
                for h in 0..=self.height {
                    for x in -h..=h {
                        for y in -h..=h {
                            if x.abs().max(y.abs()) != h {
                                continue;
                            }
                            let (bx, by) = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()));
                            let rhs = &a * &bx * &bx + &b * &by * &by;
                            if let Some(z) = rational_sqrt(&rhs) {
                                return ResidueOutcome::Points(vec![primitive_projective(combine(&basis, &[bx, by, z]))]);
                            }
                        }
                    }
                }
                ResidueOutcome::Unknown(format!("isotropic, but no point with |x|, |y| <= {}", self.height))
            }
        }
    }

    fn height_search(&self, form: &FieldPoly) -> ResidueOutcome {
        let k = form.n_vars();
        let h = self.height.min(8);
        let side = (2 * h + 1) as u128;
        if side.checked_pow(k as u32).map_or(true, |t| t > 1 << 22) {
            return ResidueOutcome::Unknown("height search space too large".into());
        }
        let field = Field::Rationals;
        let mut pts = Vec::new();
        for height in 1..=h {
            let mut idx = vec![-height; k];
            loop {
                if idx.iter().map(|x: &i64| x.abs()).max() == Some(height) && idx.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                    let pt: Vec<Scalar> = idx.iter().map(|&x| field.from_i64(x)).collect();
                    if field.is_zero(&form.eval(&pt)) {
                        pts.push(primitive_projective(idx.iter().map(|&x| BigRational::from_integer(x.into())).collect()));
                        if pts.len() >= 16 {
                            return ResidueOutcome::Points(pts);
                        }
                    }
                }
                // odometer step over [-height, height]^k
                let Some(pos) = (0..k).rev().find(|&i| idx[i] < height) else { break };
                idx[pos] += 1;
                for x in idx.iter_mut().skip(pos + 1) {
                    *x = -height;
                }
            }
        }
        if pts.is_empty() {
            ResidueOutcome::Unknown(format!("no rational zero of height <= {h}"))
        } else {
            ResidueOutcome::Points(pts)
        }
    }
}

impl ProjectiveSolver for RationalFormSolver {
    fn zeros(&self, form: &FieldPoly) -> ResidueOutcome {
        if form.is_zero() {
            let mut e = vec![Scalar::Rational(BigRational::zero()); form.n_vars()];
            e[0] = Scalar::Rational(BigRational::one());
            return ResidueOutcome::Points(vec![e]);
        }
        match form_degree(form) {
            Ok(2) if form.n_vars() <= 3 => self.quadratic(form),
            Ok(_) => self.height_search(form),
            Err(e) => ResidueOutcome::Unknown(e.to_string()),
        }
    }
}

pub fn default_projective_solver(field: Field) -> Box<dyn ProjectiveSolver> {
    match field {
        Field::Rationals => Box::new(RationalFormSolver::default()),
        Field::Prime(_) => Box::new(CwSolver::default()),
    }
}

#[derive(Clone, Debug)]
pub struct PointOptions {
    pub schedule: Vec<Exp>,
    pub q_cap: i64,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub point: ProjectivePoint,
    /// Certified lower bound on `val f(point)`.
    #[serde(serialize_with = "ser_exp")]
    pub precision: Exp,
    pub exact: bool,
    pub q: i64,
    pub checked: bool,
}

fn ser_exp<S: serde::Serializer>(e: &Exp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_exp(e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PointReport {
    Solved(Certificate),
    NoSolutionModNu {
        #[serde(serialize_with = "ser_exp")]
        nu: Exp,
        reason: String,
    },
    Inconclusive {
        reason: String,
    },
}

fn certify(form: &SeriesPoly, coords: Vec<PuiseuxSeries>, target: Exp) -> Result<Option<Certificate>, PointError> {
    let field = form.field();
    let Some(unit) = coords.iter().position(|c| matches!(c.val(), Val::Finite(v) if v == Exp::zero())) else {
        return Ok(None);
    };
    let inv = field.inv(&coords[unit].constant_term()).expect("unit coordinate");
    let coords: Vec<PuiseuxSeries> = coords.iter().map(|c| c.scale(&inv).normalize()).collect();
    let residual = Residual::of_values(&[form.eval(&coords)?]);
    if !residual.at_least(target) {
        return Ok(None);
    }
    let q = coords.iter().fold(1i64, |acc, c| acc.lcm(&c.minimal_ram()));
    Ok(Some(Certificate {
        precision: residual.bound().unwrap_or(target),
        exact: residual == Residual::Exact,
        point: ProjectivePoint { coords, normalization: unit },
        q,
        checked: true,
    }))
}

/// Solves the residue form, Newton-lifts a smooth residue zero to the last
/// scheduled precision, and retries singular ones along coordinate lines in
/// the ramified tower.
pub fn point_over_laurent(
    hyp: &Hypersurface,
    solver: &dyn ProjectiveSolver,
    opts: &PointOptions,
) -> Result<PointReport, PointError> {
    let target = *opts.schedule.last().ok_or_else(|| PointError::Unsupported("empty precision schedule".into()))?;
    if opts.schedule.windows(2).any(|w| w[0] >= w[1]) || opts.schedule[0] <= Exp::zero() {
        return Err(PointError::Unsupported("schedule must be positive and increasing".into()));
    }
    let field = hyp.form.field();
    let lowest = hyp.form.terms().filter_map(|(_, c)| c.val().finite()).min().ok_or_else(|| {
        PointError::Series(SeriesError::PrecisionTooLow("every coefficient is zero to its precision".into()))
    })?;
    let f = hyp.form.shift(-lowest);
    let residue = f.residue()?;
    let points = match solver.zeros(&residue) {
        ResidueOutcome::NoPoints => {
            return Ok(PointReport::NoSolutionModNu {
                nu: opts.schedule[0],
                reason: "the residue form has no nontrivial zero".into(),
            })
        }
        ResidueOutcome::Unknown(reason) => return Ok(PointReport::Inconclusive { reason }),
        ResidueOutcome::Points(p) => p,
    };
    let sys = PolySystem::single(f.clone())?;
    let mut singular = Vec::new();
    let mut failures = Vec::new();
    for pt in &points {
        let x: Vec<PuiseuxSeries> = pt.iter().map(|c| PuiseuxSeries::constant(field, c.clone())).collect();
        let smooth_col = (0..x.len()).find(|&j| !field.is_zero(&residue.derivative(j).eval(pt)));
        let Some(j) = smooth_col else {
            singular.push(x);
            continue;
        };
        let start = ApproxSolution::measure(&sys, x)?;
        match smooth_lift(&sys, &start, target, Some(&Minor { rows: vec![0], cols: vec![j] })) {
            Ok(out) => {
                if let Some(cert) = certify(&f, out.point, target)? {
                    return Ok(PointReport::Solved(cert));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let roots = default_solver(field);
    let search = PuiseuxSearch { solver: roots.as_ref(), q_cap: opts.q_cap, max_depth: opts.max_depth };
    for x in &singular {
        for var in 0..x.len() {
            let section = f.line_section(x, var)?;
            if section.is_zero() {
                continue;
            }
            let res = search.search(&section.univariate_coeffs()?, 1, target);
            if let Some(z) = res.root {
                let mut y = x.clone();
                y[var] = &y[var] + &z;
                if let Some(cert) = certify(&f, y, target)? {
                    return Ok(PointReport::Solved(cert));
                }
            }
        }
    }
    let reason = if failures.is_empty() {
        format!("{} residue zeros, {} singular; no lift reached t^{}", points.len(), singular.len(), format_exp(&target))
    } else {
        failures.join("; ")
    };
    Ok(PointReport::Inconclusive { reason })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatchSample {
    All,
    Count { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub p: u64,
    pub n: u32,
    pub d: u32,
    pub forms_checked: u64,
    pub found: u64,
    /// Coefficient vectors (in monomial order) of forms without a nontrivial zero.
    pub failures: Vec<Vec<u64>>,
}

/// Exponent vectors of degree `d` in `k` variables, lexicographically descending.
pub fn monomials(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Chevalley–Warning check: every sampled degree-`d` form in `n + 1`
/// variables over `F_p` with `d <= n` must have a nontrivial zero.
pub fn verify_c1_batch(p: u64, n: u32, d: u32, sample: BatchSample, budget: u128) -> Result<BatchReport, PointError> {
    let field = Field::prime(p)?;
    if d > n || d == 0 {
        return Err(PointError::RegimeViolation { d, n });
    }
    let mons = monomials(n as usize + 1, d);
    let per_form = (p as u128).checked_pow(n + 1).unwrap_or(u128::MAX);
    let forms: Vec<Vec<u64>> = match sample {
        BatchSample::All => {
            let total = (p as u128).checked_pow(mons.len() as u32).unwrap_or(u128::MAX);
            if total.saturating_mul(per_form) > budget {
                return Err(PointError::BudgetExceeded { needed: total.saturating_mul(per_form), budget });
            }
            (0..total as u64)
                .map(|mut i| {
                    (0..mons.len())
                        .map(|_| {
                            let c = i % p;
                            i /= p;
                            c
                        })
                        .collect()
                })
                .collect()
        }
        BatchSample::Count { count, seed } => {
            if (count as u128).saturating_mul(per_form) > budget {
                return Err(PointError::BudgetExceeded { needed: (count as u128).saturating_mul(per_form), budget });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (0..mons.len()).map(|_| rng.gen_range(0..p)).collect()).collect()
        }
    };
    let results: Vec<Result<bool, PointError>> = forms
        .par_iter()
        .map(|coeffs| {
            let form = FieldPoly::from_terms(
                field,
                n as usize + 1,
                mons.iter().cloned().zip(coeffs.iter().map(|&c| Scalar::Residue(c))),
            )?;
            Ok(cw_search(&form, CwMode::Exhaustive, per_form)?.is_some())
        })
        .collect();
    let mut failures = Vec::new();
    let mut found = 0;
    for (coeffs, r) in forms.iter().zip(results) {
        if r? {
            found += 1;
        } else {
            failures.push(coeffs.clone());
        }
    }
    Ok(BatchReport { p, n, d, forms_checked: forms.len() as u64, found, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::doubling_schedule;
    use crate::series::{exp, exp_int};

    fn fp_form(p: u64, k: usize, terms: &[(&[u32], i64)]) -> FieldPoly {
        let f = Field::Prime(p);
        FieldPoly::from_terms(f, k, terms.iter().map(|(m, c)| (m.to_vec(), f.from_i64(*c)))).unwrap()
    }

    #[test]
    fn cw_examples() {
        let f = fp_form(3, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert_eq!(cw_search(&f, CwMode::Exhaustive, 1 << 20).unwrap(), Some(vec![1, 1, 1]));
        let f = fp_form(5, 3, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]);
        assert_eq!(cw_search(&f, CwMode::Exhaustive, 1 << 20).unwrap(), Some(vec![1, 1, 1]));
        let f = fp_form(3, 2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(cw_search(&f, CwMode::Exhaustive, 1 << 20).unwrap(), None);
        assert!(matches!(cw_search(&f, CwMode::Random { seed: 1 }, 50), Err(PointError::BudgetExceeded { .. })));
        assert!(matches!(cw_search(&f, CwMode::Exhaustive, 4), Err(PointError::BudgetExceeded { .. })));
    }

    #[test]
    fn enumeration_covers_projective_space_once() {
        let en = ProjectiveEnumeration::new(3, 3).unwrap();
        assert_eq!(en.total, 13);
        let mut pts: Vec<_> = (0..en.total).map(|i| en.decode(i)).collect();
        pts.sort();
        pts.dedup();
        assert_eq!(pts.len(), 13);
    }

    #[test]
    fn batch_examples() {
        let r = verify_c1_batch(3, 2, 2, BatchSample::All, 1 << 24).unwrap();
        assert_eq!((r.forms_checked, r.found), (729, 729));
        let r = verify_c1_batch(2, 3, 2, BatchSample::All, 1 << 24).unwrap();
        assert_eq!((r.forms_checked, r.found), (1024, 1024));
        assert_eq!(verify_c1_batch(3, 1, 2, BatchSample::All, 1 << 24), Err(PointError::RegimeViolation { d: 2, n: 1 }));
    }

    fn series_form(field: Field, terms: Vec<(Vec<u32>, PuiseuxSeries)>) -> SeriesPoly {
        let k = terms[0].0.len();
        SeriesPoly::from_terms(field, k, terms).unwrap()
    }

    #[test]
    fn split_examples() {
        let f = Field::Rationals;
        let one_t = &PuiseuxSeries::one(f) + &PuiseuxSeries::t_pow(f, exp_int(1));
        let form = series_form(f, vec![(vec![2, 0], PuiseuxSeries::one(f)), (vec![0, 2], -&one_t)]);
        let s = truncate_split(&form, exp_int(1)).unwrap();
        assert_eq!(s.f_nu.coeff(&vec![0, 2]), PuiseuxSeries::from_i64(f, -1));
        assert_eq!(s.g_nu.coeff(&vec![0, 2]), PuiseuxSeries::from_i64(f, -1));
        assert_eq!(s.recompose(), form);
        let s0 = truncate_split(&form, exp_int(0)).unwrap();
        assert!(s0.f_nu.is_zero());
        let inexact = series_form(f, vec![(vec![1, 1], PuiseuxSeries::one(f).truncate(exp_int(2)))]);
        assert!(truncate_split(&inexact, exp_int(3)).is_err());
    }

    #[test]
    fn laurent_examples() {
        let f5 = Field::Prime(5);
        let one_t = &PuiseuxSeries::one(f5) + &PuiseuxSeries::t_pow(f5, exp_int(1));
        let form = series_form(
            f5,
            vec![(vec![2, 0, 0], PuiseuxSeries::one(f5)), (vec![0, 2, 0], PuiseuxSeries::one(f5)), (vec![0, 0, 2], -&one_t)],
        );
        let hyp = Hypersurface::new(form).unwrap();
        let opts = PointOptions { schedule: doubling_schedule(exp_int(16)), q_cap: 4, max_depth: 8 };
        let PointReport::Solved(cert) = point_over_laurent(&hyp, &CwSolver::default(), &opts).unwrap() else { panic!() };
        let residues: Vec<Scalar> = cert.point.coords.iter().map(|c| c.constant_term()).collect();
        assert_eq!(residues, vec![Scalar::Residue(1), Scalar::Residue(2), Scalar::Residue(0)]);
        assert!(cert.precision >= exp_int(16));

        let q = Field::Rationals;
        let form = series_form(
            q,
            vec![(vec![2, 0], PuiseuxSeries::one(q)), (vec![0, 2], -&PuiseuxSeries::t_pow(q, exp_int(1)))],
        );
        let hyp = Hypersurface::new(form).unwrap();
        let PointReport::Solved(cert) = point_over_laurent(&hyp, &RationalFormSolver::default(), &opts).unwrap() else {
            panic!()
        };
        assert_eq!(cert.q, 2);
        assert!(cert.point.coords[0].same_element(&PuiseuxSeries::t_pow(q, exp(1, 2))));

        let form = series_form(q, vec![(vec![2, 0], PuiseuxSeries::one(q)), (vec![0, 2], PuiseuxSeries::one(q))]);
        let hyp = Hypersurface::new(form).unwrap();
        let out = point_over_laurent(&hyp, &RationalFormSolver::default(), &opts).unwrap();
        assert!(matches!(out, PointReport::NoSolutionModNu { nu, .. } if nu == exp_int(1)));
    }

    #[test]
    fn rational_ternary_forms() {
        let q = Field::Rationals;
        let mk = |a: i64, b: i64, c: i64| {
            FieldPoly::from_terms(q, 3, vec![(vec![2, 0, 0], q.from_i64(a)), (vec![0, 2, 0], q.from_i64(b)), (vec![0, 0, 2], q.from_i64(c))])
                .unwrap()
        };
        assert_eq!(RationalFormSolver::default().zeros(&mk(1, 1, 1)), ResidueOutcome::NoPoints);
        assert_eq!(RationalFormSolver::default().zeros(&mk(1, 1, -3)), ResidueOutcome::NoPoints);
        let ResidueOutcome::Points(p) = RationalFormSolver::default().zeros(&mk(1, 1, -2)) else { panic!() };
        assert!(q.is_zero(&mk(1, 1, -2).eval(&p[0])));
        let xy = FieldPoly::from_terms(q, 3, vec![(vec![1, 1, 0], q.one()), (vec![0, 0, 2], q.from_i64(-5))]).unwrap();
        let ResidueOutcome::Points(p) = RationalFormSolver::default().zeros(&xy) else { panic!() };
        assert!(q.is_zero(&xy.eval(&p[0])));
    }
}
