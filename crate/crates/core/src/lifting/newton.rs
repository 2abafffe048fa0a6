//! Newton iteration at smooth points, under the classical condition `nu > 2e`.

use serde::Serialize;

use super::{ApproxSolution, PolySystem, Residual};
use crate::error::{LiftError, SeriesError};
use crate::field::Field;
use crate::series::{exp_int, format_exp, Exp, PuiseuxSeries, Val};

const MAX_STEPS: usize = 64;

/// Rows (equations) and columns (variables) of a square Jacobian minor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Minor {
    pub fn full(n: usize) -> Self {
        Minor { rows: (0..n).collect(), cols: (0..n).collect() }
    }

    fn validate(&self, sys: &PolySystem) -> Result<(), LiftError> {
        let ok_len = self.rows.len() == self.cols.len() && !self.rows.is_empty();
        let in_range = self.rows.iter().all(|&r| r < sys.n_polys()) && self.cols.iter().all(|&c| c < sys.n_vars());
        let distinct = |v: &[usize]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len() == v.len()
        };
        if ok_len && in_range && distinct(&self.rows) && distinct(&self.cols) {
            Ok(())
        } else {
            Err(LiftError::InvalidMinor(format!("rows {:?}, cols {:?}", self.rows, self.cols)))
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn det(field: Field, m: &[Vec<PuiseuxSeries>]) -> PuiseuxSeries {
    match m.len() {
        0 => PuiseuxSeries::one(field),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = PuiseuxSeries::zero(field);
            for j in 0..n {
                if m[0][j].is_exact_zero() {
                    continue;
                }
                let sub: Vec<Vec<PuiseuxSeries>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &det(field, &sub);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn adjugate(field: Field, m: &[Vec<PuiseuxSeries>]) -> Vec<Vec<PuiseuxSeries>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![PuiseuxSeries::one(field)]];
    }
    let mut adj = vec![vec![PuiseuxSeries::zero(field); n]; n];
    for i in 0..n {
        for j in 0..n {
            let sub: Vec<Vec<PuiseuxSeries>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det(field, &sub);
            adj[j][i] = if (i + j) % 2 == 0 { d } else { -&d };
        }
    }
    adj
}

fn jacobian(sys: &PolySystem, x: &[PuiseuxSeries], minor: &Minor) -> Result<Vec<Vec<PuiseuxSeries>>, SeriesError> {
    minor
        .rows
        .iter()
        .map(|&r| minor.cols.iter().map(|&c| sys.partial(r, c).eval(x)).collect())
        .collect()
}

/// Valuation `e` of the chosen Jacobian minor at `x`; `Val::Infinite` when
/// the minor vanishes exactly.
pub fn jacobian_residual(sys: &PolySystem, x: &[PuiseuxSeries], minor: &Minor) -> Result<Val, LiftError> {
    minor.validate(sys)?;
    let j = jacobian(sys, x, minor)?;
    match det(sys.field(), &j).val() {
        Val::ZeroSoFar(mu) => Err(SeriesError::PrecisionTooLow(format!(
            "jacobian minor vanishes mod t^{}",
            format_exp(&mu)
        ))
        .into()),
        v => Ok(v),
    }
}

/// Minor with the least finite valuation (first in lexicographic order on ties).
fn select_minor(sys: &PolySystem, x: &[PuiseuxSeries]) -> Option<(Minor, Exp)> {
    let k = sys.n_polys().min(sys.n_vars());
    let mut best: Option<(Minor, Exp)> = None;
    for rows in combinations(sys.n_polys(), k) {
        for cols in combinations(sys.n_vars(), k) {
            let m = Minor { rows: rows.clone(), cols };
            if let Ok(Val::Finite(e)) = jacobian_residual(sys, x, &m) {
                if best.as_ref().map_or(true, |(_, b)| e < *b) {
                    best = Some((m, e));
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOutcome {
    /// Exact approximate root (stored terms only).
    pub point: Vec<PuiseuxSeries>,
    /// Certified residual of `point` over all equations.
    pub residual: Residual,
    pub minor: Minor,
    /// Valuation of the Jacobian minor at the start point.
    pub e: Exp,
    /// The output agrees with the input modulo `t^(nu - e)`.
    pub agrees_to: Exp,
    /// A true root agrees with `point` modulo `t^(target - e)`; `None` when `point` is a root.
    pub root_precision: Option<Exp>,
    pub steps: usize,
}

/// Newton lift of an approximate solution to `val F(y) >= target`.
///
/// Variables outside the minor's columns stay fixed. Each correction is
/// truncated below `target` and kept exact, so the returned point is a
/// polynomial in `t^(1/q)` whose residual is checked exactly.
pub fn smooth_lift(
    sys: &PolySystem,
    x: &ApproxSolution,
    target: Exp,
    minor: Option<&Minor>,
) -> Result<LiftOutcome, LiftError> {
    let field = sys.field();
    let start: Vec<PuiseuxSeries> = x.point.iter().map(|s| s.to_exact()).collect();
    if start.len() != sys.n_vars() {
        return Err(SeriesError::DimensionMismatch { expected: sys.n_vars(), found: start.len() }.into());
    }
    let (minor, e) = match minor {
        Some(m) => match jacobian_residual(sys, &start, m)? {
            Val::Finite(e) => (m.clone(), e),
            v => {
                return Err(LiftError::NotSmoothEnough { nu: x.residual.to_string(), e: v.to_string() });
            }
        },
        None => match select_minor(sys, &start) {
            Some(found) => found,
            None => {
                if x.residual == Residual::Exact {
                    let k = sys.n_polys().min(sys.n_vars());
                    return Ok(LiftOutcome {
                        point: start,
                        residual: Residual::Exact,
                        minor: Minor { rows: (0..k).collect(), cols: (0..k).collect() },
                        e: exp_int(0),
                        agrees_to: exp_int(0),
                        root_precision: None,
                        steps: 0,
                    });
                }
                return Err(LiftError::NotSmoothEnough { nu: x.residual.to_string(), e: "inf".into() });
            }
        },
    };
    let nu = match x.residual {
        Residual::Exact => {
            return Ok(LiftOutcome {
                point: start,
                residual: Residual::Exact,
                minor,
                e,
                agrees_to: target.max(e),
                root_precision: None,
                steps: 0,
            })
        }
        Residual::AtLeast(nu) => nu,
    };
    if nu <= e * 2 {
        return Err(LiftError::NotSmoothEnough { nu: format_exp(&nu), e: format_exp(&e) });
    }

    let mut y = start.clone();
    let mut steps = 0;
    let mut last = None;
    let mut stalls = 0;
    loop {
        let values: Vec<PuiseuxSeries> = minor.rows.iter().map(|&r| sys.polys()[r].eval(&y)).collect::<Result<_, _>>()?;
        let res = Residual::of_values(&values);
        if res.at_least(target) {
            break;
        }
        let cur = res.bound().unwrap();
        if values.iter().any(|v| matches!(v.val(), Val::ZeroSoFar(mu) if mu == cur)) {
            return Err(LiftError::PrecisionExhausted(format!(
                "residual known only mod t^{}, target t^{}",
                format_exp(&cur),
                format_exp(&target)
            )));
        }
        if let Some(prev) = last {
            if cur <= prev {
                stalls += 1;
                if stalls > 2 {
                    return Err(LiftError::PrecisionExhausted(format!("no progress past t^{}", format_exp(&cur))));
                }
            }
        }
        last = Some(cur);
        if steps >= MAX_STEPS {
            return Err(LiftError::PrecisionExhausted(format!("{MAX_STEPS} Newton steps without reaching the target")));
        }
        let jm = jacobian(sys, &y, &minor)?;
        let d = det(field, &jm);
        let d_inv = d.invert_unit(target + e).map_err(|err| match err {
            SeriesError::ZeroSeries => LiftError::PrecisionExhausted("jacobian minor degenerated".into()),
            SeriesError::InsufficientPrecision { .. } => {
                LiftError::PrecisionExhausted("jacobian minor known to too few terms".into())
            }
            other => other.into(),
        })?;
        let adj = adjugate(field, &jm);
        for (ci, &col) in minor.cols.iter().enumerate() {
            let mut delta = PuiseuxSeries::zero(field);
            for (ri, v) in values.iter().enumerate() {
                delta = &delta + &(&adj[ci][ri] * v);
            }
            let delta = &delta * &d_inv;
            let cut = delta.precision().map_or(target, |p| p.min(target));
            y[col] = &y[col] - &delta.head(cut);
        }
        steps += 1;
    }
    let residual = sys.residual(&y)?;
    if !residual.at_least(target) {
        return Err(LiftError::UnselectedRows(format!("residual {residual} below target t^{}", format_exp(&target))));
    }
    let root_precision = match residual {
        Residual::Exact => None,
        Residual::AtLeast(_) => Some(target - e),
    };
    Ok(LiftOutcome { point: y, residual, minor, e, agrees_to: nu - e, root_precision, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SeriesPoly;
    use crate::series::exp;

    fn q() -> Field {
        Field::Rationals
    }

    fn sqrt_system(c: PuiseuxSeries) -> PolySystem {
        let p = SeriesPoly::from_terms(q(), 1, vec![(vec![2], PuiseuxSeries::one(q())), (vec![0], -&c)]).unwrap();
        PolySystem::single(p).unwrap()
    }

    fn one_plus_t() -> PuiseuxSeries {
        &PuiseuxSeries::one(q()) + &PuiseuxSeries::t_pow(q(), exp_int(1))
    }

    #[test]
    fn jacobian_examples() {
        let sys = sqrt_system(one_plus_t());
        let m = Minor::full(1);
        assert_eq!(jacobian_residual(&sys, &[PuiseuxSeries::one(q())], &m).unwrap(), Val::Finite(exp_int(0)));
        let cusp = sqrt_system(PuiseuxSeries::t_pow(q(), exp_int(1)));
        assert_eq!(jacobian_residual(&cusp, &[PuiseuxSeries::zero(q())], &m).unwrap(), Val::Infinite);
        let r = PuiseuxSeries::t_pow(q(), exp(1, 2));
        assert_eq!(jacobian_residual(&cusp, &[r], &m).unwrap(), Val::Finite(exp(1, 2)));
    }

    #[test]
    fn square_root_of_one_plus_t() {
        let sys = sqrt_system(one_plus_t());
        let x = ApproxSolution::new(&sys, vec![PuiseuxSeries::one(q())], exp_int(1)).unwrap();
        let out = smooth_lift(&sys, &x, exp_int(5), None).unwrap();
        let f = q();
        let want = PuiseuxSeries::exact(
            f,
            1,
            vec![
                (0, f.one()),
                (1, f.parse_scalar("1/2").unwrap()),
                (2, f.parse_scalar("-1/8").unwrap()),
                (3, f.parse_scalar("1/16").unwrap()),
                (4, f.parse_scalar("-5/128").unwrap()),
            ],
        )
        .unwrap();
        assert!(out.point[0].same_element(&want));
        assert!(out.residual.at_least(exp_int(5)));
    }

    #[test]
    fn singular_start_is_refused() {
        let sys = sqrt_system(PuiseuxSeries::t_pow(q(), exp_int(1)));
        let x = ApproxSolution::new(&sys, vec![PuiseuxSeries::zero(q())], exp_int(1)).unwrap();
        assert!(matches!(smooth_lift(&sys, &x, exp_int(4), None), Err(LiftError::NotSmoothEnough { .. })));
    }

    #[test]
    fn cube_root_after_substitution() {
        // X = t^(1/3) Y turns X^3 - t into t (Y^3 - 1)
        let f = q();
        let p = SeriesPoly::from_terms(
            f,
            1,
            vec![(vec![3], PuiseuxSeries::one(f)), (vec![0], PuiseuxSeries::from_i64(f, -1))],
        )
        .unwrap();
        let sys = PolySystem::single(p).unwrap();
        let y = ApproxSolution::measure(&sys, vec![PuiseuxSeries::one(f)]).unwrap();
        let out = smooth_lift(&sys, &y, exp_int(6), None).unwrap();
        assert_eq!(out.residual, Residual::Exact);
        let x = &out.point[0] * &PuiseuxSeries::t_pow(f, exp(1, 3));
        let orig = SeriesPoly::from_terms(
            f,
            1,
            vec![(vec![3], PuiseuxSeries::one(f)), (vec![0], -&PuiseuxSeries::t_pow(f, exp_int(1)))],
        )
        .unwrap();
        assert!(orig.eval(&[x]).unwrap().is_exact_zero());
    }

    #[test]
    fn two_by_two_system() {
        // x + y - 2 - t = 0, x - y - t^2 = 0 from (1, 1)
        let f = q();
        let x = SeriesPoly::var(f, 2, 0);
        let y = SeriesPoly::var(f, 2, 1);
        let c = |s: PuiseuxSeries| SeriesPoly::constant(f, 2, s);
        let p1 = x.add(&y).sub(&c(&PuiseuxSeries::from_i64(f, 2) + &PuiseuxSeries::t_pow(f, exp_int(1))));
        let p2 = x.sub(&y).sub(&c(PuiseuxSeries::t_pow(f, exp_int(2))));
        let sys = PolySystem::new(vec![p1, p2]).unwrap();
        let start = ApproxSolution::new(&sys, vec![PuiseuxSeries::one(f), PuiseuxSeries::one(f)], exp_int(1)).unwrap();
        let out = smooth_lift(&sys, &start, exp_int(8), None).unwrap();
        assert_eq!(out.residual, Residual::Exact);
        assert!(out.steps >= 1);
    }
}
