//! Solving `F(x) = 0` in `R_inf = union of R_q`: residue points, Newton lifts at
//! smooth ones, ramified Newton–Puiseux retries at singular ones.

use serde::Serialize;

use super::newton::smooth_lift;
use super::puiseux::PuiseuxSearch;
use super::residue::{ResidueOutcome, ResidueSolver};
use super::{ApproxSolution, PolySystem, Residual};
use crate::error::LiftError;
use crate::series::{exp_int, format_exp, Exp, PuiseuxSeries};

#[derive(Clone, Debug)]
pub struct InftyOptions {
    /// Increasing positive precisions; the last one is the working precision.
    pub schedule: Vec<Exp>,
    pub q_cap: i64,
    pub max_depth: usize,
}

/// `1, 2, 4, ...` up to and including `nu_max`.
pub fn doubling_schedule(nu_max: Exp) -> Vec<Exp> {
    let mut v = Vec::new();
    let mut nu = exp_int(1);
    while nu < nu_max {
        v.push(nu);
        nu *= exp_int(2);
    }
    v.push(nu_max);
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum InftyOutcome {
    Solved {
        #[serde(skip)]
        point: Vec<PuiseuxSeries>,
        q: i64,
        residual: Residual,
        method: String,
    },
    NoSolutionModNu {
        #[serde(serialize_with = "ser_exp")]
        nu: Exp,
        /// Largest residual valuation any explored approximate solution can reach.
        #[serde(serialize_with = "ser_exp")]
        sup: Exp,
        /// Some branch was cut by the ramification cap.
        q_cap_limited: bool,
    },
    Inconclusive {
        reason: String,
    },
}

fn ser_exp<S: serde::Serializer>(e: &Exp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_exp(e))
}

fn point_ram(point: &[PuiseuxSeries]) -> i64 {
    use num_integer::Integer;
    point.iter().fold(1, |acc, s| acc.lcm(&s.normalize().minimal_ram()))
}

/// Finds a point of `F = 0` over some `R_q`, `q <= q_cap`, vanishing to the
/// working precision; or reports the least scheduled `nu` at which no
/// approximate solution exists within the search bounds.
pub fn solve_in_r_infty(
    sys: &PolySystem,
    solver: &dyn ResidueSolver,
    opts: &InftyOptions,
) -> Result<InftyOutcome, LiftError> {
    let target = *opts.schedule.last().ok_or_else(|| LiftError::InvalidMinor("empty schedule".into()))?;
    if opts.schedule.windows(2).any(|w| w[0] >= w[1]) || opts.schedule[0] <= exp_int(0) {
        return Err(LiftError::Unsupported("schedule must be positive and increasing".into()));
    }
    let field = sys.field();
    let residue: Vec<_> = sys.polys().iter().map(|p| p.residue()).collect::<Result<_, _>>()?;
    let points = match solver.solve(&residue, sys.n_vars()) {
        ResidueOutcome::NoPoints => {
            return Ok(InftyOutcome::NoSolutionModNu { nu: opts.schedule[0], sup: exp_int(0), q_cap_limited: false })
        }
        ResidueOutcome::Unknown(reason) => return Ok(InftyOutcome::Inconclusive { reason }),
        ResidueOutcome::Points(p) => p,
    };

    let mut singular = Vec::new();
    let mut undecided: Option<String> = None;
    for pt in &points {
        let x: Vec<PuiseuxSeries> = pt.iter().map(|c| PuiseuxSeries::constant(field, c.clone())).collect();
        let start = ApproxSolution::measure(sys, x.clone())?;
        if start.residual == Residual::Exact {
            return Ok(InftyOutcome::Solved { q: 1, point: x, residual: Residual::Exact, method: "exact residue point".into() });
        }
        match smooth_lift(sys, &start, target, None) {
            Ok(out) => {
                return Ok(InftyOutcome::Solved {
                    q: point_ram(&out.point),
                    point: out.point,
                    residual: out.residual,
                    method: "newton".into(),
                })
            }
            Err(LiftError::NotSmoothEnough { .. }) => singular.push(x),
            Err(e) => undecided = Some(e.to_string()),
        }
    }

    let search = PuiseuxSearch { solver, q_cap: opts.q_cap, max_depth: opts.max_depth };
    let mut sup = exp_int(0);
    let mut capped = false;
    for x in &singular {
        let mut sections_complete = sys.n_vars() == 1;
        for var in 0..sys.n_vars() {
            let Some(g) = sys.polys().iter().find(|p| p.line_section(x, var).is_ok_and(|s| !s.is_zero())) else {
                continue;
            };
            let coeffs = g.line_section(x, var)?.univariate_coeffs()?;
            let res = search.search(&coeffs, 1, target);
            if let Some(z) = res.root {
                let mut y = x.clone();
                y[var] = &y[var] + &z;
                let residual = sys.residual(&y)?;
                if residual.at_least(target) {
                    return Ok(InftyOutcome::Solved { q: point_ram(&y), point: y, residual, method: "newton-puiseux".into() });
                }
                sections_complete = false;
                continue;
            }
            if sys.n_vars() == 1 && sys.n_polys() == 1 {
                if res.pruned {
                    undecided = Some("newton-puiseux search hit a solver, precision or depth limit".into());
                }
                capped |= res.q_capped;
                match res.sup {
                    Some(s) => sup = sup.max(s),
                    None => undecided = Some("unbounded branch without a verified root".into()),
                }
            } else {
                sections_complete = false;
            }
        }
        if !sections_complete {
            undecided.get_or_insert_with(|| "singular residue point on a multivariate system".into());
        }
    }
    if let Some(reason) = undecided {
        return Ok(InftyOutcome::Inconclusive { reason });
    }
    match opts.schedule.iter().find(|&&nu| nu > sup) {
        Some(&nu) => Ok(InftyOutcome::NoSolutionModNu { nu, sup, q_cap_limited: capped }),
        None => Ok(InftyOutcome::Inconclusive {
            reason: format!("approximate solutions reach t^{} beyond the schedule", format_exp(&sup)),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::lifting::residue::default_solver;
    use crate::poly::SeriesPoly;
    use crate::series::exp;

    fn q() -> Field {
        Field::Rationals
    }

    fn univariate(coeffs: Vec<PuiseuxSeries>) -> PolySystem {
        PolySystem::single(SeriesPoly::from_univariate(q(), &coeffs)).unwrap()
    }

    fn opts(q_cap: i64) -> InftyOptions {
        InftyOptions { schedule: doubling_schedule(exp_int(8)), q_cap, max_depth: 12 }
    }

    #[test]
    fn cube_root_of_t_at_q3() {
        let sys = univariate(vec![
            -&PuiseuxSeries::t_pow(q(), exp_int(1)),
            PuiseuxSeries::zero(q()),
            PuiseuxSeries::zero(q()),
            PuiseuxSeries::one(q()),
        ]);
        match solve_in_r_infty(&sys, default_solver(q()).as_ref(), &opts(6)).unwrap() {
            InftyOutcome::Solved { point, q: ram, .. } => {
                assert_eq!(ram, 3);
                assert!(point[0].same_element(&PuiseuxSeries::t_pow(q(), exp(1, 3))));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn x_squared_plus_one_fails_at_nu_one() {
        let sys = univariate(vec![PuiseuxSeries::one(q()), PuiseuxSeries::zero(q()), PuiseuxSeries::one(q())]);
        let out = solve_in_r_infty(&sys, default_solver(q()).as_ref(), &opts(4)).unwrap();
        assert_eq!(out, InftyOutcome::NoSolutionModNu { nu: exp_int(1), sup: exp_int(0), q_cap_limited: false });
    }

    #[test]
    fn smooth_square_root() {
        let c = &PuiseuxSeries::one(q()) + &PuiseuxSeries::t_pow(q(), exp_int(1));
        let sys = univariate(vec![-&c, PuiseuxSeries::zero(q()), PuiseuxSeries::one(q())]);
        match solve_in_r_infty(&sys, default_solver(q()).as_ref(), &opts(1)).unwrap() {
            InftyOutcome::Solved { point, q: ram, .. } => {
                assert_eq!(ram, 1);
                assert_eq!(point[0].coeff(exp_int(2)), q().parse_scalar("-1/8").unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cusp_blocked_by_cap_then_solved() {
        let sys = univariate(vec![-&PuiseuxSeries::t_pow(q(), exp_int(3)), PuiseuxSeries::zero(q()), PuiseuxSeries::one(q())]);
        let out = solve_in_r_infty(&sys, default_solver(q()).as_ref(), &opts(1)).unwrap();
        assert_eq!(out, InftyOutcome::NoSolutionModNu { nu: exp_int(4), sup: exp_int(3), q_cap_limited: true });
        match solve_in_r_infty(&sys, default_solver(q()).as_ref(), &opts(2)).unwrap() {
            InftyOutcome::Solved { point, q: ram, residual, .. } => {
                assert_eq!(ram, 2);
                assert_eq!(residual, Residual::Exact);
                assert!(point[0].same_element(&PuiseuxSeries::t_pow(q(), exp(3, 2))));
            }
            other => panic!("{other:?}"),
        }
    }
}
