//! Newton–Puiseux search for roots of positive valuation of a univariate
//! polynomial, bounded by a ramification cap and a recursion depth.

use num_integer::Integer;

use super::newton::smooth_lift;
use super::residue::ResidueSolver;
use super::{ApproxSolution, PolySystem, Residual};
use crate::error::LiftError;
use crate::newton_polygon::{edge_polynomial, newton_polygon_coeffs};
use crate::poly::SeriesPoly;
use crate::series::{exp_int, Exp, PuiseuxSeries};

pub struct PuiseuxSearch<'a> {
    pub solver: &'a dyn ResidueSolver,
    pub q_cap: i64,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSearchResult {
    /// A root `z` with `val z > 0`, exact, with `val G(z) >= target` (or `G(z) = 0`).
    pub root: Option<PuiseuxSeries>,
    /// Supremum of `val G(z)` over the explored `z`; `None` when unbounded.
    pub sup: Option<Exp>,
    /// Some branch could not be decided (solver, precision or depth limit).
    pub pruned: bool,
    /// Some branch needed a ramification index above the cap.
    pub q_capped: bool,
}

fn max_sup(a: Option<Exp>, b: Option<Exp>) -> Option<Exp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    }
}

impl PuiseuxSearch<'_> {
    /// Searches roots of `sum coeffs[i] Z^i` in the maximal ideal of `R_q`, `q <= q_cap`.
    pub fn search(&self, coeffs: &[PuiseuxSeries], base_q: i64, target: Exp) -> PuiseuxSearchResult {
        self.node(coeffs, base_q, target, 0)
    }

    fn node(&self, coeffs: &[PuiseuxSeries], q: i64, target: Exp, depth: usize) -> PuiseuxSearchResult {
        let field = coeffs[0].field();
        let mut out = PuiseuxSearchResult { root: None, sup: None, pruned: false, q_capped: false };
        if coeffs[0].is_exact_zero() {
            out.root = Some(PuiseuxSeries::zero(field));
            return out;
        }
        out.sup = coeffs[0].val().lower_bound();
        let poly = match newton_polygon_coeffs(coeffs) {
            Ok(p) => p,
            Err(_) => {
                out.pruned = true;
                return out;
            }
        };
        let g = SeriesPoly::from_univariate(field, coeffs);
        for edge in 0..poly.slopes.len() {
            let lambda = -poly.slopes[edge].0;
            if lambda <= exp_int(0) {
                continue;
            }
            let q_new = q.lcm(lambda.denom());
            if q_new > self.q_cap {
                out.q_capped = true;
                continue;
            }
            let e_poly = edge_polynomial(coeffs, &poly, edge);
            let Some(roots) = self.solver.roots(&e_poly) else {
                out.pruned = true;
                continue;
            };
            let (i0, v0) = poly.vertices[edge];
            let phi = v0 + lambda * exp_int(i0 as i64);
            let de: Vec<_> = e_poly
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| field.mul_int(c, i as i64))
                .collect();
            for c in roots.into_iter().filter(|c| !field.is_zero(c)) {
                let t_l = PuiseuxSeries::t_pow(field, lambda);
                let sub = SeriesPoly::constant(field, 1, t_l.scale(&c))
                    .add(&SeriesPoly::var(field, 1, 0).scale(&t_l));
                let h = match g.compose(&[sub]) {
                    Ok(h) => h.shift(-phi),
                    Err(_) => {
                        out.pruned = true;
                        continue;
                    }
                };
                let embed = |w: &PuiseuxSeries| &t_l * &(&PuiseuxSeries::constant(field, c.clone()) + w);
                let simple = {
                    let v = de.iter().rev().fold(field.zero(), |acc, x| field.add(&field.mul(&acc, &c), x));
                    !field.is_zero(&v)
                };
                if simple {
                    match lift_simple(&h, target - phi) {
                        Ok(w) => {
                            out.root = Some(embed(&w));
                            out.sup = None;
                            return out;
                        }
                        Err(_) => {
                            out.pruned = true;
                            continue;
                        }
                    }
                }
                if depth + 1 >= self.max_depth {
                    out.pruned = true;
                    continue;
                }
                let hc = match h.univariate_coeffs() {
                    Ok(v) => v,
                    Err(_) => {
                        out.pruned = true;
                        continue;
                    }
                };
                let child = self.node(&hc, q_new, target - phi, depth + 1);
                if let Some(w) = child.root {
                    out.root = Some(embed(&w));
                    out.sup = None;
                    return out;
                }
                out.sup = max_sup(out.sup, child.sup.map(|s| s + phi));
                out.pruned |= child.pruned;
                out.q_capped |= child.q_capped;
            }
        }
        out
    }
}

/// Newton lift from `W = 0` when the edge root is simple (so `H'(0)` is a unit).
fn lift_simple(h: &SeriesPoly, target: Exp) -> Result<PuiseuxSeries, LiftError> {
    let sys = PolySystem::single(h.clone())?;
    let start = ApproxSolution::measure(&sys, vec![PuiseuxSeries::zero(h.field())])?;
    if start.residual == Residual::Exact {
        return Ok(PuiseuxSeries::zero(h.field()));
    }
    let out = smooth_lift(&sys, &start, target, None)?;
    Ok(out.point.into_iter().next().unwrap())
}

/// First root of positive valuation of `sum coeffs[i] Z^i`, if the search finds one.
pub fn puiseux_root(
    coeffs: &[PuiseuxSeries],
    solver: &dyn ResidueSolver,
    q_cap: i64,
    target: Exp,
) -> Option<PuiseuxSeries> {
    PuiseuxSearch { solver, q_cap, max_depth: 16 }.search(coeffs, 1, target).root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::lifting::residue::RationalSolver;
    use crate::series::exp;

    fn q() -> Field {
        Field::Rationals
    }

    fn mono(n: i64, e: Exp) -> PuiseuxSeries {
        PuiseuxSeries::monomial(q(), q().from_i64(n), e)
    }

    #[test]
    fn cusp_root_needs_q2() {
        let coeffs = vec![mono(-1, exp_int(3)), PuiseuxSeries::zero(q()), mono(1, exp_int(0))];
        let solver = RationalSolver::default();
        let r = puiseux_root(&coeffs, &solver, 2, exp_int(10)).unwrap();
        assert!(r.same_element(&PuiseuxSeries::t_pow(q(), exp(3, 2))));
        let s = PuiseuxSearch { solver: &solver, q_cap: 1, max_depth: 8 }.search(&coeffs, 1, exp_int(10));
        assert!(s.root.is_none());
        assert!(s.q_capped);
        assert_eq!(s.sup, Some(exp_int(3)));
    }

    #[test]
    fn cube_root_of_t() {
        let coeffs = vec![mono(-1, exp_int(1)), PuiseuxSeries::zero(q()), PuiseuxSeries::zero(q()), mono(1, exp_int(0))];
        let r = puiseux_root(&coeffs, &RationalSolver::default(), 3, exp_int(4)).unwrap();
        assert!(r.same_element(&PuiseuxSeries::t_pow(q(), exp(1, 3))));
    }

    #[test]
    fn double_root_recursion() {
        // (Z - t - t^2)^2
        let a = &PuiseuxSeries::t_pow(q(), exp_int(1)) + &PuiseuxSeries::t_pow(q(), exp_int(2));
        let coeffs = vec![&a * &a, a.scale(&q().from_i64(-2)), PuiseuxSeries::one(q())];
        let r = puiseux_root(&coeffs, &RationalSolver::default(), 1, exp_int(6)).unwrap();
        assert!(r.same_element(&a));
    }

    #[test]
    fn sum_of_squares_has_no_rational_branch() {
        // Z^2 + t^2: edge polynomial c^2 + 1 has no rational root
        let coeffs = vec![mono(1, exp_int(2)), PuiseuxSeries::zero(q()), mono(1, exp_int(0))];
        let s = PuiseuxSearch { solver: &RationalSolver::default(), q_cap: 4, max_depth: 8 }.search(&coeffs, 1, exp_int(6));
        assert!(s.root.is_none());
        assert!(!s.pruned);
        assert_eq!(s.sup, Some(exp_int(2)));
    }
}
