//! Newton polygons of univariate polynomials with series coefficients.

use crate::error::SeriesError;
use crate::field::Scalar;
use crate::poly::SeriesPoly;
use crate::series::{exp_int, format_exp, Exp, PuiseuxSeries, Val};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices `(i, val c_i)` from left to right.
    pub vertices: Vec<(u32, Exp)>,
    /// `(slope, horizontal length)` per edge; slopes strictly increasing.
    pub slopes: Vec<(Exp, u32)>,
    /// Number of roots equal to zero (exactly vanishing low coefficients).
    pub zero_roots: u32,
}

impl NewtonPolygon {
    /// Root valuations with multiplicities (negated slopes), largest first.
    pub fn root_valuations(&self) -> Vec<(Exp, u32)> {
        self.slopes.iter().map(|(s, m)| (-s, *m)).collect()
    }

    pub fn describe(&self) -> String {
        self.root_valuations()
            .iter()
            .map(|(v, m)| format!("{} (x{m})", format_exp(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn cross(o: (i64, Exp), a: (i64, Exp), b: (i64, Exp)) -> Exp {
    let (ax, ay) = (exp_int(a.0 - o.0), a.1 - o.1);
    let (bx, by) = (exp_int(b.0 - o.0), b.1 - o.1);
    ax * by - ay * bx
}

/// Lower convex hull of `(i, val c_i)` over the coefficients `c_0..c_n`.
///
/// Fails with `PrecisionTooLow` when a zero-so-far coefficient could move the
/// hull, and with `ZeroSeries` when no coefficient has a finite valuation.
pub fn newton_polygon_coeffs(coeffs: &[PuiseuxSeries]) -> Result<NewtonPolygon, SeriesError> {
    let mut points: Vec<(i64, Exp)> = Vec::new();
    let mut masked: Vec<(i64, Exp)> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        match c.val() {
            Val::Finite(v) => points.push((i as i64, v)),
            Val::ZeroSoFar(mu) => masked.push((i as i64, mu)),
            Val::Infinite => {}
        }
    }
    if points.is_empty() {
        return Err(if masked.is_empty() {
            SeriesError::ZeroSeries
        } else {
            SeriesError::PrecisionTooLow("every coefficient is zero to its precision".into())
        });
    }
    let lo = points[0].0;
    let hi = points[points.len() - 1].0;
    let mut hull: Vec<(i64, Exp)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= exp_int(0) {
            hull.pop();
        }
        hull.push(p);
    }
    for &(i, mu) in &masked {
        if i < lo || i > hi {
            return Err(SeriesError::PrecisionTooLow(format!(
                "coefficient of degree {i} is zero only mod t^{}",
                format_exp(&mu)
            )));
        }
        let k = hull.iter().position(|&(j, _)| j >= i).unwrap();
        let (j1, v1) = hull[k.saturating_sub(1)];
        let (j2, v2) = hull[k];
        let h = if j2 == j1 { v2 } else { v1 + (v2 - v1) * exp_int(i - j1) / exp_int(j2 - j1) };
        if mu < h {
            return Err(SeriesError::PrecisionTooLow(format!(
                "coefficient of degree {i} known mod t^{} lies below the hull",
                format_exp(&mu)
            )));
        }
    }
    let slopes = hull
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / exp_int(w[1].0 - w[0].0), (w[1].0 - w[0].0) as u32))
        .collect();
    Ok(NewtonPolygon {
        vertices: hull.iter().map(|&(i, v)| (i as u32, v)).collect(),
        slopes,
        zero_roots: lo as u32,
    })
}

pub fn newton_polygon(f: &SeriesPoly) -> Result<NewtonPolygon, SeriesError> {
    newton_polygon_coeffs(&f.univariate_coeffs()?)
}

/// Coefficients of the edge polynomial for the edge of the given slope:
/// leading coefficients of the points lying on the edge, indexed from the
/// edge's left end. Roots of it are the leading coefficients of the roots of
/// valuation `-slope`.
pub fn edge_polynomial(coeffs: &[PuiseuxSeries], poly: &NewtonPolygon, edge: usize) -> Vec<Scalar> {
    let field = coeffs[0].field();
    let (i0, v0) = poly.vertices[edge];
    let (slope, len) = poly.slopes[edge];
    (0..=len)
        .map(|k| {
            let i = (i0 + k) as usize;
            let target = v0 + slope * exp_int(k as i64);
            match coeffs[i].val() {
                Val::Finite(v) if v == target => coeffs[i].coeff(v),
                _ => field.zero(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::series::exp;

    fn q() -> Field {
        Field::Rationals
    }

    fn c(n: i64, e: Exp) -> PuiseuxSeries {
        PuiseuxSeries::monomial(q(), q().from_i64(n), e)
    }

    #[test]
    fn cusp_has_one_slope_of_multiplicity_two() {
        let coeffs = vec![c(-1, exp_int(3)), PuiseuxSeries::zero(q()), c(1, exp_int(0))];
        let np = newton_polygon_coeffs(&coeffs).unwrap();
        assert_eq!(np.root_valuations(), vec![(exp(3, 2), 2)]);
    }

    #[test]
    fn unit_roots() {
        let coeffs = vec![c(-1, exp_int(0)), PuiseuxSeries::zero(q()), c(1, exp_int(0))];
        assert_eq!(newton_polygon_coeffs(&coeffs).unwrap().root_valuations(), vec![(exp_int(0), 2)]);
    }

    #[test]
    fn negative_root_valuation() {
        let coeffs = vec![c(-1, exp_int(0)), c(1, exp_int(1))];
        assert_eq!(newton_polygon_coeffs(&coeffs).unwrap().root_valuations(), vec![(exp_int(-1), 1)]);
    }

    #[test]
    fn masked_vertex_is_rejected() {
        let coeffs = vec![PuiseuxSeries::zero_mod(q(), exp_int(2)), c(1, exp_int(0))];
        assert!(matches!(newton_polygon_coeffs(&coeffs), Err(SeriesError::PrecisionTooLow(_))));
        // a masked coefficient well above the hull is harmless
        let coeffs = vec![c(1, exp_int(0)), PuiseuxSeries::zero_mod(q(), exp_int(5)), c(1, exp_int(0))];
        assert!(newton_polygon_coeffs(&coeffs).is_ok());
    }

    #[test]
    fn zero_roots_counted() {
        let coeffs = vec![PuiseuxSeries::zero(q()), c(1, exp_int(1)), c(1, exp_int(0))];
        let np = newton_polygon_coeffs(&coeffs).unwrap();
        assert_eq!(np.zero_roots, 1);
        assert_eq!(np.root_valuations(), vec![(exp_int(1), 1)]);
    }

    #[test]
    fn edge_polynomial_of_cusp() {
        let coeffs = vec![c(-1, exp_int(3)), PuiseuxSeries::zero(q()), c(1, exp_int(0))];
        let np = newton_polygon_coeffs(&coeffs).unwrap();
        let e = edge_polynomial(&coeffs, &np, 0);
        assert_eq!(e, vec![q().from_i64(-1), q().zero(), q().one()]);
    }
}
