//! Hensel–Greenberg lifting over the Puiseux tower.

mod certify;
mod constants;
mod infty;
mod newton;
mod puiseux;
mod residue;

use std::fmt;

use serde::Serialize;

pub use certify::{certify_triple, check_point, CertifyOptions, CertifyReport, SampleOutcome, SampleRecord, Verdict};
pub use constants::{
    combine_admissible_components, combine_admissible_smooth, greenberg_constants, AdmissibleQuadruple,
    AssociatedTriple, GreenbergConstants,
};
pub use infty::{doubling_schedule, solve_in_r_infty, InftyOptions, InftyOutcome};
pub use newton::{jacobian_residual, smooth_lift, LiftOutcome, Minor};
pub use puiseux::{puiseux_root, PuiseuxSearch, PuiseuxSearchResult};
pub use residue::{
    default_solver, FiniteFieldSolver, RationalSolver, ResidueOutcome, ResidueSolver,
};

use crate::error::{LiftError, SeriesError};
use crate::field::Field;
use crate::poly::SeriesPoly;
use crate::series::{format_exp, Exp, PuiseuxSeries};

/// `r` polynomials in `n` variables over a common series ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    field: Field,
    n_vars: usize,
    polys: Vec<SeriesPoly>,
    jac: Vec<Vec<SeriesPoly>>,
}

impl PolySystem {
    pub fn new(polys: Vec<SeriesPoly>) -> Result<Self, SeriesError> {
        let first = polys.first().ok_or(SeriesError::DimensionMismatch { expected: 1, found: 0 })?;
        let (field, n_vars) = (first.field(), first.n_vars());
        for p in &polys {
            if p.n_vars() != n_vars {
                return Err(SeriesError::DimensionMismatch { expected: n_vars, found: p.n_vars() });
            }
            if p.field() != field {
                return Err(SeriesError::FieldMismatch { left: field.to_string(), right: p.field().to_string() });
            }
        }
        let jac = polys.iter().map(|p| (0..n_vars).map(|j| p.derivative(j)).collect()).collect();
        Ok(PolySystem { field, n_vars, polys, jac })
    }

    pub fn single(p: SeriesPoly) -> Result<Self, SeriesError> {
        Self::new(vec![p])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_polys(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[SeriesPoly] {
        &self.polys
    }

    pub(crate) fn partial(&self, i: usize, j: usize) -> &SeriesPoly {
        &self.jac[i][j]
    }

    pub fn eval(&self, x: &[PuiseuxSeries]) -> Result<Vec<PuiseuxSeries>, SeriesError> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    pub fn residual(&self, x: &[PuiseuxSeries]) -> Result<Residual, SeriesError> {
        Ok(Residual::of_values(&self.eval(x)?))
    }
}

/// Certified lower bound on `min_i val F_i(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Residual {
    AtLeast(#[serde(serialize_with = "ser_exp")] Exp),
    Exact,
}

fn ser_exp<S: serde::Serializer>(e: &Exp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_exp(e))
}

impl Residual {
    pub fn of_values(values: &[PuiseuxSeries]) -> Self {
        values
            .iter()
            .filter_map(|v| v.val().lower_bound())
            .min()
            .map_or(Residual::Exact, Residual::AtLeast)
    }

    pub fn at_least(&self, nu: Exp) -> bool {
        match self {
            Residual::Exact => true,
            Residual::AtLeast(v) => *v >= nu,
        }
    }

    pub fn bound(&self) -> Option<Exp> {
        match self {
            Residual::Exact => None,
            Residual::AtLeast(v) => Some(*v),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Exact => write!(f, "exact"),
            Residual::AtLeast(v) => write!(f, ">= {}", format_exp(v)),
        }
    }
}

/// A point with a certified residual: `val F_i(point) >= nu` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxSolution {
    pub point: Vec<PuiseuxSeries>,
    pub residual: Residual,
}

impl ApproxSolution {
    /// Checks the claim `val F(point) >= nu` before accepting it.
    pub fn new(sys: &PolySystem, point: Vec<PuiseuxSeries>, nu: Exp) -> Result<Self, LiftError> {
        let r = sys.residual(&point)?;
        if !r.at_least(nu) {
            return Err(LiftError::ResidualNotMet(nu));
        }
        Ok(ApproxSolution { point, residual: Residual::AtLeast(nu) })
    }

    /// Uses the best residual bound that can be certified for `point`.
    pub fn measure(sys: &PolySystem, point: Vec<PuiseuxSeries>) -> Result<Self, LiftError> {
        let residual = sys.residual(&point)?;
        Ok(ApproxSolution { point, residual })
    }
}
