//! Seeded falsification harness for a claimed triple `(N, c, s)` at level `q`:
//! sample `x in R_q^n` with `F(x) = 0 mod t^(nu/q)`, `nu >= N`, and look for a
//! root `y` with `y = x mod t^((floor(nu/c) - s)/q)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::constants::AssociatedTriple;
use super::newton::smooth_lift;
use super::residue::{default_solver, ResidueOutcome};
use super::{ApproxSolution, PolySystem, Residual};
use crate::error::LiftError;
use crate::field::{Field, Scalar};
use crate::newton_polygon::newton_polygon_coeffs;
use crate::series::{exp, exp_int, format_exp, Exp, PuiseuxSeries, Val};

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Candidate points drawn per sample before giving up on it.
    pub attempts: usize,
    /// Largest exponent numerator `k` (over `q`) used for random coefficients.
    pub max_terms: i64,
    /// `nu` is capped at `N + nu_slack` so the check stays cheap.
    pub nu_slack: u64,
    /// Extra precision (in `t`) the lift must reach beyond `nu/q`.
    pub extra: Exp,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { attempts: 64, max_terms: 6, nu_slack: 8, extra: exp_int(2) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SampleOutcome {
    Pass { distance: String },
    Counterexample { reason: String },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub index: u64,
    pub x: Vec<String>,
    /// Residual of `x` in units of `t^(1/q)`.
    pub nu: u64,
    /// Required proximity `(floor(nu/c) - s)/q`.
    #[serde(serialize_with = "ser_exp")]
    pub rho: Exp,
    #[serde(flatten)]
    pub outcome: SampleOutcome,
}

fn ser_exp<S: serde::Serializer>(e: &Exp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_exp(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Counterexample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub triple: AssociatedTriple,
    pub seed: u64,
    pub verdict: Verdict,
    pub passed: usize,
    pub counterexamples: usize,
    pub inconclusive: usize,
    pub samples: Vec<SampleRecord>,
}

/// Required proximity for a point with residual `nu / q`, in `t`-exponents.
fn proximity(triple: &AssociatedTriple, nu: u64) -> Exp {
    exp((nu / triple.c) as i64 - triple.s as i64, triple.q as i64)
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rationals => field.from_i64(rng.gen_range(-3..=3)),
        Field::Prime(p) => Scalar::Residue(rng.gen_range(0..p)),
    }
}

fn random_series(field: Field, q: i64, max_k: i64, rng: &mut ChaCha8Rng) -> PuiseuxSeries {
    let mut terms = Vec::new();
    for k in 0..=max_k {
        if rng.gen_bool(0.5) {
            terms.push((k, random_scalar(field, rng)));
        }
    }
    PuiseuxSeries::exact(field, q, terms).expect("positive ramification")
}

/// Residue points lifted as far as Newton allows; used to seed samples that
/// sit near actual roots.
fn anchor_points(sys: &PolySystem, q: i64, depth: Exp) -> Vec<Vec<PuiseuxSeries>> {
    let field = sys.field();
    let Ok(residue) = sys.polys().iter().map(|p| p.residue()).collect::<Result<Vec<_>, _>>() else {
        return Vec::new();
    };
    let ResidueOutcome::Points(points) = default_solver(field).solve(&residue, sys.n_vars()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for pt in points.into_iter().take(8) {
        let x: Vec<PuiseuxSeries> = pt.into_iter().map(|c| PuiseuxSeries::constant(field, c)).collect();
        let lifted = ApproxSolution::measure(sys, x.clone())
            .ok()
            .and_then(|a| smooth_lift(sys, &a, depth, None).ok())
            .map(|o| o.point)
            .unwrap_or(x);
        out.push(lifted.into_iter().map(|s| s.reramify(q).unwrap_or(s)).collect());
    }
    out
}

fn level_residual(sys: &PolySystem, x: &[PuiseuxSeries], q: u64, cap: u64) -> Option<u64> {
    match sys.residual(x).ok()? {
        Residual::Exact => Some(cap),
        Residual::AtLeast(v) => {
            let units = (v * exp_int(q as i64)).floor().to_integer();
            (units >= 0).then(|| (units as u64).min(cap))
        }
    }
}

fn draw(
    sys: &PolySystem,
    triple: &AssociatedTriple,
    anchors: &[Vec<PuiseuxSeries>],
    opts: &CertifyOptions,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<PuiseuxSeries>, u64)> {
    let field = sys.field();
    let q = triple.q as i64;
    let cap = triple.n + opts.nu_slack;
    for attempt in 0..opts.attempts {
        let x: Vec<PuiseuxSeries> = if attempt % 2 == 1 && !anchors.is_empty() {
            let a = &anchors[rng.gen_range(0..anchors.len())];
            let cut = exp(rng.gen_range(0..=cap as i64), q);
            a.iter()
                .map(|s| {
                    let noise = random_series(field, q, opts.max_terms, rng).shift(cut);
                    &s.truncate(cut).to_exact() + &noise
                })
                .collect()
        } else {
            (0..sys.n_vars()).map(|_| random_series(field, q, opts.max_terms, rng)).collect()
        };
        if let Some(nu) = level_residual(sys, &x, triple.q, cap) {
            if nu >= triple.n {
                return Some((x, nu));
            }
        }
    }
    None
}

/// Runs the check of the triple at one given point with residual `nu` (in
/// units of `t^(1/q)`).
pub fn check_point(
    sys: &PolySystem,
    triple: &AssociatedTriple,
    x: &[PuiseuxSeries],
    nu: u64,
    opts: &CertifyOptions,
) -> Result<SampleOutcome, LiftError> {
    let q = triple.q as i64;
    let claimed = exp(nu as i64, q);
    let approx = ApproxSolution::new(sys, x.to_vec(), claimed)?;
    let rho = proximity(triple, nu);
    if sys.residual(x)? == Residual::Exact {
        return Ok(SampleOutcome::Pass { distance: "inf".into() });
    }
    // e < nu/2 at a smooth start, so a true root agrees with the lift mod t^(target - e) > t^rho
    let target = claimed * exp_int(2) + opts.extra;
    let lift_note = match smooth_lift(sys, &approx, target, None) {
        Ok(out) => {
            let d = out
                .point
                .iter()
                .zip(x)
                .map(|(y, x0)| (y - x0).val())
                .fold(Val::Infinite, |a, b| match (a.lower_bound(), b.lower_bound()) {
                    (None, _) => b,
                    (_, None) => a,
                    (Some(u), Some(v)) => if u <= v { a } else { b },
                });
            if d.at_least(rho) && out.root_precision.map_or(true, |r| r >= rho) {
                return Ok(SampleOutcome::Pass { distance: d.to_string() });
            }
            format!("newton lift moved by t^{}", d)
        }
        Err(e) => e.to_string(),
    };
    // In one variable every root of F near x is x + z with z a root of F(x + Z);
    // the Newton polygon of F(x + Z) lists the valuations of all such z.
    if sys.n_vars() == 1 {
        let mut refuted = None;
        for f in sys.polys() {
            let coeffs = f.line_section(x, 0)?.univariate_coeffs()?;
            if coeffs.iter().all(|c| c.is_exact_zero()) {
                continue;
            }
            let Ok(poly) = newton_polygon_coeffs(&coeffs) else { continue };
            if poly.zero_roots > 0 {
                refuted = None;
                break;
            }
            let reachable: Vec<Exp> = poly
                .root_valuations()
                .into_iter()
                .map(|(v, _)| v)
                .filter(|v| *v >= rho && (*v * exp_int(q)).is_integer())
                .collect();
            if reachable.is_empty() {
                let vals: Vec<String> = poly.root_valuations().iter().map(|(v, _)| format_exp(v)).collect();
                refuted = Some(format!(
                    "every root z of F(x+Z) has val z in {{{}}}; none is >= {} and in (1/{q})Z",
                    vals.join(", "),
                    format_exp(&rho)
                ));
                break;
            }
        }
        if let Some(reason) = refuted {
            return Ok(SampleOutcome::Counterexample { reason });
        }
    }
    Ok(SampleOutcome::Inconclusive { reason: lift_note })
}

/// Deterministic in `seed`: sample `i` draws from its own ChaCha stream, and
/// records come back ordered by index whatever the worker count.
pub fn certify_triple(
    sys: &PolySystem,
    triple: &AssociatedTriple,
    samples: u64,
    seed: u64,
    opts: &CertifyOptions,
) -> CertifyReport {
    let anchors = if samples > 0 {
        anchor_points(sys, triple.q as i64, exp((triple.n + opts.nu_slack) as i64 + 1, triple.q as i64))
    } else {
        Vec::new()
    };
    let records: Vec<SampleRecord> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            match draw(sys, triple, &anchors, opts, &mut rng) {
                None => SampleRecord {
                    index: i,
                    x: Vec::new(),
                    nu: 0,
                    rho: exp_int(0),
                    outcome: SampleOutcome::Inconclusive {
                        reason: format!("no approximate solution with nu >= {} in {} draws", triple.n, opts.attempts),
                    },
                },
                Some((x, nu)) => {
                    let outcome = check_point(sys, triple, &x, nu, opts)
                        .unwrap_or_else(|e| SampleOutcome::Inconclusive { reason: e.to_string() });
                    SampleRecord { index: i, x: x.iter().map(|s| s.pretty()).collect(), nu, rho: proximity(triple, nu), outcome }
                }
            }
        })
        .collect();
    summarize(*triple, seed, records)
}

fn summarize(triple: AssociatedTriple, seed: u64, samples: Vec<SampleRecord>) -> CertifyReport {
    let count = |f: fn(&SampleOutcome) -> bool| samples.iter().filter(|r| f(&r.outcome)).count();
    let passed = count(|o| matches!(o, SampleOutcome::Pass { .. }));
    let counterexamples = count(|o| matches!(o, SampleOutcome::Counterexample { .. }));
    let inconclusive = count(|o| matches!(o, SampleOutcome::Inconclusive { .. }));
    let verdict = if counterexamples > 0 {
        Verdict::Counterexample
    } else if inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    CertifyReport { triple, seed, verdict, passed, counterexamples, inconclusive, samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SeriesPoly;

    fn q() -> Field {
        Field::Rationals
    }

    fn sys(c0: PuiseuxSeries) -> PolySystem {
        let coeffs = [-&c0, PuiseuxSeries::zero(q()), PuiseuxSeries::one(q())];
        PolySystem::single(SeriesPoly::from_univariate(q(), &coeffs)).unwrap()
    }

    fn triple() -> AssociatedTriple {
        AssociatedTriple::new(1, 1, 0, 1).unwrap()
    }

    #[test]
    fn smooth_square_root_passes() {
        let s = sys(&PuiseuxSeries::one(q()) + &PuiseuxSeries::t_pow(q(), exp_int(1)));
        let report = certify_triple(&s, &triple(), 50, 7, &CertifyOptions::default());
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
        assert_eq!(report.passed, 50);
    }

    #[test]
    fn cusp_has_counterexample() {
        let s = sys(PuiseuxSeries::t_pow(q(), exp_int(3)));
        let x = vec![PuiseuxSeries::t_pow(q(), exp_int(1))];
        let out = check_point(&s, &triple(), &x, 2, &CertifyOptions::default()).unwrap();
        assert!(matches!(out, SampleOutcome::Counterexample { .. }), "{out:?}");
        let report = certify_triple(&s, &triple(), 20, 1, &CertifyOptions::default());
        assert_eq!(report.verdict, Verdict::Counterexample);
    }

    #[test]
    fn zero_samples_is_an_empty_pass() {
        let s = sys(PuiseuxSeries::t_pow(q(), exp_int(3)));
        let report = certify_triple(&s, &triple(), 0, 0, &CertifyOptions::default());
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.samples.is_empty());
    }

    #[test]
    fn residual_claim_is_checked() {
        let s = sys(PuiseuxSeries::t_pow(q(), exp_int(3)));
        let x = vec![PuiseuxSeries::t_pow(q(), exp_int(1))];
        assert!(matches!(check_point(&s, &triple(), &x, 3, &CertifyOptions::default()), Err(LiftError::ResidualNotMet(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let s = sys(&PuiseuxSeries::one(q()) + &PuiseuxSeries::t_pow(q(), exp_int(1)));
        let a = certify_triple(&s, &triple(), 10, 3, &CertifyOptions::default());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| certify_triple(&s, &triple(), 10, 3, &CertifyOptions::default()));
        assert_eq!(a, b);
    }
}
