//! `kk`: command-line front end for kk-core.
//!
//! Exit codes: 0 definite positive, 1 definite negative, 2 inconclusive or
//! budget exhausted, 3 usage or parse error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use kk_core::lifting::{
    certify_triple, default_solver, doubling_schedule, smooth_lift, solve_in_r_infty, ApproxSolution,
    AssociatedTriple, CertifyOptions, InftyOptions, InftyOutcome, PolySystem, Verdict,
};
use kk_core::localglobal::{
    global_membership_decide, hilbert_symbol, local_norm_membership, parse_rat, relevant_places, verify_witness,
    witness_search, Conic, Place, Rat,
};
use kk_core::milnor::{
    expand_and_verify, kummer_norm_class, lemma51_certify, thm54_witness, wedge, Coefficient, KummerExtension,
    Lemma51Verdict, MonomialElem, UnitClassModD,
};
use kk_core::pointfinder::{point_over_laurent, CwSolver, Hypersurface, PointOptions, PointReport, ProjectiveSolver, RationalFormSolver};
use kk_core::serial::{parse_poly_list, parse_series_list, series_to_json};
use kk_core::series::{exp_int, format_exp, parse_exp, Exp};
use kk_core::{Field, LiftError, LocalGlobalError, MilnorError, PointError};

#[derive(Parser)]
#[command(name = "kk", version, about = "Exact lifting, point search, Milnor K-theory models and conic norm groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Candidate budget for exhaustive point searches.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Target precision, a rational such as `20` or `7/2`.
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Largest precision in the doubling schedule.
    #[arg(long, global = true)]
    nu_max: Option<String>,
    /// Largest ramification index explored.
    #[arg(long, global = true, default_value_t = 6)]
    q_cap: i64,
    /// Search bound for witness fields and heights.
    #[arg(long, global = true, default_value_t = 50)]
    bound: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Newton-lift an approximate solution of a polynomial system.
    Lift {
        /// JSON polynomial or array of polynomials.
        #[arg(long)]
        system: PathBuf,
        /// JSON array of series, one per variable.
        #[arg(long)]
        point: PathBuf,
        /// Claimed residual `val F(point) >= nu`; measured when omitted.
        #[arg(long)]
        nu: Option<String>,
    },
    /// Find a point on a projective hypersurface over the Laurent field, or
    /// solve an affine system over the ramified tower.
    SolveHypersurface {
        #[arg(long)]
        form: PathBuf,
    },
    /// Seeded falsification of a constant triple (N, c, s) at level q.
    CertifyTriple {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, default_value_t = 1)]
        q: u64,
        #[arg(long, default_value_t = 32)]
        samples: u64,
    },
    /// Norm groups of conics over the rationals.
    #[command(subcommand)]
    Conic(ConicCmd),
    /// Exterior-algebra model of mod-d Milnor K-theory.
    #[command(subcommand)]
    Milnor(MilnorCmd),
    /// Alias of `milnor ramif-check`.
    RamifCheck(RamifArgs),
    /// Alias of `milnor witness`.
    Witness(WitnessArgs),
    /// Run the acceptance suites: `all` or one module.
    Selftest {
        #[arg(default_value = "all")]
        scope: String,
    },
}

#[derive(Subcommand)]
enum ConicCmd {
    /// Decide whether x is a norm from the splitting fields of a x^2 + b y^2 = z^2.
    Decide(ConicArgs),
    /// Search for and verify a factorization of x into norms.
    Witness(ConicArgs),
    /// Hilbert symbol (a, b) at one place.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime or `real`.
        #[arg(long)]
        place: String,
    },
}

#[derive(Args)]
struct ConicArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
}

#[derive(Subcommand)]
enum MilnorCmd {
    /// The symbol of a list of unit classes.
    Wedge {
        #[arg(long)]
        d: u32,
        /// Classes as `1,0;0,1`.
        #[arg(long)]
        classes: String,
    },
    /// Norm of a symbol from the Kummer extension with the given radicand.
    Norm {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        radicand: String,
        /// Classes over the extension (one more coordinate, the root last).
        #[arg(long)]
        classes: String,
    },
    /// Certify that f(0) is not a d-th power for a monic f of prime degree d.
    RamifCheck(RamifArgs),
    /// Decompose a symbol into norms from Kummer extensions.
    Witness(WitnessArgs),
}

#[derive(Args)]
struct RamifArgs {
    /// JSON file `{"d": .., "coeffs": [..], "assert_irreducible": ..}`.
    #[arg(long, conflicts_with_all = ["d", "coeffs"])]
    input: Option<PathBuf>,
    #[arg(long)]
    d: Option<u32>,
    /// Valuation vectors of a_0..a_{d-1}, `;`-separated, `none` for zero: `1;none`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    #[arg(long)]
    assert_irreducible: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    d: u32,
    /// Number of generators m+1; inferred from the classes when omitted.
    #[arg(long)]
    m_plus_1: Option<usize>,
    /// u-classes as `1,0;0,1`.
    #[arg(long)]
    u: String,
    /// Coefficient classes as `0,0;1,0;0,1`.
    #[arg(long)]
    c: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Positive,
    Negative,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
            Status::Inconclusive => 2,
        }
    }
}

enum Failure {
    Usage(String),
    Inconclusive(String),
    Negative(String),
}

type Run = Result<Status, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<LiftError> for Failure {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::NotSmoothEnough { .. } | LiftError::PrecisionExhausted(_) | LiftError::Unsupported(_) => {
                Failure::Inconclusive(e.to_string())
            }
            LiftError::ResidualNotMet(_) | LiftError::UnselectedRows(_) => Failure::Negative(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        match e {
            PointError::BudgetExceeded { .. } | PointError::Unsupported(_) => Failure::Inconclusive(e.to_string()),
            PointError::Lift(l) => l.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<MilnorError> for Failure {
    fn from(e: MilnorError) -> Self {
        match e {
            MilnorError::Infeasible => Failure::Negative(e.to_string()),
            MilnorError::PreconditionViolated(_) => Failure::Inconclusive(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<LocalGlobalError> for Failure {
    fn from(e: LocalGlobalError) -> Self {
        match e {
            LocalGlobalError::RefusedNonMember { .. } => Failure::Negative(e.to_string()),
            LocalGlobalError::NotFoundWithinBound { .. } => Failure::Inconclusive(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Line-delimited records on stdout, flushed one by one.
struct Reporter {
    format: Format,
    records: usize,
}

impl Reporter {
    fn emit(&mut self, record: Value) {
        let mut out = std::io::stdout().lock();
        let line = match self.format {
            Format::Json => record.to_string(),
            Format::Text => text_line(&record),
        };
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
        self.records += 1;
    }
}

fn text_line(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", compact(v))).collect::<Vec<_>>().join(" "),
        other => compact(other),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn rational(flag: &str, s: &str) -> Result<Exp, Failure> {
    parse_exp(s).map_err(|_| Failure::Usage(format!("--{flag}: `{s}` is not a rational")))
}

fn rat(flag: &str, s: &str) -> Result<Rat, Failure> {
    parse_rat(s).map_err(|_| Failure::Usage(format!("--{flag}: `{s}` is not a nonzero rational")))
}

fn vectors(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    s.split(';')
        .map(|part| {
            part.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad class list `{s}`"))))
                .collect()
        })
        .collect()
}

fn classes(d: u32, s: &str) -> Result<Vec<UnitClassModD>, Failure> {
    vectors(s)?.into_iter().map(|v| UnitClassModD::new(d, v).map_err(Failure::from)).collect()
}

fn schedule(g: &Global, default: i64) -> Result<Vec<Exp>, Failure> {
    let nu_max = match (&g.nu_max, &g.precision) {
        (Some(s), _) => rational("nu-max", s)?,
        (None, Some(s)) => rational("precision", s)?,
        (None, None) => exp_int(default),
    };
    if nu_max <= exp_int(0) {
        return Err(Failure::Usage("--nu-max must be positive".into()));
    }
    Ok(doubling_schedule(nu_max))
}

fn lift(g: &Global, rep: &mut Reporter, system: &Path, point: &Path, nu: Option<&str>) -> Run {
    let sys = PolySystem::new(parse_poly_list(&read(system)?).map_err(usage)?).map_err(usage)?;
    let x = parse_series_list(&read(point)?).map_err(usage)?;
    let approx = match nu {
        Some(nu) => ApproxSolution::new(&sys, x, rational("nu", nu)?)?,
        None => ApproxSolution::measure(&sys, x)?,
    };
    let target = match &g.precision {
        Some(p) => rational("precision", p)?,
        None => exp_int(10),
    };
    let out = smooth_lift(&sys, &approx, target, None)?;
    rep.emit(json!({
        "record": "lift",
        "start_residual": to_value(&approx.residual),
        "target": format_exp(&target),
        "point": out.point.iter().map(series_to_json).collect::<Vec<_>>(),
        "residual": to_value(&out.residual),
        "minor": to_value(&out.minor),
        "e": format_exp(&out.e),
        "agrees_to": format_exp(&out.agrees_to),
        "root_precision": out.root_precision.map(|p| format_exp(&p)),
        "steps": out.steps,
    }));
    Ok(Status::Positive)
}

fn solve_hypersurface(g: &Global, rep: &mut Reporter, form: &Path) -> Run {
    let polys = parse_poly_list(&read(form)?).map_err(usage)?;
    let projective = polys.len() == 1 && polys[0].n_vars() >= 2 && polys[0].is_homogeneous().is_some();
    if projective {
        let hyp = Hypersurface::new(polys.into_iter().next().expect("one form"))?;
        let field = hyp.form().field();
        let solver: Box<dyn ProjectiveSolver> = match field {
            Field::Prime(_) => Box::new(CwSolver { budget: g.budget, ..CwSolver::default() }),
            Field::Rationals => Box::new(RationalFormSolver::default()),
        };
        let opts = PointOptions { schedule: schedule(g, 16)?, q_cap: g.q_cap, max_depth: 16 };
        let report = point_over_laurent(&hyp, solver.as_ref(), &opts)?;
        let status = match &report {
            PointReport::Solved(_) => Status::Positive,
            PointReport::NoSolutionModNu { .. } => Status::Negative,
            PointReport::Inconclusive { .. } => Status::Inconclusive,
        };
        let mut v = to_value(&report);
        v["record"] = json!("hypersurface");
        v["c1_regime"] = json!(hyp.c1_regime());
        rep.emit(v);
        return Ok(status);
    }
    let sys = PolySystem::new(polys).map_err(usage)?;
    let solver = default_solver(sys.field());
    let opts = InftyOptions { schedule: schedule(g, 16)?, q_cap: g.q_cap, max_depth: 16 };
    let out = solve_in_r_infty(&sys, solver.as_ref(), &opts)?;
    let mut v = to_value(&out);
    v["record"] = json!("system");
    let status = match &out {
        InftyOutcome::Solved { point, .. } => {
            v["point"] = to_value(&point.iter().map(series_to_json).collect::<Vec<_>>());
            Status::Positive
        }
        InftyOutcome::NoSolutionModNu { .. } => Status::Negative,
        InftyOutcome::Inconclusive { .. } => Status::Inconclusive,
    };
    rep.emit(v);
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn certify(g: &Global, rep: &mut Reporter, system: &Path, n: u64, c: u64, s: u64, q: u64, samples: u64) -> Run {
    let sys = PolySystem::new(parse_poly_list(&read(system)?).map_err(usage)?).map_err(usage)?;
    let triple = AssociatedTriple::new(n, c, s, q)?;
    let report = certify_triple(&sys, &triple, samples, g.seed, &CertifyOptions::default());
    for r in &report.samples {
        let mut v = to_value(r);
        v["record"] = json!("sample");
        rep.emit(v);
    }
    rep.emit(json!({
        "record": "certification",
        "triple": to_value(&report.triple),
        "seed": report.seed,
        "verdict": to_value(&report.verdict),
        "passed": report.passed,
        "counterexamples": report.counterexamples,
        "inconclusive": report.inconclusive,
    }));
    Ok(match report.verdict {
        Verdict::Pass => Status::Positive,
        Verdict::Counterexample => Status::Negative,
        Verdict::Inconclusive => Status::Inconclusive,
    })
}

fn conic(g: &Global, rep: &mut Reporter, cmd: &ConicCmd) -> Run {
    match cmd {
        ConicCmd::Decide(args) | ConicCmd::Witness(args) => {
            let c = Conic::new(rat("a", &args.a)?, rat("b", &args.b)?)?;
            let x = rat("x", &args.x)?;
            let places: Vec<Value> = relevant_places(&[x, c.a, c.b])
                .into_iter()
                .map(|v| {
                    Ok(json!({
                        "place": v.to_string(),
                        "conic_has_points": hilbert_symbol(&c.a, &c.b, v)? == 1,
                        "local_member": local_norm_membership(&x, &c, v)?,
                    }))
                })
                .collect::<Result<_, LocalGlobalError>>()?;
            let member = global_membership_decide(&x, &c)?;
            if let ConicCmd::Decide(_) = cmd {
                rep.emit(json!({"record": "decision", "conic": to_value(&c), "x": args.x, "member": member, "places": places}));
                return Ok(if member { Status::Positive } else { Status::Negative });
            }
            let w = witness_search(&x, &c, g.bound)?;
            rep.emit(json!({"record": "witness", "conic": to_value(&c), "witness": to_value(&w), "verified": verify_witness(&w, &c)}));
            Ok(if verify_witness(&w, &c) { Status::Positive } else { Status::Inconclusive })
        }
        ConicCmd::Hilbert { a, b, place } => {
            let v: Place = place.parse().map_err(usage)?;
            let h = hilbert_symbol(&rat("a", a)?, &rat("b", b)?, v)?;
            rep.emit(json!({"record": "hilbert", "a": a, "b": b, "place": v.to_string(), "symbol": h}));
            Ok(if h == 1 { Status::Positive } else { Status::Negative })
        }
    }
}

fn ramif_check(rep: &mut Reporter, args: &RamifArgs) -> Run {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Input {
        d: u32,
        coeffs: Vec<Coefficient>,
        #[serde(default)]
        assert_irreducible: bool,
    }
    let input = match (&args.input, args.d, &args.coeffs) {
        (Some(path), _, _) => serde_json::from_str::<Input>(&read(path)?).map_err(usage)?,
        (None, Some(d), Some(coeffs)) => {
            let parsed = coeffs
                .split(';')
                .map(|part| match part.trim() {
                    "none" => Ok(None),
                    p => p
                        .split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map(|e| Some(MonomialElem::new(e)))
                        .map_err(|_| Failure::Usage(format!("bad coefficient `{p}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Input { d, coeffs: parsed, assert_irreducible: args.assert_irreducible }
        }
        _ => return Err(Failure::Usage("give --input, or --d with --coeffs".into())),
    };
    let cert = lemma51_certify(&input.coeffs, input.d, input.assert_irreducible || args.assert_irreducible)?;
    let mut v = to_value(&cert);
    v["record"] = json!("ramification");
    rep.emit(v);
    Ok(match cert.verdict {
        Lemma51Verdict::Certified { .. } => Status::Positive,
        Lemma51Verdict::Refuted => Status::Negative,
    })
}

fn norm_witness(rep: &mut Reporter, args: &WitnessArgs) -> Run {
    let u = classes(args.d, &args.u)?;
    let c = classes(args.d, &args.c)?;
    let dim = args.m_plus_1.or_else(|| u.first().map(|x| x.dim())).unwrap_or(0);
    let dec = thm54_witness(args.d, dim, &u, &c)?;
    let ok = expand_and_verify(&dec);
    let mut v = to_value(&dec);
    v["record"] = json!("decomposition");
    v["verified"] = json!(ok);
    rep.emit(v);
    Ok(if ok { Status::Positive } else { Status::Inconclusive })
}

fn milnor(rep: &mut Reporter, cmd: &MilnorCmd) -> Run {
    match cmd {
        MilnorCmd::Wedge { d, classes: cs } => {
            let w = wedge(&classes(*d, cs)?)?;
            let zero = w.is_zero();
            rep.emit(json!({"record": "symbol", "symbol": to_value(&w), "zero": zero}));
            Ok(Status::Positive)
        }
        MilnorCmd::Norm { d, radicand, classes: cs } => {
            let r = classes(*d, radicand)?;
            let [r] = <[UnitClassModD; 1]>::try_from(r).map_err(|_| Failure::Usage("--radicand takes one class".into()))?;
            let ext = KummerExtension::new(r)?;
            let sym = wedge(&classes(*d, cs)?)?;
            let n = kummer_norm_class(&ext, &sym)?;
            rep.emit(json!({"record": "norm", "extension": to_value(&ext), "symbol": to_value(&sym), "norm": to_value(&n)}));
            Ok(Status::Positive)
        }
        MilnorCmd::RamifCheck(args) => ramif_check(rep, args),
        MilnorCmd::Witness(args) => norm_witness(rep, args),
    }
}

fn selftest(rep: &mut Reporter, scope: &str) -> Run {
    let ids = kk_core::selftest::scope_ids(scope)
        .ok_or_else(|| Failure::Usage(format!("unknown selftest scope `{scope}` (all, series, lifting, pointfinder, milnor, localglobal)")))?;
    let mut all = true;
    for id in ids {
        let r = kk_core::selftest::run_criterion(id).expect("listed criterion");
        eprintln!("{}", r.line());
        all &= r.passed;
        let mut v = to_value(&r);
        v["record"] = json!("criterion");
        rep.emit(v);
    }
    Ok(if all { Status::Positive } else { Status::Negative })
}

fn dispatch(cli: &Cli, rep: &mut Reporter) -> Run {
    let g = &cli.global;
    match &cli.command {
        Command::Lift { system, point, nu } => lift(g, rep, system, point, nu.as_deref()),
        Command::SolveHypersurface { form } => solve_hypersurface(g, rep, form),
        Command::CertifyTriple { system, n, c, s, q, samples } => certify(g, rep, system, *n, *c, *s, *q, *samples),
        Command::Conic(cmd) => conic(g, rep, cmd),
        Command::Milnor(cmd) => milnor(rep, cmd),
        Command::RamifCheck(args) => ramif_check(rep, args),
        Command::Witness(args) => norm_witness(rep, args),
        Command::Selftest { scope } => selftest(rep, scope),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(n) = cli.global.workers {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: could not start {n} workers");
            return ExitCode::from(3);
        }
    }
    let mut rep = Reporter { format: cli.global.format, records: 0 };
    let (code, status, message) = match dispatch(&cli, &mut rep) {
        Ok(s) => (s.code(), json!(s), None),
        Err(Failure::Negative(m)) => (1, json!(Status::Negative), Some(m)),
        Err(Failure::Inconclusive(m)) => (2, json!(Status::Inconclusive), Some(m)),
        Err(Failure::Usage(m)) => (3, json!("usage-error"), Some(m)),
    };
    let summary = json!({"record": "summary", "status": status, "exit": code, "records": rep.records, "seed": cli.global.seed, "message": message});
    eprintln!("kk: {} (exit {code}){}", compact(&status), message.as_deref().map(|m| format!(": {m}")).unwrap_or_default());
    rep.emit(summary);
    ExitCode::from(code)
}
