use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperloc::cherednik::{
    delta_action, dunkl_ym_eigenvalue, in_arrangement_c, localization_verdict, radial_parts_eigenvalue, simple_dim,
    CherednikParams,
};
use hyperloc::comparability::{shifting_cone_in, ParamSpace, DEFAULT_RADIUS};
use hyperloc::covectors::enumerate_covectors;
use hyperloc::exactnum::{format_rational, parse_param_csv, parse_rational_csv, ParamScalar, Rational};
use hyperloc::git_fan::{
    chamber_of, chambers, describe, fan_equality_check, semistable_point, verify_semistability, wall_hyperplanes,
    ChamberResult, FanSource,
};
use hyperloc::lattice::{is_unimodular, kernel_basis, maximal_minors, minors_coprime, smith_normal_form};
use hyperloc::report::analyze;
use hyperloc::weyl::{eval, f_weight, moment_ideal};
use hyperloc::{ActionMatrix, Error, IntMatrix};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_VALIDATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Exact combinatorics of hypertoric quantizations and their localization.
#[derive(Parser)]
#[command(name = "hyperloc", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Weight matrix as JSON: {"d": .., "n": .., "entries": [[..], ..]}.
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,
    /// Parameter χ, comma-separated, e.g. "1/2,1/3+T".
    #[arg(long, global = true, allow_hyphen_values = true)]
    chi: Option<String>,
    /// Second parameter for `arrow`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    chi2: Option<String>,
    /// Stability parameter δ, comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Search radius for non-unimodular attachment and for maximality.
    #[arg(long, global = true)]
    radius: Option<u64>,
    /// Worker threads for the parallel maps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indented output instead of a single canonical line.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Minors, Smith form and kernel basis of the matrix.
    Lattice,
    /// Walls, chambers, and the chamber of δ.
    Fan {
        /// Also compare the two descriptions of the semistable locus on this
        /// many random points per chamber.
        #[arg(long)]
        check_equality: Option<usize>,
    },
    /// All covectors with a realizing λ.
    Covectors,
    /// Covectors attached to χ.
    Qset,
    /// Whether χ → χ2.
    Arrow,
    /// Whether χ is maximal for the arrow pre-order.
    Maximal,
    /// Shifting cone of χ inside a chamber.
    Shiftcone {
        /// A point of the chamber; defaults to δ.
        #[arg(long, allow_hyphen_values = true)]
        chamber_witness: Option<String>,
    },
    /// Evaluate a star-product expression tree.
    Weyl {
        #[arg(long)]
        eval: PathBuf,
    },
    /// Normal form of the quantized moment-map ideal.
    Flatness,
    /// Semistability of (x, y) for δ.
    Semistable {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Rational Cherednik algebra of ℤ/m.
    Cherednik {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, group = "mode")]
        verdict: bool,
        #[arg(long, group = "mode")]
        dims: bool,
        #[arg(long, group = "mode")]
        dunkl: Option<i64>,
    },
    /// The full pipeline for (A, χ, δ).
    Analyze,
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<Value, Failure>;

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn load_matrix(g: &Global) -> Result<IntMatrix, Failure> {
    let path = g.matrix.as_deref().ok_or_else(|| Failure::Usage("--matrix is required".into()))?;
    let text = read(path)?;
    Ok(IntMatrix::from_json_str(&text)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Matrix passing all input invariants.
fn accepted(g: &Global) -> Result<IntMatrix, Failure> {
    Ok(ActionMatrix::new(load_matrix(g)?)?.matrix().clone())
}

fn param(v: &Option<String>, flag: &str, d: usize) -> Result<Vec<ParamScalar>, Failure> {
    let p = parse_param_csv(required(v, flag)?)?;
    if p.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() }.into());
    }
    Ok(p)
}

fn rationals(s: &str, len: usize) -> Result<Vec<Rational>, Failure> {
    let v = parse_rational_csv(s)?;
    if v.len() != len {
        return Err(Error::DimensionMismatch { expected: len, got: v.len() }.into());
    }
    Ok(v)
}

fn space(g: &Global, a: &IntMatrix) -> ParamSpace {
    ParamSpace::with_radius(a, g.radius.unwrap_or(DEFAULT_RADIUS))
}

/// A partial `Q_χ` is reported, not raised.
fn inconclusive_or(e: Error) -> Outcome {
    match e {
        Error::PartialQSet { radius } => Ok(json!({ "inconclusive": true, "radius": radius, "reason": e.to_string() })),
        e => Err(e.into()),
    }
}

fn lattice(g: &Global) -> Outcome {
    let a = load_matrix(g)?;
    let snf = smith_normal_form(&a);
    let minors: Vec<Value> = maximal_minors(&a)
        .into_iter()
        .map(|(cols, det)| json!({ "columns": cols, "minor": det.to_string() }))
        .collect();
    let accepted = match ActionMatrix::new(a.clone()) {
        Ok(_) => json!(true),
        Err(e) => json!({ "rejected": error_object(&e) }),
    };
    let kernel = kernel_basis(&a).ok().map(|k| json!({ "b": to_value(&k.b), "zero_rows": k.zero_rows() }));
    Ok(json!({
        "matrix": to_value(&a),
        "accepted": accepted,
        "unimodular": is_unimodular(&a),
        "coprime_minors": minors_coprime(&a),
        "maximal_minors": minors,
        "smith": {
            "diagonal": snf.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "u": to_value(&snf.u),
            "v": to_value(&snf.v),
        },
        "kernel_basis": kernel,
    }))
}

fn fan(g: &Global, check_equality: Option<usize>) -> Outcome {
    let a = accepted(g)?;
    let walls = wall_hyperplanes(&a, FanSource::FanOnMomentFiber);
    let all = chambers(&walls);
    let mut out = json!({ "walls": to_value(&walls), "chambers": to_value(&all) });
    if let Some(delta) = &g.delta {
        let delta = rationals(delta, a.rows())?;
        let c = chamber_of(&delta, &walls);
        out["delta"] = to_value(delta.iter().map(format_rational).collect::<Vec<_>>());
        out["generic"] = json!(matches!(c, ChamberResult::Chamber(_)));
        out["chamber_description"] = json!(describe(&c));
        out["chamber_of_delta"] = to_value(&c);
    }
    if let Some(points) = check_equality {
        // One δ per chamber, sampled with the global seed.
        let deltas: Vec<Vec<Rational>> = all.into_iter().map(|c| c.witness).collect();
        out["fan_equality"] = to_value(fan_equality_check(&a, &deltas, points, g.seed));
    }
    Ok(out)
}

fn qset(g: &Global) -> Outcome {
    let a = accepted(g)?;
    let chi = param(&g.chi, "chi", a.rows())?;
    let q = space(g, &a).q_set(&chi)?;
    let mut out = to_value(&q);
    out["covectors"] = json!(q.labels());
    out["chi"] = to_value(&chi);
    out["inconclusive_covectors"] = out["inconclusive"].take();
    out["inconclusive"] = json!(q.partial);
    Ok(out)
}

fn arrow(g: &Global) -> Outcome {
    let a = accepted(g)?;
    let chi = param(&g.chi, "chi", a.rows())?;
    let chi2 = param(&g.chi2, "chi2", a.rows())?;
    let s = space(g, &a);
    match s.chi_arrow(&chi, &chi2) {
        Ok(details) => {
            let mut out = to_value(&details);
            out["chi"] = to_value(&chi);
            out["chi2"] = to_value(&chi2);
            out["q_chi"] = json!(s.q_set(&chi)?.labels());
            out["q_chi2"] = json!(s.q_set(&chi2)?.labels());
            Ok(out)
        }
        Err(e) => inconclusive_or(e),
    }
}

fn maximal(g: &Global) -> Outcome {
    let a = accepted(g)?;
    let chi = param(&g.chi, "chi", a.rows())?;
    let radius = g.radius.unwrap_or(8);
    match space(g, &a).is_maximal(&chi, radius) {
        Ok(m) => Ok(json!({ "chi": to_value(&chi), "radius": radius, "maximality": to_value(m) })),
        Err(e) => inconclusive_or(e),
    }
}

fn shiftcone(g: &Global, witness: Option<&str>) -> Outcome {
    let a = accepted(g)?;
    let chi = param(&g.chi, "chi", a.rows())?;
    let point = match witness.or(g.delta.as_deref()) {
        Some(w) => rationals(w, a.rows())?,
        None => return Err(Failure::Usage("--chamber-witness or --delta is required".into())),
    };
    let walls = wall_hyperplanes(&a, FanSource::FanOnMomentFiber);
    let chamber = match chamber_of(&point, &walls) {
        ChamberResult::Chamber(c) => c,
        on_wall => {
            let message = describe(&on_wall);
            return Err(Error::Validation { invariant: "chamber_witness_generic", message }.into());
        }
    };
    match shifting_cone_in(&space(g, &a), &chi, &chamber) {
        Ok(cone) => Ok(to_value(cone)),
        Err(e) => inconclusive_or(e),
    }
}

fn weyl(path: &Path) -> Outcome {
    let expr: Value =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let r = eval(&expr)?;
    Ok(json!({
        "result": r.to_json(),
        "display": r.to_string(),
        "weight": to_value(f_weight(&r)),
        "order": r.order().map(|o| format_rational(&o)),
    }))
}

fn semistable(g: &Global, x: &str, y: &str) -> Outcome {
    let a = accepted(g)?;
    let (x, y) = (rationals(x, a.cols())?, rationals(y, a.cols())?);
    let delta = rationals(required(&g.delta, "delta")?, a.rows())?;
    let verdict = semistable_point(&a, &x, &y, &delta);
    Ok(json!({
        "semistable": verdict.is_semistable(),
        "certificate": to_value(&verdict),
        "certificate_verified": verify_semistability(&a, &x, &y, &delta, &verdict),
    }))
}

fn cherednik(m: usize, h: &str, dims: bool, dunkl: Option<i64>) -> Outcome {
    let p = CherednikParams::new(m, parse_rational_csv(h)?)?;
    if let Some(r) = dunkl {
        if r < 0 {
            return Err(Failure::Usage("--dunkl needs r >= 0".into()));
        }
        return Ok(json!({
            "params": to_value(&p),
            "r": r,
            "dunkl_eigenvalue": format_rational(&dunkl_ym_eigenvalue(&p, r)),
            "radial_parts_eigenvalue": format_rational(&radial_parts_eigenvalue(&p, r)),
        }));
    }
    if dims {
        let per_vertex: Vec<Value> = (0..m)
            .map(|i| {
                let exact = simple_dim(&p, i);
                let brute = delta_action(&p, i, 8 * m.max(8));
                json!({ "i": i, "c": to_value(&exact), "agrees_with_brute_force": brute.agrees_with(&exact), "delta_module": to_value(&brute) })
            })
            .collect();
        return Ok(json!({ "params": to_value(&p), "arrangement": to_value(in_arrangement_c(&p)), "dims": per_vertex }));
    }
    Ok(to_value(localization_verdict(&p)?))
}

fn analyze_cmd(g: &Global) -> Outcome {
    let a = load_matrix(g)?;
    let chi = parse_param_csv(required(&g.chi, "chi")?)?;
    let delta = parse_rational_csv(required(&g.delta, "delta")?)?;
    let report = analyze(&a, &chi, &delta, g.radius)?;
    let yes = report.verdicts.hypotheses_satisfied;
    let mut out = to_value(&report);
    out["verdict"] = json!(if yes { "yes" } else { "no" });
    Ok(out)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Lattice => lattice(g),
        Command::Fan { check_equality } => fan(g, *check_equality),
        Command::Covectors => {
            let a = accepted(g)?;
            let covs = enumerate_covectors(&a);
            Ok(json!({ "count": covs.len(), "covectors": to_value(covs) }))
        }
        Command::Qset => qset(g),
        Command::Arrow => arrow(g),
        Command::Maximal => maximal(g),
        Command::Shiftcone { chamber_witness } => shiftcone(g, chamber_witness.as_deref()),
        Command::Weyl { eval } => weyl(eval),
        Command::Flatness => Ok(to_value(moment_ideal(&accepted(g)?)?)),
        Command::Semistable { x, y } => semistable(g, x, y),
        Command::Cherednik { m, h, verdict: _, dims, dunkl } => cherednik(*m, h, *dims, *dunkl),
        Command::Analyze => analyze_cmd(g),
    }
}

fn error_object(e: &Error) -> Value {
    let invariant = match e {
        Error::Validation { invariant, .. } => Some(*invariant),
        _ => None,
    };
    json!({ "kind": kind(e), "invariant": invariant, "message": e.to_string() })
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::TauProductUnsupported => "tau_product_unsupported",
        Error::DivisionByZero => "division_by_zero",
        Error::Parse { .. } => "parse",
        Error::Validation { .. } => "validation",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::TauPresent => "tau_present",
        Error::NotACovector(_) => "not_a_covector",
        Error::NotUnimodular => "not_unimodular",
        Error::PartialQSet { .. } => "partial_q_set",
        Error::NotInChamber => "not_in_chamber",
        Error::ValidationFailed { .. } => "shift_validation_failed",
        Error::NonSymbol => "non_symbol",
        Error::NotInFiltration(_) => "not_in_filtration",
        Error::BadShape { .. } => "bad_shape",
        Error::BadM(_) => "bad_m",
        Error::InternalInconsistency(_) => "internal_inconsistency",
    }
}

fn render(v: &Value, pretty: bool) -> String {
    // `Value` objects keep keys sorted, which makes the output canonical.
    if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("JSON values render")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("cannot configure {jobs} workers: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(v) => {
            println!("{}", render(&v, cli.global.pretty));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Library(e)) => {
            println!("{}", render(&json!({ "error": error_object(&e) }), cli.global.pretty));
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
