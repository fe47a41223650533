//! Command-line front end for the certification pipeline.
//!
//! Subcommands mirror the stages of the library: `bound` runs the whole
//! chain and gates its exit code on the certified result, `distances` and
//! `certificate` expose intermediate artifacts, `lp-solve` solves the
//! truncated program for user-supplied distances, `counterexample` builds
//! and checks the dimension-one arc families, `jacobi-eval` emits
//! polynomial values for plotting, and `verify` re-checks a previously
//! written certificate file from scratch.
//!
//! Exit codes are a stable contract: 0 success, 2 usage error, 3 numeric
//! failure, 4 verification failure.  All outputs are deterministic given
//! the flags (sampling seeds included), and `--out` writes are atomic.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use steinhaus_core::lp::{self, SolveStatus, TruncatedLp, Verdict};
use steinhaus_core::{steinhaus, ArcFamily, BoundCertificate, DecayReport, Error, JacobiParams, LemmaConstants, SpaceKind};

#[derive(Parser)]
#[command(
    name = "steinhaus",
    version,
    about = "Certified density bounds for distance-avoiding sets on compact two-point homogeneous spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and gate the exit code on the certified bound
    Bound(PipelineArgs),
    /// Generate the certified distance sequence without building weights
    Distances(PipelineArgs),
    /// Build and emit a certificate without gating the exit code
    Certificate(PipelineArgs),
    /// Solve the truncated linear program for an explicit distance list
    LpSolve(LpSolveArgs),
    /// Build a dimension-one arc family and check avoidance and measure
    Counterexample(CounterexampleArgs),
    /// Evaluate normalized polynomials at a point or on a grid
    JacobiEval(JacobiEvalArgs),
    /// Re-verify a previously written certificate file from scratch
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file (atomically, temp file + rename) instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    /// Space name: s2, s3, …, rp2, …, cp2, …, hp2, …, op2 (case-insensitive)
    #[arg(long, value_parser = parse_space)]
    space: SpaceKind,
    /// Number of distances N in the sequence
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Highest polynomial degree scanned by the lemma search and decay scans
    #[arg(long = "degree-cap", default_value_t = 5_000)]
    degree_cap: u32,
    /// Degree up to which dual feasibility is re-verified
    #[arg(long = "k-verify", default_value_t = 10_000)]
    k_verify: u32,
    /// Interior grid points for the lemma's envelope scan
    #[arg(long = "grid", default_value_t = 400)]
    grid: u32,
    /// Dual-slack tolerance for the exit-code gate
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Fraction of the cutoff angle d0 used for the first distance
    #[arg(long = "start-fraction", default_value_t = 0.9)]
    start_fraction: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LpSolveArgs {
    /// Space whose polynomial family defines the constraints
    #[arg(long, value_parser = parse_space)]
    space: Option<SpaceKind>,
    /// Jacobi parameter alpha (pass with --beta instead of --space)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Jacobi parameter beta (pass with --alpha instead of --space)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Comma-separated strictly decreasing distances, e.g. "1.1,0.4"
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    distances: Vec<f64>,
    /// Truncation degree K of the program
    #[arg(long = "degree-cap", default_value_t = 5_000)]
    degree_cap: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Space name; only the circles s1 and rp1 carry arc families
    #[arg(long, value_parser = parse_space)]
    space: SpaceKind,
    /// Construction level k (1 ..= 12)
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Random pairs drawn for the sampled avoidance check
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Seed for the sampled avoidance check
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct JacobiEvalArgs {
    /// Space whose polynomial family to evaluate
    #[arg(long, value_parser = parse_space)]
    space: Option<SpaceKind>,
    /// Jacobi parameter alpha (pass with --beta instead of --space)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Jacobi parameter beta (pass with --alpha instead of --space)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Polynomial degree k
    #[arg(long)]
    degree: u32,
    /// Evaluate at this single argument in [-1, 1] instead of on a grid
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Number of grid cells over [-1, 1] for curve output
    #[arg(long, default_value_t = 400, conflicts_with = "t")]
    grid: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate JSON file written by `bound` or `certificate`
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Degree up to which dual feasibility is re-verified
    #[arg(long = "k-verify", default_value_t = 10_000)]
    k_verify: u32,
    /// Dual-slack tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// A failed run, carrying the exit code of the stable contract.
#[derive(Debug)]
enum Failure {
    /// Bad invocation or malformed input: exit 2.
    Usage(String),
    /// A numeric routine failed or I/O broke underneath us: exit 3.
    Runtime(String),
    /// Everything ran, but a claimed property does not hold: exit 4.
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::Numeric(_) | Error::InvalidState(_) => Failure::Runtime(e.to_string()),
            Error::Verification(_) => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(format!("i/o failure: {e}"))
        }
    }
}

fn parse_space(s: &str) -> Result<SpaceKind, Error> {
    s.parse()
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(args) => run_pipeline(args, PipelineMode::GatedBound),
        Command::Distances(args) => run_pipeline(args, PipelineMode::DistancesOnly),
        Command::Certificate(args) => run_pipeline(args, PipelineMode::UngatedCertificate),
        Command::LpSolve(args) => run_lp_solve(args),
        Command::Counterexample(args) => run_counterexample(args),
        Command::JacobiEval(args) => run_jacobi_eval(args),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(()) => {}
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            std::process::exit(failure.exit_code());
        }
    }
}

#[derive(Copy, Clone, PartialEq)]
enum PipelineMode {
    GatedBound,
    DistancesOnly,
    UngatedCertificate,
}

fn run_pipeline(args: PipelineArgs, mode: PipelineMode) -> Result<(), Failure> {
    let space = args.space;
    if !space.density_bound_applies() {
        return Err(Failure::Usage(format!(
            "{space} has real dimension 1, where no 2^-N density bound exists: distance-avoiding \
             sets of positive density are constructed by `counterexample --space {space} --k <level>`"
        )));
    }
    let params = space.params().jacobi;
    let constants = steinhaus::find_lemma_constants(params, args.degree_cap, args.grid)?;
    let plan = steinhaus::generate_distances(space, args.n, &constants, args.start_fraction)?;

    if mode == PipelineMode::DistancesOnly {
        let payload = match args.output.format {
            Format::Json => render_json(&plan_json(&args, &constants, &plan)),
            Format::Csv => plan_csv(&plan),
            Format::Human => plan_human(&constants, &plan),
        };
        return emit(&args.output, &payload);
    }

    let cert = steinhaus::build_certificate(&plan, &constants, args.k_verify)?;
    let effective = constants.with_lambda(cert.lambda())?;
    let decay = steinhaus::verify_decay_claim(&plan, &effective, args.degree_cap)?;

    let payload = match args.output.format {
        Format::Json => render_json(&certificate_json(&args, &constants, &cert, &decay)),
        Format::Csv => slack_curve_csv(params, &cert, args.k_verify)?,
        Format::Human => certificate_human(&constants, &cert, &decay),
    };
    emit(&args.output, &payload)?;

    if mode == PipelineMode::GatedBound {
        let report = cert.feasibility();
        if report.verdict == Verdict::Violated || report.min_slack < -args.tol {
            return Err(Failure::Verification(format!(
                "dual weights are infeasible: min slack {:.3e} at degree {} (verdict {})",
                report.min_slack,
                report.argmin_degree,
                verdict_label(report.verdict)
            )));
        }
        if !(cert.bound() <= cert.two_to_minus_n()) {
            return Err(Failure::Verification(format!(
                "certified bound {:.12e} does not reach 2^-N = {:.12e}",
                cert.bound(),
                cert.two_to_minus_n()
            )));
        }
    }
    Ok(())
}

fn run_lp_solve(args: LpSolveArgs) -> Result<(), Failure> {
    let params = resolve_family(args.space, args.alpha, args.beta)?;
    let lp = TruncatedLp::build(params, &args.distances, args.degree_cap)?;
    let solution = lp.solve_primal();
    let gap = lp::weak_duality_gap(&solution).ok();

    let payload = match args.output.format {
        Format::Json => {
            let value = json!({
                "alpha": params.alpha(),
                "beta": params.beta(),
                "distances": args.distances,
                "K": args.degree_cap,
                "f": solution.primal_f.iter().map(|&(k, w)| json!([k, w])).collect::<Vec<_>>(),
                "z": solution.dual_z,
                "value": solution.primal_value,
                "status": status_label(solution.status),
                "gap": gap,
            });
            render_json(&value)
        }
        Format::Csv => {
            let mut out = String::from("k,weight\n");
            for &(k, w) in &solution.primal_f {
                let _ = writeln!(out, "{k},{w}");
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "status   {}", status_label(solution.status));
            if solution.status == SolveStatus::Optimal {
                let _ = writeln!(out, "value    {}", solution.primal_value);
                let support: Vec<String> = solution
                    .primal_f
                    .iter()
                    .map(|&(k, w)| format!("f_{k} = {w}"))
                    .collect();
                let _ = writeln!(out, "support  {}", support.join(", "));
                let _ = writeln!(out, "duals    {}", join_floats(&solution.dual_z));
                if let Some(g) = gap {
                    let _ = writeln!(out, "gap      {g:.3e}");
                }
            }
            out
        }
    };
    emit(&args.output, &payload)
}

fn run_counterexample(args: CounterexampleArgs) -> Result<(), Failure> {
    let family = ArcFamily::build(args.space, args.k)?;
    let avoidance = family.check_avoidance(args.samples, args.seed);
    let measure = family.measure()?;
    let forbidden = family.forbidden_distances(args.k)?;

    let payload = match args.output.format {
        Format::Json => {
            let value = json!({
                "space": family.space().to_string(),
                "k": family.level(),
                "theta": family.theta(),
                "d_k": family.base_distance(),
                "N_k": family.arc_count(),
                "arc_radius": family.arc_radius(),
                "arc_measure": measure.arc_measure,
                "total_measure": measure.total,
                "lower_bound": measure.lower_bound,
                "forbidden": forbidden,
                "min_gap": avoidance.min_gap,
                "analytic_ok": avoidance.analytic_ok,
                "samples": args.samples,
                "seed": args.seed,
            });
            render_json(&value)
        }
        Format::Csv => arc_layout_csv(&family),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "space          {}", family.space());
            let _ = writeln!(out, "level          {}", family.level());
            let _ = writeln!(out, "arcs           {}", family.arc_count());
            let _ = writeln!(out, "base distance  {}", family.base_distance());
            let _ = writeln!(out, "arc radius     {}", family.arc_radius());
            let _ = writeln!(
                out,
                "total measure  {}  (lower bound {})",
                measure.total, measure.lower_bound
            );
            let _ = writeln!(out, "min gap        {:.6e}", avoidance.min_gap);
            let _ = writeln!(
                out,
                "analytic       {}",
                if avoidance.analytic_ok { "pass" } else { "FAIL" }
            );
            out
        }
    };
    emit(&args.output, &payload)?;

    if !avoidance.analytic_ok {
        return Err(Failure::Verification(
            "analytic avoidance check failed: some pair distance left its expected band".into(),
        ));
    }
    if !(avoidance.min_gap > 0.0) {
        return Err(Failure::Verification(format!(
            "sampled pair came within {:.3e} of a forbidden distance",
            avoidance.min_gap
        )));
    }
    if measure.total < measure.lower_bound {
        return Err(Failure::Verification(format!(
            "total measure {} fell below the guaranteed lower bound {}",
            measure.total, measure.lower_bound
        )));
    }
    Ok(())
}

fn run_jacobi_eval(args: JacobiEvalArgs) -> Result<(), Failure> {
    let params = resolve_family(args.space, args.alpha, args.beta)?;
    match args.t {
        Some(t) => {
            let value = params.eval(args.degree, t)?;
            let payload = match args.output.format {
                Format::Json => render_json(&json!({
                    "alpha": params.alpha(),
                    "beta": params.beta(),
                    "degree": args.degree,
                    "t": t,
                    "value": value,
                })),
                Format::Csv => format!("t,value\n{t},{value}\n"),
                Format::Human => format!("{value}\n"),
            };
            emit(&args.output, &payload)
        }
        None => {
            if args.grid == 0 {
                return Err(Failure::Usage("grid must have at least one cell".into()));
            }
            let mut points = Vec::with_capacity(args.grid as usize + 1);
            for g in 0..=args.grid {
                let t = -1.0 + 2.0 * g as f64 / args.grid as f64;
                points.push((t, params.eval(args.degree, t)?));
            }
            let payload = match args.output.format {
                Format::Json => render_json(&json!({
                    "alpha": params.alpha(),
                    "beta": params.beta(),
                    "degree": args.degree,
                    "points": points.iter().map(|&(t, v)| json!([t, v])).collect::<Vec<_>>(),
                })),
                Format::Csv | Format::Human => {
                    let mut out = String::from("t,value\n");
                    for (t, v) in points {
                        let _ = writeln!(out, "{t},{v}");
                    }
                    out
                }
            };
            emit(&args.output, &payload)
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| {
        let failure: Failure = e.into();
        match failure {
            Failure::Usage(m) => Failure::Usage(format!("{}: {m}", args.input.display())),
            other => other,
        }
    })?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("certificate file is not valid JSON: {e}")))?;

    let space: SpaceKind = field_str(&doc, "space")?.parse()?;
    let n = field_u64(&doc, "N")? as u32;
    let lambda = field_f64(&doc, "lambda")?;
    let epsilon = field_f64(&doc, "epsilon")?;
    let bound = field_f64(&doc, "bound")?;
    let distances = field_f64_array(&doc, "distances")?;
    let z = field_f64_array(&doc, "z")?;
    let params = space.params().jacobi;

    let mut checks: Vec<(&'static str, bool, String)> = Vec::new();

    let shape_ok = n >= 1
        && distances.len() == n as usize
        && z.len() == n as usize + 1
        && distances.windows(2).all(|w| w[0] > w[1])
        && distances
            .iter()
            .all(|&d| d > 0.0 && d < std::f64::consts::PI && d.is_finite())
        && z.iter().all(|&v| v.is_finite() && v >= 0.0);
    checks.push((
        "shape",
        shape_ok,
        format!("N = {n}, {} distances, {} weights", distances.len(), z.len()),
    ));
    if !shape_ok {
        return finish_verify(&args, &doc, checks, None);
    }

    let lambda_ok = lambda > 0.0 && lambda <= 0.5;
    checks.push(("lambda_range", lambda_ok, format!("lambda = {lambda}")));

    if n == 1 {
        let weights_ok = z == [0.5, 1.0];
        checks.push((
            "weights_closed_form",
            weights_ok,
            format!("z = {:?}, expected the direct pair [0.5, 1.0]", z),
        ));
        checks.push(("epsilon_matches", epsilon == 0.0, format!("epsilon = {epsilon}")));
        checks.push(("bound_algebra", bound == 0.5, format!("bound = {bound}")));
    } else {
        let expected_eps = steinhaus::epsilon_for(lambda, n)?;
        let eps_ok = (epsilon - expected_eps).abs() <= 1e-12 * expected_eps.max(1.0);
        checks.push((
            "epsilon_matches",
            eps_ok,
            format!("epsilon = {epsilon}, recomputed {expected_eps}"),
        ));

        let mut powers = vec![1.0f64; n as usize + 1];
        for i in 1..=n as usize {
            powers[i] = powers[i - 1] * lambda;
        }
        let head = powers[n as usize] + expected_eps * (n as f64 - 1.0);
        let mut s_total = head;
        for &p in powers.iter().take(n as usize) {
            s_total += p;
        }
        let mut weights_ok = (z[0] - head / s_total).abs() <= 1e-12;
        for i in 1..=n as usize {
            weights_ok &= (z[i] - powers[i - 1] / s_total).abs() <= 1e-12;
        }
        checks.push((
            "weights_closed_form",
            weights_ok,
            format!("z recomputed from lambda = {lambda} at S = {s_total}"),
        ));

        let expected_bound = powers[n as usize] * (1.0 - lambda) + powers[n as usize] * lambda;
        let bound_ok = (bound - expected_bound).abs() <= 1e-12;
        checks.push((
            "bound_algebra",
            bound_ok,
            format!("bound = {bound}, recomputed {expected_bound}"),
        ));
    }

    let power = 0.5f64.powi(n as i32);
    checks.push((
        "bound_dominated",
        bound <= power + 1e-15,
        format!("bound = {bound}, 2^-N = {power}"),
    ));

    // Cache depth is irrelevant for dual verification; the sweep is fresh.
    let lp = TruncatedLp::build(params, &distances, 8)?;
    let report = lp.verify_dual(&z, args.k_verify, args.tol)?;
    checks.push((
        "dual_feasibility",
        report.verdict != Verdict::Violated,
        format!(
            "min slack {:.6e} at degree {}, verdict {}",
            report.min_slack,
            report.argmin_degree,
            verdict_label(report.verdict)
        ),
    ));

    finish_verify(&args, &doc, checks, Some(report))
}

fn finish_verify(
    args: &VerifyArgs,
    doc: &serde_json::Value,
    checks: Vec<(&'static str, bool, String)>,
    report: Option<steinhaus_core::FeasibilityReport>,
) -> Result<(), Failure> {
    let passed = checks.iter().all(|&(_, ok, _)| ok);
    let payload = match args.output.format {
        Format::Json => {
            let value = json!({
                "input": args.input.display().to_string(),
                "space": doc.get("space").cloned().unwrap_or(serde_json::Value::Null),
                "N": doc.get("N").cloned().unwrap_or(serde_json::Value::Null),
                "k_verify": args.k_verify,
                "tol": args.tol,
                "checks": checks
                    .iter()
                    .map(|(name, ok, detail)| json!({"name": name, "passed": ok, "detail": detail}))
                    .collect::<Vec<_>>(),
                "min_slack": report.as_ref().map(|r| r.min_slack),
                "verdict": report.as_ref().map(|r| verdict_label(r.verdict)),
                "passed": passed,
            });
            render_json(&value)
        }
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for (name, ok, detail) in &checks {
                let _ = writeln!(out, "{name},{ok},{}", csv_escape(detail));
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "input     {}", args.input.display());
            for (name, ok, detail) in &checks {
                let _ = writeln!(
                    out,
                    "{name:<22}{}  ({detail})",
                    if *ok { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(out, "overall   {}", if passed { "PASS" } else { "FAIL" });
            out
        }
    };
    emit(&args.output, &payload)?;

    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|&&(_, ok, _)| !ok)
            .map(|&(name, _, _)| name)
            .collect();
        Err(Failure::Verification(format!(
            "certificate failed re-verification: {}",
            failed.join(", ")
        )))
    }
}

fn resolve_family(
    space: Option<SpaceKind>,
    alpha: Option<f64>,
    beta: Option<f64>,
) -> Result<JacobiParams, Failure> {
    match (space, alpha, beta) {
        (Some(s), None, None) => Ok(s.params().jacobi),
        (None, Some(a), Some(b)) => Ok(JacobiParams::new(a, b)?),
        (None, None, None) => Err(Failure::Usage(
            "pass either --space or both --alpha and --beta".into(),
        )),
        _ => Err(Failure::Usage(
            "pass either --space or both --alpha and --beta, not a mixture".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Payload rendering

fn plan_json(
    args: &PipelineArgs,
    constants: &LemmaConstants,
    plan: &steinhaus_core::DistancePlan,
) -> serde_json::Value {
    let params = constants.params();
    json!({
        "space": plan.space().to_string(),
        "alpha": params.alpha(),
        "beta": params.beta(),
        "N": plan.num_distances(),
        "t0": constants.t0(),
        "d0": constants.d0(),
        "lambda": constants.lambda(),
        "epsilon": plan.epsilon(),
        "start_fraction": args.start_fraction,
        "distances": plan.distances(),
        "r_trace": trace_json(plan.r_trace()),
        "caps": {
            "degree_cap": constants.degree_cap(),
            "grid_size": constants.grid_size(),
            "k_star": constants.k_star(),
        },
    })
}

fn certificate_json(
    args: &PipelineArgs,
    constants: &LemmaConstants,
    cert: &BoundCertificate,
    decay: &DecayReport,
) -> serde_json::Value {
    let params = constants.params();
    let report = cert.feasibility();
    json!({
        "space": cert.plan().space().to_string(),
        "alpha": params.alpha(),
        "beta": params.beta(),
        "N": cert.plan().num_distances(),
        "t0": constants.t0(),
        "d0": constants.d0(),
        "lambda": cert.lambda(),
        "grid_lambda": constants.lambda(),
        "epsilon": cert.epsilon(),
        "start_fraction": args.start_fraction,
        "distances": cert.plan().distances(),
        "r_trace": trace_json(cert.plan().r_trace()),
        "z": cert.z(),
        "s_total": cert.s_total(),
        "bound": cert.bound(),
        "two_to_minus_N": cert.two_to_minus_n(),
        "feasibility": {
            "k_verify": report.checked_up_to,
            "min_slack": report.min_slack,
            "argmin_degree": report.argmin_degree,
            "tail_margin": report.tail_margin,
            "verdict": verdict_label(report.verdict),
        },
        "decay": {
            "min_slack": decay.min_slack,
            "argmin_prefix": decay.argmin_prefix,
            "argmin_degree": decay.argmin_degree,
            "checked_up_to": decay.checked_up_to,
            "passed": decay.passed,
        },
        "caps": {
            "degree_cap": constants.degree_cap(),
            "grid_size": constants.grid_size(),
            "k_verify": args.k_verify,
            "k_star": constants.k_star(),
        },
    })
}

fn trace_json(trace: &[steinhaus_core::SpacingStep]) -> Vec<serde_json::Value> {
    trace
        .iter()
        .map(|s| json!({"d": s.d, "k0": s.k0, "u0": s.u0, "r": s.r}))
        .collect()
}

fn plan_csv(plan: &steinhaus_core::DistancePlan) -> String {
    let mut out = String::from("i,d,k0,u0,r\n");
    let trace = plan.r_trace();
    for (i, &d) in plan.distances().iter().enumerate() {
        match trace.get(i) {
            Some(step) => {
                let _ = writeln!(out, "{},{d},{},{},{}", i + 1, step.k0, step.u0, step.r);
            }
            None => {
                let _ = writeln!(out, "{},{d},,,", i + 1);
            }
        }
    }
    out
}

fn plan_human(constants: &LemmaConstants, plan: &steinhaus_core::DistancePlan) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space      {}", plan.space());
    let _ = writeln!(out, "N          {}", plan.num_distances());
    let _ = writeln!(out, "t0         {}", constants.t0());
    let _ = writeln!(out, "d0         {}", constants.d0());
    let _ = writeln!(out, "lambda     {}", constants.lambda());
    let _ = writeln!(out, "epsilon    {}", plan.epsilon());
    let _ = writeln!(out, "distances  {}", join_floats(plan.distances()));
    for step in plan.r_trace() {
        let _ = writeln!(
            out,
            "  r({:.6e}) = {:.6e}  (k0 = {}, u0 = {})",
            step.d, step.r, step.k0, step.u0
        );
    }
    out
}

fn certificate_human(
    constants: &LemmaConstants,
    cert: &BoundCertificate,
    decay: &DecayReport,
) -> String {
    let report = cert.feasibility();
    let mut out = String::new();
    let _ = writeln!(out, "space        {}", cert.plan().space());
    let _ = writeln!(out, "N            {}", cert.plan().num_distances());
    let _ = writeln!(
        out,
        "bound        {}  (2^-N = {})",
        cert.bound(),
        cert.two_to_minus_n()
    );
    let _ = writeln!(
        out,
        "lambda       {}  (grid {})",
        cert.lambda(),
        constants.lambda()
    );
    let _ = writeln!(out, "epsilon      {}", cert.epsilon());
    let _ = writeln!(out, "distances    {}", join_floats(cert.plan().distances()));
    let _ = writeln!(out, "z            {}", join_floats(cert.z()));
    let _ = writeln!(
        out,
        "feasibility  {}  (min slack {:.3e} at degree {}, checked to {}, tail margin {:.3e})",
        verdict_label(report.verdict),
        report.min_slack,
        report.argmin_degree,
        report.checked_up_to,
        report.tail_margin
    );
    let _ = writeln!(
        out,
        "decay        {}  (min slack {:.3e} at prefix {}, degree {})",
        if decay.passed { "pass" } else { "FAIL" },
        decay.min_slack,
        decay.argmin_prefix,
        decay.argmin_degree
    );
    out
}

/// Dual slack of the certificate weights at every degree up to `k_verify`,
/// as plot data.
fn slack_curve_csv(
    params: JacobiParams,
    cert: &BoundCertificate,
    k_verify: u32,
) -> Result<String, Failure> {
    let z = cert.z();
    let mut sweeps = Vec::new();
    for &d in cert.plan().distances() {
        sweeps.push(params.sweep(d.cos())?);
    }
    let mut out = String::from("k,slack\n");
    for k in 0..=k_verify {
        let mut slack = z[0];
        for (i, sweep) in sweeps.iter_mut().enumerate() {
            slack += z[i + 1] * sweep.next().expect("sweep is infinite");
        }
        if k == 0 {
            slack -= 1.0;
        }
        let _ = writeln!(out, "{k},{slack}");
    }
    Ok(out)
}

fn arc_layout_csv(family: &ArcFamily) -> String {
    // The angular half-width of an arc is theta/2 on both circles: on s1 the
    // metric is the angle itself, on rp1 the metric doubles angles and the
    // arc radius is twice as large in metric terms.
    let half_width = family.theta() / 2.0;
    let mut out = String::from("i,center_x,center_y,center_angle,phi_start,phi_end\n");
    for (i, c) in family.centers().iter().enumerate() {
        let angle = 2.0 * i as f64 * family.theta();
        let _ = writeln!(
            out,
            "{i},{},{},{angle},{},{}",
            c[0],
            c[1],
            angle - half_width,
            angle + half_width
        );
    }
    out
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "feasible",
        Verdict::Violated => "violated",
        Verdict::FeasibleUpToCap => "feasible_up_to_cap",
    }
}

fn status_label(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::IterationLimit => "iteration_limit",
    }
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON composition cannot fail");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// JSON field access for `verify`

fn field<'a>(doc: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value, Failure> {
    doc.get(key)
        .ok_or_else(|| Failure::Usage(format!("certificate file is missing the \"{key}\" field")))
}

fn field_str<'a>(doc: &'a serde_json::Value, key: &str) -> Result<&'a str, Failure> {
    field(doc, key)?
        .as_str()
        .ok_or_else(|| Failure::Usage(format!("certificate field \"{key}\" must be a string")))
}

fn field_u64(doc: &serde_json::Value, key: &str) -> Result<u64, Failure> {
    field(doc, key)?
        .as_u64()
        .ok_or_else(|| Failure::Usage(format!("certificate field \"{key}\" must be a nonnegative integer")))
}

fn field_f64(doc: &serde_json::Value, key: &str) -> Result<f64, Failure> {
    field(doc, key)?
        .as_f64()
        .ok_or_else(|| Failure::Usage(format!("certificate field \"{key}\" must be a number")))
}

fn field_f64_array(doc: &serde_json::Value, key: &str) -> Result<Vec<f64>, Failure> {
    let arr = field(doc, key)?
        .as_array()
        .ok_or_else(|| Failure::Usage(format!("certificate field \"{key}\" must be an array")))?;
    arr.iter()
        .map(|v| {
            v.as_f64().ok_or_else(|| {
                Failure::Usage(format!("certificate field \"{key}\" must contain only numbers"))
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Output plumbing

fn emit(output: &OutputArgs, payload: &str) -> Result<(), Failure> {
    match &output.out {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => atomic_write(path, payload),
    }
}

/// Writes via a temp file in the destination directory plus rename, so a
/// crash mid-write never leaves a truncated artifact behind.
fn atomic_write(path: &Path, payload: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(payload.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| Failure::Runtime(format!("i/o failure: {e}")))?;
    Ok(())
}
