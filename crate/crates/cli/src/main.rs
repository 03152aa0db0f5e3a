use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latsym::decreasing::{
    decreasing_rearrangement, laplacian_counterexample, laplacian_counterexample_closed_forms,
};
use latsym::fourier::{
    fourier_rearrange, sum_identity_partial, sum_identity_tail_bound, weighted_failure_evidence,
    FourierParams, DEFAULT_GRID, DEFAULT_N_MAX, DEFAULT_TAIL_TOL,
};
use latsym::symmetric::symmetric_rearrange;
use latsym::verify::{
    all_pass, estimate_constants, run_suite, GeneratorKind, InequalityReport, Suite, TrialConfig,
    DEFAULT_CONSTANT_P,
};
use latsym::{Error, HalfLineSequence, LatticeSequence};
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CERTIFICATION: u8 = 3;

/// Rearrangements on the integer lattice and randomized checks of the
/// inequalities they satisfy.
#[derive(Parser)]
#[command(name = "latsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rearrange a sequence read from a JSON file or stdin.
    Rearrange(RearrangeArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Estimate the concentration and convexity constants.
    Constants(ConstantsArgs),
    /// Reproduce the Laplacian and power-weight counterexamples.
    Counterexample(CounterexampleArgs),
    /// Check the partial sums of Σ 1/(4n²−1)² against π²/8.
    Identity(IdentityArgs),
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Grid size M (even, at least 64).
    #[arg(long, env = "LATSYM_DEFAULT_GRID", default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Output window |n| ≤ n_max.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: usize,
    /// Relative bound on the Parseval residual.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,
}

impl GridArgs {
    fn params(self) -> FourierParams {
        FourierParams {
            grid: self.grid,
            n_max: self.n_max,
            tail_tol: self.tail_tol,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Decreasing,
    Fourier,
    Symmetric,
}

#[derive(Args)]
struct RearrangeArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Sequence JSON; stdin when omitted or `-`.
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance applied to every property with a nonnegative default.
    #[arg(long)]
    tol: Option<f64>,
    /// Per-property tolerance, as `PROPERTY=VALUE`.
    #[arg(long = "tol-for", value_parser = parse_override)]
    tol_for: Vec<(String, f64)>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Hardy exponent in (1, 2]; all of 1.1, 1.5, 2 when omitted.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponents for suites that take one; suite defaults when omitted.
    #[arg(long = "p")]
    p: Vec<f64>,
    /// Fixed generator; cycles through all when omitted.
    #[arg(long)]
    generator: Option<String>,
    #[arg(long, default_value_t = 64)]
    max_support: usize,
    #[arg(long, default_value_t = 1.0)]
    bound: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write one CSV row per trial to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exponents above 2; 3, 4 and 6 when omitted.
    #[arg(long = "p")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    generator: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Height of the two-point input for the power-weight evidence.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Weight exponent for the power-weight evidence.
    #[arg(long, default_value_t = 5.0)]
    weight_exponent: f64,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 1000)]
    n_max: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected PROPERTY=VALUE")?;
    let v: f64 = v.parse().map_err(|e| format!("{v}: {e}"))?;
    Ok((k.to_string(), v))
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TailResidual { .. } | Error::ImaginaryResidue { .. } => EXIT_CERTIFICATION,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn rearrange(args: RearrangeArgs) -> CliResult {
    let text = read_input(args.input.as_deref())?;
    let params = args.grid.params();
    let output = match args.kind {
        Kind::Decreasing => {
            decreasing_rearrangement(&HalfLineSequence::from_json(&text)?).to_json()
        }
        Kind::Fourier => fourier_rearrange(&LatticeSequence::from_json(&text)?, &params)?
            .sequence
            .to_json(),
        Kind::Symmetric => symmetric_rearrange(&LatticeSequence::from_json(&text)?, &params)?
            .sequence
            .to_json(),
    };
    emit(args.out.as_deref(), &output)?;
    Ok(0)
}

fn generator(name: Option<&str>) -> Result<Option<GeneratorKind>, Failure> {
    name.map(|g| g.parse::<GeneratorKind>())
        .transpose()
        .map_err(Failure::from)
}

fn csv_rows(reports: &[InequalityReport]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| usage(e.to_string());
    w.write_record(["suite", "property", "trial", "lhs", "rhs", "margin", "pass"])
        .map_err(fail)?;
    for r in reports {
        for t in &r.trials {
            w.write_record([
                r.suite.to_string(),
                r.property.clone(),
                t.trial.to_string(),
                t.lhs.to_string(),
                t.rhs.to_string(),
                t.margin.to_string(),
                t.pass.to_string(),
            ])
            .map_err(fail)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| usage(e.to_string()))
}

fn verify(args: VerifyArgs) -> CliResult {
    let suite: Suite = args.suite.parse()?;
    let mut tolerances = BTreeMap::new();
    if let Some(t) = args.tol {
        tolerances.insert("*".to_string(), t);
    }
    tolerances.extend(args.tol_for);
    let config = TrialConfig {
        suite,
        trials: args.trials,
        seed: args.seed,
        tolerances,
        generator: generator(args.generator.as_deref())?,
        max_support: args.max_support,
        bound: args.bound,
        params: args.grid.params(),
        alpha: args.alpha,
        p_values: args.p,
        jobs: args.jobs,
    };
    let reports = run_suite(&config)?;
    if let Some(path) = &args.csv {
        emit(Some(path), csv_rows(&reports)?.trim_end())?;
    }
    match args.format {
        Format::Json => emit(
            None,
            &serde_json::to_string_pretty(&reports).map_err(|e| usage(e.to_string()))?,
        )?,
        Format::Csv => emit(None, csv_rows(&reports)?.trim_end())?,
    }
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {} {}: min margin {:?}",
            r.suite, r.property, r.min_margin
        );
    }
    Ok(if all_pass(&reports) { 0 } else { EXIT_FAILURE })
}

fn constants(args: ConstantsArgs) -> CliResult {
    if let Some(p) = args.p.iter().find(|&&p| p <= 2.0 || p.is_nan()) {
        return Err(usage(format!("--p {p}: exponents must exceed 2")));
    }
    let config = TrialConfig {
        trials: args.trials,
        seed: args.seed,
        generator: generator(args.generator.as_deref())?,
        params: args.grid.params(),
        p_values: if args.p.is_empty() {
            DEFAULT_CONSTANT_P.to_vec()
        } else {
            args.p
        },
        jobs: args.jobs,
        ..TrialConfig::new(Suite::Concentration)
    };
    let estimates = estimate_constants(&config)?;
    emit(
        None,
        &serde_json::to_string_pretty(&estimates).map_err(|e| usage(e.to_string()))?,
    )?;
    Ok(0)
}

fn counterexample(args: CounterexampleArgs) -> CliResult {
    let energies = laplacian_counterexample(args.alpha, args.delta)?;
    let closed = laplacian_counterexample_closed_forms(args.alpha, args.delta);
    let evidence = weighted_failure_evidence(args.beta, args.weight_exponent, args.n_max)?;
    let strict = energies.energy_rearranged > energies.energy_u;
    let boundary = args.delta >= args.alpha / 2.0;
    let reproduced = (strict || boundary) && evidence.crossing.is_some();
    let doc = json!({
        "laplacian": {
            "alpha": args.alpha,
            "delta": args.delta,
            "energy_u": energies.energy_u,
            "energy_rearranged": energies.energy_rearranged,
            "closed_form_u": closed.energy_u,
            "closed_form_rearranged": closed.energy_rearranged,
            "rearranged_strictly_larger": strict,
        },
        "weighted": {
            "beta": args.beta,
            "weight_exponent": args.weight_exponent,
            "lhs": evidence.lhs,
            "crossing": evidence.crossing,
            "crossing_partial_sum": evidence.crossing.map(|n| evidence.rhs_partial[n]),
            "final_partial_sum": evidence.rhs_partial.last(),
            "tail_slope": evidence.tail_slope,
        },
        "reproduced": reproduced,
    });
    emit(
        None,
        &serde_json::to_string_pretty(&doc).map_err(|e| usage(e.to_string()))?,
    )?;
    Ok(if reproduced { 0 } else { EXIT_FAILURE })
}

fn identity(args: IdentityArgs) -> CliResult {
    let partial = sum_identity_partial(args.n_max);
    let target = std::f64::consts::PI.powi(2) / 8.0;
    let error = (partial - target).abs();
    let pass = error <= args.tol;
    let doc = json!({
        "n_max": args.n_max,
        "partial_sum": partial,
        "target": target,
        "error": error,
        "tail_bound": sum_identity_tail_bound(args.n_max),
        "pass": pass,
    });
    emit(
        None,
        &serde_json::to_string_pretty(&doc).map_err(|e| usage(e.to_string()))?,
    )?;
    Ok(if pass { 0 } else { EXIT_FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rearrange(a) => rearrange(a),
        Command::Verify(a) => verify(a),
        Command::Constants(a) => constants(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Identity(a) => identity(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("latsym: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
