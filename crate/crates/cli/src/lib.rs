//! `lulu` command line: smoothing runs with analysis reports, four-panel
//! plots, seeded property verification and the discrete/continuous
//! consistency experiment.
//!
//! Exit codes: 0 success, 1 property or internal failure, 2 malformed input,
//! 3 invalid parameters, 4 bound verdict failure under `--assert-bounds`,
//! 5 unwritable output.

pub mod io;
pub mod svg;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lulu::discrete::{discrete_lower, discrete_upper, embed_as_step, BoundaryPolicy, Signal};
use lulu::lulu::{Basic, OperatorWord, SmootherConfig, DEFAULT_TOLERANCE};
use lulu::monotonicity::{default_eps, ModulusReport};
use lulu::oracle::{GridOracle, DEFAULT_ENVELOPE_CAP, DEFAULT_MODULUS_CAP};
use lulu::properties::Faults;
use lulu::{PLFunction, Window};
use serde::Serialize;
use thiserror::Error;

use crate::io::{Data, Format};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("bound verdict failed: {0}")]
    BoundFailure(String),
    #[error("cannot write output: {0}")]
    Unwritable(String),
    #[error("property violations found")]
    VerifyFailed,
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed | CliError::Internal(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::InvalidParams(_) => 3,
            CliError::BoundFailure(_) => 4,
            CliError::Unwritable(_) => 5,
        }
    }
}

fn invalid(e: lulu::LuluError) -> CliError {
    match e {
        lulu::LuluError::InvalidParameter(m) => CliError::InvalidParams(m),
        other => CliError::InvalidParams(other.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(name = "lulu", version, about = "LULU smoothing of piecewise-linear functions and sequences")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an operator word and print an analysis report.
    Smooth(SmoothArgs),
    /// Write a four-panel SVG of L, U, LU and UL over the input.
    Plot(PlotArgs),
    /// Check every law on seeded random functions.
    Verify(VerifyArgs),
    /// Compare the continuous smoother on a step embedding with the discrete one.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv-xy")]
    format: Format,
    /// Sample spacing for csv-seq input.
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundaryKind {
    Clamp,
    Reflect,
    ExtendConstant,
}

#[derive(Args, Debug)]
struct SmoothArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Operator word over {L, U}; the rightmost letter is applied first.
    #[arg(long, default_value = "LU")]
    word: String,
    /// Window width for function inputs.
    #[arg(long)]
    delta: Option<f64>,
    /// Window parameter for csv-seq input.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "clamp")]
    boundary: BoundaryKind,
    /// Value outside the sequence for `--boundary extend-constant`.
    #[arg(long, default_value_t = 0.0)]
    fill: f64,
    /// Where to write the smoothed result (same format as the input).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Comparison tolerance.
    #[arg(long, env = "LULU_TOL", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Right offset for μ̂; defaults to δ·1e-6.
    #[arg(long)]
    eps: Option<f64>,
    /// Exit with code 4 if the finite-domain bound verdict fails.
    #[arg(long)]
    assert_bounds: bool,
    /// Include wall-clock runtime in the report.
    #[arg(long)]
    timing: bool,
    /// Cross-check the result against the dense-grid oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    delta: f64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0.1)]
    delta_min: f64,
    #[arg(long, default_value_t = 3.0)]
    delta_max: f64,
    /// Fewest breakpoints per random function (including both ends).
    #[arg(long, default_value_t = 2)]
    breakpoints_min: usize,
    /// Most breakpoints per random function (including both ends).
    #[arg(long, default_value_t = 30)]
    breakpoints_max: usize,
    #[arg(long, default_value_t = 0.2)]
    jump_prob: f64,
    #[arg(long, env = "LULU_TOL", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Directory for counterexample files.
    #[arg(long, default_value = ".")]
    artifact_dir: PathBuf,
    /// Reverse the `L f <= f <= U f` comparison to exercise the failure path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Single-column sequence.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
}

#[derive(Serialize)]
pub struct InputIdentity {
    pub path: String,
    pub format: Format,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Verdicts {
    /// `||f − result|| <= μ̂ + tol`.
    pub interior_bound: bool,
    /// `||f − result|| <= μ̃ + tol`.
    pub finite_domain_bound: bool,
}

#[derive(Serialize)]
pub struct OracleCheck {
    pub grid_step: f64,
    pub samples: usize,
    /// Largest gap between the exact result and the grid result at samples.
    pub result_gap: f64,
    /// Grid modulus of the input, when the grid is under the enumeration cap.
    pub grid_mu: Option<f64>,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputIdentity,
    pub word: String,
    pub reduced: String,
    pub delta: Option<f64>,
    pub n: Option<usize>,
    pub boundary: Option<BoundaryPolicy>,
    pub tolerance: f64,
    pub before: Option<ModulusReport>,
    pub after: Option<ModulusReport>,
    /// Sup-norm distance between input and result.
    pub error: f64,
    pub verdicts: Option<Verdicts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Smooth(a) => smooth(&a),
        Command::Plot(a) => plot(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Experiment(a) => experiment(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lulu: {e}");
            e.exit_code()
        }
    }
}

fn boundary_policy(kind: BoundaryKind, fill: f64) -> Result<BoundaryPolicy, CliError> {
    Ok(match kind {
        BoundaryKind::Clamp => BoundaryPolicy::Clamp,
        BoundaryKind::Reflect => BoundaryPolicy::Reflect,
        BoundaryKind::ExtendConstant if fill.is_finite() => BoundaryPolicy::ExtendConstant(fill),
        BoundaryKind::ExtendConstant => {
            return Err(CliError::InvalidParams("--fill must be finite".into()))
        }
    })
}

fn apply_discrete(word: &OperatorWord, s: &Signal, n: usize, bp: BoundaryPolicy) -> Result<Signal, CliError> {
    let mut cur = s.clone();
    for b in word.letters().iter().rev() {
        cur = match b {
            Basic::L => discrete_lower(&cur, n, bp),
            Basic::U => discrete_upper(&cur, n, bp),
        }
        .map_err(invalid)?;
    }
    Ok(cur)
}

fn oracle_check(f: &PLFunction, result: &PLFunction, word: &OperatorWord, delta: f64) -> Result<OracleCheck, CliError> {
    let h = GridOracle::default_step(f, DEFAULT_ENVELOPE_CAP);
    let o = GridOracle::with_step(f, h).map_err(invalid)?;
    let r = 0.5 * delta;
    let mut g = o.clone();
    for b in word.reduce().factors().iter().rev() {
        g = match b {
            Basic::L => g.grid_lower(r),
            Basic::U => g.grid_upper(r),
        };
    }
    let mut gap: f64 = 0.0;
    for (x, v) in g.xs().iter().zip(g.ys()) {
        gap = gap.max((result.eval(*x).map_err(invalid)? - v).abs());
    }
    let grid_mu = if o.len() <= DEFAULT_MODULUS_CAP {
        Some(o.grid_modulus(delta).map_err(invalid)?)
    } else {
        let coarse = GridOracle::with_step(f, GridOracle::default_step(f, DEFAULT_MODULUS_CAP / 2)).map_err(invalid)?;
        coarse.grid_modulus(delta).ok()
    };
    Ok(OracleCheck {
        grid_step: h,
        samples: o.len(),
        result_gap: gap,
        grid_mu,
    })
}

fn smooth(a: &SmoothArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let word: OperatorWord = a.word.parse().map_err(invalid)?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(CliError::InvalidParams(format!("tolerance must be non-negative, got {}", a.tol)));
    }
    let loaded = io::load(&a.input.input, a.input.format, a.input.spacing)?;
    let identity = InputIdentity {
        path: a.input.input.display().to_string(),
        format: a.input.format,
        sha256: loaded.sha256,
    };

    let (report, output) = match loaded.data {
        Data::Function(f) => {
            let delta = a
                .delta
                .ok_or_else(|| CliError::InvalidParams("--delta is required for function input".into()))?;
            let cfg = SmootherConfig::with_tolerance(delta, a.tol).map_err(invalid)?;
            let eps = a.eps.unwrap_or_else(|| default_eps(delta));
            let reduced = word.reduce();
            let result = reduced.apply(&f, &cfg);
            let before = ModulusReport::compute(&f, delta, eps).map_err(invalid)?;
            let after = ModulusReport::compute(&result, delta, eps).map_err(invalid)?;
            let error = f.sup_norm_diff(&result).map_err(invalid)?;
            let verdicts = Verdicts {
                interior_bound: error <= before.mu_hat + a.tol,
                finite_domain_bound: error <= before.mu_tilde + a.tol,
            };
            let oracle = if a.oracle {
                Some(oracle_check(&f, &result, &word, delta)?)
            } else {
                None
            };
            let output = match a.input.format {
                Format::JsonPl => io::to_json(&result),
                _ => io::to_xy(&result),
            };
            let report = AnalysisReport {
                schema_version: SCHEMA_VERSION,
                input: identity,
                word: word.to_string(),
                reduced: reduced.to_string(),
                delta: Some(delta),
                n: None,
                boundary: None,
                tolerance: a.tol,
                before: Some(before),
                after: Some(after),
                error,
                verdicts: Some(verdicts),
                oracle,
                runtime_ms: None,
            };
            (report, output)
        }
        Data::Sequence(s) => {
            let n = a
                .n
                .ok_or_else(|| CliError::InvalidParams("--n is required for csv-seq input".into()))?;
            let bp = boundary_policy(a.boundary, a.fill)?;
            let result = apply_discrete(&word, &s, n, bp)?;
            let error = s
                .samples()
                .iter()
                .zip(result.samples())
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            let report = AnalysisReport {
                schema_version: SCHEMA_VERSION,
                input: identity,
                word: word.to_string(),
                reduced: word.reduce().to_string(),
                delta: None,
                n: Some(n),
                boundary: Some(bp),
                tolerance: a.tol,
                before: None,
                after: None,
                error,
                verdicts: None,
                oracle: None,
                runtime_ms: None,
            };
            if a.assert_bounds {
                eprintln!("lulu: no bound verdicts for sequence input; --assert-bounds has no effect");
            }
            (report, io::to_seq(&result))
        }
    };
    let mut report = report;
    if a.timing {
        report.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }

    if let Some(path) = &a.output {
        io::write(path, &output)?;
    }
    let json = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    if let Some(path) = &a.report {
        io::write(path, &json)?;
    }
    print!("{json}");

    if a.assert_bounds {
        if let Some(v) = &report.verdicts {
            if !v.finite_domain_bound {
                return Err(CliError::BoundFailure(format!(
                    "error {} exceeds μ̃ {}",
                    report.error,
                    report.before.as_ref().map_or(f64::NAN, |b| b.mu_tilde)
                )));
            }
        }
    }
    Ok(())
}

fn as_function(data: Data) -> PLFunction {
    match data {
        Data::Function(f) => f,
        Data::Sequence(s) => embed_as_step(&s),
    }
}

fn plot(a: &PlotArgs) -> Result<(), CliError> {
    let cfg = SmootherConfig::new(a.delta).map_err(invalid)?;
    let f = as_function(io::load(&a.input.input, a.input.format, a.input.spacing)?.data);
    io::write(&a.output, &svg::render(&f, &cfg))
}

fn run_verify(a: &VerifyArgs) -> Result<(), CliError> {
    if a.breakpoints_min < 2 || a.breakpoints_min > a.breakpoints_max {
        return Err(CliError::InvalidParams(
            "breakpoint range must satisfy 2 <= min <= max".into(),
        ));
    }
    let params = verify::VerifyParams {
        seed: a.seed,
        count: a.count,
        delta_range: (a.delta_min, a.delta_max),
        pieces: (a.breakpoints_min - 1, a.breakpoints_max - 1),
        jump_prob: a.jump_prob,
        tolerance: a.tol,
        faults: Faults {
            negate_bounds: a.inject_fault,
        },
    };
    if verify::run(&params, &a.artifact_dir)? {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

#[derive(Serialize)]
pub struct Consistency {
    pub delta: f64,
    /// Sup-norm gap over the whole domain.
    pub gap: f64,
    /// Gap away from the ends (at least `2n` samples in).
    pub interior_gap: Option<f64>,
}

#[derive(Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub samples: usize,
    pub n: usize,
    pub spacing: f64,
    /// Continuous `L_δ` of the step embedding against the embedded clamped
    /// discrete `L_n`, for `δ = 2n·spacing` and `δ = n·spacing`.
    pub mappings: Vec<Consistency>,
}

fn consistency(s: &Signal, n: usize, delta: f64) -> Result<Consistency, CliError> {
    let cfg = SmootherConfig::new(delta).map_err(invalid)?;
    let continuous = lulu::lulu::lower_smoother(&embed_as_step(s), &cfg);
    let discrete = embed_as_step(&discrete_lower(s, n, BoundaryPolicy::Clamp).map_err(invalid)?);
    let diff = continuous.sub(&discrete).map_err(invalid)?;
    let gap = diff.sup().abs().max(diff.inf().abs());
    let (a, b) = diff.domain();
    let margin = 2.0 * n as f64 * s.spacing();
    let interior_gap = (a + margin < b - margin).then(|| {
        let w = Window::new(a + margin, b - margin).expect("ordered");
        diff.window_sup(&w).abs().max(diff.window_inf(&w).abs())
    });
    Ok(Consistency {
        delta,
        gap,
        interior_gap,
    })
}

fn experiment(a: &ExperimentArgs) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(CliError::InvalidParams("n must be at least 1".into()));
    }
    let s = match io::load(&a.input, Format::CsvSeq, a.spacing)?.data {
        Data::Sequence(s) => s,
        Data::Function(_) => unreachable!("csv-seq loads as a sequence"),
    };
    let h = s.spacing();
    let mappings = vec![
        consistency(&s, a.n, 2.0 * a.n as f64 * h)?,
        consistency(&s, a.n, a.n as f64 * h)?,
    ];
    let report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        samples: s.len(),
        n: a.n,
        spacing: h,
        mappings,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    Ok(())
}
