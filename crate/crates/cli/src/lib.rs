//! Command-line front end. `run` parses arguments, dispatches to the
//! subcommand and returns the process exit code: 0 on success, 1 on a
//! domain or I/O error, 2 on a usage error. Errors are written to the
//! error stream as `{"error": kind, "message": ...}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use witnesskit::analysis::{
    classify, expectation, mc_error_study, simulate_measurement, upb_noise_threshold,
    ErrorStudyConfig, MaxErrorSummary, OptimalEpsilon, QuadraticFit, ShotEstimate, WitnessReport,
};
use witnesskit::decomp::{
    generalization_counts, generic_setting_decomposition, onp_for_pure_pt, ons_for_pure_pt,
    settings_lower_bound, upb_identity_substitute, upb_onp_decomposition, upb_onp_settings,
    upb_onp_target, upb_witness_pseudomixture, upb_witness_settings, verify_decomposition,
    Decomposition, GeneralizationCounts, SettingDecomposition, SettingsLowerBound, VerifyReport,
};
use witnesskit::opalg::serial::MatrixRecord;
use witnesskit::opalg::{trace_product, BipartiteDims, ComplexMatrix, Ket};
use witnesskit::states::{BipartiteState, StateSpec};
use witnesskit::witness::{
    optimize_epsilon, optimize_epsilon_ratio, shifted_witness, tau_bound, upb_edge_witness,
    upb_prewitness, witness_from_npt, SeeSawConfig, Witness, WitnessKind,
};
use witnesskit::{rng, Error};

pub const THREADS_ENV: &str = "WITNESSKIT_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Domain(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Machine-readable error written to the error stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
    /// Only meaningful for `mc-study`, whose primary output is CSV anyway.
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "witnesskit",
    version,
    about = "Entanglement witnesses and local measurement decompositions"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output here; a one-line summary goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Decompose a witness into product projectors or measurement settings.
    Decompose(DecomposeArgs),
    /// Check a decomposition against its target operator.
    Verify(VerifyArgs),
    /// Evaluate a witness on a state and classify the result.
    Analyze(AnalyzeArgs),
    /// Simulate finite-shot measurement of a decomposition on a state.
    Measure(MeasureArgs),
    /// Monte Carlo error rate of shifted witnesses on noisy states.
    McStudy(McStudyArgs),
    /// Edge witness of the tiles UPB state with both decompositions.
    Upb(UpbArgs),
    /// Setting and projector counts for N x M systems.
    Bounds(BoundsArgs),
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// Witness from the minimal eigenvector of the partial transpose.
    Construct {
        #[arg(long)]
        state: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Edge witness of the tiles UPB state; without `--epsilon` the prewitness.
    Upb {
        #[arg(long)]
        epsilon: Option<EpsilonChoice>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// `W - epsilon * 1`.
    Shift {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// Minimum of `<e,f|W|e,f>` (or of a ratio) over product vectors.
    Epsilon {
        #[arg(long, alias = "witness")]
        operator: PathBuf,
        #[arg(long)]
        denominator: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Separability threshold for noise radius `d`.
    Tau {
        #[arg(long)]
        d: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Onp,
    Ons,
    Generic,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    witness: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    decomposition: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    state: String,
    /// Noise radius for the threshold; defaults to the `d` of a form1 state.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long)]
    decomposition: PathBuf,
    #[arg(long)]
    state: String,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct McStudyArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<f64>,
    /// `start:stop:step`, inclusive.
    #[arg(long)]
    eps: String,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 50)]
    p_bins: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct UpbArgs {
    #[arg(long)]
    epsilon: EpsilonChoice,
    #[arg(long, default_value = "auto")]
    epsilon_prime: EpsilonChoice,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Also bound the settings needed for this operator.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Declare the operator's eigenvector of full Schmidt rank.
    #[arg(long, requires = "witness")]
    full_schmidt: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EpsilonChoice {
    Auto,
    Value(f64),
}

impl std::str::FromStr for EpsilonChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(EpsilonChoice::Auto);
        }
        s.parse::<f64>()
            .map(EpsilonChoice::Value)
            .map_err(|_| format!("expected `auto` or a number, found `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonSource {
    Optimized,
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauReport {
    pub d: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub value: f64,
    pub e: Ket,
    pub f: Ket,
    pub restarts: usize,
    pub converged: bool,
    pub seed: u64,
    pub ratio: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub estimate: ShotEstimate,
    /// `Tr(Xρ)` for the reconstructed operator.
    pub exact: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n_rows: usize,
    pub summaries: Vec<MaxErrorSummary>,
    pub optimal: Vec<OptimalEpsilon>,
    pub fit: Option<QuadraticFit>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpbDecompositionReport {
    pub decomposition: Decomposition,
    pub settings: SettingDecomposition,
    pub verify: VerifyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpbReport {
    pub epsilon: f64,
    pub epsilon_source: EpsilonSource,
    pub epsilon_prime: f64,
    pub epsilon_prime_source: EpsilonSource,
    pub seed: Option<u64>,
    pub restarts: usize,
    /// `W = P - ε·1` as ten weighted product projectors.
    pub witness_decomposition: UpbDecompositionReport,
    /// `W̄ - ε'·Σ` as nine weighted product projectors.
    pub onp_decomposition: UpbDecompositionReport,
    /// Smallest detected mixing weight of the UPB state with white noise.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(flatten)]
    pub counts: GeneralizationCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<SettingsLowerBound>,
}

/// Serialized primary output plus the line printed when it goes to a file.
struct Emit {
    compact: String,
    pretty: String,
    summary: String,
}

fn emit<T: Serialize>(value: &T, summary: String) -> Emit {
    Emit {
        compact: serde_json::to_string(value).expect("report serialization"),
        pretty: serde_json::to_string_pretty(value).expect("report serialization"),
        summary,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            return report_error(&CliError::Usage(e.render().to_string()), err);
        }
    };
    match configure_threads().and_then(|_| dispatch(&cli, out)) {
        Ok(()) => 0,
        Err(e) => report_error(&e, err),
    }
}

fn report_error(e: &CliError, err: &mut dyn Write) -> i32 {
    let rep = ErrorReport {
        error: e.kind().into(),
        message: e.message().trim_end().into(),
    };
    let _ = writeln!(
        err,
        "{}",
        serde_json::to_string(&rep).expect("error serialization")
    );
    e.exit_code()
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::McStudy(_)) {
        return Err(CliError::Usage(
            "--format csv is only available for mc-study".into(),
        ));
    }
    let result = match &cli.command {
        Command::Witness(cmd) => witness_cmd(cmd)?,
        Command::Decompose(a) => decompose_cmd(a)?,
        Command::Verify(a) => verify_cmd(a)?,
        Command::Analyze(a) => analyze_cmd(a)?,
        Command::Measure(a) => measure_cmd(a)?,
        Command::McStudy(a) => return mc_study_cmd(a, cli, out),
        Command::Upb(a) => upb_cmd(a)?,
        Command::Bounds(a) => bounds_cmd(a)?,
    };
    let body = match cli.format {
        Format::Pretty => &result.pretty,
        _ => &result.compact,
    };
    match &cli.out {
        Some(path) => {
            write_file(path, &format!("{body}\n"))?;
            writeln!(out, "{} -> {}", result.summary, path.display()).map_err(io_err)
        }
        None => writeln!(out, "{body}").map_err(io_err),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_witness(path: &Path) -> CliResult<Witness> {
    Ok(Witness::from_json(&read_file(path)?)?)
}

/// Any file carrying the matrix fields, witness files included.
fn read_operator(path: &Path) -> CliResult<(ComplexMatrix, BipartiteDims)> {
    let rec: MatrixRecord = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dims = rec
        .bipartite_dims()?
        .ok_or_else(|| Error::Parse(format!("{}: operator file lacks `dims`", path.display())))?;
    Ok((rec.matrix()?, dims))
}

fn read_decomposition(path: &Path) -> CliResult<Decomposition> {
    Ok(Decomposition::from_json(&read_file(path)?)?)
}

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Usage(format!("--seed is required for {what}")))
}

fn parse_state(spec: &str) -> CliResult<StateSpec> {
    Ok(spec.parse::<StateSpec>()?)
}

fn build_state(spec: &StateSpec, seed: Option<u64>) -> CliResult<BipartiteState> {
    if matches!(spec, StateSpec::Form1 { d, .. } if *d > 0.0) && seed.is_none() {
        return Err(CliError::Usage(
            "--seed is required for noisy form1 states".into(),
        ));
    }
    Ok(spec.build(seed)?)
}

fn witness_cmd(cmd: &WitnessCommand) -> CliResult<Emit> {
    match cmd {
        WitnessCommand::Construct { state, seed } => {
            let w = witness_from_npt(&build_state(&parse_state(state)?, *seed)?)?;
            Ok(emit(
                &w.record(),
                format!("{} witness on {}", kind_name(w.kind), w.dims),
            ))
        }
        WitnessCommand::Upb {
            epsilon,
            restarts,
            seed,
        } => {
            let eps = match epsilon {
                None => 0.0,
                Some(EpsilonChoice::Value(v)) => *v,
                Some(EpsilonChoice::Auto) => {
                    let seed = require_seed(*seed, "--epsilon auto")?;
                    upb_epsilon(*restarts, seed)?
                }
            };
            let w = upb_edge_witness(eps)?;
            Ok(emit(
                &w.record(),
                format!("UPB {} witness, epsilon {eps}", kind_name(w.kind)),
            ))
        }
        WitnessCommand::Shift { witness, epsilon } => {
            let w = shifted_witness(&read_witness(witness)?, *epsilon)?;
            Ok(emit(
                &w.record(),
                format!("shifted witness, epsilon {epsilon}"),
            ))
        }
        WitnessCommand::Epsilon {
            operator,
            denominator,
            restarts,
            seed,
        } => {
            let seed = require_seed(*seed, "witness epsilon")?;
            let (op, dims) = read_operator(operator)?;
            let config = SeeSawConfig::with_restarts(*restarts);
            let res = match denominator {
                Some(path) => {
                    let (den, den_dims) = read_operator(path)?;
                    if den_dims != dims {
                        return Err(Error::DimensionMismatch {
                            expected: dims.total(),
                            found: den_dims.total(),
                        }
                        .into());
                    }
                    optimize_epsilon_ratio(&op, &den, dims, config, seed)?
                }
                None => optimize_epsilon(&op, dims, config, seed)?,
            };
            let rep = EpsilonReport {
                value: res.value,
                e: res.argmin.e,
                f: res.argmin.f,
                restarts: res.restarts_used,
                converged: res.converged,
                seed,
                ratio: denominator.is_some(),
            };
            Ok(emit(&rep, format!("product minimum {:.6}", rep.value)))
        }
        WitnessCommand::Tau { d } => {
            let rep = TauReport {
                d: *d,
                tau: tau_bound(*d)?,
            };
            Ok(emit(&rep, format!("tau({}) = {:.6}", rep.d, rep.tau)))
        }
    }
}

fn kind_name(kind: WitnessKind) -> &'static str {
    match kind {
        WitnessKind::NptEigvec => "npt_eigvec",
        WitnessKind::Edge => "edge",
        WitnessKind::Shifted => "shifted",
        WitnessKind::Prewitness => "prewitness",
    }
}

fn upb_epsilon(restarts: usize, seed: u64) -> CliResult<f64> {
    let config = SeeSawConfig::with_restarts(restarts);
    Ok(optimize_epsilon(&upb_prewitness(), BipartiteDims::qutrits(), config, seed)?.value)
}

fn upb_epsilon_prime(restarts: usize, seed: u64) -> CliResult<f64> {
    let config = SeeSawConfig::with_restarts(restarts);
    let res = optimize_epsilon_ratio(
        &upb_prewitness(),
        &upb_identity_substitute(),
        BipartiteDims::qutrits(),
        config,
        seed,
    )?;
    Ok(res.value)
}

/// The UPB edge witness this operator equals, if any.
fn as_upb_witness(w: &Witness) -> Option<f64> {
    if w.dims != BipartiteDims::qutrits()
        || !matches!(w.kind, WitnessKind::Edge | WitnessKind::Prewitness)
    {
        return None;
    }
    let eps = w.provenance.epsilon.unwrap_or(0.0);
    let reference = upb_edge_witness(eps).ok()?;
    (reference.op.max_abs_diff(&w.op) <= 1e-10).then_some(eps)
}

fn decompose_cmd(a: &DecomposeArgs) -> CliResult<Emit> {
    let w = read_witness(&a.witness)?;
    let upb = as_upb_witness(&w);
    let d: Decomposition = match (a.mode, upb) {
        (Mode::Onp, Some(eps)) => upb_witness_pseudomixture(eps).into(),
        (Mode::Ons, Some(eps)) => upb_witness_settings(eps).into(),
        (Mode::Onp, None) => onp_for_pure_pt(&w.op)?.into(),
        (Mode::Ons, None) => ons_for_pure_pt(&w.op)?.into(),
        (Mode::Generic, _) => generic_setting_decomposition(&w.op, w.dims)?.into(),
    };
    let summary = match &d {
        Decomposition::Pseudo(p) => format!("{} product projectors", p.n_terms()),
        Decomposition::Settings(s) => format!("{} measurement settings", s.n_settings()),
    };
    Ok(emit(&d, summary))
}

fn verify_cmd(a: &VerifyArgs) -> CliResult<Emit> {
    let (target, _) = read_operator(&a.target)?;
    let d = read_decomposition(&a.decomposition)?;
    let rep = verify_decomposition(&target, &d, a.tol);
    let summary = format!(
        "error {:.3e}, {}",
        rep.max_error,
        if rep.within_tolerance {
            "within tolerance"
        } else {
            "NOT within tolerance"
        }
    );
    Ok(emit(&rep, summary))
}

fn analyze_cmd(a: &AnalyzeArgs) -> CliResult<Emit> {
    let w = read_witness(&a.witness)?;
    let spec = parse_state(&a.state)?;
    let state = build_state(&spec, a.seed)?;
    let d = a.d.unwrap_or(match spec {
        StateSpec::Form1 { d, .. } => d,
        _ => 0.0,
    });
    let value = expectation(&w, &state)?;
    let mut rep: WitnessReport = classify(&w, value, d);
    if let (StateSpec::Form1 { .. }, Some((x, y))) = (&spec, spec.schmidt_pair()) {
        if x > 0.0 && y > 0.0 && w.dims == BipartiteDims::qubits() {
            rep = rep.with_p_estimate(x, y)?;
        }
    }
    let verdict = serde_json::to_value(rep.verdict).expect("verdict serialization");
    let summary = format!(
        "Tr(W rho) = {:.6}, {}",
        rep.expectation,
        verdict.as_str().unwrap_or("")
    );
    Ok(emit(&rep, summary))
}

fn measure_cmd(a: &MeasureArgs) -> CliResult<Emit> {
    let seed = require_seed(a.seed, "measure")?;
    if a.shots < 1 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let sd = match read_decomposition(&a.decomposition)? {
        Decomposition::Pseudo(p) => p.to_settings(),
        Decomposition::Settings(s) => s,
    };
    let state = build_state(&parse_state(&a.state)?, Some(seed))?;
    let estimate = simulate_measurement(&sd, &state, a.shots, &mut rng::stream(seed, 1))?;
    let exact = trace_product(&sd.reconstruct(), state.rho())?;
    let rep = MeasureReport {
        estimate,
        exact,
        seed,
    };
    let summary = format!(
        "{:.6} +/- {:.6} (exact {:.6})",
        estimate.mean, estimate.std_error, exact
    );
    Ok(emit(&rep, summary))
}

/// Inclusive grid `start, start+step, ...`, each value rounded to 1e-12 so
/// that `0:0.1:0.005` yields 0.005 rather than 0.005000000000000001.
pub fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| format!("bad grid `{spec}`, expected start:stop:step"))?;
    let [start, stop, step] = nums[..] else {
        return Err(format!("bad grid `{spec}`, expected start:stop:step"));
    };
    if [start, stop, step].iter().any(|x| !x.is_finite()) || step <= 0.0 || stop < start {
        return Err(format!(
            "bad grid `{spec}`, need step > 0 and stop >= start"
        ));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn mc_study_cmd(a: &McStudyArgs, cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let seed = require_seed(a.seed, "mc-study")?;
    let epsilon_grid = parse_grid(&a.eps).map_err(CliError::Usage)?;
    let study = mc_error_study(&ErrorStudyConfig {
        d_values: a.d.clone(),
        epsilon_grid,
        n_samples: a.samples,
        p_bins: a.p_bins,
        seed,
    })?;
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in &study.rows {
        wtr.serialize(row)
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let csv_bytes = wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let Some(path) = &cli.out else {
        return out.write_all(&csv_bytes).map_err(io_err);
    };
    fs::write(path, &csv_bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let summary = McSummary {
        n_rows: study.rows.len(),
        summaries: study.summaries,
        optimal: study.optimal,
        fit: study.fit,
        seed,
    };
    let body = match cli.format {
        Format::Pretty => serde_json::to_string_pretty(&summary),
        _ => serde_json::to_string(&summary),
    }
    .expect("summary serialization");
    writeln!(out, "{body}").map_err(io_err)
}

fn upb_cmd(a: &UpbArgs) -> CliResult<Emit> {
    let needs_seed = a.epsilon == EpsilonChoice::Auto || a.epsilon_prime == EpsilonChoice::Auto;
    let seed = if needs_seed {
        Some(require_seed(a.seed, "--epsilon auto")?)
    } else {
        a.seed
    };
    let resolve = |choice: EpsilonChoice,
                   auto: &dyn Fn(usize, u64) -> CliResult<f64>|
     -> CliResult<(f64, EpsilonSource)> {
        match choice {
            EpsilonChoice::Value(v) => Ok((v, EpsilonSource::Given)),
            EpsilonChoice::Auto => Ok((
                auto(a.restarts, seed.expect("seed checked above"))?,
                EpsilonSource::Optimized,
            )),
        }
    };
    let (epsilon, epsilon_source) = resolve(a.epsilon, &upb_epsilon)?;
    let (epsilon_prime, epsilon_prime_source) = resolve(a.epsilon_prime, &upb_epsilon_prime)?;
    let threshold = upb_noise_threshold(epsilon)?;

    let witness = upb_edge_witness(epsilon)?;
    let ten: Decomposition = upb_witness_pseudomixture(epsilon).into();
    let ten = UpbDecompositionReport {
        verify: verify_decomposition(&witness.op, &ten, 1e-10),
        decomposition: ten,
        settings: upb_witness_settings(epsilon),
    };
    let nine: Decomposition = upb_onp_decomposition(epsilon_prime).into();
    let nine = UpbDecompositionReport {
        verify: verify_decomposition(&upb_onp_target(epsilon_prime), &nine, 1e-10),
        decomposition: nine,
        settings: upb_onp_settings(epsilon_prime),
    };
    let summary = format!(
        "epsilon {epsilon:.5}, epsilon' {epsilon_prime:.5}, {}/{} and {}/{} projectors/settings, threshold {threshold:.5}",
        ten.verify.n_terms, ten.verify.n_settings, nine.verify.n_terms, nine.verify.n_settings
    );
    let rep = UpbReport {
        epsilon,
        epsilon_source,
        epsilon_prime,
        epsilon_prime_source,
        seed,
        restarts: a.restarts,
        witness_decomposition: ten,
        onp_decomposition: nine,
        threshold,
    };
    Ok(emit(&rep, summary))
}

fn bounds_cmd(a: &BoundsArgs) -> CliResult<Emit> {
    let counts = generalization_counts(a.n, a.m)?;
    let lower_bound = match &a.witness {
        Some(path) => {
            let (op, dims) = read_operator(path)?;
            Some(settings_lower_bound(&op, dims, a.full_schmidt)?)
        }
        None => None,
    };
    let mut summary = format!(
        "{}x{}: projectors {}..{}, settings {}..{}",
        counts.n, counts.m, counts.onp_lower, counts.onp_upper, counts.ons_lower, counts.ons_upper
    );
    if let Some(lb) = &lower_bound {
        summary.push_str(&format!(", operator needs at least {} settings", lb.value));
    }
    Ok(emit(
        &BoundsReport {
            counts,
            lower_bound,
        },
        summary,
    ))
}
