//! The `chainwalk` command line.
//!
//! Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::backends::{
    build_contracted, cross_validate, run_statevector, sample, CrossValidationOptions, OutcomeLabels,
    ShotHistogram, SubspaceProgram, SubspaceState,
};
use crate::bench::{self, BenchBackend, BenchRow};
use crate::error::Error;
use crate::format::sig17;
use crate::matchgate::{build_staggered_walk_circuit, walk_step_circuit, MatchgateCircuit};
use crate::numerics::{Mat2, C64};
use crate::qasm_emit::{emit_qasm, EmitOptions};
use crate::scalar_walk::{evolve, Boundary, ChainState, Coin, CoinPreset, ProbabilityRecords, SwapPhase, WalkConfig};
use crate::spin_chain::EmbeddingMap;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "chainwalk", version, about = "Quantum walks on qubit chains and their matchgate circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a walk and write per-step node probabilities.
    Walk(WalkArgs),
    /// Write the walk circuit as OpenQASM 2.0.
    EmitQasm(EmitArgs),
    /// Cross-check all backends on one walk.
    Validate(ValidateArgs),
    /// Time walk steps across a range of chain sizes (CSV).
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoinArg {
    Hadamard,
    Balanced,
    Identity,
}

impl From<CoinArg> for CoinPreset {
    fn from(c: CoinArg) -> Self {
        match c {
            CoinArg::Hadamard => CoinPreset::Hadamard,
            CoinArg::Balanced => CoinPreset::Balanced,
            CoinArg::Identity => CoinPreset::Identity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Reflecting,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Scalar,
    Subspace,
    Statevector,
    Contracted,
}

impl BackendArg {
    fn name(self) -> &'static str {
        match self {
            BackendArg::Scalar => "scalar",
            BackendArg::Subspace => "subspace",
            BackendArg::Statevector => "statevector",
            BackendArg::Contracted => "contracted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapPhaseArg {
    One,
    I,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Json,
    Csv,
}

/// Walk parameters shared by several subcommands.
#[derive(Debug, Args, Default)]
pub struct WalkOptions {
    /// Number of chain nodes (qubits for circuit backends).
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coin preset [default: hadamard].
    #[arg(long, value_enum, conflicts_with = "coin_file")]
    pub coin: Option<CoinArg>,
    /// Custom 2x2 coin as JSON: [[[re,im],[re,im]],[[re,im],[re,im]]].
    #[arg(long)]
    pub coin_file: Option<PathBuf>,
    /// Start node [default: nodes/2].
    #[arg(long, conflicts_with = "start_file")]
    pub start: Option<usize>,
    /// Start amplitudes as JSON: [[re,im], ...], one entry per node.
    #[arg(long)]
    pub start_file: Option<PathBuf>,
    /// JSON object with any of the flags (kebab-case keys); flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub walk: WalkOptions,
    /// [default: reflecting]
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    /// [default: scalar]
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    /// Factor on second-partition swaps. Circuit backends always use i.
    /// [default: one for scalar/contracted]
    #[arg(long, value_enum)]
    pub swap_phase: Option<SwapPhaseArg>,
    /// Measurement shots drawn from the final distribution [default: 0].
    #[arg(long)]
    pub shots: Option<u64>,
    /// Required when shots > 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// [default: json]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[command(flatten)]
    pub walk: WalkOptions,
    /// Emit this circuit (JSON) instead of a walk.
    #[arg(long, conflicts_with_all = ["coin", "coin_file"])]
    pub circuit: Option<PathBuf>,
    /// Append measurement of every qubit.
    #[arg(long)]
    pub measure: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub walk: WalkOptions,
    /// [default: 1e-10]
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Perturb one gate angle to check that deviations are caught.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Smallest d as a power of two [default: 10].
    #[arg(long)]
    pub min_exp: Option<u32>,
    /// Largest d as a power of two [default: 20].
    #[arg(long)]
    pub max_exp: Option<u32>,
    /// Exponent stride [default: 2].
    #[arg(long)]
    pub exp_step: Option<u32>,
    /// Steps per timing [default: 100].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Repetitions, best time kept [default: 3].
    #[arg(long)]
    pub reps: Option<usize>,
    /// Skip the statevector row at d = 12.
    #[arg(long)]
    pub no_statevector: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub nodes: Option<usize>,
    pub steps: Option<usize>,
    pub coin: Option<CoinArg>,
    pub coin_file: Option<PathBuf>,
    pub boundary: Option<BoundaryArg>,
    pub backend: Option<BackendArg>,
    pub swap_phase: Option<SwapPhaseArg>,
    pub start: Option<usize>,
    pub start_file: Option<PathBuf>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub measure: Option<bool>,
    pub tolerance: Option<f64>,
    pub circuit: Option<PathBuf>,
    pub inject_fault: Option<bool>,
    pub min_exp: Option<u32>,
    pub max_exp: Option<u32>,
    pub exp_step: Option<u32>,
    pub reps: Option<usize>,
    pub no_statevector: Option<bool>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Library errors raised while interpreting the request are usage errors.
fn input_err(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime_err(e: Error) -> CliError {
    match e {
        Error::Io(_) | Error::SectorLeak { .. } | Error::Distribution(_) => CliError::Failure(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => serde_json::from_str(&read_input(p)?)
            .map_err(|e| usage(format!("bad config {}: {e}", p.display()))),
    }
}

fn parse_complex_pairs(text: &str, what: &str) -> CliResult<Vec<C64>> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| usage(format!("bad {what}: {e}")))?;
    Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
}

fn load_coin(path: &Path) -> CliResult<Coin> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&read_input(path)?)
        .map_err(|e| usage(format!("bad coin file {}: {e}", path.display())))?;
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(usage("a coin file must hold a 2x2 matrix"));
    }
    let z = |r: usize, c: usize| C64::new(rows[r][c][0], rows[r][c][1]);
    Coin::new(Mat2::new(z(0, 0), z(0, 1), z(1, 0), z(1, 1))).map_err(input_err)
}

/// Walk parameters after merging flags, config and defaults.
struct ResolvedWalk {
    nodes: usize,
    steps: usize,
    coin: Coin,
    start: ChainState,
    start_node: Option<usize>,
}

fn resolve_walk(walk: &WalkOptions, cfg: &ConfigFile) -> CliResult<ResolvedWalk> {
    let nodes = walk
        .nodes
        .or(cfg.nodes)
        .ok_or_else(|| usage("--nodes is required"))?;
    let steps = walk.steps.or(cfg.steps).unwrap_or(0);
    let coin = match (walk.coin, &walk.coin_file) {
        (Some(c), _) => Coin::preset(c.into()),
        (None, Some(p)) => load_coin(p)?,
        (None, None) => match (cfg.coin, &cfg.coin_file) {
            (Some(c), _) => Coin::preset(c.into()),
            (None, Some(p)) => load_coin(p)?,
            (None, None) => Coin::hadamard(),
        },
    };
    let (node, file) = if walk.start.is_some() || walk.start_file.is_some() {
        (walk.start, walk.start_file.clone())
    } else {
        (cfg.start, cfg.start_file.clone())
    };
    let (start, start_node) = match (node, file) {
        (None, Some(p)) => {
            let amps = parse_complex_pairs(&read_input(&p)?, "start file")?;
            if amps.len() != nodes {
                return Err(usage(format!(
                    "start file has {} amplitudes, expected {nodes}",
                    amps.len()
                )));
            }
            (ChainState::new(amps).map_err(input_err)?, None)
        }
        (node, _) => {
            let node = node.unwrap_or(nodes / 2);
            (ChainState::basis(nodes, node).map_err(input_err)?, Some(node))
        }
    };
    Ok(ResolvedWalk {
        nodes,
        steps,
        coin,
        start,
        start_node,
    })
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WalkOutput<'a> {
    schema_version: u32,
    backend: &'static str,
    nodes: usize,
    steps: usize,
    coin: String,
    boundary: &'static str,
    swap_phase: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    probabilities: &'a ProbabilityRecords,
    #[serde(skip_serializing_if = "Option::is_none")]
    histogram: Option<&'a ShotHistogram>,
}

fn run_walk(args: &WalkArgs) -> CliResult<()> {
    let cfg = load_config(args.walk.config.as_deref())?;
    let walk = resolve_walk(&args.walk, &cfg)?;
    let backend = args.backend.or(cfg.backend).unwrap_or(BackendArg::Scalar);
    let boundary = args.boundary.or(cfg.boundary).unwrap_or(BoundaryArg::Reflecting);
    let shots = args.shots.or(cfg.shots).unwrap_or(0);
    let seed = args.seed.or(cfg.seed);
    let format = args.format.or(cfg.format).unwrap_or(FormatArg::Json);
    let output = args.output.clone().or_else(|| cfg.output.clone());
    let circuit_backend = matches!(backend, BackendArg::Subspace | BackendArg::Statevector);
    let swap_phase = match args.swap_phase.or(cfg.swap_phase) {
        Some(SwapPhaseArg::One) if circuit_backend => {
            return Err(usage(format!(
                "the {} backend runs the gate circuit, whose swaps carry the factor i; use --swap-phase i",
                backend.name()
            )))
        }
        Some(p) => p,
        None if circuit_backend => SwapPhaseArg::I,
        None => SwapPhaseArg::One,
    };
    if shots > 0 && seed.is_none() {
        return Err(usage("--seed is required when --shots > 0"));
    }
    if boundary == BoundaryArg::Periodic && backend != BackendArg::Scalar {
        return Err(usage("periodic boundaries are only available on the scalar backend"));
    }
    if walk.nodes % 2 != 0 || walk.nodes < 2 {
        return Err(usage(format!(
            "the staggered walk needs an even number of nodes (at least 2), got {}",
            walk.nodes
        )));
    }

    let config = WalkConfig {
        nodes: walk.nodes,
        coin: walk.coin,
        boundary: match boundary {
            BoundaryArg::Reflecting => Boundary::Reflecting,
            BoundaryArg::Periodic => Boundary::Periodic,
        },
        swap_phase: match swap_phase {
            SwapPhaseArg::One => SwapPhase::ONE,
            SwapPhaseArg::I => SwapPhase::I,
        },
        start: walk.start.clone(),
    };
    config.validate().map_err(input_err)?;
    log::info!(
        "walk backend={} d={} steps={}",
        backend.name(),
        walk.nodes,
        walk.steps
    );

    let mut records = ProbabilityRecords::new();
    let mut labels = OutcomeLabels::Node;
    match backend {
        BackendArg::Scalar => {
            records = evolve(&config, walk.steps, true)
                .map_err(runtime_err)?
                .records
                .unwrap_or_default();
        }
        BackendArg::Subspace => {
            let program = SubspaceProgram::compile(&walk_step_circuit(walk.nodes, &walk.coin).map_err(input_err)?)
                .map_err(runtime_err)?;
            let mut state = SubspaceState::new(&walk.start);
            records.push(state.probabilities());
            for _ in 0..walk.steps {
                program.apply(&mut state).map_err(runtime_err)?;
                records.push(state.probabilities());
            }
        }
        BackendArg::Statevector => {
            let map = EmbeddingMap::new(walk.nodes).map_err(input_err)?;
            let step = walk_step_circuit(walk.nodes, &walk.coin).map_err(input_err)?;
            let mut state = map.embed(&walk.start).map_err(input_err)?;
            records.push(map.project(&state).map_err(runtime_err)?.probabilities());
            for _ in 0..walk.steps {
                state = run_statevector(&step, &state).map_err(runtime_err)?;
                records.push(map.project(&state).map_err(runtime_err)?.probabilities());
            }
        }
        BackendArg::Contracted => {
            let model = build_contracted(&config).map_err(input_err)?;
            labels = OutcomeLabels::Bits(model.qubits());
            let mut reg = model.prepare(&walk.start).map_err(input_err)?;
            records.push(model.distribution(&reg));
            for _ in 0..walk.steps {
                reg = model.step(&reg);
                records.push(model.distribution(&reg));
            }
        }
    }

    let histogram = if shots > 0 {
        let last = records.last().expect("records hold the start row");
        Some(
            sample(last, shots, seed.expect("checked above"))
                .map_err(runtime_err)?
                .with_labels(labels),
        )
    } else {
        None
    };

    let text = match format {
        FormatArg::Json => {
            let out = WalkOutput {
                schema_version: 1,
                backend: backend.name(),
                nodes: walk.nodes,
                steps: walk.steps,
                coin: walk.coin.to_string(),
                boundary: match boundary {
                    BoundaryArg::Reflecting => "reflecting",
                    BoundaryArg::Periodic => "periodic",
                },
                swap_phase: match swap_phase {
                    SwapPhaseArg::One => "one",
                    SwapPhaseArg::I => "i",
                },
                start: walk.start_node,
                probabilities: &records,
                histogram: histogram.as_ref(),
            };
            let mut s = serde_json::to_string_pretty(&out).map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            if let Some(h) = &histogram {
                match &output {
                    Some(p) => {
                        let mut shots_path = p.clone().into_os_string();
                        shots_path.push(".shots.csv");
                        write_output(Some(Path::new(&shots_path)), &h.to_csv())?;
                    }
                    None => {
                        let mut s = records.to_csv();
                        s.push('\n');
                        s.push_str(&h.to_csv());
                        return write_output(None, &s);
                    }
                }
            }
            records.to_csv()
        }
    };
    write_output(output.as_deref(), &text)
}

fn run_emit(args: &EmitArgs) -> CliResult<()> {
    let cfg = load_config(args.walk.config.as_deref())?;
    let measure = args.measure || cfg.measure.unwrap_or(false);
    let output = args.output.clone().or_else(|| cfg.output.clone());
    let circuit = match args.circuit.clone().or_else(|| cfg.circuit.clone()) {
        Some(p) => MatchgateCircuit::from_json(&read_input(&p)?).map_err(input_err)?,
        None => {
            let walk = resolve_walk(&args.walk, &cfg)?;
            build_staggered_walk_circuit(walk.nodes, &walk.coin, walk.steps).map_err(input_err)?
        }
    };
    let opts = EmitOptions {
        measure,
        ..EmitOptions::default()
    };
    let text = emit_qasm(&circuit, &opts).map_err(input_err)?;
    write_output(output.as_deref(), &text)
}

fn run_validate(args: &ValidateArgs) -> CliResult<()> {
    let cfg = load_config(args.walk.config.as_deref())?;
    let walk = resolve_walk(&args.walk, &cfg)?;
    if walk.start_node.is_none() {
        return Err(usage("validate starts from a basis node; use --start"));
    }
    let tolerance = args.tolerance.or(cfg.tolerance).unwrap_or(1e-10);
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(usage("--tolerance must be non-negative"));
    }
    let mut opts = CrossValidationOptions::new(walk.nodes, walk.coin, walk.steps, tolerance);
    opts.start_node = walk.start_node;
    opts.inject_fault = args.inject_fault || cfg.inject_fault.unwrap_or(false);
    let report = cross_validate(&opts).map_err(input_err)?;
    eprint!("{}", report.summary());
    let mut text = report.to_json().map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    let output = args.output.clone().or_else(|| cfg.output.clone());
    write_output(output.as_deref(), &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Failure("cross-validation failed".into()))
    }
}

fn run_bench(args: &BenchArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let min_exp = args.min_exp.or(cfg.min_exp).unwrap_or(10);
    let max_exp = args.max_exp.or(cfg.max_exp).unwrap_or(20);
    let exp_step = args.exp_step.or(cfg.exp_step).unwrap_or(2);
    let steps = args.steps.or(cfg.steps).unwrap_or(100);
    let reps = args.reps.or(cfg.reps).unwrap_or(3);
    let no_sv = args.no_statevector || cfg.no_statevector.unwrap_or(false);
    if min_exp < 1 || max_exp < min_exp || max_exp > 30 || exp_step == 0 {
        return Err(usage("need 1 <= --min-exp <= --max-exp <= 30 and --exp-step >= 1"));
    }
    let coin = Coin::hadamard();
    let mut rows: Vec<BenchRow> = Vec::new();
    for e in (min_exp..=max_exp).step_by(exp_step as usize) {
        let row = bench::time_subspace(1 << e, &coin, steps, reps).map_err(runtime_err)?;
        log::info!("subspace d=2^{e}: {}", sig17(row.total_seconds));
        rows.push(row);
    }
    if !no_sv {
        rows.push(bench::time_statevector(12, &coin, steps, reps).map_err(runtime_err)?);
    }
    let mut text = bench::to_csv(&rows);
    match bench::scaling_slope(&rows, BenchBackend::Subspace) {
        Ok(slope) => {
            text.push_str(&format!("# subspace log-log slope,{}\n", sig17(slope)));
            eprintln!("subspace per-step time ~ d^{}", sig17(slope));
        }
        Err(_) => {
            text.push_str("# subspace log-log slope,unavailable (fewer than two reliable rows)\n");
        }
    }
    if rows.iter().any(|r| !r.reliable) {
        eprintln!("warning: rows with reliable=false are too short to time meaningfully");
    }
    let output = args.output.clone().or_else(|| cfg.output.clone());
    write_output(output.as_deref(), &text)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Walk(a) => run_walk(a),
        Command::EmitQasm(a) => run_emit(a),
        Command::Validate(a) => run_validate(a),
        Command::Bench(a) => run_bench(a),
    }
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main_with_exit_code() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CHAINWALK_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("chainwalk: {}", e.message());
            e.exit_code()
        }
    }
}
