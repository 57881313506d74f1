//! Command-line front end: protocol runs, sweeps, oracle cross-checks and
//! experiment planning, emitted as JSON or CSV documents.

pub mod format;
mod grid;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use signalscope::hilbert::PureState;
use signalscope::machines::{anchor_states, optimal_fidelity_for_overlap, qubit_pair_from_overlap, MachineKind};
use signalscope::optimizer::{gram_constrained_max, unitary_search, SearchConfig};
use signalscope::signaling::{build_probe, machine_for_excess, plan_experiment, run_protocol, sweep, DEFAULT_THRESHOLD};

pub use format::format_real;
pub use grid::parse_grid;

pub const SCHEMA_VERSION: &str = "1";
/// Oracle agreement required for `oracle` to exit 0.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Hilbert-space dimension of the unitary search (two qubit registers).
pub const ORACLE_DIM: usize = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SIGNALING: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] signalscope::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "signalscope", version, about = "Detect super-quantum cloning and deleting through entropy signaling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Run the protocol for one overlap and one fidelity excess.
    Detect(CommonArgs),
    /// Run the protocol over an overlap grid times an epsilon grid.
    Sweep(CommonArgs),
    /// Compare the cone formula against both brute-force searches.
    Oracle(CommonArgs),
    /// Print the Schmidt parameter, target entropy and filtering probability.
    Plan(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Clone)]
    pub kind: KindArg,
    /// Anchor overlap: a value, a list `a,b,c` or a range `start:stop:step`.
    #[arg(long)]
    pub overlap: String,
    /// Fidelity excess over the quantum optimum, same syntax as --overlap.
    #[arg(long, default_value = "0", conflicts_with = "epsilon_max")]
    pub epsilon: String,
    /// Use the exact machine, epsilon = 1 - F_optimal.
    #[arg(long)]
    pub epsilon_max: bool,
    /// Signaling threshold in bits.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, env = "SIGNALSCOPE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Random restarts per oracle search.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Clone,
    Delete,
}

impl From<KindArg> for MachineKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Clone => MachineKind::Clone,
            KindArg::Delete => MachineKind::Delete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Detect,
    Sweep,
    Oracle,
    Plan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonSpec {
    Values(Vec<f64>),
    /// `1 − F_optimal(s)` for each overlap.
    Max,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub kind: MachineKind,
    pub overlaps: Vec<f64>,
    pub epsilons: EpsilonSpec,
    pub threshold: f64,
    pub seed: u64,
    pub restarts: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, args) = match cli.command {
            CommandArgs::Detect(a) => (Command::Detect, a),
            CommandArgs::Sweep(a) => (Command::Sweep, a),
            CommandArgs::Oracle(a) => (Command::Oracle, a),
            CommandArgs::Plan(a) => (Command::Plan, a),
        };
        let overlaps = parse_grid(&args.overlap)?;
        if let Some(bad) = overlaps.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(CliError::Usage(format!("overlap {bad} outside [0, 1]")));
        }
        let epsilons = if args.epsilon_max {
            EpsilonSpec::Max
        } else {
            let e = parse_grid(&args.epsilon)?;
            if let Some(bad) = e.iter().find(|&&x| x < 0.0) {
                return Err(CliError::Usage(format!("epsilon {bad} is negative")));
            }
            EpsilonSpec::Values(e)
        };
        if !(args.threshold >= 0.0 && args.threshold.is_finite()) {
            return Err(CliError::Usage(format!("threshold {} must be nonnegative", args.threshold)));
        }
        if args.restarts == 0 {
            return Err(CliError::Usage("restarts must be at least 1".into()));
        }
        let single = |what: &str, n: usize| {
            if n == 1 {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{what} takes a single value for this command")))
            }
        };
        match command {
            Command::Detect => {
                single("--overlap", overlaps.len())?;
                if let EpsilonSpec::Values(e) = &epsilons {
                    single("--epsilon", e.len())?;
                }
            }
            Command::Plan => single("--overlap", overlaps.len())?,
            Command::Sweep | Command::Oracle => {}
        }
        Ok(Self {
            command,
            kind: args.kind.into(),
            overlaps,
            epsilons,
            threshold: args.threshold,
            seed: args.seed,
            restarts: args.restarts,
            format: args.format,
            output: args.output,
        })
    }

    /// Parses an argument vector (including the program name).
    pub fn parse_from<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
        Self::from_cli(cli)
    }

    fn epsilons_for(&self, s: f64) -> Vec<f64> {
        match &self.epsilons {
            EpsilonSpec::Values(v) => v.clone(),
            EpsilonSpec::Max => vec![1.0 - optimal_fidelity_for_overlap(s, self.kind)],
        }
    }
}

/// A rendered document plus the process exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub document: String,
}

pub fn run(config: &RunConfig) -> Result<CommandOutput, CliError> {
    match config.command {
        Command::Detect => cmd_detect(config),
        Command::Sweep => cmd_sweep(config),
        Command::Oracle => cmd_oracle(config),
        Command::Plan => cmd_plan(config),
    }
}

fn json_document(mut v: Value) -> Result<String, CliError> {
    format::round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn csv_document(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn header(command: Command, kind: MachineKind) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("kind".into(), json!(kind));
    m.insert("entropy_unit".into(), json!("bits"));
    m
}

pub fn cmd_detect(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let s = config.overlaps[0];
    let epsilon = config.epsilons_for(s)[0];
    let pair = qubit_pair_from_overlap(s)?;
    let blank = PureState::zero();
    let probe = build_probe(&pair, config.kind, &blank)?;
    let machine = machine_for_excess(&pair, config.kind, &blank, epsilon)?.ok_or_else(|| {
        CliError::Usage(format!(
            "epsilon {epsilon} exceeds 1 - F_optimal = {} at overlap {s}",
            format_real(1.0 - optimal_fidelity_for_overlap(s, config.kind))
        ))
    })?;
    let report = run_protocol(&probe, &machine, config.threshold)?;
    let exit_code = if report.signaling { EXIT_SIGNALING } else { EXIT_OK };

    let document = match config.format {
        OutputFormat::Json => {
            let mut doc = header(Command::Detect, config.kind);
            doc.insert("epsilon".into(), json!(epsilon));
            if let Value::Object(fields) = serde_json::to_value(&report)? {
                doc.extend(fields.into_iter().filter(|(k, _)| k != "kind"));
            }
            json_document(Value::Object(doc))?
        }
        OutputFormat::Csv => csv_document(
            &[
                "kind", "s", "epsilon", "theta_prime", "machine_fidelity", "optimal_fidelity", "entropy_before",
                "entropy_after", "delta", "threshold", "signaling", "overlap_before", "overlap_after",
            ],
            &[vec![
                report.kind.to_string(),
                format_real(report.s),
                format_real(epsilon),
                format_real(report.theta_prime),
                format_real(report.machine_fidelity),
                format_real(report.optimal_fidelity),
                format_real(report.entropy_before),
                format_real(report.entropy_after),
                format_real(report.delta),
                format_real(report.threshold),
                report.signaling.to_string(),
                format_real(report.overlap_before),
                format_real(report.overlap_after),
            ]],
        )?,
    };
    Ok(CommandOutput { exit_code, document })
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "kind",
    "s",
    "epsilon",
    "theta_prime",
    "fidelity",
    "optimal_fidelity",
    "entropy_before",
    "entropy_after",
    "delta",
    "signaling",
    "feasible",
];

pub fn cmd_sweep(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let mut records = Vec::new();
    match &config.epsilons {
        EpsilonSpec::Values(eps) => records = sweep(config.kind, &config.overlaps, eps, config.threshold)?,
        EpsilonSpec::Max => {
            for &s in &config.overlaps {
                records.extend(sweep(config.kind, &[s], &config.epsilons_for(s), config.threshold)?);
            }
        }
    }
    let document = match config.format {
        OutputFormat::Json => {
            let mut doc = header(Command::Sweep, config.kind);
            doc.insert("threshold".into(), json!(config.threshold));
            doc.insert("rows".into(), serde_json::to_value(&records)?);
            json_document(Value::Object(doc))?
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        r.kind.to_string(),
                        format_real(r.s),
                        format_real(r.epsilon),
                        format::opt_real(r.theta_prime),
                        format::opt_real(r.fidelity),
                        format_real(r.optimal_fidelity),
                        format_real(r.entropy_before),
                        format::opt_real(r.entropy_after),
                        format::opt_real(r.delta),
                        r.signaling.to_string(),
                        r.feasible.to_string(),
                    ]
                })
                .collect();
            csv_document(&SWEEP_COLUMNS, &rows)?
        }
    };
    Ok(CommandOutput {
        exit_code: EXIT_OK,
        document,
    })
}

#[derive(Debug, Clone, Serialize)]
struct OracleRow {
    s: f64,
    cone_fidelity: f64,
    gram_fidelity: f64,
    unitary_fidelity: f64,
    max_discrepancy: f64,
    search_converged: bool,
}

pub fn cmd_oracle(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let search = SearchConfig {
        restarts: config.restarts,
        ..SearchConfig::with_seed(config.seed)
    };
    let mut rows = Vec::with_capacity(config.overlaps.len());
    for &s in &config.overlaps {
        let pair = qubit_pair_from_overlap(s)?;
        let (inputs, targets) = anchor_states(&pair, config.kind, &PureState::zero())?;
        let cone = optimal_fidelity_for_overlap(s, config.kind);
        let gram = gram_constrained_max(&targets, inputs.overlap, &search)?.fidelity;
        let (unitary, converged) = match unitary_search(&inputs, &targets, ORACLE_DIM, &search) {
            Ok(r) => (r.fidelity, true),
            Err(signalscope::Error::SearchFailed { best }) => (best, false),
            Err(e) => return Err(e.into()),
        };
        let max_discrepancy = (cone - gram).abs().max((cone - unitary).abs()).max((gram - unitary).abs());
        rows.push(OracleRow {
            s,
            cone_fidelity: cone,
            gram_fidelity: gram,
            unitary_fidelity: unitary,
            max_discrepancy,
            search_converged: converged,
        });
    }
    let all_agree = rows.iter().all(|r| r.search_converged && r.max_discrepancy < ORACLE_TOLERANCE);
    let document = match config.format {
        OutputFormat::Json => {
            let mut doc = header(Command::Oracle, config.kind);
            doc.insert("seed".into(), json!(config.seed));
            doc.insert("restarts".into(), json!(config.restarts));
            doc.insert("dim".into(), json!(ORACLE_DIM));
            doc.insert("tolerance".into(), json!(ORACLE_TOLERANCE));
            doc.insert("all_agree".into(), json!(all_agree));
            doc.insert("rows".into(), serde_json::to_value(&rows)?);
            json_document(Value::Object(doc))?
        }
        OutputFormat::Csv => csv_document(
            &["kind", "s", "cone_fidelity", "gram_fidelity", "unitary_fidelity", "max_discrepancy", "search_converged"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        config.kind.to_string(),
                        format_real(r.s),
                        format_real(r.cone_fidelity),
                        format_real(r.gram_fidelity),
                        format_real(r.unitary_fidelity),
                        format_real(r.max_discrepancy),
                        r.search_converged.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(CommandOutput {
        exit_code: if all_agree { EXIT_OK } else { EXIT_ERROR },
        document,
    })
}

pub fn cmd_plan(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let s = config.overlaps[0];
    let plan = plan_experiment(&qubit_pair_from_overlap(s)?, config.kind)?;
    let document = match config.format {
        OutputFormat::Json => {
            let mut doc = header(Command::Plan, config.kind);
            doc.insert("s".into(), json!(plan.s));
            doc.insert("schmidt_a2".into(), json!(plan.schmidt_a2));
            doc.insert("target_entropy".into(), json!(plan.target_entropy));
            doc.insert("filter_success_probability".into(), json!(plan.filter_success_probability));
            json_document(Value::Object(doc))?
        }
        OutputFormat::Csv => csv_document(
            &["kind", "s", "schmidt_a2", "target_entropy", "filter_success_probability"],
            &[vec![
                plan.kind.to_string(),
                format_real(plan.s),
                format_real(plan.schmidt_a2),
                format_real(plan.target_entropy),
                format_real(plan.filter_success_probability),
            ]],
        )?,
    };
    Ok(CommandOutput {
        exit_code: EXIT_OK,
        document,
    })
}
