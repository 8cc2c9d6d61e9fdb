use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::network::{
    analyze, oracle_qubit_limit, parse_config, AnalysisRequest, AnalyzeError, ConfigError, Engine,
    AGREEMENT_TOLERANCE,
};
use crate::report::{analysis_json, comparison_json, comparison_rows, comparison_text, rows_csv, sig12};
use swapnet_core::closed_form::{expected_concurrence, success_probability_maximal};
use swapnet_core::states::{concurrence, entanglement_entropy, normalization};
use swapnet_core::{EtaIndex, SchmidtParameter};

#[derive(Debug, Parser)]
#[command(name = "swapnet", version, about = "Entanglement distribution by swapping partially entangled pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outcome distribution and entanglement measures for one network
    Analyze(AnalyzeArgs),
    /// Run the closed form and the circuit oracle side by side
    Compare(CompareArgs),
    /// Evaluate a statistic over a grid of a^2 values
    Sweep(SweepArgs),
    /// Concurrence and entropy of |eta_m> for m = 0..M
    Measures(MeasuresArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Linear,
    Star,
    #[value(alias = "star-linear")]
    StarLinear,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EngineArg {
    Analytic,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Statistic {
    SuccessProbability,
    ExpectedConcurrence,
    FullDistribution,
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    /// Network family
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Links of a linear chain
    #[arg(long)]
    pub links: Option<u64>,
    /// Arms of a star (or star-linear) network
    #[arg(long)]
    pub arms: Option<u64>,
    /// Extension links per arm, comma separated
    #[arg(long, value_delimiter = ',')]
    pub arm_chains: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON request file; replaces the topology flags
    #[arg(long, conflicts_with_all = ["kind", "links", "arms", "arm_chains", "a_squared", "engine"])]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long)]
    pub a_squared: Option<f64>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, conflicts_with_all = ["kind", "links", "arms", "arm_chains", "a_squared"])]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long)]
    pub a_squared: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: CompareFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long)]
    pub a_squared_start: f64,
    #[arg(long)]
    pub a_squared_end: f64,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, value_enum, default_value = "success_probability")]
    pub statistic: Statistic,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    #[arg(long, required_unless_present = "a", conflicts_with = "a")]
    pub a_squared: Option<f64>,
    /// Schmidt coefficient a itself, as an alternative to --a-squared
    #[arg(long)]
    pub a: Option<f64>,
    /// Largest index M in the table
    #[arg(long, default_value_t = 10)]
    pub max_index: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Limit(String),
    #[error("analytic and oracle disagree: max |diff| = {0:e}")]
    Disagree(f64),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) => 2,
            CliError::Limit(_) => 3,
            CliError::Disagree(_) => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<AnalyzeError> for CliError {
    fn from(e: AnalyzeError) -> Self {
        match e {
            AnalyzeError::OracleLimit { .. } => CliError::Limit(e.to_string()),
            AnalyzeError::Engine(inner) => CliError::Internal(inner.to_string()),
        }
    }
}

/// Writes `content` to stdout, or atomically to `path` (temp file + rename).
fn emit(content: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(e.to_string());
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(content.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn topology_doc(t: &TopologyArgs) -> Result<Value, CliError> {
    let kind = t.kind.ok_or_else(|| CliError::Config("missing --kind (or --config)".into()))?;
    let mut doc = match kind {
        Kind::Linear => json!({ "kind": "linear" }),
        Kind::Star => json!({ "kind": "star" }),
        Kind::StarLinear => json!({ "kind": "star_linear" }),
    };
    if let Some(links) = t.links {
        doc["links"] = json!(links);
    }
    let arms = match (t.arms, &t.arm_chains, kind) {
        (None, Some(chains), Kind::StarLinear) => Some(chains.len() as u64),
        (arms, _, _) => arms,
    };
    if let Some(arms) = arms {
        doc["arms"] = json!(arms);
    }
    if let Some(chains) = &t.arm_chains {
        doc["arm_chains"] = json!(chains);
    }
    Ok(doc)
}

fn inline_request(t: &TopologyArgs, a_squared: Option<f64>, engine: Option<EngineArg>) -> Result<AnalysisRequest, CliError> {
    let a_squared = a_squared.ok_or_else(|| CliError::Config("missing --a-squared".into()))?;
    let mut doc = json!({ "topology": topology_doc(t)?, "a_squared": a_squared });
    if let Some(e) = engine {
        doc["engine"] = json!(match e {
            EngineArg::Analytic => "analytic",
            EngineArg::Oracle => "oracle",
            EngineArg::Both => "both",
        });
    }
    Ok(parse_config(doc.to_string().as_bytes())?)
}

fn file_request(path: &Path) -> Result<AnalysisRequest, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(parse_config(&bytes)?)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let req = match &args.config {
        Some(path) => file_request(path)?,
        None => inline_request(&args.topology, args.a_squared, args.engine)?,
    };
    let result = analyze(&req, oracle_qubit_limit())?;
    let text = match args.format {
        Format::Json => analysis_json(&req, &result),
        Format::Csv => rows_csv(&result.rows),
    };
    emit(&text, args.output.as_deref())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let mut req = match &args.config {
        Some(path) => file_request(path)?,
        None => inline_request(&args.topology, args.a_squared, None)?,
    };
    req.engine = Engine::Both;
    let result = analyze(&req, oracle_qubit_limit())?;
    let (analytic, oracle) = match (&result.analytic, &result.oracle) {
        (Some(a), Some(o)) => (a, o),
        _ => return Err(CliError::Internal("both engines must run".into())),
    };
    let rows = comparison_rows(analytic, oracle);
    let max_diff = result.discrepancy.unwrap_or(0.0);
    let text = match args.format {
        CompareFormat::Text => comparison_text(&rows, max_diff, AGREEMENT_TOLERANCE),
        CompareFormat::Json => comparison_json(&rows, max_diff, AGREEMENT_TOLERANCE),
    };
    emit(&text, args.output.as_deref())?;
    if max_diff <= AGREEMENT_TOLERANCE {
        Ok(())
    } else {
        Err(CliError::Disagree(max_diff))
    }
}

/// `steps` evenly spaced values from `start` to `end` inclusive.
pub fn sweep_grid(start: f64, end: f64, steps: u64) -> Result<Vec<SchmidtParameter>, CliError> {
    let check = |name: &str, v: f64| {
        SchmidtParameter::from_a_squared(v).map_err(|_| CliError::Config(format!("{name} must lie in (0, 1], got {v}")))
    };
    check("--a-squared-start", start)?;
    check("--a-squared-end", end)?;
    if start > end {
        return Err(CliError::Config(format!("--a-squared-start ({start}) must not exceed --a-squared-end ({end})")));
    }
    if steps < 2 {
        return Err(CliError::Config(format!("--steps must be ≥ 2, got {steps}")));
    }
    let span = end - start;
    (0..steps)
        .map(|i| {
            let v = if i + 1 == steps { end } else { start + span * i as f64 / (steps - 1) as f64 };
            check("grid point", v)
        })
        .collect()
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let grid = sweep_grid(args.a_squared_start, args.a_squared_end, args.steps)?;
    let req = inline_request(&args.topology, Some(args.a_squared_end), None)?;
    let topology = &req.topology;

    let values = std::thread::scope(|scope| {
        let handles: Vec<_> =
            grid.iter().map(|&sp| scope.spawn(move || topology.analytic(sp).map(|d| (sp, d)))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker")).collect::<Result<Vec<_>, _>>()
    })
    .map_err(|e| CliError::Internal(e.to_string()))?;

    let mut out = String::new();
    match args.statistic {
        Statistic::FullDistribution => {
            out.push_str("a_squared,m,probability\n");
            for (sp, d) in &values {
                for (m, p) in d.iter_desc() {
                    let _ = writeln!(out, "{},{m},{}", sig12(sp.a_squared()), sig12(p));
                }
            }
        }
        stat => {
            out.push_str("a_squared,value\n");
            for (sp, d) in &values {
                let v = match stat {
                    Statistic::SuccessProbability => success_probability_maximal(d),
                    _ => expected_concurrence(d, *sp),
                };
                let _ = writeln!(out, "{},{}", sig12(sp.a_squared()), sig12(v));
            }
        }
    }
    emit(&out, args.output.as_deref())
}

fn cmd_measures(args: &MeasuresArgs) -> Result<(), CliError> {
    let sp = match (args.a_squared, args.a) {
        (Some(a2), _) => SchmidtParameter::from_a_squared(a2)
            .map_err(|_| CliError::Config(format!("--a-squared must lie in (0, 1], got {a2}")))?,
        (None, Some(a)) => SchmidtParameter::new(a)
            .map_err(|_| CliError::Config(format!("--a must lie in (0, 1], got {a}")))?,
        (None, None) => return Err(CliError::Config("missing --a-squared or --a".into())),
    };
    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("m,normalization,concurrence,entropy\n");
            for m in (0..=args.max_index).rev() {
                let _ = writeln!(
                    out,
                    "{m},{},{},{}",
                    sig12(normalization(m, sp)),
                    sig12(concurrence(EtaIndex(m), sp)),
                    sig12(entanglement_entropy(EtaIndex(m), sp))
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = (0..=args.max_index)
                .rev()
                .map(|m| {
                    json!({
                        "m": m,
                        "normalization": normalization(m, sp),
                        "concurrence": concurrence(EtaIndex(m), sp),
                        "entropy": entanglement_entropy(EtaIndex(m), sp),
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "a_squared": sp.a_squared(), "rows": rows }))
                .expect("serializable");
            s.push('\n');
            s
        }
    };
    emit(&text, args.output.as_deref())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Measures(a) => cmd_measures(a),
    }
}
