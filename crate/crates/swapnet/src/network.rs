//! Declarative network descriptions and dispatch to the engines.

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use swapnet_core::closed_form::{
    expected_concurrence, linear_chain, star, star_linear_arms, success_probability_maximal,
};
use swapnet_core::oracle::{OracleOptions, Protocol, MAX_QUBITS};
use swapnet_core::states::{concurrence, entanglement_entropy};
use swapnet_core::{EtaIndex, OutcomeDistribution, SchmidtParameter};

/// Largest analytic/oracle disagreement still counted as agreement.
pub const AGREEMENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Linear { links: u32 },
    Star { arms: u32 },
    StarLinear { arm_chains: Vec<u32> },
}

impl Topology {
    pub fn kind(&self) -> &'static str {
        match self {
            Topology::Linear { .. } => "linear",
            Topology::Star { .. } => "star",
            Topology::StarLinear { .. } => "star_linear",
        }
    }

    /// Elementary pairs consumed, which is also the largest reachable index.
    pub fn total_steps(&self) -> u32 {
        match self {
            Topology::Linear { links } => *links,
            Topology::Star { arms } => *arms,
            Topology::StarLinear { arm_chains } => arm_chains.len() as u32 + arm_chains.iter().sum::<u32>(),
        }
    }

    /// Qubits the oracle needs for the full register.
    pub fn oracle_qubits(&self) -> usize {
        2 * self.total_steps() as usize
    }

    pub fn analytic(&self, sp: SchmidtParameter) -> swapnet_core::Result<OutcomeDistribution> {
        match self {
            Topology::Linear { links } => linear_chain(*links, sp),
            Topology::Star { arms } => star(*arms, sp),
            Topology::StarLinear { arm_chains } => star_linear_arms(arm_chains, sp),
        }
    }

    pub fn protocol(&self) -> swapnet_core::Result<Protocol> {
        match self {
            Topology::Linear { links } => Protocol::linear(*links),
            Topology::Star { arms } => Protocol::star(*arms),
            Topology::StarLinear { arm_chains } => Protocol::star_linear(arm_chains),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Topology::Linear { links } => json!({ "kind": "linear", "links": links }),
            Topology::Star { arms } => json!({ "kind": "star", "arms": arms }),
            Topology::StarLinear { arm_chains } => {
                json!({ "kind": "star_linear", "arms": arm_chains.len(), "arm_chains": arm_chains })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
            Engine::Both => "both",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "analytic" => Some(Engine::Analytic),
            "oracle" => Some(Engine::Oracle),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub topology: Topology,
    pub schmidt: SchmidtParameter,
    pub engine: Engine,
}

impl AnalysisRequest {
    pub fn to_json(&self) -> Value {
        json!({
            "topology": self.topology.to_json(),
            "a_squared": self.schmidt.a_squared(),
            "engine": self.engine.as_str(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("{path}: {reason}")]
    Field { path: String, reason: String },
}

fn field(path: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { path: path.to_owned(), reason: reason.into() }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, ConfigError> {
    let map = v.as_object().ok_or_else(|| field(path, "expected an object"))?;
    if let Some(extra) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        let at = if path == "$" { extra.clone() } else { format!("{path}.{extra}") };
        return Err(field(&at, "unknown field"));
    }
    Ok(map)
}

fn required<'a>(map: &'a Map<String, Value>, path: &str) -> Result<&'a Value, ConfigError> {
    let key = path.rsplit('.').next().unwrap_or(path);
    map.get(key).ok_or_else(|| field(path, "missing field"))
}

fn count(v: &Value, path: &str) -> Result<u32, ConfigError> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| field(path, format!("expected a non-negative integer, got {v}")))
}

fn parse_topology(v: &Value) -> Result<Topology, ConfigError> {
    let kind = v
        .get("kind")
        .ok_or_else(|| field("topology.kind", "missing field"))?
        .as_str()
        .ok_or_else(|| field("topology.kind", "expected a string"))?;
    match kind {
        "linear" => {
            let map = object(v, "topology", &["kind", "links"])?;
            let links = count(required(map, "topology.links")?, "topology.links")?;
            if links < 1 {
                return Err(field("topology.links", format!("links must be ≥ 1, got {links}")));
            }
            Ok(Topology::Linear { links })
        }
        "star" => {
            let map = object(v, "topology", &["kind", "arms"])?;
            let arms = count(required(map, "topology.arms")?, "topology.arms")?;
            if arms < 2 {
                return Err(field("topology.arms", format!("arms must be ≥ 2, got {arms}")));
            }
            Ok(Topology::Star { arms })
        }
        "star_linear" => {
            let map = object(v, "topology", &["kind", "arms", "arm_chains"])?;
            let arms = count(required(map, "topology.arms")?, "topology.arms")?;
            if arms < 2 {
                return Err(field("topology.arms", format!("arms must be ≥ 2, got {arms}")));
            }
            let chains = required(map, "topology.arm_chains")?
                .as_array()
                .ok_or_else(|| field("topology.arm_chains", "expected an array"))?;
            if chains.len() != arms as usize {
                return Err(field(
                    "topology.arm_chains",
                    format!("expected {arms} entries (one per arm), got {}", chains.len()),
                ));
            }
            let arm_chains = chains
                .iter()
                .enumerate()
                .map(|(i, c)| count(c, &format!("topology.arm_chains[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Topology::StarLinear { arm_chains })
        }
        other => Err(field("topology.kind", format!("unknown kind {other:?} (expected linear, star or star_linear)"))),
    }
}

/// Parses and validates the JSON request document.
pub fn parse_config(text: &[u8]) -> Result<AnalysisRequest, ConfigError> {
    let text = std::str::from_utf8(text).map_err(|e| ConfigError::Syntax(format!("not UTF-8: {e}")))?;
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let map = object(&doc, "$", &["topology", "a_squared", "engine"])?;

    let topology = parse_topology(required(map, "topology")?)?;
    let a2_value = required(map, "a_squared")?;
    let a_squared = a2_value.as_f64().ok_or_else(|| field("a_squared", format!("expected a number, got {a2_value}")))?;
    let schmidt = SchmidtParameter::from_a_squared(a_squared)
        .map_err(|_| field("a_squared", format!("must lie in (0, 1], got {a_squared}")))?;
    let engine = match map.get("engine") {
        None => Engine::Analytic,
        Some(v) => v
            .as_str()
            .and_then(Engine::parse)
            .ok_or_else(|| field("engine", format!("expected \"analytic\", \"oracle\" or \"both\", got {v}")))?,
    };
    Ok(AnalysisRequest { topology, schmidt, engine })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzeError {
    #[error("oracle needs {requested} qubits but the limit is {limit}")]
    OracleLimit { requested: usize, limit: usize },
    #[error(transparent)]
    Engine(#[from] swapnet_core::Error),
}

/// Per-index row of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexRow {
    pub m: u32,
    pub probability: f64,
    pub concurrence: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub parties: u32,
    pub analytic: Option<OutcomeDistribution>,
    pub oracle: Option<OutcomeDistribution>,
    /// Largest per-index weight difference when both engines ran.
    pub discrepancy: Option<f64>,
    /// Rows of the analytic distribution if present, otherwise the oracle's.
    pub rows: Vec<IndexRow>,
    pub success_probability: f64,
    pub expected_concurrence: f64,
}

/// Upper bound on oracle registers, from `SWAPNET_ORACLE_MAX_QUBITS` (default 16, never above 16).
pub fn oracle_qubit_limit() -> usize {
    std::env::var("SWAPNET_ORACLE_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(MAX_QUBITS)
        .min(MAX_QUBITS)
}

pub fn rows(d: &OutcomeDistribution, sp: SchmidtParameter) -> Vec<IndexRow> {
    d.iter_desc()
        .map(|(m, probability)| IndexRow {
            m,
            probability,
            concurrence: concurrence(EtaIndex(m), sp),
            entropy: entanglement_entropy(EtaIndex(m), sp),
        })
        .collect()
}

/// Runs the requested engine(s) and attaches entanglement measures.
pub fn analyze(req: &AnalysisRequest, max_qubits: usize) -> Result<AnalysisResult, AnalyzeError> {
    let sp = req.schmidt;
    let analytic = match req.engine {
        Engine::Analytic | Engine::Both => Some(req.topology.analytic(sp)?),
        Engine::Oracle => None,
    };
    let oracle = match req.engine {
        Engine::Oracle | Engine::Both => {
            let requested = req.topology.oracle_qubits();
            if requested > max_qubits {
                return Err(AnalyzeError::OracleLimit { requested, limit: max_qubits });
            }
            let opts = OracleOptions { max_qubits, ..OracleOptions::default() };
            Some(req.topology.protocol()?.distribution(sp, &opts)?)
        }
        Engine::Analytic => None,
    };
    let discrepancy = match (&analytic, &oracle) {
        (Some(a), Some(o)) => Some(a.max_abs_diff(o)),
        _ => None,
    };
    let primary = analytic.as_ref().or(oracle.as_ref()).expect("at least one engine ran");
    Ok(AnalysisResult {
        parties: primary.parties(),
        rows: rows(primary, sp),
        success_probability: success_probability_maximal(primary),
        expected_concurrence: expected_concurrence(primary, sp),
        analytic,
        oracle,
        discrepancy,
    })
}
