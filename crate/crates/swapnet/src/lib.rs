//! Configuration, analysis dispatch and reporting on top of `swapnet-core`.

pub mod cli;
pub mod network;
pub mod report;

pub use network::{analyze, parse_config, AnalysisRequest, AnalysisResult, Engine, Topology};
