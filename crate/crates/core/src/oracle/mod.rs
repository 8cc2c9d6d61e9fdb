//! Circuit-level oracle for the analytic engines.
//!
//! Builds the actual swap circuits (CNOT, H, computational-basis measurement,
//! classically controlled Z/X), enumerates every measurement history exactly
//! and sorts the surviving states by Schmidt index.

mod classify;
mod protocol;
mod statevector;

pub use classify::{classify_schmidt_index, xi_fidelity, Classification, FIDELITY_THRESHOLD};
pub use protocol::{ExecutionMode, OracleOptions, Protocol, ProtocolBranch, REFERENCE_A_SQUARED};
pub use statevector::{
    apply_gate, enumerate_measurement, prepare_eta_pairs, prepare_xi, Gate, MeasurementBranch, StateVector,
    MAX_QUBITS, ZERO_BRANCH_THRESHOLD,
};

use crate::distribution::OutcomeDistribution;
use crate::error::Result;
use crate::states::{EtaIndex, SchmidtParameter};

/// Swap of `|eta_m>` with `|eta_p>` through the four-qubit swap block.
pub fn run_swap_protocol(m: EtaIndex, p: EtaIndex, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    Protocol::swap(m.0, p.0).distribution(sp, &OracleOptions::default())
}

/// Linear chain of `x` links, swapped node by node.
pub fn run_linear_protocol(x: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    Protocol::linear(x)?.distribution(sp, &OracleOptions::default())
}

/// Star of `y` arms with one joint measurement at the hub.
pub fn run_star_protocol(y: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    Protocol::star(y)?.distribution(sp, &OracleOptions::default())
}

/// Star followed by per-arm linear extensions.
pub fn run_star_linear_protocol(arm_chains: &[u32], sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    Protocol::star_linear(arm_chains)?.distribution(sp, &OracleOptions::default())
}
