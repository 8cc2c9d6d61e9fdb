//! Swap circuits for the network families, executed branch by branch.
//!
//! A protocol is a list of elementary pairs plus a list of swap blocks. Each
//! block CNOTs from its control qubit onto its targets, applies H to the
//! control, measures control and targets, then corrects: Z on `phase_fix`
//! if the control read 1, and X on `flip_fixes[i]` if `targets[i]` read 1.
//! Qubits are addressed logically: pair `k` owns qubits `2k` and `2k + 1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::classify::{classify_schmidt_index, xi_fidelity, FIDELITY_THRESHOLD};
use super::statevector::{enumerate_measurement, prepare_xi, Gate, StateVector, MAX_QUBITS};
use crate::distribution::{Accumulator, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::states::SchmidtParameter;

/// Generic resource used to label branches when the requested parameter
/// makes the family degenerate.
pub const REFERENCE_A_SQUARED: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    /// Pairs are brought in when first touched and measured qubits are
    /// removed after every block, so the live register stays small.
    Sequential,
    /// Every pair is prepared up front, corrections become controlled
    /// gates, and all measurements happen once at the end.
    FullRegister,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub mode: ExecutionMode,
    /// Apply the classically controlled Z/X fixes. Only disabled to check
    /// that they are needed.
    pub corrections: bool,
    pub max_qubits: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { mode: ExecutionMode::Sequential, corrections: true, max_qubits: MAX_QUBITS }
    }
}

impl OracleOptions {
    pub fn full_register() -> Self {
        Self { mode: ExecutionMode::FullRegister, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SwapBlock {
    control: usize,
    targets: Vec<usize>,
    phase_fix: usize,
    flip_fixes: Vec<usize>,
}

impl SwapBlock {
    fn touched(&self) -> impl Iterator<Item = usize> + '_ {
        core::iter::once(self.control)
            .chain(self.targets.iter().copied())
            .chain(core::iter::once(self.phase_fix))
            .chain(self.flip_fixes.iter().copied())
    }

    fn measured(&self) -> impl Iterator<Item = usize> + '_ {
        core::iter::once(self.control).chain(self.targets.iter().copied())
    }

    /// The two-qubit block: `(control, target)` swap, Z on `phase_fix`, X on `flip_fix`.
    fn pair(control: usize, target: usize, phase_fix: usize, flip_fix: usize) -> Self {
        Self { control, targets: vec![target], phase_fix, flip_fixes: vec![flip_fix] }
    }
}

/// One fully resolved measurement history.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolBranch {
    /// Bit `q` is set when logical qubit `q` was measured as 1.
    pub outcome: u64,
    pub probability: f64,
    pub residual: StateVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protocol {
    pair_indices: Vec<u32>,
    blocks: Vec<SwapBlock>,
    candidates: Vec<u32>,
}

fn same_parity_below(total: u32) -> Vec<u32> {
    (total % 2..=total).step_by(2).collect()
}

impl Protocol {
    /// A single swap between `|eta_m>` (qubits 0, 1) and `|eta_p>` (qubits 2, 3).
    pub fn swap(m: u32, p: u32) -> Self {
        let mut candidates = vec![m.abs_diff(p), m + p];
        candidates.dedup();
        Self { pair_indices: vec![m, p], blocks: vec![SwapBlock::pair(1, 2, 0, 3)], candidates }
    }

    /// `x` links swapped left to right at each intermediate node.
    pub fn linear(x: u32) -> Result<Self> {
        if x == 0 {
            return Err(Error::NoLinks);
        }
        let blocks = (0..x as usize - 1)
            .map(|k| SwapBlock::pair(2 * k + 1, 2 * k + 2, 0, 2 * k + 3))
            .collect();
        Ok(Self { pair_indices: vec![1; x as usize], blocks, candidates: same_parity_below(x) })
    }

    /// `y` pairs whose hub halves (odd qubits) are measured jointly; the
    /// peripheral halves (even qubits) are left in a GHZ-like state.
    pub fn star(y: u32) -> Result<Self> {
        Self::star_linear(&vec![0; y as usize])
    }

    /// A star whose arm `k` is then extended by `arm_chains[k]` links, arms
    /// processed in order.
    pub fn star_linear(arm_chains: &[u32]) -> Result<Self> {
        let y = arm_chains.len();
        if y < 2 {
            return Err(Error::TooFewArms(y));
        }
        let mut blocks = vec![SwapBlock {
            control: 1,
            targets: (1..y).map(|k| 2 * k + 1).collect(),
            phase_fix: 0,
            flip_fixes: (1..y).map(|k| 2 * k).collect(),
        }];
        let mut ends: Vec<usize> = (0..y).map(|k| 2 * k).collect();
        let mut next_pair = y;
        for (arm, &links) in arm_chains.iter().enumerate() {
            for _ in 0..links {
                let other = ends[if arm == 0 { 1 } else { 0 }];
                blocks.push(SwapBlock::pair(ends[arm], 2 * next_pair, other, 2 * next_pair + 1));
                ends[arm] = 2 * next_pair + 1;
                next_pair += 1;
            }
        }
        let total = u32::try_from(next_pair).unwrap_or(u32::MAX);
        Ok(Self { pair_indices: vec![1; next_pair], blocks, candidates: same_parity_below(total) })
    }

    /// Qubits in the full register.
    pub fn qubit_count(&self) -> usize {
        2 * self.pair_indices.len()
    }

    /// Number of branches a run expands (before dropping empty ones).
    pub fn branch_count(&self) -> u64 {
        let measured: usize = self.blocks.iter().map(|b| 1 + b.targets.len()).sum();
        1u64 << measured
    }

    pub fn candidates(&self) -> &[u32] {
        &self.candidates
    }

    fn check_size(&self, opts: &OracleOptions) -> Result<()> {
        let limit = opts.max_qubits.min(MAX_QUBITS);
        if self.qubit_count() > limit {
            Err(Error::QubitLimit { requested: self.qubit_count(), limit })
        } else {
            Ok(())
        }
    }

    /// Runs the circuit and returns every non-empty measurement history.
    pub fn branches(&self, sp: SchmidtParameter, opts: &OracleOptions) -> Result<Vec<ProtocolBranch>> {
        self.check_size(opts)?;
        match opts.mode {
            ExecutionMode::Sequential => self.run_sequential(sp, opts.corrections),
            ExecutionMode::FullRegister => self.run_full_register(sp, opts.corrections),
        }
    }

    fn run_sequential(&self, sp: SchmidtParameter, corrections: bool) -> Result<Vec<ProtocolBranch>> {
        let mut present = vec![false; self.pair_indices.len()];
        let mut layout: Vec<usize> = Vec::new();
        let mut live = vec![ProtocolBranch { outcome: 0, probability: 1.0, residual: StateVector::zero(0)? }];

        let introduce = |pair: usize, layout: &mut Vec<usize>, live: &mut Vec<ProtocolBranch>| -> Result<()> {
            let state = prepare_xi(self.pair_indices[pair], 2, sp)?;
            for br in live.iter_mut() {
                br.residual = br.residual.tensor(&state)?;
            }
            layout.extend([2 * pair, 2 * pair + 1]);
            Ok(())
        };
        let position = |layout: &[usize], q: usize| layout.iter().position(|&l| l == q).expect("qubit is live");

        for block in &self.blocks {
            for q in block.touched() {
                if !present[q / 2] {
                    present[q / 2] = true;
                    introduce(q / 2, &mut layout, &mut live)?;
                }
            }
            let control = position(&layout, block.control);
            let mut gates: Vec<Gate> =
                block.targets.iter().map(|&t| Gate::Cnot { control, target: position(&layout, t) }).collect();
            gates.push(Gate::H(control));
            let measured_logical: Vec<usize> = block.measured().collect();
            let measured: Vec<usize> = measured_logical.iter().map(|&q| position(&layout, q)).collect();
            let next_layout: Vec<usize> =
                layout.iter().copied().filter(|q| !measured_logical.contains(q)).collect();
            let phase_fix = position(&next_layout, block.phase_fix);
            let flip_fixes: Vec<usize> = block.flip_fixes.iter().map(|&q| position(&next_layout, q)).collect();

            let mut next = Vec::with_capacity(live.len() << measured.len());
            for mut br in live {
                for &g in &gates {
                    br.residual.apply(g)?;
                }
                for sub in enumerate_measurement(&br.residual, &measured)? {
                    let mut residual = sub.residual;
                    let mut outcome = br.outcome;
                    for (&q, &bit) in measured_logical.iter().zip(&sub.outcome_bits) {
                        if bit {
                            outcome |= 1 << q;
                        }
                    }
                    if corrections {
                        if sub.outcome_bits[0] {
                            residual.apply(Gate::Z(phase_fix))?;
                        }
                        for (&fix, &bit) in flip_fixes.iter().zip(&sub.outcome_bits[1..]) {
                            if bit {
                                residual.apply(Gate::X(fix))?;
                            }
                        }
                    }
                    next.push(ProtocolBranch { outcome, probability: br.probability * sub.probability, residual });
                }
            }
            live = next;
            layout = next_layout;
        }
        for pair in (0..present.len()).filter(|&p| !present[p]) {
            introduce(pair, &mut layout, &mut live)?;
        }
        Ok(live)
    }

    /// Unitary form of the whole protocol on the full register: every
    /// classically controlled fix becomes a CNOT or a controlled-Z (as
    /// H . CNOT . H) driven by the qubit that would have been measured.
    pub fn deferred_circuit(&self, corrections: bool) -> Vec<Gate> {
        let mut gates = Vec::new();
        for block in &self.blocks {
            gates.extend(block.targets.iter().map(|&t| Gate::Cnot { control: block.control, target: t }));
            gates.push(Gate::H(block.control));
            if corrections {
                for (&t, &fix) in block.targets.iter().zip(&block.flip_fixes) {
                    gates.push(Gate::Cnot { control: t, target: fix });
                }
                gates.extend([
                    Gate::H(block.phase_fix),
                    Gate::Cnot { control: block.control, target: block.phase_fix },
                    Gate::H(block.phase_fix),
                ]);
            }
        }
        gates
    }

    /// Every qubit the protocol measures, ascending.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut measured: Vec<usize> = self.blocks.iter().flat_map(|b| b.measured()).collect();
        measured.sort_unstable();
        measured
    }

    /// Initial register: the elementary pairs in order.
    pub fn initial_state(&self, sp: SchmidtParameter) -> Result<StateVector> {
        self.pair_indices
            .iter()
            .try_fold(StateVector::zero(0)?, |acc, &m| acc.tensor(&prepare_xi(m, 2, sp)?))
    }

    fn run_full_register(&self, sp: SchmidtParameter, corrections: bool) -> Result<Vec<ProtocolBranch>> {
        let mut state = self.initial_state(sp)?;
        for g in self.deferred_circuit(corrections) {
            state.apply(g)?;
        }
        let measured = self.measured_qubits();
        Ok(enumerate_measurement(&state, &measured)?
            .into_iter()
            .map(|br| {
                let outcome = measured
                    .iter()
                    .zip(&br.outcome_bits)
                    .filter(|(_, &bit)| bit)
                    .fold(0u64, |acc, (&q, _)| acc | 1 << q);
                ProtocolBranch { outcome, probability: br.probability, residual: br.residual }
            })
            .collect())
    }

    /// Runs the circuit, classifies every branch and aggregates probability
    /// per Schmidt index.
    ///
    /// When the requested parameter makes several candidates indistinguishable
    /// the label comes from the same measurement history at
    /// [`REFERENCE_A_SQUARED`], and the branch must still match that label.
    pub fn distribution(&self, sp: SchmidtParameter, opts: &OracleOptions) -> Result<OutcomeDistribution> {
        let branches = self.branches(sp, opts)?;
        let parties = branches.first().map_or(2, |b| b.residual.qubit_count());
        let mut reference: Option<BTreeMap<u64, StateVector>> = None;
        let reference_sp = SchmidtParameter::from_a_squared(REFERENCE_A_SQUARED)?;
        let mut acc = Accumulator::new(u32::try_from(parties).unwrap_or(u32::MAX));

        for br in branches {
            let c = classify_schmidt_index(&br.residual, &self.candidates, sp)?;
            let index = if c.ambiguous {
                if reference.is_none() {
                    let refs = self.branches(reference_sp, opts)?;
                    reference = Some(refs.into_iter().map(|b| (b.outcome, b.residual)).collect());
                }
                let refs = reference.as_ref().expect("reference run populated");
                let ref_state = refs
                    .get(&br.outcome)
                    .ok_or(Error::Unclassified { index: c.index, fidelity: c.fidelity })?;
                let label = classify_schmidt_index(ref_state, &self.candidates, reference_sp)?;
                let (fidelity, _) = xi_fidelity(&br.residual, label.index, sp);
                if label.ambiguous || fidelity < FIDELITY_THRESHOLD {
                    return Err(Error::Unclassified { index: label.index, fidelity });
                }
                label.index
            } else {
                c.index
            };
            acc.add(index, br.probability);
        }
        Ok(acc.finish())
    }
}
