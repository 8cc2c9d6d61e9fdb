use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::SchmidtParameter;

/// Largest register the oracle will allocate.
pub const MAX_QUBITS: usize = 16;

/// Branches lighter than this are dropped instead of renormalized.
pub const ZERO_BRANCH_THRESHOLD: f64 = 1e-14;

/// Dense amplitude vector over `n` qubits.
///
/// Qubit 0 is the leftmost ket label and the most significant bit of the
/// amplitude index, so `|q0 q1 ... q_{n-1}>` sits at index `q0 q1 ... q_{n-1}`
/// read as a binary number.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
}

fn check_size(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        Err(Error::QubitLimit { requested: qubits, limit: MAX_QUBITS })
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|0...0>` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        check_size(qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// Wraps raw amplitudes; `amps.len()` must be `2^qubits`. No normalization is applied.
    pub fn from_amplitudes(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(qubits)?;
        if amps.len() != 1 << qubits {
            return Err(Error::QubitIndex { index: amps.len(), qubits });
        }
        Ok(Self { qubits, amps })
    }

    /// Real amplitudes, convenient for the protocols here which never leave the reals.
    pub fn from_real(qubits: usize, amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(qubits, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Squared norm, accumulated with Neumaier compensation so that a
    /// 2^16-term sum is good to a few ulps.
    pub fn norm_squared(&self) -> f64 {
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for x in self.amps.iter().map(|c| c.norm_sqr()) {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                carry += (sum - t) + x;
            } else {
                carry += (x - t) + sum;
            }
            sum = t;
        }
        sum + carry
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(x, y)| x.conj() * y).sum()
    }

    /// `self (x) other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let qubits = self.qubits + other.qubits;
        check_size(qubits)?;
        let mut amps = Vec::with_capacity(1 << qubits);
        for x in &self.amps {
            amps.extend(other.amps.iter().map(|y| x * y));
        }
        Ok(Self { qubits, amps })
    }

    fn mask(&self, q: usize) -> Result<usize> {
        if q < self.qubits {
            Ok(1 << (self.qubits - 1 - q))
        } else {
            Err(Error::QubitIndex { index: q, qubits: self.qubits })
        }
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        match gate {
            Gate::H(q) => {
                let bit = self.mask(q)?;
                let s = core::f64::consts::FRAC_1_SQRT_2;
                for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
                    let (x, y) = (self.amps[i], self.amps[i | bit]);
                    self.amps[i] = (x + y) * s;
                    self.amps[i | bit] = (x - y) * s;
                }
            }
            Gate::X(q) => {
                let bit = self.mask(q)?;
                for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
                    self.amps.swap(i, i | bit);
                }
            }
            Gate::Z(q) => {
                let bit = self.mask(q)?;
                for (i, c) in self.amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *c = -*c;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::RepeatedQubit);
                }
                let (cbit, tbit) = (self.mask(control)?, self.mask(target)?);
                for i in (0..self.amps.len()).filter(|i| i & cbit != 0 && i & tbit == 0) {
                    self.amps.swap(i, i | tbit);
                }
            }
        }
        Ok(())
    }
}

/// Functional form of [`StateVector::apply`].
pub fn apply_gate(mut s: StateVector, gate: Gate) -> Result<StateVector> {
    s.apply(gate)?;
    Ok(s)
}

/// One classical outcome of a computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    /// Result per measured qubit, in the order the qubits were requested.
    pub outcome_bits: Vec<bool>,
    pub probability: f64,
    /// Normalized post-measurement state of the unmeasured qubits, in their
    /// original relative order.
    pub residual: StateVector,
}

/// Expands every outcome of measuring `qubits`, dropping branches whose
/// probability is below [`ZERO_BRANCH_THRESHOLD`].
pub fn enumerate_measurement(s: &StateVector, qubits: &[usize]) -> Result<Vec<MeasurementBranch>> {
    let masks = qubits.iter().map(|&q| s.mask(q)).collect::<Result<Vec<_>>>()?;
    let measured_all = masks.iter().fold(0usize, |acc, m| acc | m);
    if measured_all.count_ones() as usize != masks.len() {
        return Err(Error::RepeatedQubit);
    }
    let kept: Vec<usize> = (0..s.qubits).map(|q| 1 << (s.qubits - 1 - q)).filter(|m| m & measured_all == 0).collect();
    let rest = kept.len();
    let mut buckets: Vec<Vec<Complex64>> = vec![Vec::new(); 1 << masks.len()];

    for (i, &c) in s.amps.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let key = masks.iter().fold(0usize, |k, &m| (k << 1) | usize::from(i & m != 0));
        let sub = kept.iter().fold(0usize, |k, &m| (k << 1) | usize::from(i & m != 0));
        let bucket = &mut buckets[key];
        if bucket.is_empty() {
            bucket.resize(1 << rest, Complex64::new(0.0, 0.0));
        }
        bucket[sub] = c;
    }

    let total = s.norm_squared();
    let mut branches = Vec::new();
    for (key, amps) in buckets.into_iter().enumerate() {
        let weight: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let probability = weight / total;
        if amps.is_empty() || probability < ZERO_BRANCH_THRESHOLD {
            continue;
        }
        let scale = 1.0 / libm::sqrt(weight);
        let amps = amps.into_iter().map(|c| c * scale).collect();
        let outcome_bits = (0..masks.len()).map(|j| key >> (masks.len() - 1 - j) & 1 == 1).collect();
        branches.push(MeasurementBranch {
            outcome_bits,
            probability,
            residual: StateVector { qubits: rest, amps },
        });
    }
    Ok(branches)
}

/// Amplitudes `(a^m, b^m) / norm` by direct powers; independent of the
/// log-space evaluation used by the analytic engines.
pub(crate) fn direct_amplitudes(m: u32, sp: SchmidtParameter) -> (f64, f64) {
    let exp = i32::try_from(m).unwrap_or(i32::MAX);
    let (x, y) = (libm::pow(sp.a(), f64::from(exp)), libm::pow(sp.b(), f64::from(exp)));
    let norm = libm::sqrt(x * x + y * y);
    (x / norm, y / norm)
}

/// `(a^m |0...0> + b^m |1...1>) / n_m` on `parties` qubits.
pub fn prepare_xi(m: u32, parties: usize, sp: SchmidtParameter) -> Result<StateVector> {
    let mut s = StateVector::zero(parties)?;
    let (x, y) = direct_amplitudes(m, sp);
    let last = s.amps.len() - 1;
    s.amps[0] = Complex64::new(x, 0.0);
    s.amps[last] = Complex64::new(y, 0.0);
    Ok(s)
}

/// `k` copies of `a|00> + b|11>`, pairs laid out on qubits `(0,1), (2,3), ...`.
pub fn prepare_eta_pairs(k: usize, sp: SchmidtParameter) -> Result<StateVector> {
    check_size(2 * k)?;
    let pair = prepare_xi(1, 2, sp)?;
    (0..k).try_fold(StateVector::zero(0)?, |acc, _| acc.tensor(&pair))
}
