use alloc::vec::Vec;

use super::statevector::{direct_amplitudes, StateVector};
use crate::error::{Error, Result};
use crate::states::SchmidtParameter;

/// A residual must overlap its family member at least this well.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub index: u32,
    pub fidelity: f64,
    /// The residual matched `X^(n) |xi_m>`, i.e. the roles of `|0...0>`
    /// and `|1...1>` exchanged. This is local-unitarily equivalent and
    /// carries the same Schmidt coefficients.
    pub flipped: bool,
    /// More than one candidate passed the threshold, which happens when the
    /// family degenerates (`a = b`, or `b = 0`).
    pub ambiguous: bool,
}

/// `(fidelity, flipped)` of `residual` against `|xi_m>` on the same qubit count.
pub fn xi_fidelity(residual: &StateVector, m: u32, sp: SchmidtParameter) -> (f64, bool) {
    let n = residual.qubit_count();
    if n == 0 {
        return (0.0, false);
    }
    let (x, y) = direct_amplitudes(m, sp);
    let r0 = residual.amplitude(0);
    let r1 = residual.amplitude((1 << n) - 1);
    let straight = (r0 * x + r1 * y).norm_sqr();
    let flipped = (r0 * y + r1 * x).norm_sqr();
    if flipped > straight {
        (flipped, true)
    } else {
        (straight, false)
    }
}

/// Picks the candidate index whose `|xi_m>` best matches `residual`.
///
/// Fails when even the best candidate is below [`FIDELITY_THRESHOLD`]: the
/// branch is not a member of the family at all.
pub fn classify_schmidt_index(
    residual: &StateVector,
    candidates: &[u32],
    sp: SchmidtParameter,
) -> Result<Classification> {
    let scored: Vec<(u32, f64, bool)> =
        candidates.iter().map(|&m| { let (f, flip) = xi_fidelity(residual, m, sp); (m, f, flip) }).collect();
    let &(index, fidelity, flipped) = scored
        .iter()
        .max_by(|l, r| l.1.total_cmp(&r.1))
        .ok_or(Error::NoCandidates)?;
    if fidelity < FIDELITY_THRESHOLD {
        return Err(Error::Unclassified { index, fidelity });
    }
    let passing = scored.iter().filter(|s| s.1 >= FIDELITY_THRESHOLD).count();
    Ok(Classification { index, fidelity, flipped, ambiguous: passing > 1 })
}
