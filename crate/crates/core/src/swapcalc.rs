//! The swap map on Schmidt indices.
//!
//! Swapping `|eta_m>` with `|eta_p>` (or a `|xi_m>` with `|eta_p>`) yields
//! index `m + p` with probability `n_{m+p}^2 / (n_m^2 n_p^2)` and index
//! `|m - p|` with probability `(a^(2m) b^(2p) + a^(2p) b^(2m)) / (n_m^2 n_p^2)`.
//! The low-branch weight is kept in that unsimplified form so that it stays
//! valid at `a = 1` and for `m < p`.

use crate::distribution::{Accumulator, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::numeric::{ln_add, ln_pow};
use crate::states::{EtaIndex, SchmidtParameter};

/// The two branches of one swap: `[(m + p, P_high), (|m - p|, P_low)]`.
pub fn swap_branches(m: u32, p: u32, sp: SchmidtParameter) -> [(u32, f64); 2] {
    let (mu, pu) = (u64::from(m), u64::from(p));
    let (la, lb) = (sp.ln_a_squared(), sp.ln_b_squared());
    let ln_den = sp.ln_norm_squared(mu) + sp.ln_norm_squared(pu);
    let high = libm::exp(sp.ln_norm_squared(mu + pu) - ln_den);
    let ln_low = ln_add(ln_pow(la, mu) + ln_pow(lb, pu), ln_pow(la, pu) + ln_pow(lb, mu));
    let low = libm::exp(ln_low - ln_den);
    [(m + p, high), (m.abs_diff(p), low)]
}

/// Outcome distribution of a single swap between `|eta_m>` and `|eta_p>`.
///
/// Either order of `m` and `p` is accepted; with `p = 0` both branches land
/// on `m` and merge to probability one.
pub fn swap_pair(m: EtaIndex, p: EtaIndex, sp: SchmidtParameter) -> OutcomeDistribution {
    let mut acc = Accumulator::new(2);
    for (idx, w) in swap_branches(m.0, p.0, sp) {
        acc.add(idx, w);
    }
    acc.finish()
}

/// Swaps every component of `d` against a fresh `|eta_p>` and merges the
/// resulting indices. `parties` is carried over unchanged.
pub fn extend_distribution(
    d: &OutcomeDistribution,
    p: EtaIndex,
    sp: SchmidtParameter,
) -> OutcomeDistribution {
    if p.0 == 0 {
        return d.clone();
    }
    let mut acc = Accumulator::new(d.parties());
    for (m, w) in d.iter() {
        for (idx, pw) in swap_branches(m, p.0, sp) {
            acc.add(idx, w * pw);
        }
    }
    acc.finish()
}

/// `x - 1` sequential swaps along a chain of `x` identical `|eta>` links,
/// folded one link at a time from `{1: 1}`.
pub fn chain_sequential(x: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    if x == 0 {
        return Err(Error::NoLinks);
    }
    let start = OutcomeDistribution::point(1, 2);
    Ok((1..x).fold(start, |d, _| extend_distribution(&d, EtaIndex(1), sp)))
}
