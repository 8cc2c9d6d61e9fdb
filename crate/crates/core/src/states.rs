//! The partially entangled state families `|eta_m>` and `|xi_m>`.
//!
//! `|eta_m> = (a^m |00> + b^m |11>) / n_m` with `n_m = sqrt(a^(2m) + b^(2m))`,
//! and `|xi_m>` is the same superposition over `|0...0>` and `|1...1>` on
//! `parties` qubits. Every quantity here is evaluated from logarithms so that
//! indices in the thousands stay finite.

use core::fmt;

use crate::error::{Error, Result};
use crate::numeric::{ln_add, ln_pow};

/// Schmidt coefficients `(a, b)` of the elementary resource `a|00> + b|11>`.
///
/// Only `a^2` is stored; `b^2 = 1 - a^2` is always derived from it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SchmidtParameter {
    a_squared: f64,
}

impl SchmidtParameter {
    /// The maximally entangled point `a = b = 1/sqrt(2)`.
    pub const SYMMETRIC: Self = Self { a_squared: 0.5 };
    /// The separable limit `a = 1, b = 0`.
    pub const SEPARABLE: Self = Self { a_squared: 1.0 };

    pub fn from_a_squared(a_squared: f64) -> Result<Self> {
        if a_squared > 0.0 && a_squared <= 1.0 {
            Ok(Self { a_squared })
        } else {
            Err(Error::InvalidSchmidt(a_squared))
        }
    }

    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a <= 1.0 {
            Ok(Self { a_squared: a * a })
        } else {
            Err(Error::InvalidSchmidt(a * a))
        }
    }

    pub fn a_squared(&self) -> f64 {
        self.a_squared
    }

    pub fn b_squared(&self) -> f64 {
        1.0 - self.a_squared
    }

    pub fn a(&self) -> f64 {
        libm::sqrt(self.a_squared)
    }

    pub fn b(&self) -> f64 {
        libm::sqrt(self.b_squared())
    }

    pub(crate) fn ln_a_squared(&self) -> f64 {
        libm::log(self.a_squared)
    }

    pub(crate) fn ln_b_squared(&self) -> f64 {
        libm::log1p(-self.a_squared)
    }

    /// `ln(n_m^2) = ln(a^(2m) + b^(2m))`.
    pub(crate) fn ln_norm_squared(&self, m: u64) -> f64 {
        ln_add(ln_pow(self.ln_a_squared(), m), ln_pow(self.ln_b_squared(), m))
    }

    /// `(a^(2m) / n_m^2, b^(2m) / n_m^2)`, the squared Schmidt coefficients of `|eta_m>`.
    ///
    /// Formed from the single ratio of the two terms so the pair sums to one
    /// to rounding even when `m` is large.
    pub(crate) fn schmidt_weights(&self, m: u64) -> (f64, f64) {
        let (la, lb) = (ln_pow(self.ln_a_squared(), m), ln_pow(self.ln_b_squared(), m));
        if la >= lb {
            let r = libm::exp(lb - la);
            (1.0 / (1.0 + r), r / (1.0 + r))
        } else {
            let r = libm::exp(la - lb);
            (r / (1.0 + r), 1.0 / (1.0 + r))
        }
    }
}

impl fmt::Display for SchmidtParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^2={}", self.a_squared)
    }
}

/// Schmidt exponent `m` of a bipartite `|eta_m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EtaIndex(pub u32);

/// Schmidt exponent `m` of a `parties`-qubit GHZ-like `|xi_m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiIndex {
    pub m: u32,
    pub parties: u32,
}

impl XiIndex {
    pub fn new(m: u32, parties: u32) -> Option<Self> {
        (parties >= 2).then_some(Self { m, parties })
    }
}

/// Cutting one party off `|xi_m>` leaves the same Schmidt coefficients as
/// `|eta_m>`, so every bipartite measure carries over unchanged.
impl From<XiIndex> for EtaIndex {
    fn from(xi: XiIndex) -> Self {
        EtaIndex(xi.m)
    }
}

impl From<u32> for EtaIndex {
    fn from(m: u32) -> Self {
        EtaIndex(m)
    }
}

/// `n_m = sqrt(a^(2m) + b^(2m))`.
pub fn normalization(m: impl Into<EtaIndex>, sp: SchmidtParameter) -> f64 {
    let m = u64::from(m.into().0);
    libm::exp(0.5 * sp.ln_norm_squared(m))
}

/// Normalized amplitudes `(a^m / n_m, b^m / n_m)` of `|0...0>` and `|1...1>`.
pub fn amplitudes(m: impl Into<EtaIndex>, sp: SchmidtParameter) -> (f64, f64) {
    let m = u64::from(m.into().0);
    let (lo, hi) = sp.schmidt_weights(m);
    (libm::sqrt(lo), libm::sqrt(hi))
}

/// Pure-state concurrence `2 a^m b^m / n_m^2`.
pub fn concurrence(m: impl Into<EtaIndex>, sp: SchmidtParameter) -> f64 {
    let (p, q) = sp.schmidt_weights(u64::from(m.into().0));
    (2.0 * libm::sqrt(p * q)).min(1.0)
}

/// Entropy of entanglement in bits: binary entropy of `a^(2m) / n_m^2`.
pub fn entanglement_entropy(m: impl Into<EtaIndex>, sp: SchmidtParameter) -> f64 {
    let m = u64::from(m.into().0);
    let (p, q) = sp.schmidt_weights(m);
    let h = |w: f64| if w > 0.0 { -w * libm::log2(w) } else { 0.0 };
    (h(p) + h(q)).min(1.0)
}
