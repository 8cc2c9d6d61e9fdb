//! Entanglement distribution by swapping partially entangled pairs.
//!
//! Every elementary link is `a|00> + b|11>`. Swapping links together produces
//! mixtures of the family `|eta_m>` (two parties) or `|xi_m>` (GHZ-like, many
//! parties), and this crate computes those mixtures three ways:
//!
//! - [`swapcalc`] folds the single-swap map over a chain, one link at a time;
//! - [`closed_form`] evaluates the binomial distributions for linear, star and
//!   star-linear networks directly;
//! - [`oracle`] simulates the actual circuits on a statevector and enumerates
//!   every measurement outcome.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod closed_form;
pub mod distribution;
pub mod error;
mod numeric;
pub mod oracle;
pub mod states;
pub mod swapcalc;

pub use distribution::{OutcomeDistribution, NORMALIZATION_TOLERANCE};
pub use error::{Error, Result};
pub use numeric::{ln_binomial, EXACT_BINOMIAL_LIMIT};
pub use states::{EtaIndex, SchmidtParameter, XiIndex};
