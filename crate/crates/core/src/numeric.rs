//! Log-space helpers shared by the analytic engines.
//!
//! Weights such as `a^(2m) b^(2p)` underflow long before the chains get
//! interesting, so everything is carried as natural logarithms and only
//! exponentiated once a ratio of comparable magnitudes is formed.

/// `k * ln(base)` with the convention `base^0 = 1`, so a zero exponent on a
/// vanishing base (`ln = -inf`) gives `0` rather than NaN.
pub(crate) fn ln_pow(ln_base: f64, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_base
    }
}

/// `ln(exp(x) + exp(y))` without overflow or underflow.
pub(crate) fn ln_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// Above this `n` binomial coefficients come from log-gamma.
pub const EXACT_BINOMIAL_LIMIT: u64 = 60;

/// Exact `C(n, k)` for `n <= EXACT_BINOMIAL_LIMIT`.
pub(crate) fn binomial_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `ln C(n, k)`; exact integer arithmetic for small `n`, log-gamma above.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        libm::log(binomial_exact(n, k) as f64)
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}
