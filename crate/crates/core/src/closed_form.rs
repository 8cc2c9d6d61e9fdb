//! Closed-form outcome distributions for the three network families.
//!
//! Every family reduces to the same binomial: each of the `n` elementary
//! pairs contributes either its `a` or its `b` branch, and the surviving
//! index is `|#a - #b|`. A linear chain of `x` links has `n = x`, a star of
//! `y` arms has `n = y`, and a star whose arms are extended by `x_k` links
//! has `n = y + sum(x_k)`.

use crate::distribution::{Accumulator, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::numeric::{ln_binomial, ln_pow};
use crate::states::{concurrence, EtaIndex, SchmidtParameter};
use crate::swapcalc::extend_distribution;

/// `C(n, k) a^(2(n-k)) b^(2k)`.
fn binomial_term(n: u64, k: u64, sp: SchmidtParameter) -> f64 {
    libm::exp(ln_binomial(n, k) + ln_pow(sp.ln_a_squared(), n - k) + ln_pow(sp.ln_b_squared(), k))
}

fn merged_binomial(steps: u32, parties: u32, sp: SchmidtParameter) -> OutcomeDistribution {
    let n = u64::from(steps);
    let mut acc = Accumulator::new(parties);
    for k in 0..=steps {
        acc.add(steps.abs_diff(2 * k), binomial_term(n, u64::from(k), sp));
    }
    acc.finish()
}

fn check_arms(y: u32) -> Result<()> {
    if y < 2 {
        Err(Error::TooFewArms(y as usize))
    } else {
        Ok(())
    }
}

/// End-to-end mixture of a linear chain of `x` links after `x - 1` swaps.
pub fn linear_chain(x: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    if x == 0 {
        return Err(Error::NoLinks);
    }
    Ok(merged_binomial(x, 2, sp))
}

/// GHZ-like mixture shared by the `y` peripheral nodes after the hub measures.
pub fn star(y: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    check_arms(y)?;
    Ok(merged_binomial(y, y, sp))
}

/// Star stage followed by `x` linear swaps, summed term by term: star
/// outcome `i` and linear outcome `j` land on `|(y - 2i) + (x - 2j)|`.
pub fn star_linear_double_sum(y: u32, x: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    check_arms(y)?;
    let (la, lb) = (sp.ln_a_squared(), sp.ln_b_squared());
    let mut acc = Accumulator::new(y);
    for i in 0..=y {
        for j in 0..=x {
            let ln_w = ln_binomial(u64::from(y), u64::from(i))
                + ln_binomial(u64::from(x), u64::from(j))
                + ln_pow(la, u64::from((y - i) + (x - j)))
                + ln_pow(lb, u64::from(i + j));
            let signed = (i64::from(y) - 2 * i64::from(i)) + (i64::from(x) - 2 * i64::from(j));
            acc.add(signed.unsigned_abs() as u32, libm::exp(ln_w));
        }
    }
    Ok(acc.finish())
}

/// Single binomial over `x + y` steps; equal to the double sum by Vandermonde.
pub fn star_linear_collapsed(y: u32, x: u32, sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    check_arms(y)?;
    Ok(merged_binomial(x + y, y, sp))
}

/// Star with arm `k` extended by `arm_chains[k]` further links.
///
/// Built by extending the star mixture one link at a time, arm after arm.
/// The result is again the binomial over `y + sum(arm_chains)` steps, with
/// `parties = y`.
pub fn star_linear_arms(arm_chains: &[u32], sp: SchmidtParameter) -> Result<OutcomeDistribution> {
    let y = u32::try_from(arm_chains.len()).unwrap_or(u32::MAX);
    let mut d = star(y, sp)?;
    for &links in arm_chains {
        for _ in 0..links {
            d = extend_distribution(&d, EtaIndex(1), sp);
        }
    }
    Ok(d)
}

/// Weight of the maximally entangled index 0.
pub fn success_probability_maximal(d: &OutcomeDistribution) -> f64 {
    d.weight(0)
}

/// Ensemble-average concurrence `sum_m W(m) C(m)`.
pub fn expected_concurrence(d: &OutcomeDistribution, sp: SchmidtParameter) -> f64 {
    d.iter().map(|(m, w)| w * concurrence(EtaIndex(m), sp)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swapcalc::chain_sequential;

    fn sp(a2: f64) -> SchmidtParameter {
        SchmidtParameter::from_a_squared(a2).unwrap()
    }

    fn assert_dist(d: &OutcomeDistribution, expect: &[(u32, f64)], tol: f64) {
        let e = OutcomeDistribution::new(expect.iter().copied(), d.parties()).unwrap();
        assert!(d.max_abs_diff(&e) <= tol, "{d:?} vs {expect:?}");
    }

    #[test]
    fn linear_examples() {
        assert_eq!(linear_chain(0, sp(0.8)), Err(Error::NoLinks));
        assert_dist(&linear_chain(1, sp(0.8)).unwrap(), &[(1, 1.0)], 0.0);
        assert_dist(&linear_chain(2, sp(0.8)).unwrap(), &[(2, 0.68), (0, 0.32)], 1e-14);
        assert_dist(&linear_chain(3, sp(0.8)).unwrap(), &[(3, 0.52), (1, 0.48)], 1e-14);
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(1, sp(0.8)), Err(Error::TooFewArms(1)));
        let s2 = star(2, sp(0.8)).unwrap();
        assert_eq!(s2, linear_chain(2, sp(0.8)).unwrap());
        let s3 = star(3, SchmidtParameter::SYMMETRIC).unwrap();
        assert_eq!(s3.parties(), 3);
        assert_dist(&s3, &[(3, 0.25), (1, 0.75)], 1e-15);
        assert_eq!(star(4, SchmidtParameter::SEPARABLE).unwrap(), OutcomeDistribution::point(4, 4));
    }

    #[test]
    fn star_linear_examples() {
        assert_dist(&star_linear_double_sum(2, 0, sp(0.8)).unwrap(), &[(2, 0.68), (0, 0.32)], 1e-14);
        assert_dist(
            &star_linear_double_sum(3, 1, SchmidtParameter::SYMMETRIC).unwrap(),
            &[(4, 0.125), (2, 0.5), (0, 0.375)],
            1e-15,
        );
        // C(4,k) 0.8^(4-k) 0.2^k merged over |4-2k|
        let expect = [(4, 0.4096 + 0.0016), (2, 4.0 * 0.512 * 0.2 + 4.0 * 0.8 * 0.008), (0, 6.0 * 0.64 * 0.04)];
        assert_dist(&star_linear_collapsed(2, 2, sp(0.8)).unwrap(), &expect, 1e-14);
        assert_dist(&star_linear_collapsed(2, 2, sp(0.8)).unwrap(), &[(4, 0.4112), (2, 0.4352), (0, 0.1536)], 1e-14);
        assert_dist(&star_linear_double_sum(2, 2, sp(0.8)).unwrap(), &expect, 1e-14);
        assert_eq!(star_linear_collapsed(3, 0, sp(0.7)).unwrap(), star(3, sp(0.7)).unwrap());
        assert_dist(
            &star_linear_collapsed(2, 1, SchmidtParameter::SYMMETRIC).unwrap(),
            &[(3, 0.25), (1, 0.75)],
            1e-15,
        );
        assert_eq!(star_linear_double_sum(1, 3, sp(0.8)), Err(Error::TooFewArms(1)));
    }

    #[test]
    fn arms_with_no_extensions_is_star() {
        assert_eq!(star_linear_arms(&[0, 0, 0], sp(0.8)).unwrap(), star(3, sp(0.8)).unwrap());
        assert!(star_linear_arms(&[4], sp(0.8)).is_err());
        let arms = star_linear_arms(&[1, 0, 2], sp(0.6)).unwrap();
        assert!(arms.max_abs_diff(&star_linear_collapsed(3, 3, sp(0.6)).unwrap()) < 1e-12);
    }

    #[test]
    fn summary_statistics() {
        let d2 = linear_chain(2, sp(0.8)).unwrap();
        assert!((success_probability_maximal(&d2) - 0.32).abs() < 1e-14);
        assert_eq!(success_probability_maximal(&linear_chain(3, sp(0.8)).unwrap()), 0.0);
        let sym = linear_chain(2, SchmidtParameter::SYMMETRIC).unwrap();
        assert!((success_probability_maximal(&sym) - 0.5).abs() < 1e-15);

        assert!((expected_concurrence(&d2, sp(0.8)) - 0.64).abs() < 1e-14);
        assert!((expected_concurrence(&OutcomeDistribution::point(1, 2), sp(0.8)) - 0.8).abs() < 1e-14);
        assert!((expected_concurrence(&sym, SchmidtParameter::SYMMETRIC) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn long_chains_use_log_gamma() {
        let d = linear_chain(400, sp(0.8)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        let seq = chain_sequential(400, sp(0.8)).unwrap();
        assert!(d.max_abs_diff(&seq) < 1e-10);
    }
}
