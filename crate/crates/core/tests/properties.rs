use proptest::prelude::*;

use swapnet_core::closed_form::{
    expected_concurrence, linear_chain, star, star_linear_arms, star_linear_collapsed, star_linear_double_sum,
    success_probability_maximal,
};
use swapnet_core::states::{amplitudes, concurrence, entanglement_entropy, normalization};
use swapnet_core::swapcalc::{chain_sequential, extend_distribution, swap_pair};
use swapnet_core::{EtaIndex, OutcomeDistribution, SchmidtParameter, XiIndex};

const GRID: [f64; 10] = [0.5, 0.6, 0.65, 0.7, 0.8, 0.85, 0.9, 0.95, 0.99, 1.0];

fn sp(a2: f64) -> SchmidtParameter {
    SchmidtParameter::from_a_squared(a2).unwrap()
}

fn grid() -> impl Strategy<Value = SchmidtParameter> {
    proptest::sample::select(GRID.to_vec()).prop_map(sp)
}

fn interior() -> impl Strategy<Value = SchmidtParameter> {
    (0.0001f64..0.9999).prop_map(sp)
}

/// Exact `a^(2m) + b^(2m)` for `a^2 = num/den`, via integer arithmetic.
fn rational_norm_squared(num: u128, den: u128, m: u32) -> f64 {
    let top = num.pow(m) + (den - num).pow(m);
    top as f64 / den.pow(m) as f64
}

#[test]
fn normalization_matches_exact_rationals() {
    for (num, den) in [(1u128, 2u128), (4, 5), (9, 10)] {
        let p = sp(num as f64 / den as f64);
        for m in 0..=20 {
            let exact = rational_norm_squared(num, den, m);
            let got = normalization(m, p).powi(2);
            assert!((got - exact).abs() < 1e-14, "a^2={num}/{den} m={m}: {got} vs {exact}");
        }
    }
}

#[test]
fn amplitudes_at_index_fifty_match_exact_ratio() {
    // a^2 = 4/5: a^100 / (a^100 + b^100) = 4^50 / (4^50 + 1)
    let four50 = 4u128.pow(50);
    let expect_hi = four50 as f64 / (four50 + 1) as f64;
    let expect_lo = 1.0 / (four50 + 1) as f64;
    let (x, y) = amplitudes(50, sp(0.8));
    assert!((x * x - expect_hi).abs() < 1e-15);
    assert!((y * y / expect_lo - 1.0).abs() < 1e-9);
    assert!((x * x + y * y - 1.0).abs() < 1e-14);
}

#[test]
fn symmetric_point_is_maximally_entangled_everywhere() {
    for m in 0..200 {
        assert!((concurrence(m, SchmidtParameter::SYMMETRIC) - 1.0).abs() < 1e-12);
        assert!((entanglement_entropy(m, SchmidtParameter::SYMMETRIC) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn swap_probabilities_sum_to_one_on_grid() {
    for a2 in GRID {
        for m in 0..=50 {
            for p in 0..=50 {
                let d = swap_pair(EtaIndex(m), EtaIndex(p), sp(a2));
                assert!((d.total() - 1.0).abs() < 1e-12, "a^2={a2} m={m} p={p}");
                assert!(d.len() <= 2);
            }
        }
    }
}

#[test]
fn sequential_chain_equals_binomial() {
    for a2 in GRID {
        for x in 1..=12 {
            let seq = chain_sequential(x, sp(a2)).unwrap();
            let closed = linear_chain(x, sp(a2)).unwrap();
            assert!(seq.max_abs_diff(&closed) < 1e-12, "a^2={a2} x={x}");
        }
    }
}

#[test]
fn star_linear_collapse_and_composition() {
    for a2 in GRID {
        for y in 2..=14 {
            for x in 0..=(14 - y) {
                let double = star_linear_double_sum(y, x, sp(a2)).unwrap();
                let collapsed = star_linear_collapsed(y, x, sp(a2)).unwrap();
                assert!(double.max_abs_diff(&collapsed) < 1e-12, "y={y} x={x} a^2={a2}");
                let folded = (0..x).fold(star(y, sp(a2)).unwrap(), |d, _| extend_distribution(&d, EtaIndex(1), sp(a2)));
                assert!(folded.max_abs_diff(&collapsed) < 1e-12, "y={y} x={x} a^2={a2}");
                assert_eq!(collapsed.parties(), y);
            }
        }
        assert_eq!(star(2, sp(a2)).unwrap(), linear_chain(2, sp(a2)).unwrap());
    }
}

#[test]
fn separable_resource_never_entangles() {
    let p = SchmidtParameter::SEPARABLE;
    for x in 1..=14 {
        let d = linear_chain(x, p).unwrap();
        assert_eq!(d, OutcomeDistribution::point(x, 2));
        assert_eq!(expected_concurrence(&d, p), 0.0);
        assert_eq!(chain_sequential(x, p).unwrap(), d);
    }
    for y in 2..=8 {
        for x in 0..=6 {
            let d = star_linear_collapsed(y, x, p).unwrap();
            assert_eq!(d, OutcomeDistribution::point(x + y, y));
            assert_eq!(expected_concurrence(&d, p), 0.0);
        }
    }
}

proptest! {
    #[test]
    fn amplitudes_are_normalized(m in 0u32..5000, p in interior()) {
        let (x, y) = amplitudes(m, p);
        prop_assert!((x * x + y * y - 1.0).abs() < 1e-14);
    }

    #[test]
    fn concurrence_decreases_with_index(m in 0u32..50, a2 in 0.51f64..0.99) {
        prop_assert!(concurrence(m + 1, sp(a2)) < concurrence(m, sp(a2)));
    }

    #[test]
    fn xi_measures_equal_eta_measures(m in 0u32..100, parties in 2u32..12, p in grid()) {
        let xi = XiIndex::new(m, parties).unwrap();
        prop_assert_eq!(concurrence(xi, p), concurrence(EtaIndex(m), p));
        prop_assert_eq!(entanglement_entropy(xi, p), entanglement_entropy(EtaIndex(m), p));
        let xi2 = XiIndex::new(m, 2).unwrap();
        prop_assert_eq!(normalization(xi2, p), normalization(EtaIndex(m), p));
    }

    #[test]
    fn measures_in_unit_interval(m in 0u32..3000, p in interior()) {
        let c = concurrence(m, p);
        let h = entanglement_entropy(m, p);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((0.0..=1.0).contains(&h));
    }

    #[test]
    fn swap_is_symmetric(m in 0u32..60, q in 0u32..60, p in grid()) {
        let lhs = swap_pair(EtaIndex(m), EtaIndex(q), p);
        let rhs = swap_pair(EtaIndex(q), EtaIndex(m), p);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn bell_pair_extension_is_identity(
        weights in proptest::collection::vec(0.01f64..1.0, 1..6),
        parties in 2u32..6,
        p in grid(),
    ) {
        let total: f64 = weights.iter().sum();
        let d = OutcomeDistribution::new(
            weights.iter().enumerate().map(|(k, w)| (2 * k as u32 + 1, w / total)),
            parties,
        ).unwrap();
        prop_assert_eq!(extend_distribution(&d, EtaIndex(0), p), d);
    }

    #[test]
    fn chain_parity_and_support(x in 1u32..80, p in interior()) {
        let d = chain_sequential(x, p).unwrap();
        prop_assert_eq!(d.parity(), Some(x % 2));
        prop_assert_eq!(d.max_index(), Some(x));
        prop_assert_eq!(d.min_index(), Some(x % 2));
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
        prop_assert!(d.iter().all(|(_, w)| (0.0..=1.0).contains(&w)));
    }

    #[test]
    fn symmetric_chain_is_fair_binomial(x in 1u32..40) {
        let d = chain_sequential(x, SchmidtParameter::SYMMETRIC).unwrap();
        for m in (x % 2..=x).step_by(2) {
            // |x - 2i| = m for i = (x - m)/2 and i = (x + m)/2
            let i = (x - m) / 2;
            let mut c = binom(x, i);
            if m != 0 {
                c += binom(x, x - i);
            }
            let expect = c / 2f64.powi(x as i32);
            prop_assert!((d.weight(m) - expect).abs() < 1e-12, "x={} m={}", x, m);
        }
    }

    #[test]
    fn success_probability_requires_even_chain(x in 1u32..40, p in interior()) {
        let d = linear_chain(x, p).unwrap();
        prop_assert_eq!(success_probability_maximal(&d) > 0.0, x % 2 == 0);
    }

    #[test]
    fn multi_arm_is_one_binomial(chains in proptest::collection::vec(0u32..4, 2..6), p in grid()) {
        let y = chains.len() as u32;
        let extra: u32 = chains.iter().sum();
        let arms = star_linear_arms(&chains, p).unwrap();
        let single = star_linear_collapsed(y, extra, p).unwrap();
        prop_assert!(arms.max_abs_diff(&single) < 1e-12);
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

#[test]
fn separable_boundaries_for_success_probability() {
    for x in 1..=20 {
        assert_eq!(success_probability_maximal(&linear_chain(x, SchmidtParameter::SEPARABLE).unwrap()), 0.0);
    }
}
