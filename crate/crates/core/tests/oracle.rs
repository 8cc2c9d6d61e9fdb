use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;

use swapnet_core::closed_form::{linear_chain, star, star_linear_arms};
use swapnet_core::oracle::{
    enumerate_measurement, prepare_eta_pairs, run_linear_protocol, run_star_linear_protocol, run_star_protocol,
    Gate, OracleOptions, Protocol, StateVector,
};
use swapnet_core::{Error, OutcomeDistribution, SchmidtParameter};

const GRID: [f64; 4] = [0.5, 0.65, 0.8, 0.95];

fn sp(a2: f64) -> SchmidtParameter {
    SchmidtParameter::from_a_squared(a2).unwrap()
}

fn expect(d: &OutcomeDistribution, entries: &[(u32, f64)]) {
    let e = OutcomeDistribution::new(entries.iter().copied(), d.parties()).unwrap();
    assert!(d.max_abs_diff(&e) < 1e-12, "{d:?} vs {entries:?}");
}

fn random_state(qubits: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << qubits).prop_filter_map("zero vector", move |v| {
        let norm: f64 = v.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            let amps = v.into_iter().map(|(x, y)| Complex64::new(x / norm, y / norm)).collect();
            StateVector::from_amplitudes(qubits, amps).unwrap()
        })
    })
}

fn gate(qubits: usize) -> impl Strategy<Value = Gate> {
    (0..4u8, 0..qubits, 0..qubits).prop_filter_map("cnot on one qubit", |(kind, q, r)| match kind {
        0 => Some(Gate::H(q)),
        1 => Some(Gate::X(q)),
        2 => Some(Gate::Z(q)),
        _ => (q != r).then_some(Gate::Cnot { control: q, target: r }),
    })
}

proptest! {
    #[test]
    fn gates_preserve_norm(mut s in random_state(5), gates in proptest::collection::vec(gate(5), 1..40)) {
        for g in gates {
            s.apply(g).unwrap();
            prop_assert!((s.norm_squared() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn branches_are_complete(s in random_state(5), mask in 1u8..32) {
        let qubits: Vec<usize> = (0..5).filter(|q| mask >> q & 1 == 1).collect();
        let branches = enumerate_measurement(&s, &qubits).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for b in &branches {
            prop_assert_eq!(b.outcome_bits.len(), qubits.len());
            prop_assert!((b.residual.norm_squared() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn unit_swap_branches_aggregate_to_binomial() {
    let mut s = prepare_eta_pairs(2, sp(0.8)).unwrap();
    s.apply(Gate::Cnot { control: 1, target: 2 }).unwrap();
    s.apply(Gate::H(1)).unwrap();
    let branches = enumerate_measurement(&s, &[1, 2]).unwrap();
    assert_eq!(branches.len(), 4);
    // outcome of qubit 2 decides the branch: 0 -> a^2|00> + b^2|11>, 1 -> ab(|01> +- |10>)
    let high: f64 = branches.iter().filter(|b| !b.outcome_bits[1]).map(|b| b.probability).sum();
    let low: f64 = branches.iter().filter(|b| b.outcome_bits[1]).map(|b| b.probability).sum();
    assert!((high - 0.68).abs() < 1e-14);
    assert!((low - 0.32).abs() < 1e-14);
}

#[test]
fn protocol_examples() {
    expect(&run_linear_protocol(2, sp(0.8)).unwrap(), &[(2, 0.68), (0, 0.32)]);
    expect(&run_linear_protocol(3, SchmidtParameter::SYMMETRIC).unwrap(), &[(3, 0.25), (1, 0.75)]);
    expect(&run_linear_protocol(2, SchmidtParameter::SEPARABLE).unwrap(), &[(2, 1.0)]);
    expect(&run_star_protocol(2, sp(0.8)).unwrap(), &[(2, 0.68), (0, 0.32)]);
    let s3 = run_star_protocol(3, SchmidtParameter::SYMMETRIC).unwrap();
    assert_eq!(s3.parties(), 3);
    expect(&s3, &[(3, 0.25), (1, 0.75)]);
    expect(&run_star_protocol(3, SchmidtParameter::SEPARABLE).unwrap(), &[(3, 1.0)]);
}

#[test]
fn oracle_matches_closed_forms() {
    for a2 in GRID {
        for x in 2..=5 {
            let o = run_linear_protocol(x, sp(a2)).unwrap();
            assert!(o.max_abs_diff(&linear_chain(x, sp(a2)).unwrap()) < 1e-10, "linear x={x} a^2={a2}");
        }
        for y in 2..=5 {
            let o = run_star_protocol(y, sp(a2)).unwrap();
            assert!(o.max_abs_diff(&star(y, sp(a2)).unwrap()) < 1e-10, "star y={y} a^2={a2}");
        }
        let o = run_star_linear_protocol(&[2, 0, 1], sp(a2)).unwrap();
        assert!(o.max_abs_diff(&star_linear_arms(&[2, 0, 1], sp(a2)).unwrap()) < 1e-10);
    }
}

#[test]
fn execution_modes_agree() {
    let full = OracleOptions::full_register();
    for a2 in [0.5, 0.8, 1.0] {
        for p in [Protocol::linear(6).unwrap(), Protocol::star(4).unwrap(), Protocol::star_linear(&[1, 1, 1]).unwrap()] {
            let seq = p.distribution(sp(a2), &OracleOptions::default()).unwrap();
            let deferred = p.distribution(sp(a2), &full).unwrap();
            assert!(seq.max_abs_diff(&deferred) < 1e-12);
        }
    }
    // branch by branch, keyed on the measurement history
    let p = Protocol::linear(4).unwrap();
    let seq = p.branches(sp(0.65), &OracleOptions::default()).unwrap();
    let deferred: BTreeMap<u64, StateVector> =
        p.branches(sp(0.65), &full).unwrap().into_iter().map(|b| (b.outcome, b.residual)).collect();
    assert_eq!(seq.len(), deferred.len());
    for b in seq {
        assert!((b.residual.inner(&deferred[&b.outcome]).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn corrections_are_required() {
    let off = OracleOptions { corrections: false, ..OracleOptions::default() };
    let off_full = OracleOptions { corrections: false, ..OracleOptions::full_register() };
    for a2 in GRID {
        for p in [Protocol::linear(2).unwrap(), Protocol::linear(4).unwrap(), Protocol::star(3).unwrap()] {
            assert!(matches!(p.distribution(sp(a2), &off), Err(Error::Unclassified { .. })), "a^2={a2}");
            assert!(matches!(p.distribution(sp(a2), &off_full), Err(Error::Unclassified { .. })));
            assert!(p.distribution(sp(a2), &OracleOptions::default()).is_ok());
        }
    }
}

#[test]
fn limits() {
    assert_eq!(run_linear_protocol(9, sp(0.8)), Err(Error::QubitLimit { requested: 18, limit: 16 }));
    assert_eq!(run_star_protocol(9, sp(0.8)), Err(Error::QubitLimit { requested: 18, limit: 16 }));
    assert_eq!(run_star_protocol(1, sp(0.8)), Err(Error::TooFewArms(1)));
    assert!(run_linear_protocol(8, sp(0.8)).is_ok());
}
