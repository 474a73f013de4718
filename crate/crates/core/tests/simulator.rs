mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qineq::instances::catalog;
use qineq::qubo::{build_hamiltonian, default_weights, qubo_to_ising, BitLayout, QuadraticModel, Variant};
use qineq::statevector::{run_circuit, CircuitParams, DiagonalHamiltonian, StateVector};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn two_qubit_scenario_matches_dense_reference() {
    let inst = catalog::scenario(0).unwrap();
    let q = build_hamiltonian(&inst, Variant::NoSlack, default_weights(&inst, Variant::NoSlack));
    let ising = qubo_to_ising(&q).normalized().unwrap();
    let diag = DiagonalHamiltonian::from_ising(&ising, 2).unwrap();
    for p in [1, 2, 5] {
        let gammas: Vec<f64> = (0..p).map(|l| 0.2 + 0.3 * l as f64).collect();
        let betas: Vec<f64> = (0..p).map(|l| 0.7 - 0.1 * l as f64).collect();
        let fast = run_circuit(&diag, &CircuitParams::new(betas.clone(), gammas.clone()).unwrap()).unwrap();
        let dense = common::dense_circuit(2, diag.energies(), &gammas, &betas);
        assert!(max_diff(fast.amplitudes(), &dense) < 1e-10, "p = {p}");
    }
}

#[test]
fn four_qubit_scenario_matches_dense_reference() {
    let inst = catalog::scenario(1).unwrap();
    let q = build_hamiltonian(&inst, Variant::NoSlack, default_weights(&inst, Variant::NoSlack));
    let diag = DiagonalHamiltonian::from_ising(&qubo_to_ising(&q).normalized().unwrap(), 4).unwrap();
    let (gammas, betas) = (vec![0.4, -1.1, 2.0], vec![0.3, 0.8, -0.5]);
    let fast = run_circuit(&diag, &CircuitParams::new(betas.clone(), gammas.clone()).unwrap()).unwrap();
    let dense = common::dense_circuit(4, diag.energies(), &gammas, &betas);
    assert!(max_diff(fast.amplitudes(), &dense) < 1e-10);
}

#[test]
fn dense_reference_starts_from_minus_state() {
    let dense = common::dense_circuit(3, &[0.0; 8], &[], &[]);
    let fast = StateVector::minus(3).unwrap();
    assert!(max_diff(fast.amplitudes(), &dense) < 1e-15);
}

#[test]
fn diagonal_matches_qubo_on_every_catalog_model() {
    for inst in catalog::load_catalog().into_iter().take(16) {
        for variant in [Variant::NoSlack, Variant::Standard] {
            let q = build_hamiltonian(&inst, variant, default_weights(&inst, variant));
            let ising = qubo_to_ising(&q);
            let diag = DiagonalHamiltonian::from_ising(&ising, 20).unwrap();
            for (idx, &e) in diag.energies().iter().enumerate() {
                let expect = q.energy_index(idx as u64);
                assert!((e - expect).abs() <= 1e-9 * expect.abs().max(1.0));
            }
        }
    }
}

#[test]
fn sample_frequencies_track_probabilities() {
    let inst = catalog::scenario(3).unwrap();
    let q = build_hamiltonian(&inst, Variant::NoSlack, default_weights(&inst, Variant::NoSlack));
    let diag = DiagonalHamiltonian::from_ising(&qubo_to_ising(&q).normalized().unwrap(), 4).unwrap();
    let state = run_circuit(&diag, &CircuitParams::new(vec![0.6, 0.2], vec![0.15, 0.55]).unwrap()).unwrap();
    let shots = 400_000;
    let samples = state.sample(shots, 21).unwrap();
    assert_eq!(samples.counts.values().sum::<u64>(), shots);
    for (b, p) in state.probabilities().into_iter().enumerate() {
        let f = samples.frequency(b as u64);
        let sd = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((f - p).abs() <= 5.0 * sd + 1e-12, "index {b}: {f} vs {p}");
    }
}

fn arb_model(max_vars: usize) -> impl Strategy<Value = QuadraticModel> {
    (1..=max_vars).prop_flat_map(|n| {
        (
            proptest::collection::vec(-20i32..20, n),
            proptest::collection::vec((0..n, 0..n, -20i32..20), 0..20),
            -50i32..50,
        )
            .prop_map(move |(lin, quad, off)| {
                let mut q = QuadraticModel::zeros(BitLayout::plain(n));
                for (i, c) in lin.into_iter().enumerate() {
                    q.add_linear(i, c as f64);
                }
                for (i, j, c) in quad {
                    q.add_quadratic(i, j, c as f64 * 0.5);
                }
                q.add_offset(off as f64);
                q
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm(
        gammas in proptest::collection::vec(-6.3f64..6.3, 1..8),
        seed in any::<u64>(),
        q in arb_model(7),
    ) {
        let betas: Vec<f64> = gammas.iter().enumerate().map(|(l, g)| (g * 0.37 + l as f64 + seed as f64 * 1e-20).sin()).collect();
        let ising = qubo_to_ising(&q);
        prop_assume!(ising.max_abs_coefficient() > 0.0);
        let diag = DiagonalHamiltonian::from_ising(&ising.normalized().unwrap(), 10).unwrap();
        let state = run_circuit(&diag, &CircuitParams::new(betas, gammas).unwrap()).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normalized_diagonal_scales_back(q in arb_model(8)) {
        let ising = qubo_to_ising(&q);
        prop_assume!(ising.max_abs_coefficient() > 0.0);
        let norm = ising.normalized().unwrap();
        prop_assert!(norm.max_abs_coefficient() <= 1.0 + 1e-15);
        let diag = DiagonalHamiltonian::from_ising(&norm, 10).unwrap();
        for (idx, &e) in diag.energies().iter().enumerate() {
            let expect = q.energy_index(idx as u64);
            prop_assert!((e * norm.nu_max - expect).abs() <= 1e-9 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_conserves_shots(shots in 1u64..5000, seed in any::<u64>()) {
        let state = run_circuit(
            &DiagonalHamiltonian::from_energies((0..8).map(|i| i as f64 * 0.3).collect()).unwrap(),
            &CircuitParams::new(vec![0.4], vec![0.9]).unwrap(),
        ).unwrap();
        let a = state.sample(shots, seed).unwrap();
        prop_assert_eq!(a.counts.values().sum::<u64>(), shots);
        prop_assert_eq!(a, state.sample(shots, seed).unwrap());
    }
}
