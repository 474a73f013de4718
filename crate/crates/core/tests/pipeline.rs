use proptest::prelude::*;
use qineq::evaluation::{classical_objective_index, compute_metrics, Evaluator, Protocol};
use qineq::harness::{self, Algorithm, ExperimentConfig, ScheduleConfig};
use qineq::instances::{brute_force_solve, catalog};
use qineq::qubo::{build_hamiltonian, default_weights, Variant};
use qineq::schedule::ScheduleKind;
use qineq::statevector::SampleSet;
use std::collections::BTreeMap;

fn tae_cfg(scenarios: Vec<usize>, protocol: Protocol, layers: Vec<usize>) -> ExperimentConfig {
    ExperimentConfig {
        scenarios,
        algorithms: vec![Algorithm::Tae],
        protocols: vec![protocol],
        layers,
        repetitions: 3,
        seed: 5,
        timing: false,
        ..Default::default()
    }
}

#[test]
fn scenario_zero_noslack_annealing_degrades_with_depth() {
    let res = harness::run_experiment(&tae_cfg(vec![0], Protocol::NoSlack, vec![2, 6, 10])).unwrap();
    let mean: Vec<f64> = res.summaries.iter().map(|s| s.mean_p_opt).collect();
    assert_eq!(mean.len(), 3);
    assert!(mean[0] > mean[1] && mean[1] > mean[2], "{mean:?}");
}

#[test]
fn shots_scale_with_protocol_width() {
    let cfg = ExperimentConfig {
        scenarios: vec![3],
        protocols: vec![Protocol::NoSlack, Protocol::StandardSlack],
        shots_per_qubit: 7,
        ..tae_cfg(vec![3], Protocol::NoSlack, vec![2])
    };
    let res = harness::run_experiment(&cfg).unwrap();
    for r in &res.records {
        let width = if r.protocol == Protocol::NoSlack { 4 } else { 8 };
        assert_eq!(r.num_qubits, width);
        // p_opt is a count over 7 * width shots
        let hits = r.p_opt * (7 * width) as f64;
        assert!((hits - hits.round()).abs() < 1e-9);
    }
}

#[test]
fn rerun_gives_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let cfg = ExperimentConfig {
            scenarios: vec![1, 2],
            algorithms: vec![Algorithm::Qaoa],
            protocols: vec![Protocol::NoSlack],
            layers: vec![2],
            repetitions: 1,
            seed: 99,
            timing: false,
            output: Some(dir.path().join(name)),
            ..Default::default()
        };
        harness::run_experiment(&cfg).unwrap();
        (
            std::fs::read(dir.path().join(name)).unwrap(),
            std::fs::read(dir.path().join(name).with_extension("csv")).unwrap(),
        )
    };
    let a = run("a.jsonl");
    let b = run("b.jsonl");
    assert_eq!(a, b);
    let csv = String::from_utf8(a.1).unwrap();
    assert!(csv.starts_with(&harness::CSV_HEADER.join(",")));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn random_angle_schedule_runs() {
    let cfg = ExperimentConfig {
        schedule: ScheduleConfig {
            kind: ScheduleKind::RandomAngles,
            dt: 0.75,
        },
        ..tae_cfg(vec![1], Protocol::SlackXOnly, vec![3])
    };
    let res = harness::run_experiment(&cfg).unwrap();
    assert!(res.records.iter().all(|r| r.is_ok() && r.schedule == "random"));
}

#[test]
fn metrics_bounds_and_baselines_hold_on_every_cell() {
    let res = harness::run_experiment(&tae_cfg((0..6).collect(), Protocol::StandardSlack, vec![1, 4])).unwrap();
    for r in &res.records {
        let oracle = brute_force_solve(&catalog::scenario(r.scenario).unwrap()).unwrap();
        let space = (catalog::scenario(r.scenario).unwrap().num_x_bits() as f64).exp2();
        assert!(0.0 <= r.p_opt && r.p_opt <= r.p_90 && r.p_90 <= 1.0);
        assert_eq!(r.baseline_p_opt, oracle.optimal_assignments.len() as f64 / space);
        assert_eq!(r.baseline_p_90, oracle.count_90pct as f64 / space);
    }
}

fn arb_samples(width: usize) -> impl Strategy<Value = SampleSet> {
    proptest::collection::btree_map(0u64..(1u64 << width), 1u64..50, 1..40).prop_map(move |counts: BTreeMap<u64, u64>| {
        SampleSet {
            shots: counts.values().sum(),
            num_qubits: width,
            counts,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slack_predicate_is_stricter(samples in arb_samples(10), id in 4usize..6) {
        // scenarios 4 and 5 have 5 x-bits and 4 slack bits; pad to 10 by dropping the top bit
        let inst = catalog::scenario(id).unwrap();
        let width = Protocol::SlackXOnly.num_qubits(&inst);
        let samples = SampleSet {
            num_qubits: width,
            counts: samples.counts.into_iter().fold(BTreeMap::new(), |mut m, (k, c)| {
                *m.entry(k & ((1 << width) - 1)).or_insert(0) += c;
                m
            }),
            ..samples
        };
        let oracle = brute_force_solve(&inst).unwrap();
        let xo = compute_metrics(&samples, &inst, Protocol::SlackXOnly, &oracle).unwrap();
        let st = compute_metrics(&samples, &inst, Protocol::StandardSlack, &oracle).unwrap();
        prop_assert!(st.p_opt <= xo.p_opt && st.p_90 <= xo.p_90);
        for m in [xo, st] {
            prop_assert!(0.0 <= m.p_opt && m.p_opt <= m.p_90 && m.p_90 <= 1.0);
        }
    }

    #[test]
    fn x_only_scores_ignore_slack(x in 0u64..64, y1 in 0u64..16, y2 in 0u64..16) {
        let inst = catalog::scenario(2).unwrap();
        let w = default_weights(&inst, Variant::Standard);
        let ev = Evaluator::new(&inst, Protocol::SlackXOnly, w);
        prop_assert_eq!(ev.score(x | (y1 % 4) << 6), ev.score(x | (y2 % 4) << 6));
        prop_assert_eq!(ev.score(x), classical_objective_index(&inst, x, w));
    }

    #[test]
    fn classical_objective_bounded_by_noslack_energy(x in 0u64..256) {
        let inst = catalog::scenario(9).unwrap();
        let w = default_weights(&inst, Variant::NoSlack);
        let h = build_hamiltonian(&inst, Variant::NoSlack, w);
        prop_assert!(classical_objective_index(&inst, x, w) <= h.energy_index(x));
    }
}
