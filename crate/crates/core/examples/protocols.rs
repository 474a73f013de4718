//! The same sampled distribution scored under the three evaluation protocols.

use qineq::evaluation::{compute_metrics, Evaluator, Protocol};
use qineq::instances::{brute_force_solve, catalog};
use qineq::qubo::{build_hamiltonian, qubo_to_ising};
use qineq::schedule::{derive_params, ScheduleSpec};
use qineq::statevector::{run_circuit, DiagonalHamiltonian};

fn main() -> qineq::Result<()> {
    let inst = catalog::scenario(4)?;
    let oracle = brute_force_solve(&inst)?;
    let params = derive_params(&ScheduleSpec::sine(0.75, 8)?)?;
    for protocol in Protocol::ALL {
        let variant = protocol.variant();
        let w = qineq::qubo::default_weights(&inst, variant);
        let q = build_hamiltonian(&inst, variant, w);
        let diag = DiagonalHamiltonian::from_ising(&qubo_to_ising(&q).normalized()?, 20)?;
        let state = run_circuit(&diag, &params)?;
        let samples = state.sample(100 * protocol.num_qubits(&inst) as u64, 1)?;
        let ev = Evaluator::new(&inst, protocol, w);
        let m = compute_metrics(&samples, &inst, protocol, &oracle)?;
        println!(
            "{:<15} qubits {:>2}  <F> {:>10.2}  P(opt) {:.3} (uniform {:.3})  P(90%) {:.3} (uniform {:.3})",
            protocol.to_string(),
            protocol.num_qubits(&inst),
            ev.expectation_samples(&samples)?,
            m.p_opt,
            m.baseline_p_opt,
            m.p_90,
            m.baseline_p_90
        );
    }
    Ok(())
}
