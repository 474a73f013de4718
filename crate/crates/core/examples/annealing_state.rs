//! Trotterized annealing on the slack-free circuit; prints the most likely bitstrings.

use qineq::evaluation::{compute_metrics_exact, Protocol};
use qineq::instances::{brute_force_solve, catalog};
use qineq::qubo::{build_hamiltonian, default_weights, qubo_to_ising, Variant};
use qineq::schedule::{derive_params, ScheduleSpec};
use qineq::statevector::{run_circuit, DiagonalHamiltonian};

fn main() -> qineq::Result<()> {
    let inst = catalog::scenario(5)?;
    let oracle = brute_force_solve(&inst)?;
    let q = build_hamiltonian(&inst, Variant::NoSlack, default_weights(&inst, Variant::NoSlack));
    let diag = DiagonalHamiltonian::from_ising(&qubo_to_ising(&q).normalized()?, 20)?;
    for p in [1, 5, 20] {
        let state = run_circuit(&diag, &derive_params(&ScheduleSpec::sine(0.75, p)?)?)?;
        let m = compute_metrics_exact(&state, &inst, Protocol::NoSlack, &oracle)?;
        let mut probs: Vec<(usize, f64)> = state.probabilities().into_iter().enumerate().collect();
        probs.sort_by(|a, b| b.1.total_cmp(&a.1));
        println!("p={p:>2}  P(opt)={:.4} (uniform {:.4})  P(90%)={:.4}", m.p_opt, m.baseline_p_opt, m.p_90);
        for (idx, pr) in probs.iter().take(3) {
            println!("    {:0w$b}  {:.4}", idx, pr, w = inst.num_x_bits());
        }
    }
    Ok(())
}
