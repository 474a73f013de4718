//! Adam-optimized QAOA angles from a sine-schedule warm start.

use qineq::evaluation::{compute_metrics, Protocol};
use qineq::instances::{brute_force_solve, catalog};
use qineq::optimizer::{optimize_params, OptimizerConfig, QaoaProblem};
use qineq::qubo::{default_weights, Variant};
use qineq::schedule::{derive_params, ScheduleSpec};

fn main() -> qineq::Result<()> {
    let inst = catalog::scenario(1)?;
    let oracle = brute_force_solve(&inst)?;
    let protocol = Protocol::NoSlack;
    let shots = 100 * protocol.num_qubits(&inst) as u64;
    let problem = QaoaProblem::new(&inst, protocol, default_weights(&inst, Variant::NoSlack), Some(shots))?;
    let init = derive_params(&ScheduleSpec::sine(0.75, 2)?)?;
    let (params, trace) = optimize_params(&problem, &init, 42, &OptimizerConfig::default())?;
    println!("stopped after {} iterations ({:?})", trace.iterations_used, trace.stop_reason);
    println!("energy {:.3} -> {:.3}", trace.values[0], trace.values.last().unwrap());
    println!("betas {:?}\ngammas {:?}", params.betas, params.gammas);
    let samples = problem.state(&params)?.sample(shots, 7)?;
    let m = compute_metrics(&samples, &inst, protocol, &oracle)?;
    println!("P(opt) {:.3} vs uniform {:.3}", m.p_opt, m.baseline_p_opt);
    Ok(())
}
