//! Optimizing the total annealing time of a fixed-shape schedule.

use qineq::evaluation::Protocol;
use qineq::instances::catalog;
use qineq::optimizer::{optimize_annealing_time, OptimizerConfig};
use qineq::qubo::{default_weights, Variant};
use qineq::schedule::ScheduleKind;

fn main() -> qineq::Result<()> {
    let inst = catalog::scenario(2)?;
    let cfg = OptimizerConfig {
        learning_rate: 0.05,
        ..Default::default()
    };
    for p in [2, 4, 8] {
        let (total, trace) = optimize_annealing_time(
            &inst,
            Protocol::SlackXOnly,
            ScheduleKind::Sinusoidal,
            p,
            default_weights(&inst, Variant::Standard),
            None,
            3,
            &cfg,
        )?;
        println!(
            "p={p}: T {:.3} -> {:.3} in {} iterations, <F> {:.2} -> {:.2}",
            0.75 * p as f64,
            total,
            trace.iterations_used,
            trace.values[0],
            trace.values.iter().cloned().fold(f64::INFINITY, f64::min)
        );
    }
    Ok(())
}
