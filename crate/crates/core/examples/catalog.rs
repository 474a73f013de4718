//! Scenario catalog and brute-force optima.

use qineq::instances::{brute_force_solve, catalog};

fn main() -> qineq::Result<()> {
    for inst in catalog::load_catalog() {
        let r = brute_force_solve(&inst)?;
        println!(
            "scenario {:>2}: {}x{} items, capacities {:?}, optimum {} ({} optima, {} feasible, {} within 90%)",
            inst.scenario_id().unwrap(),
            inst.num_knapsacks(),
            inst.num_items(),
            inst.capacities(),
            r.optimal_value,
            r.optimal_assignments.len(),
            r.num_feasible(),
            r.count_90pct
        );
    }
    Ok(())
}
