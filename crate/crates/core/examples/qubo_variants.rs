//! Slack and slack-free Hamiltonians for one scenario, plus their Ising form.

use qineq::instances::{brute_force_qubo_min, catalog};
use qineq::qubo::{build_hamiltonian, default_weights, index_to_bits, qubo_to_ising, weighted_terms, Variant};

fn main() -> qineq::Result<()> {
    let id = std::env::args().nth(1).map_or(3, |s| s.parse().expect("scenario id"));
    let inst = catalog::scenario(id)?;
    for variant in [Variant::Standard, Variant::NoSlack] {
        let w = default_weights(&inst, variant);
        let q = build_hamiltonian(&inst, variant, w);
        let ising = qubo_to_ising(&q);
        let min = brute_force_qubo_min(&q)?;
        let bits = index_to_bits(min.argmins[0], q.num_vars());
        let t = weighted_terms(&inst, variant, w, &bits)?;
        println!("{variant}: {} vars, A={} B={} C={}", q.num_vars(), w.a, w.b, w.c);
        println!("  ground energy {} with {} ground states", min.min_energy, min.argmins.len());
        println!("  terms at ground: single {} capacity {} objective {}", t.single, t.capacity, t.objective);
        println!("  ising nu_max {}", ising.max_abs_coefficient());
    }
    Ok(())
}
