use crate::error::Result;
use crate::instances::catalog::{self, ScenarioRow};
use crate::instances::{brute_force_qubo_min, brute_force_solve, KnapsackInstance};
use crate::qubo::{build_hamiltonian, index_to_bits, weighted_terms, PenaltyWeights, Variant};
use serde::Serialize;

/// Instances above this many x-bits are not checked against the term table.
pub const TERM_TABLE_MAX_X_BITS: usize = 18;

/// Optimal weighted `(H_single, H_capacity, H_obj)` of the no-slack
/// Hamiltonian per scenario, with `A = B` and with `A = 50 B`.
pub const TERM_TABLE: [(usize, [i64; 3], [i64; 3]); 20] = [
    (0, [0, 45, -35], [0, 45, -35]),
    (1, [0, 0, -2], [0, 0, -2]),
    (2, [0, 0, -4], [0, 0, -4]),
    (3, [0, 0, -34], [0, 0, -34]),
    (4, [0, 0, -30], [0, 0, -30]),
    (5, [0, 0, -53], [0, 0, -53]),
    (6, [0, 0, -50], [0, 0, -50]),
    (7, [0, 0, -51], [0, 0, -51]),
    (8, [0, 0, -68], [0, 0, -68]),
    (9, [0, 0, -71], [0, 0, -71]),
    (10, [456, 114, -85], [0, 4674, -53]),
    (11, [472, 0, -89], [0, 4012, -53]),
    (12, [0, 320, -70], [0, 320, -70]),
    (13, [0, 1216, -67], [0, 1216, -67]),
    (14, [0, 220, -45], [0, 220, -45]),
    (15, [0, 1968, -74], [0, 1968, -74]),
    (16, [0, 0, -68], [0, 0, -68]),
    (17, [0, 0, -90], [0, 0, -90]),
    (18, [0, 0, -105], [0, 0, -105]),
    (19, [0, 0, -87], [0, 0, -87]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub table: &'static str,
    pub scenario: usize,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| !r.ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "{} {:<10} scenario {:>2}: expected {} found {}\n",
                if r.ok { "ok  " } else { "FAIL" },
                r.table,
                r.scenario,
                r.expected,
                r.found
            ));
        }
        let bad = self.mismatches().count();
        out.push_str(&format!("{} rows checked, {} mismatches\n", self.rows.len(), bad));
        out
    }
}

fn check(table: &'static str, scenario: usize, expected: String, found: String) -> RowCheck {
    RowCheck {
        table,
        scenario,
        ok: expected == found,
        expected,
        found,
    }
}

fn term_triples(inst: &KnapsackInstance, w: PenaltyWeights) -> Result<Vec<[i64; 3]>> {
    let model = build_hamiltonian(inst, Variant::NoSlack, w);
    let min = brute_force_qubo_min(&model)?;
    let mut out = Vec::new();
    for &x in &min.argmins {
        let t = weighted_terms(inst, Variant::NoSlack, w, &index_to_bits(x, model.num_vars()))?;
        let triple = [t.single, t.capacity, t.objective].map(|v| v.round() as i64);
        if !out.contains(&triple) {
            out.push(triple);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn fmt_triples(ts: &[[i64; 3]]) -> String {
    ts.iter()
        .map(|t| format!("({}, {}, {})", t[0], t[1], t[2]))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Checks `instances` against the scenario rows and the term table.
pub fn verify_tables_against(
    instances: &[KnapsackInstance],
    rows: &[ScenarioRow],
    terms: &[(usize, [i64; 3], [i64; 3])],
) -> Result<TableReport> {
    let mut report = TableReport::default();
    for (inst, row) in instances.iter().zip(rows) {
        let oracle = brute_force_solve(inst)?;
        report.rows.push(check(
            "scenarios",
            row.id,
            format!(
                "bits {}+{}, optimum {} x{}",
                row.logical_bits, row.slack_bits, row.optimal_value, row.num_optima
            ),
            format!(
                "bits {}+{}, optimum {} x{}",
                inst.num_x_bits(),
                inst.total_slack_bits(),
                oracle.optimal_value,
                oracle.optimal_assignments.len()
            ),
        ));
    }
    for &(id, at_b, at_50b) in terms {
        let Some(inst) = instances.iter().find(|i| i.scenario_id() == Some(id)) else {
            continue;
        };
        if inst.num_x_bits() > TERM_TABLE_MAX_X_BITS {
            continue;
        }
        let b = inst.weight_value_sum() as f64;
        for (table, factor, expected) in [("terms(A)", 1.0, at_b), ("terms(50A)", 50.0, at_50b)] {
            let w = PenaltyWeights::new(factor * b, b, 1.0)?;
            report.rows.push(check(table, id, fmt_triples(&[expected]), fmt_triples(&term_triples(inst, w)?)));
        }
    }
    Ok(report)
}

/// Brute-force check of the shipped catalog.
pub fn verify_tables() -> Result<TableReport> {
    verify_tables_against(&catalog::load_catalog(), &catalog::ROWS, &TERM_TABLE)
}
