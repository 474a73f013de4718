//! Exact enumeration oracles: the knapsack optimum and the QUBO ground state.

use super::{Assignment, KnapsackInstance};
use crate::error::{Error, Result};
use crate::qubo::QuadraticModel;
use std::collections::BTreeMap;

pub const MAX_ENUMERATION_BITS: usize = 30;
pub const MAX_QUBO_VARS: usize = 24;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimal_value: u64,
    /// All optimal assignments, ordered by x-bit index.
    pub optimal_assignments: Vec<Assignment>,
    /// Feasible assignments with `10 * value >= 9 * optimal_value`.
    pub count_90pct: u64,
    /// Number of feasible assignments per total value.
    pub value_histogram: BTreeMap<u64, u64>,
}

impl OracleResult {
    /// Feasible assignments with `den * value >= num * optimal_value`.
    pub fn count_at_least(&self, num: u64, den: u64) -> u64 {
        self.value_histogram
            .range(..)
            .filter(|(&v, _)| den * v >= num * self.optimal_value)
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn num_feasible(&self) -> u64 {
        self.value_histogram.values().sum()
    }

    /// x-bit indices of the optimal assignments.
    pub fn optimal_indices(&self) -> Vec<u64> {
        self.optimal_assignments.iter().map(Assignment::to_index).collect()
    }

    /// True iff `value` of a feasible assignment reaches 90% of the optimum.
    pub fn is_90pct(&self, value: u64) -> bool {
        10 * value >= 9 * self.optimal_value
    }
}

struct Search<'a> {
    inst: &'a KnapsackInstance,
    loads: Vec<u64>,
    placement: Vec<Option<usize>>,
    histogram: BTreeMap<u64, u64>,
    best: u64,
    best_placements: Vec<Vec<Option<usize>>>,
}

impl Search<'_> {
    fn visit(&mut self, item: usize, value: u64) {
        if item == self.inst.num_items() {
            *self.histogram.entry(value).or_insert(0) += 1;
            if value > self.best {
                self.best = value;
                self.best_placements.clear();
            }
            if value == self.best {
                self.best_placements.push(self.placement.clone());
            }
            return;
        }
        self.placement[item] = None;
        self.visit(item + 1, value);
        let w = self.inst.weights()[item];
        for k in 0..self.inst.num_knapsacks() {
            // loads only grow, so an overfull partial placement can be pruned
            if self.loads[k] + w <= self.inst.capacities()[k] {
                self.loads[k] += w;
                self.placement[item] = Some(k);
                self.visit(item + 1, value + self.inst.value(k, item));
                self.loads[k] -= w;
            }
        }
        self.placement[item] = None;
    }
}

/// Enumerates every placement of items into knapsacks (or none), keeping the
/// feasible ones.
pub fn brute_force_solve(inst: &KnapsackInstance) -> Result<OracleResult> {
    let bits = inst.num_x_bits();
    if bits > MAX_ENUMERATION_BITS {
        return Err(Error::TooLarge {
            what: "knapsack instance",
            size: bits,
            limit: MAX_ENUMERATION_BITS,
        });
    }
    let mut s = Search {
        inst,
        loads: vec![0; inst.num_knapsacks()],
        placement: vec![None; inst.num_items()],
        histogram: BTreeMap::new(),
        best: 0,
        best_placements: Vec::new(),
    };
    s.visit(0, 0);

    let mut optimal_assignments: Vec<Assignment> = s
        .best_placements
        .iter()
        .map(|p| Assignment::from_placement(inst.num_knapsacks(), p).expect("valid placement"))
        .collect();
    optimal_assignments.sort_by_key(Assignment::to_index);
    let best = s.best;
    let count_90pct = s
        .histogram
        .iter()
        .filter(|(&v, _)| 10 * v >= 9 * best)
        .map(|(_, &c)| c)
        .sum();
    Ok(OracleResult {
        optimal_value: best,
        optimal_assignments,
        count_90pct,
        value_histogram: s.histogram,
    })
}

/// Exact ground energy of a QUBO and every bitstring attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMinimum {
    pub min_energy: f64,
    /// Basis indices (variable `q` = bit `q`), ascending.
    pub argmins: Vec<u64>,
}

/// Gray-code enumeration of all `2^n` bitstrings, one bit flip per step.
pub fn brute_force_qubo_min(model: &QuadraticModel) -> Result<QuboMinimum> {
    let n = model.num_vars();
    if n > MAX_QUBO_VARS {
        return Err(Error::TooLarge {
            what: "QUBO",
            size: n,
            limit: MAX_QUBO_VARS,
        });
    }
    let adj = model.neighbors();
    let lin = model.linear();
    let scale = lin
        .iter()
        .chain(model.quadratic().values())
        .fold(model.offset().abs(), |m, c| m.max(c.abs()))
        .max(1.0);
    let tol = 1e-9 * scale;

    let mut x = 0u64;
    let mut e = model.offset();
    let mut best = e;
    let mut candidates = vec![0u64];
    for step in 1u64..(1u64 << n) {
        let q = step.trailing_zeros() as usize;
        let field = lin[q]
            + adj[q]
                .iter()
                .filter(|(j, _)| (x >> j) & 1 == 1)
                .map(|(_, c)| c)
                .sum::<f64>();
        if (x >> q) & 1 == 1 {
            e -= field;
        } else {
            e += field;
        }
        x ^= 1 << q;
        if step % 4096 == 0 {
            e = model.energy_index(x);
        }
        if e < best - tol {
            best = e;
            candidates.clear();
            candidates.push(x);
        } else if e <= best + tol {
            best = best.min(e);
            candidates.push(x);
        }
    }

    // Incremental sums drift; settle ties on freshly evaluated energies.
    let exact: Vec<(u64, f64)> = candidates
        .into_iter()
        .map(|x| (x, model.energy_index(x)))
        .collect();
    let min_energy = exact.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    let mut argmins: Vec<u64> = exact
        .into_iter()
        .filter(|&(_, e)| e <= min_energy + tol)
        .map(|(x, _)| x)
        .collect();
    argmins.sort_unstable();
    Ok(QuboMinimum {
        min_energy,
        argmins,
    })
}
