//! Multi-knapsack instances, the built-in scenario catalog and exact
//! brute-force oracles.
//!
//! Decision variables are laid out knapsack-major: the x-bit for
//! (knapsack `k`, item `i`) lives at flat index `k * num_items + i`.

pub mod catalog;
mod io;
pub mod oracle;

pub use io::{parse_instance, serialize_instance};
pub use oracle::{brute_force_qubo_min, brute_force_solve, OracleResult, QuboMinimum};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "io::RawInstance", into = "io::RawInstance")]
pub struct KnapsackInstance {
    scenario_id: Option<usize>,
    capacities: Vec<u64>,
    weights: Vec<u64>,
    /// `values[k][i]`: value of item `i` when packed into knapsack `k`.
    values: Vec<Vec<u64>>,
}

impl KnapsackInstance {
    /// Builds an instance, checking dimensions and strict positivity.
    pub fn new(
        scenario_id: Option<usize>,
        capacities: Vec<u64>,
        weights: Vec<u64>,
        values: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let signed = |v: &[u64]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        io::RawInstance {
            scenario_id,
            capacities: signed(&capacities),
            weights: signed(&weights),
            values: values.iter().map(|row| signed(row)).collect(),
        }
        .try_into()
    }

    pub fn scenario_id(&self) -> Option<usize> {
        self.scenario_id
    }

    pub fn num_knapsacks(&self) -> usize {
        self.capacities.len()
    }

    pub fn num_items(&self) -> usize {
        self.weights.len()
    }

    /// Number of logical decision bits, `M * N`.
    pub fn num_x_bits(&self) -> usize {
        self.num_knapsacks() * self.num_items()
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacities
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn value(&self, knapsack: usize, item: usize) -> u64 {
        self.values[knapsack][item]
    }

    /// Flat x-bit index of (knapsack, item).
    pub fn x_index(&self, knapsack: usize, item: usize) -> usize {
        knapsack * self.num_items() + item
    }

    /// Slack bits needed for knapsack `k`: `floor(log2 c_k) + 1`.
    pub fn slack_bits(&self, knapsack: usize) -> usize {
        let c = self.capacities[knapsack];
        (u64::BITS - c.leading_zeros()) as usize
    }

    pub fn total_slack_bits(&self) -> usize {
        (0..self.num_knapsacks()).map(|k| self.slack_bits(k)).sum()
    }

    /// Sum of all item weights plus all entries of the value matrix.
    pub fn weight_value_sum(&self) -> u64 {
        self.weights.iter().sum::<u64>() + self.values.iter().flatten().sum::<u64>()
    }

    #[cfg(test)]
    pub(crate) fn with_capacities(&self, capacities: Vec<u64>) -> Result<Self> {
        Self::new(
            self.scenario_id,
            capacities,
            self.weights.clone(),
            self.values.clone(),
        )
    }
}

/// Binary placement matrix `x[k][i]`, stored knapsack-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    num_knapsacks: usize,
    num_items: usize,
    bits: Vec<bool>,
}

impl Assignment {
    pub fn empty(num_knapsacks: usize, num_items: usize) -> Self {
        Self {
            num_knapsacks,
            num_items,
            bits: vec![false; num_knapsacks * num_items],
        }
    }

    pub fn for_instance(inst: &KnapsackInstance) -> Self {
        Self::empty(inst.num_knapsacks(), inst.num_items())
    }

    /// Decodes the low `M * N` bits of a basis-state index.
    pub fn from_index(inst: &KnapsackInstance, index: u64) -> Self {
        let mut a = Self::for_instance(inst);
        for (q, bit) in a.bits.iter_mut().enumerate() {
            *bit = (index >> q) & 1 == 1;
        }
        a
    }

    /// One entry per item: `Some(k)` if the item sits in knapsack `k`.
    pub fn from_placement(
        num_knapsacks: usize,
        placement: &[Option<usize>],
    ) -> Result<Self> {
        let mut a = Self::empty(num_knapsacks, placement.len());
        for (i, slot) in placement.iter().enumerate() {
            if let Some(k) = *slot {
                if k >= num_knapsacks {
                    return Err(Error::InvalidArgument(format!(
                        "item {i} placed in knapsack {k}, only {num_knapsacks} exist"
                    )));
                }
                a.set(k, i, true);
            }
        }
        Ok(a)
    }

    pub fn from_bits(num_knapsacks: usize, num_items: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != num_knapsacks * num_items {
            return Err(Error::DimensionMismatch {
                path: "bits".into(),
                expected: num_knapsacks * num_items,
                found: bits.len(),
            });
        }
        Ok(Self {
            num_knapsacks,
            num_items,
            bits,
        })
    }

    pub fn get(&self, knapsack: usize, item: usize) -> bool {
        self.bits[knapsack * self.num_items + item]
    }

    pub fn set(&mut self, knapsack: usize, item: usize, on: bool) {
        self.bits[knapsack * self.num_items + item] = on;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Basis-state index with x-bit `q` at bit position `q`.
    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &b)| acc | ((b as u64) << q))
    }

    fn check(&self, inst: &KnapsackInstance) -> Result<()> {
        if self.num_knapsacks != inst.num_knapsacks() {
            return Err(Error::DimensionMismatch {
                path: "assignment.knapsacks".into(),
                expected: inst.num_knapsacks(),
                found: self.num_knapsacks,
            });
        }
        if self.num_items != inst.num_items() {
            return Err(Error::DimensionMismatch {
                path: "assignment.items".into(),
                expected: inst.num_items(),
                found: self.num_items,
            });
        }
        Ok(())
    }
}

/// Per-knapsack total weight, ignoring whether items are multiply assigned.
pub fn loads(inst: &KnapsackInstance, a: &Assignment) -> Result<Vec<u64>> {
    a.check(inst)?;
    Ok((0..inst.num_knapsacks())
        .map(|k| {
            (0..inst.num_items())
                .filter(|&i| a.get(k, i))
                .map(|i| inst.weights()[i])
                .sum()
        })
        .collect())
}

/// Every item in at most one knapsack and no capacity exceeded.
pub fn is_feasible(inst: &KnapsackInstance, a: &Assignment) -> Result<bool> {
    let loads = loads(inst, a)?;
    let single = (0..inst.num_items())
        .all(|i| (0..inst.num_knapsacks()).filter(|&k| a.get(k, i)).count() <= 1);
    Ok(single && loads.iter().zip(inst.capacities()).all(|(l, c)| l <= c))
}

/// Total packed value; feasibility is not checked.
pub fn assignment_value(inst: &KnapsackInstance, a: &Assignment) -> Result<u64> {
    a.check(inst)?;
    let mut total = 0;
    for k in 0..inst.num_knapsacks() {
        for i in 0..inst.num_items() {
            if a.get(k, i) {
                total += inst.value(k, i);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario0() -> KnapsackInstance {
        catalog::scenario(0).unwrap()
    }

    #[test]
    fn feasibility_on_scenario_zero() {
        let inst = scenario0();
        let first = Assignment::from_placement(1, &[Some(0), None]).unwrap();
        let both = Assignment::from_placement(1, &[Some(0), Some(0)]).unwrap();
        assert!(is_feasible(&inst, &first).unwrap());
        assert!(!is_feasible(&inst, &both).unwrap());
        assert!(is_feasible(&inst, &Assignment::for_instance(&inst)).unwrap());
    }

    #[test]
    fn value_on_scenario_zero() {
        let inst = scenario0();
        let first = Assignment::from_placement(1, &[Some(0), None]).unwrap();
        let both = Assignment::from_placement(1, &[Some(0), Some(0)]).unwrap();
        assert_eq!(assignment_value(&inst, &first).unwrap(), 19);
        assert_eq!(assignment_value(&inst, &both).unwrap(), 35);
        assert_eq!(
            assignment_value(&inst, &Assignment::for_instance(&inst)).unwrap(),
            0
        );
    }

    #[test]
    fn multiply_assigned_item_is_infeasible() {
        let inst = catalog::scenario(10).unwrap();
        let mut a = Assignment::for_instance(&inst);
        a.set(0, 0, true);
        a.set(1, 0, true);
        assert!(!is_feasible(&inst, &a).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let inst = scenario0();
        let a = Assignment::empty(2, 2);
        assert!(matches!(
            is_feasible(&inst, &a),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(assignment_value(&inst, &Assignment::empty(1, 3)).is_err());
    }

    #[test]
    fn index_round_trip() {
        let inst = catalog::scenario(10).unwrap();
        for idx in 0..(1u64 << inst.num_x_bits()) {
            assert_eq!(Assignment::from_index(&inst, idx).to_index(), idx);
        }
    }

    #[test]
    fn slack_bit_counts() {
        let inst = scenario0();
        assert_eq!(inst.slack_bits(0), 4);
        let s10 = catalog::scenario(10).unwrap();
        assert_eq!(s10.total_slack_bits(), 8);
    }
}
