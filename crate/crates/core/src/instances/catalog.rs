//! The 22 built-in multi-knapsack scenarios.
//!
//! Each row also carries the published summary columns (logical bits, slack
//! bits, optimal value, number of optima) so the brute-force oracle can be
//! checked against them.

use super::KnapsackInstance;
use crate::error::{Error, Result};

/// One row of the scenario table.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioRow {
    pub id: usize,
    pub capacities: &'static [u64],
    pub weights: &'static [u64],
    pub values: &'static [&'static [u64]],
    pub logical_bits: usize,
    pub slack_bits: usize,
    pub optimal_value: u64,
    pub num_optima: usize,
}

impl ScenarioRow {
    pub fn instance(&self) -> KnapsackInstance {
        KnapsackInstance::new(
            Some(self.id),
            self.capacities.to_vec(),
            self.weights.to_vec(),
            self.values.iter().map(|r| r.to_vec()).collect(),
        )
        .expect("catalog rows are valid")
    }
}

macro_rules! row {
    ($id:expr, [$($c:expr),+], [$($w:expr),+], [$([$($v:expr),+]),+], $lb:expr, $sb:expr, $opt:expr, $nopt:expr) => {
        ScenarioRow {
            id: $id,
            capacities: &[$($c),+],
            weights: &[$($w),+],
            values: &[$(&[$($v),+]),+],
            logical_bits: $lb,
            slack_bits: $sb,
            optimal_value: $opt,
            num_optima: $nopt,
        }
    };
}

pub const NUM_SCENARIOS: usize = 22;

/// Scenarios used by the default experiment sweep.
pub const DEFAULT_SWEEP: std::ops::Range<usize> = 0..20;

pub static ROWS: [ScenarioRow; NUM_SCENARIOS] = [
    row!(0, [9], [4, 6], [[19, 16]], 2, 4, 19, 1),
    row!(1, [3], [2, 2, 2, 3], [[4, 4, 1, 2]], 4, 2, 4, 2),
    row!(2, [3], [3, 2, 2, 2, 3, 2], [[1, 3, 5, 2, 4, 1]], 6, 2, 5, 1),
    row!(3, [10], [6, 6, 3, 7], [[19, 19, 17, 17]], 4, 4, 36, 2),
    row!(4, [8], [2, 6, 5, 5, 4], [[15, 15, 16, 17, 17]], 5, 4, 32, 2),
    row!(5, [8], [2, 4, 5, 2, 3], [[18, 17, 19, 18, 19]], 5, 4, 55, 1),
    row!(6, [10], [7, 1, 6, 7, 5, 3], [[19, 17, 15, 17, 15, 18]], 6, 4, 50, 2),
    row!(7, [8], [6, 7, 4, 3, 3, 2], [[19, 18, 16, 18, 17, 16]], 6, 4, 51, 1),
    row!(8, [8], [5, 4, 1, 5, 4, 1, 2, 3], [[17, 16, 17, 15, 18, 17, 16, 18]], 8, 4, 68, 2),
    row!(9, [9], [3, 2, 5, 1, 4, 4, 1, 4], [[16, 17, 17, 19, 18, 16, 17, 19]], 8, 4, 72, 1),
    row!(10, [11, 8], [2, 4, 4], [[19, 16, 16], [19, 16, 18]], 6, 8, 53, 3),
    row!(11, [8, 11], [3, 6, 2], [[18, 19, 17], [18, 17, 18]], 6, 8, 55, 1),
    row!(12, [9, 9], [4, 6, 4, 6], [[19, 16, 19, 16], [19, 16, 19, 16]], 8, 8, 54, 4),
    row!(13, [10, 10], [7, 1, 5, 7], [[18, 16, 15, 19], [16, 17, 15, 16]], 8, 8, 52, 1),
    row!(
        14,
        [8, 8],
        [7, 4, 3, 7, 4, 3],
        [[15, 15, 18, 15, 15, 18], [15, 15, 18, 15, 15, 18]],
        12, 8, 66, 6
    ),
    row!(
        15,
        [8, 8],
        [5, 5, 5, 5, 5, 5],
        [[19, 17, 18, 19, 17, 18], [19, 17, 18, 19, 17, 18]],
        12, 8, 38, 2
    ),
    row!(
        16,
        [10, 10],
        [6, 6, 3, 7, 6, 6, 3, 7],
        [[19, 19, 17, 17, 19, 19, 17, 17], [19, 19, 17, 17, 19, 19, 17, 17]],
        16, 8, 72, 24
    ),
    row!(
        17,
        [11, 9],
        [1, 6, 4, 5, 7, 3, 4, 5],
        [[19, 19, 17, 15, 19, 15, 16, 15], [19, 15, 18, 15, 15, 18, 18, 17]],
        16, 8, 91, 3
    ),
    row!(
        18,
        [9, 10],
        [3, 5, 2, 3, 2, 6, 5, 2, 7],
        [[15, 18, 15, 17, 16, 18, 16, 16, 15], [18, 15, 18, 17, 16, 16, 19, 18, 17]],
        18, 8, 105, 5
    ),
    row!(
        19,
        [8, 9],
        [1, 5, 1, 1, 5, 7, 7, 5, 3],
        [[18, 15, 15, 16, 17, 16, 19, 15, 17], [18, 15, 16, 16, 16, 18, 15, 19, 15]],
        18, 8, 103, 1
    ),
    row!(
        20,
        [9, 9, 9],
        [4, 6, 4, 6, 4, 6],
        [
            [19, 16, 19, 16, 19, 16],
            [19, 16, 19, 16, 19, 16],
            [19, 16, 19, 16, 19, 16]
        ],
        18, 12, 73, 54
    ),
    row!(
        21,
        [9, 10, 11],
        [7, 6, 7, 5, 5, 4],
        [
            [19, 16, 19, 17, 17, 19],
            [16, 17, 19, 17, 18, 16],
            [15, 16, 19, 17, 17, 19]
        ],
        18, 12, 92, 1
    ),
];

/// All 22 scenarios in id order.
pub fn load_catalog() -> Vec<KnapsackInstance> {
    ROWS.iter().map(ScenarioRow::instance).collect()
}

pub fn scenario(id: usize) -> Result<KnapsackInstance> {
    ROWS.get(id)
        .map(ScenarioRow::instance)
        .ok_or(Error::UnknownScenario(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_all_rows() {
        let cat = load_catalog();
        assert_eq!(cat.len(), 22);
        for (i, inst) in cat.iter().enumerate() {
            assert_eq!(inst.scenario_id(), Some(i));
        }
    }

    #[test]
    fn scenario_zero_uses_capacity_nine() {
        let s = scenario(0).unwrap();
        assert_eq!(s.num_knapsacks(), 1);
        assert_eq!(s.capacities(), &[9]);
        assert_eq!(s.weights(), &[4, 6]);
        assert_eq!(s.values(), &[vec![19, 16]]);
    }

    #[test]
    fn scenario_ten_shape() {
        let s = scenario(10).unwrap();
        assert_eq!(s.num_knapsacks(), 2);
        assert_eq!(s.capacities(), &[11, 8]);
        assert_eq!(s.num_items(), 3);
        assert_eq!(s.weights(), &[2, 4, 4]);
    }

    #[test]
    fn bit_counts_match_table_columns() {
        for row in ROWS.iter() {
            let inst = row.instance();
            assert_eq!(inst.num_x_bits(), row.logical_bits, "scenario {}", row.id);
            assert_eq!(inst.total_slack_bits(), row.slack_bits, "scenario {}", row.id);
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(scenario(22), Err(Error::UnknownScenario(22))));
    }
}
