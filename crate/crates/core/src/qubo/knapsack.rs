use super::{BitLayout, QuadraticModel};
use crate::error::{Error, Result};
use crate::instances::KnapsackInstance;
use serde::{Deserialize, Serialize};

/// Which capacity encoding the circuit Hamiltonian uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Slack bits turn each capacity inequality into an equality penalty.
    Standard,
    /// Capacity treated as an equality over x-bits only.
    NoSlack,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::NoSlack => "no-slack",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "slack" => Ok(Variant::Standard),
            "no-slack" | "noslack" => Ok(Variant::NoSlack),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// Multipliers of the single-assignment penalty (`a`), the capacity penalty
/// (`b`) and the objective (`c`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PenaltyWeights {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "penalty weight {name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { a, b, c })
    }
}

/// `B = sum of weights + sum of values`, `C = 1`; `A = B` with slack bits and
/// `A = 50 B` without.
pub fn default_weights(inst: &KnapsackInstance, variant: Variant) -> PenaltyWeights {
    let b = inst.weight_value_sum() as f64;
    let a = match variant {
        Variant::Standard => b,
        Variant::NoSlack => 50.0 * b,
    };
    PenaltyWeights { a, b, c: 1.0 }
}

/// `-sum_k sum_i v_{k,i} x_{k,i}`.
pub fn term_h_obj(inst: &KnapsackInstance) -> QuadraticModel {
    let mut m = QuadraticModel::zeros(BitLayout::x_only(inst));
    for k in 0..inst.num_knapsacks() {
        for i in 0..inst.num_items() {
            m.add_linear(inst.x_index(k, i), -(inst.value(k, i) as f64));
        }
    }
    m
}

/// `sum_i S_i (S_i - 1)` with `S_i = sum_k x_{k,i}`: nonzero exactly when an
/// item sits in more than one knapsack.
pub fn term_h_single(inst: &KnapsackInstance) -> QuadraticModel {
    let mut m = QuadraticModel::zeros(BitLayout::x_only(inst));
    for i in 0..inst.num_items() {
        let terms: Vec<_> = (0..inst.num_knapsacks())
            .map(|k| (inst.x_index(k, i), 1.0))
            .collect();
        m.add_squared(&terms, 0.0, 1.0);
        for &(q, _) in &terms {
            m.add_linear(q, -1.0);
        }
    }
    m
}

/// `sum_k (sum_i w_i x_{k,i} + sum_b 2^b y_{k,b} - c_k)^2` on the slack layout.
pub fn term_h_capacity_slack(inst: &KnapsackInstance, layout: &BitLayout) -> QuadraticModel {
    let mut m = QuadraticModel::zeros(layout.clone());
    for (k, span) in layout.slack_spans.iter().enumerate() {
        let mut terms: Vec<_> = (0..inst.num_items())
            .map(|i| (inst.x_index(k, i), inst.weights()[i] as f64))
            .collect();
        terms.extend((0..span.len).map(|b| (span.start + b, (1u64 << b) as f64)));
        m.add_squared(&terms, -(inst.capacities()[k] as f64), 1.0);
    }
    m
}

/// `sum_k (sum_i w_i x_{k,i} - c_k)^2`: capacity as an equality, no slack.
pub fn term_h_capacity_noslack(inst: &KnapsackInstance) -> QuadraticModel {
    let mut m = QuadraticModel::zeros(BitLayout::x_only(inst));
    for k in 0..inst.num_knapsacks() {
        let terms: Vec<_> = (0..inst.num_items())
            .map(|i| (inst.x_index(k, i), inst.weights()[i] as f64))
            .collect();
        m.add_squared(&terms, -(inst.capacities()[k] as f64), 1.0);
    }
    m
}

/// `A H_single + B H_capacity + C H_obj` for the chosen capacity encoding.
pub fn build_hamiltonian(
    inst: &KnapsackInstance,
    variant: Variant,
    weights: PenaltyWeights,
) -> QuadraticModel {
    let (layout, capacity) = match variant {
        Variant::Standard => {
            let layout = BitLayout::with_slack(inst);
            let cap = term_h_capacity_slack(inst, &layout);
            (layout, cap)
        }
        Variant::NoSlack => (BitLayout::x_only(inst), term_h_capacity_noslack(inst)),
    };
    let mut m = QuadraticModel::zeros(layout);
    m.add_scaled(&term_h_single(inst), weights.a);
    m.add_scaled(&capacity, weights.b);
    m.add_scaled(&term_h_obj(inst), weights.c);
    m
}

/// Weighted contributions of the three terms at one bitstring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValues {
    pub single: f64,
    pub capacity: f64,
    pub objective: f64,
}

impl TermValues {
    pub fn total(&self) -> f64 {
        self.single + self.capacity + self.objective
    }
}

/// Splits the energy of `bits` into `A H_single`, `B H_capacity`, `C H_obj`.
pub fn weighted_terms(
    inst: &KnapsackInstance,
    variant: Variant,
    weights: PenaltyWeights,
    bits: &[bool],
) -> Result<TermValues> {
    let num_x = inst.num_x_bits();
    let expected = match variant {
        Variant::Standard => BitLayout::with_slack(inst).total,
        Variant::NoSlack => num_x,
    };
    if bits.len() != expected {
        return Err(Error::DimensionMismatch {
            path: "bits".into(),
            expected,
            found: bits.len(),
        });
    }
    let x = &bits[..num_x];
    let capacity = match variant {
        Variant::Standard => term_h_capacity_slack(inst, &BitLayout::with_slack(inst)).energy(bits)?,
        Variant::NoSlack => term_h_capacity_noslack(inst).energy(x)?,
    };
    Ok(TermValues {
        single: weights.a * term_h_single(inst).energy(x)?,
        capacity: weights.b * capacity,
        objective: weights.c * term_h_obj(inst).energy(x)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{catalog, oracle::brute_force_qubo_min};
    use crate::qubo::index_to_bits;

    fn s0() -> KnapsackInstance {
        catalog::scenario(0).unwrap()
    }

    #[test]
    fn h_obj_scenario_zero() {
        let m = term_h_obj(&s0());
        assert_eq!(m.linear(), &[-19.0, -16.0]);
        assert!(m.quadratic().is_empty());
        assert_eq!(m.offset(), 0.0);
        assert_eq!(m.energy(&[false, false]).unwrap(), 0.0);
        assert_eq!(m.energy(&[true, false]).unwrap(), -19.0);
    }

    #[test]
    fn h_single_vanishes_for_one_knapsack() {
        for id in 0..10 {
            let inst = catalog::scenario(id).unwrap();
            let m = term_h_single(&inst);
            assert!(m.linear().iter().all(|&c| c == 0.0));
            assert!(m.quadratic().is_empty());
            assert_eq!(m.offset(), 0.0);
        }
    }

    #[test]
    fn h_single_counts_double_assignment() {
        let inst = catalog::scenario(10).unwrap();
        let m = term_h_single(&inst);
        let mut bits = vec![false; 6];
        bits[inst.x_index(0, 1)] = true;
        bits[inst.x_index(1, 1)] = true;
        assert_eq!(m.energy(&bits).unwrap(), 2.0);
        bits[inst.x_index(1, 1)] = false;
        bits[inst.x_index(1, 2)] = true;
        assert_eq!(m.energy(&bits).unwrap(), 0.0);
    }

    #[test]
    fn h_single_nonnegative_and_zero_iff_single() {
        let inst = catalog::scenario(20).unwrap();
        let m = term_h_single(&inst);
        let n = inst.num_x_bits();
        for idx in (0..1u64 << n).step_by(37) {
            let bits = index_to_bits(idx, n);
            let e = m.energy(&bits).unwrap();
            let single = (0..inst.num_items()).all(|i| {
                (0..inst.num_knapsacks())
                    .filter(|&k| bits[inst.x_index(k, i)])
                    .count()
                    <= 1
            });
            assert!(e >= 0.0);
            assert_eq!(e == 0.0, single, "index {idx}");
        }
    }

    #[test]
    fn capacity_slack_scenario_zero() {
        let inst = s0();
        let layout = BitLayout::with_slack(&inst);
        assert_eq!(layout.slack_spans[0].len, 4);
        let m = term_h_capacity_slack(&inst, &layout);
        // item 0 packed (load 4) with slack 5 = 0b0101
        let idx = 0b01u64 | (0b0101 << 2);
        assert_eq!(m.energy_index(idx), 0.0);
        assert_eq!(m.energy_index(0), 81.0);
    }

    #[test]
    fn capacity_noslack_scenario_zero() {
        let m = term_h_capacity_noslack(&s0());
        assert_eq!(m.energy(&[true, false]).unwrap(), 25.0);
        assert_eq!(m.energy(&[true, true]).unwrap(), 1.0);
        let exact = catalog::scenario(1).unwrap();
        // weights (2,2,2,3), capacity 3: item 3 alone fills it exactly
        let m1 = term_h_capacity_noslack(&exact);
        assert_eq!(m1.energy(&[false, false, false, true]).unwrap(), 0.0);
    }

    #[test]
    fn every_feasible_load_has_zero_slack_setting() {
        for row in catalog::ROWS.iter().take(16) {
            let inst = row.instance();
            let layout = BitLayout::with_slack(&inst);
            let m = term_h_capacity_slack(&inst, &layout);
            for k in 0..inst.num_knapsacks() {
                let c = inst.capacities()[k];
                for load in 0..=c {
                    let gap = c - load;
                    assert!(gap < (1u64 << layout.slack_spans[k].len));
                }
            }
            // empty x with slack encoding full capacity is a zero of the term
            let idx = layout
                .slack_spans
                .iter()
                .zip(inst.capacities())
                .fold(0u64, |acc, (s, &c)| acc | (c << s.start));
            assert_eq!(m.energy_index(idx), 0.0, "scenario {}", row.id);
        }
    }

    #[test]
    fn default_weights_scenario_zero() {
        let inst = s0();
        let std_w = default_weights(&inst, Variant::Standard);
        assert_eq!((std_w.a, std_w.b, std_w.c), (45.0, 45.0, 1.0));
        let ns = default_weights(&inst, Variant::NoSlack);
        assert_eq!((ns.a, ns.b, ns.c), (2250.0, 45.0, 1.0));
        for inst in catalog::load_catalog() {
            assert_eq!(default_weights(&inst, Variant::NoSlack).c, 1.0);
        }
    }

    #[test]
    fn noslack_energies_scenario_zero() {
        let w = PenaltyWeights::new(45.0, 45.0, 1.0).unwrap();
        let h = build_hamiltonian(&s0(), Variant::NoSlack, w);
        assert_eq!(h.num_vars(), 2);
        assert_eq!(h.energy(&[true, true]).unwrap(), 10.0);
        assert_eq!(h.energy(&[true, false]).unwrap(), 1106.0);
        assert_eq!(h.energy(&[false, false]).unwrap(), 45.0 * 81.0);
    }

    #[test]
    fn all_zero_noslack_is_capacity_squares() {
        for inst in catalog::load_catalog() {
            let w = default_weights(&inst, Variant::NoSlack);
            let h = build_hamiltonian(&inst, Variant::NoSlack, w);
            let expected: f64 = inst.capacities().iter().map(|&c| (c * c) as f64).sum();
            assert_eq!(h.energy_index(0), w.b * expected);
        }
    }

    #[test]
    fn standard_ground_state_scenario_zero() {
        let inst = s0();
        let h = build_hamiltonian(&inst, Variant::Standard, default_weights(&inst, Variant::Standard));
        let min = brute_force_qubo_min(&h).unwrap();
        assert_eq!(min.min_energy, -19.0);
        assert_eq!(min.argmins, vec![0b01u64 | (5 << 2)]);
    }

    #[test]
    fn term_split_scenario_zero() {
        let w = PenaltyWeights::new(45.0, 45.0, 1.0).unwrap();
        let t = weighted_terms(&s0(), Variant::NoSlack, w, &[true, true]).unwrap();
        assert_eq!((t.single, t.capacity, t.objective), (0.0, 45.0, -35.0));
        assert!(weighted_terms(&s0(), Variant::Standard, w, &[true, true]).is_err());
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(PenaltyWeights::new(0.0, 1.0, 1.0).is_err());
        assert!(PenaltyWeights::new(1.0, -1.0, 1.0).is_err());
        assert!(PenaltyWeights::new(1.0, 1.0, f64::NAN).is_err());
    }
}
