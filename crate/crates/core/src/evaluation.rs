//! Scoring of measured bitstrings under the three constraint-handling
//! protocols, plus the success-probability metrics.

use crate::error::{Error, Result};
use crate::instances::{Assignment, KnapsackInstance, OracleResult};
use crate::qubo::{build_hamiltonian, BitLayout, PenaltyWeights, QuadraticModel, Variant};
use crate::statevector::{SampleSet, StateVector};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// How the circuit Hamiltonian is built and how samples are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Slack bits in the circuit; score = full QUBO energy of x and y bits.
    StandardSlack,
    /// Slack bits in the circuit; score = classical inequality objective of x.
    SlackXOnly,
    /// No slack bits; circuit uses the equality penalty, score = classical objective.
    NoSlack,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::NoSlack, Protocol::SlackXOnly, Protocol::StandardSlack];

    /// Hamiltonian variant used in the circuit.
    pub fn variant(self) -> Variant {
        match self {
            Protocol::StandardSlack | Protocol::SlackXOnly => Variant::Standard,
            Protocol::NoSlack => Variant::NoSlack,
        }
    }

    pub fn layout(self, inst: &KnapsackInstance) -> BitLayout {
        match self.variant() {
            Variant::Standard => BitLayout::with_slack(inst),
            Variant::NoSlack => BitLayout::x_only(inst),
        }
    }

    /// Circuit width.
    pub fn num_qubits(self, inst: &KnapsackInstance) -> usize {
        self.layout(inst).total
    }
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Protocol::StandardSlack => "standard-slack",
            Protocol::SlackXOnly => "slack-x-only",
            Protocol::NoSlack => "no-slack",
        })
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard-slack" | "standard" => Ok(Protocol::StandardSlack),
            "slack-x-only" | "x-only" => Ok(Protocol::SlackXOnly),
            "no-slack" | "noslack" => Ok(Protocol::NoSlack),
            _ => Err(Error::InvalidArgument(format!("unknown protocol `{s}`"))),
        }
    }
}

fn x_stats(inst: &KnapsackInstance, x_index: u64) -> (Vec<u64>, u64, u64, u64) {
    let (m, n) = (inst.num_knapsacks(), inst.num_items());
    let on = |k: usize, i: usize| (x_index >> (k * n + i)) & 1 == 1;
    let mut loads = vec![0u64; m];
    let mut value = 0u64;
    let mut single = 0u64;
    for i in 0..n {
        let mut placed = 0u64;
        for (k, load) in loads.iter_mut().enumerate() {
            if on(k, i) {
                *load += inst.weights()[i];
                value += inst.value(k, i);
                placed += 1;
            }
        }
        single += placed * placed.saturating_sub(1);
    }
    let excess_sq = loads
        .iter()
        .zip(inst.capacities())
        .map(|(&l, &c)| l.saturating_sub(c).pow(2))
        .sum();
    (loads, value, single, excess_sq)
}

/// `C H_obj + A H_single + B sum_k max(0, load_k - c_k)^2` on x-bits packed
/// into the low bits of `x_index`.
pub fn classical_objective_index(inst: &KnapsackInstance, x_index: u64, w: PenaltyWeights) -> f64 {
    let (_, value, single, excess_sq) = x_stats(inst, x_index);
    -w.c * value as f64 + w.a * single as f64 + w.b * excess_sq as f64
}

pub fn classical_objective(inst: &KnapsackInstance, x_bits: &[bool], w: PenaltyWeights) -> Result<f64> {
    if x_bits.len() != inst.num_x_bits() {
        return Err(Error::DimensionMismatch {
            path: "x_bits".into(),
            expected: inst.num_x_bits(),
            found: x_bits.len(),
        });
    }
    let idx = x_bits
        .iter()
        .enumerate()
        .fold(0u64, |acc, (q, &b)| acc | ((b as u64) << q));
    Ok(classical_objective_index(inst, idx, w))
}

// Above this width the StandardSlack scores are computed per sample.
const MAX_TABLE_BITS: usize = 22;

/// Scores bitstrings for one (instance, protocol, weights) triple.
#[derive(Debug, Clone)]
pub struct Evaluator {
    inst: KnapsackInstance,
    protocol: Protocol,
    weights: PenaltyWeights,
    layout: BitLayout,
    qubo: Option<QuadraticModel>,
    /// Score lookup: indexed by x-bits for the classical objective, by the
    /// full bitstring for the QUBO energy.
    table: Option<Vec<f64>>,
}

impl Evaluator {
    pub fn new(inst: &KnapsackInstance, protocol: Protocol, weights: PenaltyWeights) -> Self {
        let layout = protocol.layout(inst);
        let (qubo, table) = match protocol {
            Protocol::StandardSlack => {
                let q = build_hamiltonian(inst, Variant::Standard, weights);
                let table = (layout.total <= MAX_TABLE_BITS)
                    .then(|| (0..1u64 << layout.total).map(|b| q.energy_index(b)).collect());
                (Some(q), table)
            }
            Protocol::SlackXOnly | Protocol::NoSlack => {
                let table = (inst.num_x_bits() <= MAX_TABLE_BITS).then(|| {
                    (0..1u64 << inst.num_x_bits())
                        .map(|x| classical_objective_index(inst, x, weights))
                        .collect()
                });
                (None, table)
            }
        };
        Self {
            inst: inst.clone(),
            protocol,
            weights,
            layout,
            qubo,
            table,
        }
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn weights(&self) -> PenaltyWeights {
        self.weights
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total
    }

    /// Score of one measured basis state.
    pub fn score(&self, index: u64) -> f64 {
        match self.protocol {
            Protocol::StandardSlack => match &self.table {
                Some(t) => t[index as usize],
                None => self.qubo.as_ref().expect("standard model").energy_index(index),
            },
            Protocol::SlackXOnly | Protocol::NoSlack => {
                let x = index & self.layout.x_mask();
                match &self.table {
                    Some(t) => t[x as usize],
                    None => classical_objective_index(&self.inst, x, self.weights),
                }
            }
        }
    }

    fn check_width(&self, n: usize) -> Result<()> {
        if n != self.layout.total {
            return Err(Error::DimensionMismatch {
                path: "bitstring width".into(),
                expected: self.layout.total,
                found: n,
            });
        }
        Ok(())
    }

    /// Shot-weighted mean score.
    pub fn expectation_samples(&self, samples: &SampleSet) -> Result<f64> {
        self.check_width(samples.num_qubits)?;
        let total: f64 = samples
            .counts
            .iter()
            .map(|(&idx, &c)| c as f64 * self.score(idx))
            .sum();
        Ok(total / samples.shots as f64)
    }

    /// Exact mean score over `|amp|^2`.
    pub fn expectation_exact(&self, state: &StateVector) -> Result<f64> {
        self.check_width(state.num_qubits())?;
        Ok(state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * self.score(b as u64))
            .sum())
    }

    pub fn expectation_probabilities(&self, probs: &[f64]) -> Result<f64> {
        if !probs.len().is_power_of_two() {
            return Err(Error::InvalidArgument("probability vector length must be 2^n".into()));
        }
        self.check_width(probs.len().trailing_zeros() as usize)?;
        Ok(probs
            .iter()
            .enumerate()
            .map(|(b, p)| p * self.score(b as u64))
            .sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub p_opt: f64,
    pub p_90: f64,
    pub baseline_p_opt: f64,
    pub baseline_p_90: f64,
    /// Best value among samples counted as valid by the protocol (0 if none).
    pub best_value_found: u64,
    pub optimum_found: bool,
}

#[derive(Clone, Copy)]
enum Grade {
    Invalid,
    Valid(u64),
}

struct Grader<'a> {
    inst: &'a KnapsackInstance,
    layout: BitLayout,
    protocol: Protocol,
    cache: HashMap<u64, (bool, Vec<u64>, u64)>,
}

impl Grader<'_> {
    fn grade(&mut self, index: u64) -> Grade {
        let x = index & self.layout.x_mask();
        let inst = self.inst;
        let (feasible, loads, value) = self.cache.entry(x).or_insert_with(|| {
            let (loads, value, single, excess_sq) = x_stats(inst, x);
            (single == 0 && excess_sq == 0, loads, value)
        });
        if !*feasible {
            return Grade::Invalid;
        }
        if self.protocol == Protocol::StandardSlack {
            // slack must encode the exact gap so the capacity penalty vanishes
            let converged = loads
                .iter()
                .zip(inst.capacities())
                .enumerate()
                .all(|(k, (&l, &c))| self.layout.slack_value(index, k) == c - l);
            if !converged {
                return Grade::Invalid;
            }
        }
        Grade::Valid(*value)
    }
}

fn metrics_from_weights(
    inst: &KnapsackInstance,
    protocol: Protocol,
    oracle: &OracleResult,
    weighted: impl Iterator<Item = (u64, f64)>,
    total: f64,
) -> Metrics {
    let mut grader = Grader {
        inst,
        layout: protocol.layout(inst),
        protocol,
        cache: HashMap::new(),
    };
    let (mut opt, mut near, mut best) = (0.0, 0.0, 0u64);
    for (idx, w) in weighted {
        if let Grade::Valid(v) = grader.grade(idx) {
            best = best.max(v);
            if v == oracle.optimal_value {
                opt += w;
            }
            if oracle.is_90pct(v) {
                near += w;
            }
        }
    }
    let space = (inst.num_x_bits() as f64).exp2();
    Metrics {
        p_opt: opt / total,
        p_90: near / total,
        baseline_p_opt: oracle.optimal_assignments.len() as f64 / space,
        baseline_p_90: oracle.count_90pct as f64 / space,
        best_value_found: best,
        optimum_found: best == oracle.optimal_value,
    }
}

/// Fractions of shots that hit optimal and 90%-optimal valid solutions.
pub fn compute_metrics(
    samples: &SampleSet,
    inst: &KnapsackInstance,
    protocol: Protocol,
    oracle: &OracleResult,
) -> Result<Metrics> {
    let width = protocol.num_qubits(inst);
    if samples.num_qubits != width {
        return Err(Error::DimensionMismatch {
            path: "bitstring width".into(),
            expected: width,
            found: samples.num_qubits,
        });
    }
    Ok(metrics_from_weights(
        inst,
        protocol,
        oracle,
        samples.counts.iter().map(|(&i, &c)| (i, c as f64)),
        samples.shots as f64,
    ))
}

/// Same as [`compute_metrics`] with exact probabilities instead of shot counts.
pub fn compute_metrics_exact(
    state: &StateVector,
    inst: &KnapsackInstance,
    protocol: Protocol,
    oracle: &OracleResult,
) -> Result<Metrics> {
    let width = protocol.num_qubits(inst);
    if state.num_qubits() != width {
        return Err(Error::DimensionMismatch {
            path: "bitstring width".into(),
            expected: width,
            found: state.num_qubits(),
        });
    }
    Ok(metrics_from_weights(
        inst,
        protocol,
        oracle,
        state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(b, a)| (b as u64, a.norm_sqr())),
        state.norm_sqr(),
    ))
}

/// Probability mass on x-assignment `x` regardless of slack bits.
pub fn x_marginal(state: &StateVector, layout: &BitLayout, x: &Assignment) -> f64 {
    let target = x.to_index();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| (*b as u64) & layout.x_mask() == target)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
