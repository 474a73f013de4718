//! Binary quadratic models for the knapsack problem, their Ising form, and
//! JSON export.
//!
//! All knapsack coefficients are integers; they are stored as `f64`, which
//! represents every integer below 2^53 exactly, so energies of the catalog
//! models are exact.

mod export;
mod ising;
mod knapsack;

pub use export::{model_from_json, model_to_json};
pub use ising::{qubo_to_ising, IsingModel};
pub use knapsack::{
    build_hamiltonian, default_weights, term_h_capacity_noslack, term_h_capacity_slack,
    term_h_obj, term_h_single, weighted_terms, PenaltyWeights, TermValues, Variant,
};

use crate::error::{Error, Result};
use crate::instances::KnapsackInstance;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Contiguous run of slack bits belonging to one knapsack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackSpan {
    pub start: usize,
    pub len: usize,
}

/// Where logical and slack bits live in a bitstring.
///
/// x-bits occupy `0..num_x` (knapsack-major); slack bits follow, one span per
/// knapsack, lowest power of two first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitLayout {
    pub num_x: usize,
    pub slack_spans: Vec<SlackSpan>,
    pub total: usize,
}

impl BitLayout {
    pub fn x_only(inst: &KnapsackInstance) -> Self {
        Self::plain(inst.num_x_bits())
    }

    /// Layout without any slack, for models that are not tied to an instance.
    pub fn plain(num_vars: usize) -> Self {
        Self {
            num_x: num_vars,
            slack_spans: Vec::new(),
            total: num_vars,
        }
    }

    pub fn with_slack(inst: &KnapsackInstance) -> Self {
        let num_x = inst.num_x_bits();
        let mut start = num_x;
        let slack_spans = (0..inst.num_knapsacks())
            .map(|k| {
                let span = SlackSpan {
                    start,
                    len: inst.slack_bits(k),
                };
                start += span.len;
                span
            })
            .collect();
        Self {
            num_x,
            slack_spans,
            total: start,
        }
    }

    pub fn has_slack(&self) -> bool {
        !self.slack_spans.is_empty()
    }

    /// Mask selecting the x-bits of a basis index.
    pub fn x_mask(&self) -> u64 {
        if self.num_x >= 64 {
            u64::MAX
        } else {
            (1u64 << self.num_x) - 1
        }
    }

    /// Integer encoded by the slack bits of knapsack `k` in basis index `index`.
    pub fn slack_value(&self, index: u64, k: usize) -> u64 {
        let span = self.slack_spans[k];
        (index >> span.start) & ((1u64 << span.len) - 1)
    }
}

/// `offset + sum_i linear[i] x_i + sum_{i<j} quadratic[(i,j)] x_i x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
    layout: BitLayout,
}

impl QuadraticModel {
    pub fn zeros(layout: BitLayout) -> Self {
        Self {
            linear: vec![0.0; layout.total],
            quadratic: BTreeMap::new(),
            offset: 0.0,
            layout,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn layout(&self) -> &BitLayout {
        &self.layout
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// Nonzero couplings keyed by `(i, j)` with `i < j`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    pub fn add_linear(&mut self, i: usize, c: f64) {
        self.linear[i] += c;
    }

    /// Adds `c * x_i * x_j`; `x_i^2 = x_i` folds into the linear term.
    pub fn add_quadratic(&mut self, i: usize, j: usize, c: f64) {
        assert!(i < self.num_vars() && j < self.num_vars(), "variable out of range");
        if i == j {
            self.linear[i] += c;
            return;
        }
        let key = (i.min(j), i.max(j));
        let entry = self.quadratic.entry(key).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.quadratic.remove(&key);
        }
    }

    /// Adds `scale * (sum_t coef_t x_{var_t} + constant)^2`.
    pub fn add_squared(&mut self, terms: &[(usize, f64)], constant: f64, scale: f64) {
        for (a, &(i, ci)) in terms.iter().enumerate() {
            self.add_linear(i, scale * (ci * ci + 2.0 * ci * constant));
            for &(j, cj) in &terms[a + 1..] {
                self.add_quadratic(i, j, scale * 2.0 * ci * cj);
            }
        }
        self.offset += scale * constant * constant;
    }

    /// `self + factor * other`; `other` may be defined on a prefix of our variables.
    pub fn add_scaled(&mut self, other: &QuadraticModel, factor: f64) {
        assert!(
            other.num_vars() <= self.num_vars(),
            "cannot add a model with more variables"
        );
        for (i, &c) in other.linear.iter().enumerate() {
            self.linear[i] += factor * c;
        }
        for (&(i, j), &c) in &other.quadratic {
            self.add_quadratic(i, j, factor * c);
        }
        self.offset += factor * other.offset;
    }

    /// Re-homes the model onto a larger layout, padding new variables with zeros.
    pub fn embedded(&self, layout: BitLayout) -> Self {
        let mut m = Self::zeros(layout);
        m.add_scaled(self, 1.0);
        m
    }

    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                path: "bits".into(),
                expected: self.num_vars(),
                found: bits.len(),
            });
        }
        let mut e = self.offset;
        for (c, &b) in self.linear.iter().zip(bits) {
            if b {
                e += c;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if bits[i] && bits[j] {
                e += c;
            }
        }
        Ok(e)
    }

    /// Energy of the bitstring whose variable `q` is bit `q` of `index`.
    pub fn energy_index(&self, index: u64) -> f64 {
        let on = |q: usize| (index >> q) & 1 == 1;
        let mut e = self.offset;
        for (q, c) in self.linear.iter().enumerate() {
            if on(q) {
                e += c;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if on(i) && on(j) {
                e += c;
            }
        }
        e
    }

    /// Per-variable coupling lists, both directions.
    pub fn neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.num_vars()];
        for (&(i, j), &c) in &self.quadratic {
            adj[i].push((j, c));
            adj[j].push((i, c));
        }
        adj
    }
}

/// Bitstring of length `n` from a basis index (variable 0 = least significant bit).
pub fn index_to_bits(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|q| (index >> q) & 1 == 1).collect()
}
