use super::QuadraticModel;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// `offset + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j` over spins `z_i = 1 - 2 x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub h: Vec<f64>,
    pub j: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
    /// Product of all normalization divisors applied so far (1 if none).
    pub nu_max: f64,
}

/// Substitutes `x_i = (1 - z_i) / 2`.
pub fn qubo_to_ising(q: &QuadraticModel) -> IsingModel {
    let mut h: Vec<f64> = q.linear().iter().map(|&a| -a / 2.0).collect();
    let mut offset = q.offset() + q.linear().iter().sum::<f64>() / 2.0;
    let mut j = BTreeMap::new();
    for (&(a, b), &c) in q.quadratic() {
        let quarter = c / 4.0;
        j.insert((a, b), quarter);
        h[a] -= quarter;
        h[b] -= quarter;
        offset += quarter;
    }
    IsingModel {
        h,
        j,
        offset,
        nu_max: 1.0,
    }
}

impl IsingModel {
    pub fn num_vars(&self) -> usize {
        self.h.len()
    }

    /// Largest absolute field or coupling.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.h
            .iter()
            .chain(self.j.values())
            .fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Divides fields, couplings and offset by the largest absolute coefficient.
    pub fn normalized(&self) -> Result<IsingModel> {
        let nu = self.max_abs_coefficient();
        if nu == 0.0 {
            return Err(Error::InvalidArgument(
                "cannot normalize an Ising model with all-zero coefficients".into(),
            ));
        }
        Ok(IsingModel {
            h: self.h.iter().map(|c| c / nu).collect(),
            j: self.j.iter().map(|(&k, &c)| (k, c / nu)).collect(),
            offset: self.offset / nu,
            nu_max: self.nu_max * nu,
        })
    }

    /// Energy of a binary assignment (mapped to spins internally).
    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                path: "bits".into(),
                expected: self.num_vars(),
                found: bits.len(),
            });
        }
        Ok(self.energy_index(
            bits.iter()
                .enumerate()
                .fold(0u64, |acc, (q, &b)| acc | ((b as u64) << q)),
        ))
    }

    pub fn energy_index(&self, index: u64) -> f64 {
        let z = |q: usize| if (index >> q) & 1 == 1 { -1.0 } else { 1.0 };
        let mut e = self.offset;
        for (q, &c) in self.h.iter().enumerate() {
            e += c * z(q);
        }
        for (&(a, b), &c) in &self.j {
            e += c * z(a) * z(b);
        }
        e
    }
}
