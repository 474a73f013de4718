//! Dense state-vector simulation of layered phase/mixer circuits.
//!
//! Basis index `b` holds qubit `q` in bit `q` (qubit 0 least significant),
//! which is also the variable order of the QUBO models. The phase operator is
//! diagonal, so each layer is an elementwise rotation over a precomputed
//! energy table followed by `n` single-qubit mixer passes.

use crate::error::{Error, Result};
use crate::qubo::IsingModel;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

/// Largest register the simulator accepts unless told otherwise (~1 GiB of amplitudes).
pub const DEFAULT_MAX_QUBITS: usize = 26;

// Below this many amplitudes the rayon overhead outweighs the work.
const PAR_THRESHOLD: usize = 1 << 15;

/// Per-layer angle pairs, applied in order `l = 1..=p`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl CircuitParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(Error::DimensionMismatch {
                path: "gammas".into(),
                expected: betas.len(),
                found: gammas.len(),
            });
        }
        Ok(Self { betas, gammas })
    }

    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    /// `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "flat parameter vector must have even length, got {}",
                flat.len()
            )));
        }
        let p = flat.len() / 2;
        Ok(Self {
            gammas: flat[..p].to_vec(),
            betas: flat[p..].to_vec(),
        })
    }
}

/// Energies of every computational basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    num_qubits: usize,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        if !energies.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "energy table length {} is not a power of two",
                energies.len()
            )));
        }
        Ok(Self {
            num_qubits: energies.len().trailing_zeros() as usize,
            energies,
        })
    }

    /// Tabulates `ising.energy_index(b)` for all `b`, offset included.
    pub fn from_ising(model: &IsingModel, max_qubits: usize) -> Result<Self> {
        let n = model.num_vars();
        if n > max_qubits {
            return Err(Error::QubitLimit(n, max_qubits));
        }
        // lower[k]: couplings of qubit k to qubits j < k; upper_sum[k]: sum of
        // couplings to j > k (still spin +1 when bit k is first set).
        let mut lower = vec![Vec::new(); n];
        let mut upper_sum = vec![0.0; n];
        for (&(a, b), &c) in &model.j {
            lower[b].push((a, c));
            upper_sum[a] += c;
        }
        let mut energies = vec![0.0; 1usize << n];
        energies[0] = model.offset + model.h.iter().sum::<f64>() + model.j.values().sum::<f64>();
        for k in 0..n {
            let half = 1usize << k;
            let (done, next) = energies.split_at_mut(half);
            let next = &mut next[..half];
            let base = -2.0 * (model.h[k] + upper_sum[k]);
            let fill = |(b, slot): (usize, &mut f64)| {
                let mut delta = base;
                for &(j, c) in &lower[k] {
                    let z = if (b >> j) & 1 == 1 { -1.0 } else { 1.0 };
                    delta -= 2.0 * c * z;
                }
                *slot = done[b] + delta;
            };
            if half >= PAR_THRESHOLD {
                next.par_iter_mut().enumerate().for_each(fill);
            } else {
                next.iter_mut().enumerate().for_each(fill);
            }
        }
        Ok(Self {
            num_qubits: n,
            energies,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|->^{\otimes n}`: amplitude `(-1)^{popcount(b)} / sqrt(2^n)`.
    pub fn minus(n: usize) -> Result<Self> {
        Self::minus_with_limit(n, DEFAULT_MAX_QUBITS)
    }

    pub fn minus_with_limit(n: usize, max_qubits: usize) -> Result<Self> {
        if n > max_qubits {
            return Err(Error::QubitLimit(n, max_qubits));
        }
        let scale = (0.5f64).powf(n as f64 / 2.0);
        let amps = (0..1usize << n)
            .map(|b| {
                let sign = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * scale, 0.0)
            })
            .collect();
        Ok(Self { num_qubits: n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector length {} is not a power of two",
                amps.len()
            )));
        }
        Ok(Self {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `amp[b] *= exp(-i gamma E(b))`.
    pub fn apply_phase(&mut self, diag: &DiagonalHamiltonian, gamma: f64) -> Result<()> {
        if diag.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                path: "diagonal".into(),
                expected: self.num_qubits,
                found: diag.num_qubits,
            });
        }
        let rotate = |(a, &e): (&mut Complex64, &f64)| {
            let (s, c) = (gamma * e).sin_cos();
            *a *= Complex64::new(c, -s);
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_iter_mut()
                .zip(diag.energies.par_iter())
                .for_each(rotate);
        } else {
            self.amps.iter_mut().zip(&diag.energies).for_each(rotate);
        }
        Ok(())
    }

    /// `exp(-i beta sum_j X_j)` as one `[[cos, -i sin], [-i sin, cos]]` pass per qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let parallel = self.amps.len() >= PAR_THRESHOLD;
        for q in 0..self.num_qubits {
            let stride = 1usize << q;
            let pair = move |chunk: &mut [Complex64]| {
                let (lo, hi) = chunk.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    // -i s x = (s x.im, -s x.re)
                    *a0 = Complex64::new(c * x0.re + s * x1.im, c * x0.im - s * x1.re);
                    *a1 = Complex64::new(c * x1.re + s * x0.im, c * x1.im - s * x0.re);
                }
            };
            if parallel {
                self.amps.par_chunks_mut(2 * stride).for_each(pair);
            } else {
                self.amps.chunks_mut(2 * stride).for_each(pair);
            }
        }
    }

    /// Measurement probabilities `|amp|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multinomial draw of `shots` measurements, reproducible from `seed`.
    ///
    /// Sorted uniforms are swept once against the running cumulative
    /// probability, so no second array of size `2^n` is allocated.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<SampleSet> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = self.norm_sqr();
        let mut draws: Vec<f64> = (0..shots).map(|_| rng.gen::<f64>() * total).collect();
        draws.sort_unstable_by(f64::total_cmp);

        let mut counts = BTreeMap::new();
        let mut next = 0usize;
        let mut cumulative = 0.0;
        let mut last_nonzero = 0u64;
        for (b, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            last_nonzero = b as u64;
            cumulative += p;
            let start = next;
            while next < draws.len() && draws[next] < cumulative {
                next += 1;
            }
            if next > start {
                counts.insert(b as u64, (next - start) as u64);
            }
        }
        // rounding in the running sum can leave the top few draws unassigned
        if next < draws.len() {
            *counts.entry(last_nonzero).or_insert(0) += (draws.len() - next) as u64;
        }
        Ok(SampleSet {
            shots,
            num_qubits: self.num_qubits,
            counts,
        })
    }
}

/// Starts from `|->^n` and applies phase(gamma_l) then mixer(beta_l) for each layer.
pub fn run_circuit(diag: &DiagonalHamiltonian, params: &CircuitParams) -> Result<StateVector> {
    run_circuit_with_limit(diag, params, DEFAULT_MAX_QUBITS)
}

pub fn run_circuit_with_limit(
    diag: &DiagonalHamiltonian,
    params: &CircuitParams,
    max_qubits: usize,
) -> Result<StateVector> {
    let mut state = StateVector::minus_with_limit(diag.num_qubits(), max_qubits)?;
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        state.apply_phase(diag, gamma)?;
        state.apply_mixer(beta);
    }
    Ok(state)
}

/// Measured basis states and their counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    pub shots: u64,
    pub num_qubits: usize,
    /// Basis index to number of hits; absent means zero.
    pub counts: BTreeMap<u64, u64>,
}

impl SampleSet {
    /// Bitstring with qubit 0 first.
    pub fn bitstring(&self, index: u64) -> String {
        (0..self.num_qubits)
            .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn frequency(&self, index: u64) -> f64 {
        self.counts.get(&index).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}

impl Serialize for SampleSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a SampleSet);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = ser.serialize_map(Some(self.0.counts.len()))?;
                for (&idx, &c) in &self.0.counts {
                    map.serialize_entry(&self.0.bitstring(idx), &c)?;
                }
                map.end()
            }
        }
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry("shots", &self.shots)?;
        map.serialize_entry("counts", &Counts(self))?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::catalog;
    use crate::qubo::{build_hamiltonian, default_weights, qubo_to_ising, Variant};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn minus_state_amplitudes() {
        let s = StateVector::minus(1).unwrap();
        assert!(close(s.amps[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.amps[1], Complex64::new(-FRAC_1_SQRT_2, 0.0), 1e-15));
        let s = StateVector::minus(2).unwrap();
        let expected = [0.5, -0.5, -0.5, 0.5];
        for (a, e) in s.amps.iter().zip(expected) {
            assert!(close(*a, Complex64::new(e, 0.0), 1e-15));
        }
        let s = StateVector::minus(5).unwrap();
        for p in s.probabilities() {
            assert!((p - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn qubit_limit_is_enforced() {
        assert!(matches!(
            StateVector::minus_with_limit(5, 4),
            Err(Error::QubitLimit(5, 4))
        ));
    }

    #[test]
    fn phase_identities() {
        let diag = DiagonalHamiltonian::from_energies(vec![0.3, -1.2, 4.0, 2.5]).unwrap();
        let mut s = StateVector::minus(2).unwrap();
        let before = s.clone();
        s.apply_phase(&diag, 0.0).unwrap();
        assert_eq!(s, before);

        let flat = DiagonalHamiltonian::from_energies(vec![1.7; 4]).unwrap();
        s.apply_phase(&flat, 0.9).unwrap();
        for (p, q) in s.probabilities().iter().zip(before.probabilities()) {
            assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_pi_flips_sign() {
        let diag = DiagonalHamiltonian::from_energies(vec![0.0, 1.0]).unwrap();
        let mut s = StateVector::from_amplitudes(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        s.apply_phase(&diag, PI).unwrap();
        assert!(close(s.amps[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.amps[1], Complex64::new(-FRAC_1_SQRT_2, 0.0), 1e-15));
    }

    #[test]
    fn phase_dimension_mismatch() {
        let diag = DiagonalHamiltonian::from_energies(vec![0.0; 8]).unwrap();
        let mut s = StateVector::minus(2).unwrap();
        assert!(s.apply_phase(&diag, 1.0).is_err());
    }

    #[test]
    fn mixer_identities() {
        let mut s = StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let before = s.clone();
        s.apply_mixer(0.0);
        assert_eq!(s, before);
        s.apply_mixer(FRAC_PI_2);
        assert!(close(s.amps[0], Complex64::new(0.0, 0.0), 1e-15));
        assert!(close(s.amps[1], Complex64::new(0.0, -1.0), 1e-15));

        let mut m = StateVector::minus(3).unwrap();
        m.apply_mixer(0.77);
        for p in m.probabilities() {
            assert!((p - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_circuit_is_uniform() {
        let diag = DiagonalHamiltonian::from_energies(vec![0.0; 16]).unwrap();
        let s = run_circuit(&diag, &CircuitParams::default()).unwrap();
        for p in s.probabilities() {
            assert!((p - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_matches_ising_energies() {
        for id in [0, 5, 10] {
            let inst = catalog::scenario(id).unwrap();
            let q = build_hamiltonian(&inst, Variant::Standard, default_weights(&inst, Variant::Standard));
            let ising = qubo_to_ising(&q).normalized().unwrap();
            let diag = DiagonalHamiltonian::from_ising(&ising, 20).unwrap();
            for b in (0..diag.energies.len()).step_by(7) {
                let e = ising.energy_index(b as u64);
                assert!((diag.energies[b] - e).abs() < 1e-9 * e.abs().max(1.0), "{id}/{b}");
            }
        }
    }

    #[test]
    fn norm_is_preserved_over_many_layers() {
        let inst = catalog::scenario(3).unwrap();
        let q = build_hamiltonian(&inst, Variant::Standard, default_weights(&inst, Variant::Standard));
        let diag = DiagonalHamiltonian::from_ising(&qubo_to_ising(&q).normalized().unwrap(), 20).unwrap();
        let params = CircuitParams::new(
            (0..20).map(|l| 0.1 + 0.03 * l as f64).collect(),
            (0..20).map(|l| 1.3 - 0.05 * l as f64).collect(),
        )
        .unwrap();
        let s = run_circuit(&diag, &params).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn sampling_is_deterministic_and_conserves_shots() {
        let diag = DiagonalHamiltonian::from_energies((0..32).map(|b| b as f64 * 0.1).collect()).unwrap();
        let params = CircuitParams::new(vec![0.4, 0.2], vec![0.5, 1.1]).unwrap();
        let s = run_circuit(&diag, &params).unwrap();
        let a = s.sample(5000, 7).unwrap();
        let b = s.sample(5000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 5000);
        assert_ne!(a, s.sample(5000, 8).unwrap());
    }

    #[test]
    fn point_state_samples_one_outcome() {
        let s = StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let set = s.sample(100, 1).unwrap();
        assert_eq!(set.counts.len(), 1);
        assert_eq!(set.counts[&0], 100);
        assert!(s.sample(0, 1).is_err());
    }

    #[test]
    fn sample_json_is_qubit_zero_first() {
        let set = SampleSet {
            shots: 3,
            num_qubits: 3,
            counts: BTreeMap::from([(0b001, 2), (0b110, 1)]),
        };
        let text = serde_json::to_string(&set).unwrap();
        assert_eq!(text, r#"{"shots":3,"counts":{"100":2,"011":1}}"#);
    }

    #[test]
    fn flat_params_round_trip() {
        let p = CircuitParams::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        assert_eq!(p.to_flat(), vec![0.3, 0.4, 0.1, 0.2]);
        assert_eq!(CircuitParams::from_flat(&p.to_flat()).unwrap(), p);
        assert!(CircuitParams::from_flat(&[1.0]).is_err());
        assert!(CircuitParams::new(vec![0.0], vec![]).is_err());
    }
}
