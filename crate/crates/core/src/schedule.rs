//! Annealing schedules and the circuit angles derived from them.

use crate::error::{Error, Result};
use crate::statevector::CircuitParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Default Trotter step.
pub const DEFAULT_DT: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    /// `s(l) = sin^2((pi/2) sin^2(pi l / 2p))`.
    #[serde(alias = "sine")]
    Sinusoidal,
    /// `s(l) = l / p`.
    Linear,
    /// Uniform `beta in [0, pi]`, `gamma in [0, 2 pi]`.
    #[serde(alias = "random")]
    RandomAngles,
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScheduleKind::Sinusoidal => "sine",
            ScheduleKind::Linear => "linear",
            ScheduleKind::RandomAngles => "random",
        })
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine" | "sinusoidal" => Ok(ScheduleKind::Sinusoidal),
            "linear" => Ok(ScheduleKind::Linear),
            "random" | "random-angles" => Ok(ScheduleKind::RandomAngles),
            _ => Err(Error::InvalidArgument(format!("unknown schedule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    /// Trotter step; ignored for random angles.
    pub delta_t: f64,
    pub p: usize,
    pub seed: u64,
}

impl ScheduleSpec {
    pub fn new(kind: ScheduleKind, delta_t: f64, p: usize) -> Result<Self> {
        let spec = Self {
            kind,
            delta_t,
            p,
            seed: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sine(delta_t: f64, p: usize) -> Result<Self> {
        Self::new(ScheduleKind::Sinusoidal, delta_t, p)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidArgument("schedule needs at least one layer".into()));
        }
        if self.kind != ScheduleKind::RandomAngles && !(self.delta_t > 0.0 && self.delta_t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta_t must be positive, got {}",
                self.delta_t
            )));
        }
        Ok(())
    }

    /// Total annealing time `p * delta_t`.
    pub fn annealing_time(&self) -> f64 {
        self.p as f64 * self.delta_t
    }
}

/// Schedule value at step `l` of `p`.
pub fn s_value(kind: ScheduleKind, l: usize, p: usize) -> Result<f64> {
    if p == 0 || l == 0 || l > p {
        return Err(Error::InvalidArgument(format!("step {l} outside 1..={p}")));
    }
    let frac = l as f64 / p as f64;
    match kind {
        ScheduleKind::Sinusoidal => {
            let inner = (FRAC_PI_2 * frac).sin().powi(2);
            Ok((FRAC_PI_2 * inner).sin().powi(2))
        }
        ScheduleKind::Linear => Ok(frac),
        ScheduleKind::RandomAngles => Err(Error::InvalidArgument(
            "random angles have no schedule function".into(),
        )),
    }
}

/// `beta_l = (1 - s_l) dt`, `gamma_l = s_l dt`, or seeded random angles.
pub fn derive_params(spec: &ScheduleSpec) -> Result<CircuitParams> {
    spec.validate()?;
    let p = spec.p;
    if spec.kind == ScheduleKind::RandomAngles {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut betas = Vec::with_capacity(p);
        let mut gammas = Vec::with_capacity(p);
        for _ in 0..p {
            betas.push(rng.gen_range(0.0..=PI));
            gammas.push(rng.gen_range(0.0..=2.0 * PI));
        }
        return CircuitParams::new(betas, gammas);
    }
    let s: Vec<f64> = (1..=p).map(|l| s_value(spec.kind, l, p)).collect::<Result<_>>()?;
    CircuitParams::new(
        s.iter().map(|s| (1.0 - s) * spec.delta_t).collect(),
        s.iter().map(|s| s * spec.delta_t).collect(),
    )
}
