//! Adam over finite-difference gradients with a moving-average/curvature
//! stopping rule, and the QAOA / variational annealing-time drivers built on it.

use crate::error::{Error, Result};
use crate::evaluation::{Evaluator, Protocol};
use crate::instances::KnapsackInstance;
use crate::qubo::{build_hamiltonian, qubo_to_ising, PenaltyWeights};
use crate::schedule::{derive_params, ScheduleKind, ScheduleSpec};
use crate::seed::derive;
use crate::statevector::{run_circuit, CircuitParams, DiagonalHamiltonian, StateVector, DEFAULT_MAX_QUBITS};
use serde::{Deserialize, Serialize};

/// Lower bound on the annealing time in variational-time mode.
pub const MIN_ANNEALING_TIME: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    /// Checkpoint spacing and moving-average length.
    pub window: usize,
    pub f_omega: f64,
    pub f_sd: f64,
    pub fd_step: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub max_iterations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            window: 10,
            f_omega: 10.0,
            f_sd: 10.0,
            fd_step: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            eps_adam: 1e-8,
            max_iterations: 1000,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("learning_rate", self.learning_rate),
            ("f_omega", self.f_omega),
            ("f_sd", self.f_sd),
            ("fd_step", self.fd_step),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("eps_adam", self.eps_adam),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.beta1 >= 1.0 || self.beta2 >= 1.0 {
            return Err(Error::InvalidArgument("Adam moment constants must be below 1".into()));
        }
        if self.window < 2 {
            return Err(Error::InvalidArgument(format!("window must be at least 2, got {}", self.window)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    /// Objective at the iterate of each iteration, before its update.
    pub values: Vec<f64>,
    /// Parameters at which each entry of `values` was taken.
    pub iterates: Vec<Vec<f64>>,
    pub params: Vec<f64>,
    pub iterations_used: usize,
    pub stop_reason: StopReason,
    /// Second derivatives at the last iterate.
    pub curvature: Vec<f64>,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {eps}")));
    }
    Ok(())
}

struct Probe {
    value: f64,
    gradient: Vec<f64>,
    second: Vec<f64>,
}

// 2d + 1 evaluations shared by the gradient and the second derivative.
fn probe<F>(f: &mut F, params: &[f64], eps: f64) -> Result<Probe>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let value = f(params)?;
    let mut gradient = Vec::with_capacity(params.len());
    let mut second = Vec::with_capacity(params.len());
    let mut shifted = params.to_vec();
    for k in 0..params.len() {
        shifted[k] = params[k] + eps;
        let plus = f(&shifted)?;
        shifted[k] = params[k] - eps;
        let minus = f(&shifted)?;
        shifted[k] = params[k];
        gradient.push((plus - minus) / (2.0 * eps));
        second.push((plus - 2.0 * value + minus) / (eps * eps));
    }
    Ok(Probe {
        value,
        gradient,
        second,
    })
}

/// Central differences `(f(x + eps e_k) - f(x - eps e_k)) / 2 eps`.
pub fn finite_diff_gradient<F>(mut f: F, params: &[f64], eps: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    check_eps(eps)?;
    let mut shifted = params.to_vec();
    let mut g = Vec::with_capacity(params.len());
    for k in 0..params.len() {
        shifted[k] = params[k] + eps;
        let plus = f(&shifted)?;
        shifted[k] = params[k] - eps;
        let minus = f(&shifted)?;
        shifted[k] = params[k];
        g.push((plus - minus) / (2.0 * eps));
    }
    Ok(g)
}

/// `(f(x + eps e_k) - 2 f(x) + f(x - eps e_k)) / eps^2` per dimension.
pub fn finite_diff_second<F>(mut f: F, params: &[f64], eps: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    check_eps(eps)?;
    Ok(probe(&mut f, params, eps)?.second)
}

/// Adam with finite-difference gradients.
///
/// Every `window` iterations the mean of the last `window` objective values is
/// compared with the mean at the previous checkpoint; the run stops when that
/// change is below `f_omega` and the second derivative exceeds `f_sd` in every
/// dimension.
pub fn adam_minimize<F>(f: F, init: &[f64], config: &OptimizerConfig) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    adam_minimize_projected(f, init, config, |_| {})
}

/// [`adam_minimize`] with a projection applied after every update.
pub fn adam_minimize_projected<F, P>(
    mut f: F,
    init: &[f64],
    config: &OptimizerConfig,
    project: P,
) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> Result<f64>,
    P: Fn(&mut [f64]),
{
    config.validate()?;
    if let Some(bad) = init.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("initial parameter {bad} is not finite")));
    }
    let d = init.len();
    let mut theta = init.to_vec();
    let (mut m, mut v) = (vec![0.0; d], vec![0.0; d]);
    let mut values = Vec::new();
    let mut iterates = Vec::new();
    let mut curvature = vec![0.0; d];
    let mut last_checkpoint: Option<f64> = None;

    for t in 1..=config.max_iterations {
        let pr = probe(&mut f, &theta, config.fd_step)?;
        let bad = std::iter::once(pr.value).chain(pr.gradient.iter().copied()).find(|x| !x.is_finite());
        if let Some(value) = bad {
            return Err(Error::NonFinite { value, iteration: t });
        }
        values.push(pr.value);
        iterates.push(theta.clone());
        curvature = pr.second;

        if t % config.window == 0 {
            let avg = values[values.len() - config.window..].iter().sum::<f64>() / config.window as f64;
            let flat = last_checkpoint.is_some_and(|prev| (avg - prev).abs() < config.f_omega);
            // curvature guard keeps the run from stopping on a plateau
            let curved = curvature.iter().all(|&c| c > config.f_sd);
            last_checkpoint = Some(avg);
            if flat && curved {
                return Ok(OptimizationTrace {
                    values,
                    iterates,
                    params: theta,
                    iterations_used: t,
                    stop_reason: StopReason::Converged,
                    curvature,
                });
            }
        }

        let (b1t, b2t) = (1.0 - config.beta1.powi(t as i32), 1.0 - config.beta2.powi(t as i32));
        for k in 0..d {
            let g = pr.gradient[k];
            m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g;
            v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g * g;
            theta[k] -= config.learning_rate * (m[k] / b1t) / ((v[k] / b2t).sqrt() + config.eps_adam);
        }
        project(&mut theta);
    }
    Ok(OptimizationTrace {
        values,
        iterates,
        params: theta,
        iterations_used: config.max_iterations,
        stop_reason: StopReason::MaxIterations,
        curvature,
    })
}

/// Circuit Hamiltonian plus evaluator for one (instance, protocol, weights).
///
/// The circuit uses the normalized Ising form; scores use the weights at
/// problem scale.
#[derive(Debug, Clone)]
pub struct QaoaProblem {
    diag: DiagonalHamiltonian,
    evaluator: Evaluator,
    /// `None` evaluates the exact distribution.
    shots: Option<u64>,
}

impl QaoaProblem {
    pub fn new(
        inst: &KnapsackInstance,
        protocol: Protocol,
        weights: PenaltyWeights,
        shots: Option<u64>,
    ) -> Result<Self> {
        Self::with_limit(inst, protocol, weights, shots, DEFAULT_MAX_QUBITS)
    }

    pub fn with_limit(
        inst: &KnapsackInstance,
        protocol: Protocol,
        weights: PenaltyWeights,
        shots: Option<u64>,
        max_qubits: usize,
    ) -> Result<Self> {
        if shots == Some(0) {
            return Err(Error::InvalidArgument("shots must be positive".into()));
        }
        let width = protocol.num_qubits(inst);
        if width > max_qubits {
            return Err(Error::QubitLimit(width, max_qubits));
        }
        let ising = qubo_to_ising(&build_hamiltonian(inst, protocol.variant(), weights)).normalized()?;
        Ok(Self {
            diag: DiagonalHamiltonian::from_ising(&ising, max_qubits)?,
            evaluator: Evaluator::new(inst, protocol, weights),
            shots,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.diag.num_qubits()
    }

    pub fn shots(&self) -> Option<u64> {
        self.shots
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn diagonal(&self) -> &DiagonalHamiltonian {
        &self.diag
    }

    pub fn state(&self, params: &CircuitParams) -> Result<StateVector> {
        run_circuit(&self.diag, params)
    }

    pub fn exact_energy(&self, params: &CircuitParams) -> Result<f64> {
        self.evaluator.expectation_exact(&self.state(params)?)
    }

    /// Sampled expectation, or exact when no shot count is set.
    pub fn energy(&self, params: &CircuitParams, seed: u64) -> Result<f64> {
        let state = self.state(params)?;
        match self.shots {
            Some(shots) => self.evaluator.expectation_samples(&state.sample(shots, seed)?),
            None => self.evaluator.expectation_exact(&state),
        }
    }

    /// Objective over flat `[gammas, betas]` with a fresh sub-seed per call.
    pub fn objective(&self, seed: u64) -> impl FnMut(&[f64]) -> Result<f64> + '_ {
        let mut calls = 0u64;
        move |flat: &[f64]| {
            calls += 1;
            self.energy(&CircuitParams::from_flat(flat)?, derive(seed, &[calls]))
        }
    }
}

/// Adam from `init` on an already built problem.
pub fn optimize_params(
    problem: &QaoaProblem,
    init: &CircuitParams,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<(CircuitParams, OptimizationTrace)> {
    if init.depth() == 0 {
        return Ok((
            CircuitParams::default(),
            OptimizationTrace {
                values: Vec::new(),
                iterates: Vec::new(),
                params: Vec::new(),
                iterations_used: 0,
                stop_reason: StopReason::Converged,
                curvature: Vec::new(),
            },
        ));
    }
    let trace = adam_minimize(problem.objective(seed), &init.to_flat(), config)?;
    Ok((CircuitParams::from_flat(&trace.params)?, trace))
}

/// QAOA with angles initialized from `spec`.
pub fn optimize_qaoa(
    inst: &KnapsackInstance,
    protocol: Protocol,
    spec: &ScheduleSpec,
    weights: PenaltyWeights,
    shots: Option<u64>,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<(CircuitParams, OptimizationTrace)> {
    if spec.p == 0 {
        return optimize_params(
            &QaoaProblem::new(inst, protocol, weights, shots)?,
            &CircuitParams::default(),
            seed,
            config,
        );
    }
    let init = derive_params(spec)?;
    let problem = QaoaProblem::new(inst, protocol, weights, shots)?;
    optimize_params(&problem, &init, seed, config)
}

/// Schedule angles for annealing time `total` (`dt = total / p`).
pub fn annealing_params(kind: ScheduleKind, p: usize, total: f64) -> Result<CircuitParams> {
    if kind == ScheduleKind::RandomAngles {
        return Err(Error::InvalidArgument("annealing time needs a schedule function".into()));
    }
    // angles are linear in dt
    let unit = derive_params(&ScheduleSpec::new(kind, 1.0, p)?)?;
    let dt = total / p as f64;
    CircuitParams::new(
        unit.betas.iter().map(|b| b * dt).collect(),
        unit.gammas.iter().map(|g| g * dt).collect(),
    )
}

/// Adam over the single annealing time, starting at `0.75 p`.
///
/// Returns the iterate with the lowest recorded objective.
#[allow(clippy::too_many_arguments)]
pub fn optimize_annealing_time(
    inst: &KnapsackInstance,
    protocol: Protocol,
    kind: ScheduleKind,
    p: usize,
    weights: PenaltyWeights,
    shots: Option<u64>,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<(f64, OptimizationTrace)> {
    let problem = QaoaProblem::new(inst, protocol, weights, shots)?;
    optimize_annealing_time_on(&problem, kind, p, seed, config)
}

pub fn optimize_annealing_time_on(
    problem: &QaoaProblem,
    kind: ScheduleKind,
    p: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<(f64, OptimizationTrace)> {
    if p == 0 {
        return Err(Error::InvalidArgument("annealing time needs at least one layer".into()));
    }
    annealing_params(kind, p, 1.0)?;
    let mut calls = 0u64;
    let objective = |t: &[f64]| {
        calls += 1;
        problem.energy(&annealing_params(kind, p, t[0])?, derive(seed, &[calls]))
    };
    let trace = adam_minimize_projected(objective, &[0.75 * p as f64], config, |t| {
        t[0] = t[0].max(MIN_ANNEALING_TIME)
    })?;
    let best = trace
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| trace.iterates[i][0])
        .expect("at least one iteration");
    Ok((best, trace))
}
