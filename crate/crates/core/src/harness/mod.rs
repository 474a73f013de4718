//! Experiment sweeps over scenarios, algorithms, protocols, layers and
//! repetitions, plus result reporting and table verification.

mod report;
mod tables;

pub use report::{aggregate, read_records, render, report, write_csv, ReportFormat, SettingSummary, CSV_HEADER};
pub use tables::{verify_tables, verify_tables_against, RowCheck, TableReport, TERM_TABLE};

use crate::error::{Error, Result};
use crate::evaluation::{compute_metrics, Protocol};
use crate::instances::{brute_force_solve, catalog, KnapsackInstance, OracleResult};
use crate::optimizer::{annealing_params, optimize_annealing_time_on, optimize_params, OptimizerConfig, QaoaProblem};
use crate::qubo::{default_weights, PenaltyWeights, Variant};
use crate::schedule::{derive_params, ScheduleKind, ScheduleSpec, DEFAULT_DT};
use crate::seed::derive;
use crate::statevector::DEFAULT_MAX_QUBITS;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

/// Qubit cap for sweeps unless `large` is set.
pub const DESK_MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Qaoa,
    /// Fixed schedule angles.
    Tae,
    /// Schedule angles with the annealing time optimized.
    #[serde(rename = "tae-vart")]
    TaeVarT,
}

impl Algorithm {
    fn tag(self) -> u64 {
        self as u64
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Qaoa => "qaoa",
            Algorithm::Tae => "tae",
            Algorithm::TaeVarT => "tae-vart",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qaoa" => Ok(Algorithm::Qaoa),
            "tae" => Ok(Algorithm::Tae),
            "tae-vart" | "tae-vart-t" | "taevart" => Ok(Algorithm::TaeVarT),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm `{s}`"))),
        }
    }
}

fn protocol_tag(p: Protocol) -> u64 {
    match p {
        Protocol::StandardSlack => 0,
        Protocol::SlackXOnly => 1,
        Protocol::NoSlack => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleConfig {
    pub kind: ScheduleKind,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            kind: ScheduleKind::Sinusoidal,
            dt: DEFAULT_DT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenarios: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub protocols: Vec<Protocol>,
    pub layers: Vec<usize>,
    pub schedule: ScheduleConfig,
    pub shots_per_qubit: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    /// Overrides the ratio `A / B` of the default weights.
    pub single_penalty_factor: Option<f64>,
    /// Optimize on exact expectations instead of sampled ones.
    pub exact: bool,
    /// Raise the qubit cap from 20 to 26.
    pub large: bool,
    /// Record wall-clock times; off gives byte-identical outputs across runs.
    pub timing: bool,
    /// JSON-lines results file; a CSV with the same stem is written next to it.
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenarios: catalog::DEFAULT_SWEEP.collect(),
            algorithms: vec![Algorithm::Qaoa],
            protocols: vec![Protocol::NoSlack],
            layers: vec![1, 2, 3],
            schedule: ScheduleConfig::default(),
            shots_per_qubit: 500,
            repetitions: 10,
            seed: 0,
            optimizer: OptimizerConfig::default(),
            single_penalty_factor: None,
            exact: false,
            large: false,
            timing: true,
            output: None,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
        }
        if self.shots_per_qubit == 0 {
            return Err(Error::InvalidArgument("shots_per_qubit must be at least 1".into()));
        }
        if self.scenarios.is_empty() || self.algorithms.is_empty() || self.protocols.is_empty() || self.layers.is_empty() {
            return Err(Error::InvalidArgument("scenarios, algorithms, protocols and layers must be nonempty".into()));
        }
        if let Some(&bad) = self.scenarios.iter().find(|&&s| s >= catalog::NUM_SCENARIOS) {
            return Err(Error::UnknownScenario(bad));
        }
        if self.layers.contains(&0) {
            return Err(Error::InvalidArgument("layer counts must be positive".into()));
        }
        if let Some(f) = self.single_penalty_factor {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidArgument(format!("single_penalty_factor must be positive, got {f}")));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be positive".into()));
        }
        self.optimizer.validate()?;
        if self.schedule.kind != ScheduleKind::RandomAngles {
            ScheduleSpec::new(self.schedule.kind, self.schedule.dt, 1)?;
        }
        Ok(())
    }

    pub fn max_qubits(&self) -> usize {
        if self.large {
            DEFAULT_MAX_QUBITS
        } else {
            DESK_MAX_QUBITS
        }
    }

    /// Circuit and evaluation weights for one scenario and protocol.
    pub fn weights(&self, inst: &KnapsackInstance, protocol: Protocol) -> PenaltyWeights {
        let w = default_weights(inst, protocol.variant());
        match self.single_penalty_factor {
            Some(f) => PenaltyWeights { a: f * w.b, ..w },
            None => w,
        }
    }
}

/// Identifies one cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub scenario: usize,
    pub algorithm: Algorithm,
    pub protocol: Protocol,
    pub p: usize,
    pub repetition: usize,
}

impl CellKey {
    pub fn seed(&self, master: u64) -> u64 {
        derive(
            master,
            &[
                self.scenario as u64,
                self.algorithm.tag(),
                protocol_tag(self.protocol),
                self.p as u64,
                self.repetition as u64,
            ],
        )
    }
}

/// One finished (or failed) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub scenario: usize,
    pub algorithm: Algorithm,
    pub protocol: Protocol,
    pub p: usize,
    pub schedule: String,
    pub dt: f64,
    pub repetition: usize,
    pub p_opt: f64,
    pub p_90: f64,
    pub baseline_p_opt: f64,
    pub baseline_p_90: f64,
    pub expectation: f64,
    pub iterations: usize,
    pub seed: u64,
    pub wall_ms: u64,
    pub num_qubits: usize,
    pub best_value_found: u64,
    pub optimum_found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellRecord {
    pub fn key(&self) -> CellKey {
        CellKey {
            scenario: self.scenario,
            algorithm: self.algorithm,
            protocol: self.protocol,
            p: self.p,
            repetition: self.repetition,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    /// Sorted by cell key.
    pub records: Vec<CellRecord>,
    pub summaries: Vec<SettingSummary>,
}

impl ExperimentResult {
    pub fn failures(&self) -> impl Iterator<Item = &CellRecord> {
        self.records.iter().filter(|r| !r.is_ok())
    }
}

struct CellOutcome {
    dt: f64,
    expectation: f64,
    iterations: usize,
    num_qubits: usize,
    metrics: crate::evaluation::Metrics,
}

fn run_cell(cfg: &ExperimentConfig, key: CellKey, seed: u64, inst: &KnapsackInstance, oracle: &OracleResult) -> Result<CellOutcome> {
    let weights = cfg.weights(inst, key.protocol);
    let num_qubits = key.protocol.num_qubits(inst);
    let shots = cfg.shots_per_qubit * num_qubits as u64;
    let problem = QaoaProblem::with_limit(
        inst,
        key.protocol,
        weights,
        if cfg.exact { None } else { Some(shots) },
        cfg.max_qubits(),
    )?;
    let spec = ScheduleSpec {
        kind: cfg.schedule.kind,
        delta_t: cfg.schedule.dt,
        p: key.p,
        seed: derive(seed, &[1]),
    };
    let (params, iterations, dt) = match key.algorithm {
        Algorithm::Tae => (derive_params(&spec)?, 0, cfg.schedule.dt),
        Algorithm::Qaoa => {
            let (params, trace) = optimize_params(&problem, &derive_params(&spec)?, derive(seed, &[2]), &cfg.optimizer)?;
            (params, trace.iterations_used, cfg.schedule.dt)
        }
        Algorithm::TaeVarT => {
            let (t, trace) = optimize_annealing_time_on(&problem, cfg.schedule.kind, key.p, derive(seed, &[2]), &cfg.optimizer)?;
            (annealing_params(cfg.schedule.kind, key.p, t)?, trace.iterations_used, t / key.p as f64)
        }
    };
    let samples = problem.state(&params)?.sample(shots, derive(seed, &[3]))?;
    Ok(CellOutcome {
        dt,
        expectation: problem.evaluator().expectation_samples(&samples)?,
        iterations,
        num_qubits,
        metrics: compute_metrics(&samples, inst, key.protocol, oracle)?,
    })
}

fn record_for(cfg: &ExperimentConfig, key: CellKey, inst: &KnapsackInstance, oracle: &OracleResult) -> CellRecord {
    let seed = key.seed(cfg.seed);
    let start = Instant::now();
    let outcome = run_cell(cfg, key, seed, inst, oracle);
    let wall_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let space = (inst.num_x_bits() as f64).exp2();
    let mut rec = CellRecord {
        scenario: key.scenario,
        algorithm: key.algorithm,
        protocol: key.protocol,
        p: key.p,
        schedule: cfg.schedule.kind.to_string(),
        dt: cfg.schedule.dt,
        repetition: key.repetition,
        p_opt: 0.0,
        p_90: 0.0,
        baseline_p_opt: oracle.optimal_assignments.len() as f64 / space,
        baseline_p_90: oracle.count_90pct as f64 / space,
        expectation: f64::NAN,
        iterations: 0,
        seed,
        wall_ms,
        num_qubits: key.protocol.num_qubits(inst),
        best_value_found: 0,
        optimum_found: false,
        error: None,
    };
    match outcome {
        Ok(o) => {
            rec.dt = o.dt;
            rec.p_opt = o.metrics.p_opt;
            rec.p_90 = o.metrics.p_90;
            rec.expectation = o.expectation;
            rec.iterations = o.iterations;
            rec.num_qubits = o.num_qubits;
            rec.best_value_found = o.metrics.best_value_found;
            rec.optimum_found = o.metrics.optimum_found;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// All cells of a config in key order.
pub fn cells(cfg: &ExperimentConfig) -> Vec<CellKey> {
    let mut keys = Vec::new();
    for &scenario in &cfg.scenarios {
        for &algorithm in &cfg.algorithms {
            for &protocol in &cfg.protocols {
                for &p in &cfg.layers {
                    for repetition in 0..cfg.repetitions {
                        keys.push(CellKey {
                            scenario,
                            algorithm,
                            protocol,
                            p,
                            repetition,
                        });
                    }
                }
            }
        }
    }
    keys.sort();
    keys.dedup();
    keys
}

/// Runs every cell in parallel. Cells that exceed the qubit cap are recorded
/// with an error and the sweep continues.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut oracles = BTreeMap::new();
    for &id in &cfg.scenarios {
        let inst = catalog::scenario(id)?;
        let oracle = brute_force_solve(&inst)?;
        oracles.insert(id, (inst, oracle));
    }
    let sink = match &cfg.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Some(Mutex::new(std::io::BufWriter::new(std::fs::File::create(path)?)))
        }
        None => None,
    };

    let keys = cells(cfg);
    let work = || -> Result<Vec<CellRecord>> {
        keys.par_iter()
            .map(|&key| {
                let (inst, oracle) = &oracles[&key.scenario];
                let rec = record_for(cfg, key, inst, oracle);
                if let Some(sink) = &sink {
                    let mut w = sink.lock().expect("results writer poisoned");
                    writeln!(w, "{}", serde_json::to_string(&rec)?)?;
                    w.flush()?;
                }
                Ok(rec)
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut records = pool.install(work)?;
    records.sort_by_key(CellRecord::key);
    drop(sink);

    if let Some(path) = &cfg.output {
        // rewrite in key order now that every cell is in
        let mut text = String::new();
        for r in &records {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        std::fs::write(path, text)?;
        write_csv(&records, std::fs::File::create(path.with_extension("csv"))?)?;
    }
    Ok(ExperimentResult {
        summaries: aggregate(&records),
        records,
    })
}

/// Weights used for the circuit of `variant` with `A = factor * B`.
pub fn weights_with_factor(inst: &KnapsackInstance, variant: Variant, factor: f64) -> Result<PenaltyWeights> {
    let w = default_weights(inst, variant);
    PenaltyWeights::new(factor * w.b, w.b, w.c)
}
