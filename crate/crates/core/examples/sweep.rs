//! A small experiment sweep; pass a config path to run your own.

use qineq::evaluation::Protocol;
use qineq::harness::{render, run_experiment, Algorithm, ExperimentConfig, ReportFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path.as_ref())?,
        None => ExperimentConfig {
            scenarios: vec![0, 1, 2],
            algorithms: vec![Algorithm::Tae],
            protocols: Protocol::ALL.to_vec(),
            layers: vec![2, 6],
            repetitions: 3,
            ..Default::default()
        },
    };
    let res = run_experiment(&cfg)?;
    print!("{}", render(&res.records, ReportFormat::SummaryTable)?);
    Ok(())
}
