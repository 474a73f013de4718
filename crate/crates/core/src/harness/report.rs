use super::{Algorithm, CellRecord};
use crate::error::{Error, Result};
use crate::evaluation::Protocol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: [&str; 15] = [
    "scenario",
    "algorithm",
    "protocol",
    "p",
    "schedule",
    "dt",
    "repetition",
    "p_opt",
    "p_90",
    "baseline_p_opt",
    "baseline_p_90",
    "expectation",
    "iterations",
    "seed",
    "wall_ms",
];

/// Per-cell CSV, failed cells omitted.
pub fn write_csv<W: Write>(records: &[CellRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records.iter().filter(|r| r.is_ok()) {
        w.write_record([
            r.scenario.to_string(),
            r.algorithm.to_string(),
            r.protocol.to_string(),
            r.p.to_string(),
            r.schedule.clone(),
            r.dt.to_string(),
            r.repetition.to_string(),
            r.p_opt.to_string(),
            r.p_90.to_string(),
            r.baseline_p_opt.to_string(),
            r.baseline_p_90.to_string(),
            r.expectation.to_string(),
            r.iterations.to_string(),
            r.seed.to_string(),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct CsvRow {
    scenario: usize,
    algorithm: String,
    protocol: String,
    p: usize,
    schedule: String,
    dt: f64,
    repetition: usize,
    p_opt: f64,
    p_90: f64,
    baseline_p_opt: f64,
    baseline_p_90: f64,
    expectation: f64,
    iterations: usize,
    seed: u64,
    wall_ms: u64,
}

fn parse_csv(text: &str) -> Result<Vec<CellRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rdr.deserialize::<CsvRow>() {
        let row = row.map_err(|e| Error::Malformed(e.to_string()))?;
        out.push(CellRecord {
            scenario: row.scenario,
            algorithm: row.algorithm.parse()?,
            protocol: row.protocol.parse()?,
            p: row.p,
            schedule: row.schedule,
            dt: row.dt,
            repetition: row.repetition,
            p_opt: row.p_opt,
            p_90: row.p_90,
            baseline_p_opt: row.baseline_p_opt,
            baseline_p_90: row.baseline_p_90,
            expectation: row.expectation,
            iterations: row.iterations,
            seed: row.seed,
            wall_ms: row.wall_ms,
            num_qubits: 0,
            best_value_found: 0,
            optimum_found: false,
            error: None,
        });
    }
    Ok(out)
}

fn parse_jsonl(text: &str) -> Result<Vec<CellRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Error::Malformed(format!("line {}: {e}", n + 1))))
        .collect()
}

/// Reads a JSON-lines or CSV results file.
pub fn read_records(path: &Path) -> Result<Vec<CellRecord>> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        parse_jsonl(&text)
    } else if text.trim().is_empty() {
        Ok(Vec::new())
    } else {
        parse_csv(&text)
    }
}

/// Means over the repetitions of one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingSummary {
    pub scenario: usize,
    pub algorithm: Algorithm,
    pub protocol: Protocol,
    pub p: usize,
    pub schedule: String,
    pub repetitions: usize,
    pub mean_dt: f64,
    pub mean_p_opt: f64,
    pub mean_p_90: f64,
    pub baseline_p_opt: f64,
    pub baseline_p_90: f64,
    pub mean_expectation: f64,
    pub mean_iterations: f64,
}

/// Groups successful cells by (scenario, algorithm, protocol, p, schedule).
pub fn aggregate(records: &[CellRecord]) -> Vec<SettingSummary> {
    let mut groups: BTreeMap<_, Vec<&CellRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        groups
            .entry((r.scenario, r.algorithm, r.protocol, r.p, r.schedule.clone()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((scenario, algorithm, protocol, p, schedule), rs)| {
            let n = rs.len() as f64;
            let mean = |f: fn(&CellRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / n;
            SettingSummary {
                scenario,
                algorithm,
                protocol,
                p,
                schedule,
                repetitions: rs.len(),
                mean_dt: mean(|r| r.dt),
                mean_p_opt: mean(|r| r.p_opt),
                mean_p_90: mean(|r| r.p_90),
                baseline_p_opt: rs[0].baseline_p_opt,
                baseline_p_90: rs[0].baseline_p_90,
                mean_expectation: mean(|r| r.expectation),
                mean_iterations: mean(|r| r.iterations as f64),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    SummaryTable,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "summary-table" | "summary" | "table" => Ok(ReportFormat::SummaryTable),
            _ => Err(Error::InvalidArgument(format!("unknown report format `{s}`"))),
        }
    }
}

const SUMMARY_HEADER: [&str; 13] = [
    "scenario",
    "algorithm",
    "protocol",
    "p",
    "schedule",
    "repetitions",
    "mean_dt",
    "mean_p_opt",
    "mean_p_90",
    "baseline_p_opt",
    "baseline_p_90",
    "mean_expectation",
    "mean_iterations",
];

fn render_csv(rows: &[SettingSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        w.write_record([
            s.scenario.to_string(),
            s.algorithm.to_string(),
            s.protocol.to_string(),
            s.p.to_string(),
            s.schedule.clone(),
            s.repetitions.to_string(),
            s.mean_dt.to_string(),
            s.mean_p_opt.to_string(),
            s.mean_p_90.to_string(),
            s.baseline_p_opt.to_string(),
            s.baseline_p_90.to_string(),
            s.mean_expectation.to_string(),
            s.mean_iterations.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_table(rows: &[SettingSummary]) -> String {
    let mut out = format!(
        "{:>8} {:<9} {:<15} {:>3} {:>5} {:>9} {:>9} {:>9} {:>9} {:>12} {:>7}\n",
        "scenario", "algorithm", "protocol", "p", "reps", "p_opt", "base_opt", "p_90", "base_90", "expectation", "iters"
    );
    for s in rows {
        out.push_str(&format!(
            "{:>8} {:<9} {:<15} {:>3} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>12.3} {:>7.1}\n",
            s.scenario,
            s.algorithm.to_string(),
            s.protocol.to_string(),
            s.p,
            s.repetitions,
            s.mean_p_opt,
            s.baseline_p_opt,
            s.mean_p_90,
            s.baseline_p_90,
            s.mean_expectation,
            s.mean_iterations
        ));
    }
    out
}

pub fn render(records: &[CellRecord], format: ReportFormat) -> Result<String> {
    let rows = aggregate(records);
    match format {
        ReportFormat::Csv => render_csv(&rows),
        ReportFormat::Json => Ok(serde_json::to_string_pretty(&rows)?),
        ReportFormat::SummaryTable => Ok(render_table(&rows)),
    }
}

/// Aggregated view of a results file.
pub fn report(path: &Path, format: ReportFormat) -> Result<String> {
    render(&read_records(path)?, format)
}
