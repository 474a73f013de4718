use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qineq::harness::{self, ExperimentConfig, ReportFormat};
use qineq::instances::{brute_force_solve, catalog, parse_instance, serialize_instance, KnapsackInstance};
use qineq::qubo::{build_hamiltonian, default_weights, model_to_json, qubo_to_ising, PenaltyWeights, Variant};
use qineq::schedule::ScheduleKind;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qineq", version, about = "Slack-bit vs slack-free knapsack embeddings for QAOA and trotterized annealing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in scenario catalog.
    #[command(subcommand)]
    Instances(InstancesCmd),
    /// Brute-force optimum of a scenario id or instance JSON file.
    Solve { target: String },
    /// Quadratic models.
    #[command(subcommand)]
    Qubo(QuboCmd),
    /// Run an experiment sweep from a JSON config.
    Run(RunArgs),
    /// Aggregate a results file.
    Report {
        results: PathBuf,
        #[arg(long, default_value = "summary-table")]
        format: String,
    },
    /// Check the oracle against the embedded scenario and term tables.
    VerifyTables,
}

#[derive(Subcommand)]
enum InstancesCmd {
    List,
    /// Write instance JSON to stdout, or one file per scenario into `--dir`.
    Export {
        ids: Vec<usize>,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuboCmd {
    Build {
        target: String,
        #[arg(long, default_value = "standard")]
        variant: String,
        /// `A = factor * B` instead of the variant default.
        #[arg(long)]
        single_penalty_factor: Option<f64>,
        /// Write the model JSON here instead of printing a summary.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long)]
    f_omega: Option<f64>,
    #[arg(long)]
    f_sd: Option<f64>,
    #[arg(long)]
    fd_eps: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Allow circuits up to 26 qubits.
    #[arg(long)]
    large: bool,
    /// Write zero wall times so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn load_target(target: &str) -> Result<KnapsackInstance> {
    if let Ok(id) = target.parse::<usize>() {
        return Ok(catalog::scenario(id)?);
    }
    let text = std::fs::read_to_string(target).with_context(|| format!("reading {target}"))?;
    Ok(parse_instance(&text)?)
}

fn bitstring(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn instances(cmd: InstancesCmd) -> Result<()> {
    match cmd {
        InstancesCmd::List => {
            println!("{:>8} {:>3} {:>3} {:>6} {:>6} {:>8} {:>7}", "scenario", "M", "N", "x-bits", "slack", "optimum", "optima");
            for row in &catalog::ROWS {
                let inst = row.instance();
                println!(
                    "{:>8} {:>3} {:>3} {:>6} {:>6} {:>8} {:>7}",
                    row.id,
                    inst.num_knapsacks(),
                    inst.num_items(),
                    inst.num_x_bits(),
                    inst.total_slack_bits(),
                    row.optimal_value,
                    row.num_optima
                );
            }
        }
        InstancesCmd::Export { ids, dir } => {
            let ids = if ids.is_empty() { (0..catalog::NUM_SCENARIOS).collect() } else { ids };
            for id in ids {
                let text = serialize_instance(&catalog::scenario(id)?);
                match &dir {
                    Some(d) => {
                        std::fs::create_dir_all(d)?;
                        std::fs::write(d.join(format!("scenario_{id:02}.json")), text + "\n")?;
                    }
                    None => println!("{text}"),
                }
            }
        }
    }
    Ok(())
}

fn solve(target: &str) -> Result<()> {
    let inst = load_target(target)?;
    let r = brute_force_solve(&inst)?;
    let doc = serde_json::json!({
        "scenario": inst.scenario_id(),
        "optimal_value": r.optimal_value,
        "num_optima": r.optimal_assignments.len(),
        "optimal_assignments": r.optimal_assignments.iter().map(|a| bitstring(a.bits())).collect::<Vec<_>>(),
        "count_90pct": r.count_90pct,
        "num_feasible": r.num_feasible(),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn qubo(cmd: QuboCmd) -> Result<()> {
    let QuboCmd::Build {
        target,
        variant,
        single_penalty_factor,
        export,
    } = cmd;
    let inst = load_target(&target)?;
    let variant: Variant = variant.parse()?;
    let mut w = default_weights(&inst, variant);
    if let Some(f) = single_penalty_factor {
        w = PenaltyWeights::new(f * w.b, w.b, w.c)?;
    }
    let model = build_hamiltonian(&inst, variant, w);
    match export {
        Some(path) => std::fs::write(&path, model_to_json(&model) + "\n")?,
        None => {
            let ising = qubo_to_ising(&model).normalized()?;
            println!("variant      {variant}");
            println!("weights      A={} B={} C={}", w.a, w.b, w.c);
            println!("variables    {} ({} x, {} slack)", model.num_vars(), inst.num_x_bits(), model.num_vars() - inst.num_x_bits());
            println!("quadratic    {}", model.quadratic().len());
            println!("nu_max       {}", ising.nu_max);
        }
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(s) = &args.schedule {
        cfg.schedule.kind = s.parse::<ScheduleKind>()?;
    }
    let o = &mut cfg.optimizer;
    macro_rules! set {
        ($field:expr, $flag:expr) => {
            if let Some(v) = $flag {
                $field = v;
            }
        };
    }
    set!(cfg.schedule.dt, args.dt);
    set!(o.learning_rate, args.lr);
    set!(o.window, args.omega);
    set!(o.f_omega, args.f_omega);
    set!(o.f_sd, args.f_sd);
    set!(o.fd_step, args.fd_eps);
    set!(o.max_iterations, args.max_iters);
    set!(cfg.seed, args.seed);
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    if args.output.is_some() {
        cfg.output = args.output;
    }
    cfg.large |= args.large;
    cfg.timing &= !args.no_timing;
    cfg.validate()?;

    let res = harness::run_experiment(&cfg)?;
    for f in res.failures() {
        eprintln!(
            "cell scenario={} {} {} p={} rep={} failed: {}",
            f.scenario,
            f.algorithm,
            f.protocol,
            f.p,
            f.repetition,
            f.error.as_deref().unwrap_or("")
        );
    }
    print!("{}", harness::render(&res.records, ReportFormat::SummaryTable)?);
    if let Some(out) = &cfg.output {
        eprintln!("wrote {} and {}", out.display(), out.with_extension("csv").display());
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Instances(cmd) => instances(cmd),
        Command::Solve { target } => solve(&target),
        Command::Qubo(cmd) => qubo(cmd),
        Command::Run(args) => run(args),
        Command::Report { results, format } => {
            print!("{}", harness::report(&results, format.parse()?)?);
            Ok(())
        }
        Command::VerifyTables => {
            let report = harness::verify_tables()?;
            print!("{}", report.render());
            if !report.passed() {
                bail!("table verification failed");
            }
            Ok(())
        }
    }
}
