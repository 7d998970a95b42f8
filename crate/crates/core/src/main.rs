use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use surgectl::cli::{self, RunConfig};
use surgectl::controllers::{retune_grid, RetuneOutcome};
use surgectl::error::{Error, Result};
use surgectl::exec::Execution;
use surgectl::metrics::MetricsReport;
use surgectl::plant::surge_plant;
use surgectl::sim::{simulate_closed_loop, ScenarioKind};
use surgectl::tuning::{optimize, Algorithm, CostEvaluator};

#[derive(Parser)]
#[command(name = "surgectl", version, about = "Surge-speed controller synthesis, simulation and comparison")]
struct Args {
    /// Run configuration (`section.key = value` lines); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for noise realizations and optimizers.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulation step in seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one controller on one scenario.
    Simulate {
        #[arg(long, default_value = "mrc")]
        controller: String,
        #[arg(long, default_value = "nominal")]
        scenario: String,
    },
    /// Simulate every controller on every scenario and write the report.
    Compare,
    /// Tune PID gains against the multi-scenario cost.
    Tune {
        #[arg(value_enum)]
        algorithm: AlgorithmArg,
    },
    /// Grid-search the MRC template for minimum wave-scenario energy.
    RetuneMrc,
    /// Rebuild metrics and tables from saved traces.
    Report,
    /// Print the effective configuration.
    Config,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Pso,
    De,
    Woa,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Pso => Algorithm::Pso,
            AlgorithmArg::De => Algorithm::De,
            AlgorithmArg::Woa => Algorithm::Woa,
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}

fn effective_config(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => cli::load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = &args.out {
        cfg.output_dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }
    if let Some(dt) = args.dt {
        cfg.set_dt(dt);
    }
    if args.sequential {
        cfg.set_execution(Execution::Sequential);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: Args) -> Result<()> {
    let cfg = effective_config(&args)?;
    match args.command {
        Command::Simulate { controller, scenario } => simulate(&cfg, &controller, &scenario),
        Command::Compare => compare(&cfg),
        Command::Tune { algorithm } => tune(&cfg, algorithm.into()),
        Command::RetuneMrc => retune(&cfg),
        Command::Report => report(&cfg),
        Command::Config => {
            print!("{}", cfg.to_config_string());
            Ok(())
        }
    }
}

fn print_metrics(name: &str, scenario: &str, m: &MetricsReport) {
    println!(
        "{name:<10} {scenario:<10} rise {:.3} s  settle {:.3} s  OS {:.2} %  IAE {:.3}  ITAE {:.3}  energy {:.1}  activity {:.3e}{}",
        m.rise_s,
        m.settle_s,
        m.overshoot_pct,
        m.iae,
        m.itae,
        m.energy,
        m.activity,
        if m.diverged { "  (diverged)" } else { "" }
    );
}

fn simulate(cfg: &RunConfig, controller: &str, scenario: &str) -> Result<()> {
    let kind: ScenarioKind = scenario.parse().map_err(|e: Error| Error::Invariant(e.to_string()))?;
    let spec = cfg
        .controller(controller)
        .ok_or_else(|| Error::Invariant(format!("no controller named `{controller}`")))?;
    cli::prepare_output_dir(&cfg.output_dir)?;
    let plant = surge_plant(&cfg.plant)?;
    let c = spec.synthesize(&plant)?;
    let scenario_cfg = cfg.base_scenario().with_kind(kind);
    let trace = simulate_closed_loop(&plant, &c, &scenario_cfg)?;
    let metrics = MetricsReport::from_trace(&trace)?;
    let path = cfg.output_dir.join(cli::trace_path(&spec.name, kind));
    cli::save_trace(&trace, &path)?;
    print_metrics(&spec.name, kind.name(), &metrics);
    println!("trace written to {}", path.display());
    if trace.diverged {
        return Err(Error::InvalidParameter(format!("{}/{} diverged", spec.name, kind.name())));
    }
    Ok(())
}

fn compare(cfg: &RunConfig) -> Result<()> {
    cli::prepare_output_dir(&cfg.output_dir)?;
    let results = cli::run_compare(cfg)?;
    finish_report(&results, cfg)
}

fn report(cfg: &RunConfig) -> Result<()> {
    let results = cli::load_results(cfg, &cfg.output_dir)?;
    // traces are the input here; rewriting them is pointless
    let cfg = RunConfig { emit: cli::EmitSet { csv: false, ..cfg.emit }, ..cfg.clone() };
    let path = cfg.output_dir.join(cli::METRICS_FILE);
    cli::write_with(&path, |buf| {
        use std::io::Write;
        buf.write_all(cli::metrics_csv(&results).as_bytes())
    })?;
    finish_report(&results, &cfg)
}

fn finish_report(results: &cli::CompareResults, cfg: &RunConfig) -> Result<()> {
    let written = cli::emit_report(results, cfg)?;
    for (si, scenario) in results.scenarios.iter().enumerate() {
        for cell in results.scenario_cells(si) {
            if let Some(m) = cell.metrics() {
                print_metrics(&results.controllers[cell.controller].name, scenario.kind.name(), m);
            }
        }
    }
    println!("{} files written under {}", written.len(), cfg.output_dir.display());
    match results.first_failure() {
        Some(failure) => Err(Error::InvalidParameter(format!("cell failed: {failure}"))),
        None => Ok(()),
    }
}

fn tune(cfg: &RunConfig, algorithm: Algorithm) -> Result<()> {
    cli::prepare_output_dir(&cfg.output_dir)?;
    let plant = surge_plant(&cfg.plant)?;
    let evaluator = CostEvaluator::new(plant, &cfg.scenarios, cfg.weights)?;
    let result = optimize(algorithm, &|theta: &[f64]| evaluator.cost(theta), &cfg.search, &cfg.tune)?;
    let path = cfg.output_dir.join(format!("tune_{algorithm}.csv"));
    cli::write_with(&path, |buf| result.write_csv(buf))?;
    let t = &result.best_theta;
    println!(
        "{algorithm}: Kp {:.3}  Ki {:.3}  Kd {:.3}  Tf {:.4}  cost {:.6e}  ({} evaluations)",
        t[0], t[1], t[2], t[3], result.best_cost, result.evaluations
    );
    println!("history written to {}", path.display());
    Ok(())
}

fn retune(cfg: &RunConfig) -> Result<()> {
    cli::prepare_output_dir(&cfg.output_dir)?;
    let plant = surge_plant(&cfg.plant)?;
    let wave = cfg.base_scenario().with_kind(ScenarioKind::Wave);
    let RetuneOutcome { best, candidates } = retune_grid(&plant, &cfg.retune, &wave)?;
    let path = cfg.output_dir.join("retune_grid.csv");
    cli::write_with(&path, |buf| {
        use std::io::Write;
        writeln!(buf, "wn,tauf,energy,os,feasible")?;
        for c in &candidates {
            writeln!(
                buf,
                "{},{},{},{},{}",
                c.params.wn,
                c.params.tauf,
                c.energy,
                c.overshoot_pct,
                c.feasible(cfg.retune.os_cap)
            )?;
        }
        Ok(())
    })?;
    println!(
        "retuned MRC: wn {} rad/s  tauf {} s  (wave energy {:.1}, OS {:.3} %, {} grid points)",
        best.params.wn,
        best.params.tauf,
        best.energy,
        best.overshoot_pct,
        candidates.len()
    );
    println!("grid written to {}", path.display());
    Ok(())
}
