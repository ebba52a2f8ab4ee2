//! Command-line interface: `run` for a single transcripted dialogue, `sweep`
//! for a configurable experiment sweep, and `replicate` for the built-in
//! preset contrasts (figure3 through figure6).

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::agent::Strategy;
use crate::awm::Radius;
use crate::dialogue::{run_dialogue, CostModel, DialogueConfig, Task};
use crate::domain::{World, WorldConfig};
use crate::harness::{emit_reports, run_sweep, ExperimentConfig};

/// Environment variable consulted for the default master seed.
pub const SEED_ENV: &str = "DESIGNWORLD_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "designworld",
    version,
    about = "Simulate two-agent design negotiations under bounded attention and compare discourse strategies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a single dialogue and print its transcript
    Run(RunArgs),
    /// Run a parameter sweep and write runs.csv, summary.csv,
    /// difference.svg, and verdict.txt
    Sweep(SweepArgs),
    /// Run a preset sweep: figure3 (free retrieval), figure4 (costly
    /// retrieval), figure5 (expensive communication), figure6 (znmb task)
    Replicate(ReplicateArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Seed for the world and the dialogue
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "all-implicit", value_parser = Strategy::from_str)]
    strategy_a: Strategy,
    #[arg(long, default_value = "all-implicit", value_parser = Strategy::from_str)]
    strategy_b: Strategy,
    /// Attention radius in [0, 16]
    #[arg(long, default_value_t = 16.0)]
    radius: f64,
    #[arg(long, default_value = "standard", value_parser = Task::from_str)]
    task: Task,
    #[arg(long, default_value_t = 0.0)]
    commcost: f64,
    #[arg(long, default_value_t = 0.0)]
    infcost: f64,
    #[arg(long, default_value_t = 0.0)]
    retcost: f64,
    #[arg(long, default_value_t = 8)]
    pieces_per_agent: usize,
    #[arg(long, default_value_t = 10)]
    score_min: u32,
    #[arg(long, default_value_t = 56)]
    score_max: u32,
    #[arg(long, default_value_t = 4)]
    room_capacity: usize,
    #[arg(long, default_value_t = 16)]
    memory_size: u8,
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Config file of key = value lines; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = Strategy::from_str)]
    strategy_a: Option<Strategy>,
    #[arg(long, value_parser = Strategy::from_str)]
    strategy_b: Option<Strategy>,
    #[arg(long, value_parser = Task::from_str)]
    task: Option<Task>,
    #[arg(long)]
    commcost: Option<f64>,
    #[arg(long)]
    infcost: Option<f64>,
    #[arg(long)]
    retcost: Option<f64>,
    /// Comma-separated radii, e.g. 1,2,3,4,5,6,8,11,16
    #[arg(long)]
    radii: Option<String>,
    /// Dialogues per cell
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed (defaults to $DESIGNWORLD_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pieces_per_agent: Option<usize>,
    #[arg(long)]
    score_min: Option<u32>,
    #[arg(long)]
    score_max: Option<u32>,
    #[arg(long)]
    room_capacity: Option<usize>,
    #[arg(long)]
    memory_size: Option<u8>,
    /// Give each strategy its own seeds instead of paired worlds
    #[arg(long)]
    unpaired: bool,
    /// Output directory for the report files
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplicateArgs {
    /// One of: figure3, figure4, figure5, figure6
    preset: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn env_master_seed() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok())
}

fn cmd_run(args: &RunArgs) -> Result<(), String> {
    let world_config = WorldConfig {
        pieces_per_agent: args.pieces_per_agent,
        score_min: args.score_min,
        score_max: args.score_max,
        room_capacity: args.room_capacity,
        memory_size: args.memory_size,
    };
    let world = World::generate(args.seed, &world_config).map_err(|e| e.to_string())?;
    let radius = Radius::new(args.radius).map_err(|e| e.to_string())?;
    let config = DialogueConfig::new(
        args.strategy_a,
        args.strategy_b,
        radius,
        args.task,
        CostModel::new(args.commcost, args.infcost, args.retcost),
        args.seed,
    );
    let result = run_dialogue(&world, &config).map_err(|e| e.to_string())?;
    print!("{}", result.transcript_text());
    println!("---");
    println!(
        "raw={} messages={} inferences={} retrieval_steps={} performance={}",
        result.raw_score,
        result.messages,
        result.inferences,
        result.retrieval_steps,
        result.performance
    );
    Ok(())
}

fn build_sweep_config(args: &SweepArgs) -> Result<ExperimentConfig, String> {
    let mut config = ExperimentConfig::default();
    if let Some(seed) = env_master_seed() {
        config.master_seed = seed;
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        config.apply_file(&text).map_err(|e| e.to_string())?;
    }
    if let Some(v) = args.strategy_a {
        config.strategy_a = v;
    }
    if let Some(v) = args.strategy_b {
        config.strategy_b = v;
    }
    if let Some(v) = args.task {
        config.task = v;
    }
    if let Some(v) = args.commcost {
        config.costs.commcost = v;
    }
    if let Some(v) = args.infcost {
        config.costs.infcost = v;
    }
    if let Some(v) = args.retcost {
        config.costs.retcost = v;
    }
    if let Some(list) = &args.radii {
        config.radii = list
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<f64>, String>>()?;
    }
    if let Some(v) = args.runs {
        config.runs = v;
    }
    if let Some(v) = args.seed {
        config.master_seed = v;
    }
    if let Some(v) = args.pieces_per_agent {
        config.world.pieces_per_agent = v;
    }
    if let Some(v) = args.score_min {
        config.world.score_min = v;
    }
    if let Some(v) = args.score_max {
        config.world.score_max = v;
    }
    if let Some(v) = args.room_capacity {
        config.world.room_capacity = v;
    }
    if let Some(v) = args.memory_size {
        config.world.memory_size = v;
    }
    if args.unpaired {
        config.paired = false;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    Ok(config)
}

fn cmd_sweep(config: &ExperimentConfig) -> Result<(), String> {
    let summary = run_sweep(config).map_err(|e| e.to_string())?;
    let paths = emit_reports(&summary, &config.out_dir).map_err(|e| e.to_string())?;
    print!("{}", crate::harness::verdict_text(&summary));
    println!("wrote {}", paths.runs_csv.display());
    println!("wrote {}", paths.summary_csv.display());
    println!("wrote {}", paths.difference_svg.display());
    println!("wrote {}", paths.verdict_txt.display());
    Ok(())
}

/// The built-in preset contrasts: explicit-warrant versus all-implicit under
/// four cost/task settings.
pub fn preset_config(name: &str) -> Result<ExperimentConfig, String> {
    let mut config = ExperimentConfig::default();
    if let Some(seed) = env_master_seed() {
        config.master_seed = seed;
    }
    match name {
        "figure3" => {
            config.task = Task::Standard;
            config.costs = CostModel::new(1.0, 1.0, 0.0);
        }
        "figure4" => {
            config.task = Task::Standard;
            config.costs = CostModel::new(1.0, 1.0, 0.01);
        }
        "figure5" => {
            config.task = Task::Standard;
            config.costs = CostModel::new(10.0, 0.0, 0.0);
        }
        "figure6" => {
            config.task = Task::ZeroNonMatchingBeliefs;
            config.costs = CostModel::new(10.0, 0.0, 0.0);
        }
        other => {
            return Err(format!(
                "unknown preset {other:?} (expected figure3, figure4, figure5, or figure6)"
            ))
        }
    }
    config.out_dir = PathBuf::from(name);
    Ok(config)
}

fn cmd_replicate(args: &ReplicateArgs) -> Result<(), String> {
    let mut config = preset_config(&args.preset)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    cmd_sweep(&config)
}

/// Parses `argv` and runs the selected subcommand. Returns the process exit
/// code: 0 on success, 1 on runtime failure, 2 on usage errors.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => build_sweep_config(args).and_then(|c| cmd_sweep(&c)),
        Command::Replicate(args) => cmd_replicate(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}
