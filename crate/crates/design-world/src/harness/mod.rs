//! Experiment harness: parameter sweeps over strategy pairs, radii, tasks,
//! and cost models, with seeded per-run reproducibility and paired worlds so
//! both strategies face identical conditions.

mod report;
mod svg;

pub use report::{emit_reports, runs_csv_text, summary_csv_text, verdict_text, ReportPaths};
pub use svg::difference_plot;

use std::path::PathBuf;

use crate::agent::Strategy;
use crate::awm::{Radius, MAX_RADIUS};
use crate::dialogue::{run_dialogue, CostModel, DialogueConfig, EngineError, Task};
use crate::domain::{World, WorldConfig};
use crate::seeds;
use crate::stats::{classify, Classification, PerfCell, StatsError};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Radii used when none are configured. Nine settings spanning the sweep
/// range, 1800 dialogues at the default 100 runs per cell.
pub const DEFAULT_RADII: [f64; 9] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 11.0, 16.0];

/// Everything one sweep needs. Strategy A is the strategy under test;
/// classification reads "A compared to B".
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub strategy_a: Strategy,
    pub strategy_b: Strategy,
    pub task: Task,
    pub costs: CostModel,
    pub radii: Vec<f64>,
    pub runs: usize,
    pub master_seed: u64,
    pub world: WorldConfig,
    /// Paired mode reuses one world and dialogue seed per (radius, run) for
    /// both strategies; unpaired derives per-strategy seeds instead.
    pub paired: bool,
    pub livelock_bound: u32,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            strategy_a: Strategy::ExplicitWarrant,
            strategy_b: Strategy::AllImplicit,
            task: Task::Standard,
            costs: CostModel::new(1.0, 1.0, 0.01),
            radii: DEFAULT_RADII.to_vec(),
            runs: 100,
            master_seed: 0,
            world: WorldConfig::default(),
            paired: true,
            livelock_bound: 3,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs < 2 {
            return Err(HarnessError::Config(format!(
                "runs must be at least 2, got {}",
                self.runs
            )));
        }
        if self.radii.is_empty() {
            return Err(HarnessError::Config("no radii configured".into()));
        }
        for &r in &self.radii {
            if !r.is_finite() || !(0.0..=MAX_RADIUS).contains(&r) {
                return Err(HarnessError::Config(format!("radius {r} outside [0, 16]")));
            }
        }
        let mut sorted = self.radii.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("duplicate radius in sweep".into()));
        }
        self.world
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.costs
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    /// Stable key=value rendering; also the config-file format. The output
    /// directory is excluded so the hash names the experiment, not where it
    /// landed.
    pub fn canonical_text(&self) -> String {
        let radii = self
            .radii
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "commcost = {}\ninfcost = {}\nlivelock_bound = {}\nmaster_seed = {}\nmemory_size = {}\npaired = {}\npieces_per_agent = {}\nradii = {}\nretcost = {}\nroom_capacity = {}\nruns = {}\nscore_max = {}\nscore_min = {}\nstrategy_a = {}\nstrategy_b = {}\ntask = {}\n",
            self.costs.commcost,
            self.costs.infcost,
            self.livelock_bound,
            self.master_seed,
            self.world.memory_size,
            self.paired,
            self.world.pieces_per_agent,
            radii,
            self.costs.retcost,
            self.world.room_capacity,
            self.runs,
            self.world.score_max,
            self.world.score_min,
            self.strategy_a,
            self.strategy_b,
            self.task,
        )
    }

    pub fn config_hash(&self) -> u64 {
        fnv1a(self.canonical_text().as_bytes())
    }

    /// Applies one `key = value` setting, as found in config files.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let bad = |e: String| HarnessError::Config(format!("{key}: {e}"));
        match key {
            "strategy_a" => self.strategy_a = value.parse().map_err(bad)?,
            "strategy_b" => self.strategy_b = value.parse().map_err(bad)?,
            "task" => self.task = value.parse().map_err(bad)?,
            "commcost" => self.costs.commcost = parse_num(key, value)?,
            "infcost" => self.costs.infcost = parse_num(key, value)?,
            "retcost" => self.costs.retcost = parse_num(key, value)?,
            "radii" => {
                self.radii = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|e| bad(e.to_string()))?
            }
            "runs" => self.runs = parse_num(key, value)?,
            "master_seed" => self.master_seed = parse_num(key, value)?,
            "pieces_per_agent" => self.world.pieces_per_agent = parse_num(key, value)?,
            "score_min" => self.world.score_min = parse_num(key, value)?,
            "score_max" => self.world.score_max = parse_num(key, value)?,
            "room_capacity" => self.world.room_capacity = parse_num(key, value)?,
            "memory_size" => self.world.memory_size = parse_num(key, value)?,
            "paired" => self.paired = value.parse::<bool>().map_err(|e| bad(e.to_string()))?,
            "livelock_bound" => self.livelock_bound = parse_num(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown config key {other:?}"
                )));
            }
        }
        Ok(())
    }

    /// Parses a flat config file: one `key = value` per line, `#` comments.
    pub fn apply_file(&mut self, text: &str) -> Result<(), HarnessError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| HarnessError::Config(format!("{key}: {e}")))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// One dialogue's slot in the sweep, with its finished CSV row.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub radius: f64,
    pub strategy: Strategy,
    pub run_index: usize,
    pub seed: u64,
    pub performance: f64,
    pub csv: String,
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_hash: u64,
    pub master_seed: u64,
    pub version: &'static str,
}

/// Aggregated sweep output: per-cell samples, per-radius statistics, the
/// strategy classification, and provenance for reproduction.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub config: ExperimentConfig,
    pub cells: Vec<PerfCell>,
    pub classification: Classification,
    pub runs: Vec<RunRecord>,
    pub provenance: Provenance,
}

impl SweepSummary {
    pub fn dialogue_count(&self) -> usize {
        self.runs.len()
    }
}

const WORLD_TAG: u64 = 0x11;
const DIALOGUE_TAG: u64 = 0x22;

fn world_seed(master: u64, run: usize) -> u64 {
    seeds::derive(master, &[WORLD_TAG, run as u64])
}

fn dialogue_seed(master: u64, radius: f64, run: usize, side: u64, paired: bool) -> u64 {
    let side_tag = if paired { 0 } else { side + 1 };
    seeds::derive(
        master,
        &[DIALOGUE_TAG, radius.to_bits(), run as u64, side_tag],
    )
}

/// Runs the full sweep: for every radius and both strategies, `runs` seeded
/// dialogues. Worlds are regenerated per run index, so in paired mode both
/// strategy cells face identical worlds and dialogue seeds and differences
/// are attributable to strategy alone.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepSummary, HarnessError> {
    config.validate()?;
    let mut radii = config.radii.clone();
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));

    let mut cells = Vec::with_capacity(radii.len());
    let mut runs = Vec::with_capacity(radii.len() * config.runs * 2);
    for &r in &radii {
        let radius = Radius::new(r).expect("validated radius");
        let mut cell = PerfCell {
            radius: r,
            a: Vec::with_capacity(config.runs),
            b: Vec::with_capacity(config.runs),
        };
        for run in 0..config.runs {
            let world = World::generate(world_seed(config.master_seed, run), &config.world)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            for (side, strategy) in [config.strategy_a, config.strategy_b]
                .into_iter()
                .enumerate()
            {
                let seed = dialogue_seed(config.master_seed, r, run, side as u64, config.paired);
                let mut dialogue_config = DialogueConfig::new(
                    strategy,
                    strategy,
                    radius,
                    config.task,
                    config.costs,
                    seed,
                );
                dialogue_config.livelock_bound = config.livelock_bound;
                let result = run_dialogue(&world, &dialogue_config)?;
                if side == 0 {
                    cell.a.push(result.performance);
                } else {
                    cell.b.push(result.performance);
                }
                runs.push(RunRecord {
                    radius: r,
                    strategy,
                    run_index: run,
                    seed,
                    performance: result.performance,
                    csv: result.csv_row(),
                });
            }
        }
        cells.push(cell);
    }
    let classification = classify(&cells)?;
    Ok(SweepSummary {
        provenance: Provenance {
            config_hash: config.config_hash(),
            master_seed: config.master_seed,
            version: env!("CARGO_PKG_VERSION"),
        },
        config: config.clone(),
        cells,
        classification,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            runs: 2,
            radii: vec![1.0, 16.0],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn smallest_legal_sweep_runs_eight_dialogues() {
        let summary = run_sweep(&tiny_config()).unwrap();
        assert_eq!(summary.dialogue_count(), 8);
        assert_eq!(summary.cells.len(), 2);
        assert_eq!(summary.cells[0].a.len(), 2);
        assert_eq!(summary.cells[0].b.len(), 2);
    }

    #[test]
    fn default_config_counts_1800_dialogues() {
        let config = ExperimentConfig::default();
        assert_eq!(config.radii.len() * config.runs * 2, 1800);
    }

    #[test]
    fn same_master_seed_reproduces_the_summary() {
        let one = run_sweep(&tiny_config()).unwrap();
        let two = run_sweep(&tiny_config()).unwrap();
        for (x, y) in one.runs.iter().zip(&two.runs) {
            assert_eq!(x.csv, y.csv);
        }
        assert_eq!(one.classification, two.classification);
    }

    #[test]
    fn paired_mode_shares_seeds_across_strategies() {
        let summary = run_sweep(&tiny_config()).unwrap();
        for pair in summary.runs.chunks(2) {
            assert_eq!(pair[0].seed, pair[1].seed);
            assert_eq!(pair[0].radius, pair[1].radius);
        }
    }

    #[test]
    fn unpaired_mode_separates_seeds() {
        let config = ExperimentConfig {
            paired: false,
            ..tiny_config()
        };
        let summary = run_sweep(&config).unwrap();
        for pair in summary.runs.chunks(2) {
            assert_ne!(pair[0].seed, pair[1].seed);
        }
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut c = tiny_config();
        c.runs = 1;
        assert!(c.validate().is_err());
        let mut c = tiny_config();
        c.radii = vec![];
        assert!(c.validate().is_err());
        let mut c = tiny_config();
        c.radii = vec![1.0, 17.0];
        assert!(c.validate().is_err());
        let mut c = tiny_config();
        c.radii = vec![2.0, 2.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_files_round_trip_through_apply() {
        let mut config = ExperimentConfig::default();
        config
            .apply_file(
                "# preset\nstrategy_a = all-implicit\ncommcost = 10\nradii = 1, 4, 16\nruns = 5\npaired = false\n",
            )
            .unwrap();
        assert_eq!(config.strategy_a, Strategy::AllImplicit);
        assert_eq!(config.costs.commcost, 10.0);
        assert_eq!(config.radii, vec![1.0, 4.0, 16.0]);
        assert_eq!(config.runs, 5);
        assert!(!config.paired);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let mut config = ExperimentConfig::default();
        assert!(config.apply_file("no_such_key = 1\n").is_err());
    }

    #[test]
    fn config_hash_tracks_content_not_out_dir() {
        let mut a = ExperimentConfig::default();
        let b = ExperimentConfig {
            out_dir: PathBuf::from("elsewhere"),
            ..ExperimentConfig::default()
        };
        assert_eq!(a.config_hash(), b.config_hash());
        a.master_seed = 99;
        assert_ne!(a.config_hash(), b.config_hash());
    }
}
