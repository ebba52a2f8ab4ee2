//! Design-World: a deterministic testbed for discourse strategies.
//!
//! Two agents negotiate a two-room furniture plan. Each agent's reasoning is
//! bounded by an attention/working-memory model ([`awm`]): only beliefs
//! retrievable within a search radius are salient enough to use. Agents can
//! play the All-Implicit strategy (bare proposals) or Explicit-Warrant
//! (state the piece's score before proposing it). The [`harness`] sweeps
//! radii and cost models over seeded dialogue populations and classifies one
//! strategy against the other with a Kolmogorov-Smirnov test ([`stats`]).

pub mod agent;
pub mod awm;
pub mod cli;
pub mod dialogue;
pub mod domain;
pub mod harness;
pub mod seeds;
pub mod stats;

pub use agent::{Agent, Strategy};
pub use awm::{AwmGrid, Coord, Radius};
pub use dialogue::{run_dialogue, CostModel, DialogueConfig, DialogueResult, Task};
pub use domain::{AgentId, DesignPlan, World, WorldConfig};
pub use harness::{run_sweep, ExperimentConfig, SweepSummary};
pub use stats::{classify, ks_two_sample, Classification, KsResult, Verdict};
