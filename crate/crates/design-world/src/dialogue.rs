//! Drives one complete dialogue: turn-taking between two agents, implicit
//! acceptance resolution, plan assembly, warrant-ledger bookkeeping, and the
//! performance computation.
//!
//! Protocol shape: after an opening act the agents alternate as proposer.
//! The proposer emits its strategy's expansion of its top-ranked option; the
//! addressee deliberates and either lets the proposal stand (the engine
//! resolves it as implicitly accepted the moment the addressee moves on) or
//! rejects it, with a counter-proposal when it retrieved something strictly
//! better. A counter becomes the pending proposal with roles swapped. The
//! dialogue closes when both rooms are full or nobody can propose.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::agent::{ActKind, Agent, CommunicativeAct, DeliberationOutcome, Strategy};
use crate::awm::Radius;
use crate::domain::{
    AgentId, DesignPlan, DomainError, OptionId, PieceId, PutOption, WarrantLedger, World,
};
use crate::seeds;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("invalid cost model: {0}")]
    InvalidCosts(String),
}

/// Which scoring rule grades the final plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    Standard,
    ZeroNonMatchingBeliefs,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Standard => write!(f, "standard"),
            Task::ZeroNonMatchingBeliefs => write!(f, "zero-nonmatching-beliefs"),
        }
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Task::Standard),
            "znmb" | "zero-nonmatching-beliefs" => Ok(Task::ZeroNonMatchingBeliefs),
            other => Err(format!(
                "unknown task {other:?} (expected standard or znmb)"
            )),
        }
    }
}

/// Points deducted per message, per inference, and per retrieval step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub commcost: f64,
    pub infcost: f64,
    pub retcost: f64,
}

impl CostModel {
    pub fn new(commcost: f64, infcost: f64, retcost: f64) -> Self {
        CostModel {
            commcost,
            infcost,
            retcost,
        }
    }

    pub fn free() -> Self {
        CostModel::new(0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for (name, v) in [
            ("commcost", self.commcost),
            ("infcost", self.infcost),
            ("retcost", self.retcost),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(EngineError::InvalidCosts(format!("{name} = {v}")));
            }
        }
        Ok(())
    }
}

/// Raw score minus both agents' communication, inference, and retrieval
/// costs. May be negative.
pub fn performance(
    raw_score: f64,
    messages: u64,
    inferences: u64,
    retrieval_steps: u64,
    costs: &CostModel,
) -> f64 {
    raw_score
        - costs.commcost * messages as f64
        - costs.infcost * inferences as f64
        - costs.retcost * retrieval_steps as f64
}

/// All inputs of one dialogue run.
#[derive(Debug, Clone)]
pub struct DialogueConfig {
    pub strategy_a: Strategy,
    pub strategy_b: Strategy,
    pub radius: Radius,
    pub task: Task,
    pub costs: CostModel,
    pub seed: u64,
    /// Rejections of one option tolerated before the engine forces a skip.
    pub livelock_bound: u32,
}

impl DialogueConfig {
    pub fn new(
        strategy_a: Strategy,
        strategy_b: Strategy,
        radius: Radius,
        task: Task,
        costs: CostModel,
        seed: u64,
    ) -> Self {
        DialogueConfig {
            strategy_a,
            strategy_b,
            radius,
            task,
            costs,
            seed,
            livelock_bound: 3,
        }
    }
}

/// How one emitted proposal was ultimately resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    ImplicitlyAccepted,
    RejectedWithCounter,
    RejectedPrecondition,
}

/// One proposal segment: a proposal expansion emitted via make_proposal and
/// its fate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentRecord {
    pub proposer: AgentId,
    pub option: PutOption,
    /// Acts the expansion produced: 2 with a warrant, 1 without.
    pub messages: u8,
    pub warrant_said: bool,
    pub resolution: Resolution,
}

/// Memory work one deliberation spent locating the proposal's score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreLookup {
    pub agent: AgentId,
    pub option: OptionId,
    pub steps: u64,
    pub found: bool,
}

/// Everything a finished dialogue produced.
#[derive(Debug, Clone)]
pub struct DialogueResult {
    pub config: DialogueConfig,
    pub plan: DesignPlan,
    pub ledger: WarrantLedger,
    pub acts: Vec<CommunicativeAct>,
    pub transcript: Vec<String>,
    pub segments: Vec<SegmentRecord>,
    pub score_lookups: Vec<ScoreLookup>,
    pub messages: u64,
    pub inferences: u64,
    pub retrieval_steps: u64,
    pub raw_score: u32,
    pub performance: f64,
    pub forced_skips: u64,
    pub warrant_fallbacks: u64,
}

impl DialogueResult {
    pub fn transcript_text(&self) -> String {
        let mut out = String::new();
        for line in &self.transcript {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// One CSV row matching [`csv_header`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.config.seed,
            self.config.strategy_a,
            self.config.strategy_b,
            self.config.radius,
            self.config.task,
            self.config.costs.commcost,
            self.config.costs.infcost,
            self.config.costs.retcost,
            self.raw_score,
            self.messages,
            self.inferences,
            self.retrieval_steps,
            self.performance
        )
    }
}

pub fn csv_header() -> &'static str {
    "seed,strategy_a,strategy_b,radius,task,commcost,infcost,retcost,raw,messages,inferences,retrieval_steps,performance"
}

/// Runs one dialogue to completion.
pub fn run_dialogue(world: &World, config: &DialogueConfig) -> Result<DialogueResult, EngineError> {
    config.costs.validate()?;
    let mut engine = Engine::new(world, config);
    engine.run()?;
    engine.finish()
}

struct Engine<'w> {
    world: &'w World,
    config: DialogueConfig,
    agents: [Agent; 2],
    plan: DesignPlan,
    ledger: WarrantLedger,
    acts: Vec<CommunicativeAct>,
    transcript: Vec<String>,
    segments: Vec<SegmentRecord>,
    score_lookups: Vec<ScoreLookup>,
    reject_counts: BTreeMap<OptionId, u32>,
    banned: BTreeSet<OptionId>,
    forced_skips: u64,
}

impl<'w> Engine<'w> {
    fn new(world: &'w World, config: &DialogueConfig) -> Self {
        let agent = |id: AgentId, strategy: Strategy| {
            Agent::new(
                id,
                strategy,
                config.radius,
                world,
                seeds::derive(config.seed, &[0x5eed, id.index() as u64]),
            )
        };
        Engine {
            world,
            config: config.clone(),
            agents: [
                agent(AgentId::A, config.strategy_a),
                agent(AgentId::B, config.strategy_b),
            ],
            plan: DesignPlan::new(world.config().room_capacity),
            ledger: WarrantLedger::new(),
            acts: Vec::new(),
            transcript: Vec::new(),
            segments: Vec::new(),
            score_lookups: Vec::new(),
            reject_counts: BTreeMap::new(),
            banned: BTreeSet::new(),
            forced_skips: 0,
        }
    }

    fn agent_mut(&mut self, id: AgentId) -> &mut Agent {
        &mut self.agents[id.index()]
    }

    fn emit(&mut self, act: CommunicativeAct) {
        self.transcript.push(self.render(&act));
        self.agents[act.addressee.index()].incorporate(&act);
        self.acts.push(act);
    }

    fn render(&self, act: &CommunicativeAct) -> String {
        let turn = self.acts.len() + 1;
        let (target, payload) = match &act.kind {
            ActKind::Open | ActKind::Close => ("-".to_string(), "-".to_string()),
            ActKind::Propose { option } => (
                option.id.to_string(),
                format!(
                    "put({}, {}, {})",
                    option.actor,
                    self.world.piece(option.piece).label,
                    option.room
                ),
            ),
            ActKind::Say { piece, points } => (
                self.world.piece(*piece).label.clone(),
                format!("worth={points}"),
            ),
            ActKind::Reject {
                rejected,
                counter: Some(counter),
            } => (rejected.id.to_string(), format!("counter={}", counter.id)),
            ActKind::Reject {
                rejected,
                counter: None,
            } => (rejected.id.to_string(), "precondition".to_string()),
            ActKind::Accept { option } => (option.id.to_string(), "-".to_string()),
        };
        format!(
            "{} | {} | {} | {} | {}",
            turn,
            act.sender,
            act.kind.name(),
            target,
            payload
        )
    }

    fn bump_reject(&mut self, option: OptionId) {
        let count = self.reject_counts.entry(option).or_insert(0);
        *count += 1;
        if *count > self.config.livelock_bound && self.banned.insert(option) {
            self.forced_skips += 1;
            log::warn!(
                "{option} rejected {count} times, past the bound of {}; skipping it from now on",
                self.config.livelock_bound
            );
        }
    }

    /// Points each side would bring to the table for this option's warrant:
    /// the value communicated in the current segment if there was one, else
    /// whatever a cost-free probe of that agent's memory turns up.
    fn warrant_points(
        &mut self,
        id: AgentId,
        option: &PutOption,
        segment_warrant: Option<(PieceId, u32)>,
    ) -> Option<u32> {
        if let Some((piece, points)) = segment_warrant {
            if piece == option.piece {
                return Some(points);
            }
        }
        self.agent_mut(id).probe_score(option.piece)
    }

    fn warrant_match(
        &mut self,
        option: &PutOption,
        segment_warrant: Option<(PieceId, u32)>,
    ) -> bool {
        let a = self.warrant_points(AgentId::A, option, segment_warrant);
        let b = self.warrant_points(AgentId::B, option, segment_warrant);
        matches!((a, b), (Some(x), Some(y)) if x == y)
    }

    fn accept(
        &mut self,
        pending: PutOption,
        resolver: AgentId,
        segment_warrant: Option<(PieceId, u32)>,
    ) -> Result<(), EngineError> {
        // Implicit acceptance: the resolver spends one inference concluding
        // the proposal stands. The warrant probe happens before the
        // acceptance traces are laid down.
        self.agent_mut(resolver).charge_inference();
        let matched = self.warrant_match(&pending, segment_warrant);
        self.ledger.record(pending.id, matched);
        self.plan.place(pending)?;
        self.agents[0].record_acceptance(&pending);
        self.agents[1].record_acceptance(&pending);
        Ok(())
    }

    fn run(&mut self) -> Result<(), EngineError> {
        self.emit(CommunicativeAct {
            sender: AgentId::A,
            addressee: AgentId::B,
            kind: ActKind::Open,
        });
        let mut proposer = AgentId::A;
        while let Some(room) = self.plan.current_room() {
            let banned = self.banned.clone();
            let top = {
                let first = self
                    .agent_mut(proposer)
                    .generate_options(room, &banned)
                    .into_iter()
                    .next();
                match first {
                    Some(t) => t,
                    None => {
                        let other = proposer.other();
                        let second = self
                            .agent_mut(other)
                            .generate_options(room, &banned)
                            .into_iter()
                            .next();
                        match second {
                            Some(t) => {
                                proposer = other;
                                t
                            }
                            None => break,
                        }
                    }
                }
            };

            let expansion = self
                .agent_mut(proposer)
                .make_proposal(&top, proposer.other());
            let mut segment_warrant = expansion.iter().find_map(|a| match a.kind {
                ActKind::Say { piece, points } => Some((piece, points)),
                _ => None,
            });
            let segment_index = self.segments.len();
            self.segments.push(SegmentRecord {
                proposer,
                option: top.option,
                messages: expansion.len() as u8,
                warrant_said: segment_warrant.is_some(),
                resolution: Resolution::ImplicitlyAccepted,
            });
            for act in expansion {
                self.emit(act);
            }

            let mut pending = top.option;
            let mut pending_proposer = proposer;
            let mut first_round = true;
            loop {
                let responder = pending_proposer.other();
                let room_full = self.plan.room_full(pending.room);
                let banned = self.banned.clone();
                let deliberation = self
                    .agent_mut(responder)
                    .deliberate(&pending, room_full, &banned);
                if deliberation.proposal_score_steps > 0 {
                    self.score_lookups.push(ScoreLookup {
                        agent: responder,
                        option: pending.id,
                        steps: deliberation.proposal_score_steps,
                        found: deliberation.proposal_points.is_some(),
                    });
                }
                match deliberation.outcome {
                    DeliberationOutcome::AcceptIt => {
                        self.accept(pending, responder, segment_warrant)?;
                        proposer = responder;
                        break;
                    }
                    DeliberationOutcome::RejectWithCounter(counter) => {
                        if first_round {
                            self.segments[segment_index].resolution =
                                Resolution::RejectedWithCounter;
                        }
                        self.emit(CommunicativeAct {
                            sender: responder,
                            addressee: pending_proposer,
                            kind: ActKind::Reject {
                                rejected: pending,
                                counter: Some(counter),
                            },
                        });
                        self.bump_reject(pending.id);
                        // The counter opens a fresh proposal segment with no
                        // communicated warrant.
                        segment_warrant = None;
                        pending_proposer = responder;
                        pending = counter;
                    }
                    DeliberationOutcome::RejectPrecondition => {
                        if first_round {
                            self.segments[segment_index].resolution =
                                Resolution::RejectedPrecondition;
                        }
                        self.emit(CommunicativeAct {
                            sender: responder,
                            addressee: pending_proposer,
                            kind: ActKind::Reject {
                                rejected: pending,
                                counter: None,
                            },
                        });
                        self.bump_reject(pending.id);
                        proposer = responder;
                        break;
                    }
                }
                first_round = false;
            }
        }
        let closer = proposer;
        self.emit(CommunicativeAct {
            sender: closer,
            addressee: closer.other(),
            kind: ActKind::Close,
        });
        Ok(())
    }

    fn finish(self) -> Result<DialogueResult, EngineError> {
        let raw_score = match self.config.task {
            Task::Standard => self.world.standard_raw_score(&self.plan),
            Task::ZeroNonMatchingBeliefs => self.world.znmb_raw_score(&self.plan, &self.ledger)?,
        };
        let messages = self.acts.len() as u64;
        let inferences = self.agents[0].inference_count() + self.agents[1].inference_count();
        let retrieval_steps = self.agents[0].retrieval_steps() + self.agents[1].retrieval_steps();
        let perf = performance(
            f64::from(raw_score),
            messages,
            inferences,
            retrieval_steps,
            &self.config.costs,
        );
        let warrant_fallbacks =
            self.agents[0].warrant_fallbacks() + self.agents[1].warrant_fallbacks();
        Ok(DialogueResult {
            config: self.config,
            plan: self.plan,
            ledger: self.ledger,
            acts: self.acts,
            transcript: self.transcript,
            segments: self.segments,
            score_lookups: self.score_lookups,
            messages,
            inferences,
            retrieval_steps,
            raw_score,
            performance: perf,
            forced_skips: self.forced_skips,
            warrant_fallbacks,
        })
    }
}
