//! The negotiating agent: means-end option generation, deliberation over
//! proposals, strategy-parametrized proposal expansion, and incorporation of
//! received acts. All reasoning about scores runs through the agent's
//! attention-bounded memory; a score the agent cannot retrieve within its
//! radius cannot inform a decision, however well it "knows" it.

use std::collections::BTreeSet;
use std::fmt;

use crate::awm::{AwmGrid, Radius, Retrieval};
use crate::domain::{AgentId, OptionId, PieceId, Proposition, PutOption, Room, World};
use crate::seeds;

/// Discourse strategy: how a proposal expands into communicative acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// A proposal is a bare propose act; warrants stay implicit.
    AllImplicit,
    /// Every proposal is preceded by a say act stating the piece's score.
    ExplicitWarrant,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::AllImplicit => write!(f, "all-implicit"),
            Strategy::ExplicitWarrant => write!(f, "explicit-warrant"),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all-implicit" | "ai" => Ok(Strategy::AllImplicit),
            "explicit-warrant" | "ew" => Ok(Strategy::ExplicitWarrant),
            other => Err(format!(
                "unknown strategy {other:?} (expected all-implicit or explicit-warrant)"
            )),
        }
    }
}

/// A typed dialogue message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunicativeAct {
    pub sender: AgentId,
    pub addressee: AgentId,
    pub kind: ActKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActKind {
    Open,
    Close,
    Propose {
        option: PutOption,
    },
    /// States a piece's score, making the warrant salient for the hearer.
    Say {
        piece: PieceId,
        points: u32,
    },
    Reject {
        rejected: PutOption,
        counter: Option<PutOption>,
    },
    Accept {
        option: PutOption,
    },
}

impl ActKind {
    pub fn name(&self) -> &'static str {
        match self {
            ActKind::Open => "open",
            ActKind::Close => "close",
            ActKind::Propose { .. } => "propose",
            ActKind::Say { .. } => "say",
            ActKind::Reject { .. } => "reject",
            ActKind::Accept { .. } => "accept",
        }
    }
}

/// An option together with the score belief retrieved while generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedOption {
    pub option: PutOption,
    pub retrieved_points: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeliberationOutcome {
    AcceptIt,
    /// The agent retrieved a strictly better competing option of its own.
    RejectWithCounter(PutOption),
    /// The proposal's preconditions do not hold (piece used or room full).
    RejectPrecondition,
}

/// Outcome of deliberating one proposal, with the memory work spent locating
/// the proposal's score broken out for instrumentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deliberation {
    pub outcome: DeliberationOutcome,
    pub proposal_points: Option<u32>,
    pub proposal_score_steps: u64,
}

/// One agent's complete state for a dialogue.
#[derive(Debug, Clone)]
pub struct Agent {
    id: AgentId,
    strategy: Strategy,
    radius: Radius,
    memory: AwmGrid<Proposition>,
    inference_count: u64,
    owned: BTreeSet<PieceId>,
    used: BTreeSet<PieceId>,
    warrant_fallbacks: u64,
}

impl Agent {
    /// Builds the agent and seeds its memory: every piece's score plus the
    /// agent's own ownership facts, stored in an order shuffled from `seed`.
    pub fn new(id: AgentId, strategy: Strategy, radius: Radius, world: &World, seed: u64) -> Agent {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let mut memory = AwmGrid::with_size(world.config().memory_size, seeds::mix(seed, 0))
            .expect("validated memory size");
        let mut props: Vec<Proposition> = world
            .pieces()
            .iter()
            .map(|p| Proposition::Score {
                piece: p.id,
                points: p.points,
            })
            .collect();
        props.extend(
            world
                .inventory(id)
                .iter()
                .map(|&piece| Proposition::Owns { agent: id, piece }),
        );
        let mut order_rng = rand_chacha::ChaCha8Rng::seed_from_u64(seeds::mix(seed, 1));
        props.shuffle(&mut order_rng);
        for prop in props {
            memory.store(prop);
        }
        Agent {
            id,
            strategy,
            radius,
            memory,
            inference_count: 0,
            owned: world.inventory(id).iter().copied().collect(),
            used: BTreeSet::new(),
            warrant_fallbacks: 0,
        }
    }

    pub fn id(&self) -> AgentId {
        self.id
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn inference_count(&self) -> u64 {
        self.inference_count
    }

    pub fn retrieval_steps(&self) -> u64 {
        self.memory.retrieval_steps()
    }

    pub fn warrant_fallbacks(&self) -> u64 {
        self.warrant_fallbacks
    }

    pub fn memory(&self) -> &AwmGrid<Proposition> {
        &self.memory
    }

    pub fn piece_used(&self, piece: PieceId) -> bool {
        self.used.contains(&piece)
    }

    /// Attempts to recall a piece's score within the attention radius,
    /// charging the loci searched.
    pub fn retrieve_score(&mut self, piece: PieceId) -> Retrieval<u32> {
        let r = self.memory.retrieve(
            |p| matches!(p, Proposition::Score { piece: q, .. } if *q == piece),
            self.radius,
        );
        Retrieval {
            steps: r.steps,
            found: r.found.map(|p| match p {
                Proposition::Score { points, .. } => points,
                _ => unreachable!("predicate admits only score propositions"),
            }),
        }
    }

    /// Cost-free score lookup for instrumentation probes.
    pub fn probe_score(&mut self, piece: PieceId) -> Option<u32> {
        self.memory
            .probe(
                |p| matches!(p, Proposition::Score { piece: q, .. } if *q == piece),
                self.radius,
            )
            .map(|p| match p {
                Proposition::Score { points, .. } => points,
                _ => unreachable!("predicate admits only score propositions"),
            })
    }

    pub(crate) fn charge_inference(&mut self) {
        self.inference_count += 1;
    }

    /// Means-end reasoning: one put-act option per owned, unused piece, with
    /// a score lookup (charged) and one inference charged per option. Options
    /// with retrieved scores rank first, descending, ties broken by piece id;
    /// options whose score could not be recalled follow in piece-id order.
    /// Options on the engine's skip list are not generated.
    pub fn generate_options(
        &mut self,
        room: Room,
        banned: &BTreeSet<OptionId>,
    ) -> Vec<RankedOption> {
        let candidates: Vec<PieceId> = self
            .owned
            .iter()
            .filter(|&&p| !self.used.contains(&p) && !banned.contains(&OptionId::for_put(p, room)))
            .copied()
            .collect();
        let mut options: Vec<RankedOption> = candidates
            .into_iter()
            .map(|piece| {
                let retrieved = self.retrieve_score(piece);
                self.inference_count += 1;
                RankedOption {
                    option: PutOption::new(self.id, piece, room),
                    retrieved_points: retrieved.found,
                }
            })
            .collect();
        options.sort_by(|a, b| match (a.retrieved_points, b.retrieved_points) {
            (Some(x), Some(y)) => y.cmp(&x).then(a.option.piece.cmp(&b.option.piece)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.option.piece.cmp(&b.option.piece),
        });
        options
    }

    /// Accept-or-reject decision over a received proposal. Rejects with a
    /// counter when a competing option's retrieved score strictly beats the
    /// proposal's; rejects on precondition failure; accepts otherwise —
    /// in particular, an agent that can recall no competing score treats the
    /// proposal as the best option on offer.
    pub fn deliberate(
        &mut self,
        proposal: &PutOption,
        room_full: bool,
        banned: &BTreeSet<OptionId>,
    ) -> Deliberation {
        if room_full || self.used.contains(&proposal.piece) {
            return Deliberation {
                outcome: DeliberationOutcome::RejectPrecondition,
                proposal_points: None,
                proposal_score_steps: 0,
            };
        }
        let lookup = self.retrieve_score(proposal.piece);
        let competing = self.generate_options(proposal.room, banned);
        self.inference_count += 1;
        let best = competing
            .iter()
            .find(|r| r.retrieved_points.is_some())
            .cloned();
        let outcome = match (lookup.found, &best) {
            (Some(p), Some(b)) if b.retrieved_points.unwrap() > p => {
                DeliberationOutcome::RejectWithCounter(b.option)
            }
            (None, Some(b)) => DeliberationOutcome::RejectWithCounter(b.option),
            _ => DeliberationOutcome::AcceptIt,
        };
        Deliberation {
            outcome,
            proposal_points: lookup.found,
            proposal_score_steps: lookup.steps,
        }
    }

    /// Expands an option into communicative acts per the agent's strategy.
    /// An explicit-warrant agent that could not recall the score degrades to
    /// a bare propose act (counted and logged).
    pub fn make_proposal(
        &mut self,
        ranked: &RankedOption,
        addressee: AgentId,
    ) -> Vec<CommunicativeAct> {
        let propose = CommunicativeAct {
            sender: self.id,
            addressee,
            kind: ActKind::Propose {
                option: ranked.option,
            },
        };
        match (self.strategy, ranked.retrieved_points) {
            (Strategy::AllImplicit, _) => vec![propose],
            (Strategy::ExplicitWarrant, Some(points)) => vec![
                CommunicativeAct {
                    sender: self.id,
                    addressee,
                    kind: ActKind::Say {
                        piece: ranked.option.piece,
                        points,
                    },
                },
                propose,
            ],
            (Strategy::ExplicitWarrant, None) => {
                self.warrant_fallbacks += 1;
                log::debug!(
                    "{}: no salient score for {}, proposing without warrant",
                    self.id,
                    ranked.option.piece
                );
                vec![propose]
            }
        }
    }

    /// Updates beliefs from a received act. Says refresh the score in
    /// memory (the salience effect); proposes and counters lay down pending
    /// intention traces; accepts are handled by [`record_acceptance`].
    ///
    /// [`record_acceptance`]: Self::record_acceptance
    pub fn incorporate(&mut self, act: &CommunicativeAct) {
        debug_assert_eq!(act.addressee, self.id, "act not addressed to this agent");
        match &act.kind {
            ActKind::Say { piece, points } => self.memory.store(Proposition::Score {
                piece: *piece,
                points: *points,
            }),
            ActKind::Propose { option } => {
                self.memory.store(Proposition::Intended { option: *option })
            }
            ActKind::Reject {
                counter: Some(counter),
                ..
            } => self
                .memory
                .store(Proposition::Intended { option: *counter }),
            ActKind::Accept { option } => self.record_acceptance(option),
            ActKind::Open | ActKind::Close | ActKind::Reject { counter: None, .. } => {}
        }
    }

    /// Books an accepted option: the intention becomes mutual (another trace)
    /// and the piece is off the table for both sides.
    pub fn record_acceptance(&mut self, option: &PutOption) {
        self.memory.store(Proposition::Intended { option: *option });
        self.used.insert(option.piece);
    }
}
