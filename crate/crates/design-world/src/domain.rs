//! The furniture-placement domain: pieces with point values, put-act options,
//! belief propositions, the jointly negotiated design plan, and the two task
//! scoring rules (Standard and Zero-NonMatching-Beliefs).

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DomainError {
    #[error("invalid world config: {0}")]
    InvalidConfig(String),
    #[error("design plan violation: {0}")]
    PlanViolation(String),
    #[error("warrant ledger does not cover the plan: {0}")]
    LedgerMismatch(String),
}

/// One of the two negotiating agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentId {
    A,
    B,
}

impl AgentId {
    pub fn other(self) -> AgentId {
        match self {
            AgentId::A => AgentId::B,
            AgentId::B => AgentId::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            AgentId::A => 0,
            AgentId::B => 1,
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::A => write!(f, "agent-a"),
            AgentId::B => write!(f, "agent-b"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceId(pub u32);

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece-{}", self.0)
    }
}

/// A piece of furniture. The label is cosmetic; the points are what agents
/// negotiate over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub id: PieceId,
    pub label: String,
    pub points: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Room {
    Room1,
    Room2,
}

impl Room {
    pub const ALL: [Room; 2] = [Room::Room1, Room::Room2];

    pub fn index(self) -> usize {
        match self {
            Room::Room1 => 0,
            Room::Room2 => 1,
        }
    }
}

impl fmt::Display for Room {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Room::Room1 => write!(f, "room-1"),
            Room::Room2 => write!(f, "room-2"),
        }
    }
}

/// Identifies a put-act option. Derived from piece and room so the same
/// option regenerated on a later turn compares equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OptionId(pub u32);

impl OptionId {
    pub fn for_put(piece: PieceId, room: Room) -> OptionId {
        OptionId(piece.0 * 2 + room.index() as u32)
    }
}

impl fmt::Display for OptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "option-{}", self.0)
    }
}

/// A proposal's content: `actor` puts `piece` into `room`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PutOption {
    pub id: OptionId,
    pub actor: AgentId,
    pub piece: PieceId,
    pub room: Room,
}

impl PutOption {
    pub fn new(actor: AgentId, piece: PieceId, room: Room) -> Self {
        PutOption {
            id: OptionId::for_put(piece, room),
            actor,
            piece,
            room,
        }
    }
}

/// A belief atom storable in memory and communicable in messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proposition {
    /// A piece is worth some points. Fixed facts, seeded into both memories.
    Score { piece: PieceId, points: u32 },
    /// An agent holds a piece in its inventory.
    Owns { agent: AgentId, piece: PieceId },
    /// A put-act is intended (pending or mutually agreed).
    Intended { option: PutOption },
    /// A score claim offered in support of a specific option.
    WarrantFor { option: OptionId, points: u32 },
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proposition::Score { piece, points } => write!(f, "score({piece})={points}"),
            Proposition::Owns { agent, piece } => write!(f, "owns({agent},{piece})"),
            Proposition::Intended { option } => write!(f, "intended({})", option.id),
            Proposition::WarrantFor { option, points } => {
                write!(f, "warrant({option})={points}")
            }
        }
    }
}

/// The jointly accepted put-acts, per room, capped by room capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignPlan {
    rooms: [Vec<PutOption>; 2],
    capacity: usize,
}

impl DesignPlan {
    pub fn new(capacity: usize) -> Self {
        DesignPlan {
            rooms: [Vec::new(), Vec::new()],
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn room(&self, room: Room) -> &[PutOption] {
        &self.rooms[room.index()]
    }

    pub fn room_full(&self, room: Room) -> bool {
        self.rooms[room.index()].len() >= self.capacity
    }

    pub fn is_complete(&self) -> bool {
        Room::ALL.iter().all(|&r| self.room_full(r))
    }

    /// The room proposals currently target: room-1 until it fills, then room-2.
    pub fn current_room(&self) -> Option<Room> {
        Room::ALL.iter().copied().find(|&r| !self.room_full(r))
    }

    pub fn options(&self) -> impl Iterator<Item = &PutOption> {
        self.rooms.iter().flatten()
    }

    pub fn contains_piece(&self, piece: PieceId) -> bool {
        self.options().any(|o| o.piece == piece)
    }

    pub fn len(&self) -> usize {
        self.rooms.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn place(&mut self, option: PutOption) -> Result<(), DomainError> {
        if self.room_full(option.room) {
            return Err(DomainError::PlanViolation(format!(
                "{} is already at capacity {}",
                option.room, self.capacity
            )));
        }
        if self.contains_piece(option.piece) {
            return Err(DomainError::PlanViolation(format!(
                "{} is already placed",
                option.piece
            )));
        }
        self.rooms[option.room.index()].push(option);
        Ok(())
    }
}

/// For each accepted option: did both agents hold the matching score belief
/// saliently at acceptance time?
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WarrantLedger {
    entries: BTreeMap<OptionId, bool>,
}

impl WarrantLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, option: OptionId, matched: bool) {
        self.entries.insert(option, matched);
    }

    pub fn matched(&self, option: OptionId) -> Option<bool> {
        self.entries.get(&option).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn all_matched(&self) -> bool {
        self.entries.values().all(|&m| m)
    }
}

/// World-generation knobs. Defaults give dialogues long enough for real
/// deliberation while leaving surplus pieces to compete over.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldConfig {
    pub pieces_per_agent: usize,
    pub score_min: u32,
    pub score_max: u32,
    pub room_capacity: usize,
    pub memory_size: u8,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig {
            pieces_per_agent: 8,
            score_min: 10,
            score_max: 56,
            room_capacity: 4,
            memory_size: 16,
        }
    }
}

impl WorldConfig {
    pub fn validate(&self) -> Result<(), DomainError> {
        if self.pieces_per_agent == 0 {
            return Err(DomainError::InvalidConfig(
                "pieces_per_agent must be > 0".into(),
            ));
        }
        if self.score_min == 0 || self.score_min > self.score_max {
            return Err(DomainError::InvalidConfig(format!(
                "score range [{}, {}] must be positive and ordered",
                self.score_min, self.score_max
            )));
        }
        if self.room_capacity == 0 {
            return Err(DomainError::InvalidConfig(
                "room_capacity must be > 0".into(),
            ));
        }
        if self.pieces_per_agent * 2 < self.room_capacity * 2 {
            return Err(DomainError::InvalidConfig(format!(
                "{} pieces across both agents cannot fill total room capacity {}",
                self.pieces_per_agent * 2,
                self.room_capacity * 2
            )));
        }
        if self.memory_size == 0 {
            return Err(DomainError::InvalidConfig("memory_size must be > 0".into()));
        }
        Ok(())
    }
}

const COLORS: [&str; 8] = [
    "green", "purple", "red", "blue", "yellow", "orange", "pink", "brown",
];
const FURNITURE: [&str; 8] = [
    "rug", "lamp", "couch", "table", "chair", "shelf", "desk", "stool",
];

/// The fixed facts of one experiment run: who owns which pieces and what each
/// piece is worth. Immutable once generated.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pieces: Vec<Piece>,
    inventories: [Vec<PieceId>; 2],
    config: WorldConfig,
}

impl World {
    /// Deterministic world from a seed: disjoint inventories and one score
    /// per piece, labels drawn from a shuffled color/furniture pool.
    pub fn generate(seed: u64, config: &WorldConfig) -> Result<World, DomainError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = config.pieces_per_agent * 2;
        let mut labels: Vec<String> = (0..total)
            .map(|i| {
                let color = COLORS[i % COLORS.len()];
                let noun = FURNITURE[(i / COLORS.len()) % FURNITURE.len()];
                let run = i / (COLORS.len() * FURNITURE.len());
                if run == 0 {
                    format!("{color} {noun}")
                } else {
                    format!("{color} {noun} {}", run + 1)
                }
            })
            .collect();
        labels.shuffle(&mut rng);
        let pieces: Vec<Piece> = labels
            .into_iter()
            .enumerate()
            .map(|(i, label)| Piece {
                id: PieceId(i as u32),
                label,
                points: rng.gen_range(config.score_min..=config.score_max),
            })
            .collect();
        let inventories = [
            pieces[..config.pieces_per_agent]
                .iter()
                .map(|p| p.id)
                .collect(),
            pieces[config.pieces_per_agent..]
                .iter()
                .map(|p| p.id)
                .collect(),
        ];
        Ok(World {
            pieces,
            inventories,
            config: config.clone(),
        })
    }

    /// Builds a world from explicit parts, for tests and tooling.
    pub fn from_parts(
        pieces: Vec<Piece>,
        inventories: [Vec<PieceId>; 2],
        config: WorldConfig,
    ) -> World {
        World {
            pieces,
            inventories,
            config,
        }
    }

    pub fn config(&self) -> &WorldConfig {
        &self.config
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece(&self, id: PieceId) -> &Piece {
        &self.pieces[id.0 as usize]
    }

    pub fn points(&self, id: PieceId) -> u32 {
        self.piece(id).points
    }

    pub fn inventory(&self, agent: AgentId) -> &[PieceId] {
        &self.inventories[agent.index()]
    }

    pub fn owner(&self, piece: PieceId) -> AgentId {
        if self.inventories[0].contains(&piece) {
            AgentId::A
        } else {
            AgentId::B
        }
    }

    /// Standard task: the plan is worth the sum of its pieces' points.
    pub fn standard_raw_score(&self, plan: &DesignPlan) -> u32 {
        plan.options().map(|o| self.points(o.piece)).sum()
    }

    /// Zero-NonMatching-Beliefs task: full standard score if every accepted
    /// option's warrant was matched by both agents, zero otherwise.
    pub fn znmb_raw_score(
        &self,
        plan: &DesignPlan,
        ledger: &WarrantLedger,
    ) -> Result<u32, DomainError> {
        if ledger.len() != plan.len() {
            return Err(DomainError::LedgerMismatch(format!(
                "ledger has {} entries for a plan of {}",
                ledger.len(),
                plan.len()
            )));
        }
        for option in plan.options() {
            if ledger.matched(option.id).is_none() {
                return Err(DomainError::LedgerMismatch(format!(
                    "no ledger entry for {}",
                    option.id
                )));
            }
        }
        if ledger.all_matched() {
            Ok(self.standard_raw_score(plan))
        } else {
            Ok(0)
        }
    }

    /// The best raw score any plan could reach: the top `2 * capacity`
    /// pieces by points. Used as the optimality oracle in tests.
    pub fn best_raw_score(&self) -> u32 {
        let mut points: Vec<u32> = self.pieces.iter().map(|p| p.points).collect();
        points.sort_unstable_by(|a, b| b.cmp(a));
        points.iter().take(self.config.room_capacity * 2).sum()
    }

    /// Human-readable block for experiment logs.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for agent in [AgentId::A, AgentId::B] {
            out.push_str(&format!("{agent} inventory:\n"));
            for id in self.inventory(agent) {
                let p = self.piece(*id);
                out.push_str(&format!("  {} | {} | {} points\n", p.id, p.label, p.points));
            }
        }
        out
    }
}
